//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use thx_core::catalog;
use thx_core::dgla::{three_term_oracle, Pipeline};
use thx_core::exactla::{frac, rat, Subspace};
use thx_core::freegla::{bracketing_span_dims, FreeAlgebra};
use thx_core::functor::{functor_laws, induce, MorphismSample};
use thx_core::hierarchy::BuildOptions;
use thx_core::io::{to_json, TripleFile};
use thx_core::triple::LieLeibnizTriple;

/// Comparisons are exact rational or integer equalities; no failing check is tolerated.
const ALLOWED_FAILURES: usize = 0;
const AXIOM_DEPTH: usize = 4;
const AXIOM_BUDGET: Duration = Duration::from_secs(60);
const COLLAPSE_DEPTH: usize = 6;
const FREE_EXACT_DIM: usize = 3;
const FREE_EXACT_DEPTH: usize = 6;
const HIERARCHY_DEPTH: usize = 6;
const MU_LOWEST_DEGREE: i64 = -4;
const ORACLE_DEPTH: usize = 5;
const DETERMINISM_DEPTH: &str = "5";
const THREAD_SETTINGS: [Option<&str>; 4] = [None, Some("1"), Some("2"), Some("8")];

type Criterion = (&'static str, fn() -> Result<Outcome, String>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(t: &LieLeibnizTriple, depth: usize) -> Result<Pipeline, String> {
    Pipeline::run(t, BuildOptions::depth(depth)).map_err(|e| format!("{}: {e}", t.name))
}

fn axioms() -> Result<Outcome, String> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for t in catalog::all() {
        let start = Instant::now();
        let r = run(&t, AXIOM_DEPTH)?.dgla.verify_axioms();
        let took = start.elapsed();
        checked += r.total_checked();
        for c in r.failures() {
            bad.push(format!(
                "{}: {} ({} failed, witness {})",
                t.name,
                c.name,
                c.failed,
                c.witness.as_deref().unwrap_or("-")
            ));
        }
        if took > AXIOM_BUDGET {
            bad.push(format!("{}: {took:?} over budget", t.name));
        }
    }
    Ok(if bad.len() > ALLOWED_FAILURES {
        outcome(false, bad.join("; "))
    } else {
        outcome(true, format!("{} triples, {checked} checks", catalog::NAMES.len()))
    })
}

fn collapse() -> Result<Outcome, String> {
    let mut names = Vec::new();
    for t in catalog::all().into_iter().filter(|t| t.flags.is_lie_v) {
        let p = run(&t, COLLAPSE_DEPTH)?;
        let low: Vec<usize> = (2..=COLLAPSE_DEPTH as i64).map(|i| p.dgla.dim(-i)).collect();
        if low.iter().any(|&d| d != 0) {
            return Ok(outcome(false, format!("{}: dims below −1 are {low:?}", t.name)));
        }
        let oracle = three_term_oracle(&t, COLLAPSE_DEPTH);
        if let Some(diff) = p.dgla.first_difference(&oracle) {
            return Ok(outcome(false, format!("{}: differs from the three-term algebra at {diff}", t.name)));
        }
        names.push(t.name);
    }
    Ok(outcome(!names.is_empty(), format!("{} match the three-term algebra", names.join(", "))))
}

fn non_collapse() -> Result<Outcome, String> {
    let t = catalog::heisenberg_leibniz();
    let p = run(&t, AXIOM_DEPTH)?;
    let d = p.dgla.differential(-2);
    let image = Subspace::span(t.dim_v, d.columns());
    let squares = t.ideal_of_squares();
    let ok = p.dgla.dim(-2) == 1 && d.rank() == d.cols() && image == squares && squares.dim() == 1;
    Ok(outcome(ok, format!("dim T₋₂ = {}, rank ∂₋₁ = {}, dim I = {}", p.dgla.dim(-2), d.rank(), squares.dim())))
}

fn exactness() -> Result<Outcome, String> {
    let mut free_levels = 0;
    for n in 1..=FREE_EXACT_DIM {
        let f = FreeAlgebra::build(n, vec![], FREE_EXACT_DEPTH).map_err(|e| e.to_string())?;
        for level in 2..=FREE_EXACT_DEPTH {
            let r = f.exactness(level);
            if !r.exact() {
                return Ok(outcome(false, format!("free, dim V = {n}: {r:?}")));
            }
            free_levels += 1;
        }
    }
    let mut built = 0;
    for t in catalog::all() {
        let p = run(&t, HIERARCHY_DEPTH)?;
        for level in 3..=HIERARCHY_DEPTH {
            let r = p.hierarchy.exactness_at(level);
            if !r.exact() {
                return Ok(outcome(false, format!("{} at level {level}: {r:?}", t.name)));
            }
            built += 1;
        }
    }
    Ok(outcome(true, format!("{free_levels} free sequences, {built} hierarchy sequences")))
}

fn mu_certificates() -> Result<Outcome, String> {
    let depth = (1 - MU_LOWEST_DEGREE) as usize;
    let mut count = 0;
    for t in catalog::all() {
        let p = run(&t, depth)?;
        let r = p.mu.verify(&p.tower);
        if !r.ok() {
            return Ok(outcome(false, format!("{}:\n{r}", t.name)));
        }
        for deg in MU_LOWEST_DEGREE..=0 {
            let Some(l) = p.mu.level(deg) else {
                return Ok(outcome(false, format!("{}: no μ at degree {deg}", t.name)));
            };
            let seed = l.module.combine(&l.mu.column(0));
            let d = p.tower.out_of(deg - 1);
            if seed != d.data() {
                return Ok(outcome(false, format!("{}: μ(Θ) ≠ ∂ at degree {deg}", t.name)));
            }
            count += 1;
        }
    }
    Ok(outcome(true, format!("{count} maps, degrees {MU_LOWEST_DEGREE}..=0")))
}

fn functor() -> Result<Outcome, String> {
    let h = run(&catalog::heisenberg_leibniz(), AXIOM_DEPTH)?;
    let f = run(&catalog::filiform_leibniz3(), AXIOM_DEPTH)?;
    let a = run(&catalog::crossed_module_aff1(), AXIOM_DEPTH)?;
    let (two, third) = (catalog::heisenberg_scaling(rat(2)), catalog::heisenberg_scaling(frac(1, 3)));
    let fil = catalog::filiform_scaling(rat(-3));
    let proj = catalog::filiform_to_heisenberg();
    let aut = catalog::aff1_automorphism();
    let samples = [
        MorphismSample { src: &h, dst: &h, morphism: &two },
        MorphismSample { src: &h, dst: &h, morphism: &third },
        MorphismSample { src: &f, dst: &f, morphism: &fil },
        MorphismSample { src: &f, dst: &h, morphism: &proj },
        MorphismSample { src: &a, dst: &a, morphism: &aut },
    ];
    let r = functor_laws(&samples, &[(0, 1), (1, 0), (2, 3), (3, 0), (4, 4)]);
    if !r.ok() {
        return Ok(outcome(false, r.to_string()));
    }
    let g = |l| induce(&h, &h, &catalog::heisenberg_scaling(l)).map_err(|e| e.to_string());
    let scaled = g(rat(2))?.after(&g(rat(5))?) == g(rat(10))?;
    Ok(outcome(scaled, format!("{} samples, {} law checks, λ-scalings compose", samples.len(), r.total_checked())))
}

fn free_oracle() -> Result<Outcome, String> {
    let mut seen = Vec::new();
    for n in 1..=3 {
        let built = FreeAlgebra::build(n, vec![], ORACLE_DEPTH).map_err(|e| e.to_string())?.dims();
        let brute = bracketing_span_dims(n, ORACLE_DEPTH);
        if built != brute {
            return Ok(outcome(false, format!("dim V = {n}: built {built:?}, all bracketings {brute:?}")));
        }
        seen.push(format!("{n}: {built:?}"));
    }
    let pinned = bracketing_span_dims(2, 3) == [2, 3, 2];
    Ok(outcome(pinned, seen.join(", ")))
}

fn determinism() -> Result<Outcome, String> {
    let dir = std::env::temp_dir().join(format!("thx-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for name in ["heisenberg_leibniz", "sl2_fundamental_nilpotent", "filiform_leibniz3"] {
        let t = catalog::by_name(name).expect("catalog name");
        let src = dir.join(format!("{name}.json"));
        fs::write(&src, to_json(&TripleFile::from_triple(&t, None))).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for _round in 0..2 {
            for threads in THREAD_SETTINGS {
                let mut cmd = Command::new(env!("CARGO_BIN_EXE_thx"));
                cmd.args(["build", src.to_str().unwrap(), "--max-degree", DETERMINISM_DEPTH]).env_remove("THX_THREADS");
                if let Some(n) = threads {
                    cmd.env("THX_THREADS", n);
                }
                let out = cmd.output().map_err(|e| e.to_string())?;
                if !out.status.success() {
                    return Ok(outcome(false, format!("{name}: build exited with {:?}", out.status.code())));
                }
                outputs.push(out.stdout);
            }
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Ok(outcome(false, format!("{name}: outputs differ")));
        }
        sizes.push(format!("{name} {} bytes", outputs[0].len()));
    }
    let _ = fs::remove_dir_all(&dir);
    Ok(outcome(true, format!("2 runs × {} thread settings: {}", THREAD_SETTINGS.len(), sizes.join(", "))))
}

fn homology() -> Result<Outcome, String> {
    let mut lines = Vec::new();
    let mut consistent = true;
    for t in catalog::all().into_iter().filter(|t| t.flags.is_stringent) {
        let h = run(&t, HIERARCHY_DEPTH)?.dgla.homology();
        consistent &= h.consistent();
        let h2 = h.row(-2).map_or(0, |r| r.homology);
        let status = if h.resolves() { "holds" } else { "fails" };
        lines.push(format!("{}: H₋₂ = 0: {}, resolution {status}", t.name, if h2 == 0 { "yes" } else { "no" }));
    }
    Ok(outcome(consistent, lines.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("dgLa axioms on the catalog at depth 4", axioms),
        ("Lie-valued triples collapse to the three-term algebra", collapse),
        ("heisenberg_leibniz does not collapse", non_collapse),
        ("exactness of free and hierarchy sequences", exactness),
        ("μ certificates to degree −4", mu_certificates),
        ("functor laws", functor),
        ("free levels against all bracketings", free_oracle),
        ("build output is byte-deterministic", determinism),
        ("homology and resolution status (report only)", homology),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {title} ({:.1?}): {}", i + 1, start.elapsed(), o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
