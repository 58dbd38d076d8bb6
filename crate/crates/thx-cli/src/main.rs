use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use thx_core::catalog;
use thx_core::dgla::{DgLa, Pipeline};
use thx_core::functor::{check_commutation, induce, FunctorError};
use thx_core::hierarchy::BuildOptions;
use thx_core::io::{
    is_hierarchy, to_json, HierarchyFile, IoError, MorphismFile, MorphismOutput, ReportSummary, TripleFile,
};
use thx_core::report::VerificationReport;
use thx_core::triple::LieLeibnizTriple;

#[derive(Parser)]
#[command(name = "thx", version, about = "Tensor hierarchies of Lie-Leibniz triples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every constraint of a triple file.
    Validate { path: PathBuf },
    /// Print the classification flags and the dimensions of I, Z, Ker Θ and R_Θ.
    Classify { path: PathBuf },
    /// Run the full pipeline and write the hierarchy file.
    Build {
        path: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the check matrix for a triple or a hierarchy file.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long)]
        homology: bool,
    },
    /// Induce the morphism of hierarchies from a morphism of triples.
    Morphism {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in example triples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
    Emit { name: String, path: PathBuf },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("constraint violation: {0}")]
    Constraint(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pipeline error: {0}")]
    Pipeline(String),
    #[error("verification failed")]
    Verify,
    #[error("{0}")]
    KernelNotPreserved(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Constraint(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Pipeline(_) => 4,
            CliError::Verify => 5,
            CliError::KernelNotPreserved(_) => 6,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        if e.is_parse() {
            CliError::Parse(e.to_string())
        } else {
            CliError::Constraint(e.to_string())
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Pipeline(format!("{}: {e}", path.display())))
}

fn load_triple(path: &Path) -> Result<LieLeibnizTriple> {
    let text = read(path)?;
    let t = TripleFile::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(t.to_triple()?)
}

fn run_pipeline(t: &LieLeibnizTriple, max_degree: usize) -> Result<Pipeline> {
    Pipeline::run(t, BuildOptions::depth(max_degree)).map_err(|e| CliError::Pipeline(format!("{}: {e}", t.name)))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(path: &Path) -> Result<()> {
    let t = load_triple(path)?;
    let mut r = t.constraint_report();
    r.extend(t.classification_report());
    print!("{r}");
    if !r.ok() {
        return Err(CliError::Constraint(format!("{} failing checks", r.total_failed())));
    }
    println!("{}: valid Lie-Leibniz triple", t.name);
    Ok(())
}

fn classify(path: &Path) -> Result<()> {
    let t = load_triple(path)?;
    let f = t.flags;
    println!("triple      {}", t.name);
    println!("lie_V       {}", yes_no(f.is_lie_v));
    println!("strict      {}", yes_no(f.is_strict));
    println!("semistrict  {}", yes_no(f.is_semistrict));
    println!("stringent   {}", yes_no(f.is_stringent));
    println!("crossed     {}", yes_no(f.is_crossed_module));
    println!("dim I       {}", t.ideal_of_squares().dim());
    println!("dim Z       {}", t.center().dim());
    println!("dim Ker Θ   {}", t.kernel_theta().dim());
    println!("dim R_Θ     {}", t.r_theta().dim());
    Ok(())
}

fn emit(out: Option<&Path>, text: &str, summary: impl FnOnce() -> String) -> Result<()> {
    match out {
        Some(p) => {
            write(p, text)?;
            print!("{}", summary());
        }
        None => {
            print!("{text}");
            eprint!("{}", summary());
        }
    }
    Ok(())
}

fn build(path: &Path, max_degree: usize, out: Option<&Path>) -> Result<()> {
    let t = load_triple(path)?;
    let p = run_pipeline(&t, max_degree)?;
    let report = p.verify();
    let hom = p.dgla.homology();
    let file = HierarchyFile::from_dgla(&p.dgla, Some(ReportSummary::new(&report, hom.rows)));
    emit(out, &to_json(&file), || {
        let dims: Vec<String> = p.dgla.degrees().map(|d| format!("{d}:{}", p.dgla.dim(d))).collect();
        format!(
            "{}: dims {} | {} checks, {} failed\n",
            t.name,
            dims.join(" "),
            report.total_checked(),
            report.total_failed()
        )
    })
}

fn print_homology(d: &DgLa, stringent: Option<bool>) {
    println!();
    println!("homology of {}", d.name);
    println!("{}", d.homology());
    if stringent == Some(false) {
        println!("(triple is not stringent; the resolution statement does not apply)");
    }
}

fn verify(path: &Path, max_degree: usize, homology: bool) -> Result<()> {
    let text = read(path)?;
    let (report, dgla, stringent): (VerificationReport, DgLa, Option<bool>) = if is_hierarchy(&text) {
        let d = HierarchyFile::parse(&text)
            .and_then(|f| f.to_dgla())
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        (d.verify_axioms(), d, None)
    } else {
        let t = load_triple(path)?;
        let p = run_pipeline(&t, max_degree)?;
        (p.verify(), p.dgla, Some(t.flags.is_stringent))
    };
    println!("{} at depth {}", dgla.name, dgla.depth);
    print!("{report}");
    println!(
        "{} checks, {} failed, {} out of range",
        report.total_checked(),
        report.total_failed(),
        report.total_skipped()
    );
    if homology {
        print_homology(&dgla, stringent);
    }
    if report.ok() {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}

fn morphism(src: &Path, dst: &Path, morph: &Path, max_degree: usize, out: Option<&Path>) -> Result<()> {
    let (s, t) = (load_triple(src)?, load_triple(dst)?);
    let text = read(morph)?;
    let m = MorphismFile::parse(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", morph.display())))?
        .to_morphism(&s, &t)?;
    let (ps, pt) = (run_pipeline(&s, max_degree)?, run_pipeline(&t, max_degree)?);
    let f = induce(&ps, &pt, &m).map_err(|e| match e {
        FunctorError::KernelNotPreserved { .. } => CliError::KernelNotPreserved(e.to_string()),
        FunctorError::InvalidMorphism(_) => CliError::Constraint(e.to_string()),
        _ => CliError::Pipeline(e.to_string()),
    })?;
    let report = check_commutation(&ps.dgla, &pt.dgla, &f);
    let file = MorphismOutput::new(&ps.dgla, &pt.dgla, &f, &report);
    emit(out, &to_json(&file), || format!("{} → {}\n{report}", s.name, t.name))?;
    if report.ok() {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}

fn catalog_file(name: &str) -> Result<TripleFile> {
    let t = catalog::by_name(name).ok_or_else(|| {
        CliError::Parse(format!("unknown catalog triple {name:?}; known: {}", catalog::NAMES.join(", ")))
    })?;
    Ok(TripleFile::from_triple(&t, catalog::description(name)))
}

fn run_catalog(action: &CatalogAction) -> Result<()> {
    match action {
        CatalogAction::List => {
            for name in catalog::NAMES {
                println!("{name:<28} {}", catalog::description(name).unwrap_or_default());
            }
        }
        CatalogAction::Show { name } => print!("{}", to_json(&catalog_file(name)?)),
        CatalogAction::Emit { name, path } => write(path, &to_json(&catalog_file(name)?))?,
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("THX_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Parse(format!("THX_THREADS must be a positive integer, found {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Pipeline(e.to_string()))
}

fn dispatch(cli: &Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Validate { path } => validate(path),
        Command::Classify { path } => classify(path),
        Command::Build { path, max_degree, out } => build(path, *max_degree, out.as_deref()),
        Command::Verify { path, max_degree, homology } => verify(path, *max_degree, *homology),
        Command::Morphism { source, target, morphism: m, max_degree, out } => {
            morphism(source, target, m, *max_degree, out.as_deref())
        }
        Command::Catalog { action } => run_catalog(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thx: {e}");
            ExitCode::from(e.code())
        }
    }
}
