//! Morphisms of triples and the induced morphisms of the assembled algebras.
//!
//! Below degree `−1` the induced map is built level by level from the map it
//! induces on `Λ²T`, pushed through the bracket: `f₋ₗ = q′ ∘ Λ²f ∘ s` with `s`
//! a section of `q`. This is well defined exactly when `Λ²f` sends `Ker q`
//! into `Ker q′`.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::dgla::{DgLa, Pipeline};
use crate::exactla::{is_zero_vec, kernel, zero_vec, RatMatrix};
use crate::freegla::WedgeBasis;
use crate::report::{Check, VerificationReport};
use crate::triple::LieLeibnizTriple;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("not a morphism of triples: {0}")]
    InvalidMorphism(String),
    #[error("hierarchies were built to different depths ({0} and {1})")]
    DepthMismatch(usize, usize),
    #[error("kernel not preserved in degree {degree}: {witness}")]
    KernelNotPreserved { degree: i64, witness: String },
    #[error("degree +1 component is not well defined: {0}")]
    Phi1IllDefined(String),
}

/// `phi: g → g′` and `chi: V → V′` as matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMorphism {
    pub phi: RatMatrix,
    pub chi: RatMatrix,
}

impl TripleMorphism {
    pub fn identity(t: &LieLeibnizTriple) -> Self {
        TripleMorphism { phi: RatMatrix::identity(t.dim_g()), chi: RatMatrix::identity(t.dim_v) }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &TripleMorphism) -> Self {
        TripleMorphism { phi: self.phi.mul(&first.phi), chi: self.chi.mul(&first.chi) }
    }
}

pub fn validate_morphism(src: &LieLeibnizTriple, dst: &LieLeibnizTriple, m: &TripleMorphism) -> VerificationReport {
    let mut report = VerificationReport::new();
    let shapes_ok = (m.phi.rows(), m.phi.cols()) == (dst.dim_g(), src.dim_g())
        && (m.chi.rows(), m.chi.cols()) == (dst.dim_v, src.dim_v);
    report.push(Check::single("morphism shapes", shapes_ok, || {
        format!("phi {}x{}, chi {}x{}", m.phi.rows(), m.phi.cols(), m.chi.rows(), m.chi.cols())
    }));
    if !shapes_ok {
        return report;
    }
    let (ng, n) = (src.dim_g(), src.dim_v);

    let mut lie = Check::new("phi preserves brackets");
    for a in 0..ng {
        for b in 0..ng {
            let lhs = m.phi.mul_vec(src.g.bracket_basis(a, b));
            let rhs = dst.g.bracket(&m.phi.column(a), &m.phi.column(b));
            lie.record(lhs == rhs, || format!("(a, b) = ({a}, {b})"));
        }
    }
    report.push(lie);

    let mut leib = Check::new("chi preserves products");
    let mut action = Check::new("chi intertwines actions");
    for x in 0..n {
        for y in 0..n {
            let lhs = m.chi.mul_vec(&src.leib[x][y]);
            let rhs = dst.product(&m.chi.column(x), &m.chi.column(y));
            leib.record(lhs == rhs, || format!("(x, y) = ({x}, {y})"));
        }
        for a in 0..ng {
            let lhs = m.chi.mul_vec(&src.rho.mats[a].column(x));
            let rhs = dst.rho.of(&m.phi.column(a)).mul_vec(&m.chi.column(x));
            action.record(lhs == rhs, || format!("a = {a}, x = {x}"));
        }
    }
    report.push(leib);
    report.push(action);

    let lhs = dst.theta.mul(&m.chi);
    let rhs = m.phi.mul(&src.theta);
    report.push(Check::single("embedding tensors intertwined", lhs == rhs, || format!("{lhs} vs {rhs}")));
    report
}

/// Per-degree components from `−depth` to `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DglaMorphism {
    pub depth: usize,
    pub components: BTreeMap<i64, RatMatrix>,
}

impl DglaMorphism {
    pub fn identity(d: &DgLa) -> Self {
        let components = d.degrees().map(|deg| (deg, RatMatrix::identity(d.dim(deg)))).collect();
        DglaMorphism { depth: d.depth, components }
    }

    pub fn component(&self, deg: i64) -> &RatMatrix {
        &self.components[&deg]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &DglaMorphism) -> Self {
        let components = self.components.iter().map(|(&d, m)| (d, m.mul(first.component(d)))).collect();
        DglaMorphism { depth: self.depth, components }
    }
}

/// Matrix of `x∧y ↦ f(x)∧f(y)` between wedge bases of one total level.
fn wedge_map(src: &WedgeBasis, dst: &WedgeBasis, f: impl Fn(usize) -> RatMatrix) -> RatMatrix {
    let cache: BTreeMap<usize, RatMatrix> =
        src.monomials.iter().flat_map(|m| m.iter().map(|e| e.0)).map(|l| (l, f(l))).collect();
    let cols = src
        .monomials
        .iter()
        .map(|m| {
            let (x, y) = (m[0], m[1]);
            let fx = cache[&x.0].column(x.1);
            let fy = cache[&y.0].column(y.1);
            let mut acc = zero_vec(dst.dim());
            for (s, cs) in fx.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (t, ct) in fy.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    dst.accumulate(&mut acc, &(cs * ct), &[(x.0, s), (y.0, t)]);
                }
            }
            acc
        })
        .collect();
    RatMatrix::from_columns(cols, dst.dim())
}

/// The induced morphism. Both triples must be stringent.
pub fn induce(src: &Pipeline, dst: &Pipeline, m: &TripleMorphism) -> Result<DglaMorphism, FunctorError> {
    let (s, t) = (&src.hierarchy.triple, &dst.hierarchy.triple);
    let v = validate_morphism(s, t, m);
    if let Some(c) = v.failures().next() {
        return Err(FunctorError::InvalidMorphism(format!("{} ({})", c.name, c.witness.clone().unwrap_or_default())));
    }
    let (hs, ht) = (&src.hierarchy, &dst.hierarchy);
    if hs.depth != ht.depth {
        return Err(FunctorError::DepthMismatch(hs.depth, ht.depth));
    }
    for (tr, which) in [(s, "source"), (t, "target")] {
        if !tr.flags.is_stringent {
            return Err(FunctorError::KernelNotPreserved {
                degree: -2,
                witness: format!("{which} triple {} is not stringent", tr.name),
            });
        }
    }

    let mut lower: Vec<RatMatrix> = vec![m.chi.clone()];
    for level in 2..=hs.depth {
        let (w2s, q2s) = hs.q2_matrix(level);
        let (w2t, q2t) = ht.q2_matrix(level);
        let lifted = wedge_map(&w2s, &w2t, |l| lower[l - 1].clone());
        let pushed = q2t.mul(&lifted);
        for k in kernel(&q2s).basis_vectors() {
            let out = pushed.mul_vec(&k);
            if !is_zero_vec(&out) {
                return Err(FunctorError::KernelNotPreserved {
                    degree: -(level as i64),
                    witness: format!("kernel vector {k:?} maps to {out:?}"),
                });
            }
        }
        let section = q2s.right_inverse().expect("bracket onto each level is surjective");
        lower.push(pushed.mul(&section));
    }

    let top = induce_top(src, dst, m)?;
    let mut components = BTreeMap::new();
    for (l, f) in lower.into_iter().enumerate() {
        components.insert(-(l as i64) - 1, f);
    }
    components.insert(0, m.phi.clone());
    components.insert(1, top);
    Ok(DglaMorphism { depth: hs.depth, components })
}

/// `Θ_{a₁…aₘ} ↦ Θ′_{φ(a₁)…φ(aₘ)}` in word coordinates, with a relation certificate.
fn induce_top(src: &Pipeline, dst: &Pipeline, m: &TripleMorphism) -> Result<RatMatrix, FunctorError> {
    let (s, t) = (&src.hierarchy.triple, &dst.hierarchy.triple);
    let (rs, rt) = (&src.tower.r_theta, &dst.tower.r_theta);
    let cols = rs
        .words
        .iter()
        .map(|w| {
            let xi = w.iter().rev().fold(t.theta.clone(), |xi, &a| t.eta(&m.phi.column(a), &xi));
            rt.coords(xi.data()).ok_or_else(|| FunctorError::Phi1IllDefined(format!("word {w:?} leaves R_Θ′")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f = RatMatrix::from_columns(cols, rt.dim());
    for a in 0..s.dim_g() {
        let phi_a = m.phi.column(a);
        let mut act = RatMatrix::zeros(rt.dim(), rt.dim());
        for (b, c) in phi_a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            act = act.add(&rt.actions[b].scale(c));
        }
        let lhs = f.mul(&rs.actions[a]);
        let rhs = act.mul(&f);
        if lhs != rhs {
            return Err(FunctorError::Phi1IllDefined(format!("relation through generator {a} not preserved")));
        }
    }
    Ok(f)
}

/// `∂′f = f∂` and `f⟦x, y⟧ = ⟦fx, fy⟧′` on basis elements within truncation.
pub fn check_commutation(src: &DgLa, dst: &DgLa, f: &DglaMorphism) -> VerificationReport {
    let mut report = VerificationReport::new();
    let mut diff = Check::new("morphism commutes with ∂");
    for d in src.degrees() {
        if d >= 1 {
            continue;
        }
        let lhs = dst.differential(d).mul(f.component(d));
        let rhs = f.component(d + 1).mul(src.differential(d));
        diff.record(lhs == rhs, || format!("leaving degree {d}"));
    }
    report.push(diff);

    let mut br = Check::new("morphism preserves brackets");
    for dx in src.degrees() {
        for dy in src.degrees() {
            let out = dx + dy;
            if out > 1 {
                continue;
            }
            for i in 0..src.dim(dx) {
                for j in 0..src.dim(dy) {
                    let Some(v) = src.bracket_basis(dx, i, dy, j) else {
                        br.skip();
                        continue;
                    };
                    let lhs = f.component(out).mul_vec(v);
                    let fx = f.component(dx).column(i);
                    let fy = f.component(dy).column(j);
                    let rhs = dst.bracket(dx, &fx, dy, &fy).expect("same truncation");
                    br.record(lhs == rhs, || format!("x = ({dx}, {i}), y = ({dy}, {j})"));
                }
            }
        }
    }
    report.push(br);
    report
}

/// One morphism between two built pipelines.
#[derive(Clone, Copy, Debug)]
pub struct MorphismSample<'a> {
    pub src: &'a Pipeline,
    pub dst: &'a Pipeline,
    pub morphism: &'a TripleMorphism,
}

/// Identity, composition and restriction laws.
///
/// `compositions` lists index pairs `(i, j)` with `samples[i].dst` equal to
/// `samples[j].src`; the law checked is `G(mⱼ ∘ mᵢ) = G(mⱼ) ∘ G(mᵢ)`.
pub fn functor_laws(samples: &[MorphismSample<'_>], compositions: &[(usize, usize)]) -> VerificationReport {
    let mut ident = Check::new("G(id) = id");
    let mut restrict = Check::new("G(m) restricts to (φ, χ)");
    let mut comm = Check::new("G(m) commutes with structure");
    let mut comp = Check::new("G(m₂∘m₁) = G(m₂)∘G(m₁)");
    let mut induced = Vec::with_capacity(samples.len());
    for (k, s) in samples.iter().enumerate() {
        for p in [s.src, s.dst] {
            let id = induce(p, p, &TripleMorphism::identity(&p.hierarchy.triple));
            let ok = matches!(&id, Ok(g) if *g == DglaMorphism::identity(&p.dgla));
            ident.record(ok, || format!("{}: {id:?}", p.dgla.name));
        }
        let g = induce(s.src, s.dst, s.morphism);
        match &g {
            Ok(g) => {
                let ok = *g.component(0) == s.morphism.phi && *g.component(-1) == s.morphism.chi;
                restrict.record(ok, || format!("sample {k}"));
                let r = check_commutation(&s.src.dgla, &s.dst.dgla, g);
                comm.record(r.ok(), || format!("sample {k}: {r}"));
            }
            Err(e) => {
                restrict.record(false, || format!("sample {k}: {e}"));
            }
        }
        induced.push(g);
    }
    for &(i, j) in compositions {
        let (a, b) = (&samples[i], &samples[j]);
        let whole = induce(a.src, b.dst, &b.morphism.after(a.morphism));
        let ok = match (&whole, &induced[i], &induced[j]) {
            (Ok(w), Ok(gi), Ok(gj)) => *w == gj.after(gi),
            _ => false,
        };
        comp.record(ok, || format!("samples ({i}, {j})"));
    }
    let mut report = VerificationReport::new();
    for c in [ident, restrict, comm, comp] {
        report.push(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactla::{frac, rat};
    use crate::hierarchy::BuildOptions;

    fn run(t: &LieLeibnizTriple, depth: usize) -> Pipeline {
        Pipeline::run(t, BuildOptions::depth(depth)).unwrap()
    }

    #[test]
    fn heisenberg_scaling_squares_on_level_two() {
        let p = run(&catalog::heisenberg_leibniz(), 3);
        let m = catalog::heisenberg_scaling(rat(2));
        assert!(validate_morphism(&p.hierarchy.triple, &p.hierarchy.triple, &m).ok());
        let g = induce(&p, &p, &m).unwrap();
        assert_eq!(*g.component(-2), RatMatrix::from_i64(&[&[4]]));
        assert_eq!(*g.component(1), RatMatrix::from_i64(&[&[1]]));
        assert!(check_commutation(&p.dgla, &p.dgla, &g).ok());
    }

    #[test]
    fn non_stringent_target_is_rejected() {
        let a = run(&catalog::abelian(), 3);
        let b = run(&catalog::sl2_fundamental_nilpotent(), 3);
        let m = TripleMorphism { phi: RatMatrix::zeros(3, 1), chi: RatMatrix::zeros(2, 1) };
        assert!(validate_morphism(&a.hierarchy.triple, &b.hierarchy.triple, &m).ok());
        assert!(matches!(induce(&a, &b, &m), Err(FunctorError::KernelNotPreserved { .. })));
    }

    #[test]
    fn invalid_morphism_is_rejected() {
        let p = run(&catalog::heisenberg_leibniz(), 3);
        let m = TripleMorphism { phi: RatMatrix::from_i64(&[&[2]]), chi: RatMatrix::identity(2) };
        assert!(!validate_morphism(&p.hierarchy.triple, &p.hierarchy.triple, &m).ok());
        assert!(matches!(induce(&p, &p, &m), Err(FunctorError::InvalidMorphism(_))));
    }

    #[test]
    fn laws_on_catalog_samples() {
        let h = run(&catalog::heisenberg_leibniz(), 4);
        let f = run(&catalog::filiform_leibniz3(), 4);
        let aff = run(&catalog::crossed_module_aff1(), 4);
        let two = catalog::heisenberg_scaling(rat(2));
        let third = catalog::heisenberg_scaling(frac(-1, 3));
        let fil = catalog::filiform_scaling(rat(3));
        let proj = catalog::filiform_to_heisenberg();
        let auto = catalog::aff1_automorphism();
        let samples = [
            MorphismSample { src: &h, dst: &h, morphism: &two },
            MorphismSample { src: &h, dst: &h, morphism: &third },
            MorphismSample { src: &f, dst: &f, morphism: &fil },
            MorphismSample { src: &f, dst: &h, morphism: &proj },
            MorphismSample { src: &aff, dst: &aff, morphism: &auto },
        ];
        let r = functor_laws(&samples, &[(0, 1), (1, 0), (2, 3), (3, 0), (4, 4)]);
        assert!(r.ok(), "{r}");
        assert_eq!(r.get("G(m₂∘m₁) = G(m₂)∘G(m₁)").unwrap().passed, 5);
    }

    #[test]
    fn scaling_composes_to_product() {
        let h = run(&catalog::heisenberg_leibniz(), 3);
        let a = induce(&h, &h, &catalog::heisenberg_scaling(rat(2))).unwrap();
        let b = induce(&h, &h, &catalog::heisenberg_scaling(rat(5))).unwrap();
        let ab = induce(&h, &h, &catalog::heisenberg_scaling(rat(10))).unwrap();
        assert_eq!(b.after(&a), ab);
    }
}
