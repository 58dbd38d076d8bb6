//! The graded Lie algebra `T = F/K` attached to a Lie-Leibniz triple.
//!
//! `K₋₂` is the largest `g`-submodule of the kernel of the symmetric bracket
//! inside `F₋₂ ≅ S²V`; below that, `K` is the ideal generated by `K₋₂`.
//! The bracket on `T` is twice the projected free bracket at every level, so
//! that `⟦x, y⟧` on `T₋₁` matches `2·p(x ⊙ y)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactla::{
    axpy, frac, is_zero_vec, kernel, quotient, rat, sub_vec, unit_vec, zero_vec, LinAlgError, QuotientData, Rat,
    RatMatrix, Subspace,
};
use crate::freegla::{
    bilinear_matrix, graded_bracket, koszul, unshuffle_matrix, wedge2, wedge3, BilinearValue, Elem, ExactnessRanks,
    FreeAlgebra, FreeError, WedgeBasis,
};
use crate::report::{Check, VerificationReport};
use crate::triple::{largest_invariant_subspace, GAction, LieLeibnizTriple, TripleError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("depth must be at least 2, got {0}")]
    DepthTooSmall(usize),
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error("ideal slice at level {0} is not a g-submodule")]
    ActionLeak(usize),
    #[error("exactness fails at level {level}: rank deficit {deficit}")]
    ExactnessFailure { level: usize, deficit: i64 },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Triple(#[from] TripleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub depth: usize,
    /// Emit zero levels below `−1` for Lie-valued triples without tensor work.
    pub short_circuit: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { depth: 6, short_circuit: false }
    }
}

impl BuildOptions {
    pub fn depth(depth: usize) -> Self {
        BuildOptions { depth, ..Self::default() }
    }
}

/// Data kept from the free-algebra construction of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelConstruction {
    pub free_dim: usize,
    /// `K` in coordinates of the free level.
    pub kernel: Subspace,
    pub quotient: QuotientData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyLevel {
    pub level: usize,
    pub dim: usize,
    /// Action of each `g` basis element on `T₋ₗ`.
    pub action: Vec<RatMatrix>,
    pub construction: Option<LevelConstruction>,
    pub labels: Vec<String>,
}

type Table = Vec<Vec<Vec<Rat>>>;

#[derive(Clone, Debug)]
pub struct Hierarchy {
    pub triple: LieLeibnizTriple,
    pub depth: usize,
    pub levels: Vec<HierarchyLevel>,
    pub free: Option<FreeAlgebra>,
    brackets: BTreeMap<(usize, usize), Table>,
    /// Ranks of `Λ³T → Λ²T → T` at levels `3..=depth`.
    pub exactness: Vec<ExactnessRanks>,
}

fn word_label(n: usize, level: usize, index: usize) -> String {
    let mut letters = Vec::with_capacity(level);
    let mut x = index;
    for _ in 0..level {
        letters.push(x % n);
        x /= n;
    }
    letters.reverse();
    let body: Vec<String> = letters.iter().map(|l| format!("e{l}")).collect();
    format!("[{}]", body.join(" "))
}

impl Hierarchy {
    pub fn build(triple: &LieLeibnizTriple, opts: BuildOptions) -> Result<Self, HierarchyError> {
        let depth = opts.depth;
        if depth < 2 {
            return Err(HierarchyError::DepthTooSmall(depth));
        }
        let n = triple.dim_v;
        let ng = triple.dim_g();
        let gens = triple.rho.mats.clone();
        let mut levels = vec![HierarchyLevel {
            level: 1,
            dim: n,
            action: gens.clone(),
            construction: Some(LevelConstruction {
                free_dim: n,
                kernel: Subspace::zero(n),
                quotient: quotient(n, &Subspace::zero(n))?,
            }),
            labels: (0..n).map(|i| format!("e{i}")).collect(),
        }];
        let free = if opts.short_circuit && triple.flags.is_lie_v {
            for level in 2..=depth {
                levels.push(HierarchyLevel {
                    level,
                    dim: 0,
                    action: vec![RatMatrix::zeros(0, 0); ng],
                    construction: None,
                    labels: Vec::new(),
                });
            }
            None
        } else {
            let free = FreeAlgebra::build(n, gens, depth)?;
            for level in 2..=depth {
                let k = if level == 2 {
                    Self::initial_kernel(triple, &free)?
                } else {
                    Self::ideal_slice(&free, &levels, level)
                };
                let fl = free.level(level);
                for m in &fl.action {
                    for v in k.basis_vectors() {
                        if !k.contains(&m.mul_vec(&v)) {
                            return Err(HierarchyError::ActionLeak(level));
                        }
                    }
                }
                let q = quotient(fl.dim(), &k)?;
                let action = fl.action.iter().map(|m| q.proj.mul(m).mul(&q.sect)).collect();
                let labels = q.complement.iter().map(|&c| word_label(n, level, fl.basis.pivots()[c])).collect();
                levels.push(HierarchyLevel {
                    level,
                    dim: q.dim(),
                    action,
                    construction: Some(LevelConstruction { free_dim: fl.dim(), kernel: k, quotient: q }),
                    labels,
                });
            }
            Some(free)
        };
        let mut h =
            Hierarchy { triple: triple.clone(), depth, levels, free, brackets: BTreeMap::new(), exactness: Vec::new() };
        h.fill_brackets();
        for level in 3..=depth {
            let r = h.exactness_at(level);
            if !r.exact() {
                let deficit = (r.dim_wedge2 as i64 - r.rank_d2 as i64) - r.rank_d3 as i64;
                return Err(HierarchyError::ExactnessFailure { level, deficit });
            }
            h.exactness.push(r);
        }
        Ok(h)
    }

    /// `σ: F₋₂ → V`, `eᵢ⊗eⱼ ↦ ½ eᵢ∘eⱼ`, so that `σ([x, y]) = {x, y}`.
    pub fn sigma_matrix(triple: &LieLeibnizTriple, free: &FreeAlgebra) -> RatMatrix {
        let n = triple.dim_v;
        let half = frac(1, 2);
        let cols = (0..free.dim(2))
            .map(|r| {
                let t = free.basis_tensor(2, r);
                let mut out = zero_vec(n);
                for (idx, c) in t.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    axpy(&mut out, &(c * &half), &triple.leib[idx / n][idx % n]);
                }
                out
            })
            .collect();
        RatMatrix::from_columns(cols, n)
    }

    fn initial_kernel(triple: &LieLeibnizTriple, free: &FreeAlgebra) -> Result<Subspace, HierarchyError> {
        let sym_kernel = kernel(&Self::sigma_matrix(triple, free));
        let act = GAction { target_dim: free.dim(2), mats: free.level(2).action.clone() };
        Ok(largest_invariant_subspace(&act, &sym_kernel)?)
    }

    /// `K₋ᵢ = span{[x, w] : x ∈ F₋ⱼ, w ∈ K₋₍ᵢ₋ⱼ₎, 1 ≤ j ≤ i − 2}` in free coordinates.
    fn ideal_slice(free: &FreeAlgebra, levels: &[HierarchyLevel], level: usize) -> Subspace {
        let mut spanning = Vec::new();
        for j in 1..=level - 2 {
            let k = level - j;
            let kc = levels[k - 1].construction.as_ref().expect("constructed level");
            for w in kc.kernel.basis_vectors() {
                let wt = free.lift(k, &w);
                for r in 0..free.dim(j) {
                    let t = graded_bracket(free.basis_tensor(j, r), j, &wt, k);
                    if !is_zero_vec(&t) {
                        spanning.push(free.coords(level, &t));
                    }
                }
            }
        }
        Subspace::span(free.dim(level), spanning)
    }

    fn fill_brackets(&mut self) {
        let two = rat(2);
        for la in 1..self.depth {
            for lb in 1..=self.depth - la {
                let out = la + lb;
                let table: Table = (0..self.dim(la))
                    .map(|r| {
                        (0..self.dim(lb))
                            .map(|s| match &self.free {
                                Some(free) => {
                                    let ca = &self.construction(la).quotient;
                                    let cb = &self.construction(lb).quotient;
                                    let v = free.basis_bracket(la, ca.complement[r], lb, cb.complement[s]);
                                    let p = self.construction(out).quotient.proj.mul_vec(&v);
                                    p.iter().map(|x| x * &two).collect()
                                }
                                None => zero_vec(self.dim(out)),
                            })
                            .collect()
                    })
                    .collect();
                self.brackets.insert((la, lb), table);
            }
        }
    }

    fn construction(&self, level: usize) -> &LevelConstruction {
        self.levels[level - 1].construction.as_ref().expect("constructed level")
    }

    pub fn dim(&self, level: usize) -> usize {
        self.levels[level - 1].dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim).collect()
    }

    pub fn action(&self, level: usize, a: usize) -> &RatMatrix {
        &self.levels[level - 1].action[a]
    }

    /// Action of an arbitrary `g` vector on `T₋ₗ`.
    pub fn action_of(&self, level: usize, a: &[Rat]) -> RatMatrix {
        let d = self.dim(level);
        let mut m = RatMatrix::zeros(d, d);
        for (c, mat) in a.iter().zip(&self.levels[level - 1].action) {
            if !c.is_zero() {
                m = m.add(&mat.scale(c));
            }
        }
        m
    }

    pub fn bracket_basis(&self, la: usize, r: usize, lb: usize, s: usize) -> &[Rat] {
        &self.brackets[&(la, lb)][r][s]
    }

    pub fn bracket(&self, la: usize, x: &[Rat], lb: usize, y: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.dim(la + lb));
        for (r, xr) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (s, ys) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                axpy(&mut out, &(xr * ys), self.bracket_basis(la, r, lb, s));
            }
        }
        out
    }

    /// The bracket as a bilinear map on basis elements, `None` beyond the depth.
    pub fn q_value(&self, x: Elem, y: Elem) -> BilinearValue {
        let level = x.0 + y.0;
        (level <= self.depth).then(|| (level, self.bracket_basis(x.0, x.1, y.0, y.1).to_vec()))
    }

    pub fn wedge2(&self, level: usize) -> WedgeBasis {
        wedge2(&self.dims(), level)
    }

    pub fn wedge3(&self, level: usize) -> WedgeBasis {
        wedge3(&self.dims(), level)
    }

    /// Matrix of `q: Λ²T|₋ₗ → T₋ₗ`.
    pub fn q2_matrix(&self, level: usize) -> (WedgeBasis, RatMatrix) {
        let w2 = self.wedge2(level);
        let m = bilinear_matrix(&w2, self.dim(level), |x, y| self.q_value(x, y));
        (w2, m)
    }

    /// Matrix of the unshuffle extension `q: Λ³T|₋ₗ → Λ²T|₋ₗ`.
    pub fn q3_matrix(&self, level: usize) -> (WedgeBasis, WedgeBasis, RatMatrix) {
        let w2 = self.wedge2(level);
        let w3 = self.wedge3(level);
        let m = unshuffle_matrix(&w3, &w2, |x, y| self.q_value(x, y));
        (w3, w2, m)
    }

    pub fn exactness_at(&self, level: usize) -> ExactnessRanks {
        let (w2, q2) = self.q2_matrix(level);
        let (w3, _, q3) = self.q3_matrix(level);
        ExactnessRanks {
            level,
            dim_target: self.dim(level),
            dim_wedge2: w2.dim(),
            dim_wedge3: w3.dim(),
            rank_d2: q2.rank(),
            rank_d3: q3.rank(),
            composite_zero: q2.mul(&q3).is_zero(),
        }
    }

    fn basis_elems(&self, max_level: usize) -> Vec<Elem> {
        (1..=max_level.min(self.depth)).flat_map(|l| (0..self.dim(l)).map(move |i| (l, i))).collect()
    }

    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::new();
        let g = &self.triple.g;
        let ng = self.triple.dim_g();

        let mut surj = Check::new("bracket surjective onto T");
        for level in 2..=self.depth {
            let (_, q2) = self.q2_matrix(level);
            let r = q2.rank();
            surj.record(r == self.dim(level), || format!("level {level}: rank {r} < dim {}", self.dim(level)));
        }
        report.push(surj);

        let mut exact = Check::new("exactness of Λ³T → Λ²T → T");
        for level in 3..=self.depth {
            let r = self.exactness_at(level);
            exact.record(r.exact(), || format!("{r:?}"));
        }
        report.push(exact);

        let mut rep = Check::new("T levels are g-modules");
        for level in 1..=self.depth {
            for a in 0..ng {
                for b in 0..ng {
                    let lhs = self.action_of(level, g.bracket_basis(a, b));
                    let (ma, mb) = (self.action(level, a), self.action(level, b));
                    let rhs = ma.mul(mb).sub(&mb.mul(ma));
                    rep.record(lhs == rhs, || format!("level {level}, (a, b) = ({a}, {b})"));
                }
            }
        }
        report.push(rep);

        if let Some(free) = &self.free {
            let mut proj = Check::new("projection intertwines actions");
            let mut closure = Check::new("ideal closure [F, K] ⊆ K");
            for level in 2..=self.depth {
                let c = self.construction(level);
                for (a, m) in free.level(level).action.iter().enumerate() {
                    let lhs = c.quotient.proj.mul(m);
                    let rhs = self.action(level, a).mul(&c.quotient.proj);
                    proj.record(lhs == rhs, || format!("level {level}, generator {a}"));
                }
                for j in 1..level - 1 {
                    let k = level - j;
                    for w in self.construction(k).kernel.basis_vectors() {
                        for r in 0..free.dim(j) {
                            let v = free.bracket(j, &unit_vec(free.dim(j), r), k, &w);
                            closure.record(c.kernel.contains(&v), || format!("level {level}, F₋{j} basis {r}"));
                        }
                    }
                }
            }
            report.push(proj);
            report.push(closure);
        }

        let elems = self.basis_elems(self.depth);
        let mut equiv = Check::new("bracket is g-equivariant");
        for &(la, r) in &elems {
            for &(lb, s) in &elems {
                if la + lb > self.depth {
                    continue;
                }
                for a in 0..ng {
                    let x = unit_vec(self.dim(la), r);
                    let y = unit_vec(self.dim(lb), s);
                    let lhs = self.action(la + lb, a).mul_vec(self.bracket_basis(la, r, lb, s));
                    let mut rhs = self.bracket(la, &self.action(la, a).mul_vec(&x), lb, &y);
                    axpy(&mut rhs, &rat(1), &self.bracket(la, &x, lb, &self.action(lb, a).mul_vec(&y)));
                    equiv.record(lhs == rhs, || format!("x = {:?}, y = {:?}, a = {a}", (la, r), (lb, s)));
                }
            }
        }
        report.push(equiv);

        let mut anti = Check::new("bracket graded antisymmetry");
        for &(la, r) in &elems {
            for &(lb, s) in &elems {
                if la + lb > self.depth {
                    continue;
                }
                let lhs = self.bracket_basis(la, r, lb, s).to_vec();
                let rhs: Vec<Rat> = self.bracket_basis(lb, s, la, r).iter().map(|v| -(v * koszul(la, lb))).collect();
                anti.record(lhs == rhs, || format!("x = {:?}, y = {:?}", (la, r), (lb, s)));
            }
        }
        report.push(anti);

        let jac = elems
            .par_iter()
            .map(|&(la, r)| {
                let mut c = Check::new("bracket graded Jacobi");
                for &(lb, s) in &elems {
                    for &(lc, t) in &elems {
                        if la + lb + lc > self.depth {
                            c.skip();
                            continue;
                        }
                        let (x, y, z) =
                            (unit_vec(self.dim(la), r), unit_vec(self.dim(lb), s), unit_vec(self.dim(lc), t));
                        let lhs = self.bracket(la, &x, lb + lc, self.bracket_basis(lb, s, lc, t));
                        let mut rhs = self.bracket(la + lb, self.bracket_basis(la, r, lb, s), lc, &z);
                        let inner = self.bracket(la, &x, lc, &z);
                        axpy(&mut rhs, &koszul(la, lb), &self.bracket(lb, &y, la + lc, &inner));
                        c.record(is_zero_vec(&sub_vec(&lhs, &rhs)), || {
                            format!("{:?} {:?} {:?}", (la, r), (lb, s), (lc, t))
                        });
                    }
                }
                c
            })
            .collect::<Vec<_>>();
        let mut jacobi = Check::new("bracket graded Jacobi");
        for c in jac {
            jacobi.absorb(c);
        }
        report.push(jacobi);

        let mut collapse = Check::new("collapse iff V is Lie");
        if self.triple.flags.is_lie_v {
            for level in 2..=self.depth {
                collapse.record(self.dim(level) == 0, || format!("dim T₋{level} = {}", self.dim(level)));
            }
        } else {
            collapse.record(self.dim(2) >= 1, || "dim T₋₂ = 0 for a non-Lie V".into());
        }
        report.push(collapse);
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn build(t: &LieLeibnizTriple, depth: usize) -> Hierarchy {
        Hierarchy::build(t, BuildOptions::depth(depth)).unwrap()
    }

    #[test]
    fn lie_valued_collapses() {
        let h = build(&catalog::crossed_module_aff1(), 5);
        assert_eq!(h.dims(), vec![2, 0, 0, 0, 0]);
        let h = build(&catalog::abelian(), 3);
        assert_eq!(h.dims(), vec![1, 0, 0]);
        let s = Hierarchy::build(&catalog::abelian(), BuildOptions { depth: 3, short_circuit: true }).unwrap();
        assert_eq!(s.dims(), h.dims());
        assert!(s.free.is_none());
    }

    #[test]
    fn heisenberg_tower() {
        let t = catalog::heisenberg_leibniz();
        let h = build(&t, 4);
        assert_eq!(h.dims(), vec![2, 1, 0, 0]);
        assert_eq!(h.levels[1].labels, vec!["[e0 e0]".to_string()]);
        // ⟦e, e⟧ = 2·p(2 e⊗e) = 4 [e⊗e]
        assert_eq!(h.bracket_basis(1, 0, 1, 0), &[rat(4)]);
        assert!(is_zero_vec(h.bracket_basis(1, 0, 1, 1)));
        let c = h.construction(3);
        assert_eq!(c.kernel.dim(), c.free_dim);
        assert!(h.verify().ok(), "{}", h.verify());
    }

    #[test]
    fn stringent_kernel_is_whole_sym_kernel() {
        for t in catalog::all().into_iter().filter(|t| t.flags.is_stringent) {
            let h = build(&t, 2);
            let free = h.free.as_ref().unwrap();
            let sk = kernel(&Hierarchy::sigma_matrix(&t, free));
            assert_eq!(h.construction(2).kernel, sk, "{}", t.name);
        }
    }

    #[test]
    fn non_stringent_keeps_free_levels() {
        let t = catalog::sl2_fundamental_nilpotent();
        let h = build(&t, 4);
        assert_eq!(h.dims(), vec![2, 3, 2, 3]);
        assert!(h.verify().ok(), "{}", h.verify());
    }

    #[test]
    fn rank_bound_for_level_three() {
        for t in catalog::all() {
            let h = build(&t, 3);
            let c = h.construction(3);
            assert!(c.kernel.dim() + t.dim_v * h.dim(2) >= c.free_dim, "{}", t.name);
        }
    }

    #[test]
    fn catalog_hierarchies_verify() {
        for t in catalog::all() {
            let h = build(&t, 4);
            let r = h.verify();
            assert!(r.ok(), "{}:\n{r}", t.name);
        }
    }

    #[test]
    fn heisenberg_level_three_kernel_by_hand() {
        // K₋₃ is spanned by [x, w] for x ∈ V and w ∈ K₋₂ = span{e⊗f + f⊗e, f⊗f}.
        let t = catalog::heisenberg_leibniz();
        let h = build(&t, 3);
        let free = h.free.as_ref().unwrap();
        let (e, f) = (unit_vec(2, 0), unit_vec(2, 1));
        let ef = graded_bracket(&e, 1, &f, 1);
        let ff = crate::freegla::tensor_product(&f, &f);
        let span = Subspace::span(
            8,
            [&e, &f]
                .iter()
                .flat_map(|x| [graded_bracket(x, 1, &ef, 2), graded_bracket(x, 1, &ff, 2)])
                .collect::<Vec<_>>(),
        );
        let k3 = Subspace::span(
            8,
            h.construction(3).kernel.basis_vectors().iter().map(|v| free.lift(3, v)).collect::<Vec<_>>(),
        );
        assert_eq!(span, k3);
        assert_eq!(k3.dim(), 2);
    }
}
