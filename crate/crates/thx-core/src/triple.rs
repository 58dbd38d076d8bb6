//! Lie-Leibniz triples: a Lie algebra `g`, a `g`-module `V` and an embedding
//! tensor `Θ: V → g`, with the Leibniz product `x∘y = Θ(x)·y` derived from them.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactla::{
    axpy, frac, intersect, is_zero_vec, kernel, preimage, rat, sub_vec, unit_vec, zero_vec, Echelon, Frame,
    LinAlgError, Rat, RatMatrix, Subspace,
};
use crate::report::{Check, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripleError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("g is not a Lie algebra: {0}")]
    NotLie(String),
    #[error("action is not a Lie algebra morphism at basis pair ({0}, {1})")]
    ActionNotMorphism(usize, usize),
    #[error("quadratic constraint fails at basis pair ({0}, {1})")]
    QuadraticConstraintViolation(usize, usize),
    #[error("Leibniz identity fails at basis triple ({0}, {1}, {2})")]
    LeibnizIdentity(usize, usize, usize),
    #[error("declared product differs from Θ(x)·y at ({0}, {1})")]
    ProductMismatch(usize, usize),
    #[error("inclusion I ⊆ Ker Θ ⊆ Z fails: {0}")]
    InclusionViolation(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `t[i][j][k]`.
pub type Tensor3 = Vec<Vec<Vec<Rat>>>;

/// `(i, j, [(k, coeff)])`: the nonzero coefficients of `[e_i, e_j]`.
pub type SparseBracket<'a> = (usize, usize, &'a [(usize, i64)]);

/// Structure constants: `c[i][j][k]` is the coefficient of `e_k` in `[e_i, e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: Tensor3,
}

impl LieAlgebra {
    pub fn new(dim: usize, c: Tensor3) -> Result<Self, TripleError> {
        let ok = c.len() == dim && c.iter().all(|r| r.len() == dim && r.iter().all(|v| v.len() == dim));
        if !ok {
            return Err(TripleError::Shape(format!("structure constants must be {dim}×{dim}×{dim}")));
        }
        Ok(LieAlgebra { dim, c })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, c: vec![vec![zero_vec(dim); dim]; dim] }
    }

    /// Builds from a list of nonzero brackets `(i, j, [(k, coeff)])`, filling in antisymmetry.
    pub fn from_brackets(dim: usize, brackets: &[SparseBracket<'_>]) -> Self {
        let mut c = vec![vec![zero_vec(dim); dim]; dim];
        for &(i, j, terms) in brackets {
            for &(k, v) in terms {
                c[i][j][k] = rat(v);
                c[j][i][k] = rat(-v);
            }
        }
        LieAlgebra { dim, c }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self) -> &Tensor3 {
        &self.c
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rat] {
        &self.c[i][j]
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                axpy(&mut out, &(xi * yj), &self.c[i][j]);
            }
        }
        out
    }

    /// Matrix of `ad_x`.
    pub fn ad(&self, x: &[Rat]) -> RatMatrix {
        let cols = (0..self.dim).map(|j| self.bracket(x, &unit_vec(self.dim, j))).collect();
        RatMatrix::from_columns(cols, self.dim)
    }

    pub fn ad_basis(&self, i: usize) -> RatMatrix {
        self.ad(&unit_vec(self.dim, i))
    }
}

pub fn validate_lie(g: &LieAlgebra) -> VerificationReport {
    let n = g.dim;
    let mut anti = Check::new("antisymmetry");
    for i in 0..n {
        for j in i..n {
            let ok = g.c[i][j].iter().zip(&g.c[j][i]).all(|(a, b)| (a + b).is_zero());
            anti.record(ok, || format!("(i, j) = ({i}, {j})"));
        }
    }
    let mut jac = Check::new("jacobi");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (ei, ej, ek) = (unit_vec(n, i), unit_vec(n, j), unit_vec(n, k));
                let mut s = g.bracket(&ei, &g.bracket(&ej, &ek));
                axpy(&mut s, &Rat::one(), &g.bracket(&ej, &g.bracket(&ek, &ei)));
                axpy(&mut s, &Rat::one(), &g.bracket(&ek, &g.bracket(&ei, &ej)));
                jac.record(is_zero_vec(&s), || format!("(i, j, k) = ({i}, {j}, {k})"));
            }
        }
    }
    VerificationReport { checks: vec![anti, jac] }
}

/// One matrix per basis element of `g`, acting on a space of dimension `target_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAction {
    pub target_dim: usize,
    pub mats: Vec<RatMatrix>,
}

impl GAction {
    pub fn new(target_dim: usize, mats: Vec<RatMatrix>) -> Result<Self, TripleError> {
        if mats.iter().any(|m| m.rows() != target_dim || m.cols() != target_dim) {
            return Err(TripleError::Shape(format!("action matrices must be {target_dim}×{target_dim}")));
        }
        Ok(GAction { target_dim, mats })
    }

    pub fn of(&self, a: &[Rat]) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.target_dim, self.target_dim);
        for (c, mat) in a.iter().zip(&self.mats) {
            if !c.is_zero() {
                m = m.add(&mat.scale(c));
            }
        }
        m
    }

    /// First basis pair where `ρ([a,b]) ≠ [ρ(a), ρ(b)]`.
    pub fn morphism_defect(&self, g: &LieAlgebra) -> Option<(usize, usize)> {
        for a in 0..g.dim {
            for b in 0..g.dim {
                let lhs = self.of(g.bracket_basis(a, b));
                let rhs = self.mats[a].mul(&self.mats[b]).sub(&self.mats[b].mul(&self.mats[a]));
                if lhs != rhs {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// Largest subspace of `w` stable under every matrix of the action.
pub fn largest_invariant_subspace(act: &GAction, w: &Subspace) -> Result<Subspace, TripleError> {
    let cap = w.ambient_dim() + 1;
    let mut current = w.clone();
    for _ in 0..cap {
        let mut next = current.clone();
        for m in &act.mats {
            next = intersect(&next, &preimage(m, &current)?)?;
        }
        if next == current {
            return Ok(current);
        }
        assert!(next.dim() < current.dim(), "fixpoint iteration must shrink");
        current = next;
    }
    unreachable!("fixpoint iteration exceeded ambient dimension")
}

/// Cyclic submodule generated by one vector, with the words that produced a basis.
///
/// `words[k] = (a₁, …, aₘ)` records `vectors[k] = a₁·(a₂·(…(aₘ·seed)))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicModule {
    pub ambient_dim: usize,
    pub words: Vec<Vec<usize>>,
    frame: Frame,
    /// Action of each generator in word coordinates.
    pub actions: Vec<RatMatrix>,
}

impl CyclicModule {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        self.frame.vectors()
    }

    pub fn span(&self) -> &Subspace {
        self.frame.span()
    }

    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        self.frame.coords(v)
    }

    pub fn combine(&self, coords: &[Rat]) -> Vec<Rat> {
        self.frame.combine(coords)
    }
}

/// Breadth-first orbit closure: every retained vector is hit by every
/// generator, so the returned span is closed by construction.
pub fn orbit_closure(
    ambient_dim: usize,
    seed: Vec<Rat>,
    generators: usize,
    act: impl Fn(usize, &[Rat]) -> Vec<Rat>,
) -> CyclicModule {
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut vectors: Vec<Vec<Rat>> = Vec::new();
    let mut ech = Echelon::new(ambient_dim);
    let mut images: Tensor3 = Vec::new();
    if ech.insert(&seed) {
        words.push(Vec::new());
        vectors.push(seed);
    }
    let mut i = 0;
    while i < vectors.len() {
        let mut row = Vec::with_capacity(generators);
        for a in 0..generators {
            let v = act(a, &vectors[i]);
            if ech.insert(&v) {
                let mut w = vec![a];
                w.extend(&words[i]);
                words.push(w);
                vectors.push(v.clone());
            }
            row.push(v);
        }
        images.push(row);
        i += 1;
    }
    let frame = Frame::new(ambient_dim, vectors).expect("orbit vectors are independent by construction");
    let n = words.len();
    let actions = (0..generators)
        .map(|a| {
            let cols =
                images.iter().map(|row| frame.coords(&row[a]).expect("orbit is closed by construction")).collect();
            RatMatrix::from_columns(cols, n)
        })
        .collect();
    CyclicModule { ambient_dim, words, frame, actions }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub is_lie_v: bool,
    pub is_strict: bool,
    pub is_semistrict: bool,
    pub is_stringent: bool,
    pub is_crossed_module: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieLeibnizTriple {
    pub name: String,
    pub g: LieAlgebra,
    pub dim_v: usize,
    pub rho: GAction,
    /// `dim g × dim V`; column `j` is `Θ(e_j)`.
    pub theta: RatMatrix,
    /// `leib[i][j]` is `e_i ∘ e_j`.
    pub leib: Tensor3,
    pub flags: Flags,
}

impl LieLeibnizTriple {
    pub fn derive(name: impl Into<String>, g: LieAlgebra, rho: GAction, theta: RatMatrix) -> Result<Self, TripleError> {
        let dim_v = rho.target_dim;
        if rho.mats.len() != g.dim {
            return Err(TripleError::Shape(format!("need {} action matrices, found {}", g.dim, rho.mats.len())));
        }
        if theta.rows() != g.dim || theta.cols() != dim_v {
            return Err(TripleError::Shape(format!("theta must be {}×{}", g.dim, dim_v)));
        }
        let lie = validate_lie(&g);
        if let Some(c) = lie.failures().next() {
            return Err(TripleError::NotLie(format!("{} at {}", c.name, c.witness.clone().unwrap_or_default())));
        }
        if let Some((a, b)) = rho.morphism_defect(&g) {
            return Err(TripleError::ActionNotMorphism(a, b));
        }
        let leib = (0..dim_v)
            .map(|i| {
                let act = rho.of(&theta.column(i));
                (0..dim_v).map(|j| act.column(j)).collect()
            })
            .collect();
        let mut t = LieLeibnizTriple { name: name.into(), g, dim_v, rho, theta, leib, flags: Flags::default() };
        t.check_constraints()?;
        t.flags = t.classify()?;
        Ok(t)
    }

    fn check_constraints(&self) -> Result<(), TripleError> {
        let n = self.dim_v;
        for i in 0..n {
            for j in 0..n {
                let lhs = self.theta.mul_vec(&self.leib[i][j]);
                let rhs = self.g.bracket(&self.theta.column(i), &self.theta.column(j));
                if lhs != rhs {
                    return Err(TripleError::QuadraticConstraintViolation(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.product(&unit_vec(n, i), &self.leib[j][k]);
                    let mut rhs = self.product(&self.leib[i][j], &unit_vec(n, k));
                    axpy(&mut rhs, &Rat::one(), &self.product(&unit_vec(n, j), &self.leib[i][k]));
                    if lhs != rhs {
                        return Err(TripleError::LeibnizIdentity(i, j, k));
                    }
                }
            }
        }
        let squares = self.ideal_of_squares();
        let ker_theta = self.kernel_theta();
        let center = self.center();
        if !squares.is_within(&ker_theta) {
            return Err(TripleError::InclusionViolation("I ⊄ Ker Θ".into()));
        }
        if !ker_theta.is_within(&center) {
            return Err(TripleError::InclusionViolation("Ker Θ ⊄ Z".into()));
        }
        Ok(())
    }

    /// Compares a user-supplied product tensor against the derived one.
    pub fn check_declared_product(&self, declared: &[Vec<Vec<Rat>>]) -> Result<(), TripleError> {
        let n = self.dim_v;
        if declared.len() != n || declared.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(TripleError::Shape(format!("declared product must be {n}×{n}×{n}")));
        }
        for (i, (row, derived)) in declared.iter().zip(&self.leib).enumerate() {
            if let Some(j) = (0..n).find(|&j| row[j] != derived[j]) {
                return Err(TripleError::ProductMismatch(i, j));
            }
        }
        Ok(())
    }

    pub fn dim_g(&self) -> usize {
        self.g.dim
    }

    pub fn product(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.dim_v);
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                axpy(&mut out, &(xi * yj), &self.leib[i][j]);
            }
        }
        out
    }

    /// `(antisym, sym)` with `antisym[i][j] = ½(eᵢ∘eⱼ − eⱼ∘eᵢ)` and `sym[i][j] = ½(eᵢ∘eⱼ + eⱼ∘eᵢ)`.
    pub fn split_product(&self) -> (Tensor3, Tensor3) {
        let n = self.dim_v;
        let half = frac(1, 2);
        let mut anti = vec![vec![zero_vec(n); n]; n];
        let mut sym = vec![vec![zero_vec(n); n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b) = (&self.leib[i][j][k], &self.leib[j][i][k]);
                    anti[i][j][k] = (a - b) * &half;
                    sym[i][j][k] = (a + b) * &half;
                }
            }
        }
        (anti, sym)
    }

    pub fn sym_bracket(&self, i: usize, j: usize) -> Vec<Rat> {
        let half = frac(1, 2);
        self.leib[i][j].iter().zip(&self.leib[j][i]).map(|(a, b)| (a + b) * &half).collect()
    }

    pub fn ideal_of_squares(&self) -> Subspace {
        let n = self.dim_v;
        Subspace::span(
            n,
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| self.sym_bracket(i, j)).collect::<Vec<_>>(),
        )
    }

    /// `{x : x∘y = 0 for all y}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim_v;
        // row (j, k) of the flattened left-product map: x ↦ (x∘e_j)_k
        let rows = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| (0..n).map(|i| self.leib[i][j][k].clone()).collect())
            .collect();
        kernel(&RatMatrix::from_rows(rows, n))
    }

    pub fn kernel_theta(&self) -> Subspace {
        kernel(&self.theta)
    }

    /// `η(a;Ξ) = ad_a ∘ Ξ − Ξ ∘ ρ(a)` for `Ξ ∈ Hom(V, g)` given as a `dim g × dim V` matrix.
    pub fn eta(&self, a: &[Rat], xi: &RatMatrix) -> RatMatrix {
        self.g.ad(a).mul(xi).sub(&xi.mul(&self.rho.of(a)))
    }

    fn eta_flat(&self, a: usize, xi: &[Rat]) -> Vec<Rat> {
        let m = RatMatrix::from_flat(self.g.dim, self.dim_v, xi.to_vec());
        self.eta(&unit_vec(self.g.dim, a), &m).into_data()
    }

    /// The cyclic module generated by `Θ` under `η`, flattened row-major.
    pub fn r_theta(&self) -> CyclicModule {
        let seed = self.theta.data().to_vec();
        orbit_closure(seed.len(), seed, self.g.dim, |a, v| self.eta_flat(a, v))
    }

    /// Index of `e_i ⊙ e_j` (i ≤ j) in the monomial basis of `S²V`.
    pub fn s2_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let n = self.dim_v;
        i * n - i * (i + 1) / 2 + j
    }

    pub fn s2_dim(&self) -> usize {
        self.dim_v * (self.dim_v + 1) / 2
    }

    /// Action on `S²V` in the monomial basis `e_i ⊙ e_j`, `i ≤ j`.
    pub fn s2_action(&self) -> GAction {
        let n = self.dim_v;
        let d = self.s2_dim();
        let mats = self
            .rho
            .mats
            .iter()
            .map(|r| {
                let mut m = RatMatrix::zeros(d, d);
                for i in 0..n {
                    for j in i..n {
                        let col = self.s2_index(i, j);
                        // a·(e_i ⊙ e_j) = (a e_i) ⊙ e_j + e_i ⊙ (a e_j)
                        for k in 0..n {
                            for (src, other) in [(i, j), (j, i)] {
                                let c = r.get(k, src);
                                if !c.is_zero() {
                                    let row = self.s2_index(k, other);
                                    let v = m.get(row, col) + c;
                                    m.set(row, col, v);
                                }
                            }
                        }
                    }
                }
                m
            })
            .collect();
        GAction { target_dim: d, mats }
    }

    /// `Ker{,} ⊆ S²V` in the monomial basis.
    pub fn sym_kernel(&self) -> Subspace {
        let n = self.dim_v;
        let mut cols = vec![Vec::new(); self.s2_dim()];
        for i in 0..n {
            for j in i..n {
                cols[self.s2_index(i, j)] = self.sym_bracket(i, j);
            }
        }
        kernel(&RatMatrix::from_columns(cols, n))
    }

    fn is_derivation(&self, r: &RatMatrix) -> bool {
        let n = self.dim_v;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = r.mul_vec(&self.leib[i][j]);
                let mut rhs = self.product(&r.column(i), &unit_vec(n, j));
                axpy(&mut rhs, &Rat::one(), &self.product(&unit_vec(n, i), &r.column(j)));
                lhs == rhs
            })
        })
    }

    /// Whether `{,}: S²V → V` intertwines the `g`-actions.
    pub fn sym_is_equivariant(&self) -> bool {
        let n = self.dim_v;
        let s2 = self.s2_action();
        self.rho.mats.iter().zip(&s2.mats).all(|(r, rs)| {
            (0..n).all(|i| {
                (i..n).all(|j| {
                    let lhs = r.mul_vec(&self.sym_bracket(i, j));
                    let image = rs.column(self.s2_index(i, j));
                    let mut rhs = zero_vec(n);
                    for k in 0..n {
                        for l in k..n {
                            axpy(&mut rhs, &image[self.s2_index(k, l)], &self.sym_bracket(k, l));
                        }
                    }
                    lhs == rhs
                })
            })
        })
    }

    pub fn classify(&self) -> Result<Flags, TripleError> {
        let (_, sym) = self.split_product();
        let is_lie_v = sym.iter().all(|r| r.iter().all(|v| is_zero_vec(v)));
        let is_strict = (0..self.g.dim).all(|a| self.eta(&unit_vec(self.g.dim, a), &self.theta).is_zero());
        let is_semistrict = self.rho.mats.iter().all(|r| self.is_derivation(r));
        let ker = self.sym_kernel();
        let is_stringent = largest_invariant_subspace(&self.s2_action(), &ker)? == ker;
        Ok(Flags { is_lie_v, is_strict, is_semistrict, is_stringent, is_crossed_module: is_strict && is_lie_v })
    }

    /// Implications between the classification flags.
    pub fn classification_report(&self) -> VerificationReport {
        let f = self.flags;
        let mut r = VerificationReport::new();
        r.push(Check::single("strict implies semistrict", !f.is_strict || f.is_semistrict, || self.name.clone()));
        let equivariant = self.sym_is_equivariant();
        let mut c = Check::new("semistrict implies stringent");
        if f.is_semistrict && equivariant {
            c.record(f.is_stringent, || self.name.clone());
        } else {
            c.skip();
        }
        r.push(c);
        r.push(Check::single(
            "crossed module iff strict and Lie",
            f.is_crossed_module == (f.is_strict && f.is_lie_v),
            || self.name.clone(),
        ));
        r
    }

    /// `I ⊆ Ker Θ ⊆ Z` as a report.
    pub fn inclusion_report(&self) -> VerificationReport {
        let (i, k, z) = (self.ideal_of_squares(), self.kernel_theta(), self.center());
        let mut r = VerificationReport::new();
        r.push(Check::single("squares inside Ker Θ", i.is_within(&k), || format!("dim I = {}", i.dim())));
        r.push(Check::single("Ker Θ inside center", k.is_within(&z), || format!("dim Ker Θ = {}", k.dim())));
        r
    }

    /// Quadratic constraint and Leibniz identity, re-checked as a report.
    pub fn constraint_report(&self) -> VerificationReport {
        let n = self.dim_v;
        let mut quad = Check::new("quadratic constraint");
        let mut leib = Check::new("Leibniz identity");
        for i in 0..n {
            for j in 0..n {
                let lhs = self.theta.mul_vec(&self.leib[i][j]);
                let rhs = self.g.bracket(&self.theta.column(i), &self.theta.column(j));
                quad.record(lhs == rhs, || format!("(i, j) = ({i}, {j})"));
                for k in 0..n {
                    let lhs = self.product(&unit_vec(n, i), &self.leib[j][k]);
                    let rhs = self.product(&self.leib[i][j], &unit_vec(n, k));
                    let rhs2 = self.product(&unit_vec(n, j), &self.leib[i][k]);
                    let d = sub_vec(&sub_vec(&lhs, &rhs), &rhs2);
                    leib.record(is_zero_vec(&d), || format!("(i, j, k) = ({i}, {j}, {k})"));
                }
            }
        }
        let mut r = validate_lie(&self.g);
        let mut act = Check::new("action is a morphism");
        act.record(self.rho.morphism_defect(&self.g).is_none(), || format!("{:?}", self.rho.morphism_defect(&self.g)));
        r.push(act);
        r.push(quad);
        r.push(leib);
        r.extend(self.inclusion_report());
        r
    }
}
