//! The free graded Lie algebra on `V[1]`, realized inside the tensor algebra
//! of `V`, together with graded exterior squares and cubes.
//!
//! Level `i` (degree `−i`) lives in `V^⊗i`; a word `(w₁,…,wᵢ)` has index
//! `w₁·nⁱ⁻¹ + … + wᵢ`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactla::{axpy, is_zero_vec, rat, zero_vec, Rat, RatMatrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeError {
    #[error("diagonal action leaves the free level {level} (generator {generator})")]
    ActionLeak { level: usize, generator: usize },
    #[error("level {0} not built")]
    MissingLevel(usize),
}

pub fn koszul(a: usize, b: usize) -> Rat {
    if (a * b).is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

pub fn tensor_dim(n: usize, i: usize) -> usize {
    n.pow(i as u32)
}

pub fn tensor_product(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    let mut out = zero_vec(u.len() * v.len());
    for (a, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (b, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[a * v.len() + b] = x * y;
        }
    }
    out
}

/// `[u, v] = u⊗v − (−1)^{jk} v⊗u` for `u` of level `j` and `v` of level `k`.
pub fn graded_bracket(u: &[Rat], j: usize, v: &[Rat], k: usize) -> Vec<Rat> {
    let mut out = tensor_product(u, v);
    let back = tensor_product(v, u);
    let s = -koszul(j, k);
    axpy(&mut out, &s, &back);
    out
}

/// Derivation action of an endomorphism of `V` on `V^⊗i`.
pub fn act_on_tensor(m: &RatMatrix, u: &[Rat], n: usize, i: usize) -> Vec<Rat> {
    let mut out = zero_vec(u.len());
    for (idx, c) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for p in 0..i {
            let stride = tensor_dim(n, i - 1 - p);
            let letter = (idx / stride) % n;
            let base = idx - letter * stride;
            for k in 0..n {
                let a = m.get(k, letter);
                if !a.is_zero() {
                    let t = &mut out[base + k * stride];
                    *t = &*t + c * a;
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeLevel {
    pub level: usize,
    /// Echelon basis of `F₋ᵢ` inside `V^⊗i`.
    pub basis: Subspace,
    /// Action of each generator in the echelon coordinates.
    pub action: Vec<RatMatrix>,
}

impl FreeLevel {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// Levels `1..=depth` of the free graded Lie algebra on `n` odd generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAlgebra {
    n: usize,
    generators: Vec<RatMatrix>,
    levels: Vec<FreeLevel>,
}

impl FreeAlgebra {
    /// Level 1 only; `generators` act on `V` and are extended as derivations.
    pub fn new(n: usize, generators: Vec<RatMatrix>) -> Self {
        let first = FreeLevel { level: 1, basis: Subspace::full(n), action: generators.clone() };
        FreeAlgebra { n, generators, levels: vec![first] }
    }

    pub fn build(n: usize, generators: Vec<RatMatrix>, depth: usize) -> Result<Self, FreeError> {
        let mut f = Self::new(n, generators);
        while f.depth() < depth {
            f.extend()?;
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> &FreeLevel {
        &self.levels[i - 1]
    }

    pub fn dim(&self, i: usize) -> usize {
        self.level(i).dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(FreeLevel::dim).collect()
    }

    /// Tensor of the `r`-th echelon basis vector of level `i`.
    pub fn basis_tensor(&self, i: usize, r: usize) -> &[Rat] {
        self.level(i).basis.basis().row(r)
    }

    pub fn lift(&self, i: usize, coords: &[Rat]) -> Vec<Rat> {
        let b = &self.level(i).basis;
        let mut out = zero_vec(b.ambient_dim());
        for (r, c) in coords.iter().enumerate() {
            axpy(&mut out, c, b.basis().row(r));
        }
        out
    }

    /// Coordinates of a tensor known to lie in level `i`.
    pub fn coords(&self, i: usize, tensor: &[Rat]) -> Vec<Rat> {
        let b = &self.level(i).basis;
        debug_assert!(b.contains(tensor), "tensor outside free level {i}");
        b.pivot_coords(tensor)
    }

    /// Bracket of basis vectors `r` of level `j` and `s` of level `k`, in coordinates of level `j + k`.
    pub fn basis_bracket(&self, j: usize, r: usize, k: usize, s: usize) -> Vec<Rat> {
        let t = graded_bracket(self.basis_tensor(j, r), j, self.basis_tensor(k, s), k);
        self.coords(j + k, &t)
    }

    pub fn bracket(&self, j: usize, x: &[Rat], k: usize, y: &[Rat]) -> Vec<Rat> {
        let t = graded_bracket(&self.lift(j, x), j, &self.lift(k, y), k);
        self.coords(j + k, &t)
    }

    /// Builds the next level as the span of brackets of lower basis vectors.
    pub fn extend(&mut self) -> Result<(), FreeError> {
        let i = self.depth() + 1;
        let mut spanning = Vec::new();
        for j in 1..=i / 2 {
            let k = i - j;
            for r in 0..self.dim(j) {
                for s in 0..self.dim(k) {
                    let t = graded_bracket(self.basis_tensor(j, r), j, self.basis_tensor(k, s), k);
                    if !is_zero_vec(&t) {
                        spanning.push(t);
                    }
                }
            }
        }
        let basis = Subspace::span(tensor_dim(self.n, i), spanning);
        let mut action = Vec::with_capacity(self.generators.len());
        for (a, g) in self.generators.iter().enumerate() {
            let mut cols = Vec::with_capacity(basis.dim());
            for row in basis.basis_vectors() {
                let image = act_on_tensor(g, &row, self.n, i);
                cols.push(basis.coords(&image).ok_or(FreeError::ActionLeak { level: i, generator: a })?);
            }
            action.push(RatMatrix::from_columns(cols, basis.dim()));
        }
        self.levels.push(FreeLevel { level: i, basis, action });
        Ok(())
    }
}

/// A graded basis element: `(level, index)`, of degree `−level`.
pub type Elem = (usize, usize);

/// Canonical monomial basis of `Λ²` or `Λ³` in a fixed total degree over a
/// graded space given by its dimensions per level.
///
/// Monomials are non-decreasing in `(level, index)`; repeated factors are
/// allowed only for odd degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeBasis {
    pub total: usize,
    pub monomials: Vec<Vec<Elem>>,
    index: HashMap<Vec<Elem>, usize>,
}

impl WedgeBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, m: &[Elem]) -> Option<usize> {
        self.index.get(m).copied()
    }

    fn from_monomials(total: usize, monomials: Vec<Vec<Elem>>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        WedgeBasis { total, monomials, index }
    }

    /// Adds `coeff · (factors…)` to `acc`, reordering with the graded sign.
    pub fn accumulate(&self, acc: &mut [Rat], coeff: &Rat, factors: &[Elem]) {
        if coeff.is_zero() {
            return;
        }
        if let Some((sign, sorted)) = normalize(factors) {
            let i = self.index_of(&sorted).expect("monomial in wedge basis");
            let t = &mut acc[i];
            *t = &*t + coeff * sign;
        }
    }

    /// Adds `coeff · (Σ_t v_t (level, t)) ∧ other`.
    pub fn accumulate_vec_wedge(&self, acc: &mut [Rat], coeff: &Rat, level: usize, v: &[Rat], other: &[Elem]) {
        for (t, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mut factors = vec![(level, t)];
            factors.extend_from_slice(other);
            self.accumulate(acc, &(coeff * c), &factors);
        }
    }
}

/// Sorts factors of a graded-commutative monomial.
///
/// Swapping adjacent `x, y` contributes `−(−1)^{|x||y|}`. Returns `None` when
/// an even factor repeats.
pub fn normalize(factors: &[Elem]) -> Option<(Rat, Vec<Elem>)> {
    let mut f = factors.to_vec();
    let mut sign = Rat::one();
    for i in 1..f.len() {
        let mut j = i;
        while j > 0 && f[j - 1] > f[j] {
            sign = -sign * koszul(f[j - 1].0, f[j].0);
            f.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in f.windows(2) {
        if w[0] == w[1] && w[0].0 % 2 == 0 {
            return None;
        }
    }
    Some((sign, f))
}

/// `dims[l - 1]` is the dimension at level `l`.
pub fn wedge2(dims: &[usize], total: usize) -> WedgeBasis {
    let mut monos = Vec::new();
    for la in 1..=total / 2 {
        let lb = total - la;
        if lb == 0 || lb > dims.len() || la > dims.len() {
            continue;
        }
        for a in 0..dims[la - 1] {
            for b in 0..dims[lb - 1] {
                let (x, y) = ((la, a), (lb, b));
                if x < y || (x == y && la % 2 == 1) {
                    monos.push(vec![x, y]);
                }
            }
        }
    }
    WedgeBasis::from_monomials(total, monos)
}

pub fn wedge3(dims: &[usize], total: usize) -> WedgeBasis {
    let mut monos = Vec::new();
    let dim = |l: usize| if l >= 1 && l <= dims.len() { dims[l - 1] } else { 0 };
    for la in 1..=total {
        for lb in la..=total {
            if la + lb >= total {
                break;
            }
            let lc = total - la - lb;
            if lc < lb {
                continue;
            }
            for a in 0..dim(la) {
                for b in 0..dim(lb) {
                    for c in 0..dim(lc) {
                        let (x, y, z) = ((la, a), (lb, b), (lc, c));
                        let ok = |p: Elem, q: Elem| p < q || (p == q && p.0 % 2 == 1);
                        if ok(x, y) && ok(y, z) {
                            monos.push(vec![x, y, z]);
                        }
                    }
                }
            }
        }
    }
    WedgeBasis::from_monomials(total, monos)
}

/// Output of a bilinear map on two basis elements: `(level, coordinates)`.
pub type BilinearValue = Option<(usize, Vec<Rat>)>;

/// Matrix of a bilinear map on `Λ²` at the basis's total degree, landing at `out_level`.
pub fn bilinear_matrix(w2: &WedgeBasis, out_dim: usize, f: impl Fn(Elem, Elem) -> BilinearValue) -> RatMatrix {
    let cols = w2
        .monomials
        .iter()
        .map(|m| match f(m[0], m[1]) {
            Some((_, v)) => v,
            None => zero_vec(out_dim),
        })
        .collect();
    RatMatrix::from_columns(cols, out_dim)
}

/// Unshuffle extension of a bilinear map to `Λ³ → Λ²`:
/// `b(x∧y∧z) = b(x∧y)∧z − (−1)^{|y||z|} b(x∧z)∧y + (−1)^{|x|(|y|+|z|)} b(y∧z)∧x`.
pub fn unshuffle_matrix(w3: &WedgeBasis, w2: &WedgeBasis, f: impl Fn(Elem, Elem) -> BilinearValue) -> RatMatrix {
    let cols = w3
        .monomials
        .iter()
        .map(|m| {
            let (x, y, z) = (m[0], m[1], m[2]);
            let mut acc = zero_vec(w2.dim());
            let terms = [(Rat::one(), x, y, z), (-koszul(y.0, z.0), x, z, y), (koszul(x.0, y.0 + z.0), y, z, x)];
            for (eps, p, q, r) in terms {
                if let Some((level, v)) = f(p, q) {
                    w2.accumulate_vec_wedge(&mut acc, &eps, level, &v, &[r]);
                }
            }
            acc
        })
        .collect();
    RatMatrix::from_columns(cols, w2.dim())
}

/// Ranks of the Chevalley-Eilenberg maps `Λ³ → Λ² → F` at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessRanks {
    pub level: usize,
    pub dim_target: usize,
    pub dim_wedge2: usize,
    pub dim_wedge3: usize,
    pub rank_d2: usize,
    pub rank_d3: usize,
    pub composite_zero: bool,
}

impl ExactnessRanks {
    /// Level 2: `d₂` is an isomorphism. Higher levels: `d₂` onto and `im d₃ = ker d₂`.
    pub fn exact(&self) -> bool {
        if self.level == 2 {
            self.rank_d2 == self.dim_wedge2 && self.rank_d2 == self.dim_target
        } else {
            self.composite_zero && self.rank_d2 == self.dim_target && self.rank_d3 == self.dim_wedge2 - self.rank_d2
        }
    }
}

impl FreeAlgebra {
    /// `d₂(x∧y) = −[x, y]` on basis elements.
    pub fn ce_d2(&self, x: Elem, y: Elem) -> BilinearValue {
        let level = x.0 + y.0;
        if level > self.depth() {
            return None;
        }
        let v = self.basis_bracket(x.0, x.1, y.0, y.1).into_iter().map(|c| -c).collect();
        Some((level, v))
    }

    pub fn d2_matrix(&self, level: usize) -> (WedgeBasis, RatMatrix) {
        let w2 = wedge2(&self.dims(), level);
        let m = bilinear_matrix(&w2, self.dim(level), |x, y| self.ce_d2(x, y));
        (w2, m)
    }

    pub fn d3_matrix(&self, level: usize) -> (WedgeBasis, WedgeBasis, RatMatrix) {
        let w2 = wedge2(&self.dims(), level);
        let w3 = wedge3(&self.dims(), level);
        let m = unshuffle_matrix(&w3, &w2, |x, y| self.ce_d2(x, y));
        (w3, w2, m)
    }

    pub fn exactness(&self, level: usize) -> ExactnessRanks {
        let (w2, d2) = self.d2_matrix(level);
        let (w3, _, d3) = self.d3_matrix(level);
        ExactnessRanks {
            level,
            dim_target: self.dim(level),
            dim_wedge2: w2.dim(),
            dim_wedge3: w3.dim(),
            rank_d2: d2.rank(),
            rank_d3: d3.rank(),
            composite_zero: d2.mul(&d3).is_zero(),
        }
    }
}

/// Dimensions of levels `1..=depth` as the span of every bracketing of every
/// word of generators, with sparse word tensors. Shares no code with [`FreeAlgebra`].
pub fn bracketing_span_dims(n: usize, depth: usize) -> Vec<usize> {
    type Sparse = BTreeMap<Vec<usize>, i64>;
    fn bracket(u: &Sparse, j: usize, v: &Sparse, k: usize) -> Sparse {
        let sign = if (j * k).is_multiple_of(2) { -1 } else { 1 };
        let mut out = Sparse::new();
        for (a, x) in u {
            for (b, y) in v {
                *out.entry([&a[..], &b[..]].concat()).or_insert(0) += x * y;
                *out.entry([&b[..], &a[..]].concat()).or_insert(0) += sign * x * y;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }
    let index = |w: &[usize]| w.iter().fold(0, |acc, &l| acc * n + l);
    let mut trees: Vec<Vec<Sparse>> = vec![Vec::new()];
    trees.push((0..n).map(|g| Sparse::from([(vec![g], 1)])).collect());
    let mut dims = Vec::with_capacity(depth);
    for k in 1..=depth {
        if k > 1 {
            let mut level = Vec::new();
            for j in 1..k {
                for u in &trees[j] {
                    for v in &trees[k - j] {
                        let b = bracket(u, j, v, k - j);
                        if !b.is_empty() {
                            level.push(b);
                        }
                    }
                }
            }
            trees.push(level);
        }
        let size = tensor_dim(n, k);
        let rows = trees[k].iter().map(|t| {
            let mut v = zero_vec(size);
            for (w, c) in t {
                v[index(w)] = rat(*c);
            }
            v
        });
        dims.push(Subspace::span(size, rows).dim());
    }
    dims
}

/// Dimension of the degree-`k` part of the free Lie superalgebra on `n` odd generators.
pub fn free_super_dim(n: usize, k: usize) -> usize {
    let mobius = |mut m: usize| -> i64 {
        let mut res = 1;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0;
                }
                res = -res;
            }
            p += 1;
        }
        if m > 1 {
            res = -res;
        }
        res
    };
    let mut total = rat(0);
    for d in (1..=k).filter(|d| k.is_multiple_of(*d)) {
        let e = k / d;
        let sign = if k.is_multiple_of(2) && !(k + e).is_multiple_of(2) { -1 } else { 1 };
        total += rat(mobius(d) * sign) * rat(n as i64).pow(e as i32);
    }
    let v = total / rat(k as i64);
    assert!(v.is_integer());
    v.to_integer().try_into().expect("nonnegative dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{sub_vec, unit_vec};
    use proptest::prelude::*;

    fn free(n: usize, depth: usize) -> FreeAlgebra {
        FreeAlgebra::build(n, vec![], depth).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let (e, f) = (unit_vec(2, 0), unit_vec(2, 1));
        let ef = graded_bracket(&e, 1, &f, 1);
        let fe = graded_bracket(&f, 1, &e, 1);
        assert_eq!(ef, fe);
        assert_eq!(ef, vec![rat(0), rat(1), rat(1), rat(0)]);
        assert_eq!(graded_bracket(&e, 1, &e, 1), vec![rat(2), rat(0), rat(0), rat(0)]);
        let u = graded_bracket(&e, 1, &f, 1);
        assert!(is_zero_vec(&graded_bracket(&u, 2, &u, 2)));
    }

    #[test]
    fn level_dims() {
        assert_eq!(free(2, 3).dims(), vec![2, 3, 2]);
        assert_eq!(free(1, 3).dims(), vec![1, 1, 0]);
    }

    #[test]
    fn super_dim_formula() {
        assert_eq!((1..=4).map(|k| free_super_dim(2, k)).collect::<Vec<_>>(), vec![2, 3, 2, 3]);
        assert_eq!((1..=4).map(|k| free_super_dim(1, k)).collect::<Vec<_>>(), vec![1, 1, 0, 0]);
        assert_eq!(free_super_dim(2, 3), (8 - 2) / 3);
        for n in 1..=3 {
            let f = free(n, 5);
            for k in 1..=5 {
                assert_eq!(f.dim(k), free_super_dim(n, k), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn bracketing_oracle_matches_levels() {
        assert_eq!(bracketing_span_dims(2, 3), vec![2, 3, 2]);
        for n in 1..=3 {
            assert_eq!(bracketing_span_dims(n, 4), free(n, 4).dims(), "n = {n}");
        }
    }

    #[test]
    fn wedge_dims() {
        assert_eq!(wedge2(&[2], 2).dim(), 3);
        assert_eq!(wedge2(&[2, 5], 3).dim(), 10);
        // Λ² at −4 with F₋₂ of dim 3 and F₋₃ of dim 2 over V of dim 2
        assert_eq!(wedge2(&[2, 3, 2], 4).dim(), 2 * 2 + 3);
        assert_eq!(wedge3(&[2], 3).dim(), 4);
        assert_eq!(wedge3(&[1, 1, 1], 6).dim(), 1);
    }

    #[test]
    fn normalize_signs() {
        // two odd elements commute
        assert_eq!(normalize(&[(1, 1), (1, 0)]).unwrap(), (rat(1), vec![(1, 0), (1, 1)]));
        // odd and even anticommute
        assert_eq!(normalize(&[(2, 0), (1, 0)]).unwrap(), (rat(-1), vec![(1, 0), (2, 0)]));
        assert!(normalize(&[(2, 0), (2, 0)]).is_none());
        assert!(normalize(&[(1, 0), (1, 0)]).is_some());
    }

    #[test]
    fn d2_instances() {
        let f = free(2, 3);
        let (_, y) = f.ce_d2((1, 0), (1, 1)).unwrap();
        let t = f.lift(2, &y);
        assert_eq!(t, vec![rat(0), rat(-1), rat(-1), rat(0)]);
        let (_, d2) = f.d2_matrix(3);
        let (_, _, d3) = f.d3_matrix(3);
        assert!(d2.mul(&d3).is_zero());
    }

    #[test]
    fn d3_matches_unshuffle_of_bracket_on_odd_triple() {
        // d₃(x∧y∧z) for three degree −1 elements: all unshuffle signs are +1.
        let f = free(2, 3);
        let (w3, w2, d3) = f.d3_matrix(3);
        let col = w3.index_of(&[(1, 0), (1, 0), (1, 1)]).unwrap();
        let mut expected = zero_vec(w2.dim());
        let e00 = f.ce_d2((1, 0), (1, 0)).unwrap().1;
        let e01 = f.ce_d2((1, 0), (1, 1)).unwrap().1;
        w2.accumulate_vec_wedge(&mut expected, &rat(1), 2, &e00, &[(1, 1)]);
        w2.accumulate_vec_wedge(&mut expected, &rat(2), 2, &e01, &[(1, 0)]);
        assert_eq!(d3.column(col), expected);
    }

    #[test]
    fn free_exactness_small() {
        for n in 1..=3 {
            let f = free(n, if n == 3 { 5 } else { 6 });
            for level in 2..=f.depth() {
                let r = f.exactness(level);
                assert!(r.exact(), "{r:?}");
            }
        }
    }

    #[test]
    fn action_preserves_levels() {
        let t = crate::catalog::sl2_fundamental_nilpotent();
        let f = FreeAlgebra::build(2, t.rho.mats.clone(), 4).unwrap();
        assert_eq!(f.level(3).action.len(), 3);
    }

    fn tensor(n: usize, i: usize) -> impl Strategy<Value = Vec<Rat>> {
        proptest::collection::vec(-2i64..=2, tensor_dim(n, i)).prop_map(|v| v.into_iter().map(rat).collect())
    }

    proptest! {
        #[test]
        fn bracket_is_graded_lie(
            (j, k, l) in (1usize..=2, 1usize..=2, 1usize..=2),
            seed in proptest::collection::vec(-2i64..=2, 64),
        ) {
            let n = 2;
            let take = |off: usize, i: usize| -> Vec<Rat> {
                (0..tensor_dim(n, i)).map(|t| rat(seed[(off + t) % seed.len()])).collect()
            };
            let (u, v, w) = (take(0, j), take(7, k), take(19, l));
            let uv = graded_bracket(&u, j, &v, k);
            let vu = graded_bracket(&v, k, &u, j);
            let neg = -koszul(j, k);
            prop_assert_eq!(uv.clone(), vu.iter().map(|x| x * &neg).collect::<Vec<_>>());
            let lhs = graded_bracket(&u, j, &graded_bracket(&v, k, &w, l), k + l);
            let r1 = graded_bracket(&uv, j + k, &w, l);
            let r2 = graded_bracket(&v, k, &graded_bracket(&u, j, &w, l), j + l);
            let mut rhs = r1;
            axpy(&mut rhs, &koszul(j, k), &r2);
            prop_assert!(is_zero_vec(&sub_vec(&lhs, &rhs)));
        }

        #[test]
        fn action_is_derivation_of_tensor_product(u in tensor(2, 1), v in tensor(2, 2), m in proptest::collection::vec(-2i64..=2, 4)) {
            let a = RatMatrix::from_flat(2, 2, m.into_iter().map(rat).collect());
            let lhs = act_on_tensor(&a, &tensor_product(&u, &v), 2, 3);
            let mut rhs = tensor_product(&act_on_tensor(&a, &u, 2, 1), &v);
            axpy(&mut rhs, &rat(1), &tensor_product(&u, &act_on_tensor(&a, &v, 2, 2)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
