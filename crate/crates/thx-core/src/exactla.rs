//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Subspaces are stored by the reduced row-echelon form of a spanning set,
//! so two equal subspaces always carry identical basis matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"`; the result is reduced to lowest terms.
pub fn parse_rat(s: &str) -> Result<Rat, LinAlgError> {
    let bad = || LinAlgError::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let valid = |x: &str, signed: bool| {
        let digits = if signed { x.strip_prefix('-').unwrap_or(x) } else { x };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zero_vec(n);
    v[i] = Rat::one();
    v
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Rat], c: &Rat, v: &[Rat]) {
    debug_assert_eq!(acc.len(), v.len());
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn scale_vec(c: &Rat, v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| c * x).collect()
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: zero_vec(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "flat data has wrong length");
        RatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        RatMatrix { rows: n, cols, data }
    }

    pub fn from_columns(columns: Vec<Vec<Rat>>, rows: usize) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.into_iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, x) in c.into_iter().enumerate() {
                m.data[i * cols + j] = x;
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Rat] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Rat> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let acc = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if !a.is_zero() {
                    axpy(acc, a, other.row(k));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        s += a * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix { rows: self.rows, cols: self.cols, data: add_vec(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix { rows: self.rows, cols: self.cols, data: sub_vec(&self.data, &other.data) }
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: scale_vec(c, &self.data) }
    }

    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.data[i * cols.len() + jj] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit_vec(n, i));
                r
            })
            .collect();
        let (reduced, pivots) = rref_rows(rows, 2 * n);
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return None;
        }
        Some(RatMatrix::from_rows(reduced.into_iter().map(|r| r[n..].to_vec()).collect(), n))
    }

    /// A right inverse `S` with `self · S = I`, supported on the pivot columns.
    /// Requires full row rank.
    pub fn right_inverse(&self) -> Option<RatMatrix> {
        let r = rref(self);
        if r.rank != self.rows {
            return None;
        }
        let square = self.select_columns(&r.pivots);
        let inv = square.inverse()?;
        let mut s = Self::zeros(self.cols, self.rows);
        for (k, &p) in r.pivots.iter().enumerate() {
            for j in 0..self.rows {
                s.set(p, j, inv.get(k, j).clone());
            }
        }
        Some(s)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(format_rat).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: RatMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Gauss-Jordan elimination on row vectors; returns the nonzero rows of the
/// reduced form and their pivot columns.
fn rref_rows(mut rows: Vec<Vec<Rat>>, cols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        if top == rows.len() {
            break;
        }
        let Some(p) = (top..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let inv = rows[top][c].recip();
        if !inv.is_one() {
            for x in rows[top].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[top]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == top || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        rows[top] = pivot_row;
        pivots.push(c);
        top += 1;
    }
    rows.truncate(top);
    (rows, pivots)
}

pub fn rref(m: &RatMatrix) -> Rref {
    let (mut rows, pivots) = rref_rows(m.row_vecs(), m.cols);
    let rank = pivots.len();
    rows.extend((rank..m.rows).map(|_| zero_vec(m.cols)));
    Rref { reduced: RatMatrix::from_rows(rows, m.cols), pivots, rank }
}

/// Incrementally maintained echelon basis; used for orbit closures.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let c = -w[p].clone();
                axpy(&mut w, &c, row);
            }
        }
        w
    }

    /// Adds `v` if it is independent of the current rows; reports whether it was.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.dim);
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        let w = scale_vec(&inv, &w);
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                axpy(row, &c, &w);
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        is_zero_vec(&self.reduce(v))
    }
}

/// Canonical subspace of `Q^ambient_dim`: rows of `basis` are its reduced
/// row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: RatMatrix::zeros(0, n), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: RatMatrix::identity(n), pivots: (0..n).collect() }
    }

    pub fn span<I: IntoIterator<Item = Vec<Rat>>>(n: usize, vectors: I) -> Self {
        let rows: Vec<Vec<Rat>> = vectors.into_iter().collect();
        for r in &rows {
            assert_eq!(r.len(), n, "spanning vector has wrong length");
        }
        let (rows, pivots) = rref_rows(rows, n);
        Subspace { ambient_dim: n, basis: RatMatrix::from_rows(rows, n), pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        self.basis.row_vecs()
    }

    /// Coordinates in the echelon basis, or `None` when `v` lies outside.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient_dim);
        let c: Vec<Rat> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut r = v.to_vec();
        for (i, ci) in c.iter().enumerate() {
            let neg = -ci.clone();
            axpy(&mut r, &neg, self.basis.row(i));
        }
        is_zero_vec(&r).then_some(c)
    }

    /// Coordinates read off the pivot columns without a membership check.
    pub fn pivot_coords(&self, v: &[Rat]) -> Vec<Rat> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coords(v).is_some()
    }

    pub fn is_within(&self, other: &Subspace) -> bool {
        self.basis.row_vecs().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Ok(Subspace::span(self.ambient_dim, self.basis_vectors().into_iter().chain(other.basis_vectors())))
    }

    /// Linear functionals vanishing on the subspace, as matrix rows.
    pub fn annihilator(&self) -> RatMatrix {
        let k = kernel(&self.basis);
        k.basis
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), LinAlgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinAlgError::DimensionMismatch { expected, found })
    }
}

/// `{x : m·x = 0}`.
pub fn kernel(m: &RatMatrix) -> Subspace {
    let r = rref(m);
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..n).filter(|&f| !is_pivot[f]).map(|f| {
        let mut x = unit_vec(n, f);
        for (i, &p) in r.pivots.iter().enumerate() {
            x[p] = -r.reduced.get(i, f).clone();
        }
        x
    });
    Subspace::span(n, vectors.collect::<Vec<_>>())
}

/// Column span of `m`.
pub fn image(m: &RatMatrix) -> Subspace {
    Subspace::span(m.rows, m.columns())
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinAlgError> {
    check_dim(a.ambient_dim, b.ambient_dim)?;
    let constraints = a.annihilator().vstack(&b.annihilator());
    Ok(kernel(&constraints))
}

/// `{x : m·x ∈ w}`.
pub fn preimage(m: &RatMatrix, w: &Subspace) -> Result<Subspace, LinAlgError> {
    check_dim(w.ambient_dim, m.rows)?;
    let constraints = w.annihilator().mul(m);
    Ok(kernel(&constraints))
}

/// Quotient of `Q^ambient_dim` by a subspace, with the section through the
/// standard coordinates that are not pivots of the kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub ambient_dim: usize,
    pub kernel: Subspace,
    pub proj: RatMatrix,
    pub sect: RatMatrix,
    /// Ambient coordinate lifted from each quotient coordinate.
    pub complement: Vec<usize>,
}

impl QuotientData {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }
}

pub fn quotient(ambient_dim: usize, k: &Subspace) -> Result<QuotientData, LinAlgError> {
    check_dim(ambient_dim, k.ambient_dim)?;
    let mut is_pivot = vec![false; ambient_dim];
    for &p in &k.pivots {
        is_pivot[p] = true;
    }
    let complement: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
    let q = complement.len();
    let mut proj = RatMatrix::zeros(q, ambient_dim);
    let mut sect = RatMatrix::zeros(ambient_dim, q);
    for (t, &c) in complement.iter().enumerate() {
        proj.set(t, c, Rat::one());
        sect.set(c, t, Rat::one());
        for (r, &p) in k.pivots.iter().enumerate() {
            let x = k.basis.get(r, c);
            if !x.is_zero() {
                proj.set(t, p, -x.clone());
            }
        }
    }
    Ok(QuotientData { ambient_dim, kernel: k.clone(), proj, sect, complement })
}

/// An ordered list of independent vectors with coordinate extraction
/// relative to that list (not to the echelon basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    vectors: Vec<Vec<Rat>>,
    span: Subspace,
    transform: RatMatrix,
}

impl Frame {
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Rat>>) -> Result<Self, LinAlgError> {
        let k = vectors.len();
        let rows: Vec<Vec<Rat>> = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                assert_eq!(v.len(), ambient_dim);
                let mut r = v.clone();
                r.extend(unit_vec(k, i));
                r
            })
            .collect();
        let (reduced, pivots) = rref_rows(rows, ambient_dim + k);
        if pivots.iter().filter(|&&p| p < ambient_dim).count() < k {
            return Err(LinAlgError::Dependent);
        }
        let span = Subspace {
            ambient_dim,
            basis: RatMatrix::from_rows(reduced.iter().map(|r| r[..ambient_dim].to_vec()).collect(), ambient_dim),
            pivots,
        };
        let transform = RatMatrix::from_rows(reduced.into_iter().map(|r| r[ambient_dim..].to_vec()).collect(), k);
        Ok(Frame { vectors, span, transform })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.vectors
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let c = self.span.coords(v)?;
        let mut out = zero_vec(self.vectors.len());
        for (i, ci) in c.iter().enumerate() {
            axpy(&mut out, ci, self.transform.row(i));
        }
        Some(out)
    }

    pub fn combine(&self, coords: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.span.ambient_dim);
        for (c, v) in coords.iter().zip(&self.vectors) {
            axpy(&mut out, c, v);
        }
        out
    }
}
