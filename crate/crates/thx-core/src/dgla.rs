//! The assembled differential graded Lie algebra on `T₋• ⊕ g ⊕ R_Θ[−1]`,
//! its axiom checker and homology ranks.
//!
//! A [`DgLa`] is plain data: dimensions, labels, a dense bracket table per
//! pair of degrees, and the differential leaving each degree. It can be
//! rebuilt from a serialized file and checked without the triple.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::differential::{DifferentialError, DifferentialTower, MuFamily};
use crate::exactla::{axpy, is_zero_vec, sub_vec, unit_vec, zero_vec, Rat, RatMatrix};
use crate::hierarchy::{BuildOptions, Hierarchy, HierarchyError};
use crate::report::{Check, VerificationReport};
use crate::triple::LieLeibnizTriple;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Differential(#[from] DifferentialError),
}

type Table = Vec<Vec<Vec<Rat>>>;

/// Key of one bracket entry: `(deg_x, idx_x, deg_y, idx_y)`.
pub type EntryKey = (i64, usize, i64, usize);

fn sign(even: bool) -> Rat {
    if even {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// `(−1)^{ab}`.
fn koszul(a: i64, b: i64) -> Rat {
    sign((a * b).rem_euclid(2) == 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLa {
    pub name: String,
    pub depth: usize,
    pub dims: BTreeMap<i64, usize>,
    pub labels: BTreeMap<i64, Vec<String>>,
    tables: BTreeMap<(i64, i64), Table>,
    differential: BTreeMap<i64, RatMatrix>,
    pub r_theta_words: Vec<Vec<usize>>,
}

impl DgLa {
    /// All brackets and differentials zero.
    pub fn zero(
        name: impl Into<String>,
        depth: usize,
        dims: BTreeMap<i64, usize>,
        labels: BTreeMap<i64, Vec<String>>,
        r_theta_words: Vec<Vec<usize>>,
    ) -> Self {
        let lo = -(depth as i64);
        let dim = |d: i64| {
            if (lo..=1).contains(&d) {
                dims.get(&d).copied().unwrap_or(0)
            } else {
                0
            }
        };
        let mut tables = BTreeMap::new();
        for dx in lo..=1 {
            for dy in lo..=1 {
                if (lo..=1).contains(&(dx + dy)) {
                    let out = dim(dx + dy);
                    tables.insert((dx, dy), vec![vec![zero_vec(out); dim(dy)]; dim(dx)]);
                }
            }
        }
        let differential = (lo..=1).map(|d| (d, RatMatrix::zeros(dim(d + 1), dim(d)))).collect();
        DgLa { name: name.into(), depth, dims, labels, tables, differential, r_theta_words }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        -(self.depth as i64)..=1
    }

    pub fn dim(&self, d: i64) -> usize {
        if self.degrees().contains(&d) {
            self.dims.get(&d).copied().unwrap_or(0)
        } else {
            0
        }
    }

    pub fn total_dim(&self) -> usize {
        self.degrees().map(|d| self.dim(d)).sum()
    }

    /// Degrees above `+1` are zero; degrees below `−depth` are not computed.
    pub fn computed(&self, d: i64) -> bool {
        d >= -(self.depth as i64)
    }

    pub fn bracket_basis(&self, dx: i64, i: usize, dy: i64, j: usize) -> Option<&[Rat]> {
        if !self.computed(dx + dy) {
            return None;
        }
        Some(self.tables.get(&(dx, dy)).map_or(&[][..], |t| &t[i][j]))
    }

    pub fn set_bracket(&mut self, key: EntryKey, v: Vec<Rat>) {
        let (dx, i, dy, j) = key;
        let t = self.tables.get_mut(&(dx, dy)).expect("bracket slot within truncation");
        assert_eq!(t[i][j].len(), v.len(), "bracket value dimension");
        t[i][j] = v;
    }

    /// Bilinear extension; `None` when the result leaves the computed degrees.
    pub fn bracket(&self, dx: i64, x: &[Rat], dy: i64, y: &[Rat]) -> Option<Vec<Rat>> {
        let out = dx + dy;
        if !self.computed(out) {
            return None;
        }
        let mut acc = zero_vec(self.dim(out));
        if !self.tables.contains_key(&(dx, dy)) {
            return Some(acc);
        }
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                axpy(&mut acc, &(xi * yj), self.bracket_basis(dx, i, dy, j).unwrap());
            }
        }
        Some(acc)
    }

    /// Nonzero entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = (EntryKey, &Vec<Rat>)> {
        self.tables.iter().flat_map(|(&(dx, dy), t)| {
            t.iter().enumerate().flat_map(move |(i, row)| {
                row.iter().enumerate().filter(|(_, v)| !is_zero_vec(v)).map(move |(j, v)| ((dx, i, dy, j), v))
            })
        })
    }

    /// The differential leaving degree `d`.
    pub fn differential(&self, d: i64) -> &RatMatrix {
        &self.differential[&d]
    }

    pub fn set_differential(&mut self, d: i64, m: RatMatrix) {
        let slot = self.differential.get_mut(&d).expect("differential degree within truncation");
        assert_eq!((slot.rows(), slot.cols()), (m.rows(), m.cols()), "differential shape");
        *slot = m;
    }

    fn apply_d(&self, d: i64, v: &[Rat]) -> Vec<Rat> {
        if d > 1 {
            return Vec::new();
        }
        self.differential(d).mul_vec(v)
    }

    fn basis(&self) -> Vec<(i64, usize)> {
        self.degrees().flat_map(|d| (0..self.dim(d)).map(move |i| (d, i))).collect()
    }

    pub fn verify_axioms(&self) -> VerificationReport {
        let basis = self.basis();
        let mut report = VerificationReport::new();

        let mut anti = Check::new("graded antisymmetry");
        for &(dx, i) in &basis {
            for &(dy, j) in &basis {
                match (self.bracket_basis(dx, i, dy, j), self.bracket_basis(dy, j, dx, i)) {
                    (Some(a), Some(b)) => {
                        let s = -koszul(dx, dy);
                        let ok = a.iter().zip(b).all(|(p, q)| *p == q * &s);
                        anti.record(ok, || format!("x = ({dx}, {i}), y = ({dy}, {j})"));
                    }
                    _ => anti.skip(),
                }
            }
        }
        report.push(anti);

        let jacobi = basis.par_iter().map(|&x| self.jacobi_from(x, &basis)).collect::<Vec<_>>().into_iter().fold(
            Check::new("graded Jacobi"),
            |mut acc, c| {
                acc.absorb(c);
                acc
            },
        );
        report.push(jacobi);

        let mut leib = Check::new("Leibniz rule for ∂");
        let mut enforced = Check::new("∂⟦ξ, v⟧ = −⟦ξ, ∂v⟧");
        for &(du, i) in &basis {
            for &(dv, j) in &basis {
                let total = du + dv;
                if total > 0 {
                    continue;
                }
                if !self.computed(total) {
                    leib.skip();
                    continue;
                }
                let (u, v) = (unit_vec(self.dim(du), i), unit_vec(self.dim(dv), j));
                let lhs = self.apply_d(total, self.bracket_basis(du, i, dv, j).unwrap());
                let mut rhs = zero_vec(self.dim(total + 1));
                if du < 1 {
                    let du_v = self.apply_d(du, &u);
                    axpy(&mut rhs, &Rat::one(), &self.bracket(du + 1, &du_v, dv, &v).unwrap());
                }
                let dv_v = self.apply_d(dv, &v);
                let second = self.bracket(du, &u, dv + 1, &dv_v).unwrap();
                axpy(&mut rhs, &sign(du.rem_euclid(2) == 0), &second);
                leib.record(lhs == rhs, || format!("u = ({du}, {i}), v = ({dv}, {j})"));
                if du == 1 && dv <= -1 {
                    let neg: Vec<Rat> = second.iter().map(|c| -c).collect();
                    enforced.record(lhs == neg, || format!("ξ = {i}, v = ({dv}, {j})"));
                }
            }
        }
        report.push(leib);
        report.push(enforced);

        let mut sq = Check::new("∂∘∂ = 0");
        for d in self.degrees() {
            if d < 1 {
                let prod = self.differential(d + 1).mul(self.differential(d));
                sq.record(prod.is_zero(), || format!("leaving degree {d}"));
            }
        }
        report.push(sq);

        let mut theta = Check::new("⟦Θ, −⟧ = ∂");
        for d in self.degrees() {
            if d > 0 {
                continue;
            }
            for i in 0..self.dim(d) {
                let col = self.differential(d).column(i);
                let ok = if self.dim(1) == 0 {
                    is_zero_vec(&col)
                } else {
                    self.bracket_basis(1, 0, d, i).map(|v| v.to_vec()) == Some(col)
                };
                theta.record(ok, || format!("x = ({d}, {i})"));
            }
        }
        report.push(theta);
        report
    }

    fn jacobi_from(&self, x: (i64, usize), basis: &[(i64, usize)]) -> Check {
        let mut c = Check::new("graded Jacobi");
        let (dx, i) = x;
        let xv = unit_vec(self.dim(dx), i);
        for &(dy, j) in basis {
            for &(dz, k) in basis {
                if dx + dy + dz > 1 {
                    continue;
                }
                let yz = self.bracket_basis(dy, j, dz, k);
                let xy = self.bracket_basis(dx, i, dy, j);
                let xz = self.bracket_basis(dx, i, dz, k);
                let (Some(yz), Some(xy), Some(xz)) = (yz, xy, xz) else {
                    c.skip();
                    continue;
                };
                let Some(lhs) = self.bracket(dx, &xv, dy + dz, yz) else {
                    c.skip();
                    continue;
                };
                let zv = unit_vec(self.dim(dz), k);
                let yv = unit_vec(self.dim(dy), j);
                let mut rhs = self.bracket(dx + dy, xy, dz, &zv).unwrap();
                axpy(&mut rhs, &koszul(dx, dy), &self.bracket(dy, &yv, dx + dz, xz).unwrap());
                c.record(is_zero_vec(&sub_vec(&lhs, &rhs)), || {
                    format!("x = ({dx}, {i}), y = ({dy}, {j}), z = ({dz}, {k})")
                });
            }
        }
        c
    }

    /// Ranks of `∂` around each degree.
    pub fn homology(&self) -> HomologyReport {
        let lo = -(self.depth as i64);
        let rows = self
            .degrees()
            .map(|d| {
                let dim = self.dim(d);
                let rank_out = self.differential(d).rank();
                let rank_in = if d > lo { self.differential(d - 1).rank() } else { 0 };
                let kernel = dim - rank_out;
                HomologyRow {
                    degree: d,
                    dim,
                    rank_in,
                    rank_out,
                    kernel,
                    homology: kernel - rank_in,
                    truncated: d == lo,
                }
            })
            .collect();
        HomologyReport { name: self.name.clone(), rows }
    }

    /// Structural equality ignoring the name and labels.
    pub fn same_structure(&self, other: &DgLa) -> bool {
        self.depth == other.depth
            && self.degrees().all(|d| self.dim(d) == other.dim(d))
            && self.tables == other.tables
            && self.differential == other.differential
            && self.r_theta_words == other.r_theta_words
    }

    /// First differing entry, for diagnostics.
    pub fn first_difference(&self, other: &DgLa) -> Option<String> {
        for d in self.degrees() {
            if self.dim(d) != other.dim(d) {
                return Some(format!("dim at degree {d}: {} vs {}", self.dim(d), other.dim(d)));
            }
        }
        for (key, t) in &self.tables {
            for (i, row) in t.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let w = other.bracket_basis(key.0, i, key.1, j);
                    if w != Some(&v[..]) {
                        return Some(format!("bracket ({}, {i}, {}, {j}): {v:?} vs {w:?}", key.0, key.1));
                    }
                }
            }
        }
        for d in self.degrees() {
            if self.differential(d) != other.differential(d) {
                return Some(format!("differential leaving {d}"));
            }
        }
        (self.r_theta_words != other.r_theta_words).then(|| "R_Θ words".to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRow {
    pub degree: i64,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub kernel: usize,
    pub homology: usize,
    /// The incoming map is not computed at the bottom degree.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub name: String,
    pub rows: Vec<HomologyRow>,
}

impl HomologyReport {
    pub fn row(&self, degree: i64) -> Option<&HomologyRow> {
        self.rows.iter().find(|r| r.degree == degree)
    }

    pub fn first_injective(&self) -> bool {
        self.row(-2).is_none_or(|r| r.kernel == 0)
    }

    /// Degrees `−depth < d ≤ −2` with nonzero homology.
    pub fn obstructions(&self) -> Vec<i64> {
        self.rows.iter().filter(|r| r.degree <= -2 && !r.truncated && r.homology != 0).map(|r| r.degree).collect()
    }

    /// Whether `T₋•` below `−1` resolves the image of the first map, within truncation.
    pub fn resolves(&self) -> bool {
        self.obstructions().is_empty()
    }

    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|r| r.rank_in <= r.kernel)
    }
}

impl fmt::Display for HomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree    dim  rank in  rank out  kernel  H")?;
        for r in &self.rows {
            let h = if r.truncated { format!("{}*", r.homology) } else { r.homology.to_string() };
            writeln!(f, "{:>6} {:>6} {:>8} {:>9} {:>7}  {h}", r.degree, r.dim, r.rank_in, r.rank_out, r.kernel)?;
        }
        if let Some(r) = self.row(-2) {
            let yes = if r.homology == 0 { "yes" } else { "no" };
            writeln!(f, "H₋₂ = 0: {yes}")?;
        }
        let status = if self.resolves() { "holds" } else { "fails" };
        write!(f, "resolution within truncation: {status}")?;
        if !self.resolves() {
            write!(f, " (nonzero H at {:?})", self.obstructions())?;
        }
        Ok(())
    }
}

fn word_label(w: &[usize]) -> String {
    if w.is_empty() {
        "Θ".to_string()
    } else {
        let parts: Vec<String> = w.iter().map(|a| a.to_string()).collect();
        format!("Θ_{}", parts.join("."))
    }
}

/// Hierarchy, differential, `μ` maps and the assembled algebra of one triple.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub hierarchy: Hierarchy,
    pub tower: DifferentialTower,
    pub mu: MuFamily,
    pub dgla: DgLa,
}

impl Pipeline {
    pub fn run(t: &LieLeibnizTriple, opts: BuildOptions) -> Result<Self, PipelineError> {
        let hierarchy = Hierarchy::build(t, opts)?;
        let tower = DifferentialTower::build(&hierarchy)?;
        let mu = MuFamily::build(&hierarchy, &tower)?;
        let dgla = assemble(&hierarchy, &tower, &mu);
        Ok(Pipeline { hierarchy, tower, mu, dgla })
    }

    /// Every structural check: hierarchy, differential, `μ` and the algebra axioms.
    pub fn verify(&self) -> VerificationReport {
        let mut r = self.dgla.verify_axioms();
        r.extend(self.hierarchy.verify());
        r.extend(self.tower.verify(&self.hierarchy));
        r.extend(self.mu.verify(&self.tower));
        r
    }
}

pub fn assemble(h: &Hierarchy, tower: &DifferentialTower, mu: &MuFamily) -> DgLa {
    let t = &h.triple;
    let n = h.depth as i64;
    let ng = t.dim_g();
    let r_theta = &tower.r_theta;
    let mut dims = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for l in 1..=h.depth {
        dims.insert(-(l as i64), h.dim(l));
        labels.insert(-(l as i64), h.levels[l - 1].labels.clone());
    }
    dims.insert(0, ng);
    labels.insert(0, (0..ng).map(|a| format!("g{a}")).collect());
    dims.insert(1, r_theta.dim());
    labels.insert(1, r_theta.words.iter().map(|w| word_label(w)).collect());
    let mut d = DgLa::zero(&t.name, h.depth, dims, labels, r_theta.words.clone());

    for la in 1..h.depth {
        for lb in 1..=h.depth - la {
            for r in 0..h.dim(la) {
                for s in 0..h.dim(lb) {
                    d.set_bracket((-(la as i64), r, -(lb as i64), s), h.bracket_basis(la, r, lb, s).to_vec());
                }
            }
        }
    }
    for a in 0..ng {
        for b in 0..ng {
            d.set_bracket((0, a, 0, b), t.g.bracket_basis(a, b).to_vec());
        }
        for l in 1..=h.depth {
            let m = h.action(l, a);
            for x in 0..h.dim(l) {
                let v = m.column(x);
                d.set_bracket((-(l as i64), x, 0, a), v.iter().map(|c| -c).collect());
                d.set_bracket((0, a, -(l as i64), x), v);
            }
        }
        for w in 0..r_theta.dim() {
            let v = r_theta.actions[a].column(w);
            d.set_bracket((1, w, 0, a), v.iter().map(|c| -c).collect());
            d.set_bracket((0, a, 1, w), v);
        }
    }
    for k in 1..=h.depth {
        let lvl = mu.level(1 - k as i64).expect("mu level for every degree");
        let (rows, cols) = if k == 1 { (ng, h.dim(1)) } else { (h.dim(k - 1), h.dim(k)) };
        let x_sign = -sign(k % 2 == 0);
        for w in 0..r_theta.dim() {
            let m = RatMatrix::from_flat(rows, cols, lvl.images[w].clone());
            for x in 0..cols {
                let v = m.column(x);
                d.set_bracket((-(k as i64), x, 1, w), v.iter().map(|c| c * &x_sign).collect());
                d.set_bracket((1, w, -(k as i64), x), v);
            }
        }
    }
    for deg in -n..=1 {
        d.set_differential(deg, tower.out_of(deg).clone());
    }
    d
}

/// The 3-term algebra `V → g → R_Θ` built straight from the triple, for
/// Lie-valued triples. Levels below `−1` are zero.
pub fn three_term_oracle(t: &LieLeibnizTriple, depth: usize) -> DgLa {
    let n = t.dim_v;
    let ng = t.dim_g();
    let r = t.r_theta();
    let mut dims: BTreeMap<i64, usize> = (2..=depth as i64).map(|l| (-l, 0)).collect();
    dims.insert(-1, n);
    dims.insert(0, ng);
    dims.insert(1, r.dim());
    let mut d = DgLa::zero(&t.name, depth, dims, BTreeMap::new(), r.words.clone());
    for a in 0..ng {
        let ea = unit_vec(ng, a);
        for b in 0..ng {
            d.set_bracket((0, a, 0, b), t.g.bracket(&ea, &unit_vec(ng, b)));
        }
        for x in 0..n {
            let ax: Vec<Rat> = (0..n).map(|y| t.rho.mats[a].get(y, x).clone()).collect();
            d.set_bracket((-1, x, 0, a), ax.iter().map(|c| -c).collect());
            d.set_bracket((0, a, -1, x), ax);
        }
        for (w, xi) in r.vectors().iter().enumerate() {
            let xi = RatMatrix::from_flat(ng, n, xi.clone());
            let v = r.coords(t.eta(&ea, &xi).data()).expect("orbit is closed");
            d.set_bracket((1, w, 0, a), v.iter().map(|c| -c).collect());
            d.set_bracket((0, a, 1, w), v);
        }
    }
    for (w, xi) in r.vectors().iter().enumerate() {
        for x in 0..n {
            let v: Vec<Rat> = (0..ng).map(|a| xi[a * n + x].clone()).collect();
            d.set_bracket((-1, x, 1, w), v.clone());
            d.set_bracket((1, w, -1, x), v);
        }
    }
    d.set_differential(-1, t.theta.clone());
    let top = (0..ng)
        .map(|b| {
            let v = t.eta(&unit_vec(ng, b), &t.theta).scale(&-Rat::one());
            r.coords(v.data()).expect("orbit is closed")
        })
        .collect();
    d.set_differential(0, RatMatrix::from_columns(top, r.dim()));
    d
}
