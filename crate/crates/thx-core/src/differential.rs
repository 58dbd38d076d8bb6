//! The differential on the hierarchy, its extension to degrees `0` and `+1`,
//! and the cyclic modules of differentials with their `μ` maps.
//!
//! Degrees are signed: `T₋ₗ` sits in degree `−l`, `g` in degree `0` and
//! `R_Θ` in degree `+1`. [`DifferentialTower::out_of`] is indexed by the
//! source degree.

use num_traits::One;
use thiserror::Error;

use crate::exactla::{axpy, image, is_zero_vec, kernel, rat, unit_vec, zero_vec, Rat, RatMatrix};
use crate::freegla::{bilinear_matrix, unshuffle_matrix, BilinearValue, Elem, WedgeBasis};
use crate::hierarchy::Hierarchy;
use crate::report::{Check, VerificationReport};
use crate::triple::{orbit_closure, CyclicModule, LieLeibnizTriple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DifferentialError {
    #[error("differential into degree -{level} is not well defined: {witness}")]
    WellDefinednessFailure { level: usize, witness: String },
    #[error("symmetric bracket does not factor through T₋₂: {0}")]
    FactorizationFailure(String),
    #[error("bracket onto T₋{0} is not surjective")]
    NotSurjective(usize),
    #[error("mu map in degree {degree} is not well defined: {witness}")]
    MuIllDefined { degree: i64, witness: String },
}

fn parity_sign(level: usize) -> Rat {
    if level.is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// The degree `+1` bilinear maps `m` on `Λ²T`.
#[derive(Clone, Debug)]
pub struct MMap {
    dims: Vec<usize>,
    sym2: Vec<Vec<Vec<Rat>>>,
    /// `by_level[k - 1][r]` is `ρ(Θ eᵣ)` on `T₋ₖ`.
    by_level: Vec<Vec<RatMatrix>>,
}

impl MMap {
    pub fn new(t: &LieLeibnizTriple, h: &Hierarchy) -> Self {
        let n = t.dim_v;
        let sym2 = (0..n)
            .map(|r| {
                (0..n)
                    .map(|s| {
                        let mut v = t.leib[r][s].clone();
                        axpy(&mut v, &rat(1), &t.leib[s][r]);
                        v
                    })
                    .collect()
            })
            .collect();
        let by_level = (1..=h.depth).map(|k| (0..n).map(|r| h.action_of(k, &t.theta.column(r))).collect()).collect();
        MMap { dims: h.dims(), sym2, by_level }
    }

    /// `m(x∧y)` on basis elements; lands in level `|x| + |y| − 1`.
    pub fn value(&self, x: Elem, y: Elem) -> BilinearValue {
        match (x.0, y.0) {
            (1, 1) => Some((1, self.sym2[x.1][y.1].clone())),
            (1, k) => Some((k, self.by_level[k - 1][x.1].column(y.1))),
            (k, 1) => {
                let (_, v) = self.value(y, x)?;
                let s = -parity_sign(k);
                Some((k, v.into_iter().map(|c| c * &s).collect()))
            }
            (a, b) => Some((a + b - 1, zero_vec(self.out_dim(a + b - 1)))),
        }
    }

    fn out_dim(&self, level: usize) -> usize {
        self.dims[level - 1]
    }
}

/// `∂` from degree `−depth` up to `+1`.
#[derive(Clone, Debug)]
pub struct DifferentialTower {
    pub depth: usize,
    /// `maps[deg + depth]` leaves degree `deg`.
    maps: Vec<RatMatrix>,
    pub r_theta: CyclicModule,
}

impl DifferentialTower {
    pub fn build(h: &Hierarchy) -> Result<Self, DifferentialError> {
        let t = &h.triple;
        let mmap = MMap::new(t, h);
        let mut lower: Vec<RatMatrix> = Vec::new();
        for level in 2..=h.depth {
            let (w2, q2) = h.q2_matrix(level);
            let j = Self::descent_matrix(h, &mmap, &lower, &w2);
            for v in kernel(&q2).basis_vectors() {
                let out = j.mul_vec(&v);
                if !is_zero_vec(&out) {
                    return Err(DifferentialError::WellDefinednessFailure {
                        level: level - 1,
                        witness: format!("kernel vector {v:?} maps to {out:?}"),
                    });
                }
            }
            let s = q2.right_inverse().ok_or(DifferentialError::NotSurjective(level))?;
            lower.push(j.mul(&s));
        }
        if let Some(direct) = Self::direct_first(h)? {
            if direct != lower[0] {
                return Err(DifferentialError::FactorizationFailure(
                    "two constructions of the first map disagree".into(),
                ));
            }
        }
        let r_theta = t.r_theta();
        let mut maps: Vec<RatMatrix> = lower.into_iter().rev().collect();
        maps.push(t.theta.clone());
        maps.push(Self::top_matrix(t, &r_theta));
        maps.push(RatMatrix::zeros(0, r_theta.dim()));
        Ok(DifferentialTower { depth: h.depth, maps, r_theta })
    }

    /// `j(x∧y) = m(x∧y) + q(∂x, y) + (−1)^{|x|} q(x, ∂y)` with `∂ = 0` on `T₋₁`.
    fn descent_matrix(h: &Hierarchy, mmap: &MMap, lower: &[RatMatrix], w2: &WedgeBasis) -> RatMatrix {
        let out_level = w2.total - 1;
        let inner =
            |level: usize, idx: usize| -> Option<Vec<Rat>> { (level >= 2).then(|| lower[level - 2].column(idx)) };
        bilinear_matrix(w2, h.dim(out_level), |x, y| {
            let (_, mut v) = mmap.value(x, y)?;
            if let Some(dx) = inner(x.0, x.1) {
                axpy(&mut v, &rat(1), &h.bracket(x.0 - 1, &dx, y.0, &unit_vec(h.dim(y.0), y.1)));
            }
            if let Some(dy) = inner(y.0, y.1) {
                axpy(&mut v, &parity_sign(x.0), &h.bracket(x.0, &unit_vec(h.dim(x.0), x.1), y.0 - 1, &dy));
            }
            Some((out_level, v))
        })
    }

    /// `σ ∘ section` on `T₋₂`, where `σ(eᵢ⊗eⱼ) = ½ eᵢ∘eⱼ`.
    fn direct_first(h: &Hierarchy) -> Result<Option<RatMatrix>, DifferentialError> {
        let (Some(free), Some(c)) = (&h.free, &h.levels[1].construction) else {
            return Ok(None);
        };
        let sigma = Hierarchy::sigma_matrix(&h.triple, free);
        for v in c.kernel.basis_vectors() {
            if !is_zero_vec(&sigma.mul_vec(&v)) {
                return Err(DifferentialError::FactorizationFailure(format!("{v:?}")));
            }
        }
        Ok(Some(sigma.mul(&c.quotient.sect)))
    }

    /// `b ↦ −η(b;Θ)` in `R_Θ` word coordinates.
    fn top_matrix(t: &LieLeibnizTriple, r_theta: &CyclicModule) -> RatMatrix {
        let ng = t.dim_g();
        let cols = (0..ng)
            .map(|b| {
                let v = t.eta(&unit_vec(ng, b), &t.theta).scale(&-Rat::one()).into_data();
                r_theta.coords(&v).expect("η(b;Θ) lies in R_Θ")
            })
            .collect();
        RatMatrix::from_columns(cols, r_theta.dim())
    }

    /// The map leaving degree `deg`, for `−depth ≤ deg ≤ 1`.
    pub fn out_of(&self, deg: i64) -> &RatMatrix {
        &self.maps[(deg + self.depth as i64) as usize]
    }

    /// `∂` from `T₋ₗ` to `T₋ₗ₊₁`, zero on `T₋₁` by convention.
    pub fn inner(&self, level: usize) -> Option<&RatMatrix> {
        (level >= 2).then(|| self.out_of(-(level as i64)))
    }

    pub fn verify(&self, h: &Hierarchy) -> VerificationReport {
        let t = &h.triple;
        let mmap = MMap::new(t, h);
        let mut report = VerificationReport::new();

        let mut sq = Check::new("∂∘∂ = 0");
        for deg in -(self.depth as i64)..=0 {
            let prod = self.out_of(deg + 1).mul(self.out_of(deg));
            sq.record(prod.is_zero(), || format!("leaving degree {deg}"));
        }
        report.push(sq);

        let mut heq = Check::new("∂ is h-equivariant");
        let mut meq = Check::new("m is h-equivariant");
        for r in 0..t.dim_v {
            let hv = t.theta.column(r);
            let act = |deg: i64| -> RatMatrix {
                match deg {
                    0 => t.g.ad(&hv),
                    d => h.action_of((-d) as usize, &hv),
                }
            };
            for deg in -(self.depth as i64)..0 {
                let d = self.out_of(deg);
                let ok = act(deg + 1).mul(d) == d.mul(&act(deg));
                heq.record(ok, || format!("h = Θ(e{r}), leaving degree {deg}"));
            }
            for level in 2..=h.depth {
                let w2 = h.wedge2(level);
                let m = bilinear_matrix(&w2, h.dim(level - 1), |x, y| mmap.value(x, y));
                let lifted = wedge_derivation(&w2, &w2, false, |l, i| Some((l, act(-(l as i64)).column(i))));
                let ok = act(-(level as i64) + 1).mul(&m) == m.mul(&lifted);
                meq.record(ok, || format!("h = Θ(e{r}), level {level}"));
            }
        }
        report.push(heq);
        report.push(meq);

        let mut comm = Check::new("∂q = m + q∂ on Λ²");
        let mut handy = Check::new("m∂ + ∂m = 0 on Λ²");
        for level in 2..=h.depth {
            let (w2, q2) = h.q2_matrix(level);
            let lower: Vec<RatMatrix> = (2..=self.depth).map(|l| self.inner(l).unwrap().clone()).collect();
            let j = Self::descent_matrix(h, &mmap, &lower, &w2);
            let dq = self.out_of(-(level as i64)).mul(&q2);
            comm.record(dq == j, || format!("level {level}"));

            if level >= 3 {
                let m_here = bilinear_matrix(&w2, h.dim(level - 1), |x, y| mmap.value(x, y));
                let w2_below = h.wedge2(level - 1);
                let m_below = bilinear_matrix(&w2_below, h.dim(level - 2), |x, y| mmap.value(x, y));
                let d_wedge =
                    wedge_derivation(&w2, &w2_below, true, |l, i| self.inner(l).map(|d| (l - 1, d.column(i))));
                let mut lhs = m_below.mul(&d_wedge);
                if let Some(d) = self.inner(level - 1) {
                    lhs = lhs.add(&d.mul(&m_here));
                }
                handy.record(lhs.is_zero(), || format!("level {level}"));
            }
        }
        report.push(comm);
        report.push(handy);
        report.push(anticommutator_check(h, &mmap));

        let first = self.out_of(-2);
        let img = image(first);
        report.push(Check::single("image of ∂₋₁ is the ideal of squares", img == t.ideal_of_squares(), || {
            format!("image dim {} vs ideal dim {}", img.dim(), t.ideal_of_squares().dim())
        }));
        report
    }
}

/// Extends a map on `T` to `Λ²` as a derivation of the given parity.
/// `f(level, idx)` returns the image level and coordinates, or `None` for zero.
fn wedge_derivation(
    src: &WedgeBasis,
    dst: &WedgeBasis,
    odd: bool,
    f: impl Fn(usize, usize) -> Option<(usize, Vec<Rat>)>,
) -> RatMatrix {
    let cols = src
        .monomials
        .iter()
        .map(|m| {
            let (x, y) = (m[0], m[1]);
            let mut acc = zero_vec(dst.dim());
            if let Some((l, v)) = f(x.0, x.1) {
                for (t, c) in v.iter().enumerate() {
                    dst.accumulate(&mut acc, c, &[(l, t), y]);
                }
            }
            if let Some((l, v)) = f(y.0, y.1) {
                let sign = if odd { parity_sign(x.0) } else { Rat::one() };
                for (t, c) in v.iter().enumerate() {
                    dst.accumulate(&mut acc, &(c * &sign), &[x, (l, t)]);
                }
            }
            acc
        })
        .collect();
    RatMatrix::from_columns(cols, dst.dim())
}

/// `m∘q + q∘m = 0` on `Λ³`, using the unshuffle extensions of both maps.
pub fn anticommutator_check(h: &Hierarchy, mmap: &MMap) -> Check {
    let mut c = Check::new("m∘q + q∘m = 0 on Λ³");
    let q = |x: Elem, y: Elem| h.q_value(x, y);
    let m = |x: Elem, y: Elem| mmap.value(x, y);
    for level in 3..=h.depth {
        let w3 = h.wedge3(level);
        let w2 = h.wedge2(level);
        let w2_below = h.wedge2(level - 1);
        let mq = bilinear_matrix(&w2, h.dim(level - 1), m).mul(&unshuffle_matrix(&w3, &w2, q));
        let qm = bilinear_matrix(&w2_below, h.dim(level - 1), q).mul(&unshuffle_matrix(&w3, &w2_below, m));
        c.record(mq.add(&qm).is_zero(), || format!("level {level}"));
    }
    c
}

/// One degree of the `μ` family.
#[derive(Clone, Debug)]
pub struct MuLevel {
    pub degree: i64,
    /// Orbit of the differential leaving `degree − 1`.
    pub module: CyclicModule,
    /// `R_Θ` word coordinates → `module` word coordinates.
    pub mu: RatMatrix,
    /// `w·∂` for every `R_Θ` word `w`, flattened row-major.
    pub images: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug)]
pub struct MuFamily {
    pub levels: Vec<MuLevel>,
}

fn hom_act(cod: &RatMatrix, dom: &RatMatrix, phi: &[Rat]) -> Vec<Rat> {
    let p = RatMatrix::from_flat(cod.rows(), dom.rows(), phi.to_vec());
    cod.mul(&p).sub(&p.mul(dom)).into_data()
}

fn apply_word(word: &[usize], seed: &[Rat], act: &impl Fn(usize, &[Rat]) -> Vec<Rat>) -> Vec<Rat> {
    word.iter().rev().fold(seed.to_vec(), |v, &a| act(a, &v))
}

impl MuFamily {
    pub fn build(h: &Hierarchy, tower: &DifferentialTower) -> Result<Self, DifferentialError> {
        let t = &h.triple;
        let ng = t.dim_g();
        let r_theta = &tower.r_theta;
        let ad: Vec<RatMatrix> = (0..ng).map(|a| t.g.ad_basis(a)).collect();
        let mut levels = Vec::new();
        for degree in -(h.depth as i64 - 1)..=1 {
            let (dom, cod): (Vec<RatMatrix>, Vec<RatMatrix>) = match degree {
                1 => (ad.clone(), r_theta.actions.clone()),
                0 => (t.rho.mats.clone(), ad.clone()),
                d => {
                    let l = (-d) as usize;
                    (h.levels[l].action.clone(), h.levels[l - 1].action.clone())
                }
            };
            let partial = tower.out_of(degree - 1);
            let seed = partial.data().to_vec();
            let act = |a: usize, v: &[Rat]| hom_act(&cod[a], &dom[a], v);
            let module = orbit_closure(seed.len(), seed.clone(), ng, act);
            let images: Vec<Vec<Rat>> = r_theta.words.iter().map(|w| apply_word(w, &seed, &act)).collect();
            for (w, img) in images.iter().enumerate() {
                for a in 0..ng {
                    let lhs = act(a, img);
                    let mut rhs = zero_vec(seed.len());
                    for (v, other) in images.iter().enumerate() {
                        axpy(&mut rhs, r_theta.actions[a].get(v, w), other);
                    }
                    if lhs != rhs {
                        return Err(DifferentialError::MuIllDefined {
                            degree,
                            witness: format!("generator {a} on word {:?}", r_theta.words[w]),
                        });
                    }
                }
            }
            let cols = images
                .iter()
                .map(|img| {
                    module.coords(img).ok_or_else(|| DifferentialError::MuIllDefined {
                        degree,
                        witness: "word image outside the orbit".into(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mu = RatMatrix::from_columns(cols, module.dim());
            levels.push(MuLevel { degree, module, mu, images });
        }
        Ok(MuFamily { levels })
    }

    pub fn level(&self, degree: i64) -> Option<&MuLevel> {
        self.levels.iter().find(|l| l.degree == degree)
    }

    pub fn verify(&self, tower: &DifferentialTower) -> VerificationReport {
        let r_theta = &tower.r_theta;
        let mut surj = Check::new("μ surjective");
        let mut equiv = Check::new("μ g-equivariant");
        let mut seed = Check::new("μ(Θ) = ∂");
        let mut bound = Check::new("dim R ≤ dim R_Θ");
        let mut ident = Check::new("μ₀ is the identity");
        for l in &self.levels {
            surj.record(l.mu.rank() == l.module.dim(), || format!("degree {}", l.degree));
            for (a, act) in r_theta.actions.iter().enumerate() {
                let ok = l.mu.mul(act) == l.module.actions[a].mul(&l.mu);
                equiv.record(ok, || format!("degree {}, generator {a}", l.degree));
            }
            let d = tower.out_of(l.degree - 1).data().to_vec();
            let ok = if r_theta.dim() == 0 { is_zero_vec(&d) } else { l.images[0] == d };
            seed.record(ok, || format!("degree {}", l.degree));
            bound.record(l.module.dim() <= r_theta.dim(), || format!("degree {}", l.degree));
            if l.degree == 0 {
                ident.record(l.mu == RatMatrix::identity(r_theta.dim()), || "μ₀ differs from the identity".into());
            }
        }
        let mut report = VerificationReport::new();
        for c in [surj, equiv, seed, bound, ident] {
            report.push(c);
        }
        report
    }
}
