//! Built-in example triples.

use crate::exactla::{rat, Rat, RatMatrix};
use crate::functor::TripleMorphism;
use crate::triple::{GAction, LieAlgebra, LieLeibnizTriple};

pub const NAMES: [&str; 6] = [
    "abelian",
    "crossed_module_aff1",
    "heisenberg_leibniz",
    "sl2_adjoint_crossed",
    "sl2_fundamental_nilpotent",
    "filiform_leibniz3",
];

pub fn description(name: &str) -> Option<&'static str> {
    Some(match name {
        "abelian" => "1-dim trivial g acting trivially on a 1-dim V, zero embedding tensor",
        "crossed_module_aff1" => "aff(1) acting on itself by the adjoint action, embedding tensor the identity",
        "heisenberg_leibniz" => "2-dim Leibniz algebra e∘e = f from a 1-dim g with t·e = f and Θ(e) = t",
        "sl2_adjoint_crossed" => "sl2 acting on itself by the adjoint action, embedding tensor the identity",
        "sl2_fundamental_nilpotent" => "sl2 on its 2-dim module with Θ(e) = F, Θ(f) = 0; not stringent",
        "filiform_leibniz3" => "1-dim g acting on a 3-dim V by a nilpotent Jordan block, Θ(e1) = t; strict, not Lie",
        _ => return None,
    })
}

pub fn by_name(name: &str) -> Option<LieLeibnizTriple> {
    Some(match name {
        "abelian" => abelian(),
        "crossed_module_aff1" => crossed_module_aff1(),
        "heisenberg_leibniz" => heisenberg_leibniz(),
        "sl2_adjoint_crossed" => sl2_adjoint_crossed(),
        "sl2_fundamental_nilpotent" => sl2_fundamental_nilpotent(),
        "filiform_leibniz3" => filiform_leibniz3(),
        _ => return None,
    })
}

pub fn all() -> Vec<LieLeibnizTriple> {
    NAMES.iter().map(|n| by_name(n).expect("catalog name")).collect()
}

fn build(name: &str, g: LieAlgebra, rho: Vec<RatMatrix>, theta: RatMatrix) -> LieLeibnizTriple {
    let dim_v = theta.cols();
    let rho = GAction::new(dim_v, rho).expect("catalog action shape");
    LieLeibnizTriple::derive(name, g, rho, theta).expect("catalog triple is valid")
}

fn adjoint(name: &str, g: LieAlgebra) -> LieLeibnizTriple {
    let n = g.dim();
    let rho = (0..n).map(|i| g.ad_basis(i)).collect();
    build(name, g, rho, RatMatrix::identity(n))
}

fn sl2() -> LieAlgebra {
    // basis E, F, H
    LieAlgebra::from_brackets(3, &[(0, 1, &[(2, 1)]), (2, 0, &[(0, 2)]), (2, 1, &[(1, -2)])])
}

pub fn abelian() -> LieLeibnizTriple {
    build("abelian", LieAlgebra::abelian(1), vec![RatMatrix::zeros(1, 1)], RatMatrix::zeros(1, 1))
}

pub fn crossed_module_aff1() -> LieLeibnizTriple {
    adjoint("crossed_module_aff1", LieAlgebra::from_brackets(2, &[(0, 1, &[(1, 1)])]))
}

pub fn heisenberg_leibniz() -> LieLeibnizTriple {
    let t = RatMatrix::from_i64(&[&[0, 0], &[1, 0]]);
    build("heisenberg_leibniz", LieAlgebra::abelian(1), vec![t], RatMatrix::from_i64(&[&[1, 0]]))
}

pub fn sl2_adjoint_crossed() -> LieLeibnizTriple {
    adjoint("sl2_adjoint_crossed", sl2())
}

pub fn sl2_fundamental_nilpotent() -> LieLeibnizTriple {
    let e = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
    let f = RatMatrix::from_i64(&[&[0, 0], &[1, 0]]);
    let h = RatMatrix::from_i64(&[&[1, 0], &[0, -1]]);
    let mut theta = RatMatrix::zeros(3, 2);
    theta.set(1, 0, rat(1));
    build("sl2_fundamental_nilpotent", sl2(), vec![e, f, h], theta)
}

pub fn filiform_leibniz3() -> LieLeibnizTriple {
    let n = RatMatrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
    build("filiform_leibniz3", LieAlgebra::abelian(1), vec![n], RatMatrix::from_i64(&[&[1, 0, 0]]))
}

fn diag(entries: Vec<Rat>) -> RatMatrix {
    let n = entries.len();
    let mut m = RatMatrix::zeros(n, n);
    for (i, e) in entries.into_iter().enumerate() {
        m.set(i, i, e);
    }
    m
}

/// `t ↦ λt`, `e ↦ λe`, `f ↦ λ²f` on `heisenberg_leibniz`.
pub fn heisenberg_scaling(lambda: Rat) -> TripleMorphism {
    let sq = &lambda * &lambda;
    TripleMorphism { phi: diag(vec![lambda.clone()]), chi: diag(vec![lambda, sq]) }
}

/// `t ↦ λt`, `eₖ ↦ λᵏeₖ` on `filiform_leibniz3`.
pub fn filiform_scaling(lambda: Rat) -> TripleMorphism {
    let powers = (1..=3).map(|k| num_traits::pow(lambda.clone(), k)).collect();
    TripleMorphism { phi: diag(vec![lambda]), chi: diag(powers) }
}

/// `filiform_leibniz3 → heisenberg_leibniz`: `e1 ↦ e`, `e2 ↦ f`, `e3 ↦ 0`.
pub fn filiform_to_heisenberg() -> TripleMorphism {
    TripleMorphism { phi: RatMatrix::identity(1), chi: RatMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]) }
}

/// `a ↦ a`, `b ↦ 2b` on both sides of `crossed_module_aff1`.
pub fn aff1_automorphism() -> TripleMorphism {
    let m = diag(vec![rat(1), rat(2)]);
    TripleMorphism { phi: m.clone(), chi: m }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for n in NAMES {
            assert_eq!(by_name(n).unwrap().name, n);
            assert!(description(n).is_some());
        }
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn flags_by_example() {
        let f = sl2_adjoint_crossed().flags;
        assert!(f.is_crossed_module && f.is_stringent);
        let f = filiform_leibniz3().flags;
        assert!(!f.is_lie_v && f.is_strict && f.is_semistrict && f.is_stringent);
        assert_eq!(filiform_leibniz3().ideal_of_squares().dim(), 2);
        let f = abelian().flags;
        assert!(f.is_lie_v && f.is_strict && f.is_semistrict && f.is_stringent && f.is_crossed_module);
    }
}
