mod common;

use cmeta_core::classpoly::PrecisionPolicy;
use cmeta_core::modpoly::*;
use cmeta_core::precision::{j_invariant, j_invariant_at, w_pow_s, ApComplex, UpperHalfPoint};
use cmeta_core::sl2::Mat2;
use cmeta_core::Error;
use common::SUPPORTED_PAIRS;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

const PREC: u32 = 256;

fn all_polys() -> &'static Vec<ModularPolynomial> {
    static CELL: OnceLock<Vec<ModularPolynomial>> = OnceLock::new();
    CELL.get_or_init(|| {
        SUPPORTED_PAIRS
            .iter()
            .map(|&(p1, p2)| compute_modular_polynomial(p1, p2).unwrap())
            .collect()
    })
}

/// log2 of the largest term `|c| |x|^kx |j|^kj`.
fn term_scale(phi: &ModularPolynomial, x: &ApComplex, j: &ApComplex) -> f64 {
    let (lx, lj) = (x.log2_abs(), j.log2_abs());
    let mut best = f64::NEG_INFINITY;
    for (kx, row) in phi.coeffs.iter().enumerate() {
        for (kj, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let lc = c.abs().bits() as f64;
            best = best.max(lc + kx as f64 * lx + kj as f64 * lj);
        }
    }
    best
}

fn random_tau<R: Rng>(rng: &mut R) -> UpperHalfPoint {
    UpperHalfPoint::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.6..1.6), PREC + 64).unwrap()
}

#[test]
fn vanishes_at_eta_quotient_and_j() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for phi in all_polys() {
        for _ in 0..20 {
            let tau = random_tau(&mut rng);
            let x = w_pow_s(&tau, phi.p1, phi.p2, PREC).unwrap();
            let j = j_invariant(&tau, PREC).unwrap();
            let v = phi.eval_complex(&x, &j);
            let scale = term_scale(phi, &x, &j);
            assert!(
                v.log2_abs() < scale - PREC as f64 + 40.0,
                "({},{}): 2^{} vs scale 2^{scale}",
                phi.p1,
                phi.p2,
                v.log2_abs()
            );
        }
    }
}

#[test]
fn second_j_root_is_at_the_involution_image() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for phi in all_polys().iter().filter(|p| p.deg_j == 2) {
        let n = phi.p1 * phi.p2;
        let wn = Mat2::new(0, n, -1, 0);
        for _ in 0..10 {
            let tau = random_tau(&mut rng);
            let x = w_pow_s(&tau, phi.p1, phi.p2, PREC).unwrap();
            let j2 = j_invariant_at(&tau, &wn, PREC).unwrap();
            let v = phi.eval_complex(&x, &j2);
            let scale = term_scale(phi, &x, &j2);
            assert!(v.log2_abs() < scale - PREC as f64 + 40.0);
        }
    }
}

#[test]
fn degrees_and_normalization() {
    for phi in all_polys() {
        let (p1, p2) = (phi.p1, phi.p2);
        assert_eq!(phi.deg_x, degree_x(p1, p2));
        assert_eq!(phi.deg_x as i64, (p1 + 1) * (p2 + 1));
        assert_eq!(phi.deg_j, degree_j(p1, p2));
        assert!(phi.coeff(phi.deg_x, 0).is_one());
        for kj in 1..=phi.deg_j {
            assert!(phi.coeff(phi.deg_x, kj).is_zero());
        }
        assert!(phi.x_slice(phi.deg_j).iter().any(|c| !c.is_zero()));
    }
}

#[test]
fn recomputation_is_stable_under_precision() {
    let policy = PrecisionPolicy {
        start: 1024,
        ..PrecisionPolicy::default()
    };
    for phi in all_polys().iter().take(3) {
        let again = compute_modular_polynomial_with(phi.p1, phi.p2, &policy).unwrap();
        assert_eq!(&again, phi);
    }
}

#[test]
fn argument_order_does_not_matter() {
    assert_eq!(compute_modular_polynomial(5, 3).unwrap(), all_polys()[0]);
}

#[test]
fn embedded_matches_recomputation() {
    let emb = embedded(3, 13).unwrap();
    let fresh = all_polys().iter().find(|p| (p.p1, p.p2) == (3, 13)).unwrap();
    assert_eq!(&emb, fresh);
    assert_eq!(emb.coeffs[55], vec![BigInt::from(704), BigInt::from(-1), BigInt::zero()]);
    assert!(embedded(3, 5).is_none());
}

#[test]
fn serialization_round_trip() {
    for phi in all_polys() {
        let text = phi.serialize();
        assert_eq!(&ModularPolynomial::deserialize(&text).unwrap(), phi);
    }
}

#[test]
fn unsupported_levels() {
    assert!(matches!(compute_modular_polynomial(3, 11), Err(Error::DegreeTooLarge(10))));
    assert!(matches!(compute_modular_polynomial(7, 13), Err(Error::DegreeTooLarge(6))));
    assert!(matches!(compute_modular_polynomial(3, 3), Err(Error::UnsupportedLevel(_))));
    assert!(matches!(compute_modular_polynomial(3, 9), Err(Error::UnsupportedLevel(_))));
}

#[test]
fn coset_tops_cover_the_projective_line() {
    for &(p1, p2) in &SUPPORTED_PAIRS {
        let n = p1 * p2;
        let cosets = coset_representatives(n).unwrap();
        assert_eq!(cosets.len() as i64, (p1 + 1) * (p2 + 1));
        assert_eq!(cosets[0], Mat2::IDENTITY);
        for (i, g) in cosets.iter().enumerate() {
            assert!(g.is_unimodular());
            for h in &cosets[i + 1..] {
                // same coset of Gamma^0(N) iff g h^-1 has upper-right entry divisible by N
                let q = g.mul(&h.inverse().unwrap());
                assert_ne!(q.b.rem_euclid(n), 0, "{g} ~ {h}");
            }
        }
    }
}

#[test]
fn discriminant_needs_quadratic_j() {
    let phi = all_polys().iter().find(|p| p.deg_j == 4).unwrap();
    assert!(matches!(
        discriminant_in_j(phi),
        Err(Error::WrongDegree { expected: 2, found: 4 })
    ));
}

#[test]
fn integer_polynomial_helpers() {
    let f: Vec<BigInt> = [6, 5, 1].iter().map(|&v| BigInt::from(v)).collect();
    let g: Vec<BigInt> = [2, 1].iter().map(|&v| BigInt::from(v)).collect();
    let h: Vec<BigInt> = [3, 1].iter().map(|&v| BigInt::from(v)).collect();
    assert_eq!(zpoly_mul(&g, &h), f);
    assert!(zpoly_divides(&g, &f));
    let one: Vec<BigInt> = vec![BigInt::one()];
    assert!(!zpoly_divides(&g, &zpoly_sub(&f, &one)));
    assert_eq!(zpoly_rem_monic(&zpoly_sub(&f, &one), &g), vec![BigInt::from(-1)]);
}
