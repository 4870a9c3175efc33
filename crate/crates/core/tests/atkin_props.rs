mod common;

use cmeta_core::arith::isqrt;
use cmeta_core::atkin::*;
use cmeta_core::classpoly::{check_integrality_conditions, compute_class_polynomial};
use cmeta_core::ffield::{has_multiple_root, roots_mod_l, roots_with_multiplicity, FpElement, FpPolynomial};
use cmeta_core::modpoly::{compute_modular_polynomial, discriminant_in_j, embedded, evaluate_in_j_mod_l, zpoly_divides, ModularPolynomial};
use cmeta_core::qforms::{b_candidates, Discriminant};
use common::*;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every `B mod 2N` with `B^2 = D mod 4N`.
fn all_b(d: i64, n: i64) -> Vec<i64> {
    (0..2 * n)
        .filter(|&b| ((b * b - d) as i128).rem_euclid(4 * n as i128) == 0)
        .collect()
}

/// Exhaustive search over the finite box `|u| <= 2 sqrt N`, `|v| <= 2 sqrt(N/|D|)`.
fn con1_exists(d: i64, n: i64, b: i64) -> bool {
    let ub = 2 * isqrt(n as u128) as i64 + 1;
    let vb = 2 * isqrt((n / -d) as u128 + 1) as i64 + 1;
    (-ub..=ub).any(|u| {
        (-vb..=vb).any(|v| {
            u * u - d * v * v == 4 * n && (u - b * v).rem_euclid(2 * n) == 0
        })
    })
}

#[test]
fn no_multiple_root_below_minus_four_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut with_b = 0;
    for _ in 0..10_000 {
        let i = rng.gen_range(0..SMALL_PRIMES.len() - 1);
        let j = rng.gen_range(i + 1..SMALL_PRIMES.len());
        let n = SMALL_PRIMES[i] * SMALL_PRIMES[j];
        let d = random_disc(&mut rng, -60 * n, -4 * n - 1);
        for b in all_b(d, n) {
            with_b += 1;
            assert_eq!(multiple_root_condition(d, n, b).unwrap(), None, "D = {d}, N = {n}");
        }
    }
    assert!(with_b > 1000);
}

/// At `D = -4N` the root `i sqrt(N)` is fixed by `W_N`, so the bound is not strict.
#[test]
fn boundary_discriminant_has_a_multiple_root() {
    for n in [15i64, 21, 35, 39, 65, 77, 143] {
        let d = -4 * n;
        assert_eq!(all_b(d, n), vec![0]);
        let sol = multiple_root_condition(d, n, 0).unwrap().unwrap();
        assert_eq!((sol.u, sol.v.abs()), (0, 1));
    }
    let phi = compute_modular_polynomial(3, 5).unwrap();
    let h = compute_class_polynomial(-60, 3, 5, 0).unwrap();
    assert!(zpoly_divides(&h.coeffs, &discriminant_in_j(&phi).unwrap()));
}

#[test]
fn predicate_matches_exhaustive_search() {
    for n in [15i64, 21, 35, 39, 65, 77, 143] {
        for d in (-4 * n..=-3).filter(|&d| is_disc(d)) {
            for b in all_b(d, n) {
                let got = multiple_root_condition(d, n, b).unwrap();
                assert_eq!(got.is_some(), con1_exists(d, n, b), "D = {d}, N = {n}, B = {b}");
                if let Some(sol) = got {
                    assert!(sol.verify(d, n, b));
                    assert_eq!(
                        sol.u as i128 * sol.u as i128 - d as i128 * (sol.v as i128).pow(2),
                        4 * n as i128
                    );
                }
                if let Some(w) = wn_squared_fixes_class(d, n, b).unwrap() {
                    assert!(w.verify(d, n, b));
                    assert_ne!(w.y, 0);
                }
            }
        }
    }
}

/// `Phi(X, jbar)` over `F_q`.
fn phi_at_j(phi: &ModularPolynomial, jbar: u64, q: u64) -> FpPolynomial {
    let coeffs: Vec<FpElement> = phi
        .coeffs
        .iter()
        .map(|row| {
            let mut acc = BigInt::zero();
            for c in row.iter().rev() {
                acc = (acc * BigInt::from(jbar) + c) % BigInt::from(q);
            }
            FpElement::new(i64::try_from(acc).unwrap(), q).unwrap()
        })
        .collect();
    FpPolynomial::from_elements(&coeffs, q)
}


#[test]
fn all_or_none_across_class_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let polys: Vec<ModularPolynomial> = SUPPORTED_PAIRS
        .iter()
        .map(|&(p1, p2)| compute_modular_polynomial(p1, p2).unwrap())
        .collect();
    let mut instances = 0;
    let mut positive = 0;
    while instances < 10 {
        let phi = &polys[rng.gen_range(0..polys.len())];
        let (p1, p2) = (phi.p1, phi.p2);
        let n = p1 * p2;
        // bias towards small |D| so that multiple roots show up
        let d = random_disc(&mut rng, -if instances % 2 == 0 { 4 * n } else { 2000 }, -3);
        if !check_integrality_conditions(d, p1, p2) {
            continue;
        }
        let Some(q) = split_prime(d, 10_000) else {
            continue;
        };
        let cands = b_candidates(&Discriminant::new(d).unwrap(), n).unwrap();
        let b = cands[rng.gen_range(0..cands.len())];
        let h = compute_class_polynomial(d, p1, p2, b).unwrap();
        let roots = roots_mod_l(&FpPolynomial::from_bigints(&h.coeffs, q), &mut rng);
        assert_eq!(roots.len(), h.degree());
        let flags: Vec<bool> = roots
            .iter()
            .map(|&w| has_multiple_root(&evaluate_in_j_mod_l(phi, w)))
            .collect();
        assert!(
            flags.iter().all(|&f| f == flags[0]),
            "D = {d}, ({p1},{p2}), B = {b}, q = {q}: {flags:?}"
        );
        let predicted = is_multiple_root_case(d, p1, p2, b).unwrap().is_some();
        if predicted {
            assert!(flags[0]);
            positive += 1;
        }
        instances += 1;
    }
    println!("instances with a multiple root: {positive} of {instances}");
}

#[test]
fn predicate_agrees_with_discriminant_divisibility() {
    let pairs = [(3, 5), (3, 7), (3, 13), (5, 7)];
    let mut positives = 0;
    let mut total = 0;
    for (p1, p2) in pairs {
        let phi = compute_modular_polynomial(p1, p2).unwrap();
        let disc_j = discriminant_in_j(&phi).unwrap();
        let n = p1 * p2;
        for d in (-300..=-3).filter(|&d| is_disc(d)) {
            if !check_integrality_conditions(d, p1, p2) {
                continue;
            }
            for b in b_candidates(&Discriminant::new(d).unwrap(), n).unwrap() {
                let h = compute_class_polynomial(d, p1, p2, b).unwrap();
                let divides = zpoly_divides(&h.coeffs, &disc_j);
                let predicted = multiple_root_condition(d, n, b).unwrap().is_some();
                assert_eq!(divides, predicted, "D = {d}, ({p1},{p2}), B = {b}");
                positives += predicted as usize;
                total += 1;
            }
        }
    }
    assert!(positives > 0 && positives < total);
}

#[test]
fn four_linear_factors_at_the_example_j_values() {
    let phi = embedded(3, 13).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for jbar in [229u64, 2979, 2874, 2696] {
        let f = phi_at_j(&phi, jbar, 3593);
        let count: usize = roots_with_multiplicity(&f, &mut rng)
            .iter()
            .map(|r| r.multiplicity)
            .sum();
        assert!(count >= 4, "J = {jbar}: {count} roots");
    }
}

#[test]
fn example_witnesses() {
    let sol = multiple_root_condition(-56, 39, 10).unwrap().unwrap();
    assert_eq!((sol.u, sol.v), (10, 1));
    assert!(multiple_root_condition(-56, 39, 16).unwrap().is_none());
    let w = wn_squared_fixes_class(-56, 39, 10).unwrap().unwrap();
    assert!(w.verify(-56, 39, 10));
}
