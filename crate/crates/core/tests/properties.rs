//! Randomized invariants, 500 cases each, from a pinned seed.

use std::collections::BTreeMap;

use eichler_core::ec::{division_poly, phi_poly, Curve, Point};
use eichler_core::ff::Fp2;
use eichler_core::numth::{is_prime, primes_up_to};
use eichler_core::qform::{assigned_characters, class_group, compose, form_genus, identity, inverse, reduce};
use eichler_core::quat::{QuatAlgebra, QuatElement};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: [u8; 32] = *b"eichler orders of level c, seed!";

fn runner() -> TestRunner {
    let config = Config { cases: 500, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn disc() -> impl Strategy<Value = i64> {
    (3i64..4000).prop_map(|n| -n).prop_filter("discriminant", |d| d.rem_euclid(4) <= 1)
}

#[test]
fn class_group_axioms() {
    runner()
        .run(&(disc(), any::<usize>(), any::<usize>(), any::<usize>()), |(d, i, j, k)| {
            let cl = class_group(d).unwrap();
            let (f, g, h) = (cl[i % cl.len()], cl[j % cl.len()], cl[k % cl.len()]);
            let e = identity(d).unwrap();
            prop_assert_eq!(compose(&f, &e).unwrap(), f);
            prop_assert_eq!(compose(&f, &reduce(&inverse(&f)).unwrap()).unwrap(), e);
            prop_assert_eq!(compose(&f, &g).unwrap(), compose(&g, &f).unwrap());
            let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
            prop_assert_eq!(left, compose(&f, &compose(&g, &h).unwrap()).unwrap());
            prop_assert!(cl.contains(&left));
            Ok(())
        })
        .unwrap();
}

#[test]
fn genera_are_equal_sized() {
    runner()
        .run(&disc(), |d| {
            let cl = class_group(d).unwrap();
            let mu = assigned_characters(d).unwrap().len() as u32;
            let mut sizes: BTreeMap<Vec<i32>, usize> = BTreeMap::new();
            for f in &cl {
                *sizes.entry(form_genus(f).unwrap()).or_default() += 1;
            }
            let genera = 1usize << mu.saturating_sub(1);
            prop_assert_eq!(sizes.len(), genera);
            prop_assert!(sizes.values().all(|&s| s * genera == cl.len()));
            Ok(())
        })
        .unwrap();
}

#[test]
fn reduced_norm_is_multiplicative() {
    let coeffs = prop::array::uniform4(-2000i128..=2000);
    runner()
        .run(&(1i64..40000, 1i64..10000, coeffs.clone(), coeffs), |(cp, q, x, y)| {
            let alg = QuatAlgebra { cp, q };
            let (x, y) = (QuatElement::from_ints(alg, x), QuatElement::from_ints(alg, y));
            prop_assert_eq!(x.mul(&y).unwrap().nrd(), x.nrd() * y.nrd());
            prop_assert_eq!(x.mul(&x.conj()).unwrap(), QuatElement::one(alg).scale(x.nrd()));
            Ok(())
        })
        .unwrap();
}

#[test]
fn division_polynomials_vanish_on_torsion() {
    let primes: Vec<u64> = primes_up_to(80).into_iter().filter(|&p| p > 3).map(|p| p as u64).collect();
    let strat = (prop::sample::select(primes), 2i64..=9, any::<u64>());
    runner()
        .run(&strat, |(p, n, seed)| {
            prop_assume!(n as u64 % p != 0);
            let k = Fp2::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = loop {
                if let Ok(e) = Curve::new(k, k.random(&mut rng), k.random(&mut rng)) {
                    break e;
                }
            };
            let pt = e.random_point(&mut rng);
            let Point::Aff(x, y) = pt else { return Ok(()) };
            prop_assume!(!y.is_zero());
            let psi = division_poly(&e, n).unwrap();
            prop_assert_eq!(psi.eval(x).is_zero(), e.mul(n as u64, &pt) == Point::Inf);
            Ok(())
        })
        .unwrap();
}

#[test]
fn modular_polynomials_are_symmetric() {
    let phis = [phi_poly(2).unwrap(), phi_poly(3).unwrap()];
    assert!(phis.iter().all(|p| p.is_symmetric()));
    let primes: Vec<u64> = (5u64..2000).filter(|&p| is_prime(p)).collect();
    let strat = (prop::sample::select(primes), 0usize..2, any::<(u64, u64, u64, u64)>());
    runner()
        .run(&strat, |(p, i, (a, b, c, d))| {
            let k = Fp2::new(p).unwrap();
            let (x, y) = (k.elem((a % p) as i64, (b % p) as i64), k.elem((c % p) as i64, (d % p) as i64));
            prop_assert_eq!(phis[i].eval(k, x, y), phis[i].eval(k, y, x));
            Ok(())
        })
        .unwrap();
}
