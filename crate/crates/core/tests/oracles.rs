//! Independent recomputations checked against the library.

use eichler_core::classpoly::{hilbert, hilbert_mod, resultant, resultant_vp};
use eichler_core::ec::{from_j, is_supersingular, order_c_kernels, phi_poly, velu};
use eichler_core::ff::{roots, Fp2};
use eichler_core::numth::{gcd, is_prime, kronecker, represent};
use eichler_core::qform::{class_group, compose, reduce};
use eichler_core::BQForm;
use rug::Integer;

/// Dirichlet composition of united forms.
fn dirichlet(f: &BQForm, g: &BQForm) -> Option<BQForm> {
    let d = f.disc();
    let e = (f.b + g.b) / 2;
    if gcd(gcd(f.a, g.a), e) != 1 {
        return None;
    }
    let m = 2 * f.a * g.a;
    let bb = (0..m).map(|k| g.b + 2 * g.a * k).find(|&b| {
        (b - f.b).rem_euclid(2 * f.a) == 0 && (b * b - d).rem_euclid(4 * f.a * g.a) == 0
    })?;
    reduce(&BQForm::new(f.a * g.a, bb, (bb * bb - d) / (4 * f.a * g.a))).ok()
}

#[test]
fn composition_matches_dirichlet() {
    let mut checked = 0;
    for d in [-23i64, -47, -56, -71, -84, -303, -1212, -1620, -4848, -3503] {
        let cl = class_group(d).unwrap();
        for f in &cl {
            for g in &cl {
                // move g to a form with first coefficient coprime to f.a
                let g2 = (1..50)
                    .flat_map(|x| (0..50).map(move |y| (x, y)))
                    .filter(|&(x, y)| gcd(x, y) == 1)
                    .find_map(|(x, y)| {
                        let a = g.eval(x, y);
                        (gcd(a, f.a) == 1).then(|| eichler_core::qform::form_with_first_coefficient(g, x, y))
                    })
                    .unwrap();
                if let Some(h) = dirichlet(f, &g2) {
                    assert_eq!(compose(f, g).unwrap(), h, "{f} * {g}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 500, "{checked}");
}

#[test]
fn represent_matches_double_loop() {
    for a in 1..60 {
        for m in 1..200 {
            let mut brute = Vec::new();
            for x in 0..=m {
                for y in 0..=m {
                    if x * x + a * y * y == m && gcd(x, y) == 1 {
                        brute.push((x, y));
                    }
                }
            }
            let mut got = represent(a, m);
            got.sort();
            brute.sort();
            assert_eq!(got, brute, "a={a} m={m}");
        }
    }
}

#[test]
fn class_numbers_from_counting() {
    // h(D) by brute force over reduced triples
    for d in (-800i64..-2).filter(|d| d.rem_euclid(4) <= 1) {
        let mut h = 0;
        for a in 1..=((-d / 3) as f64).sqrt() as i64 + 1 {
            for b in -a + 1..=a {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) || gcd(gcd(a, b.abs()), c) != 1 {
                    continue;
                }
                h += 1;
            }
        }
        assert_eq!(class_group(d).unwrap().len(), h, "D={d}");
    }
}

#[test]
fn class_polynomial_roots_are_supersingular() {
    // p inert in Q(sqrt D) makes every root of H_D mod p supersingular
    for p in [101i64, 103, 107, 131] {
        let k = Fp2::new(p as u64).unwrap();
        let mut seen = 0;
        for d in (-200i64..-2).filter(|d| d.rem_euclid(4) <= 1) {
            if kronecker(d, p) != -1 {
                continue;
            }
            let h = hilbert_mod(d, p).unwrap();
            for j in roots(&h, true) {
                assert!(is_supersingular(&from_j(k, j)).unwrap(), "D={d} p={p} j={j}");
                seen += 1;
            }
        }
        assert!(seen > 50);
    }
}

#[test]
fn class_polynomial_degree_and_integrality() {
    for d in [-23i64, -31, -39, -47, -71, -104, -303, -1212] {
        let h = hilbert(d).unwrap();
        assert_eq!(h.degree(), class_group(d).unwrap().len());
        assert_eq!(h.coeffs.last().unwrap(), &Integer::from(1));
    }
}

fn valuation(mut n: Integer, p: u32) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n.is_divisible_u(p) {
        n /= p;
        v += 1;
    }
    v
}

#[test]
fn valuation_matches_exact_resultant() {
    let ds = [-3i64, -4, -7, -8, -11, -19, -20, -23, -24, -32, -35, -44, -51, -56];
    for p in [5u32, 7, 11, 101] {
        for (i, &d1) in ds.iter().enumerate() {
            for &d2 in &ds[i + 1..] {
                let r = resultant(&hilbert(d1).unwrap().coeffs, &hilbert(d2).unwrap().coeffs);
                assert_eq!(resultant_vp(d1, d2, p as i64).unwrap(), valuation(r, p), "{d1} {d2} {p}");
            }
        }
    }
}

#[test]
fn velu_codomains_satisfy_phi() {
    let mut checked = 0;
    for p in [101u64, 103] {
        let k = Fp2::new(p).unwrap();
        for ell in [2i64, 3] {
            let phi = phi_poly(ell).unwrap();
            for j in [k.from_i64(66), k.from_i64(21), k.from_i64(57), k.elem(37, 10), k.from_i64(5)] {
                let e = from_j(k, j);
                let kernels = if ell == 2 {
                    roots(&e.rhs_poly(), true)
                        .into_iter()
                        .map(|x0| eichler_core::ec::SubgroupKernel {
                            curve: e,
                            poly: eichler_core::ff::ModPoly::linear(k, x0),
                            order: 2,
                        })
                        .collect()
                } else {
                    order_c_kernels(&e, ell).unwrap()
                };
                for ker in kernels {
                    checked += 1;
                    let img = velu(&ker).unwrap().codomain.j_invariant();
                    assert!(phi.eval(k, j, img).is_zero(), "p={p} ell={ell} j={j} -> {img}");
                }
            }
        }
    }
    assert!(checked >= 20, "only {checked} kernels");
}

#[test]
fn kronecker_multiplicative() {
    for q in (3..200).filter(|&q| is_prime(q as u64)) {
        for a in -50..50 {
            for b in -50..50 {
                assert_eq!(kronecker(a, q) * kronecker(b, q), kronecker(a * b, q));
            }
        }
    }
}
