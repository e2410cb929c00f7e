//! Short Weierstrass curves over F_{p^2}, division polynomials, order-c
//! kernels, Velu isogenies, modular polynomials and oriented isogeny graphs.
//!
//! An oriented pair is a triple (E, G, u): the c-isogeny E -> E/G given by
//! Velu's normalized formulas, followed by the scaling (x, y) -> (u^2 x, u^3 y)
//! onto E^p. Normalized isogenies pull the invariant differential back to
//! itself and the scaling pulls it back by 1/u, so all comparisons between
//! such maps reduce to comparing kernels and the scalar u.

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classpoly::hilbert_mod;
use crate::ff::{factor, interpolate, poly_resultant, roots, Fp2, ModPoly, F2};
use crate::numth::{is_prime, kronecker, PrimeParams};
use crate::Error;

/// Exhaustive point counting refuses larger p.
pub const COUNT_LIMIT: u64 = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Curve {
    pub k: Fp2,
    pub a4: F2,
    pub a6: F2,
}

impl Curve {
    pub fn new(k: Fp2, a4: F2, a6: F2) -> Result<Curve, Error> {
        let e = Curve { k, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::Singular);
        }
        Ok(e)
    }

    /// 4 a4^3 + 27 a6^2
    pub fn discriminant(&self) -> F2 {
        let k = self.k;
        k.add(k.scale(k.mul(k.sqr(self.a4), self.a4), 4), k.scale(k.sqr(self.a6), 27))
    }

    pub fn j_invariant(&self) -> F2 {
        let k = self.k;
        let a43 = k.scale(k.mul(k.sqr(self.a4), self.a4), 4);
        k.div(k.scale(a43, 1728), self.discriminant())
    }

    pub fn conjugate(&self) -> Curve {
        Curve { k: self.k, a4: self.k.frob(self.a4), a6: self.k.frob(self.a6) }
    }

    /// Image of (x, y) -> (u^2 x, u^3 y).
    pub fn scaled(&self, u: F2) -> Curve {
        let k = self.k;
        let u2 = k.sqr(u);
        let u4 = k.sqr(u2);
        Curve { k, a4: k.mul(u4, self.a4), a6: k.mul(k.mul(u4, u2), self.a6) }
    }

    /// x^3 + a4 x + a6
    pub fn rhs(&self, x: F2) -> F2 {
        let k = self.k;
        k.add(k.mul(k.add(k.sqr(x), self.a4), x), self.a6)
    }

    pub fn rhs_poly(&self) -> ModPoly {
        ModPoly::new(self.k, vec![self.a6, self.a4, F2::ZERO, F2::ONE])
    }

    pub fn format(&self) -> String {
        format!("y^2 = x^3 + ({})x + ({})", self.a4, self.a6)
    }
}

pub fn j_invariant(e: &Curve) -> F2 {
    e.j_invariant()
}

pub fn conjugate(e: &Curve) -> Curve {
    e.conjugate()
}

pub fn from_j(k: Fp2, j: F2) -> Curve {
    if j.is_zero() {
        return Curve { k, a4: F2::ZERO, a6: F2::ONE };
    }
    if j == k.from_i64(1728) {
        return Curve { k, a4: F2::ONE, a6: F2::ZERO };
    }
    let m = k.sub(k.from_i64(1728), j);
    Curve { k, a4: k.scale(k.mul(j, m), 3), a6: k.scale(k.mul(j, k.sqr(m)), 2) }
}

/// #E(F_{p^2}) by summing quadratic characters: a square class in F_{p^2}
/// is detected by the Legendre symbol of its norm.
pub fn count_points(e: &Curve) -> Result<u64, Error> {
    let k = e.k;
    let p = k.p;
    if p > COUNT_LIMIT {
        return Err(Error::PTooLarge(p as i64));
    }
    let mut qr = vec![-1i64; p as usize];
    qr[0] = 0;
    for x in 1..p {
        qr[(x * x % p) as usize] = 1;
    }
    let mut s: i64 = 0;
    for x in k.elements() {
        s += qr[k.norm(e.rhs(x)) as usize];
    }
    Ok(((p * p + 1) as i64 + s) as u64)
}

pub fn is_supersingular(e: &Curve) -> Result<bool, Error> {
    let p = e.k.p as i64;
    let n = count_points(e)? as i64;
    let t = p * p + 1 - n;
    Ok(t % p == 0)
}

fn primitive_element(k: Fp2) -> F2 {
    let order = (k.order() - 1) as u128;
    let mut n = order;
    let mut primes = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    k.elements()
        .skip(1)
        .find(|&g| primes.iter().all(|&q| k.pow(g, order / q) != F2::ONE))
        .unwrap()
}

/// A twist of a supersingular curve with (p+1)^2 points, so that the
/// p^2-Frobenius is the scalar -p and every subgroup is rational.
pub fn normalize_frobenius(e: &Curve) -> Result<Curve, Error> {
    let k = e.k;
    let target = (k.p + 1) * (k.p + 1);
    let g = primitive_element(k);
    let twists: Vec<Curve> = if e.a4.is_zero() {
        (0..6).map(|i| Curve { k, a4: F2::ZERO, a6: k.mul(e.a6, k.pow(g, i)) }).collect()
    } else if e.a6.is_zero() {
        (0..4).map(|i| Curve { k, a4: k.mul(e.a4, k.pow(g, i)), a6: F2::ZERO }).collect()
    } else {
        vec![*e, Curve { k, a4: k.mul(e.a4, k.sqr(g)), a6: k.mul(e.a6, k.pow(g, 3)) }]
    };
    for t in twists {
        if count_points(&t)? == target {
            return Ok(t);
        }
    }
    Err(Error::BadParams(format!("no twist of {} has (p+1)^2 points", e.format())))
}

/// All u with e1.scaled(u) == e2.
pub fn isomorphisms(e1: &Curve, e2: &Curve) -> Vec<F2> {
    let k = e1.k;
    if e1.j_invariant() != e2.j_invariant() {
        return vec![];
    }
    let poly = if e1.a4.is_zero() {
        // u^6 = a6'/a6
        let mut c = vec![F2::ZERO; 7];
        c[0] = k.neg(k.div(e2.a6, e1.a6));
        c[6] = F2::ONE;
        ModPoly::new(k, c)
    } else if e1.a6.is_zero() {
        let mut c = vec![F2::ZERO; 5];
        c[0] = k.neg(k.div(e2.a4, e1.a4));
        c[4] = F2::ONE;
        ModPoly::new(k, c)
    } else {
        // u^2 = (a6'/a6) / (a4'/a4)
        let s = k.div(k.mul(e2.a6, e1.a4), k.mul(e1.a6, e2.a4));
        ModPoly::new(k, vec![k.neg(s), F2::ZERO, F2::ONE])
    };
    let mut out: Vec<F2> = roots(&poly, true).into_iter().filter(|&u| e1.scaled(u) == *e2).collect();
    out.dedup();
    out
}

/// Reduced division polynomial f_n: psi_n for odd n, psi_n / y for even n.
pub fn division_poly(e: &Curve, n: i64) -> Result<ModPoly, Error> {
    if n < 0 || (n as u64) % e.k.p == 0 {
        return Err(Error::BadN(n));
    }
    Ok(division_polys(e, n as usize).pop().unwrap())
}

fn division_polys(e: &Curve, n: usize) -> Vec<ModPoly> {
    let k = e.k;
    let c = |v: &[i64]| ModPoly::from_i64(k, v);
    let (a, b) = (e.a4, e.a6);
    let mut f = vec![c(&[0]), c(&[1]), c(&[2])];
    // 3x^4 + 6a x^2 + 12b x - a^2
    f.push(ModPoly::new(k, vec![k.neg(k.sqr(a)), k.scale(b, 12), k.scale(a, 6), F2::ZERO, k.from_i64(3)]));
    // 4(x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3)
    let a2 = k.sqr(a);
    let f4 = ModPoly::new(
        k,
        vec![
            k.neg(k.add(k.scale(k.sqr(b), 8), k.mul(a2, a))),
            k.neg(k.scale(k.mul(a, b), 4)),
            k.neg(k.scale(a2, 5)),
            k.scale(b, 20),
            k.scale(a, 5),
            F2::ZERO,
            F2::ONE,
        ],
    )
    .scale(k.from_i64(4));
    f.push(f4);
    let ff2 = e.rhs_poly().sqr();
    let half = k.inv(k.from_i64(2));
    for m in 5..=n {
        let t = m / 2;
        let next = if m % 2 == 1 {
            let lhs = f[t + 2].mul(&f[t].sqr().mul(&f[t]));
            let rhs = f[t - 1].mul(&f[t + 1].sqr().mul(&f[t + 1]));
            if t % 2 == 0 {
                ff2.mul(&lhs).sub(&rhs)
            } else {
                lhs.sub(&ff2.mul(&rhs))
            }
        } else {
            let inner = f[t + 2].mul(&f[t - 1].sqr()).sub(&f[t - 2].mul(&f[t + 1].sqr()));
            f[t].mul(&inner).scale(half)
        };
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// The x-coordinate subgroup data of an order-n subgroup G: the monic
/// polynomial whose roots are x(P) for P in G \ {0}, one per pair {P, -P}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupKernel {
    pub curve: Curve,
    pub poly: ModPoly,
    pub order: u64,
}

impl SubgroupKernel {
    /// The image under (x, y) -> (u^2 x, u^3 y).
    pub fn transport(&self, u: F2) -> SubgroupKernel {
        let k = self.curve.k;
        let d = self.poly.c.len() - 1;
        let u2 = k.sqr(u);
        let c = self.poly.c.iter().enumerate().map(|(i, &a)| k.mul(a, k.pow(u2, (d - i) as u128))).collect();
        SubgroupKernel { curve: self.curve.scaled(u), poly: ModPoly::new(k, c), order: self.order }
    }

    pub fn conjugate(&self) -> SubgroupKernel {
        SubgroupKernel { curve: self.curve.conjugate(), poly: self.poly.frob(), order: self.order }
    }

    /// Short label: the x-root for a single-root kernel, else the polynomial.
    pub fn label(&self) -> String {
        if self.poly.deg() == 1 {
            format!("x-root {}", self.curve.k.neg(self.poly.c[0]))
        } else {
            self.poly.format()
        }
    }
}

/// x(kP) for k = 1..=d as elements of F[x]/(f), where x is a root of f.
fn multiples_mod(e: &Curve, f: &ModPoly, d: usize, divs: &[ModPoly]) -> Option<Vec<ModPoly>> {
    let k = e.k;
    let x = ModPoly::x(k).rem(f);
    let rhs = e.rhs_poly().rem(f);
    let mut out = vec![x.clone()];
    for m in 2..=d {
        let prod = divs[m - 1].mul(&divs[m + 1]).rem(f);
        let sq = divs[m].sqr().rem(f);
        let (num, den) = if m % 2 == 1 { (prod.mul(&rhs).rem(f), sq) } else { (prod, sq.mul(&rhs).rem(f)) };
        let inv = den.inv_mod(f)?;
        out.push(x.sub(&num.mul(&inv).rem(f)));
    }
    Some(out)
}

/// Order-c subgroups rational over F_{p^2}, as kernel polynomials.
pub fn order_c_kernels(e: &Curve, c: i64) -> Result<Vec<SubgroupKernel>, Error> {
    let k = e.k;
    if c < 2 || !is_prime(c as u64) || c as u64 == k.p {
        return Err(Error::BadN(c));
    }
    let mut out: Vec<SubgroupKernel> = Vec::new();
    if c == 2 {
        let mut rs = roots(&e.rhs_poly(), true);
        rs.dedup();
        for r in rs {
            out.push(SubgroupKernel { curve: *e, poly: ModPoly::linear(k, r), order: 2 });
        }
        return Ok(out);
    }
    let d = ((c - 1) / 2) as usize;
    let divs = division_polys(e, d + 1);
    let fc = division_poly(e, c)?;
    let mut covered: Vec<ModPoly> = Vec::new();
    for (f, _) in factor(&fc) {
        if covered.contains(&f) {
            continue;
        }
        let xs = match multiples_mod(e, &f, d, &divs) {
            Some(v) => v,
            None => continue,
        };
        // prod (X - x_k) over F[x]/(f); rational iff every coefficient is constant
        let mut poly: Vec<ModPoly> = vec![ModPoly::one(k)];
        for xk in &xs {
            let mut next = vec![ModPoly::zero(k); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].sub(&a.mul(xk).rem(&f));
            }
            poly = next;
        }
        if poly.iter().any(|a| a.deg() > 0) {
            continue;
        }
        let h = ModPoly::new(k, poly.iter().map(|a| a.coeff(0)).collect());
        for (g, _) in factor(&h) {
            covered.push(g);
        }
        if !out.iter().any(|s| s.poly == h) {
            out.push(SubgroupKernel { curve: *e, poly: h, order: c as u64 });
        }
    }
    out.sort_by(|a, b| a.poly.c.cmp(&b.poly.c));
    Ok(out)
}

/// A separable isogeny in Velu's normalization, with its x-map N/D.
#[derive(Clone, Debug)]
pub struct Isogeny {
    pub kernel: SubgroupKernel,
    pub codomain: Curve,
    pub num: ModPoly,
    pub den: ModPoly,
}

pub fn velu(kern: &SubgroupKernel) -> Result<Isogeny, Error> {
    let e = kern.curve;
    let k = e.k;
    let h = kern.poly.monic();
    let x = ModPoly::x(k);
    if kern.order == 2 {
        if h.deg() != 1 || !e.rhs(k.neg(h.c[0])).is_zero() {
            return Err(Error::InvalidKernel);
        }
        let x0 = k.neg(h.c[0]);
        let t = k.add(k.scale(k.sqr(x0), 3), e.a4);
        let w = k.mul(x0, t);
        let codomain = Curve::new(k, k.sub(e.a4, k.scale(t, 5)), k.sub(e.a6, k.scale(w, 7)))?;
        let num = x.mul(&h).add(&ModPoly::constant(k, t));
        return Ok(Isogeny { kernel: kern.clone(), codomain, num, den: h });
    }
    let d = h.deg() as usize;
    if kern.order % 2 == 0 || d as u64 != (kern.order - 1) / 2 {
        return Err(Error::InvalidKernel);
    }
    if !division_poly(&e, kern.order as i64)?.rem(&h).is_zero() {
        return Err(Error::InvalidKernel);
    }
    let s1 = k.neg(h.coeff(d - 1));
    let s2 = if d >= 2 { h.coeff(d - 2) } else { F2::ZERO };
    let s3 = if d >= 3 { k.neg(h.coeff(d - 3)) } else { F2::ZERO };
    let p1 = s1;
    let p2 = k.sub(k.sqr(s1), k.scale(s2, 2));
    let p3 = k.add(k.sub(k.mul(k.sqr(s1), s1), k.scale(k.mul(s1, s2), 3)), k.scale(s3, 3));
    let t = k.add(k.scale(p2, 6), k.scale(e.a4, 2 * d as i64));
    let w = k.add(k.add(k.scale(p3, 10), k.scale(k.mul(e.a4, p1), 6)), k.scale(e.a6, 4 * d as i64));
    let codomain = Curve::new(k, k.sub(e.a4, k.scale(t, 5)), k.sub(e.a6, k.scale(w, 7)))?;
    // X = ((2d+1)x - 2 s1) + (-2 f' h' h + 4 f (h'^2 - h h'')) / h^2
    let f = e.rhs_poly();
    let fp = f.derivative();
    let h1 = h.derivative();
    let h2 = h1.derivative();
    let lin = ModPoly::new(k, vec![k.scale(s1, -2), k.from_i64(2 * d as i64 + 1)]);
    let den = h.sqr();
    let num = lin
        .mul(&den)
        .sub(&fp.mul(&h1).mul(&h).scale(k.from_i64(2)))
        .add(&f.mul(&h1.sqr().sub(&h.mul(&h2))).scale(k.from_i64(4)));
    Ok(Isogeny { kernel: kern.clone(), codomain, num, den })
}

impl Isogeny {
    /// x-coordinate of the image; None on the kernel.
    pub fn x_map(&self, x: F2) -> Option<F2> {
        let k = self.codomain.k;
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(k.div(self.num.eval(x), d))
    }

    /// Image of another kernel on the domain, found by eliminating x from
    /// g(x) = 0, t D(x) - N(x) = 0 and interpolating in t.
    pub fn push(&self, g: &SubgroupKernel) -> Result<SubgroupKernel, Error> {
        let k = self.codomain.k;
        let m = g.poly.deg();
        if m < 1 || poly_resultant(&g.poly, &self.den).is_zero() {
            return Err(Error::InvalidKernel);
        }
        let ts: Vec<F2> = (0..=m as i64).map(|i| k.from_i64(i)).collect();
        let vals: Vec<F2> = ts
            .iter()
            .map(|&t| poly_resultant(&g.poly, &self.den.scale(t).sub(&self.num)))
            .collect();
        let img = interpolate(k, &ts, &vals);
        if img.deg() != m {
            return Err(Error::InvalidKernel);
        }
        Ok(SubgroupKernel { curve: self.codomain, poly: img.monic(), order: g.order })
    }
}

/// Whether E/G is isomorphic to E^p.
pub fn c_epsilon_test(e: &Curve, g: &SubgroupKernel) -> Result<bool, Error> {
    let iso = velu(g)?;
    Ok(iso.codomain.j_invariant() == e.k.frob(e.j_invariant()))
}

/// Classical modular polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolynomial {
    pub ell: i64,
    /// (i, j, c) for X^i Y^j, every monomial listed.
    pub terms: Vec<(u32, u32, i128)>,
}

const PHI2: &str = "3 0 1\n2 2 -1\n2 1 1488\n2 0 -162000\n1 1 40773375\n1 0 8748000000\n0 0 -157464000000000\n";
const PHI3: &str = include_str!("../data/phi3.txt");

fn parse_modular(ell: i64, text: &str) -> Result<ModularPolynomial, Error> {
    let mut seen = HashSet::new();
    let mut terms = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::BadTable(format!("malformed line '{line}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let i: u32 = parts[0].parse().map_err(|_| bad())?;
        let j: u32 = parts[1].parse().map_err(|_| bad())?;
        let c: i128 = parts[2].parse().map_err(|_| bad())?;
        if i < j || !seen.insert((i, j)) || i as i64 > ell + 1 {
            return Err(Error::BadTable(format!("monomial ({i}, {j}) repeated, out of order or too large")));
        }
        terms.push((i, j, c));
        if i != j {
            terms.push((j, i, c));
        }
    }
    let lead = terms.iter().find(|t| t.0 as i64 == ell + 1 && t.1 == 0).map(|t| t.2);
    if lead != Some(1) {
        return Err(Error::BadTable("leading coefficient is not X^(ell+1)".into()));
    }
    Ok(ModularPolynomial { ell, terms })
}

impl ModularPolynomial {
    pub fn coeff(&self, i: u32, j: u32) -> i128 {
        self.terms.iter().find(|t| t.0 == i && t.1 == j).map_or(0, |t| t.2)
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|&(i, j, c)| self.coeff(j, i) == c)
    }

    fn reduce(&self, k: Fp2, c: i128) -> F2 {
        k.from_i64(c.rem_euclid(k.p as i128) as i64)
    }

    pub fn eval(&self, k: Fp2, x: F2, y: F2) -> F2 {
        self.terms.iter().fold(F2::ZERO, |acc, &(i, j, c)| {
            k.add(acc, k.mul(self.reduce(k, c), k.mul(k.pow(x, i as u128), k.pow(y, j as u128))))
        })
    }

    /// Phi(x, Y) as a polynomial in Y.
    pub fn specialize(&self, k: Fp2, x: F2) -> ModPoly {
        let mut c = vec![F2::ZERO; self.ell as usize + 2];
        for &(i, j, co) in &self.terms {
            c[j as usize] = k.add(c[j as usize], k.mul(self.reduce(k, co), k.pow(x, i as u128)));
        }
        ModPoly::new(k, c)
    }

    /// Checks Phi(j(E), j(E/K)) = 0 on seeded random curves over F_{p^2}.
    pub fn validate(&self, p: u64, checks: usize, seed: u64) -> Result<(), Error> {
        if !self.is_symmetric() {
            return Err(Error::BadTable("not symmetric".into()));
        }
        let k = Fp2::new(p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        for _ in 0..50 * checks {
            let e = match Curve::new(k, k.random(&mut rng), k.random(&mut rng)) {
                Ok(e) => e,
                Err(_) => continue,
            };
            for kern in order_c_kernels(&e, self.ell)? {
                let j2 = velu(&kern)?.codomain.j_invariant();
                if !self.eval(k, e.j_invariant(), j2).is_zero() {
                    return Err(Error::BadTable(format!(
                        "Phi_{}({}, {}) != 0 over F_{}^2",
                        self.ell,
                        e.j_invariant(),
                        j2,
                        p
                    )));
                }
                done += 1;
            }
            if done >= checks {
                return Ok(());
            }
        }
        Err(Error::BadTable("too few isogenies found to validate".into()))
    }
}

/// Phi_2 (inline) or Phi_3 (shipped table), validated on load.
pub fn phi_poly(ell: i64) -> Result<ModularPolynomial, Error> {
    let m = match ell {
        2 => parse_modular(2, PHI2)?,
        3 => parse_modular(3, PHI3)?,
        _ => return Err(Error::UnsupportedEll(ell)),
    };
    m.validate(103, 6, 7)?;
    Ok(m)
}

/// Phi_3 from a user-supplied table.
pub fn load_phi3(path: &Path) -> Result<ModularPolynomial, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::BadTable(e.to_string()))?;
    let m = parse_modular(3, &text)?;
    m.validate(103, 6, 7)?;
    Ok(m)
}

/// Multiplicity of j2 as a root of Phi_ell(j1, Y).
pub fn isogeny_count(phi: &ModularPolynomial, k: Fp2, j1: F2, j2: F2) -> usize {
    let mut f = phi.specialize(k, j1);
    let lin = ModPoly::linear(k, j2);
    let mut n = 0;
    loop {
        let (q, r) = f.divrem(&lin);
        if !r.is_zero() {
            return n;
        }
        n += 1;
        f = q;
    }
}

/// A supersingular j-invariant from a class polynomial with p inert.
fn supersingular_seed(k: Fp2) -> Result<F2, Error> {
    let p = k.p as i64;
    let mut d = -3i64;
    loop {
        if (d % 4 == 0 || d.rem_euclid(4) == 1) && kronecker(d, p) == -1 {
            let h = hilbert_mod(d, p)?;
            if let Some(&j) = roots(&h, true).first() {
                return Ok(j);
            }
        }
        d -= 1;
    }
}

/// Every supersingular j-invariant, by walking the 2-isogeny graph.
pub fn supersingular_js(k: Fp2) -> Result<Vec<F2>, Error> {
    let phi2 = parse_modular(2, PHI2)?;
    let seed = supersingular_seed(k)?;
    let mut seen = HashSet::from([seed]);
    let mut queue = VecDeque::from([seed]);
    while let Some(j) = queue.pop_front() {
        for n in roots(&phi2.specialize(k, j), true) {
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    let mut out: Vec<F2> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Point {
    Inf,
    Aff(F2, F2),
}

impl Curve {
    pub fn contains(&self, pt: &Point) -> bool {
        match *pt {
            Point::Inf => true,
            Point::Aff(x, y) => self.k.sqr(y) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match *pt {
            Point::Inf => Point::Inf,
            Point::Aff(x, y) => Point::Aff(x, self.k.neg(y)),
        }
    }

    pub fn add(&self, p1: &Point, p2: &Point) -> Point {
        let k = self.k;
        match (*p1, *p2) {
            (Point::Inf, q) | (q, Point::Inf) => q,
            (Point::Aff(x1, y1), Point::Aff(x2, y2)) => {
                let l = if x1 == x2 {
                    if k.add(y1, y2).is_zero() {
                        return Point::Inf;
                    }
                    k.div(k.add(k.scale(k.sqr(x1), 3), self.a4), k.scale(y1, 2))
                } else {
                    k.div(k.sub(y2, y1), k.sub(x2, x1))
                };
                let x3 = k.sub(k.sub(k.sqr(l), x1), x2);
                Point::Aff(x3, k.sub(k.mul(l, k.sub(x1, x3)), y1))
            }
        }
    }

    pub fn mul(&self, n: u64, pt: &Point) -> Point {
        let mut r = Point::Inf;
        let mut q = *pt;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = self.add(&r, &q);
            }
            q = self.add(&q, &q);
            n >>= 1;
        }
        r
    }

    pub fn random_point<R: rand::Rng>(&self, rng: &mut R) -> Point {
        loop {
            let x = self.k.random(rng);
            if let Some(y) = self.k.sqrt(self.rhs(x)) {
                return Point::Aff(x, y);
            }
        }
    }
}

/// A level-c structure with an orientation: phi = (u-scaling) o Velu(E, G).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedPair {
    pub j: F2,
    pub kernel: SubgroupKernel,
    pub u: F2,
    pub is_c_epsilon: bool,
    /// (1 + mu)/2 is an endomorphism, i.e. mu fixes E[2].
    pub surface: bool,
}

impl OrientedPair {
    pub fn curve(&self) -> Curve {
        self.kernel.curve
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrientedGraph {
    pub p: i64,
    pub c: i64,
    pub ell: i64,
    pub nodes: Vec<OrientedPair>,
    /// Undirected edges (i <= j), with multiplicity.
    pub edges: Vec<(usize, usize)>,
    /// Galois conjugation (E, G, phi) -> (E^p, G^p, phi^p).
    pub conj: Vec<usize>,
    /// Sign change phi -> -phi.
    pub flip: Vec<usize>,
    /// "E<i>" / "E<i>p" node ids.
    pub ids: Vec<String>,
    /// ell-isogenies out of nodes that do not respect the orientation.
    pub non_oriented: usize,
}

struct GraphBuilder {
    k: Fp2,
    canon: HashMap<F2, Curve>,
}

impl GraphBuilder {
    fn canonical(&mut self, j: F2) -> Result<Curve, Error> {
        if let Some(e) = self.canon.get(&j) {
            return Ok(*e);
        }
        let e = normalize_frobenius(&from_j(self.k, j))?;
        self.canon.insert(j, e);
        Ok(e)
    }

    /// Move (E, G, u) onto the canonical model of j(E) and pick the least
    /// representative under automorphisms.
    fn normal_form(&mut self, g: &SubgroupKernel, u: F2) -> Result<(Vec<F2>, F2, SubgroupKernel), Error> {
        let k = self.k;
        let p = k.p as u128;
        let target = self.canonical(g.curve.j_invariant())?;
        let s = *isomorphisms(&g.curve, &target).first().ok_or(Error::InvalidKernel)?;
        let g0 = g.transport(s);
        let u0 = k.mul(u, k.pow(s, p - 1));
        let mut best: Option<(Vec<F2>, F2, SubgroupKernel)> = None;
        for r in isomorphisms(&target, &target) {
            let gr = g0.transport(r);
            let ur = k.mul(u0, k.pow(r, p - 1));
            let key = (gr.poly.c.clone(), ur);
            if best.as_ref().is_none_or(|b| (b.0.clone(), b.1) > key) {
                best = Some((key.0, key.1, gr));
            }
        }
        Ok(best.unwrap())
    }
}

fn surface_test(kern: &SubgroupKernel, phi: &Isogeny, u: F2) -> bool {
    let e = kern.curve;
    let k = e.k;
    let u2 = k.sqr(u);
    let mut rs = roots(&e.rhs_poly(), true);
    rs.dedup();
    rs.len() == 3
        && rs.iter().all(|&x0| match phi.x_map(x0) {
            Some(x) => k.frob(k.mul(u2, x)) == x0,
            None => false,
        })
}

/// The orientation discriminant: -cp when cp = 3 (mod 4), else -4cp.
pub fn orientation_disc(params: &PrimeParams) -> i64 {
    let cp = params.cp();
    if cp % 4 == 3 {
        -cp
    } else {
        -4 * cp
    }
}

pub fn oriented_graph(params: &PrimeParams, ell: i64) -> Result<OrientedGraph, Error> {
    let (p, c) = (params.p, params.c);
    if ell == c || ell == p || !is_prime(ell as u64) || kronecker(orientation_disc(params), ell) != 1 {
        return Err(Error::NotSplit(ell));
    }
    let k = Fp2::new(p as u64)?;
    let mut b = GraphBuilder { k, canon: HashMap::new() };
    let mut keyed: HashMap<(F2, Vec<F2>, F2), OrientedPair> = HashMap::new();
    for j in supersingular_js(k)? {
        let e = b.canonical(j)?;
        for g in order_c_kernels(&e, c)? {
            if !c_epsilon_test(&e, &g)? {
                continue;
            }
            let phi = velu(&g)?;
            for u in isomorphisms(&phi.codomain, &e.conjugate()) {
                let (key, un, gn) = b.normal_form(&g, u)?;
                let phin = velu(&gn)?;
                let surface = surface_test(&gn, &phin, un);
                keyed.entry((j, key, un)).or_insert(OrientedPair { j, kernel: gn, u: un, is_c_epsilon: true, surface });
            }
        }
    }
    let mut nodes: Vec<OrientedPair> = keyed.into_values().collect();
    nodes.sort_by(|a, b| {
        (!a.surface, a.j, &a.kernel.poly.c, a.u).cmp(&(!b.surface, b.j, &b.kernel.poly.c, b.u))
    });
    let index: HashMap<(F2, Vec<F2>, F2), usize> =
        nodes.iter().enumerate().map(|(i, n)| ((n.j, n.kernel.poly.c.clone(), n.u), i)).collect();
    let lookup = |b: &mut GraphBuilder, g: &SubgroupKernel, u: F2| -> Result<usize, Error> {
        let (key, un, _) = b.normal_form(g, u)?;
        index.get(&(g.curve.j_invariant(), key, un)).copied().ok_or(Error::InvalidKernel)
    };

    let mut conj = Vec::with_capacity(nodes.len());
    let mut flip = Vec::with_capacity(nodes.len());
    for n in &nodes {
        conj.push(lookup(&mut b, &n.kernel.conjugate(), k.frob(n.u))?);
        flip.push(lookup(&mut b, &n.kernel, k.neg(n.u))?);
    }

    let mut arcs: HashMap<(usize, usize), usize> = HashMap::new();
    let mut non_oriented = 0;
    for (i, n) in nodes.iter().enumerate() {
        let e = n.curve();
        let phi = velu(&n.kernel)?;
        for kern in order_c_kernels(&e, ell)? {
            // phi must carry ker psi onto ker psi^p
            let image = phi.push(&kern)?.transport(n.u);
            if image.poly != kern.poly.frob() {
                non_oriented += 1;
                continue;
            }
            let psi = velu(&kern)?;
            let g2 = psi.push(&n.kernel)?;
            let target = velu(&g2)?.codomain.scaled(n.u);
            if target != psi.codomain.conjugate() {
                return Err(Error::InvalidKernel);
            }
            let t = lookup(&mut b, &g2, n.u)?;
            *arcs.entry((i, t)).or_default() += 1;
        }
    }
    let mut edges = Vec::new();
    let mut keys: Vec<_> = arcs.keys().copied().collect();
    keys.sort();
    for (i, t) in keys {
        let m = arcs[&(i, t)];
        if i < t {
            if arcs.get(&(t, i)).copied().unwrap_or(0) != m {
                return Err(Error::InvalidKernel);
            }
            edges.extend(std::iter::repeat_n((i, t), m));
        } else if i == t {
            edges.extend(std::iter::repeat_n((i, i), m.div_ceil(2)));
        }
    }

    let mut ids = vec![String::new(); nodes.len()];
    let mut next = 1;
    for i in 0..nodes.len() {
        if !ids[i].is_empty() {
            continue;
        }
        ids[i] = format!("E{next}");
        if conj[i] != i {
            ids[conj[i]] = format!("E{next}p");
        }
        next += 1;
    }
    Ok(OrientedGraph { p, c, ell, nodes, edges, conj, flip, ids, non_oriented })
}

impl OrientedGraph {
    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == i) as usize + (b == i) as usize).sum()
    }

    /// Connected components as sorted node lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &(a, b) in &self.edges {
                    for (x, y) in [(a, b), (b, a)] {
                        if x == v && comp[y] == usize::MAX {
                            comp[y] = id;
                            stack.push(y);
                        }
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    pub fn node_label(&self, i: usize) -> String {
        let n = &self.nodes[i];
        format!("{}: j={}; G={}", self.ids[i], n.j, n.kernel.label())
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("graph oriented_p{}_c{}_l{} {{\n", self.p, self.c, self.ell);
        for i in 0..self.nodes.len() {
            let shape = if self.nodes[i].surface { "box" } else { "ellipse" };
            s += &format!("  {} [label=\"{}\", shape={}];\n", self.ids[i], self.node_label(i), shape);
        }
        for &(a, b) in &self.edges {
            s += &format!("  {} -- {};\n", self.ids[a], self.ids[b]);
        }
        s += "}\n";
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                serde_json::json!({
                    "id": self.ids[i],
                    "j": n.j.to_string(),
                    "curve": n.curve().format(),
                    "kernel": n.kernel.poly.format(),
                    "u": n.u.to_string(),
                    "surface": n.surface,
                    "conjugate": self.ids[self.conj[i]],
                    "negation": self.ids[self.flip[i]],
                })
            })
            .collect();
        let edges: Vec<_> = self.edges.iter().map(|&(a, b)| [self.ids[a].clone(), self.ids[b].clone()]).collect();
        let pairs: Vec<_> = (0..self.nodes.len())
            .filter(|&i| i <= self.conj[i])
            .map(|i| [self.ids[i].clone(), self.ids[self.conj[i]].clone()])
            .collect();
        serde_json::json!({
            "p": self.p, "c": self.c, "ell": self.ell,
            "nodes": nodes, "edges": edges, "conjugation": pairs,
            "non_oriented": self.non_oriented,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::Variant;

    fn k101() -> Fp2 {
        Fp2::new(101).unwrap()
    }

    #[test]
    fn invariants() {
        let k = k101();
        let e1 = Curve::new(k, k.from_i64(8), k.from_i64(85)).unwrap();
        assert_eq!(e1.j_invariant(), k.from_i64(66));
        assert_eq!(from_j(k, F2::ZERO).a6, F2::ONE);
        let j = k.elem(37, 10);
        assert_eq!(from_j(k, j).j_invariant(), j);
        assert_eq!(from_j(k, j).conjugate().j_invariant(), k.frob(j));
        assert_eq!(Curve::new(k, F2::ZERO, F2::ZERO), Err(Error::Singular));
    }

    #[test]
    fn supersingularity() {
        let k = k101();
        assert!(is_supersingular(&from_j(k, k.from_i64(66))).unwrap());
        let k103 = Fp2::new(103).unwrap();
        assert!(is_supersingular(&from_j(k103, k103.from_i64(1728))).unwrap());
        let k5 = Fp2::new(5).unwrap();
        assert!(!is_supersingular(&from_j(k5, k5.from_i64(1))).unwrap());
        // 101 = 5 (mod 12): floor(101/12) + 1 supersingular j
        assert_eq!(supersingular_js(k).unwrap().len(), 9);
        let big = Fp2::new(2003).unwrap();
        assert_eq!(count_points(&from_j(big, F2::ONE)), Err(Error::PTooLarge(2003)));
    }

    #[test]
    fn normalization() {
        let k = k101();
        for j in supersingular_js(k).unwrap() {
            let e = normalize_frobenius(&from_j(k, j)).unwrap();
            assert_eq!(count_points(&e).unwrap(), 102 * 102);
            assert_eq!(e.j_invariant(), j);
        }
    }

    #[test]
    fn division_polynomials_vanish_on_torsion() {
        let k = k101();
        let e = Curve::new(k, k.from_i64(8), k.from_i64(85)).unwrap();
        assert_eq!(division_poly(&e, 3).unwrap().deg(), 4);
        assert_eq!(division_poly(&e, 5).unwrap().deg(), 12);
        assert_eq!(division_poly(&e, 101), Err(Error::BadN(101)));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [3u64, 4, 5, 6, 7] {
            let f = division_poly(&e, n as i64).unwrap();
            for _ in 0..20 {
                let pt = e.random_point(&mut rng);
                if let Point::Aff(x, y) = pt {
                    if y.is_zero() {
                        continue;
                    }
                    assert_eq!(f.eval(x).is_zero(), e.mul(n, &pt) == Point::Inf);
                }
            }
        }
    }

    #[test]
    fn kernels_of_e1() {
        let k = k101();
        let e1 = Curve::new(k, k.from_i64(8), k.from_i64(85)).unwrap();
        let ks = order_c_kernels(&e1, 3).unwrap();
        assert_eq!(ks.len(), 4);
        let roots: Vec<F2> = ks.iter().map(|g| k.neg(g.poly.c[0])).collect();
        assert!(roots.contains(&k.from_i64(50)));
        assert!(roots.contains(&k.from_i64(49)));
        // exactly one of the four lands on E^p (here j in F_p)
        let passing: Vec<F2> = ks
            .iter()
            .filter(|g| c_epsilon_test(&e1, g).unwrap())
            .map(|g| k.neg(g.poly.c[0]))
            .collect();
        assert_eq!(passing, vec![k.from_i64(50)]);
        assert!(e1.contains(&Point::Aff(k.from_i64(50), k.from_i64(12))));
        assert!(e1.contains(&Point::Aff(k.from_i64(49), k.elem(0, 74))));
    }

    #[test]
    fn velu_examples() {
        let k = Fp2::new(103).unwrap();
        // y^2 = x^3 - x, kernel x = 0
        let e = Curve::new(k, k.from_i64(-1), F2::ZERO).unwrap();
        let g = SubgroupKernel { curve: e, poly: ModPoly::x(k), order: 2 };
        let v = velu(&g).unwrap();
        assert_eq!(v.codomain.j_invariant(), k.from_i64(1728));
        assert_eq!(v.codomain, Curve::new(k, k.from_i64(4), F2::ZERO).unwrap());
        // x-map (x^2 - 1)/x
        assert_eq!(v.x_map(k.from_i64(2)), Some(k.div(k.from_i64(3), k.from_i64(2))));
        let k = k101();
        let e1 = Curve::new(k, k.from_i64(8), k.from_i64(85)).unwrap();
        for g in order_c_kernels(&e1, 3).unwrap() {
            let v = velu(&g).unwrap();
            assert_eq!(v.num.deg(), 3);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..5 {
                if let Point::Aff(x, _) = e1.random_point(&mut rng) {
                    let img = v.x_map(x).unwrap();
                    // rational points map to rational points
                    assert!(k.is_square(v.codomain.rhs(img)));
                }
            }
        }
    }

    #[test]
    fn higher_order_kernels() {
        let k = k101();
        let e = normalize_frobenius(&from_j(k, k.from_i64(66))).unwrap();
        for c in [5, 7] {
            let ks = order_c_kernels(&e, c).unwrap();
            assert_eq!(ks.len(), c as usize + 1);
            let phi = velu(&ks[0]).unwrap();
            // push another kernel and check it is a c-kernel on the codomain
            let img = phi.push(&order_c_kernels(&e, 2).unwrap()[0]).unwrap();
            assert!(order_c_kernels(&phi.codomain, 2).unwrap().iter().any(|g| g.poly == img.poly));
        }
    }

    #[test]
    fn modular_polynomials() {
        let k = k101();
        let phi2 = phi_poly(2).unwrap();
        let phi3 = phi_poly(3).unwrap();
        assert!(phi2.is_symmetric() && phi3.is_symmetric());
        assert_eq!(phi_poly(5), Err(Error::UnsupportedEll(5)));
        let a = k.elem(37, 10);
        assert_eq!(isogeny_count(&phi3, k, k.from_i64(66), k.from_i64(66)), 1);
        assert_eq!(isogeny_count(&phi3, k, k.from_i64(21), k.from_i64(21)), 2);
        assert_eq!(isogeny_count(&phi3, k, k.from_i64(57), k.from_i64(57)), 2);
        assert_eq!(isogeny_count(&phi3, k, a, k.frob(a)), 2);
        let bad = parse_modular(3, "4 0 1\n3 3 -1\n0 3 5\n");
        assert!(bad.is_err());
    }

    #[test]
    fn example_graph() {
        let params = PrimeParams::new(101, 3, Variant::LambdaPrime).unwrap();
        let g = oriented_graph(&params, 2).unwrap();
        assert_eq!(g.nodes.len(), 20);
        assert_eq!(g.edges.len(), 20);
        assert_eq!(g.components().len(), 1);
        assert_eq!(g.nodes.iter().filter(|n| n.surface).count(), 10);
        for i in 0..20 {
            assert_ne!(g.conj[i], i);
            assert_eq!(g.conj[g.conj[i]], i);
            assert_eq!(g.degree(i), if g.nodes[i].surface { 3 } else { 1 });
        }
        // conjugation is a graph automorphism
        let mut e1: Vec<(usize, usize)> = g.edges.clone();
        let mut e2: Vec<(usize, usize)> = g
            .edges
            .iter()
            .map(|&(a, b)| (g.conj[a].min(g.conj[b]), g.conj[a].max(g.conj[b])))
            .collect();
        e1.sort();
        e2.sort();
        assert_eq!(e1, e2);
        assert!(g.to_dot().contains("E1p"));
    }
}
