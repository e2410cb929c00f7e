//! The fields F_p and F_{p^2} = F_p(a), a^2 = -n, and dense polynomials
//! over them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::numth::{is_prime, kronecker, mul_mod, pow_mod};
use crate::Error;

/// F_{p^2} presented as F_p(a) with a^2 = -n, n the least positive integer
/// making -n a non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp2 {
    pub p: u64,
    pub n: u64,
}

/// u + v a
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct F2 {
    pub u: u64,
    pub v: u64,
}

impl F2 {
    pub const ZERO: F2 = F2 { u: 0, v: 0 };
    pub const ONE: F2 = F2 { u: 1, v: 0 };
    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
    pub fn in_fp(&self) -> bool {
        self.v == 0
    }
}

impl Fp2 {
    pub fn new(p: u64) -> Result<Fp2, Error> {
        if p <= 3 || !is_prime(p) {
            return Err(Error::BadParams(format!("p = {p} must be a prime > 3")));
        }
        let n = (1..p).find(|&n| kronecker(-(n as i64), p as i64) == -1).unwrap();
        Ok(Fp2 { p, n })
    }

    pub fn from_i64(&self, x: i64) -> F2 {
        F2 { u: x.rem_euclid(self.p as i64) as u64, v: 0 }
    }

    pub fn elem(&self, u: i64, v: i64) -> F2 {
        F2 { u: u.rem_euclid(self.p as i64) as u64, v: v.rem_euclid(self.p as i64) as u64 }
    }

    /// The generator a.
    pub fn gen(&self) -> F2 {
        F2 { u: 0, v: 1 }
    }

    pub fn add(&self, x: F2, y: F2) -> F2 {
        let p = self.p;
        F2 { u: (x.u + y.u) % p, v: (x.v + y.v) % p }
    }

    pub fn sub(&self, x: F2, y: F2) -> F2 {
        let p = self.p;
        F2 { u: (x.u + p - y.u) % p, v: (x.v + p - y.v) % p }
    }

    pub fn neg(&self, x: F2) -> F2 {
        self.sub(F2::ZERO, x)
    }

    pub fn mul(&self, x: F2, y: F2) -> F2 {
        let p = self.p;
        // (u1 + v1 a)(u2 + v2 a) = u1u2 - n v1v2 + (u1v2 + u2v1) a
        let uu = mul_mod(x.u, y.u, p);
        let vv = mul_mod(mul_mod(x.v, y.v, p), self.n, p);
        let uv = (mul_mod(x.u, y.v, p) + mul_mod(x.v, y.u, p)) % p;
        F2 { u: (uu + p - vv) % p, v: uv }
    }

    pub fn sqr(&self, x: F2) -> F2 {
        self.mul(x, x)
    }

    pub fn scale(&self, x: F2, k: i64) -> F2 {
        self.mul(x, self.from_i64(k))
    }

    pub fn pow(&self, mut x: F2, mut e: u128) -> F2 {
        let mut r = F2::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.sqr(x);
            e >>= 1;
        }
        r
    }

    /// x^p, the nontrivial automorphism.
    pub fn frob(&self, x: F2) -> F2 {
        F2 { u: x.u, v: (self.p - x.v) % self.p }
    }

    /// Norm x^(p+1) in F_p.
    pub fn norm(&self, x: F2) -> u64 {
        let p = self.p;
        (mul_mod(x.u, x.u, p) + mul_mod(mul_mod(x.v, x.v, p), self.n, p)) % p
    }

    pub fn inv(&self, x: F2) -> F2 {
        assert!(!x.is_zero(), "inverse of zero");
        let p = self.p;
        let nm = self.norm(x);
        let ni = pow_mod(nm, p - 2, p);
        let c = self.frob(x);
        F2 { u: mul_mod(c.u, ni, p), v: mul_mod(c.v, ni, p) }
    }

    pub fn div(&self, x: F2, y: F2) -> F2 {
        self.mul(x, self.inv(y))
    }

    pub fn is_square(&self, x: F2) -> bool {
        if x.is_zero() {
            return true;
        }
        self.pow(x, (self.order() - 1) as u128 / 2) == F2::ONE
    }

    pub fn order(&self) -> u64 {
        self.p * self.p
    }

    /// A square root, when one exists (Tonelli-Shanks in the group of order p^2 - 1).
    pub fn sqrt(&self, x: F2) -> Option<F2> {
        if x.is_zero() {
            return Some(F2::ZERO);
        }
        if !self.is_square(x) {
            return None;
        }
        let q = self.order();
        let mut s = 0;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self.non_square();
        let mut m = s;
        let mut c = self.pow(z, t as u128);
        let mut tt = self.pow(x, t as u128);
        let mut r = self.pow(x, t.div_ceil(2) as u128);
        while tt != F2::ONE {
            let mut i = 0;
            let mut t2 = tt;
            while t2 != F2::ONE {
                t2 = self.sqr(t2);
                i += 1;
            }
            let b = self.pow(c, 1u128 << (m - i - 1));
            m = i;
            c = self.sqr(b);
            tt = self.mul(tt, c);
            r = self.mul(r, b);
        }
        debug_assert_eq!(self.sqr(r), x);
        Some(r)
    }

    fn non_square(&self) -> F2 {
        for v in 1..self.p {
            for u in 0..self.p {
                let z = F2 { u, v };
                if !self.is_square(z) {
                    return z;
                }
            }
        }
        unreachable!()
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> F2 {
        F2 { u: rng.gen_range(0..self.p), v: rng.gen_range(0..self.p) }
    }

    /// Every element, F_p first.
    pub fn elements(&self) -> impl Iterator<Item = F2> + '_ {
        (0..self.p).flat_map(move |v| (0..self.p).map(move |u| F2 { u, v }))
    }

    pub fn format(&self, x: F2) -> String {
        format!("{}", Shown(x))
    }

    /// Parse "u", "u+v*a", "v*a", "v*a+u", "-v*a+u" style strings.
    pub fn parse(&self, s: &str) -> Result<F2, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::BadParams(format!("cannot parse field element '{s}'"));
        let mut total = F2::ZERO;
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            terms.push(cur);
        }
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            let term = if let Some(coef) = body.strip_suffix("*a").or_else(|| body.strip_suffix('a')) {
                let k: i64 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| bad())? };
                self.scale(self.gen(), k)
            } else {
                self.from_i64(body.parse().map_err(|_| bad())?)
            };
            total = if neg { self.sub(total, term) } else { self.add(total, term) };
        }
        Ok(total)
    }
}

struct Shown(F2);

impl fmt::Display for Shown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let F2 { u, v } = self.0;
        match (u, v) {
            (u, 0) => write!(f, "{u}"),
            (0, v) => write!(f, "{v}*a"),
            (u, v) => write!(f, "{u}+{v}*a"),
        }
    }
}

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Shown(*self).fmt(f)
    }
}

/// Dense polynomial over F_{p^2}, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModPoly {
    pub k: Fp2,
    pub c: Vec<F2>,
}

impl ModPoly {
    pub fn new(k: Fp2, mut c: Vec<F2>) -> ModPoly {
        while c.last().is_some_and(F2::is_zero) {
            c.pop();
        }
        ModPoly { k, c }
    }

    pub fn zero(k: Fp2) -> ModPoly {
        ModPoly { k, c: vec![] }
    }

    pub fn constant(k: Fp2, a: F2) -> ModPoly {
        ModPoly::new(k, vec![a])
    }

    pub fn one(k: Fp2) -> ModPoly {
        ModPoly::constant(k, F2::ONE)
    }

    /// X
    pub fn x(k: Fp2) -> ModPoly {
        ModPoly::new(k, vec![F2::ZERO, F2::ONE])
    }

    /// X - a
    pub fn linear(k: Fp2, a: F2) -> ModPoly {
        ModPoly::new(k, vec![k.neg(a), F2::ONE])
    }

    pub fn from_i64(k: Fp2, c: &[i64]) -> ModPoly {
        ModPoly::new(k, c.iter().map(|&v| k.from_i64(v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, -1 for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> F2 {
        *self.c.last().unwrap_or(&F2::ZERO)
    }

    pub fn coeff(&self, i: usize) -> F2 {
        self.c.get(i).copied().unwrap_or(F2::ZERO)
    }

    pub fn eval(&self, x: F2) -> F2 {
        let k = self.k;
        self.c.iter().rev().fold(F2::ZERO, |acc, &a| k.add(k.mul(acc, x), a))
    }

    pub fn add(&self, o: &ModPoly) -> ModPoly {
        let n = self.c.len().max(o.c.len());
        ModPoly::new(self.k, (0..n).map(|i| self.k.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &ModPoly) -> ModPoly {
        let n = self.c.len().max(o.c.len());
        ModPoly::new(self.k, (0..n).map(|i| self.k.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> ModPoly {
        ModPoly::new(self.k, self.c.iter().map(|&a| self.k.neg(a)).collect())
    }

    pub fn scale(&self, a: F2) -> ModPoly {
        ModPoly::new(self.k, self.c.iter().map(|&b| self.k.mul(a, b)).collect())
    }

    pub fn mul(&self, o: &ModPoly) -> ModPoly {
        if self.is_zero() || o.is_zero() {
            return ModPoly::zero(self.k);
        }
        let k = self.k;
        let p = k.p as u128;
        let n = k.n as u128;
        // accumulate without reducing every step
        let len = self.c.len() + o.c.len() - 1;
        let mut uu = vec![0u128; len];
        let mut vv = vec![0u128; len];
        let mut uv = vec![0u128; len];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                uu[i + j] += a.u as u128 * b.u as u128;
                vv[i + j] += a.v as u128 * b.v as u128;
                uv[i + j] += a.u as u128 * b.v as u128 + a.v as u128 * b.u as u128;
            }
        }
        let c = (0..len)
            .map(|t| {
                let vn = (vv[t] % p) * n % p;
                F2 { u: ((uu[t] % p + p - vn) % p) as u64, v: (uv[t] % p) as u64 }
            })
            .collect();
        ModPoly::new(k, c)
    }

    pub fn sqr(&self) -> ModPoly {
        self.mul(self)
    }

    pub fn divrem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let k = self.k;
        if self.deg() < d.deg() {
            return (ModPoly::zero(k), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let inv = k.inv(d.lead());
        let mut q = vec![F2::ZERO; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let t = k.mul(r[i + dl - 1], inv);
            q[i] = t;
            if t.is_zero() {
                continue;
            }
            for j in 0..dl {
                r[i + j] = k.sub(r[i + j], k.mul(t, d.c[j]));
            }
        }
        r.truncate(dl - 1);
        (ModPoly::new(k, q), ModPoly::new(k, r))
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.k.inv(self.lead()))
    }

    pub fn derivative(&self) -> ModPoly {
        let k = self.k;
        ModPoly::new(k, (1..self.c.len()).map(|i| k.scale(self.c[i], i as i64)).collect())
    }

    /// self^e mod m
    pub fn powmod(&self, mut e: u128, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut r = ModPoly::one(self.k).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base).rem(m);
            }
            base = base.sqr().rem(m);
            e >>= 1;
        }
        r
    }

    /// self(g) mod m
    pub fn compose_mod(&self, g: &ModPoly, m: &ModPoly) -> ModPoly {
        let mut acc = ModPoly::zero(self.k);
        for &a in self.c.iter().rev() {
            acc = acc.mul(g).add(&ModPoly::constant(self.k, a)).rem(m);
        }
        acc
    }

    /// Inverse modulo m, when gcd(self, m) = 1.
    pub fn inv_mod(&self, m: &ModPoly) -> Option<ModPoly> {
        let k = self.k;
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut t0, mut t1) = (ModPoly::zero(k), ModPoly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.deg() != 0 {
            return None;
        }
        Some(t0.scale(k.inv(r0.lead())).rem(m))
    }

    /// Coefficientwise Frobenius.
    pub fn frob(&self) -> ModPoly {
        ModPoly::new(self.k, self.c.iter().map(|&a| self.k.frob(a)).collect())
    }

    /// Coefficients as integers when every coefficient lies in F_p.
    pub fn fp_coeffs(&self) -> Option<Vec<u64>> {
        self.c.iter().map(|a| a.in_fp().then_some(a.u)).collect()
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let coef = if a.in_fp() { format!("{}", a.u) } else { format!("({a})") };
            parts.push(match i {
                0 => coef,
                1 if *a == F2::ONE => "X".into(),
                1 => format!("{coef}*X"),
                _ if *a == F2::ONE => format!("X^{i}"),
                _ => format!("{coef}*X^{i}"),
            });
        }
        parts.join(" + ")
    }
}

pub fn poly_gcd(f: &ModPoly, g: &ModPoly) -> Result<ModPoly, Error> {
    if f.k != g.k {
        return Err(Error::CtxMismatch);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// Resultant over the field by the Euclidean algorithm.
pub fn poly_resultant(f: &ModPoly, g: &ModPoly) -> F2 {
    let k = f.k;
    if f.is_zero() || g.is_zero() {
        return F2::ZERO;
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut res = F2::ONE;
    loop {
        let da = a.deg() as u128;
        let db = b.deg() as u128;
        if db == 0 {
            return k.mul(res, k.pow(b.lead(), da));
        }
        if da < db {
            if (da * db) % 2 == 1 {
                res = k.neg(res);
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return F2::ZERO;
        }
        let dr = r.deg() as u128;
        res = k.mul(res, k.pow(b.lead(), da - dr));
        if (da * db) % 2 == 1 {
            res = k.neg(res);
        }
        a = b;
        b = r;
    }
}

/// The polynomial of degree < n through (xs[i], ys[i]).
pub fn interpolate(k: Fp2, xs: &[F2], ys: &[F2]) -> ModPoly {
    let mut out = ModPoly::zero(k);
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let mut num = ModPoly::one(k);
        let mut den = F2::ONE;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                num = num.mul(&ModPoly::linear(k, xj));
                den = k.mul(den, k.sub(xi, xj));
            }
        }
        out = out.add(&num.scale(k.div(yi, den)));
    }
    out
}

fn frobenius_power_x(f: &ModPoly, q: u128) -> ModPoly {
    ModPoly::x(f.k).powmod(q, f)
}

/// Split a squarefree product of distinct monic factors of degree d into
/// its irreducible factors (Cantor-Zassenhaus with a fixed seed).
fn equal_degree_split(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let k = f.k;
    if f.deg() as usize == d {
        return vec![f.monic()];
    }
    let q = k.order() as u128;
    loop {
        let r = ModPoly::new(k, (0..f.deg() as usize).map(|_| k.random(rng)).collect());
        if r.deg() < 1 {
            continue;
        }
        // r^((q^d - 1)/2) = (r^(1 + q + ... + q^(d-1)))^((q-1)/2)
        let mut t = r.rem(f);
        let mut acc = t.clone();
        for _ in 1..d {
            t = t.powmod(q, f);
            acc = acc.mul(&t).rem(f);
        }
        let h = acc.powmod((q - 1) / 2, f).sub(&ModPoly::one(k));
        let g = poly_gcd(f, &h).unwrap();
        if g.deg() > 0 && g.deg() < f.deg() {
            let (other, _) = f.divrem(&g);
            let mut out = equal_degree_split(&g, d, rng);
            out.extend(equal_degree_split(&other.monic(), d, rng));
            return out;
        }
    }
}

/// Irreducible factorization over F_{p^2}, with multiplicities, factors
/// monic and sorted by degree. Deterministic: randomized splitting uses a
/// fixed seed and every result is checked by multiplying back.
pub fn factor(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    assert!(!f.is_zero());
    let k = f.k;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out: Vec<(ModPoly, usize)> = Vec::new();
    let mut rest = f.monic();
    // peel off repeated factors by multiplicity
    let mut mult = 1usize;
    while rest.deg() > 0 {
        let sqfree = squarefree_part(&rest);
        // distinct degree factorization of the squarefree part
        let mut g = sqfree.clone();
        let q = k.order() as u128;
        let mut xq = ModPoly::x(k);
        let mut d = 0usize;
        while g.deg() > 0 {
            d += 1;
            if 2 * d > g.deg() as usize {
                out.push((g.monic(), mult));
                break;
            }
            xq = xq.powmod(q, &g);
            let h = poly_gcd(&g, &xq.sub(&ModPoly::x(k))).unwrap();
            if h.deg() > 0 {
                for fac in equal_degree_split(&h, d, &mut rng) {
                    out.push((fac, mult));
                }
                g = g.divrem(&h).0.monic();
                xq = xq.rem(&g);
            }
        }
        rest = rest.divrem(&sqfree).0.monic();
        mult += 1;
    }
    // combine equal factors found at different layers
    let mut merged: Vec<(ModPoly, usize)> = Vec::new();
    for (fac, m) in out {
        if let Some(e) = merged.iter_mut().find(|(g, _)| *g == fac) {
            e.1 += m;
        } else {
            merged.push((fac, m));
        }
    }
    // multiplicities: the layering above counts how many times a factor
    // divides, recompute exactly to be safe
    let mut exact = Vec::new();
    for (fac, _) in merged {
        let mut m = 0;
        let mut t = f.monic();
        loop {
            let (qq, r) = t.divrem(&fac);
            if !r.is_zero() {
                break;
            }
            m += 1;
            t = qq;
        }
        exact.push((fac, m));
    }
    exact.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.c.cmp(&b.0.c)));
    let mut check = ModPoly::one(k);
    for (fac, m) in &exact {
        for _ in 0..*m {
            check = check.mul(fac);
        }
    }
    assert_eq!(check, f.monic(), "factorization does not multiply back");
    exact
}

/// Factorization over F_p of a polynomial with F_p coefficients: factors
/// over F_{p^2} that are not defined over F_p are paired with their
/// conjugates. None if f is not defined over F_p.
pub fn factor_fp(f: &ModPoly) -> Option<Vec<(ModPoly, usize)>> {
    f.fp_coeffs()?;
    let mut pending = factor(f);
    let mut out = Vec::new();
    while let Some((g, m)) = pending.pop() {
        if g.fp_coeffs().is_some() {
            out.push((g, m));
            continue;
        }
        let conj = g.frob();
        let i = pending.iter().position(|(h, n)| *h == conj && *n == m)?;
        pending.remove(i);
        out.push((g.mul(&conj), m));
    }
    out.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.c.cmp(&b.0.c)));
    Some(out)
}

/// Product of the distinct irreducible factors (valid since deg f < p).
fn squarefree_part(f: &ModPoly) -> ModPoly {
    let d = f.derivative();
    if d.is_zero() {
        return f.monic();
    }
    let g = poly_gcd(f, &d).unwrap();
    f.divrem(&g).0.monic()
}

/// All roots with multiplicity, in F_p or (when `in_extension`) in F_{p^2}.
/// Sorted, with each root repeated by multiplicity.
pub fn roots(f: &ModPoly, in_extension: bool) -> Vec<F2> {
    assert!(f.deg() >= 1, "roots of a constant");
    let k = f.k;
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x700d);
    let q: u128 = if in_extension { k.order() as u128 } else { k.p as u128 };
    // distinct roots in the target field: gcd with X^q - X
    let xq = frobenius_power_x(f, q);
    let lin = poly_gcd(f, &xq.sub(&ModPoly::x(k))).unwrap();
    if lin.deg() <= 0 {
        return out;
    }
    let mut found: Vec<F2> = Vec::new();
    if in_extension {
        for fac in equal_degree_split(&lin, 1, &mut rng) {
            found.push(k.neg(fac.c[0]));
        }
    } else {
        // splitting over F_p: random shifts with exponent (p-1)/2
        split_fp(&lin, &mut rng, &mut found);
    }
    for r in found {
        debug_assert!(f.eval(r).is_zero());
        let mut t = f.clone();
        let lin = ModPoly::linear(k, r);
        loop {
            let (qq, rem) = t.divrem(&lin);
            if !rem.is_zero() {
                break;
            }
            out.push(r);
            t = qq;
        }
    }
    out.sort();
    out
}

fn split_fp(f: &ModPoly, rng: &mut ChaCha8Rng, out: &mut Vec<F2>) {
    let k = f.k;
    match f.deg() {
        d if d <= 0 => {}
        1 => out.push(k.neg(f.monic().c[0])),
        _ => loop {
            let a = k.from_i64(rng.gen_range(0..k.p as i64));
            let shifted = ModPoly::new(k, vec![a, F2::ONE]);
            let h = shifted.powmod((k.p as u128 - 1) / 2, f).sub(&ModPoly::one(k));
            let g = poly_gcd(f, &h).unwrap();
            if g.deg() > 0 && g.deg() < f.deg() {
                let other = f.divrem(&g).0.monic();
                split_fp(&g, rng, out);
                split_fp(&other, rng, out);
                return;
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contexts() {
        assert_eq!(Fp2::new(101).unwrap().n, 2);
        assert_eq!(Fp2::new(103).unwrap().n, 1);
        assert_eq!(Fp2::new(5).unwrap().n, 2);
    }

    #[test]
    fn arithmetic() {
        let k = Fp2::new(101).unwrap();
        let a = k.gen();
        assert_eq!(k.sqr(a), k.from_i64(-2));
        let x = k.elem(37, 10);
        assert_eq!(k.mul(x, k.inv(x)), F2::ONE);
        assert_eq!(k.frob(x), k.elem(37, -10));
        assert_eq!(k.pow(x, 101), k.frob(x));
        assert_eq!(k.format(x), "37+10*a");
        assert_eq!(k.parse("10*a+37").unwrap(), x);
        assert_eq!(k.parse("-10a+37").unwrap(), k.frob(x));
        assert_eq!(k.parse("66").unwrap(), k.from_i64(66));
        let s = k.sqrt(x).map(|r| k.sqr(r));
        assert!(s.is_none() || s == Some(x));
        // every element of F_p is a square in F_{p^2}
        assert!(k.is_square(k.from_i64(3)));
    }

    #[test]
    fn gcds() {
        let k = Fp2::new(101).unwrap();
        let f = ModPoly::from_i64(k, &[54, 27, 1]).mul(&ModPoly::from_i64(k, &[1, 1]));
        let g = ModPoly::from_i64(k, &[54, 27, 1]).mul(&ModPoly::from_i64(k, &[5, 1]));
        assert_eq!(poly_gcd(&f, &g).unwrap(), ModPoly::from_i64(k, &[54, 27, 1]));
        assert_eq!(poly_gcd(&f, &ModPoly::zero(k)).unwrap(), f.monic());
    }

    #[test]
    fn root_finding() {
        let k = Fp2::new(101).unwrap();
        let f = ModPoly::from_i64(k, &[54, 27, 1]);
        let r = roots(&f, true);
        let mut want = vec![k.elem(37, 10), k.elem(37, -10)];
        want.sort();
        assert_eq!(r, want);
        assert!(roots(&f, false).is_empty());
        assert_eq!(roots(&ModPoly::from_i64(k, &[-66, 1]), false), vec![k.from_i64(66)]);
        let k3 = Fp2::new(103).unwrap();
        assert!(roots(&ModPoly::from_i64(k3, &[1, 0, 1]), false).is_empty());
        // multiplicities
        let g = ModPoly::from_i64(k, &[-3, 1]).sqr().mul(&ModPoly::from_i64(k, &[4, 1]));
        assert_eq!(roots(&g, false), vec![k.from_i64(3), k.from_i64(3), k.from_i64(97)]);
    }

    #[test]
    fn resultants_and_interpolation() {
        let k = Fp2::new(101).unwrap();
        // Res(X^2 - 2, X - 3) = 7
        let f = ModPoly::from_i64(k, &[-2, 0, 1]);
        let g = ModPoly::from_i64(k, &[-3, 1]);
        assert_eq!(poly_resultant(&f, &g), k.from_i64(7));
        assert_eq!(poly_resultant(&g, &f), k.from_i64(7));
        assert_eq!(poly_resultant(&f, &f), F2::ZERO);
        let xs: Vec<F2> = (0..3).map(|i| k.from_i64(i)).collect();
        let ys: Vec<F2> = xs.iter().map(|&x| f.eval(x)).collect();
        assert_eq!(interpolate(k, &xs, &ys), f);
    }

    #[test]
    fn factoring() {
        let k = Fp2::new(101).unwrap();
        let f = ModPoly::from_i64(k, &[54, 27, 1]).mul(&ModPoly::from_i64(k, &[1, 1]).sqr());
        let fs = factor(&f);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(g, _)| g.deg() == 1));
        assert_eq!(fs.iter().map(|(_, m)| m).sum::<usize>(), 4);
        let fp = factor_fp(&f).unwrap();
        assert_eq!(fp, vec![(ModPoly::from_i64(k, &[1, 1]), 2), (ModPoly::from_i64(k, &[54, 27, 1]), 1)]);
        assert!(factor_fp(&ModPoly::linear(k, k.gen())).is_none());
    }
}
