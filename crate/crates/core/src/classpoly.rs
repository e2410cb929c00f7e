//! Hilbert class polynomials by the analytic method, their reductions, and
//! exact resultants.
//!
//! j(tau) is evaluated as E4^3 / Delta written in Jacobi thetas with nome
//! e^(i pi tau):
//!   j = 32 (t2^8 + t3^8 + t4^8)^3 / (t2 t3 t4)^8.
//! The theta series converge like q^(n^2), so a few dozen terms suffice even
//! at thousands of bits.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Float, Integer};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ff::{Fp2, ModPoly};
use crate::numth::{is_prime, mul_mod};
use crate::qform::class_group;
use crate::Error;

/// Doublings allowed past the first estimate.
pub const RETRY_CAP: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPolynomial {
    pub d: i64,
    /// Ascending, monic.
    #[serde(serialize_with = "ser_ints", deserialize_with = "de_ints")]
    pub coeffs: Vec<Integer>,
    /// Working precision of the successful evaluation, in bits.
    pub precision: u32,
}

fn ser_ints<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn de_ints<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
    let v: Vec<String> = Vec::deserialize(d)?;
    v.iter()
        .map(|s| Integer::from_str_radix(s, 10).map_err(serde::de::Error::custom))
        .collect()
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

#[derive(Clone)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn real(prec: u32, x: i64) -> Cx {
        Cx { re: Float::with_val(prec, x), im: Float::new(prec) }
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx { re: Float::with_val(self.re.prec(), &self.re + &o.re), im: Float::with_val(self.re.prec(), &self.im + &o.im) }
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx { re: Float::with_val(self.re.prec(), &self.re - &o.re), im: Float::with_val(self.re.prec(), &self.im - &o.im) }
    }
    fn mul(&self, o: &Cx) -> Cx {
        let prec = self.re.prec();
        let ac = Float::with_val(prec, &self.re * &o.re);
        let bd = Float::with_val(prec, &self.im * &o.im);
        let ad = Float::with_val(prec, &self.re * &o.im);
        let bc = Float::with_val(prec, &self.im * &o.re);
        Cx { re: ac - bd, im: ad + bc }
    }
    fn sqr(&self) -> Cx {
        self.mul(self)
    }
    fn scale(&self, k: i64) -> Cx {
        Cx { re: Float::with_val(self.re.prec(), &self.re * k), im: Float::with_val(self.re.prec(), &self.im * k) }
    }
    fn div(&self, o: &Cx) -> Cx {
        let prec = self.re.prec();
        let den = Float::with_val(prec, o.re.clone().square() + o.im.clone().square());
        let conj = Cx { re: o.re.clone(), im: Float::with_val(prec, -&o.im) };
        let n = self.mul(&conj);
        Cx { re: n.re / &den, im: n.im / &den }
    }
    fn conj(&self) -> Cx {
        Cx { re: self.re.clone(), im: Float::with_val(self.re.prec(), -&self.im) }
    }
}

/// j((-b + sqrt(d)) / 2a) at `prec` bits.
fn j_at(a: i64, b: i64, d: i64, prec: u32) -> Cx {
    let pi = Float::with_val(prec, Constant::Pi);
    // q = exp(i pi tau) = exp(-pi sqrt|d| / 2a) * exp(-i pi b / 2a)
    let sq = Float::with_val(prec, -d).sqrt();
    let modulus = (-Float::with_val(prec, &pi * &sq) / (2 * a)).exp();
    let ang = -Float::with_val(prec, &pi * b) / (2 * a);
    let (s, c) = ang.sin_cos(Float::new(prec));
    let q = Cx { re: Float::with_val(prec, &modulus * &c), im: Float::with_val(prec, &modulus * &s) };

    // |q|^(n^2) below 2^-(prec+32) ends the series
    let log2q = (std::f64::consts::PI * ((-d) as f64).sqrt() / (2.0 * a as f64)) / std::f64::consts::LN_2;
    let nmax = (((prec + 32) as f64 / log2q).sqrt().ceil() as i64).max(2) + 1;

    let one = Cx::real(prec, 1);
    let mut t3 = one.clone();
    let mut t4 = one.clone();
    let mut s2 = one.clone(); // sum q^(n(n+1)), n >= 0
    let mut qn = one.clone(); // q^n
    let mut e = one.clone(); // q^(n^2)
    for n in 1..=nmax {
        let prev = qn.clone();
        qn = qn.mul(&q);
        e = e.mul(&prev).mul(&qn);
        let twice = e.scale(2);
        t3 = t3.add(&twice);
        t4 = if n % 2 == 1 { t4.sub(&twice) } else { t4.add(&twice) };
        s2 = s2.add(&e.mul(&qn));
    }
    let pow8 = |x: &Cx| x.sqr().sqr().sqr();
    let t2_8 = q.sqr().mul(&pow8(&s2)).scale(256);
    let t3_8 = pow8(&t3);
    let t4_8 = pow8(&t4);
    let num = t2_8.add(&t3_8).add(&t4_8);
    let num = num.sqr().mul(&num).scale(32);
    let den = t2_8.mul(&t3_8).mul(&t4_8);
    num.div(&den)
}

/// log2 of the largest expected coefficient, pi sqrt|D| sum(1/a) / ln 2.
pub fn precision_estimate(d: i64) -> Result<f64, Error> {
    let forms = class_group(d)?;
    let s: f64 = forms.iter().map(|f| 1.0 / f.a as f64).sum();
    Ok(std::f64::consts::PI * ((-d) as f64).sqrt() * s / std::f64::consts::LN_2)
}

fn attempt(d: i64, prec: u32) -> Option<Vec<Integer>> {
    let forms = class_group(d).ok()?;
    let mut js: Vec<Cx> = Vec::with_capacity(forms.len());
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    for f in &forms {
        // (a, -b, c) gives the complex conjugate
        if let Some(&i) = seen.get(&(f.a, -f.b)) {
            js.push(js[i].conj());
        } else {
            seen.insert((f.a, f.b), js.len());
            js.push(j_at(f.a, f.b, d, prec));
        }
    }
    let mut poly: Vec<Cx> = vec![Cx::real(prec, 1)];
    for j in &js {
        let mut next = vec![Cx::real(prec, 0); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(j));
        }
        poly = next;
    }
    let quarter = Float::with_val(prec, 0.25);
    let mut out = Vec::with_capacity(poly.len());
    for c in &poly {
        let rounded = c.re.clone().round();
        let err = Float::with_val(prec, &c.re - &rounded).abs();
        if err >= quarter || Float::with_val(prec, c.im.abs_ref()) >= quarter {
            return None;
        }
        out.push(rounded.to_integer()?);
    }
    Some(out)
}

fn cache() -> &'static Mutex<HashMap<i64, Arc<ClassPolynomial>>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<ClassPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// H_D over Z, memoized.
pub fn hilbert(d: i64) -> Result<Arc<ClassPolynomial>, Error> {
    hilbert_with(d, None)
}

/// As `hilbert`, optionally forcing the starting precision. A forced
/// precision bypasses the cache.
pub fn hilbert_with(d: i64, start_bits: Option<u32>) -> Result<Arc<ClassPolynomial>, Error> {
    if start_bits.is_none() {
        if let Some(h) = cache().lock().unwrap().get(&d) {
            return Ok(h.clone());
        }
    }
    let h = class_group(d)?.len();
    let est = precision_estimate(d)?;
    let mut prec = start_bits.unwrap_or((est * 1.05) as u32 + 64 + 4 * (h as f64).log2().ceil() as u32);
    prec = prec.max(64);
    for _ in 0..=RETRY_CAP {
        if let Some(coeffs) = attempt(d, prec) {
            let hp = Arc::new(ClassPolynomial { d, coeffs, precision: prec });
            if start_bits.is_none() {
                cache().lock().unwrap().insert(d, hp.clone());
            }
            return Ok(hp);
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(prec / 2))
}

/// Fill the memo for many discriminants in parallel.
pub fn precompute(ds: &[i64]) -> Result<(), Error> {
    let mut ds: Vec<i64> = ds.to_vec();
    ds.sort_unstable();
    ds.dedup();
    // largest first so the long jobs do not straggle
    ds.sort_by_key(|d| std::cmp::Reverse(-d));
    ds.par_iter().try_for_each(|&d| hilbert(d).map(|_| ()))
}

fn reduce_mod(x: &Integer, m: u64) -> u64 {
    let r = Integer::from(x % m);
    let r = if r < 0 { r + m } else { r };
    r.to_u64().unwrap()
}

pub fn hilbert_mod(d: i64, p: i64) -> Result<ModPoly, Error> {
    let k = Fp2::new(p as u64)?;
    let h = hilbert(d)?;
    Ok(ModPoly::new(
        k,
        h.coeffs.iter().map(|c| crate::ff::F2 { u: reduce_mod(c, p as u64), v: 0 }).collect(),
    ))
}

/// Resultant of two polynomials over F_m, m prime, by the Euclidean algorithm.
fn resultant_mod_prime(f: &[u64], g: &[u64], m: u64) -> u64 {
    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
    let inv = |x: u64| crate::numth::pow_mod(x, m - 2, m);
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut res = 1u64;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return mul_mod(res, crate::numth::pow_mod(b[0], da as u64, m), m);
        }
        if da < db {
            // Res(a, b) = (-1)^(da db) Res(b, a)
            if (da * db) % 2 == 1 {
                res = (m - res) % m;
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // a = q b + r  =>  Res(a, b) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
        let lb = b[db];
        let li = inv(lb);
        let mut r = a.clone();
        for i in (db..=da).rev() {
            let t = mul_mod(r[i], li, m);
            if t == 0 {
                continue;
            }
            for j in 0..=db {
                let s = mul_mod(t, b[j], m);
                r[i - db + j] = (r[i - db + j] + m - s) % m;
            }
        }
        r.truncate(db);
        let r = trim(r);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        res = mul_mod(res, crate::numth::pow_mod(lb, (da - dr) as u64, m), m);
        if (da * db) % 2 == 1 {
            res = (m - res) % m;
        }
        a = b;
        b = r;
    }
}

/// Hadamard-type bound on log2 |Res(f, g)|.
fn resultant_log2_bound(f: &[Integer], g: &[Integer]) -> f64 {
    let norm = |v: &[Integer]| {
        let s: Integer = v.iter().map(|x| Integer::from(x * x)).sum();
        let bits = s.significant_bits() as f64;
        bits / 2.0 + 1.0
    };
    (g.len() - 1) as f64 * norm(f) + (f.len() - 1) as f64 * norm(g)
}

/// Exact resultant over Z by CRT over word-size primes.
pub fn resultant(f: &[Integer], g: &[Integer]) -> Integer {
    let need = resultant_log2_bound(f, g) + 2.0;
    let mut modulus = Integer::from(1);
    let mut acc = Integer::from(0);
    let mut m: u64 = (1u64 << 62) - 1;
    while (modulus.significant_bits() as f64) < need {
        while !is_prime(m) {
            m -= 2;
        }
        let fm: Vec<u64> = f.iter().map(|c| reduce_mod(c, m)).collect();
        let gm: Vec<u64> = g.iter().map(|c| reduce_mod(c, m)).collect();
        let r = resultant_mod_prime(&fm, &gm, m);
        // acc + modulus * t = r (mod m)
        let am = reduce_mod(&acc, m);
        let mm = reduce_mod(&modulus, m);
        let t = mul_mod((r + m - am) % m, crate::numth::pow_mod(mm, m - 2, m), m);
        acc += Integer::from(&modulus * t);
        modulus *= m;
        m -= 2;
    }
    // symmetric residue
    let half = Integer::from(&modulus >> 1);
    if acc > half {
        acc -= &modulus;
    }
    acc
}

fn inv_mod_u(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u64
}

/// v_p(det M) from M mod p^k, or None when some column vanishes mod p^k.
fn det_valuation(mut mat: Vec<Vec<u64>>, p: u64, k: u32) -> Option<u32> {
    let pk = p.pow(k);
    let val = |x: u64| {
        if x == 0 {
            return k;
        }
        let (mut x, mut v) = (x, 0);
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let n = mat.len();
    let mut total = 0;
    for col in 0..n {
        let (best, bv) = (col..n).map(|r| (r, val(mat[r][col]))).min_by_key(|&(_, v)| v)?;
        if bv >= k {
            return None;
        }
        mat.swap(col, best);
        total += bv;
        let pv = p.pow(bv);
        let unit = inv_mod_u(mat[col][col] / pv, pk);
        for r in col + 1..n {
            if mat[r][col] == 0 {
                continue;
            }
            let t = ((mat[r][col] / pv) as u128 * unit as u128 % pk as u128) as u64;
            for c in col..n {
                let s = (t as u128 * mat[col][c] as u128 % pk as u128) as u64;
                mat[r][c] = (mat[r][c] + pk - s) % pk;
            }
        }
    }
    Some(total)
}

fn sylvester(f: &[u64], g: &[u64], m: u64) -> Vec<Vec<u64>> {
    let df = f.len() - 1;
    let dg = g.len() - 1;
    let n = df + dg;
    let mut rows = Vec::with_capacity(n);
    for i in 0..dg {
        let mut row = vec![0; n];
        for (j, &c) in f.iter().rev().enumerate() {
            row[i + j] = c % m;
        }
        rows.push(row);
    }
    for i in 0..df {
        let mut row = vec![0; n];
        for (j, &c) in g.iter().rev().enumerate() {
            row[i + j] = c % m;
        }
        rows.push(row);
    }
    rows
}

/// v_p of an integer resultant: p-adic elimination on the Sylvester matrix,
/// falling back to the exact CRT resultant when p-adic precision runs out.
pub fn resultant_valuation(f: &[Integer], g: &[Integer], p: u64) -> Result<u32, Error> {
    let k = (62.0 / (p as f64).log2()).floor() as u32;
    let pk = p.pow(k);
    let fm: Vec<u64> = f.iter().map(|c| reduce_mod(c, pk)).collect();
    let gm: Vec<u64> = g.iter().map(|c| reduce_mod(c, pk)).collect();
    if let Some(v) = det_valuation(sylvester(&fm, &gm, pk), p, k) {
        return Ok(v);
    }
    let r = resultant(f, g);
    if r == 0 {
        return Err(Error::ResultantZero);
    }
    Ok(r.remove_factor(&Integer::from(p)).1)
}

pub fn resultant_vp(d1: i64, d2: i64, p: i64) -> Result<u32, Error> {
    if d1 == d2 {
        return Err(Error::ResultantZero);
    }
    let h1 = hilbert(d1)?;
    let h2 = hilbert(d2)?;
    resultant_valuation(&h1.coeffs, &h2.coeffs, p as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{factor, F2};

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn small_discriminants() {
        assert_eq!(hilbert(-3).unwrap().coeffs, ints(&[0, 1]));
        assert_eq!(hilbert(-4).unwrap().coeffs, ints(&[-1728, 1]));
        assert_eq!(hilbert(-12).unwrap().coeffs, ints(&[-54000, 1]));
        assert_eq!(hilbert(-7).unwrap().coeffs, ints(&[3375, 1]));
        assert_eq!(hilbert(-8).unwrap().coeffs, ints(&[-8000, 1]));
        // h(-15) = 2: X^2 + 191025 X - 121287375
        assert_eq!(hilbert(-15).unwrap().coeffs, ints(&[-121287375, 191025, 1]));
    }

    #[test]
    fn reductions() {
        let k = Fp2::new(101).unwrap();
        assert_eq!(hilbert_mod(-4, 101).unwrap(), ModPoly::from_i64(k, &[-11, 1]));
        assert_eq!(hilbert_mod(-12, 101).unwrap(), ModPoly::from_i64(k, &[-66, 1]));
    }

    #[test]
    fn example_factorizations() {
        let k = Fp2::new(101).unwrap();
        let lin = |a: i64| ModPoly::from_i64(k, &[a, 1]);
        let quad = ModPoly::from_i64(k, &[54, 27, 1]);
        let got = factor(&hilbert_mod(-303, 101).unwrap());
        // factor() works over F_{p^2}, so the quadratic shows up as its two roots
        let mut want = vec![(lin(35), 2), (lin(80), 4)];
        for fac in factor(&quad) {
            want.push((fac.0, 2));
        }
        want.sort_by(|a, b| a.0.c.cmp(&b.0.c));
        let mut got_sorted = got.clone();
        got_sorted.sort_by(|a, b| a.0.c.cmp(&b.0.c));
        assert_eq!(got_sorted, want);
        let h = hilbert_mod(-1212, 101).unwrap();
        let x = ModPoly::x(k);
        let want = x.sqr().mul(&lin(44).sqr().sqr()).mul(&quad.sqr());
        assert_eq!(h, want);
        assert_eq!(F2::ZERO, h.eval(F2::ZERO));
    }

    #[test]
    fn crt_resultant() {
        assert_eq!(resultant(&ints(&[0, 1]), &ints(&[-1728, 1])), Integer::from(-1728));
        // Res(X^2 - 2, X - 3) = 7
        assert_eq!(resultant(&ints(&[-2, 0, 1]), &ints(&[-3, 1])), Integer::from(7));
        assert_eq!(resultant(&ints(&[-3, 1]), &ints(&[-2, 0, 1])), Integer::from(7));
        // Res(X^2 + 1, X^2 - 1) = 4
        assert_eq!(resultant(&ints(&[1, 0, 1]), &ints(&[-1, 0, 1])), Integer::from(4));
    }

    #[test]
    fn valuations() {
        assert_eq!(resultant_vp(-3, -4, 101).unwrap(), 0);
        assert_eq!(resultant_vp(-32, -44, 101).unwrap(), 2);
        assert_eq!(resultant_vp(-44, -32, 101).unwrap(), 2);
        // p-adic path agrees with the exact integer
        let h1 = hilbert(-32).unwrap();
        let h2 = hilbert(-44).unwrap();
        let r = resultant(&h1.coeffs, &h2.coeffs);
        assert_eq!(r.remove_factor(&Integer::from(101)).1, 2);
        assert!(resultant_vp(-11, -111, 101).unwrap() >= 2);
        assert_eq!(resultant_vp(-7, -7, 101), Err(Error::ResultantZero));
    }
}
