//! Positive definite binary quadratic forms (a, b, a') of negative
//! discriminant, their composition through ideals, and genus theory.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::numth::{gcd, is_prime, kronecker, q_admissible, sqrt_mod_prime, PrimeParams, Variant};
use crate::Error;

/// The form a X^2 + b XY + a' Y^2. The third coefficient is called `ap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BQForm {
    pub a: i64,
    pub b: i64,
    pub ap: i64,
}

impl fmt::Display for BQForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.ap)
    }
}

impl BQForm {
    pub const fn new(a: i64, b: i64, ap: i64) -> Self {
        BQForm { a, b, ap }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.ap
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.ap) == 1
    }

    pub fn is_reduced(&self) -> bool {
        -self.a < self.b && self.b <= self.a && self.a <= self.ap && !(self.a == self.ap && self.b < 0)
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.ap * y * y
    }

    /// Sort key used for stable output: (a, |b|, sign of b).
    pub fn display_key(&self) -> (i64, i64, bool) {
        (self.a, self.b.abs(), self.b < 0)
    }

    /// f composed with the integral matrix [[x, u], [y, v]].
    pub fn transform(&self, x: i64, u: i64, y: i64, v: i64) -> BQForm {
        let (a, b, c) = (self.a as i128, self.b as i128, self.ap as i128);
        let (x, u, y, v) = (x as i128, u as i128, y as i128, v as i128);
        let na = a * x * x + b * x * y + c * y * y;
        let nb = 2 * a * x * u + b * (x * v + u * y) + 2 * c * y * v;
        let nc = a * u * u + b * u * v + c * v * v;
        BQForm::new(na as i64, nb as i64, nc as i64)
    }
}

fn check_disc(d: i64) -> Result<(), Error> {
    if d >= 0 {
        return Err(Error::NotNegativeDisc);
    }
    if d.rem_euclid(4) > 1 {
        return Err(Error::BadDisc(d));
    }
    Ok(())
}

/// The reduced form equivalent to f.
pub fn reduce(f: &BQForm) -> Result<BQForm, Error> {
    if f.disc() >= 0 || f.a <= 0 {
        return Err(Error::NotNegativeDisc);
    }
    if !f.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    Ok(reduce_unchecked(*f))
}

fn reduce_unchecked(f: BQForm) -> BQForm {
    let (mut a, mut b, mut c) = (f.a as i128, f.b as i128, f.ap as i128);
    loop {
        // normalize: -a < b <= a
        if b <= -a || b > a {
            let k = (a - b).div_euclid(2 * a);
            c += k * (a * k + b);
            b += 2 * a * k;
        }
        if a > c || (a == c && b < 0) {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        break;
    }
    BQForm::new(a as i64, b as i64, c as i64)
}

pub fn identity(d: i64) -> Result<BQForm, Error> {
    check_disc(d)?;
    Ok(if d.rem_euclid(4) == 0 {
        BQForm::new(1, 0, -d / 4)
    } else {
        BQForm::new(1, 1, (1 - d) / 4)
    })
}

pub fn inverse(f: &BQForm) -> BQForm {
    reduce_unchecked(BQForm::new(f.a, -f.b, f.ap))
}

/// The lattice [n, (-b + sqrt D)/2] inside the order of discriminant D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadIdeal {
    pub norm: i64,
    pub b: i64,
    pub d: i64,
}

impl QuadIdeal {
    /// Coordinates of the two basis elements with respect to 1, w where
    /// w = (D + sqrt D)/2.
    fn basis(&self) -> [(i128, i128); 2] {
        [(self.norm as i128, 0), (((-self.b - self.d) / 2) as i128, 1)]
    }
}

pub fn form_to_ideal(f: &BQForm) -> Result<QuadIdeal, Error> {
    if !f.is_primitive() {
        return Err(Error::NotProper);
    }
    Ok(QuadIdeal { norm: f.a, b: f.b, d: f.disc() })
}

pub fn ideal_to_form(i: &QuadIdeal) -> Result<BQForm, Error> {
    let n = i.norm;
    if n <= 0 || (i.b * i.b - i.d).rem_euclid(4 * n) != 0 {
        return Err(Error::NotProper);
    }
    let f = BQForm::new(n, i.b, (i.b * i.b - i.d) / (4 * n));
    if !f.is_primitive() {
        return Err(Error::NotProper);
    }
    Ok(f)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Product of two ideals of the same order, returned as a primitive ideal
/// together with the rational content that was stripped.
pub fn ideal_mul(i: &QuadIdeal, j: &QuadIdeal) -> Result<(QuadIdeal, i64), Error> {
    if i.d != j.d {
        return Err(Error::DiscMismatch(i.d, j.d));
    }
    let d = i.d as i128;
    let nw = (d * d - d) / 4;
    let mul = |(x1, y1): (i128, i128), (x2, y2): (i128, i128)| -> (i128, i128) {
        (x1 * x2 - y1 * y2 * nw, x1 * y2 + x2 * y1 + y1 * y2 * d)
    };
    let mut gens = Vec::with_capacity(4);
    for u in i.basis() {
        for v in j.basis() {
            gens.push(mul(u, v));
        }
    }
    // Hermite form: (T, M) with M the gcd of the w-coordinates, then (A, 0).
    let (mut t, mut m) = (0i128, 0i128);
    for &(x, y) in &gens {
        let (g, s, r) = egcd(m, y);
        let nt = s * t + r * x;
        if g != 0 {
            // keep (t, m) as the combination with second coordinate g
            t = nt;
            m = g;
        }
    }
    let mut a = 0i128;
    for &(x, y) in &gens {
        let k = y / m;
        a = egcd(a, x - k * t).0;
    }
    t = t.rem_euclid(a);
    if a % m != 0 || t % m != 0 {
        return Err(Error::NotProper);
    }
    let norm = a / m;
    let b = -2 * t / m - d;
    let b = b.rem_euclid(2 * norm);
    let b = if b > norm { b - 2 * norm } else { b };
    Ok((QuadIdeal { norm: norm as i64, b: b as i64, d: d as i64 }, m as i64))
}

/// Composition of classes, via multiplication of the attached ideals.
pub fn compose(f: &BQForm, g: &BQForm) -> Result<BQForm, Error> {
    if f.disc() != g.disc() {
        return Err(Error::DiscMismatch(f.disc(), g.disc()));
    }
    let (i, _) = ideal_mul(&form_to_ideal(f)?, &form_to_ideal(g)?)?;
    reduce(&ideal_to_form(&i)?)
}

pub fn pow(f: &BQForm, mut e: u64) -> Result<BQForm, Error> {
    let mut base = reduce(f)?;
    let mut acc = identity(f.disc())?;
    while e > 0 {
        if e & 1 == 1 {
            acc = compose(&acc, &base)?;
        }
        base = compose(&base, &base)?;
        e >>= 1;
    }
    Ok(acc)
}

/// All reduced primitive forms of discriminant d, sorted by (a, |b|, sign b).
pub fn class_group(d: i64) -> Result<Vec<BQForm>, Error> {
    check_disc(d)?;
    static CACHE: OnceLock<Mutex<HashMap<i64, Vec<BQForm>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&d) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let f = BQForm::new(a, b, (b * b - d) / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| f.display_key());
    cache.lock().unwrap().insert(d, out.clone());
    Ok(out)
}

pub fn class_number(d: i64) -> Result<usize, Error> {
    Ok(class_group(d)?.len())
}

pub fn form_order(f: &BQForm) -> Result<u64, Error> {
    let f = reduce(f)?;
    let id = identity(f.disc())?;
    let bound = class_number(f.disc())? as u64;
    let mut g = f;
    for k in 1..=bound {
        if g == id {
            return Ok(k);
        }
        g = compose(&g, &f)?;
    }
    unreachable!("order exceeds the class number")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Character {
    /// (m / l) for an odd prime l dividing D
    Legendre(i64),
    Delta,
    Epsilon,
    DeltaEpsilon,
}

impl Character {
    pub fn eval(&self, m: i64) -> i32 {
        let delta = if m.rem_euclid(4) == 1 { 1 } else { -1 };
        let eps = if matches!(m.rem_euclid(8), 1 | 7) { 1 } else { -1 };
        match *self {
            Character::Legendre(l) => kronecker(m, l),
            Character::Delta => delta,
            Character::Epsilon => eps,
            Character::DeltaEpsilon => delta * eps,
        }
    }
}

/// The assigned characters of d: odd prime divisors in descending order,
/// then the 2-adic characters dictated by -d/4 when d = 0 mod 4.
pub fn assigned_characters(d: i64) -> Result<Vec<Character>, Error> {
    check_disc(d)?;
    let mut n = -d;
    let mut odd = Vec::new();
    let mut l = 2;
    while l * l <= n {
        if n % l == 0 {
            if l > 2 {
                odd.push(l);
            }
            while n % l == 0 {
                n /= l;
            }
        }
        l += 1;
    }
    if n > 2 {
        odd.push(n);
    }
    odd.sort_unstable_by(|x, y| y.cmp(x));
    let mut chars: Vec<Character> = odd.into_iter().map(Character::Legendre).collect();
    if d.rem_euclid(4) == 0 {
        let n = -d / 4;
        match (n % 4, n % 8) {
            (3, _) => {}
            (1, _) => chars.push(Character::Delta),
            (_, 2) => chars.push(Character::DeltaEpsilon),
            (_, 4) => chars.push(Character::Delta),
            (_, 6) => chars.push(Character::Epsilon),
            _ => {
                chars.push(Character::Epsilon);
                chars.push(Character::Delta);
            }
        }
    }
    Ok(chars)
}

pub fn genus_vector(m: i64, d: i64) -> Result<Vec<i32>, Error> {
    if gcd(m, 2 * d) != 1 {
        return Err(Error::NotCoprime(m));
    }
    Ok(assigned_characters(d)?.iter().map(|ch| ch.eval(m)).collect())
}

/// A value represented by f that is coprime to 2D.
pub fn coprime_value(f: &BQForm) -> i64 {
    let d = f.disc();
    for s in 2i64.. {
        for x in 0..=s {
            let y = s - x;
            if gcd(x, y) != 1 {
                continue;
            }
            for (xx, yy) in [(x, y), (x, -y)] {
                let m = f.eval(xx, yy);
                if gcd(m, 2 * d) == 1 {
                    return m;
                }
            }
        }
    }
    unreachable!()
}

pub fn form_genus(f: &BQForm) -> Result<Vec<i32>, Error> {
    genus_vector(coprime_value(f), f.disc())
}

/// Reduced forms of the params' discriminant in the genus of q.
pub fn genus_class(params: &PrimeParams, q: i64) -> Result<Vec<BQForm>, Error> {
    if !q_admissible(params.p, params.c, q) {
        return Err(Error::BadQ(q));
    }
    let d = params.disc();
    let target = genus_vector(q, d)?;
    let mut out = Vec::new();
    for f in class_group(d)? {
        if form_genus(&f)? == target {
            out.push(f);
        }
    }
    Ok(out)
}

/// Forms of order at most two in the genus class of q.
pub fn ambiguous_in_genus(params: &PrimeParams, q: i64) -> Result<(usize, Vec<BQForm>), Error> {
    let mut forms = Vec::new();
    for f in genus_class(params, q)? {
        if f == inverse(&f) {
            forms.push(f);
        }
    }
    Ok((forms.len(), forms))
}

/// The ambiguous forms listed in the paper's tables for this congruence row.
pub fn tabulated_ambiguous(params: &PrimeParams) -> Vec<BQForm> {
    let (p, c) = (params.p, params.c);
    let legendre = kronecker(c, p);
    let f = BQForm::new;
    let mut out = match params.variant {
        Variant::LambdaPrime => match (p % 4, c % 4) {
            (3, 1) if legendre == 1 => vec![f(1, 1, (1 + c * p) / 4), f(c, c, (c + p) / 4)],
            (3, 1) => vec![f(1, 1, (1 + c * p) / 4)],
            (1, 3) if legendre == -1 => vec![f(c, c, (c + p) / 4)],
            _ => vec![],
        },
        Variant::Lambda => match (p % 4, c % 4) {
            (3, 1) if legendre == 1 => vec![f(4, 0, c * p), f(4 * c, 0, p)],
            (3, 1) => vec![f(4, 0, c * p)],
            (1, 3) if legendre == -1 => vec![f(c, 0, 4 * p)],
            (3, 3) if legendre == 1 => vec![f(c, 0, 4 * p), f(4 * c, 0, p)],
            (3, 2) if legendre == 1 => vec![f(4, 4, 1 + 2 * p), f(8, 0, p)],
            (3, 2) => vec![f(4, 4, 1 + 2 * p)],
            (1, 2) if legendre == -1 => vec![f(8, 8, 2 + p)],
            _ => vec![],
        },
    };
    out.sort_by_key(|g| g.display_key());
    out
}

/// A representation of m = f(x, y) with gcd(x, y) = 1, turned into the
/// equivalent form (m, B, C).
pub fn form_with_first_coefficient(f: &BQForm, x: i64, y: i64) -> BQForm {
    let (_, s, t) = egcd(x as i128, y as i128);
    // x*s + y*t = 1, so [[x, -t], [y, s]] has determinant 1
    f.transform(x, -(t as i64), y, s as i64)
}

/// Properly primitive representations (x, y) of m by f, up to sign.
pub fn representations(f: &BQForm, m: i64) -> Vec<(i64, i64)> {
    let d = -f.disc();
    let mut out = Vec::new();
    // 4 a f(x,y) = (2ax + by)^2 + d y^2
    let ymax = ((4 * f.a * m) as f64 / d as f64).sqrt() as i64 + 1;
    for y in 0..=ymax {
        let rest = 4 * f.a * m - d * y * y;
        if rest < 0 {
            break;
        }
        let s = crate::numth::isqrt(rest);
        if s * s != rest {
            continue;
        }
        for sign in [1, -1] {
            let num = sign * s - f.b * y;
            if num % (2 * f.a) == 0 {
                let x = num / (2 * f.a);
                if gcd(x, y) == 1 && (y > 0 || x > 0) && !out.contains(&(x, y)) {
                    out.push((x, y));
                }
            }
        }
    }
    out
}

/// Smallest admissible q at most `bound` represented by f, with the
/// representation found.
pub fn represented_prime(f: &BQForm, params: &PrimeParams, bound: i64) -> Option<(i64, (i64, i64))> {
    let f = reduce(f).ok()?;
    let d = -f.disc();
    let mut best: Option<(i64, (i64, i64))> = None;
    let ymax = ((4 * f.a * bound) as f64 / d as f64).sqrt() as i64 + 1;
    for y in 0..=ymax {
        // x range where f(x, y) <= bound
        let disc = (f.b * f.b - 4 * f.a * f.ap) * y * y + 4 * f.a * bound;
        if disc < 0 {
            continue;
        }
        let s = (disc as f64).sqrt() as i64 + 1;
        let lo = (-f.b * y - s) / (2 * f.a) - 1;
        let hi = (-f.b * y + s) / (2 * f.a) + 1;
        for x in lo..=hi {
            if gcd(x, y) != 1 {
                continue;
            }
            let m = f.eval(x, y);
            if m > bound || m < 2 {
                continue;
            }
            if best.is_some_and(|(b, _)| b <= m) {
                continue;
            }
            if is_prime(m as u64) && q_admissible(params.p, params.c, m) {
                best = Some((m, (x, y)));
            }
        }
    }
    best
}

/// The form attached to a prime l above which we take isogenies: for D = -cp
/// the ideal [l, (-b + sqrt D)/2], for D = -16cp the forms of the isogeny
/// section with b chosen canonically.
pub fn prime_splitting_form(ell: i64, params: &PrimeParams) -> Result<BQForm, Error> {
    let cp = params.cp();
    if ell == params.c || ell == params.p || !is_prime(ell as u64) {
        return Err(Error::NotSplit(ell));
    }
    match params.variant {
        Variant::LambdaPrime => {
            if kronecker(-cp, ell) != 1 {
                return Err(Error::NotSplit(ell));
            }
            // b^2 = -cp mod 4 ell, -ell < b <= ell, prefer b > 0
            let b = (1..=ell)
                .find(|&b| (b * b + cp) % (4 * ell) == 0)
                .ok_or(Error::NotSplit(ell))?;
            Ok(BQForm::new(ell, b, (b * b + cp) / (4 * ell)))
        }
        Variant::Lambda => {
            if ell == 2 {
                if cp % 4 != 1 {
                    return Err(Error::NotSplit(ell));
                }
                return Ok(BQForm::new(8, -4, (cp + 1) / 2));
            }
            if kronecker(-cp, ell) != 1 {
                return Err(Error::NotSplit(ell));
            }
            let b = sqrt_mod_prime(-cp, ell).ok_or(Error::NotSplit(ell))?;
            Ok(BQForm::new(ell, 4 * b, (4 * b * b + 4 * cp) / ell))
        }
    }
}

/// reduce(f g g): the class predicted for the codomain of an l-isogeny.
pub fn isogeny_action(f: &BQForm, g: &BQForm) -> Result<BQForm, Error> {
    if f.disc() != g.disc() {
        return Err(Error::DiscMismatch(f.disc(), g.disc()));
    }
    let g2 = compose(g, g)?;
    compose(f, &g2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> BQForm {
        BQForm::new(a, b, c)
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce(&f(11, 28, 128)).unwrap(), f(11, 6, 111));
        assert_eq!(reduce(&f(59, 13, 2)).unwrap(), f(2, -1, 38));
        assert_eq!(reduce(&f(1, 0, 303)).unwrap(), f(1, 0, 303));
        assert_eq!(reduce(&f(2, 2, 2)), Err(Error::NotPrimitive));
        assert_eq!(reduce(&f(1, 3, 1)), Err(Error::NotNegativeDisc));
    }

    #[test]
    fn identities_and_inverses() {
        assert_eq!(identity(-303).unwrap(), f(1, 1, 76));
        assert_eq!(identity(-4848).unwrap(), f(1, 0, 1212));
        assert_eq!(inverse(&f(2, 1, 38)), f(2, -1, 38));
        assert!(identity(-5).is_err());
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_group(-12).unwrap(), vec![f(1, 0, 3)]);
        assert_eq!(class_group(-4).unwrap(), vec![f(1, 0, 1)]);
        assert_eq!(class_number(-303).unwrap(), 10);
        assert_eq!(class_number(-4848).unwrap(), 20);
        assert_eq!(class_number(-23).unwrap(), 3);
    }

    #[test]
    fn golden_square() {
        // the ideal [2, (-1 + sqrt(-303))/2] squared is [4, (-1 + sqrt(-303))/2]
        assert_eq!(compose(&f(2, 1, 38), &f(2, 1, 38)).unwrap(), f(4, 1, 19));
    }

    #[test]
    fn orders() {
        assert_eq!(form_order(&identity(-303).unwrap()).unwrap(), 1);
        assert_eq!(form_order(&f(3, 3, 26)).unwrap(), 2);
        assert_eq!(form_order(&f(2, 1, 38)).unwrap(), 10);
    }

    #[test]
    fn characters() {
        use Character::*;
        assert_eq!(assigned_characters(-4848).unwrap(), vec![Legendre(101), Legendre(3), Delta]);
        assert_eq!(assigned_characters(-303).unwrap(), vec![Legendre(101), Legendre(3)]);
        assert_eq!(genus_vector(11, -4848).unwrap(), vec![-1, -1, -1]);
        assert_eq!(assigned_characters(-32 * 11).unwrap(), vec![Legendre(11), Epsilon, Delta]);
        assert!(genus_vector(3, -4848).is_err());
    }

    #[test]
    fn example_genus_classes() {
        let pp = PrimeParams::new(101, 3, Variant::Lambda).unwrap();
        let mut g = genus_class(&pp, 11).unwrap();
        g.sort();
        let mut want = vec![f(3, 0, 404), f(11, 6, 111), f(11, -6, 111), f(32, 12, 39), f(32, -12, 39)];
        want.sort();
        assert_eq!(g, want);
        assert_eq!(ambiguous_in_genus(&pp, 11).unwrap(), (1, vec![f(3, 0, 404)]));

        let pp = pp.with_variant(Variant::LambdaPrime).unwrap();
        let mut g = genus_class(&pp, 11).unwrap();
        g.sort();
        let mut want = vec![f(3, 3, 26), f(2, 1, 38), f(2, -1, 38), f(8, 7, 11), f(8, -7, 11)];
        want.sort();
        assert_eq!(g, want);
        assert_eq!(ambiguous_in_genus(&pp, 11).unwrap(), (1, vec![f(3, 3, 26)]));
        assert!(genus_class(&pp, 13).is_err());
    }

    #[test]
    fn represented_primes() {
        let pp = PrimeParams::new(101, 3, Variant::Lambda).unwrap();
        assert_eq!(represented_prime(&f(11, 6, 111), &pp, 1000).unwrap().0, 11);
        let pp = pp.with_variant(Variant::LambdaPrime).unwrap();
        let (q, (x, y)) = represented_prime(&f(2, 1, 38), &pp, 1000).unwrap();
        assert_eq!(f(2, 1, 38).eval(x, y), q);
        assert!(q_admissible(101, 3, q));
        // 59 is represented: 59 = f(x, y)
        assert!(!representations(&f(2, 1, 38), 59).is_empty());
        // the principal genus never contains an admissible q when (c/p) = -1
        assert!(represented_prime(&identity(-303).unwrap(), &pp, 100_000).is_none());
    }

    #[test]
    fn first_coefficient_transform() {
        let g = f(2, 1, 38);
        for (x, y) in representations(&g, 59) {
            let h = form_with_first_coefficient(&g, x, y);
            assert_eq!(h.a, 59);
            assert_eq!(h.disc(), -303);
            assert_eq!(reduce(&h).unwrap(), g);
        }
    }

    #[test]
    fn splitting_forms() {
        let pp = PrimeParams::new(101, 3, Variant::LambdaPrime).unwrap();
        assert_eq!(prime_splitting_form(2, &pp).unwrap(), f(2, 1, 38));
        assert_eq!(prime_splitting_form(3, &pp), Err(Error::NotSplit(3)));
        // cp = 1 mod 4 branch of the -16cp section
        let pp = PrimeParams::new(107, 3, Variant::Lambda).unwrap();
        assert_eq!(prime_splitting_form(2, &pp).unwrap(), f(8, -4, (321 + 1) / 2));
        assert_eq!(f(8, -4, 161).disc(), -16 * 321);
    }

    #[test]
    fn action_basics() {
        let d = -303;
        let id = identity(d).unwrap();
        let g = f(2, 1, 38);
        assert_eq!(isogeny_action(&f(3, 3, 26), &id).unwrap(), f(3, 3, 26));
        let h = isogeny_action(&f(3, 3, 26), &g).unwrap();
        assert_eq!(isogeny_action(&h, &inverse(&g)).unwrap(), f(3, 3, 26));
        assert_eq!(h, f(8, 7, 11));
    }

    #[test]
    fn ideal_round_trip() {
        let i = form_to_ideal(&f(2, 1, 38)).unwrap();
        assert_eq!((i.norm, i.b, i.d), (2, 1, -303));
        assert_eq!(ideal_to_form(&i).unwrap(), f(2, 1, 38));
        let unit = QuadIdeal { norm: 1, b: -303, d: -303 };
        assert_eq!(reduce(&ideal_to_form(&unit).unwrap()).unwrap(), identity(-303).unwrap());
    }

    #[test]
    fn tables_match_example() {
        let pp = PrimeParams::new(101, 3, Variant::Lambda).unwrap();
        assert_eq!(tabulated_ambiguous(&pp), vec![f(3, 0, 404)]);
        let pp = PrimeParams::new(101, 5, Variant::Lambda).unwrap();
        assert!(tabulated_ambiguous(&pp).is_empty());
    }
}
