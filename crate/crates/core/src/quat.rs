//! The quaternion algebra H(-cp, -q) with basis 1, alpha, beta, alpha*beta,
//! its lattices, and the Eichler orders O_c(q, r), O'_c(q, r').

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::numth::{lift_sqrt_mod_4q, q_admissible, PrimeParams, Variant};
use crate::qform::{reduce, BQForm};
use crate::Error;

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// An exact rational with i128 parts, always normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rat {
    pub num: i128,
    pub den: i128,
}

impl Rat {
    pub fn new(num: i128, den: i128) -> Rat {
        assert!(den != 0, "zero denominator");
        let g = gcd128(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Rat { num: s * num / g, den: s * den / g }
    }
    pub const fn int(n: i128) -> Rat {
        Rat { num: n, den: 1 }
    }
    pub const ZERO: Rat = Rat::int(0);
    pub const ONE: Rat = Rat::int(1);
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
    pub fn is_integer(&self) -> bool {
        self.den == 1
    }
    pub fn recip(&self) -> Rat {
        Rat::new(self.den, self.num)
    }
    pub fn floor(&self) -> i128 {
        self.num.div_euclid(self.den)
    }
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, o: Rat) -> Rat {
        let g = gcd128(self.den, o.den);
        Rat::new(self.num * (o.den / g) + o.num * (self.den / g), self.den / g * o.den)
    }
}
impl Sub for Rat {
    type Output = Rat;
    fn sub(self, o: Rat) -> Rat {
        self + (-o)
    }
}
impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat { num: -self.num, den: self.den }
    }
}
impl Mul for Rat {
    type Output = Rat;
    fn mul(self, o: Rat) -> Rat {
        let g1 = gcd128(self.num, o.den).max(1);
        let g2 = gcd128(o.num, self.den).max(1);
        Rat::new((self.num / g1) * (o.num / g2), (self.den / g2) * (o.den / g1))
    }
}
impl std::ops::Div for Rat {
    type Output = Rat;
    fn div(self, o: Rat) -> Rat {
        self * o.recip()
    }
}
impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Rat) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Rat {
    fn cmp(&self, o: &Rat) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

/// alpha^2 = -cp, beta^2 = -q, alpha beta = -beta alpha.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuatAlgebra {
    pub cp: i64,
    pub q: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatElement {
    pub coeffs: [Rat; 4],
    pub alg: QuatAlgebra,
}

impl QuatElement {
    pub fn new(alg: QuatAlgebra, coeffs: [Rat; 4]) -> Self {
        QuatElement { coeffs, alg }
    }

    pub fn from_ints(alg: QuatAlgebra, c: [i128; 4]) -> Self {
        QuatElement::new(alg, c.map(Rat::int))
    }

    /// (w + x alpha + y beta + z alpha beta) / den
    pub fn frac(alg: QuatAlgebra, c: [i128; 4], den: i128) -> Self {
        QuatElement::new(alg, c.map(|v| Rat::new(v, den)))
    }

    pub fn one(alg: QuatAlgebra) -> Self {
        QuatElement::from_ints(alg, [1, 0, 0, 0])
    }

    pub fn mul(&self, o: &QuatElement) -> Result<QuatElement, Error> {
        if self.alg != o.alg {
            return Err(Error::BadParams("algebra mismatch".into()));
        }
        let a = Rat::int(self.alg.cp as i128);
        let b = Rat::int(self.alg.q as i128);
        let [w1, x1, y1, z1] = self.coeffs;
        let [w2, x2, y2, z2] = o.coeffs;
        let w = w1 * w2 - a * x1 * x2 - b * y1 * y2 - a * b * z1 * z2;
        let x = w1 * x2 + x1 * w2 + b * y1 * z2 - b * z1 * y2;
        let y = w1 * y2 + y1 * w2 - a * x1 * z2 + a * z1 * x2;
        let z = w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2;
        Ok(QuatElement::new(self.alg, [w, x, y, z]))
    }

    pub fn conj(&self) -> QuatElement {
        let [w, x, y, z] = self.coeffs;
        QuatElement::new(self.alg, [w, -x, -y, -z])
    }

    pub fn trd(&self) -> Rat {
        self.coeffs[0] + self.coeffs[0]
    }

    pub fn nrd(&self) -> Rat {
        let a = Rat::int(self.alg.cp as i128);
        let b = Rat::int(self.alg.q as i128);
        let [w, x, y, z] = self.coeffs;
        w * w + a * x * x + b * y * y + a * b * z * z
    }

    pub fn add(&self, o: &QuatElement) -> QuatElement {
        let mut c = self.coeffs;
        for (ci, oi) in c.iter_mut().zip(o.coeffs) {
            *ci = *ci + oi;
        }
        QuatElement::new(self.alg, c)
    }

    pub fn scale(&self, k: Rat) -> QuatElement {
        QuatElement::new(self.alg, self.coeffs.map(|v| v * k))
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [w, x, y, z] = self.coeffs;
        write!(f, "{w} + ({x})a + ({y})b + ({z})ab")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderLabel {
    pub q: i64,
    pub r: i64,
    pub variant: Variant,
}

/// A rank 4 lattice in the algebra, given by a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatOrder {
    pub alg: QuatAlgebra,
    pub basis: [QuatElement; 4],
    pub label: Option<OrderLabel>,
}

type Mat = [[Rat; 4]; 4];

fn det(m: &Mat) -> Rat {
    let mut a = *m;
    let mut d = Rat::ONE;
    for col in 0..4 {
        let Some(piv) = (col..4).find(|&r| !a[r][col].is_zero()) else {
            return Rat::ZERO;
        };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d = d * a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for k in col..4 {
                a[r][k] = a[r][k] - f * a[col][k];
            }
        }
    }
    d
}

fn inverse(m: &Mat) -> Option<Mat> {
    let mut a = *m;
    let mut inv = [[Rat::ZERO; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Rat::ONE;
    }
    for col in 0..4 {
        let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        inv.swap(piv, col);
        let p = a[col][col];
        for k in 0..4 {
            a[col][k] = a[col][k] / p;
            inv[col][k] = inv[col][k] / p;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for k in 0..4 {
                    a[r][k] = a[r][k] - f * a[col][k];
                    inv[r][k] = inv[r][k] - f * inv[col][k];
                }
            }
        }
    }
    Some(inv)
}

fn transpose(m: &Mat) -> Mat {
    let mut t = [[Rat::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = m[j][i];
        }
    }
    t
}

fn lcm_dens(rows: &[[Rat; 4]]) -> i128 {
    let mut l = 1i128;
    for r in rows {
        for v in r {
            l = l / gcd128(l, v.den) * v.den;
        }
    }
    l
}

/// Hermite normal form (upper triangular, positive pivots, reduced above)
/// of the lattice spanned by the given rational rows.
fn hnf(rows: &[[Rat; 4]]) -> Result<Mat, Error> {
    let l = lcm_dens(rows);
    let mut m: Vec<[i128; 4]> = rows
        .iter()
        .map(|r| r.map(|v| v.num * (l / v.den)))
        .collect();
    let mut out = [[0i128; 4]; 4];
    for col in 0..4 {
        // gcd-combine all remaining rows on this column into one pivot row
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
            for &i in &nz {
                if i != piv {
                    let f = m[i][col].div_euclid(m[piv][col]);
                    for k in 0..4 {
                        m[i][k] -= f * m[piv][k];
                    }
                }
            }
        }
        let Some(pi) = (0..m.len()).find(|&i| m[i][col] != 0) else {
            return Err(Error::DegenerateBasis);
        };
        let mut row = m.remove(pi);
        if row[col] < 0 {
            row = row.map(|v| -v);
        }
        out[col] = row;
    }
    // reduce entries above each pivot into [0, pivot)
    for col in 0..4 {
        for r in 0..col {
            let f = out[r][col].div_euclid(out[col][col]);
            for k in 0..4 {
                out[r][k] -= f * out[col][k];
            }
        }
    }
    Ok(out.map(|r| r.map(|v| Rat::new(v, l))))
}

impl QuatOrder {
    pub fn from_basis(alg: QuatAlgebra, basis: [QuatElement; 4], label: Option<OrderLabel>) -> Result<Self, Error> {
        let o = QuatOrder { alg, basis, label };
        if det(&o.matrix()).is_zero() {
            return Err(Error::DegenerateBasis);
        }
        Ok(o)
    }

    pub fn matrix(&self) -> Mat {
        self.basis.map(|e| e.coeffs)
    }

    fn from_matrix(alg: QuatAlgebra, m: Mat, label: Option<OrderLabel>) -> Self {
        QuatOrder { alg, basis: m.map(|r| QuatElement::new(alg, r)), label }
    }

    /// Canonical basis, for lattice equality.
    pub fn hnf(&self) -> Mat {
        hnf(&self.matrix()).expect("basis is nondegenerate")
    }

    pub fn same_lattice(&self, o: &QuatOrder) -> bool {
        self.alg == o.alg && self.hnf() == o.hnf()
    }

    /// Coordinates of x in this basis, if x lies in the rational span.
    pub fn coordinates(&self, x: &QuatElement) -> Vec<Rat> {
        let inv = inverse(&self.matrix()).expect("nondegenerate");
        (0..4)
            .map(|j| (0..4).fold(Rat::ZERO, |s, i| s + x.coeffs[i] * inv[i][j]))
            .collect()
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        self.coordinates(x).iter().all(Rat::is_integer)
    }

    pub fn element(&self, x: &[i128]) -> QuatElement {
        let mut e = QuatElement::from_ints(self.alg, [0; 4]);
        for (b, &k) in self.basis.iter().zip(x) {
            e = e.add(&b.scale(Rat::int(k)));
        }
        e
    }

    pub fn gram(&self) -> Mat {
        let mut g = [[Rat::ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = self.basis[i].mul(&self.basis[j].conj()).unwrap().trd();
            }
        }
        g
    }
}

/// 1 in L, closed under products, integral reduced trace and norm.
pub fn is_order(o: &QuatOrder) -> Result<bool, Error> {
    if det(&o.matrix()).is_zero() {
        return Err(Error::DegenerateBasis);
    }
    if !o.contains(&QuatElement::one(o.alg)) {
        return Ok(false);
    }
    for b in &o.basis {
        if !b.trd().is_integer() || !b.nrd().is_integer() {
            return Ok(false);
        }
    }
    for x in &o.basis {
        for y in &o.basis {
            if !o.contains(&x.mul(y)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// det(Trd(x_i conj(x_j))).
pub fn discriminant(o: &QuatOrder) -> i128 {
    let d = det(&o.gram());
    assert!(d.is_integer(), "gram determinant of an order is integral");
    d.num.abs()
}

fn check_r(params: &PrimeParams, q: i64) -> Result<(), Error> {
    if !q_admissible(params.p, params.c, q) {
        return Err(Error::BadParams(format!("q = {q} is not admissible for p = {}, c = {}", params.p, params.c)));
    }
    Ok(())
}

fn algebra(params: &PrimeParams, q: i64) -> QuatAlgebra {
    QuatAlgebra { cp: params.cp(), q }
}

/// O_c(q, r) = Z + Z(1+beta)/2 + Z alpha(1+beta)/2 + Z (r+alpha)beta/q.
pub fn eichler_o(params: &PrimeParams, q: i64, r: i64) -> Result<QuatOrder, Error> {
    check_r(params, q)?;
    if (r as i128 * r as i128 + params.cp() as i128).rem_euclid(q as i128) != 0 {
        return Err(Error::BadParams(format!("{r}^2 + cp is not divisible by {q}")));
    }
    let o = eichler_o_unchecked(params.cp(), q, r);
    if !is_order(&o)? {
        return Err(Error::NotAnOrder);
    }
    Ok(o)
}

pub fn eichler_o_unchecked(cp: i64, q: i64, r: i64) -> QuatOrder {
    let alg = QuatAlgebra { cp, q };
    let (r, q2) = (r as i128, q as i128);
    QuatOrder {
        alg,
        basis: [
            QuatElement::one(alg),
            QuatElement::frac(alg, [1, 0, 1, 0], 2),
            QuatElement::frac(alg, [0, 1, 0, 1], 2),
            QuatElement::frac(alg, [0, 0, r, 1], q2),
        ],
        label: Some(OrderLabel { q, r: r as i64, variant: Variant::Lambda }),
    }
}

/// O'_c(q, r') = Z + Z(1+alpha)/2 + Z beta + Z (r'+alpha)beta/(2q).
pub fn eichler_oprime(params: &PrimeParams, q: i64, rprime: i64) -> Result<QuatOrder, Error> {
    check_r(params, q)?;
    if params.cp() % 4 != 3 {
        return Err(Error::NoLift);
    }
    if (rprime as i128 * rprime as i128 + params.cp() as i128).rem_euclid(4 * q as i128) != 0 {
        return Err(Error::BadParams(format!("{rprime}^2 + cp is not divisible by 4*{q}")));
    }
    let alg = algebra(params, q);
    let o = QuatOrder {
        alg,
        basis: [
            QuatElement::one(alg),
            QuatElement::frac(alg, [1, 1, 0, 0], 2),
            QuatElement::from_ints(alg, [0, 0, 1, 0]),
            QuatElement::frac(alg, [0, 0, rprime as i128, 1], 2 * q as i128),
        ],
        label: Some(OrderLabel { q, r: rprime, variant: Variant::LambdaPrime }),
    };
    if !is_order(&o)? {
        return Err(Error::NotAnOrder);
    }
    Ok(o)
}

/// The index 2 suborder Z + Z beta + Z(1+alpha+beta+alpha beta)/2 + Z(r+alpha)beta/q.
pub fn eichler_tilde(params: &PrimeParams, q: i64, r: i64) -> Result<QuatOrder, Error> {
    check_r(params, q)?;
    let alg = algebra(params, q);
    let o = QuatOrder {
        alg,
        basis: [
            QuatElement::one(alg),
            QuatElement::from_ints(alg, [0, 0, 1, 0]),
            QuatElement::frac(alg, [1, 1, 1, 1], 2),
            QuatElement::frac(alg, [0, 0, r as i128, 1], q as i128),
        ],
        label: None,
    };
    if !is_order(&o)? {
        return Err(Error::NotAnOrder);
    }
    Ok(o)
}

/// The order attached to (q, r) for the params' variant; r is lifted to r'
/// for the primed family.
pub fn eichler_for(params: &PrimeParams, q: i64, r: i64) -> Result<QuatOrder, Error> {
    match params.variant {
        Variant::Lambda => eichler_o(params, q, r),
        Variant::LambdaPrime => eichler_oprime(params, q, lift_sqrt_mod_4q(r, q, params.cp())?),
    }
}

/// The reduced form attached to a labeled Eichler order.
pub fn order_to_form(o: &QuatOrder) -> Result<BQForm, Error> {
    let l = o.label.ok_or(Error::Unlabeled)?;
    let (q, r, cp) = (l.q, l.r, o.alg.cp);
    match l.variant {
        Variant::Lambda => reduce(&BQForm::new(q, 4 * r, (4 * r * r + 4 * cp) / q)),
        Variant::LambdaPrime => reduce(&BQForm::new(q, r, (r * r + cp) / (4 * q))),
    }
}

/// Lattice intersection, via duals: L1 n L2 = (L1* + L2*)*.
pub fn intersect(o1: &QuatOrder, o2: &QuatOrder) -> Result<QuatOrder, Error> {
    if o1.alg != o2.alg {
        return Err(Error::BadParams("algebra mismatch".into()));
    }
    let d1 = transpose(&inverse(&o1.matrix()).ok_or(Error::DegenerateBasis)?);
    let d2 = transpose(&inverse(&o2.matrix()).ok_or(Error::DegenerateBasis)?);
    let rows: Vec<[Rat; 4]> = d1.iter().chain(d2.iter()).copied().collect();
    let sum = hnf(&rows)?;
    let back = transpose(&inverse(&sum).ok_or(Error::DegenerateBasis)?);
    let mut m = hnf(&back)?;
    // put 1 first when it is a primitive vector of the lattice
    let tmp = QuatOrder::from_matrix(o1.alg, m, None);
    let one = QuatElement::one(o1.alg);
    if tmp.contains(&one) {
        let coords = tmp.coordinates(&one);
        if let Some(k) = (0..4).find(|&k| coords[k].num.abs() == 1) {
            m[k] = one.coeffs;
            m.swap(0, k);
        }
    }
    Ok(QuatOrder::from_matrix(o1.alg, m, None))
}

/// [sup : sub], failing when sub is not contained in sup.
pub fn index(sub: &QuatOrder, sup: &QuatOrder) -> Result<i128, Error> {
    for b in &sub.basis {
        if !sup.contains(b) {
            return Err(Error::NotSublattice);
        }
    }
    let r = det(&sub.matrix()) / det(&sup.matrix());
    if !r.is_integer() {
        return Err(Error::NotSublattice);
    }
    Ok(r.num.abs())
}

/// All gamma in O outside Z (optionally only those primitive modulo Z) with |Trd^2 - 4 Nrd| <= bound,
/// ascending, with coordinates in the order's basis and in O/Z.
fn short_vectors(o: &QuatOrder, bound: i128, primitive_only: bool) -> Vec<(i128, [i128; 4], [i128; 3])> {
    // Work with a basis whose first element is 1 so that the discriminant
    // form lives on the last three coordinates.
    let mut basis = o.matrix();
    let one = QuatElement::one(o.alg);
    let coords = o.coordinates(&one);
    let k = (0..4).find(|&k| coords[k].num.abs() == 1 && coords.iter().all(Rat::is_integer));
    let Some(k) = k else {
        panic!("order basis cannot be completed from 1");
    };
    basis[k] = one.coeffs;
    basis.swap(0, k);
    let lat = QuatOrder::from_matrix(o.alg, basis, None);
    // pure parts of basis elements 1..3 and the quadratic form 4 Nrd(pure)
    let pure: Vec<QuatElement> = (1..4)
        .map(|i| {
            let mut e = lat.basis[i];
            e.coeffs[0] = Rat::ZERO;
            e
        })
        .collect();
    let mut g = [[0f64; 3]; 3];
    let mut gq = [[Rat::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // 4 Nrd(sum x_i p_i) = sum x_i x_j 2 Trd(p_i conj p_j)
            let v = pure[i].mul(&pure[j].conj()).unwrap().trd() * Rat::int(2);
            gq[i][j] = v;
            g[i][j] = v.to_f64();
        }
    }
    // Q(x) = x^T G x; Cholesky style decomposition for Fincke-Pohst
    let qm = g;
    let mut l = [[0f64; 3]; 3];
    let mut dg = [0f64; 3];
    for i in 0..3 {
        let mut s = qm[i][i];
        for k in 0..i {
            s -= l[i][k] * l[i][k] * dg[k];
        }
        dg[i] = s;
        for j in i + 1..3 {
            let mut t = qm[j][i];
            for k in 0..i {
                t -= l[j][k] * l[i][k] * dg[k];
            }
            l[j][i] = t / dg[i];
        }
    }
    // Q(x) = sum_i dg[i] (x_i + sum_{j>i} l[j][i] x_j)^2
    let exact_q = |x: [i128; 3]| -> Rat {
        let mut s = Rat::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                s = s + gq[i][j] * Rat::int(x[i] * x[j]);
            }
        }
        s
    };
    let b = bound as f64 * (1.0 + 1e-9) + 1e-6;
    let mut out = Vec::new();
    let mut x = [0i128; 3];
    let r2 = (b / dg[2]).sqrt();
    for x2 in (-r2.floor() as i128 - 1)..=(r2.floor() as i128 + 1) {
        x[2] = x2;
        let rem2 = b - dg[2] * (x2 as f64).powi(2);
        if rem2 < -1e-6 {
            continue;
        }
        let c1 = l[2][1] * x2 as f64;
        let r1 = (rem2.max(0.0) / dg[1]).sqrt();
        for x1 in ((-c1 - r1).floor() as i128 - 1)..=((-c1 + r1).ceil() as i128 + 1) {
            x[1] = x1;
            let rem1 = rem2 - dg[1] * (x1 as f64 + c1).powi(2);
            if rem1 < -1e-6 {
                continue;
            }
            let c0 = l[1][0] * x1 as f64 + l[2][0] * x2 as f64;
            let r0 = (rem1.max(0.0) / dg[0]).sqrt();
            for x0 in ((-c0 - r0).floor() as i128 - 1)..=((-c0 + r0).ceil() as i128 + 1) {
                x[0] = x0;
                // only gamma that are primitive modulo Z; multiples k*gamma
                // give k^2 times a smaller discriminant
                let g = gcd128(gcd128(x[0], x[1]), x[2]);
                if g == 0 || (primitive_only && g != 1) {
                    continue;
                }
                let v = exact_q(x);
                debug_assert!(v.is_integer());
                if v.num <= bound {
                    // coordinates in the original basis
                    let e = lat.element(&[0, x[0], x[1], x[2]]);
                    let c = o.coordinates(&e);
                    out.push((v.num, [c[0].num, c[1].num, c[2].num, c[3].num], x));
                }
            }
        }
    }
    out.sort();
    out
}

/// Distinct values |Trd(g)^2 - 4 Nrd(g)| <= bound over g in O that are
/// primitive modulo Z (so Z[g] is optimally embedded in O + Q).
pub fn embedded_discs(o: &QuatOrder, bound: i128) -> Vec<i128> {
    let mut v: Vec<i128> = short_vectors(o, bound, true).into_iter().map(|(d, _, _)| d).collect();
    v.dedup();
    v
}

/// The first two successive minima of the discriminant form on O/Z: the
/// least value, then the least value on a vector independent of a
/// minimizing one. None if the bound is too small to see both.
pub fn successive_minima(o: &QuatOrder, bound: i128) -> Option<(i128, i128)> {
    let sv = short_vectors(o, bound, true);
    let (m1, _, v1) = *sv.first()?;
    let second = sv.iter().find(|(_, _, w)| {
        let cross = [v1[1] * w[2] - v1[2] * w[1], v1[2] * w[0] - v1[0] * w[2], v1[0] * w[1] - v1[1] * w[0]];
        cross != [0, 0, 0]
    })?;
    Some((m1, second.0))
}

/// Is there g in O with Trd(g) = D and Nrd(g) = (D^2 - D)/4?
pub fn embeds_quadratic(o: &QuatOrder, d: i64) -> bool {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return false;
    }
    let d = d as i128;
    for (v, c, _) in short_vectors(o, -d, false) {
        if v != -d {
            continue;
        }
        let e = o.element(&c);
        // shift by an integer so that the trace becomes D
        let t = e.trd();
        if (Rat::int(d) - t).is_integer() && (d - t.num).rem_euclid(2) == 0 {
            let g = e.add(&QuatElement::one(o.alg).scale(Rat::new(d - t.num, 2)));
            if g.trd() == Rat::int(d) && g.nrd() == Rat::int((d * d - d) / 4) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp() -> PrimeParams {
        PrimeParams::new(101, 3, Variant::Lambda).unwrap()
    }

    #[test]
    fn structure_constants() {
        let alg = QuatAlgebra { cp: 303, q: 11 };
        let a = QuatElement::from_ints(alg, [0, 1, 0, 0]);
        let b = QuatElement::from_ints(alg, [0, 0, 1, 0]);
        assert_eq!(a.mul(&b).unwrap(), QuatElement::from_ints(alg, [0, 0, 0, 1]));
        assert_eq!(b.mul(&a).unwrap(), QuatElement::from_ints(alg, [0, 0, 0, -1]));
        assert_eq!(a.nrd(), Rat::int(303));
        assert_eq!(a.trd(), Rat::ZERO);
        let h = QuatElement::frac(alg, [1, 0, 1, 0], 2);
        assert_eq!(h.nrd(), Rat::int(3));
        assert_eq!(h.trd(), Rat::ONE);
        assert_eq!(a.mul(&a).unwrap(), QuatElement::from_ints(alg, [-303, 0, 0, 0]));
    }

    #[test]
    fn example_orders() {
        let o = eichler_o(&pp(), 11, 7).unwrap();
        assert_eq!(discriminant(&o), 91809);
        assert_eq!(order_to_form(&o).unwrap(), BQForm::new(11, 6, 111));
        let ppp = pp().with_variant(Variant::LambdaPrime).unwrap();
        let o2 = eichler_oprime(&ppp, 59, 13).unwrap();
        assert_eq!(discriminant(&o2), 91809);
        assert_eq!(order_to_form(&o2).unwrap(), BQForm::new(2, -1, 38));
        let o3 = eichler_oprime(&ppp, 11, 7).unwrap();
        assert_eq!(order_to_form(&o3).unwrap(), BQForm::new(8, -7, 11));
        let o4 = eichler_o(&pp(), 1619, 1215).unwrap();
        assert_eq!(order_to_form(&o4).unwrap(), BQForm::new(3, 0, 404));
        assert!(matches!(eichler_o(&pp(), 13, 1), Err(Error::BadParams(_))));
    }

    #[test]
    fn level_one_is_maximal() {
        // p = 11, q = 3: q = 3 mod 8 and (11/3) = -1
        let o = eichler_o_unchecked(11, 3, 1);
        assert!(is_order(&o).unwrap());
        assert_eq!(discriminant(&o), 121);
    }

    #[test]
    fn order_membership() {
        let alg = QuatAlgebra { cp: 303, q: 11 };
        let std = QuatOrder::from_basis(
            alg,
            [
                QuatElement::from_ints(alg, [1, 0, 0, 0]),
                QuatElement::from_ints(alg, [0, 1, 0, 0]),
                QuatElement::from_ints(alg, [0, 0, 1, 0]),
                QuatElement::from_ints(alg, [0, 0, 0, 1]),
            ],
            None,
        )
        .unwrap();
        assert!(is_order(&std).unwrap());
        assert_eq!(discriminant(&std), (4 * 303 * 11i128).pow(2));
        let mut bad = eichler_o(&pp(), 11, 7).unwrap();
        bad.basis[1] = QuatElement::frac(alg, [1, 0, 1, 0], 3);
        assert!(!is_order(&bad).unwrap());
    }

    #[test]
    fn minima() {
        let o = eichler_o(&pp(), 11, 7).unwrap();
        assert_eq!(&embedded_discs(&o, 200)[..2], &[11, 111]);
        let ppp = pp().with_variant(Variant::LambdaPrime).unwrap();
        let o2 = eichler_oprime(&ppp, 11, 7).unwrap();
        assert_eq!(&embedded_discs(&o2, 200)[..2], &[32, 44]);
        assert!(embedded_discs(&o, 1000).iter().all(|&d| d >= 3));
        assert_eq!(successive_minima(&o, 200), Some((11, 111)));
        assert_eq!(successive_minima(&o2, 200), Some((32, 44)));
    }

    #[test]
    fn quadratic_embeddings() {
        let o = eichler_o(&pp(), 11, 7).unwrap();
        assert!(embeds_quadratic(&o, -11));
        assert!(!embeds_quadratic(&o, -1));
        assert!(embeds_quadratic(&o, -16 * 303));
        let o3 = eichler_o(&pp(), 1619, 1215).unwrap();
        assert!(embeds_quadratic(&o3, -3));
    }

    #[test]
    fn vertical_intersection() {
        let ppp = pp().with_variant(Variant::LambdaPrime).unwrap();
        let r = lift_sqrt_mod_4q(13, 59, 303).unwrap();
        let o = eichler_o(&pp(), 59, r).unwrap();
        let op = eichler_oprime(&ppp, 59, r).unwrap();
        let t = intersect(&o, &op).unwrap();
        assert!(is_order(&t).unwrap());
        assert_eq!(discriminant(&t), 4 * 91809);
        let tilde = eichler_tilde(&pp(), 59, r).unwrap();
        assert!(t.same_lattice(&tilde));
        assert_eq!(index(&tilde, &o).unwrap(), 2);
        assert_eq!(index(&tilde, &op).unwrap(), 2);
        assert!(intersect(&o, &o).unwrap().same_lattice(&o));
        assert_eq!(index(&o, &tilde), Err(Error::NotSublattice));
    }
}
