//! Exact 2x2 integer matrices, primitive vectors and symplectic transvections.
//!
//! Matrices act on column vectors. The symplectic pairing on `Z^2` is
//! `(x, v) = x1*v2 - x2*v1`, and the transvection in a primitive vector `v`
//! is `T_v(x) = x + (x, v) v`, i.e. the matrix `[[1+pq, -p^2], [q^2, 1-pq]]`.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::JsonInt;

/// A 2x2 integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Mat2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn neg_identity() -> Self {
        Mat2::new(-1, 0, 0, -1)
    }

    /// Order-4 rotation `[[0, -1], [1, 0]]`.
    pub fn c4() -> Self {
        Mat2::new(0, -1, 1, 0)
    }

    /// Order-3 element `[[0, -1], [1, -1]]`.
    pub fn c3() -> Self {
        Mat2::new(0, -1, 1, -1)
    }

    /// Order-6 element `[[1, -1], [1, 0]]`.
    pub fn c6() -> Self {
        Mat2::new(1, -1, 1, 0)
    }

    /// Coordinate swap `[[0, 1], [1, 0]]` (determinant -1).
    pub fn swap() -> Self {
        Mat2::new(0, 1, 1, 0)
    }

    /// The generator `S = [[0, -1], [1, 0]]` of the modular group.
    pub fn s() -> Self {
        Mat2::c4()
    }

    /// The generator `T = [[1, 1], [0, 1]]` of the modular group.
    pub fn t() -> Self {
        Mat2::new(1, 1, 0, 1)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_neg_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == -BigInt::one() && self.d == -BigInt::one()
    }

    /// `Err(NotSl2)` unless the determinant is exactly 1.
    pub fn require_sl2(&self) -> Result<()> {
        let det = self.det();
        if det.is_one() {
            Ok(())
        } else {
            Err(Error::NotSl2 { det })
        }
    }

    pub fn require_unimodular(&self) -> Result<()> {
        let det = self.det();
        if det.abs().is_one() {
            Ok(())
        } else {
            Err(Error::NotUnimodular { det })
        }
    }

    /// Inverse of a determinant `±1` matrix.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_one() {
            Ok(self.adjugate())
        } else if det == -BigInt::one() {
            Ok(-self.adjugate())
        } else {
            Err(Error::NotUnimodular { det })
        }
    }

    /// `[[d, -b], [-c, a]]`; equals the inverse when the determinant is 1.
    pub fn adjugate(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// Integer power. Negative exponents need determinant `±1`.
    pub fn pow(&self, exp: i64) -> Result<Mat2> {
        let mut base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &PrimVec) -> PrimVec {
        // det ±1 keeps primitivity; callers only pass unimodular matrices here.
        let (p, q) = self.apply_raw(&v.p, &v.q);
        PrimVec { p, q }
    }

    pub fn apply_raw(&self, p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
        (&self.a * p + &self.b * q, &self.c * p + &self.d * q)
    }

    /// Largest absolute value among the entries.
    pub fn max_abs_entry(&self) -> BigInt {
        self.entries()
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn to_i64_array(&self) -> Option<[[i64; 2]; 2]> {
        Some([
            [self.a.to_i64()?, self.b.to_i64()?],
            [self.c.to_i64()?, self.d.to_i64()?],
        ])
    }
}

impl Default for Mat2 {
    fn default() -> Self {
        Mat2::identity()
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        Mat2 {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        -self.clone()
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [
            [JsonInt(self.a.clone()), JsonInt(self.b.clone())],
            [JsonInt(self.c.clone()), JsonInt(self.d.clone())],
        ];
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [[a, b], [c, d]] = <[[JsonInt; 2]; 2]>::deserialize(deserializer)?;
        Ok(Mat2::new(a.0, b.0, c.0, d.0))
    }
}

/// A primitive integer vector `(p, q)`: `gcd(p, q) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimVec {
    p: BigInt,
    q: BigInt,
}

impl PrimVec {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if p.gcd(&q).is_one() {
            Ok(PrimVec { p, q })
        } else {
            Err(Error::InvalidVector { p, q })
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Sign-normalized representative: first nonzero coordinate positive.
    pub fn normalized(&self) -> PrimVec {
        let flip = self.p.is_negative() || (self.p.is_zero() && self.q.is_negative());
        if flip {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Symplectic pairing `(self, other) = p*q' - q*p'`.
    pub fn pairing(&self, other: &PrimVec) -> BigInt {
        &self.p * &other.q - &self.q * &other.p
    }

    /// `true` when `self = ±other`.
    pub fn same_line(&self, other: &PrimVec) -> bool {
        self == other || *self == -other.clone()
    }

    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.p.to_i64()?, self.q.to_i64()?))
    }
}

impl Neg for PrimVec {
    type Output = PrimVec;

    fn neg(self) -> PrimVec {
        PrimVec {
            p: -self.p,
            q: -self.q,
        }
    }
}

impl fmt::Debug for PrimVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

impl fmt::Display for PrimVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for PrimVec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [JsonInt(self.p.clone()), JsonInt(self.q.clone())].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PrimVec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [p, q] = <[JsonInt; 2]>::deserialize(deserializer)?;
        PrimVec::new(p.0, q.0).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfiniteKind {
    Parabolic,
    Hyperbolic,
}

/// Order of an element of `SL2(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatOrder {
    Finite(u32),
    Infinite(InfiniteKind),
}

impl MatOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, MatOrder::Finite(_))
    }
}

impl fmt::Display for MatOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatOrder::Finite(k) => write!(f, "finite({k})"),
            MatOrder::Infinite(InfiniteKind::Parabolic) => write!(f, "infinite(parabolic)"),
            MatOrder::Infinite(InfiniteKind::Hyperbolic) => write!(f, "infinite(hyperbolic)"),
        }
    }
}

/// The transvection `T_v = [[1+pq, -p^2], [q^2, 1-pq]]`.
pub fn transvection(v: &PrimVec) -> Mat2 {
    transvection_raw(&v.p, &v.q)
}

/// Transvection formula evaluated at an arbitrary integer vector. Only a
/// genuine transvection when `(p, q)` is primitive.
pub fn transvection_raw(p: &BigInt, q: &BigInt) -> Mat2 {
    let pq = p * q;
    Mat2 {
        a: BigInt::one() + &pq,
        b: -(p * p),
        c: q * q,
        d: BigInt::one() - pq,
    }
}

/// Recovers `v` from `T_v`, normalized so the first nonzero coordinate is positive.
pub fn transvection_vector(m: &Mat2) -> Result<PrimVec> {
    // m - Id = [[pq, -p^2], [q^2, -pq]]
    let n11 = &m.a - BigInt::one();
    let n22 = &m.d - BigInt::one();
    let p_sq = -&m.b;
    let q_sq = &m.c;
    if p_sq.is_negative() || q_sq.is_negative() || n11 != -&n22 {
        return Err(Error::NotATransvection);
    }
    let p = exact_sqrt(&p_sq).ok_or(Error::NotATransvection)?;
    let mut q = exact_sqrt(q_sq).ok_or(Error::NotATransvection)?;
    if &p * &q != n11 {
        q = -q;
        if &p * &q != n11 {
            return Err(Error::NotATransvection);
        }
    }
    PrimVec::new(p, q)
        .map(|v| v.normalized())
        .map_err(|_| Error::NotATransvection)
}

pub fn is_transvection(m: &Mat2) -> bool {
    transvection_vector(m).is_ok()
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

/// `C M C^{-1}` for `C` in `SL2(Z)`.
pub fn conjugate(c: &Mat2, m: &Mat2) -> Result<Mat2> {
    c.require_sl2()?;
    Ok(conjugate_unchecked(c, m))
}

/// `C M C^{-1}` assuming `det C = 1`.
pub(crate) fn conjugate_unchecked(c: &Mat2, m: &Mat2) -> Mat2 {
    &(c * m) * &c.adjugate()
}

/// Order of an `SL2(Z)` element, read off the trace.
pub fn order_of(m: &Mat2) -> Result<MatOrder> {
    m.require_sl2()?;
    let tr = m.trace().to_i64();
    let order = match tr {
        Some(-1) => MatOrder::Finite(3),
        Some(0) => MatOrder::Finite(4),
        Some(1) => MatOrder::Finite(6),
        Some(2) if m.is_identity() => MatOrder::Finite(1),
        Some(-2) if m.is_neg_identity() => MatOrder::Finite(2),
        Some(2) | Some(-2) => MatOrder::Infinite(InfiniteKind::Parabolic),
        _ => MatOrder::Infinite(InfiniteKind::Hyperbolic),
    };
    debug_assert_eq!(
        order_by_iteration(m, 12),
        match order {
            MatOrder::Finite(k) => Some(k),
            MatOrder::Infinite(_) => None,
        }
    );
    Ok(order)
}

/// Smallest `k` in `1..=bound` with `M^k = Id`, by repeated multiplication.
pub fn order_by_iteration(m: &Mat2, bound: u32) -> Option<u32> {
    let mut acc = m.clone();
    for k in 1..=bound {
        if acc.is_identity() {
            return Some(k);
        }
        acc = &acc * m;
    }
    None
}

/// A letter of a word in the generators `S` and `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StLetter {
    /// `S^k`, exponent taken mod 4.
    S(u8),
    /// `T^k`.
    T(BigInt),
}

impl StLetter {
    pub fn to_matrix(&self) -> Mat2 {
        match self {
            StLetter::S(k) => Mat2::s().pow(*k as i64).expect("S is invertible"),
            StLetter::T(k) => Mat2::new(1, k.clone(), 0, 1),
        }
    }
}

/// Writes `M` as a word in `S` and `T` by Euclidean reduction on the first column.
pub fn st_decomposition(m: &Mat2) -> Result<Vec<StLetter>> {
    m.require_sl2()?;
    let mut cur = m.clone();
    let mut word = Vec::new();
    while !cur.c.is_zero() {
        // cur = T^q * (T^{-q} cur); then T^{-q} cur = S^{-1} * (S T^{-q} cur)
        let q = cur.a.div_floor(&cur.c);
        let r = &cur.a - &q * &cur.c;
        let b = &cur.b - &q * &cur.d;
        if !q.is_zero() {
            word.push(StLetter::T(q));
        }
        word.push(StLetter::S(3));
        cur = Mat2 {
            a: -cur.c,
            b: -cur.d,
            c: r,
            d: b,
        };
    }
    // cur = ±[[1, x], [0, 1]]
    if cur.a.is_one() {
        if !cur.b.is_zero() {
            word.push(StLetter::T(cur.b));
        }
    } else {
        // -[[1, -x], [0, 1]] with cur.b = x, i.e. S^2 T^{-x}
        word.push(StLetter::S(2));
        if !cur.b.is_zero() {
            word.push(StLetter::T(-cur.b));
        }
    }
    Ok(word)
}

/// Image under `SL2(Z) -> Z/12Z` normalized by `T -> 1` (hence `S -> 9`).
pub fn abelianize(m: &Mat2) -> Result<u8> {
    let word = st_decomposition(m)?;
    let twelve = BigInt::from(12);
    let mut acc = BigInt::zero();
    for letter in &word {
        match letter {
            StLetter::S(k) => acc += 9 * u32::from(*k),
            StLetter::T(k) => acc += k,
        }
    }
    Ok(acc.mod_floor(&twelve).to_u8().expect("residue mod 12"))
}

/// The set `{D in SL2(Z) : D a = b}` as `particular * stabilizer^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transporter {
    pub particular: Mat2,
    /// `T_a`, which generates the stabilizer of `a`.
    pub stabilizer: Mat2,
}

impl Transporter {
    pub fn member(&self, k: i64) -> Mat2 {
        &self.particular * &self.stabilizer.pow(k).expect("transvections are invertible")
    }
}

/// Unimodular completion `[[p, x], [q, y]]` of a primitive first column.
pub fn completion(v: &PrimVec) -> Mat2 {
    // p*y - q*x = 1
    let ext = v.p.extended_gcd(&v.q);
    let (g, s, t) = (ext.gcd, ext.x, ext.y);
    // s*p + t*q = g = 1 (gcd is reported nonnegative)
    debug_assert!(g.is_one());
    Mat2::new(v.p.clone(), -t, v.q.clone(), s)
}

pub fn solve_vector_transporter(a: &PrimVec, b: &PrimVec) -> Transporter {
    let from = completion(a);
    let to = completion(b);
    Transporter {
        particular: &to * &from.adjugate(),
        stabilizer: transvection(a),
    }
}

/// Fixed line of a parabolic element `±T_v^k` (`k != 0`), normalized.
pub fn parabolic_axis(m: &Mat2) -> Option<PrimVec> {
    let tr = m.trace();
    let sign = if tr == BigInt::from(2) {
        BigInt::one()
    } else if tr == BigInt::from(-2) {
        -BigInt::one()
    } else {
        return None;
    };
    let n = Mat2 {
        a: &m.a - &sign,
        b: m.b.clone(),
        c: m.c.clone(),
        d: &m.d - &sign,
    };
    let (p, q) = if !n.a.is_zero() || !n.b.is_zero() {
        (-&n.b, n.a.clone())
    } else if !n.c.is_zero() || !n.d.is_zero() {
        (-&n.d, n.c.clone())
    } else {
        return None;
    };
    let g = p.gcd(&q);
    PrimVec::new(p / &g, q / &g).ok().map(|v| v.normalized())
}

/// All primitive vectors with both coordinates in `[-bound, bound]`, in lexicographic order.
pub fn primitive_vectors(bound: i64) -> Vec<PrimVec> {
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            if let Ok(v) = PrimVec::new(p, q) {
                out.push(v);
            }
        }
    }
    out
}

/// All determinant-one matrices with entries in `[-bound, bound]`, lexicographic order.
pub fn sl2_box(bound: i64) -> Vec<Mat2> {
    unimodular_box(bound, true)
}

/// All determinant `±1` matrices with entries in `[-bound, bound]`.
pub fn gl2_box(bound: i64) -> Vec<Mat2> {
    unimodular_box(bound, false)
}

fn unimodular_box(bound: i64, only_sl2: bool) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let det = a * d - b * c;
                    if det == 1 || (!only_sl2 && det == -1) {
                        out.push(Mat2::new(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: i64, q: i64) -> PrimVec {
        PrimVec::new(p, q).unwrap()
    }

    #[test]
    fn transvection_examples() {
        assert_eq!(transvection(&v(1, 0)), Mat2::new(1, -1, 0, 1));
        assert_eq!(transvection(&v(0, 1)), Mat2::new(1, 0, 1, 1));
        assert_eq!(transvection(&v(1, 1)), Mat2::new(2, -1, 1, 0));
        assert_eq!(transvection(&v(-1, 0)), transvection(&v(1, 0)));
    }

    #[test]
    fn rejects_imprimitive_vectors() {
        assert!(matches!(PrimVec::new(2, 0), Err(Error::InvalidVector { .. })));
        assert!(PrimVec::new(0, 0).is_err());
        assert!(PrimVec::new(4, -6).is_err());
    }

    #[test]
    fn transvection_is_an_actual_transvection() {
        // T_v(x) = x + (x, v) v
        for w in primitive_vectors(4) {
            let t = transvection(&w);
            for x in primitive_vectors(2) {
                let (tx, ty) = t.apply_raw(x.p(), x.q());
                let pair = x.pairing(&w);
                assert_eq!(tx, x.p() + &pair * w.p());
                assert_eq!(ty, x.q() + &pair * w.q());
            }
        }
    }

    #[test]
    fn recover_vector() {
        assert_eq!(transvection_vector(&Mat2::new(1, -1, 0, 1)).unwrap(), v(1, 0));
        assert_eq!(transvection_vector(&Mat2::identity()), Err(Error::NotATransvection));
        assert_eq!(transvection_vector(&Mat2::neg_identity()), Err(Error::NotATransvection));
        assert_eq!(transvection_vector(&Mat2::new(1, -4, 0, 1)), Err(Error::NotATransvection));
        assert_eq!(transvection_vector(&transvection(&v(-2, 3))).unwrap(), v(2, -3));
        assert_eq!(transvection_vector(&transvection(&v(0, -1))).unwrap(), v(0, 1));
    }

    #[test]
    fn fourth_power_matches_no_small_transvection() {
        // oracle: no primitive |p|,|q| <= 5 gives T_(1,0)^4
        let target = Mat2::new(1, -4, 0, 1);
        assert_eq!(transvection(&v(1, 0)).pow(4).unwrap(), target);
        assert!(primitive_vectors(5).iter().all(|w| transvection(w) != target));
    }

    #[test]
    fn conjugation_examples() {
        let t10 = transvection(&v(1, 0));
        assert_eq!(conjugate(&Mat2::c4(), &t10).unwrap(), transvection(&v(0, 1)));
        assert_eq!(conjugate(&Mat2::c6(), &t10).unwrap(), transvection(&v(1, 1)));
        assert_eq!(conjugate(&Mat2::identity(), &t10).unwrap(), t10);
        assert!(matches!(
            conjugate(&Mat2::swap(), &t10),
            Err(Error::NotSl2 { .. })
        ));
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_of(&Mat2::c4()).unwrap(), MatOrder::Finite(4));
        assert_eq!(order_of(&Mat2::c3()).unwrap(), MatOrder::Finite(3));
        assert_eq!(order_of(&Mat2::c6()).unwrap(), MatOrder::Finite(6));
        assert_eq!(
            order_of(&Mat2::new(1, -1, 0, 1)).unwrap(),
            MatOrder::Infinite(InfiniteKind::Parabolic)
        );
        let m = &transvection(&v(1, 1)) * &transvection(&v(-1, 1));
        assert_eq!(m, Mat2::new(-1, -4, 0, -1));
        assert_eq!(order_of(&m).unwrap(), MatOrder::Infinite(InfiniteKind::Parabolic));
        assert_eq!(order_by_iteration(&m, 24), None);
        assert_eq!(
            order_of(&Mat2::new(2, 1, 1, 1)).unwrap(),
            MatOrder::Infinite(InfiniteKind::Hyperbolic)
        );
        assert!(order_of(&Mat2::new(2, 0, 0, 1)).is_err());
    }

    #[test]
    fn order_agrees_with_iteration_on_small_box() {
        for m in sl2_box(3) {
            let expected = order_by_iteration(&m, 12);
            let got = match order_of(&m).unwrap() {
                MatOrder::Finite(k) => Some(k),
                MatOrder::Infinite(_) => None,
            };
            assert_eq!(got, expected, "{m}");
        }
    }

    #[test]
    fn st_word_reproduces_matrix() {
        for m in sl2_box(3) {
            let word = st_decomposition(&m).unwrap();
            let prod = word
                .iter()
                .fold(Mat2::identity(), |acc, l| &acc * &l.to_matrix());
            assert_eq!(prod, m);
        }
    }

    #[test]
    fn abelianization_values() {
        assert_eq!(abelianize(&Mat2::identity()).unwrap(), 0);
        assert_eq!(abelianize(&Mat2::t()).unwrap(), 1);
        assert_eq!(abelianize(&Mat2::s()).unwrap(), 9);
        assert_eq!(abelianize(&Mat2::neg_identity()).unwrap(), 6);
        for w in primitive_vectors(10) {
            assert_eq!(abelianize(&transvection(&w)).unwrap(), 11, "{w}");
        }
        assert!(abelianize(&Mat2::swap()).is_err());
    }

    #[test]
    fn transporter_examples() {
        let t = solve_vector_transporter(&v(1, 0), &v(1, 0));
        assert_eq!(t.particular, Mat2::identity());
        let t = solve_vector_transporter(&v(1, 0), &v(0, 1));
        let hits = (-3..=3).map(|k| t.member(k)).any(|d| d == Mat2::c4());
        assert!(hits);
        let t = solve_vector_transporter(&v(1, 0), &v(2, 1));
        assert_eq!((t.particular.a().clone(), t.particular.c().clone()), (2.into(), 1.into()));
        for a in primitive_vectors(3) {
            for b in primitive_vectors(3) {
                let t = solve_vector_transporter(&a, &b);
                for k in -2..=2 {
                    let d = t.member(k);
                    assert!(d.det().is_one());
                    assert_eq!(d.apply(&a), b);
                }
            }
        }
    }

    #[test]
    fn axis_of_parabolics() {
        assert_eq!(parabolic_axis(&Mat2::new(1, -4, 0, 1)), Some(v(1, 0)));
        assert_eq!(parabolic_axis(&Mat2::new(-1, -4, 0, -1)), Some(v(1, 0)));
        assert_eq!(parabolic_axis(&Mat2::identity()), None);
        assert_eq!(parabolic_axis(&Mat2::c4()), None);
        for w in primitive_vectors(4) {
            let m = -transvection(&w).pow(-3).unwrap();
            assert_eq!(parabolic_axis(&m), Some(w.normalized()));
        }
    }

    #[test]
    fn json_shapes() {
        let m = Mat2::new(1, -1, 0, 1);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[1,-1],[0,1]]");
        assert_eq!(serde_json::to_string(&v(2, -1)).unwrap(), "[2,-1]");
        let big = Mat2::new(BigInt::from(10).pow(30), 0, 0, 1);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<Mat2>(&s).unwrap(), big);
        assert!(serde_json::from_str::<PrimVec>("[2,4]").is_err());
    }
}
