//! Integer polynomials in one and two variables.
//!
//! [`BiPoly`] is a sparse polynomial in `x, y` (equivalently `p, q`);
//! [`UniPoly`] is a dense polynomial in one variable, used for polynomials
//! in a norm form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::JsonInt;
use crate::sl2z::Mat2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Sparse bivariate polynomial: exponent pair `(i, j)` of `x^i y^j` to coefficient.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        BiPoly::monomial(1, 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::monomial(1, 0, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, i: u32, j: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term((i, j), c.into());
        p
    }

    /// Builds a polynomial from `(coefficient, i, j)` triples; repeated monomials add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (C, u32, u32)>,
        C: Into<BigInt>,
    {
        let mut p = BiPoly::zero();
        for (c, i, j) in terms {
            p.add_term((i, j), c.into());
        }
        p
    }

    fn add_term(&mut self, exp: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Nonzero terms as `((i, j), coefficient)`, in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|(i, j)| i + j);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &BigInt) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> BiPoly {
        let mut base = self.clone();
        let mut acc = BiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .sum()
    }

    pub fn eval_i64(&self, x: i64, y: i64) -> BigInt {
        self.eval(&x.into(), &y.into())
    }

    /// `f(a x + b y, c x + d y)`, i.e. `f` composed with the matrix acting on `(x, y)`.
    pub fn substitute_linear(&self, m: &Mat2) -> BiPoly {
        let new_x = BiPoly::from_terms([(m.a().clone(), 1, 0), (m.b().clone(), 0, 1)]);
        let new_y = BiPoly::from_terms([(m.c().clone(), 1, 0), (m.d().clone(), 0, 1)]);
        self.substitute(&new_x, &new_y)
    }

    /// `f(gx, gy)` for arbitrary polynomials `gx`, `gy`.
    pub fn substitute(&self, gx: &BiPoly, gy: &BiPoly) -> BiPoly {
        let max_i = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        let xs = powers(gx, max_i);
        let ys = powers(gy, max_j);
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            out = out + (&xs[i as usize] * &ys[j as usize]).scale(c);
        }
        out
    }

    pub fn partial(&self, var: Var) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            match var {
                Var::X if i > 0 => out.add_term((i - 1, j), c * i),
                Var::Y if j > 0 => out.add_term((i, j - 1), c * j),
                _ => {}
            }
        }
        out
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| i + j == d)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    /// Leading term in lex order with `x > y`.
    fn leading(&self) -> Option<((u32, u32), &BigInt)> {
        self.terms.iter().next_back().map(|(&e, c)| (e, c))
    }

    /// `Some(q)` with `self = q * divisor` over the integers, else `None`.
    pub fn div_exact(&self, divisor: &BiPoly) -> Option<BiPoly> {
        let (dexp, dc) = divisor.leading()?;
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        while let Some((exp, c)) = rem.leading() {
            if exp.0 < dexp.0 || exp.1 < dexp.1 {
                return None;
            }
            let (qc, r) = c.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let term = BiPoly::monomial(qc, exp.0 - dexp.0, exp.1 - dexp.1);
            rem = rem - &term * divisor;
            quot = quot + term;
        }
        Some(quot)
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Renders with the given variable names.
    pub fn display_with<'a>(&'a self, x: &'a str, y: &'a str) -> impl fmt::Display + 'a {
        BiPolyDisplay { poly: self, x, y }
    }
}

fn powers(g: &BiPoly, max: u32) -> Vec<BiPoly> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BiPoly::one());
    for k in 1..=max as usize {
        let next = &out[k - 1] * g;
        out.push(next);
    }
    out
}

/// `df/dx * dg/dy - df/dy * dg/dx`.
pub fn jacobian(f: &BiPoly, g: &BiPoly) -> BiPoly {
    &f.partial(Var::X) * &g.partial(Var::Y) - &f.partial(Var::Y) * &g.partial(Var::X)
}

/// `N(x + y w) = x^2 - xy + y^2` on the Eisenstein integers.
pub fn n3() -> BiPoly {
    BiPoly::from_terms([(1, 2, 0), (-1, 1, 1), (1, 0, 2)])
}

/// `N(x + y i) = x^2 + y^2` on the Gaussian integers.
pub fn n4() -> BiPoly {
    BiPoly::from_terms([(1, 2, 0), (1, 0, 2)])
}

/// `(x + y w)^k + (x + y w')^k` for the primitive cube roots of unity `w, w'`.
pub fn eisenstein_power_sum(k: u32) -> BiPoly {
    let s1 = BiPoly::from_terms([(2, 1, 0), (-1, 0, 1)]);
    let norm = n3();
    let mut prev = BiPoly::constant(2);
    if k == 0 {
        return prev;
    }
    let mut cur = s1.clone();
    for _ in 1..k {
        let next = &(&s1 * &cur) - &(&norm * &prev);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn sixth_power_sum() -> BiPoly {
    eisenstein_power_sum(6)
}

impl Add for BiPoly {
    type Output = BiPoly;

    fn add(mut self, rhs: BiPoly) -> BiPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;

    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.clone() + rhs.clone()
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;

    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;

    fn neg(self) -> BiPoly {
        -self.clone()
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;

    fn sub(self, rhs: BiPoly) -> BiPoly {
        self + (-rhs)
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;

    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.clone() - rhs.clone()
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;

    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;

    fn mul(self, rhs: BiPoly) -> BiPoly {
        &self * &rhs
    }
}

struct BiPolyDisplay<'a> {
    poly: &'a BiPoly,
    x: &'a str,
    y: &'a str,
}

fn write_signed_coeff(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigInt,
    is_constant: bool,
) -> fmt::Result {
    let mag = c.abs();
    match (first, c.is_negative()) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if is_constant {
        write!(f, "{mag}")
    } else if mag.is_one() {
        Ok(())
    } else {
        write!(f, "{mag}*")
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, var: &str, e: u32) -> fmt::Result {
    match e {
        1 => write!(f, "{var}"),
        _ => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for BiPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // descending total degree, then descending power of x
        let mut terms: Vec<_> = self.poly.terms.iter().collect();
        terms.sort_by(|((i1, j1), _), ((i2, j2), _)| (i2 + j2, i2).cmp(&(i1 + j1, i1)));
        for (k, (&(i, j), c)) in terms.into_iter().enumerate() {
            write_signed_coeff(f, k == 0, c, i == 0 && j == 0)?;
            if i > 0 {
                write_power(f, self.x, i)?;
            }
            if i > 0 && j > 0 {
                write!(f, "*")?;
            }
            if j > 0 {
                write_power(f, self.y, j)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x", "y"))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, JsonInt> = self
            .terms
            .iter()
            .map(|((i, j), c)| (format!("{i},{j}"), JsonInt(c.clone())))
            .collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let map = BTreeMap::<String, JsonInt>::deserialize(deserializer)?;
        let mut p = BiPoly::zero();
        for (key, c) in map {
            let (i, j) = key
                .split_once(',')
                .ok_or_else(|| D::Error::custom(format!("bad exponent key {key:?}")))?;
            let i: u32 = i.trim().parse().map_err(D::Error::custom)?;
            let j: u32 = j.trim().parse().map_err(D::Error::custom)?;
            p.add_term((i, j), c.0);
        }
        Ok(p)
    }
}

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new<C: Into<BigInt>>(coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut p = UniPoly {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    /// The variable `t`.
    pub fn t() -> Self {
        UniPoly::new([0, 1])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        UniPoly::new([c.into()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// `self(g)` as a bivariate polynomial.
    pub fn compose(&self, g: &BiPoly) -> BiPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(BiPoly::zero(), |acc, c| &acc * g + BiPoly::constant(c.clone()))
    }

    /// Divides by `t - r`, assuming `r` is a root.
    fn deflate(&self, r: &BigInt) -> UniPoly {
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); n - 1];
        let mut carry = BigInt::zero();
        for k in (1..n).rev() {
            carry = &self.coeffs[k] + carry * r;
            out[k - 1] = carry.clone();
        }
        UniPoly::new(out)
    }

    /// Integer roots with multiplicity, ascending.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        let mut roots = Vec::new();
        let mut cur = self.clone();
        while cur.degree().is_some_and(|d| d > 0) {
            if cur.coeffs[0].is_zero() {
                roots.push(BigInt::zero());
                cur = UniPoly::new(cur.coeffs[1..].to_vec());
                continue;
            }
            let c0 = cur.coeffs[0].abs();
            let found = divisors(&c0)
                .into_iter()
                .flat_map(|d| [d.clone(), -d])
                .find(|r| cur.eval(r).is_zero());
            match found {
                Some(r) => {
                    cur = cur.deflate(&r);
                    roots.push(r);
                }
                None => break,
            }
        }
        roots.sort();
        roots
    }

    /// Splits off the sign, integer content and all integer linear factors.
    pub fn factor_linear(&self) -> LinearFactorization {
        let content = self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign_neg = self.leading().is_some_and(Signed::is_negative);
        let unit = if sign_neg { -content.clone() } else { content.clone() };
        if self.is_zero() {
            return LinearFactorization {
                unit: BigInt::zero(),
                roots: Vec::new(),
                rest: UniPoly::constant(1),
            };
        }
        let mut rest = UniPoly::new(self.coeffs.iter().map(|c| c / &unit));
        let roots = rest.integer_roots();
        for r in &roots {
            rest = rest.deflate(r);
        }
        LinearFactorization { unit, roots, rest }
    }

    /// Renders with the given variable name.
    pub fn display_with<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        UniPolyDisplay { poly: self, var }
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// `unit * prod (t - root) * rest`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFactorization {
    pub unit: BigInt,
    pub roots: Vec<BigInt>,
    pub rest: UniPoly,
}

impl LinearFactorization {
    pub fn expand(&self) -> UniPoly {
        let mut acc = &UniPoly::constant(self.unit.clone()) * &self.rest;
        for r in &self.roots {
            acc = &acc * &UniPoly::new([-r.clone(), BigInt::one()]);
        }
        acc
    }

    pub fn display_with<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        FactorDisplay { fac: self, var }
    }
}

struct FactorDisplay<'a> {
    fac: &'a LinearFactorization,
    var: &'a str,
}

impl fmt::Display for FactorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = &self.fac.unit;
        let mut factors: Vec<String> = self
            .fac
            .roots
            .iter()
            .map(|r| {
                let lin = UniPoly::new([-r.clone(), BigInt::one()]);
                format!("({})", lin.display_with(self.var))
            })
            .collect();
        let rest_trivial = self.fac.rest == UniPoly::constant(1);
        if !rest_trivial {
            factors.push(format!("({})", self.fac.rest.display_with(self.var)));
        }
        if factors.is_empty() {
            return write!(f, "{unit}");
        }
        if unit == &-BigInt::one() {
            write!(f, "-")?;
        } else if !unit.is_one() {
            write!(f, "{unit}*")?;
        }
        write!(f, "{}", factors.concat())
    }
}

struct UniPolyDisplay<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

impl fmt::Display for UniPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_signed_coeff(f, first, c, k == 0)?;
            first = false;
            if k > 0 {
                write_power(f, self.var, k as u32)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("t"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| {
            self.coeffs.get(k).cloned().unwrap_or_default() + rhs.coeffs.get(k).cloned().unwrap_or_default()
        }))
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;

    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c))
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Serialize for UniPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<JsonInt> = self.coeffs.iter().cloned().map(JsonInt).collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<JsonInt>::deserialize(deserializer)?;
        Ok(UniPoly::new(v.into_iter().map(|j| j.0)))
    }
}

/// Finds `g` with `f = g(norm)`, peeling off top homogeneous parts.
///
/// `norm` must be a homogeneous quadratic.
pub fn express_in_norm(f: &BiPoly, norm: &BiPoly) -> Result<UniPoly> {
    if norm.total_degree() != Some(2) || !norm.is_homogeneous() {
        return Err(Error::InvalidArgument(
            "norm must be a homogeneous quadratic".into(),
        ));
    }
    let mut rem = f.clone();
    let mut coeffs: Vec<BigInt> = Vec::new();
    while let Some(d) = rem.total_degree() {
        if d % 2 == 1 {
            return Err(Error::NotExpressible);
        }
        let k = (d / 2) as usize;
        let head = rem.homogeneous_part(d);
        let nk = norm.pow(k as u32);
        let c = head.div_exact(&nk).ok_or(Error::NotExpressible)?;
        if c.total_degree() != Some(0) {
            return Err(Error::NotExpressible);
        }
        let c = c.coeff(0, 0);
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigInt::zero());
        }
        coeffs[k] = c.clone();
        rem = rem - nk.scale(&c);
    }
    let g = UniPoly::new(coeffs);
    debug_assert_eq!(&g.compose(norm), f);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&n4() * &BiPoly::one(), n4());
        assert_eq!((&n3() * &n3()).eval_i64(2, 1), big(9));
        assert!((&n4() - &n4()).is_zero());
        assert_eq!(n3().eval_i64(1, 0), big(1));
        assert_eq!(n3().eval_i64(2, 1), big(3));
        assert_eq!(n4().eval_i64(1, 1), big(2));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(n4().substitute_linear(&Mat2::c4()), n4());
        assert_eq!(n3().substitute_linear(&Mat2::c6()), n3());
        assert_eq!(BiPoly::x().substitute_linear(&Mat2::swap()), BiPoly::y());
    }

    #[test]
    fn jacobian_examples() {
        let f = n4();
        let g = BiPoly::monomial(1, 2, 2);
        let expected = BiPoly::from_terms([(4, 3, 1), (-4, 1, 3)]);
        assert_eq!(jacobian(&f, &g), expected);
        assert!(jacobian(&f, &f).is_zero());
    }

    #[test]
    fn eisenstein_jacobian_factors() {
        // -54 xy(x - 2y)(x - y)(x + y)(2x - y)
        let j = jacobian(&n3(), &sixth_power_sum());
        let lin = |a: i64, b: i64| BiPoly::from_terms([(a, 1, 0), (b, 0, 1)]);
        let expected = [lin(1, -2), lin(1, -1), lin(1, 1), lin(2, -1)]
            .iter()
            .fold(BiPoly::monomial(-54, 1, 1), |acc, l| &acc * l);
        assert_eq!(j, expected);
        let six = BiPoly::constant(6);
        let divisor = &(&six * &lin(2, -1)) * &lin(-1, 2);
        assert!(j.div_exact(&divisor).is_some());
    }

    #[test]
    fn sixth_power_sum_values() {
        let s6 = sixth_power_sum();
        assert_eq!(s6.eval_i64(1, 0), big(2));
        assert_eq!(s6.eval_i64(0, 1), big(2));
        // 1 + w = -w^2 is a sixth root of unity
        assert_eq!(s6.eval_i64(1, 1), big(2));
        assert!(s6.is_homogeneous());
        assert_eq!(s6.total_degree(), Some(6));
        assert_eq!(eisenstein_power_sum(2).eval_i64(1, 1), big(-1));
    }

    #[test]
    fn homogeneous_parts() {
        let n4sq = n4().pow(2);
        assert_eq!(n4sq.homogeneous_part(4), n4sq);
        let f = BiPoly::constant(2) - n4sq.clone();
        assert_eq!(f.homogeneous_part(4), -n4sq);
        assert_eq!((n3() + BiPoly::one()).homogeneous_part(0), BiPoly::one());
    }

    #[test]
    fn norm_expressions() {
        let t = UniPoly::t();
        let n = n3();
        // -(N+1)(N^2+2N-2) and (N-1)(N^2-2N-2)
        let f3 = -&(&(&t + &UniPoly::constant(1)) * &UniPoly::new([-2, 2, 1]));
        let f6 = &(&t - &UniPoly::constant(1)) * &UniPoly::new([-2, -2, 1]);
        assert_eq!(express_in_norm(&f3.compose(&n), &n).unwrap(), f3);
        assert_eq!(express_in_norm(&f6.compose(&n), &n).unwrap(), f6);
        assert_eq!(express_in_norm(&BiPoly::x(), &n), Err(Error::NotExpressible));
        assert_eq!(express_in_norm(&n4(), &n), Err(Error::NotExpressible));
        assert!(express_in_norm(&n4(), &BiPoly::x()).is_err());
    }

    #[test]
    fn factored_display() {
        let f3 = UniPoly::new([2, 0, -3, -1]);
        let fac = f3.factor_linear();
        assert_eq!(fac.unit, big(-1));
        assert_eq!(fac.roots, vec![big(-1)]);
        assert_eq!(fac.rest, UniPoly::new([-2, 2, 1]));
        assert_eq!(fac.expand(), f3);
        assert_eq!(fac.display_with("N3").to_string(), "-(N3 + 1)(N3^2 + 2*N3 - 2)");
        let f6 = UniPoly::new([2, 0, -3, 1]);
        assert_eq!(
            f6.factor_linear().display_with("N3").to_string(),
            "(N3 - 1)(N3^2 - 2*N3 - 2)"
        );
        let f4 = UniPoly::new([2, 0, -1]);
        assert_eq!(f4.factor_linear().display_with("N4").to_string(), "-(N4^2 - 2)");
    }

    #[test]
    fn display_and_json() {
        let f = BiPoly::from_terms([(4, 3, 1), (-4, 1, 3), (-1, 0, 0)]);
        assert_eq!(f.to_string(), "4*x^3*y - 4*x*y^3 - 1");
        assert_eq!(f.display_with("p", "q").to_string(), "4*p^3*q - 4*p*q^3 - 1");
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"0,0":-1,"1,3":-4,"3,1":4}"#);
        assert_eq!(serde_json::from_str::<BiPoly>(&s).unwrap(), f);
        assert_eq!(BiPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let f = &n3() * &n4();
        assert_eq!(f.div_exact(&n4()), Some(n3()));
        assert_eq!(n4().div_exact(&n3()), None);
        assert_eq!(BiPoly::monomial(3, 1, 0).div_exact(&BiPoly::constant(2)), None);
    }

    fn poly_strategy() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec((-5i64..=5, 0u32..4, 0u32..4), 0..6).prop_map(BiPoly::from_terms)
    }

    fn unimodular_strategy() -> impl Strategy<Value = Mat2> {
        prop::sample::select(crate::sl2z::gl2_box(2))
    }

    proptest! {
        #[test]
        fn ring_axioms(f in poly_strategy(), g in poly_strategy(), h in poly_strategy()) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f + &g, &g + &f);
            prop_assert_eq!(&f * &g, &g * &f);
        }

        #[test]
        fn substitution_is_ring_map(f in poly_strategy(), g in poly_strategy(), m in unimodular_strategy()) {
            prop_assert_eq!((&f * &g).substitute_linear(&m), &f.substitute_linear(&m) * &g.substitute_linear(&m));
            prop_assert_eq!((&f + &g).substitute_linear(&m), &f.substitute_linear(&m) + &g.substitute_linear(&m));
        }

        #[test]
        fn substitution_composes(f in poly_strategy(), a in unimodular_strategy(), b in unimodular_strategy()) {
            prop_assert_eq!(f.substitute_linear(&a).substitute_linear(&b), f.substitute_linear(&(&a * &b)));
        }

        #[test]
        fn jacobian_antisymmetric_bilinear(f in poly_strategy(), g in poly_strategy(), h in poly_strategy(), c in -4i64..=4) {
            prop_assert_eq!(jacobian(&f, &g), -jacobian(&g, &f));
            let cb = BigInt::from(c);
            prop_assert_eq!(jacobian(&(&f.scale(&cb) + &h), &g), &jacobian(&f, &g).scale(&cb) + &jacobian(&h, &g));
        }

        #[test]
        fn eval_is_homomorphism(f in poly_strategy(), g in poly_strategy(), x in -6i64..=6, y in -6i64..=6, m in unimodular_strategy()) {
            prop_assert_eq!((&f * &g).eval_i64(x, y), f.eval_i64(x, y) * g.eval_i64(x, y));
            prop_assert_eq!((&f - &g).eval_i64(x, y), f.eval_i64(x, y) - g.eval_i64(x, y));
            let (mx, my) = m.apply_raw(&x.into(), &y.into());
            prop_assert_eq!(f.substitute_linear(&m).eval_i64(x, y), f.eval(&mx, &my));
        }

        #[test]
        fn norm_round_trip(cs in prop::collection::vec(-6i64..=6, 0..5), use_n3 in any::<bool>()) {
            let g = UniPoly::new(cs);
            let n = if use_n3 { n3() } else { n4() };
            prop_assert_eq!(express_in_norm(&g.compose(&n), &n).unwrap(), g);
        }

        #[test]
        fn linear_factorization_expands(cs in prop::collection::vec(-6i64..=6, 1..5)) {
            let g = UniPoly::new(cs);
            prop_assume!(!g.is_zero());
            prop_assert_eq!(g.factor_linear().expand(), g);
        }
    }
}
