//! Rotation-invariant factorizations: trace polynomials, lattice points on
//! norm-form conics, the structured classification and its brute-force oracle.

pub mod explore;
pub mod nonexistence;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::{
    decide_sim_conjugacy, period3_tuple, standard_tuple, tuple_product, Factorization,
};
use crate::intpoly::{express_in_norm, n3, n4, BiPoly, LinearFactorization, UniPoly};
use crate::sl2z::{
    conjugate_unchecked, order_by_iteration, order_of, primitive_vectors, sl2_box,
    transvection, Mat2, MatOrder, PrimVec,
};

/// The three finite-order conjugators up to conjugacy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalC {
    C3,
    C4,
    C6,
}

impl CanonicalC {
    pub const ALL: [CanonicalC; 3] = [CanonicalC::C3, CanonicalC::C4, CanonicalC::C6];

    pub fn matrix(self) -> Mat2 {
        match self {
            CanonicalC::C3 => Mat2::c3(),
            CanonicalC::C4 => Mat2::c4(),
            CanonicalC::C6 => Mat2::c6(),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            CanonicalC::C3 => 3,
            CanonicalC::C4 => 4,
            CanonicalC::C6 => 6,
        }
    }

    /// Smallest `k` with `C^k = ±Id`.
    pub fn period(self) -> u32 {
        match self {
            CanonicalC::C4 => 2,
            CanonicalC::C3 | CanonicalC::C6 => 3,
        }
    }

    /// The norm form preserved by `C`.
    pub fn norm(self) -> BiPoly {
        match self {
            CanonicalC::C4 => n4(),
            CanonicalC::C3 | CanonicalC::C6 => n3(),
        }
    }

    pub fn norm_name(self) -> &'static str {
        match self {
            CanonicalC::C4 => "N4",
            CanonicalC::C3 | CanonicalC::C6 => "N3",
        }
    }
}

impl fmt::Display for CanonicalC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.order())
    }
}

impl FromStr for CanonicalC {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().trim_start_matches(['C', 'c']) {
            "3" => Ok(CanonicalC::C3),
            "4" => Ok(CanonicalC::C4),
            "6" => Ok(CanonicalC::C6),
            _ => Err(Error::Parse(format!("unknown case {s:?}, expected 3, 4 or 6"))),
        }
    }
}

/// 2x2 matrix of bivariate polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
struct PolyMat([BiPoly; 4]);

impl PolyMat {
    fn mul(&self, rhs: &PolyMat) -> PolyMat {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &rhs.0;
        PolyMat([
            &(a * e) + &(b * g),
            &(a * f) + &(b * h),
            &(c * e) + &(d * g),
            &(c * f) + &(d * h),
        ])
    }

    fn trace(&self) -> BiPoly {
        &self.0[0] + &self.0[3]
    }

    /// `T_(P, Q)` for linear forms `P, Q`.
    fn transvection(p: &BiPoly, q: &BiPoly) -> PolyMat {
        let pq = p * q;
        PolyMat([
            &BiPoly::one() + &pq,
            -(p * p),
            q * q,
            &BiPoly::one() - &pq,
        ])
    }
}

fn linear_image(m: &Mat2) -> (BiPoly, BiPoly) {
    (
        BiPoly::from_terms([(m.a().clone(), 1, 0), (m.b().clone(), 0, 1)]),
        BiPoly::from_terms([(m.c().clone(), 1, 0), (m.d().clone(), 0, 1)]),
    )
}

/// `tr(T_v T_{Cv} ... T_{C^{k-1} v})` with `v = (p, q)` symbolic, `k` the period.
pub fn trace_polynomial(c: CanonicalC) -> BiPoly {
    let cm = c.matrix();
    let mut power = Mat2::identity();
    let mut acc: Option<PolyMat> = None;
    for _ in 0..c.period() {
        let (p, q) = linear_image(&power);
        let t = PolyMat::transvection(&p, &q);
        acc = Some(match acc {
            None => t,
            Some(a) => a.mul(&t),
        });
        power = &cm * &power;
    }
    acc.expect("period is positive").trace()
}

/// Numeric counterpart of [`trace_polynomial`].
pub fn orbit_product(c: &Mat2, v: &PrimVec, k: u32) -> Mat2 {
    let mut w = v.clone();
    let mut acc = Mat2::identity();
    for _ in 0..k {
        acc = &acc * &transvection(&w);
        w = c.apply(&w);
    }
    acc
}

/// A trace polynomial written in its norm form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormExpression {
    pub case: CanonicalC,
    pub norm: &'static str,
    pub trace_polynomial: BiPoly,
    pub in_norm: UniPoly,
    #[serde(skip)]
    pub factored: LinearFactorization,
    pub factored_text: String,
}

pub fn norm_expression(c: CanonicalC) -> Result<NormExpression> {
    let f = trace_polynomial(c);
    let g = express_in_norm(&f, &c.norm())?;
    let factored = g.factor_linear();
    let factored_text = factored.display_with(c.norm_name()).to_string();
    Ok(NormExpression {
        case: c,
        norm: c.norm_name(),
        trace_polynomial: f,
        in_norm: g,
        factored,
        factored_text,
    })
}

/// One `C`-orbit of conic points, up to sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConicOrbit {
    /// `v, Cv, ..., C^{k-1} v`, each sign-normalized.
    pub members: Vec<PrimVec>,
    #[serde(with = "crate::json::bigint")]
    pub norm: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub trace: BigInt,
    /// `T_v T_{Cv} ... T_{C^{k-1} v}`.
    pub product: Mat2,
    pub product_order: MatOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConicEnumeration {
    pub case: CanonicalC,
    /// Norm values `t >= 1` with `|g(t)| <= 2`.
    pub admissible_norms: Vec<i64>,
    /// Half-widths of the search box in `p` and `q`.
    pub box_p: i64,
    pub box_q: i64,
    /// All sign-normalized primitive points with `|f(p, q)| <= 2`.
    pub points: Vec<PrimVec>,
    pub orbits: Vec<ConicOrbit>,
}

fn isqrt_floor(x: &BigInt) -> BigInt {
    if x.is_negative() {
        BigInt::zero()
    } else {
        x.sqrt()
    }
}

/// Points `v` with `|trace_polynomial(C)(v)| <= 2`, grouped into `C`-orbits.
pub fn enumerate_conic_points(c: CanonicalC) -> Result<ConicEnumeration> {
    let f = trace_polynomial(c);
    let norm = c.norm();
    let g = express_in_norm(&f, &norm)?;
    let two = BigInt::from(2);

    // every real root of |g| = 2 lies below the Cauchy bound
    let lead = g.leading().cloned().unwrap_or_else(BigInt::one).abs();
    let cauchy: BigInt = g
        .coeffs()
        .iter()
        .map(|x| (x.abs() + &two) / &lead)
        .max()
        .unwrap_or_default()
        + 1;
    let cauchy = cauchy.to_i64().unwrap_or(i64::MAX);
    let admissible_norms: Vec<i64> = (1..=cauchy)
        .filter(|&t| g.eval(&t.into()).abs() <= two)
        .collect();
    let t_max = admissible_norms.last().copied().unwrap_or(0);

    // a x^2 + b xy + c y^2 <= t bounds x^2 by 4ct/D and y^2 by 4at/D
    let (a, b, cc) = (norm.coeff(2, 0), norm.coeff(1, 1), norm.coeff(0, 2));
    let disc = BigInt::from(4) * &a * &cc - &b * &b;
    let t = BigInt::from(t_max);
    let box_p = isqrt_floor(&(BigInt::from(4) * &cc * &t / &disc)).to_i64().unwrap_or(0);
    let box_q = isqrt_floor(&(BigInt::from(4) * &a * &t / &disc)).to_i64().unwrap_or(0);

    let mut points = Vec::new();
    for p in -box_p..=box_p {
        for q in -box_q..=box_q {
            let Ok(v) = PrimVec::new(p, q) else { continue };
            if f.eval(v.p(), v.q()).abs() <= two {
                let v = v.normalized();
                if !points.contains(&v) {
                    points.push(v);
                }
            }
        }
    }
    let norm_of = |v: &PrimVec| norm.eval(v.p(), v.q());
    points.sort_by(|x, y| {
        (norm_of(x), x.q().abs(), std::cmp::Reverse(x.p().clone()), std::cmp::Reverse(x.q().clone()))
            .cmp(&(norm_of(y), y.q().abs(), std::cmp::Reverse(y.p().clone()), std::cmp::Reverse(y.q().clone())))
    });

    let cm = c.matrix();
    let k = c.period();
    let mut orbits: Vec<ConicOrbit> = Vec::new();
    for v in &points {
        if orbits.iter().any(|o| o.members.contains(v)) {
            continue;
        }
        let mut members = Vec::new();
        let mut w = v.clone();
        for _ in 0..k {
            let nw = w.normalized();
            if !members.contains(&nw) {
                members.push(nw);
            }
            w = cm.apply(&w);
        }
        let product = orbit_product(&cm, v, k);
        orbits.push(ConicOrbit {
            norm: norm_of(v),
            trace: product.trace(),
            product_order: order_of(&product)?,
            product,
            members,
        });
    }
    Ok(ConicEnumeration {
        case: c,
        admissible_norms,
        box_p,
        box_q,
        points,
        orbits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Structured,
    Oracle,
}

/// Which reference tuple a class is conjugate to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalTuple {
    /// `(Y_1, Y_2, ...)`.
    Standard,
    /// `(Z_1, Z_2, Z_3, ...)`.
    Period3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub period: u32,
    pub representative: Factorization,
    /// `C` with `C X_i C^{-1} = X_{i+1}`.
    pub conjugator: Mat2,
    pub conjugator_order: MatOrder,
    /// Seed vector `v` with `X_1 = T_v`.
    pub seed: PrimVec,
    pub canonical: Option<CanonicalTuple>,
    /// `D` carrying the representative onto the canonical tuple.
    pub witness: Option<Mat2>,
    pub provenance: Provenance,
}

/// `(T_v, T_{Cv}, ..., T_{C^{n-1} v})`, unchecked.
pub fn orbit_tuple(c: &Mat2, v: &PrimVec, n: usize) -> Vec<Mat2> {
    let mut out = Vec::with_capacity(n);
    let mut w = v.clone();
    for _ in 0..n {
        out.push(transvection(&w));
        w = c.apply(&w);
    }
    out
}

fn check_n(n: i64) -> Result<usize> {
    if n <= 0 {
        Err(Error::InvalidArgument(format!("n must be positive, got {n}")))
    } else {
        Ok(n as usize)
    }
}

struct Canonicals {
    standard: Factorization,
    period3: Factorization,
}

impl Canonicals {
    fn new(n: i64) -> Result<Self> {
        Ok(Canonicals {
            standard: standard_tuple(n)?,
            period3: period3_tuple(n)?,
        })
    }

    fn identify(&self, f: &Factorization) -> Result<(Option<CanonicalTuple>, Option<Mat2>)> {
        for (tag, reference) in [
            (CanonicalTuple::Standard, &self.standard),
            (CanonicalTuple::Period3, &self.period3),
        ] {
            if let Some(d) = decide_sim_conjugacy(f, reference)?.conjugator() {
                return Ok((Some(tag), Some(d.clone())));
            }
        }
        Ok((None, None))
    }
}

struct Candidate {
    tuple: Factorization,
    c: Mat2,
    v: PrimVec,
}

fn period_of(c: &Mat2) -> u32 {
    (1..=6)
        .find(|&k| {
            let p = c.pow(k as i64).expect("det 1");
            p.is_identity() || p.is_neg_identity()
        })
        .unwrap_or(0)
}

/// Groups candidates into simultaneous-conjugacy classes, keeping the first of each.
fn deduplicate(
    candidates: Vec<Candidate>,
    canon: &Canonicals,
    provenance: Provenance,
) -> Result<Vec<ClassReport>> {
    let mut reports: Vec<ClassReport> = Vec::new();
    for cand in candidates {
        let mut known = false;
        for r in &reports {
            if decide_sim_conjugacy(&cand.tuple, &r.representative)?.is_found() {
                known = true;
                break;
            }
        }
        if known {
            continue;
        }
        let (canonical, witness) = canon.identify(&cand.tuple)?;
        reports.push(ClassReport {
            period: period_of(&cand.c),
            conjugator_order: order_of(&cand.c)?,
            representative: cand.tuple,
            conjugator: cand.c,
            seed: cand.v,
            canonical,
            witness,
            provenance,
        });
    }
    reports.sort_by_key(|r| (r.canonical, r.period));
    Ok(reports)
}

/// Classes of rotation-invariant factorizations of length `n`, via the conic enumeration.
pub fn classify_rotation_invariant(n: i64) -> Result<Vec<ClassReport>> {
    let len = check_n(n)?;
    if len % 12 != 0 {
        return Ok(Vec::new());
    }
    let canon = Canonicals::new(n)?;
    let mut candidates = Vec::new();
    for case in [CanonicalC::C4, CanonicalC::C3, CanonicalC::C6] {
        let cm = case.matrix();
        let k = case.period();
        let enumeration = enumerate_conic_points(case)?;
        for v in &enumeration.points {
            let block = orbit_product(&cm, v, k);
            if !block.pow((len as u32 / k) as i64)?.is_identity() {
                continue;
            }
            let tuple = Factorization::new(orbit_tuple(&cm, v, len))?;
            candidates.push(Candidate {
                tuple,
                c: cm.clone(),
                v: v.clone(),
            });
        }
    }
    deduplicate(candidates, &canon, Provenance::Structured)
}

/// Conditions of rotation invariance checked by plain multiplication.
fn direct_candidate(c: &Mat2, v: &PrimVec, len: usize) -> Option<Vec<Mat2>> {
    let tuple = orbit_tuple(c, v, len);
    let last = tuple.last()?;
    if conjugate_unchecked(c, last) != tuple[0] {
        return None;
    }
    tuple_product(&tuple).is_identity().then_some(tuple)
}

/// Exhaustive search over seeds `|p|, |q| <= box` for the canonical `C`'s and
/// over every finite-order `C` with entries in `[-box, box]`.
pub fn oracle_rotation_invariant(n: i64, bound: i64) -> Result<Vec<ClassReport>> {
    let len = check_n(n)?;
    if bound < 1 {
        return Err(Error::InvalidArgument(format!("box must be positive, got {bound}")));
    }
    let vectors = primitive_vectors(bound);
    let mut cs: Vec<Mat2> = CanonicalC::ALL.iter().map(|c| c.matrix()).collect();
    cs.extend(
        sl2_box(bound)
            .into_iter()
            .filter(|m| order_by_iteration(m, 12).is_some()),
    );
    let found: Vec<Vec<(Mat2, PrimVec, Vec<Mat2>)>> = cs
        .par_iter()
        .map(|c| {
            vectors
                .iter()
                .filter_map(|v| direct_candidate(c, v, len).map(|t| (c.clone(), v.clone(), t)))
                .collect()
        })
        .collect();
    let hits: Vec<_> = found.into_iter().flatten().collect();
    if hits.is_empty() {
        return Ok(Vec::new());
    }
    let canon = Canonicals::new(n)?;
    let candidates = hits
        .into_iter()
        .map(|(c, v, t)| {
            Ok(Candidate {
                tuple: Factorization::new(t)?,
                c,
                v,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    deduplicate(candidates, &canon, Provenance::Oracle)
}

/// Same classes: equal counts, and each canonical tag with the same period.
pub fn reports_agree(a: &[ClassReport], b: &[ClassReport]) -> bool {
    let key = |r: &ClassReport| (r.canonical, r.period);
    a.len() == b.len() && a.iter().map(key).eq(b.iter().map(key))
}
