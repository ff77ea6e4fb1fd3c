//! Finite symmetry groups of trace polynomials, invariance and Jacobian checks.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classify::{trace_polynomial, CanonicalC};
use crate::error::{Error, Result};
use crate::intpoly::{express_in_norm, jacobian, n3, n4, sixth_power_sum, BiPoly, UniPoly};
use crate::sl2z::{gl2_box, Mat2};

const MAX_GROUP_ORDER: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum GroupShape {
    Cyclic(usize),
    Dihedral(usize),
    Other(usize),
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupShape::Cyclic(n) => write!(f, "cyclic of order {n}"),
            GroupShape::Dihedral(n) => write!(f, "dihedral of order {n}"),
            GroupShape::Other(n) => write!(f, "non-dihedral of order {n}"),
        }
    }
}

/// A finite subgroup of `GL_2(Z)` with its full element list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryGroup {
    generators: Vec<Mat2>,
    elements: Vec<Mat2>,
    shape: GroupShape,
}

impl SymmetryGroup {
    /// Closes `generators` under multiplication.
    pub fn generated_by(generators: Vec<Mat2>) -> Result<Self> {
        for g in &generators {
            g.require_unimodular()?;
        }
        let mut seen: BTreeSet<Mat2> = BTreeSet::new();
        seen.insert(Mat2::identity());
        let mut frontier = vec![Mat2::identity()];
        while let Some(m) = frontier.pop() {
            for g in &generators {
                let next = &m * g;
                if seen.insert(next.clone()) {
                    if seen.len() > MAX_GROUP_ORDER {
                        return Err(Error::InvalidArgument(
                            "generators do not close into a small finite group".into(),
                        ));
                    }
                    frontier.push(next);
                }
            }
        }
        let elements: Vec<Mat2> = seen.into_iter().collect();
        let shape = classify_shape(&elements);
        Ok(SymmetryGroup {
            generators,
            elements,
            shape,
        })
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn shape(&self) -> GroupShape {
        self.shape
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a * b == b * a))
    }

    /// Closure, identity and inverses.
    pub fn is_group(&self) -> bool {
        let id = Mat2::identity();
        self.contains(&id)
            && self
                .elements
                .iter()
                .all(|a| self.elements.iter().all(|b| self.contains(&(a * b))))
            && self
                .elements
                .iter()
                .all(|a| self.elements.iter().any(|b| (a * b) == id))
    }
}

fn element_order(m: &Mat2, limit: usize) -> usize {
    let mut acc = m.clone();
    for k in 1..=limit {
        if acc.is_identity() {
            return k;
        }
        acc = &acc * m;
    }
    0
}

fn classify_shape(elements: &[Mat2]) -> GroupShape {
    let n = elements.len();
    let orders: Vec<usize> = elements.iter().map(|m| element_order(m, n)).collect();
    if orders.contains(&n) {
        return GroupShape::Cyclic(n);
    }
    if n.is_multiple_of(2) && n >= 4 {
        if let Some(r) = elements
            .iter()
            .zip(&orders)
            .find(|(_, &o)| o == n / 2)
            .map(|(m, _)| m)
        {
            let mut rotations = BTreeSet::new();
            let mut acc = Mat2::identity();
            for _ in 0..n / 2 {
                rotations.insert(acc.clone());
                acc = &acc * r;
            }
            let reflections_ok = elements
                .iter()
                .zip(&orders)
                .filter(|(m, _)| !rotations.contains(*m))
                .all(|(_, &o)| o == 2);
            if reflections_ok {
                return GroupShape::Dihedral(n);
            }
        }
    }
    GroupShape::Other(n)
}

/// Centralizer data for a finite-order `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Commutant {
    pub c: Mat2,
    pub bound: i64,
    /// All `M` in the box with `det M = ±1` and `MC = CM`, closed into a group.
    pub strict: SymmetryGroup,
    /// `<C, -Id, swap>`.
    pub extended: SymmetryGroup,
}

pub fn commutant(c: &Mat2, bound: i64) -> Result<Commutant> {
    c.require_sl2()?;
    let found: Vec<Mat2> = gl2_box(bound)
        .into_iter()
        .filter(|m| m * c == c * m)
        .collect();
    let strict = SymmetryGroup::generated_by(found)?;
    let extended = extended_group(c)?;
    Ok(Commutant {
        c: c.clone(),
        bound,
        strict,
        extended,
    })
}

pub fn extended_group(c: &Mat2) -> Result<SymmetryGroup> {
    SymmetryGroup::generated_by(vec![c.clone(), Mat2::neg_identity(), Mat2::swap()])
}

pub fn check_invariance(f: &BiPoly, group: &SymmetryGroup) -> bool {
    invariance_failures(f, group).is_empty()
}

/// Elements `M` with `f(M(x, y)) != f(x, y)`.
pub fn invariance_failures(f: &BiPoly, group: &SymmetryGroup) -> Vec<Mat2> {
    group
        .elements()
        .iter()
        .filter(|m| &f.substitute_linear(m) != f)
        .cloned()
        .collect()
}

/// `Some(c)` with `computed = c * reference`.
pub fn proportionality_constant(computed: &BiPoly, reference: &BiPoly) -> Option<BigRational> {
    if computed.is_zero() || reference.is_zero() {
        return None;
    }
    let ((i, j), r) = reference.terms().next()?;
    let ratio = BigRational::new(computed.coeff(*i, *j), r.clone());
    if ratio.is_zero() {
        return None;
    }
    let lhs = computed.scale(ratio.denom());
    let rhs = reference.scale(ratio.numer());
    (lhs == rhs).then_some(ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorCase {
    #[serde(rename = "order34_6")]
    Order346,
    #[serde(rename = "order4")]
    Order4,
}

impl GeneratorCase {
    pub const ALL: [GeneratorCase; 2] = [GeneratorCase::Order4, GeneratorCase::Order346];

    pub fn rotation(self) -> Mat2 {
        match self {
            GeneratorCase::Order4 => Mat2::c4(),
            GeneratorCase::Order346 => Mat2::c6(),
        }
    }

    pub fn k(self) -> u32 {
        match self {
            GeneratorCase::Order4 => 2,
            GeneratorCase::Order346 => 3,
        }
    }

    pub fn generators(self) -> (BiPoly, BiPoly) {
        match self {
            GeneratorCase::Order4 => (n4(), BiPoly::monomial(1, 2, 2)),
            GeneratorCase::Order346 => (n3(), sixth_power_sum()),
        }
    }

    /// The Jacobian as usually displayed for this pair.
    pub fn reference_jacobian(self) -> BiPoly {
        match self {
            GeneratorCase::Order4 => BiPoly::from_terms([(2, 3, 1), (-2, 1, 3)]),
            GeneratorCase::Order346 => {
                let a = BiPoly::from_terms([(2, 1, 0), (-1, 0, 1)]);
                let b = BiPoly::from_terms([(2, 0, 1), (-1, 1, 0)]);
                let c = BiPoly::from_terms([(1, 0, 4), (-9, 1, 3), (9, 3, 1), (-1, 4, 0)]);
                (&(&a * &b) * &c).scale(&BigInt::from(6))
            }
        }
    }

    /// A factor the Jacobian must contain.
    pub fn reference_factor(self) -> BiPoly {
        match self {
            GeneratorCase::Order4 => BiPoly::from_terms([(2, 1, 1)]),
            GeneratorCase::Order346 => {
                let a = BiPoly::from_terms([(2, 1, 0), (-1, 0, 1)]);
                let b = BiPoly::from_terms([(2, 0, 1), (-1, 1, 0)]);
                (&a * &b).scale(&BigInt::from(6))
            }
        }
    }
}

impl fmt::Display for GeneratorCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorCase::Order346 => "order34_6",
            GeneratorCase::Order4 => "order4",
        })
    }
}

impl FromStr for GeneratorCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "order34_6" | "order346" | "6" | "3" => Ok(GeneratorCase::Order346),
            "order4" | "4" => Ok(GeneratorCase::Order4),
            _ => Err(Error::Parse(format!("unknown generator case `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorReport {
    pub case: GeneratorCase,
    pub k: u32,
    pub f1: BiPoly,
    pub f2: BiPoly,
    pub group_order: usize,
    /// Group elements failing invariance, rendered with the offending polynomial.
    pub invariance_failures: Vec<String>,
    pub jacobian: BiPoly,
    pub jacobian_nonzero: bool,
    pub degrees: (u32, u32),
    pub degree_product: u32,
    pub expected_degree_product: u32,
    pub reference_jacobian: BiPoly,
    /// `computed / reference` when the two are proportional.
    pub constant: Option<String>,
    pub reference_factor: BiPoly,
    pub divisible_by_reference_factor: bool,
}

impl GeneratorReport {
    pub fn invariant(&self) -> bool {
        self.invariance_failures.is_empty()
    }

    pub fn degrees_ok(&self) -> bool {
        self.degree_product == self.expected_degree_product
    }

    pub fn matches_reference(&self) -> bool {
        self.constant.is_some()
    }

    pub fn passed(&self) -> bool {
        self.invariant() && self.jacobian_nonzero && self.degrees_ok() && self.matches_reference()
    }
}

impl fmt::Display for GeneratorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        writeln!(f, "generators {} (k = {})", self.case, self.k)?;
        writeln!(f, "  F1 = {}", self.f1)?;
        writeln!(f, "  F2 = {}", self.f2)?;
        writeln!(
            f,
            "  invariance under group of order {}: {}",
            self.group_order,
            mark(self.invariant())
        )?;
        for fail in &self.invariance_failures {
            writeln!(f, "    {fail}")?;
        }
        writeln!(f, "  J = {}", self.jacobian)?;
        writeln!(f, "  J nonzero: {}", mark(self.jacobian_nonzero))?;
        writeln!(
            f,
            "  degrees {} * {} = {} (want {}): {}",
            self.degrees.0,
            self.degrees.1,
            self.degree_product,
            self.expected_degree_product,
            mark(self.degrees_ok())
        )?;
        writeln!(f, "  reference J = {}", self.reference_jacobian)?;
        match &self.constant {
            Some(c) => writeln!(f, "  J = ({c}) * reference: ok")?,
            None => writeln!(f, "  J not proportional to reference: FAIL")?,
        }
        write!(
            f,
            "  divisible by {}: {}",
            self.reference_factor,
            mark(self.divisible_by_reference_factor)
        )
    }
}

pub fn verify_generators(case: GeneratorCase) -> Result<GeneratorReport> {
    let (f1, f2) = case.generators();
    let group = extended_group(&case.rotation())?;
    let mut failures = Vec::new();
    for (name, poly) in [("F1", &f1), ("F2", &f2)] {
        for m in invariance_failures(poly, &group) {
            failures.push(format!(
                "{name} = {poly} moved by {m:?} to {}",
                poly.substitute_linear(&m)
            ));
        }
    }
    let j = jacobian(&f1, &f2);
    let d1 = f1.total_degree().unwrap_or(0);
    let d2 = f2.total_degree().unwrap_or(0);
    let reference = case.reference_jacobian();
    let constant = proportionality_constant(&j, &reference).map(|c| c.to_string());
    let factor = case.reference_factor();
    let divisible = !j.is_zero() && j.div_exact(&factor).is_some();
    Ok(GeneratorReport {
        case,
        k: case.k(),
        group_order: group.order(),
        invariance_failures: failures,
        jacobian_nonzero: !j.is_zero(),
        jacobian: j,
        degrees: (d1, d2),
        degree_product: d1 * d2,
        expected_degree_product: 4 * case.k(),
        reference_jacobian: reference,
        constant,
        reference_factor: factor,
        divisible_by_reference_factor: divisible,
        f1,
        f2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormHeadReport {
    pub case: CanonicalC,
    pub norm: &'static str,
    pub k: u32,
    pub head: BiPoly,
    /// `head / N^k`, when that is an integer constant.
    #[serde(with = "opt_bigint")]
    pub constant: Option<BigInt>,
    /// `f - head` written as a polynomial in `N`.
    pub remainder: Option<UniPoly>,
    /// Head constant as usually quoted.
    pub reference: &'static str,
}

impl NormHeadReport {
    pub fn passed(&self) -> bool {
        self.constant.as_ref().is_some_and(|c| c.abs().is_one()) && self.remainder.is_some()
    }
}

impl fmt::Display for NormHeadReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: degree {} head = ", self.case, 2 * self.k)?;
        match &self.constant {
            Some(c) => write!(f, "{c} * {}^{}", self.norm, self.k)?,
            None => write!(f, "{} (not a multiple of {}^{})", self.head, self.norm, self.k)?,
        }
        match &self.remainder {
            Some(r) => write!(f, "; lower part {}", r.display_with(self.norm)),
            None => write!(f, "; lower part not a polynomial in {}", self.norm),
        }
    }
}

pub fn norm_head_check(c: CanonicalC) -> Result<NormHeadReport> {
    let f = trace_polynomial(c);
    let norm = c.norm();
    let d = f
        .total_degree()
        .ok_or_else(|| Error::InvalidArgument("zero trace polynomial".into()))?;
    if d % 2 == 1 {
        return Err(Error::NotExpressible);
    }
    let k = d / 2;
    let head = f.homogeneous_part(d);
    let constant = head
        .div_exact(&norm.pow(k))
        .filter(|q| q.total_degree() == Some(0))
        .map(|q| q.coeff(0, 0));
    let remainder = express_in_norm(&(&f - &head), &norm).ok();
    let reference = match c {
        CanonicalC::C4 => "-2*N4^2",
        CanonicalC::C3 | CanonicalC::C6 => "±N3^3",
    };
    Ok(NormHeadReport {
        case: c,
        norm: c.norm_name(),
        k,
        head,
        constant,
        remainder,
        reference,
    })
}

mod opt_bigint {
    use num_bigint::BigInt;
    use serde::{Serialize, Serializer};

    use crate::json::JsonInt;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|x| JsonInt(x.clone())).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutant_of_c4() {
        let cm = commutant(&Mat2::c4(), 3).unwrap();
        let want: BTreeSet<Mat2> = [
            Mat2::identity(),
            Mat2::neg_identity(),
            Mat2::c4(),
            -Mat2::c4(),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<Mat2> = cm.strict.elements().iter().cloned().collect();
        assert_eq!(got, want);
        assert_eq!(cm.strict.shape(), GroupShape::Cyclic(4));
        assert_eq!(cm.extended.order(), 8);
        assert_eq!(cm.extended.shape(), GroupShape::Dihedral(8));
    }

    #[test]
    fn commutant_members_commute() {
        for c in CanonicalC::ALL {
            let m = c.matrix();
            let cm = commutant(&m, 2).unwrap();
            for g in cm.strict.elements() {
                assert_eq!(g * &m, &m * g);
                assert!(g.det().abs().is_one());
            }
            assert!(cm.strict.is_group());
            assert!(cm.extended.is_group());
        }
    }

    #[test]
    fn extended_orders() {
        assert_eq!(extended_group(&Mat2::c4()).unwrap().order(), 8);
        assert_eq!(extended_group(&Mat2::c6()).unwrap().order(), 12);
        assert_eq!(extended_group(&Mat2::c3()).unwrap().order(), 12);
        assert_eq!(
            extended_group(&Mat2::c6()).unwrap().shape(),
            GroupShape::Dihedral(12)
        );
    }

    #[test]
    fn trace_polynomials_are_invariant() {
        for c in CanonicalC::ALL {
            let g = extended_group(&c.matrix()).unwrap();
            assert!(check_invariance(&trace_polynomial(c), &g), "{c}");
        }
        let g = extended_group(&Mat2::c4()).unwrap();
        assert!(!check_invariance(&BiPoly::x(), &g));
    }

    #[test]
    fn order4_generators() {
        let r = verify_generators(GeneratorCase::Order4).unwrap();
        assert!(r.invariant());
        assert_eq!(r.jacobian, BiPoly::from_terms([(4, 3, 1), (-4, 1, 3)]));
        assert_eq!(r.degree_product, 8);
        assert_eq!(r.constant.as_deref(), Some("2"));
        assert!(r.passed());
    }

    #[test]
    fn order346_generators() {
        let r = verify_generators(GeneratorCase::Order346).unwrap();
        assert!(r.invariant());
        assert!(r.jacobian_nonzero);
        assert_eq!(r.degree_product, 12);
        assert!(r.divisible_by_reference_factor);
        let x = BiPoly::x();
        let y = BiPoly::y();
        let want = [
            x.clone(),
            y.clone(),
            &x - &y.scale(&BigInt::from(2)),
            &x - &y,
            &x + &y,
            &x.scale(&BigInt::from(2)) - &y,
        ]
        .iter()
        .fold(BiPoly::constant(-54), |acc, p| &acc * p);
        assert_eq!(r.jacobian, want);
        assert!(r.constant.is_none());
    }

    #[test]
    fn dependent_pair_has_zero_jacobian() {
        for case in GeneratorCase::ALL {
            let (f1, _) = case.generators();
            assert!(jacobian(&f1, &f1.pow(2)).is_zero());
        }
    }

    #[test]
    fn norm_heads() {
        let want = [(CanonicalC::C4, -1), (CanonicalC::C3, -1), (CanonicalC::C6, 1)];
        for (c, k) in want {
            let r = norm_head_check(c).unwrap();
            assert_eq!(r.constant, Some(BigInt::from(k)), "{c}");
            assert!(r.passed());
        }
        let r = norm_head_check(CanonicalC::C4).unwrap();
        assert_eq!(r.remainder, Some(UniPoly::constant(2)));
    }

    #[test]
    fn proportionality() {
        let a = BiPoly::from_terms([(4, 3, 1), (-4, 1, 3)]);
        let b = BiPoly::from_terms([(-6, 3, 1), (6, 1, 3)]);
        assert_eq!(
            proportionality_constant(&a, &b),
            Some(BigRational::new((-2).into(), 3.into()))
        );
        let c = BiPoly::from_terms([(1, 3, 1)]);
        assert_eq!(proportionality_constant(&a, &c), None);
    }
}
