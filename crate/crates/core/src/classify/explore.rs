//! Examples with fixing orders other than `n`: the eta-12 tuple, the
//! half-rotation block, and two-vector trace functions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use super::CanonicalC;
use crate::error::{Error, Result};
use crate::hurwitz::{
    decide_sim_conjugacy, eta_power, solve_shift_conjugator, ConjugacyWitness, Decoration,
    Factorization,
};
use crate::sl2z::{order_of, primitive_vectors, transvection, transvection_raw, Mat2, MatOrder, PrimVec};

fn alpha() -> PrimVec {
    PrimVec::new(1, 0).expect("primitive")
}

fn beta() -> PrimVec {
    PrimVec::new(0, 1).expect("primitive")
}

/// `(T_a, (T_b T_a)^11 as 22 letters, T_b)` with `a = (1, 0)`, `b = (0, 1)`.
pub fn build_eta12_example() -> Factorization {
    let ta = transvection(&alpha());
    let tb = transvection(&beta());
    let mut entries = vec![ta.clone()];
    for _ in 0..11 {
        entries.push(tb.clone());
        entries.push(ta.clone());
    }
    entries.push(tb);
    Factorization::decorated(entries, Decoration::Eta).expect("(T_a T_b)^12 = Id")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaFixingReport {
    pub length: usize,
    pub middle_letters: usize,
    pub product_is_identity: bool,
    /// Powers `s` in `1..=middle_letters` with `eta^s(F)` conjugate to `F`.
    pub fixing_powers: Vec<u64>,
    pub minimal_power: Option<u64>,
    pub queried_power: u64,
    pub fixed_by_queried_power: bool,
    /// Order of the shift by `queried_power` in `Z/mZ`, `m` the number of middle letters.
    pub induced_order: u64,
}

/// Fixing powers of `eta` on a decorated tuple, and the order induced by `eta^query`.
pub fn eta_fixing_report(f: &Factorization, query: u64) -> Result<EtaFixingReport> {
    if f.decoration() != Decoration::Eta {
        return Err(Error::Shape("expected an eta-decorated tuple".into()));
    }
    let m = f.len() - 2;
    let mut fixing_powers = Vec::new();
    for s in 1..=m as u64 {
        let fixed = match eta_power(f, s) {
            Ok(g) => decide_sim_conjugacy(f, &g)?.is_found(),
            Err(Error::ProductNotIdentity) => false,
            Err(e) => return Err(e),
        };
        if fixed {
            fixing_powers.push(s);
        }
    }
    let fixed_by_queried_power = match eta_power(f, query) {
        Ok(g) => decide_sim_conjugacy(f, &g)?.is_found(),
        Err(Error::ProductNotIdentity) => false,
        Err(e) => return Err(e),
    };
    let m64 = m as u64;
    Ok(EtaFixingReport {
        length: f.len(),
        middle_letters: m,
        product_is_identity: f.product().is_identity(),
        minimal_power: fixing_powers.first().copied(),
        fixing_powers,
        queried_power: query,
        fixed_by_queried_power,
        induced_order: if m64 == 0 { 1 } else { m64 / query.gcd(&m64) },
    })
}

/// Primitive vectors adjacent to both `(1, 0)` and `(0, 1)` in the Farey graph.
pub fn farey_common_neighbours(bound: i64) -> Vec<PrimVec> {
    let (a, b) = (alpha(), beta());
    let mut out: Vec<PrimVec> = primitive_vectors(bound)
        .into_iter()
        .map(|v| v.normalized())
        .filter(|v| a.pairing(v).abs().is_one() && b.pairing(v).abs().is_one())
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCandidate {
    pub gamma: PrimVec,
    pub delta: PrimVec,
    pub block: Mat2,
    pub block_order: MatOrder,
    pub closes_up: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftResult {
    pub shift: i64,
    pub witness: ConjugacyWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfRotationReport {
    pub n: i64,
    pub candidates: Vec<BlockCandidate>,
    pub gamma: PrimVec,
    pub delta: PrimVec,
    pub tuple: Factorization,
    pub shifts: Vec<ShiftResult>,
    pub minimal_shift: Option<i64>,
    /// `n / minimal_shift`.
    pub induced_order: Option<i64>,
}

/// `T_a T_g T_b T_b T_d T_a`.
pub fn half_rotation_block(gamma: &PrimVec, delta: &PrimVec) -> Mat2 {
    let (ta, tb) = (transvection(&alpha()), transvection(&beta()));
    [ta.clone(), transvection(gamma), tb.clone(), tb, transvection(delta), ta]
        .iter()
        .fold(Mat2::identity(), |acc, m| &acc * m)
}

/// Searches Farey common neighbours `g, d` of `(1, 0)`, `(0, 1)` for which the
/// block `(T_a T_g T_b)(T_b T_d T_a)` repeated `n/6` times multiplies to `Id`,
/// then reports which shifts of the resulting tuple are conjugations.
pub fn explore_half_rotation(n: i64) -> Result<HalfRotationReport> {
    if n <= 0 || n % 12 != 0 {
        return Err(Error::InvalidArgument(format!(
            "n must be a positive multiple of 12, got {n}"
        )));
    }
    let reps = n / 6;
    let neighbours = farey_common_neighbours(2);
    let mut candidates = Vec::new();
    for g in &neighbours {
        for d in &neighbours {
            let block = half_rotation_block(g, d);
            candidates.push(BlockCandidate {
                gamma: g.clone(),
                delta: d.clone(),
                block_order: order_of(&block)?,
                closes_up: block.pow(reps)?.is_identity(),
                block,
            });
        }
    }
    let chosen = candidates
        .iter()
        .find(|c| c.closes_up)
        .ok_or_else(|| Error::NoAssignmentFound(format!("no Farey assignment closes up for n = {n}")))?;
    let letters = [
        alpha(),
        chosen.gamma.clone(),
        beta(),
        beta(),
        chosen.delta.clone(),
        alpha(),
    ];
    let vectors: Vec<PrimVec> = (0..n as usize).map(|i| letters[i % 6].clone()).collect();
    let tuple = Factorization::from_vectors(&vectors)?;
    let mut shifts = Vec::new();
    for s in 1..n {
        shifts.push(ShiftResult {
            shift: s,
            witness: solve_shift_conjugator(&tuple, s)?,
        });
    }
    let minimal_shift = shifts.iter().find(|r| r.witness.is_found()).map(|r| r.shift);
    Ok(HalfRotationReport {
        n,
        gamma: chosen.gamma.clone(),
        delta: chosen.delta.clone(),
        candidates,
        tuple,
        shifts,
        induced_order: minimal_shift.map(|s| n / s),
        minimal_shift,
    })
}

/// `prod_{i<k} T_{C^i v} T_{C^i w}` for arbitrary integer vectors.
fn two_vector_product(c: CanonicalC, v: (BigInt, BigInt), w: (BigInt, BigInt)) -> Mat2 {
    let cm = c.matrix();
    let (mut v, mut w) = (v, w);
    let mut acc = Mat2::identity();
    for _ in 0..c.period() {
        acc = &(&acc * &transvection_raw(&v.0, &v.1)) * &transvection_raw(&w.0, &w.1);
        v = cm.apply_raw(&v.0, &v.1);
        w = cm.apply_raw(&w.0, &w.1);
    }
    acc
}

/// `tr(T_v T_w T_{Cv} T_{Cw} ...)` over one period of `C`.
pub fn two_vector_trace(c: CanonicalC, v: &PrimVec, w: &PrimVec) -> BigInt {
    two_vector_trace_raw(c, [v.p().clone(), v.q().clone(), w.p().clone(), w.q().clone()])
}

/// As [`two_vector_trace`], with the transvection formula applied to any integer vectors.
pub fn two_vector_trace_raw(c: CanonicalC, coords: [BigInt; 4]) -> BigInt {
    let [p1, q1, p2, q2] = coords;
    two_vector_product(c, (p1, q1), (p2, q2)).trace()
}

/// One of the four coordinates `(p1, q1, p2, q2)` of a vector pair `v, w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Coord {
    P1,
    Q1,
    P2,
    Q2,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::P1, Coord::Q1, Coord::P2, Coord::Q2];

    fn index(self) -> usize {
        self as usize
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p1" | "v1" => Ok(Coord::P1),
            "q1" | "v2" => Ok(Coord::Q1),
            "p2" | "w1" => Ok(Coord::P2),
            "q2" | "w2" => Ok(Coord::Q2),
            other => Err(Error::Parse(format!(
                "unknown coordinate {other:?}, expected p1, q1, p2, q2 (or v1, v2, w1, w2)"
            ))),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Coord::P1 => "p1",
            Coord::Q1 => "q1",
            Coord::P2 => "p2",
            Coord::Q2 => "q2",
        };
        f.write_str(s)
    }
}

/// Parses `w2=0` style assignments.
pub fn parse_fix(text: &str) -> Result<(Coord, i64)> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected coord=value, got {text:?}")))?;
    let value: i64 = value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value in {text:?}")))?;
    Ok((name.parse()?, value))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceGrid {
    pub case: CanonicalC,
    pub fixed: Vec<(Coord, i64)>,
    pub range: i64,
    /// `[p1, q1, p2, q2]` and the trace `g` at that point.
    #[serde(skip)]
    pub rows: Vec<([i64; 4], BigInt)>,
}

pub const SLICE_CSV_HEADER: &str = "p1,q1,p2,q2,g";

impl SliceGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SLICE_CSV_HEADER);
        out.push('\n');
        for (c, g) in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", c[0], c[1], c[2], c[3], g));
        }
        out
    }

    /// Grid points where `g` changes sign against a neighbour along some free axis.
    pub fn sign_changes(&self) -> usize {
        use std::collections::HashMap;
        let index: HashMap<[i64; 4], &BigInt> = self.rows.iter().map(|(c, g)| (*c, g)).collect();
        let free: Vec<usize> = Coord::ALL
            .iter()
            .filter(|c| !self.fixed.iter().any(|(f, _)| f == *c))
            .map(|c| c.index())
            .collect();
        self.rows
            .iter()
            .filter(|(c, g)| {
                free.iter().any(|&axis| {
                    let mut next = *c;
                    next[axis] += 1;
                    index
                        .get(&next)
                        .is_some_and(|h| g.sign() != h.sign())
                })
            })
            .count()
    }
}

/// Evaluates the two-vector trace over `[-range, range]` in every free coordinate.
pub fn slice_grid(c: CanonicalC, fixed: &[(Coord, i64)], range: i64) -> Result<SliceGrid> {
    if range < 0 {
        return Err(Error::InvalidArgument("range must be nonnegative".into()));
    }
    let mut seen = Vec::new();
    for (coord, _) in fixed {
        if seen.contains(coord) {
            return Err(Error::InvalidArgument(format!("{coord} fixed twice")));
        }
        seen.push(*coord);
    }
    if fixed.is_empty() || fixed.len() > 2 {
        return Err(Error::InvalidArgument(
            "fix one or two coordinates".into(),
        ));
    }
    let free: Vec<Coord> = Coord::ALL.iter().copied().filter(|c| !seen.contains(c)).collect();
    let mut rows = Vec::new();
    let side = (2 * range + 1) as usize;
    let total = side.pow(free.len() as u32);
    for idx in 0..total {
        let mut point = [0i64; 4];
        for (coord, value) in fixed {
            point[coord.index()] = *value;
        }
        let mut rest = idx;
        for coord in free.iter().rev() {
            point[coord.index()] = (rest % side) as i64 - range;
            rest /= side;
        }
        let g = two_vector_trace_raw(c, point.map(BigInt::from));
        rows.push((point, g));
    }
    Ok(SliceGrid {
        case: c,
        fixed: fixed.to_vec(),
        range,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2z::conjugate;

    fn v(p: i64, q: i64) -> PrimVec {
        PrimVec::new(p, q).unwrap()
    }

    #[test]
    fn eta12() {
        let f = build_eta12_example();
        assert_eq!(f.len(), 24);
        assert!(f.product().is_identity());
        let r = eta_fixing_report(&f, 12).unwrap();
        assert_eq!(r.fixing_powers, vec![6, 12, 18]);
        assert_eq!(r.minimal_power, Some(6));
        assert!(r.fixed_by_queried_power);
        assert_eq!(r.induced_order, 11);
        // (T_b T_a)^3 = -Id is why six steps already close up
        let ba = &transvection(&beta()) * &transvection(&alpha());
        assert!(ba.pow(3).unwrap().is_neg_identity());
    }

    #[test]
    fn half_rotation() {
        assert_eq!(farey_common_neighbours(3), vec![v(1, -1), v(1, 1)]);
        let r = explore_half_rotation(12).unwrap();
        assert_eq!((r.gamma.clone(), r.delta.clone()), (v(1, 1), v(1, -1)));
        assert!(half_rotation_block(&r.gamma, &r.delta).is_neg_identity());
        assert_eq!(r.shifts[0].witness, ConjugacyWitness::NotConjugate);
        assert!(r.shifts[2].witness.is_found());
        assert_eq!(r.minimal_shift, Some(3));
        assert_eq!(r.induced_order, Some(4));
        assert!(explore_half_rotation(18).is_err());
    }

    #[test]
    fn two_vector_examples() {
        assert_eq!(two_vector_trace(CanonicalC::C4, &v(1, 0), &v(1, 0)), BigInt::from(-2));
        // T_a T_b T_b T_a, not (T_a T_b)^2
        assert_eq!(two_vector_trace(CanonicalC::C4, &v(1, 0), &v(0, 1)), BigInt::from(-2));
        for c in CanonicalC::ALL {
            let cm = c.matrix();
            for a in primitive_vectors(2) {
                for b in primitive_vectors(2) {
                    let t = two_vector_trace(c, &a, &b);
                    assert_eq!(two_vector_trace(c, &cm.apply(&a), &cm.apply(&b)), t);
                    let direct = two_vector_product(
                        c,
                        (a.p().clone(), a.q().clone()),
                        (b.p().clone(), b.q().clone()),
                    );
                    assert_eq!(direct.trace(), t);
                }
            }
        }
        assert_eq!(conjugate(&Mat2::c4(), &transvection(&v(1, 0))).unwrap(), transvection(&v(0, 1)));
    }

    #[test]
    fn slices() {
        let grid = slice_grid(CanonicalC::C6, &[parse_fix("w2=0").unwrap()], 2).unwrap();
        assert_eq!(grid.rows.len(), 125);
        assert!(grid.to_csv().starts_with("p1,q1,p2,q2,g\n-2,-2,-2,0,"));
        assert!(grid.sign_changes() > 0);
        let two = slice_grid(
            CanonicalC::C4,
            &[(Coord::Q2, -4), (Coord::P1, 1)],
            1,
        )
        .unwrap();
        assert_eq!(two.rows.len(), 9);
        assert!(slice_grid(CanonicalC::C4, &[], 1).is_err());
        assert!(slice_grid(CanonicalC::C4, &[(Coord::P1, 0), (Coord::P1, 1)], 1).is_err());
        assert!(parse_fix("x=1").is_err());
        assert!(parse_fix("w2").is_err());
    }
}
