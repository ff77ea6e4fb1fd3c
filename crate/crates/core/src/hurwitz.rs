//! Factorization tuples and the actions on them: Hurwitz moves, the cyclic
//! rotation, the Garside half-twist and the boundary-decorated `tau`/`eta`
//! actions, together with simultaneous conjugacy decisions.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sl2z::{
    completion, conjugate_unchecked, parabolic_axis, sl2_box, solve_vector_transporter,
    transvection, Mat2, PrimVec,
};

/// Which entries of a tuple are boundary letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoration {
    /// Plain tuple `(X_1, ..., X_n)`.
    #[default]
    None,
    /// `(L, X_1, ..., X_{n-1})`: the first entry is the boundary letter.
    Tau,
    /// `(M_0, X_1, ..., X_{n-2}, M_inf)`: first and last entries are boundary letters.
    Eta,
}

/// An ordered tuple of `SL2(Z)` matrices whose left-to-right product is `Id`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFactorization")]
pub struct Factorization {
    decoration: Decoration,
    entries: Vec<Mat2>,
}

#[derive(Deserialize)]
struct RawFactorization {
    #[serde(default)]
    decoration: Decoration,
    entries: Vec<Mat2>,
}

impl TryFrom<RawFactorization> for Factorization {
    type Error = Error;

    fn try_from(raw: RawFactorization) -> Result<Self> {
        Factorization::decorated(raw.entries, raw.decoration)
    }
}

impl Factorization {
    pub fn new(entries: Vec<Mat2>) -> Result<Self> {
        Factorization::decorated(entries, Decoration::None)
    }

    pub fn decorated(entries: Vec<Mat2>, decoration: Decoration) -> Result<Self> {
        let min_len = match decoration {
            Decoration::None => 0,
            Decoration::Tau => 1,
            Decoration::Eta => 2,
        };
        if entries.len() < min_len {
            return Err(Error::Shape(format!(
                "{decoration:?} tuple needs at least {min_len} entries, got {}",
                entries.len()
            )));
        }
        for m in &entries {
            m.require_sl2()?;
        }
        let f = Factorization { decoration, entries };
        if !f.product().is_identity() {
            return Err(Error::ProductNotIdentity);
        }
        Ok(f)
    }

    /// Tuple of transvections `T_v` for the given vectors.
    pub fn from_vectors(vectors: &[PrimVec]) -> Result<Self> {
        Factorization::new(vectors.iter().map(transvection).collect())
    }

    /// Wraps entries produced by an action that is known to keep the invariants.
    fn from_action(entries: Vec<Mat2>, decoration: Decoration) -> Self {
        let f = Factorization { decoration, entries };
        debug_assert!(f.entries.iter().all(|m| m.det().is_one()));
        debug_assert!(f.product().is_identity());
        f
    }

    pub fn entries(&self) -> &[Mat2] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Mat2> {
        self.entries
    }

    pub fn decoration(&self) -> Decoration {
        self.decoration
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn product(&self) -> Mat2 {
        tuple_product(&self.entries)
    }

    /// `D X_i D^{-1}` for every entry.
    pub fn conjugated_by(&self, d: &Mat2) -> Result<Factorization> {
        d.require_sl2()?;
        Ok(Factorization::from_action(
            self.entries.iter().map(|m| conjugate_unchecked(d, m)).collect(),
            self.decoration,
        ))
    }

    fn require_undecorated(&self) -> Result<()> {
        match self.decoration {
            Decoration::None => Ok(()),
            other => Err(Error::Shape(format!(
                "expected an undecorated tuple, got decoration {other:?}"
            ))),
        }
    }

    fn require_decoration(&self, expected: Decoration) -> Result<()> {
        if self.decoration == expected {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "expected decoration {expected:?}, got {:?}",
                self.decoration
            )))
        }
    }
}

impl fmt::Debug for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Factorization")
            .field("decoration", &self.decoration)
            .field("entries", &self.entries)
            .finish()
    }
}

pub fn tuple_product(entries: &[Mat2]) -> Mat2 {
    entries
        .iter()
        .fold(Mat2::identity(), |acc, m| &acc * m)
}

fn require_realizable(n: i64) -> Result<usize> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("n must be positive, got {n}")));
    }
    if n % 12 != 0 {
        return Err(Error::NotRealizable { n });
    }
    Ok(n as usize)
}

fn periodic_tuple(n: i64, vectors: &[(i64, i64)]) -> Result<Factorization> {
    let len = require_realizable(n)?;
    let letters: Vec<Mat2> = vectors
        .iter()
        .map(|&(p, q)| transvection(&PrimVec::new(p, q).expect("primitive")))
        .collect();
    let entries = (0..len).map(|i| letters[i % letters.len()].clone()).collect();
    Factorization::new(entries)
}

/// `(Y_1, Y_2, Y_1, Y_2, ...)` with `Y_1 = T_(1,0)`, `Y_2 = T_(0,1)`.
pub fn standard_tuple(n: i64) -> Result<Factorization> {
    periodic_tuple(n, &[(1, 0), (0, 1)])
}

/// `(Z_1, Z_2, Z_3, ...)` with `Z_1 = T_(1,0)`, `Z_2 = T_(1,1)`, `Z_3 = T_(0,1)`.
pub fn period3_tuple(n: i64) -> Result<Factorization> {
    periodic_tuple(n, &[(1, 0), (1, 1), (0, 1)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// A single letter `s_i` or `s_i'` of a braid word (1-based index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub index: usize,
    pub direction: Direction,
}

impl Move {
    pub fn forward(index: usize) -> Self {
        Move {
            index,
            direction: Direction::Forward,
        }
    }

    pub fn backward(index: usize) -> Self {
        Move {
            index,
            direction: Direction::Backward,
        }
    }

    pub fn inverse(self) -> Self {
        Move {
            index: self.index,
            direction: match self.direction {
                Direction::Forward => Direction::Backward,
                Direction::Backward => Direction::Forward,
            },
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            Direction::Forward => write!(f, "s{}", self.index),
            Direction::Backward => write!(f, "s{}'", self.index),
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, direction) = match s.strip_suffix('\'') {
            Some(body) => (body, Direction::Backward),
            None => (s, Direction::Forward),
        };
        let digits = body
            .strip_prefix('s')
            .ok_or_else(|| Error::Parse(format!("move {s:?} must look like s3 or s3'")))?;
        let index: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad move index in {s:?}")))?;
        if index == 0 {
            return Err(Error::Parse(format!("move indices start at 1: {s:?}")));
        }
        Ok(Move { index, direction })
    }
}

/// Parses a comma-separated word such as `s3,s1',s2`.
pub fn parse_word(text: &str) -> Result<Vec<Move>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(str::parse).collect()
}

pub fn format_word(word: &[Move]) -> String {
    word.iter().map(Move::to_string).collect::<Vec<_>>().join(",")
}

/// Applies one move in place to a raw tuple of invertible matrices.
///
/// Forward: `(A, B) -> (A B A^{-1}, A)`; backward: `(A, B) -> (B, B^{-1} A B)`.
pub fn hurwitz_move_in_place(entries: &mut [Mat2], mv: Move) -> Result<()> {
    let len = entries.len();
    if mv.index == 0 || mv.index >= len {
        return Err(Error::IndexOutOfRange {
            index: mv.index,
            len,
        });
    }
    let i = mv.index - 1;
    let a = entries[i].clone();
    let b = entries[i + 1].clone();
    match mv.direction {
        Direction::Forward => {
            entries[i] = &(&a * &b) * &a.inverse()?;
            entries[i + 1] = a;
        }
        Direction::Backward => {
            entries[i + 1] = &(&b.inverse()? * &a) * &b;
            entries[i] = b;
        }
    }
    Ok(())
}

pub fn hurwitz_move(f: &Factorization, index: usize, direction: Direction) -> Result<Factorization> {
    apply_word(f, &[Move { index, direction }])
}

/// Applies the letters of `word` from left to right.
pub fn apply_word(f: &Factorization, word: &[Move]) -> Result<Factorization> {
    let mut entries = f.entries.clone();
    for &mv in word {
        hurwitz_move_in_place(&mut entries, mv)?;
    }
    Ok(Factorization::from_action(entries, f.decoration))
}

/// Cyclic shift `(X_1, ..., X_n) -> (X_2, ..., X_n, X_1)`.
pub fn rotate(f: &Factorization) -> Result<Factorization> {
    rotate_by(f, 1)
}

/// `s`-fold cyclic shift; `s` may be any integer.
pub fn rotate_by(f: &Factorization, s: i64) -> Result<Factorization> {
    f.require_undecorated()?;
    let mut entries = f.entries.clone();
    if !entries.is_empty() {
        let shift = s.mod_floor(&(entries.len() as i64)) as usize;
        entries.rotate_left(shift);
    }
    Ok(Factorization::from_action(entries, Decoration::None))
}

/// `(s_1 s_2 ... s_{n-1})(s_1 ... s_{n-2}) ... (s_1 s_2) s_1`.
pub fn garside_word(n: usize) -> Vec<Move> {
    let mut word = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for top in (1..n).rev() {
        word.extend((1..=top).map(Move::forward));
    }
    word
}

pub fn garside_act(f: &Factorization) -> Result<Factorization> {
    f.require_undecorated()?;
    if f.len() < 2 {
        return Err(Error::Shape("the Garside twist needs at least 2 entries".into()));
    }
    apply_word(f, &garside_word(f.len()))
}

/// The same braid written as `s_1 (s_2 s_1) (s_3 s_2 s_1) ... (s_{n-1} ... s_1)`.
pub fn garside_act_alternate(f: &Factorization) -> Result<Factorization> {
    f.require_undecorated()?;
    let n = f.len();
    if n < 2 {
        return Err(Error::Shape("the Garside twist needs at least 2 entries".into()));
    }
    let mut entries = f.entries.clone();
    for top in 1..n {
        for j in (1..=top).rev() {
            hurwitz_move_in_place(&mut entries, Move::forward(j))?;
        }
    }
    Ok(Factorization::from_action(entries, Decoration::None))
}

/// `(L, X_1, ..., X_{n-1}) -> (X_1^{-1} L X_1, X_2, ..., X_{n-1}, X_1)`.
pub fn tau_act(f: &Factorization) -> Result<Factorization> {
    f.require_decoration(Decoration::Tau)?;
    let e = &f.entries;
    if e.len() < 2 {
        return Ok(f.clone());
    }
    let x1 = &e[1];
    let mut out = Vec::with_capacity(e.len());
    out.push(&(&x1.inverse()? * &e[0]) * x1);
    out.extend(e[2..].iter().cloned());
    out.push(x1.clone());
    Ok(Factorization::from_action(out, Decoration::Tau))
}

/// `s`-fold application of the boundary rules on `(M_0, X_1, ..., X_m, M_inf)`:
/// `M_0` is fixed, the middle letters shift cyclically by `s`, and `M_inf`
/// becomes `P^{-1} M_inf P` with `P = X_1 ... X_s` (indices mod `m`).
///
/// The rules are applied symbolically; only the final tuple is required to
/// have product `Id`, otherwise `ProductNotIdentity` is returned.
pub fn eta_power(f: &Factorization, s: u64) -> Result<Factorization> {
    f.require_decoration(Decoration::Eta)?;
    let e = &f.entries;
    let m = e.len() - 2;
    if m == 0 || s == 0 {
        return Ok(f.clone());
    }
    let middle = &e[1..=m];
    let p = (0..s as usize).fold(Mat2::identity(), |acc, k| &acc * &middle[k % m]);
    let mut out = Vec::with_capacity(e.len());
    out.push(e[0].clone());
    let shift = (s % m as u64) as usize;
    out.extend(middle[shift..].iter().cloned());
    out.extend(middle[..shift].iter().cloned());
    out.push(&(&p.adjugate() * &e[m + 1]) * &p);
    if !tuple_product(&out).is_identity() {
        return Err(Error::ProductNotIdentity);
    }
    Ok(Factorization::from_action(out, Decoration::Eta))
}

pub fn eta_act(f: &Factorization) -> Result<Factorization> {
    eta_power(f, 1)
}

/// Result of a simultaneous conjugacy decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConjugacyWitness {
    /// `D A_i D^{-1} = B_i` for all `i`.
    Found { conjugator: Mat2 },
    /// Proven non-conjugate.
    NotConjugate,
    /// The bounded search found nothing; the answer is unknown.
    Inconclusive { bound: i64 },
}

impl ConjugacyWitness {
    pub fn conjugator(&self) -> Option<&Mat2> {
        match self {
            ConjugacyWitness::Found { conjugator } => Some(conjugator),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.conjugator().is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyConfig {
    /// Entry bound for the brute-force fallback.
    pub brute_force_bound: i64,
}

impl Default for ConjugacyConfig {
    fn default() -> Self {
        ConjugacyConfig {
            brute_force_bound: 6,
        }
    }
}

pub fn decide_sim_conjugacy(a: &Factorization, b: &Factorization) -> Result<ConjugacyWitness> {
    decide_tuple_conjugacy(a.entries(), b.entries(), &ConjugacyConfig::default())
}

pub fn decide_sim_conjugacy_with(
    a: &Factorization,
    b: &Factorization,
    cfg: &ConjugacyConfig,
) -> Result<ConjugacyWitness> {
    decide_tuple_conjugacy(a.entries(), b.entries(), cfg)
}

/// `rotate_by(f, s)` compared against `f`: finds `C` with `C X_i C^{-1} = X_{i+s}`.
pub fn solve_shift_conjugator(f: &Factorization, s: i64) -> Result<ConjugacyWitness> {
    f.require_undecorated()?;
    let shifted = rotate_by(f, s)?;
    decide_sim_conjugacy(f, &shifted)
}

fn conjugates_all(d: &Mat2, a: &[Mat2], b: &[Mat2]) -> bool {
    a.iter().zip(b).all(|(x, y)| &conjugate_unchecked(d, x) == y)
}

fn is_scalar(m: &Mat2) -> bool {
    m.b().is_zero() && m.c().is_zero() && m.a() == m.d()
}

/// Decides whether some `D` in `SL2(Z)` has `D a_i D^{-1} = b_i` for all `i`.
///
/// Complete whenever some `a_i` is parabolic; otherwise falls back to a
/// bounded search and may answer `Inconclusive`.
pub fn decide_tuple_conjugacy(
    a: &[Mat2],
    b: &[Mat2],
    cfg: &ConjugacyConfig,
) -> Result<ConjugacyWitness> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "tuples of different lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    for (x, y) in a.iter().zip(b) {
        if x.trace() != y.trace() || x.det() != y.det() {
            return Ok(ConjugacyWitness::NotConjugate);
        }
        if (is_scalar(x) || is_scalar(y)) && x != y {
            return Ok(ConjugacyWitness::NotConjugate);
        }
    }

    let mut anchors = Vec::new();
    for (x, y) in a.iter().zip(b) {
        if let Some(u) = parabolic_axis(x) {
            match parabolic_axis(y) {
                Some(w) => anchors.push((u, w)),
                None => return Ok(ConjugacyWitness::NotConjugate),
            }
        }
    }

    if let Some((u1, w1)) = anchors.first() {
        let independent = anchors.iter().find(|(u, _)| !u1.pairing(u).is_zero());
        let found = match independent {
            Some((u2, w2)) => solve_two_axes(u1, w1, u2, w2, a, b),
            None => solve_one_axis(u1, w1, a, b)?,
        };
        return Ok(match found {
            Some(d) => ConjugacyWitness::Found { conjugator: d },
            None => ConjugacyWitness::NotConjugate,
        });
    }

    if a.iter().all(is_scalar) {
        return Ok(ConjugacyWitness::Found {
            conjugator: Mat2::identity(),
        });
    }
    let bound = cfg.brute_force_bound;
    Ok(sl2_box(bound)
        .into_iter()
        .find(|d| conjugates_all(d, a, b))
        .map(|d| ConjugacyWitness::Found { conjugator: d })
        .unwrap_or(ConjugacyWitness::Inconclusive { bound }))
}

const SIGNS: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// `D u_k = ±w_k` for two independent axes pins `D` down to four candidates.
fn solve_two_axes(
    u1: &PrimVec,
    w1: &PrimVec,
    u2: &PrimVec,
    w2: &PrimVec,
    a: &[Mat2],
    b: &[Mat2],
) -> Option<Mat2> {
    let u = Mat2::new(u1.p().clone(), u2.p().clone(), u1.q().clone(), u2.q().clone());
    let det_u = u.det();
    let adj_u = u.adjugate();
    for (s1, s2) in SIGNS {
        let (s1, s2) = (BigInt::from(s1), BigInt::from(s2));
        let w = Mat2::new(
            &s1 * w1.p(),
            &s2 * w2.p(),
            &s1 * w1.q(),
            &s2 * w2.q(),
        );
        let num = &w * &adj_u;
        let entries: Option<Vec<BigInt>> = num
            .entries()
            .iter()
            .map(|x| {
                let (q, r) = x.div_rem(&det_u);
                r.is_zero().then_some(q)
            })
            .collect();
        let Some(e) = entries else { continue };
        let d = Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone());
        if d.det().is_one() && conjugates_all(&d, a, b) {
            return Some(d);
        }
    }
    None
}

enum ShiftConstraint {
    Fixed(BigInt),
    Any,
    Impossible,
}

/// Values of `m` with `U^m X U^{-m} = Y`, `U = [[1, 1], [0, 1]]`.
fn unipotent_shift(x: &Mat2, y: &Mat2) -> ShiftConstraint {
    // U^m X U^{-m} = [[x11 + m x21, x12 + m (x22 - x11) - m^2 x21], [x21, x22 - m x21]]
    if !x.c().is_zero() {
        let (m, r) = (y.a() - x.a()).div_rem(x.c());
        return if r.is_zero() {
            ShiftConstraint::Fixed(m)
        } else {
            ShiftConstraint::Impossible
        };
    }
    if x.a() != y.a() || x.d() != y.d() || x.c() != y.c() {
        return ShiftConstraint::Impossible;
    }
    let diff = x.d() - x.a();
    if diff.is_zero() {
        return if x.b() == y.b() {
            ShiftConstraint::Any
        } else {
            ShiftConstraint::Impossible
        };
    }
    let (m, r) = (y.b() - x.b()).div_rem(&diff);
    if r.is_zero() {
        ShiftConstraint::Fixed(m)
    } else {
        ShiftConstraint::Impossible
    }
}

/// All parabolic axes are collinear: `D` lies in `D_0 T_u^k` for one of two signs.
fn solve_one_axis(u: &PrimVec, w: &PrimVec, a: &[Mat2], b: &[Mat2]) -> Result<Option<Mat2>> {
    let frame = completion(u);
    let frame_inv = frame.adjugate();
    let t_u = transvection(u);
    for target in [w.clone(), -w.clone()] {
        let d0 = solve_vector_transporter(u, &target).particular;
        let d0_inv = d0.adjugate();
        // T_u^k X T_u^{-k} = D0^{-1} Y D0, read in the frame where T_u = U^{-1}
        let mut candidate: Option<BigInt> = None;
        let mut possible = true;
        for (x, y) in a.iter().zip(b) {
            let xf = &(&frame_inv * x) * &frame;
            let yf = &(&(&frame_inv * &d0_inv) * &(y * &d0)) * &frame;
            match unipotent_shift(&xf, &yf) {
                ShiftConstraint::Impossible => {
                    possible = false;
                    break;
                }
                ShiftConstraint::Fixed(m) => {
                    candidate.get_or_insert(m);
                }
                ShiftConstraint::Any => {}
            }
        }
        if !possible {
            continue;
        }
        let m = candidate.unwrap_or_default();
        let k = -m;
        let k = i64::try_from(k).map_err(|_| {
            Error::InvalidArgument("conjugator exponent exceeds 64 bits".into())
        })?;
        let d = &d0 * &t_u.pow(k)?;
        if conjugates_all(&d, a, b) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Breadth-first search over Hurwitz words of length at most `depth` for a
/// tuple simultaneously conjugate to `target`. Returns the word found.
///
/// Best-effort only: the orbit is infinite and the search is bounded.
pub fn hurwitz_orbit_search(
    start: &Factorization,
    target: &Factorization,
    depth: usize,
) -> Result<Option<Vec<Move>>> {
    start.require_undecorated()?;
    if start.len() != target.len() {
        return Err(Error::Shape("tuples of different lengths".into()));
    }
    let n = start.len();
    let mut seen: HashSet<Vec<Mat2>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.entries.clone());
    queue.push_back((start.entries.clone(), Vec::<Move>::new()));
    while let Some((entries, word)) = queue.pop_front() {
        let witness =
            decide_tuple_conjugacy(&entries, target.entries(), &ConjugacyConfig::default())?;
        if witness.is_found() {
            return Ok(Some(word));
        }
        if word.len() == depth {
            continue;
        }
        for index in 1..n {
            for mv in [Move::forward(index), Move::backward(index)] {
                let mut next = entries.clone();
                hurwitz_move_in_place(&mut next, mv)?;
                if seen.insert(next.clone()) {
                    let mut w = word.clone();
                    w.push(mv);
                    queue.push_back((next, w));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2z::{order_of, MatOrder};
    use proptest::prelude::*;

    fn v(p: i64, q: i64) -> PrimVec {
        PrimVec::new(p, q).unwrap()
    }

    #[test]
    fn tuple_constructors() {
        let std12 = standard_tuple(12).unwrap();
        assert_eq!(std12.len(), 12);
        assert_eq!(std12.entries()[0], Mat2::new(1, -1, 0, 1));
        assert_eq!(std12.entries()[1], Mat2::new(1, 0, 1, 1));
        assert_eq!(standard_tuple(13), Err(Error::NotRealizable { n: 13 }));
        assert!(standard_tuple(24).unwrap().product().is_identity());
        assert!(matches!(standard_tuple(0), Err(Error::InvalidArgument(_))));
        let p3 = period3_tuple(12).unwrap();
        let z = tuple_product(&p3.entries()[..3]);
        assert_eq!(order_of(&z).unwrap(), MatOrder::Finite(4));
        assert_eq!(period3_tuple(6), Err(Error::NotRealizable { n: 6 }));
    }

    #[test]
    fn constructor_rejects_bad_tuples() {
        let t = transvection(&v(1, 0));
        assert_eq!(Factorization::new(vec![t.clone()]), Err(Error::ProductNotIdentity));
        assert!(matches!(
            Factorization::new(vec![Mat2::new(2, 0, 0, 1)]),
            Err(Error::NotSl2 { .. })
        ));
        assert!(matches!(
            Factorization::decorated(vec![Mat2::identity()], Decoration::Eta),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn move_examples() {
        let std12 = standard_tuple(12).unwrap();
        let moved = hurwitz_move(&std12, 1, Direction::Forward).unwrap();
        assert_eq!(moved.entries()[0], Mat2::new(0, -1, 1, 2));
        assert_eq!(moved.entries()[1], std12.entries()[0]);
        let back = hurwitz_move(&moved, 1, Direction::Backward).unwrap();
        assert_eq!(back, std12);
        assert_eq!(
            hurwitz_move(&std12, 12, Direction::Forward),
            Err(Error::IndexOutOfRange { index: 12, len: 12 })
        );
        assert!(hurwitz_move(&std12, 0, Direction::Forward).is_err());
    }

    #[test]
    fn word_parsing() {
        let w = parse_word("s3,s1',s2").unwrap();
        assert_eq!(w, vec![Move::forward(3), Move::backward(1), Move::forward(2)]);
        assert_eq!(format_word(&w), "s3,s1',s2");
        assert_eq!(parse_word(" ").unwrap(), vec![]);
        assert!(parse_word("s0").is_err());
        assert!(parse_word("x1").is_err());
        assert!(parse_word("s1,,s2").is_err());
        let std12 = standard_tuple(12).unwrap();
        let same = apply_word(&std12, &parse_word("s1,s1'").unwrap()).unwrap();
        assert_eq!(same, std12);
    }

    #[test]
    fn rotation() {
        let std12 = standard_tuple(12).unwrap();
        let mut r = std12.clone();
        for _ in 0..12 {
            r = rotate(&r).unwrap();
        }
        assert_eq!(r, std12);
        let w = solve_shift_conjugator(&std12, 1).unwrap();
        let c = w.conjugator().unwrap();
        assert!(c == &Mat2::c4() || c == &-Mat2::c4());
        let p3 = period3_tuple(12).unwrap();
        let w = solve_shift_conjugator(&p3, 1).unwrap();
        assert_eq!(order_of(w.conjugator().unwrap()).unwrap(), MatOrder::Finite(6));
        let tau = Factorization::decorated(std12.entries().to_vec(), Decoration::Tau).unwrap();
        assert!(matches!(rotate(&tau), Err(Error::Shape(_))));
    }

    #[test]
    fn conjugacy_examples() {
        let std12 = standard_tuple(12).unwrap();
        let p3 = period3_tuple(12).unwrap();
        assert_eq!(
            decide_sim_conjugacy(&std12, &std12).unwrap(),
            ConjugacyWitness::Found {
                conjugator: Mat2::identity()
            }
        );
        let rotated = rotate(&std12).unwrap();
        let w = decide_sim_conjugacy(&std12, &rotated).unwrap();
        assert_eq!(w.conjugator(), Some(&Mat2::c4()));
        assert_eq!(
            decide_sim_conjugacy(&std12, &p3).unwrap(),
            ConjugacyWitness::NotConjugate
        );
        assert!(decide_sim_conjugacy(&std12, &standard_tuple(24).unwrap()).is_err());
    }

    #[test]
    fn collinear_anchor_case() {
        // all parabolic entries share the axis (1,0); the hyperbolic entry fixes k
        let t = transvection(&v(1, 0));
        let h = Mat2::new(2, 1, 1, 1);
        let a = vec![t.clone(), h.clone()];
        for d in [Mat2::new(1, 5, 0, 1), Mat2::new(-1, 3, 0, -1), Mat2::new(2, 1, 1, 1)] {
            let b: Vec<Mat2> = a.iter().map(|m| conjugate_unchecked(&d, m)).collect();
            let w = decide_tuple_conjugacy(&a, &b, &ConjugacyConfig::default()).unwrap();
            let found = w.conjugator().expect("conjugate");
            assert!(conjugates_all(found, &a, &b));
        }
        let b = vec![t.clone(), Mat2::new(0, 1, -1, 3)];
        assert_eq!(
            decide_tuple_conjugacy(&a, &b, &ConjugacyConfig::default()).unwrap(),
            ConjugacyWitness::NotConjugate
        );
        // only powers of one transvection: the answer is the transporter itself
        let a = vec![t.clone(), t.pow(-1).unwrap()];
        let s = transvection(&v(2, 3));
        let b = vec![s.clone(), s.pow(-1).unwrap()];
        assert!(decide_tuple_conjugacy(&a, &b, &ConjugacyConfig::default())
            .unwrap()
            .is_found());
    }

    #[test]
    fn brute_force_fallback() {
        let a = vec![Mat2::c4(), Mat2::c4().pow(3).unwrap()];
        let b: Vec<Mat2> = a.iter().map(|m| conjugate_unchecked(&Mat2::new(2, 1, 1, 1), m)).collect();
        let w = decide_tuple_conjugacy(&a, &b, &ConjugacyConfig::default()).unwrap();
        assert!(conjugates_all(w.conjugator().unwrap(), &a, &b));
        let far = Mat2::new(13, 8, 8, 5);
        let b: Vec<Mat2> = a.iter().map(|m| conjugate_unchecked(&far, m)).collect();
        let w = decide_tuple_conjugacy(&a, &b, &ConjugacyConfig { brute_force_bound: 2 }).unwrap();
        assert_eq!(w, ConjugacyWitness::Inconclusive { bound: 2 });
        let scalars = vec![Mat2::neg_identity(), Mat2::neg_identity()];
        assert!(decide_tuple_conjugacy(&scalars, &scalars, &ConjugacyConfig::default())
            .unwrap()
            .is_found());
    }

    #[test]
    fn garside_examples() {
        let std12 = standard_tuple(12).unwrap();
        assert_eq!(garside_word(12).len(), 66);
        let g = garside_act(&std12).unwrap();
        assert_eq!(g, garside_act_alternate(&std12).unwrap());
        let p3 = period3_tuple(12).unwrap();
        assert!(decide_sim_conjugacy(&g, &p3).unwrap().is_found());
        let gg = garside_act(&g).unwrap();
        assert!(decide_sim_conjugacy(&gg, &std12).unwrap().is_found());
        let two = Factorization::new(vec![Mat2::c4(), Mat2::c4().pow(3).unwrap()]).unwrap();
        assert_eq!(garside_word(2), vec![Move::forward(1)]);
        assert_eq!(garside_act(&two).unwrap(), hurwitz_move(&two, 1, Direction::Forward).unwrap());
    }

    fn tau_tuple() -> Factorization {
        // (L, X_1, ..., X_11) from the period-2 tuple
        let e = standard_tuple(12).unwrap().into_entries();
        Factorization::decorated(e, Decoration::Tau).unwrap()
    }

    #[test]
    fn tau_action() {
        let f = tau_tuple();
        let g = tau_act(&f).unwrap();
        assert_eq!(g.decoration(), Decoration::Tau);
        assert_eq!(g.entries()[11], f.entries()[1]);
        let mut h = f.clone();
        for _ in 0..11 {
            h = tau_act(&h).unwrap();
        }
        assert_eq!(h, f);
        assert!(tau_act(&standard_tuple(12).unwrap()).is_err());
    }

    fn eta12() -> Factorization {
        let ta = transvection(&v(1, 0));
        let tb = transvection(&v(0, 1));
        let mut e = vec![ta.clone()];
        for _ in 0..11 {
            e.push(tb.clone());
            e.push(ta.clone());
        }
        e.push(tb);
        Factorization::decorated(e, Decoration::Eta).unwrap()
    }

    #[test]
    fn eta_action() {
        let f = eta12();
        assert_eq!(f.len(), 24);
        assert_eq!(eta_power(&f, 12).unwrap(), f);
        assert_eq!(eta_power(&f, 6).unwrap(), f);
        assert_eq!(eta_act(&f), Err(Error::ProductNotIdentity));
        let fixed: Vec<u64> = (1..=22)
            .filter(|&s| {
                eta_power(&f, s)
                    .ok()
                    .is_some_and(|g| decide_sim_conjugacy(&f, &g).unwrap().is_found())
            })
            .collect();
        assert_eq!(fixed, vec![6, 12, 18]);
        // iterating single steps agrees with the power wherever both are defined
        let twice = eta_power(&f, 6).unwrap();
        assert_eq!(eta_power(&twice, 6).unwrap(), eta_power(&f, 12).unwrap());
        assert!(eta_act(&standard_tuple(12).unwrap()).is_err());
    }

    #[test]
    fn orbit_search_finds_short_words() {
        let std12 = standard_tuple(12).unwrap();
        let word = parse_word("s2,s5'").unwrap();
        let target = apply_word(&std12, &word).unwrap();
        let found = hurwitz_orbit_search(&std12, &target, 2).unwrap().unwrap();
        let reached = apply_word(&std12, &found).unwrap();
        assert!(decide_sim_conjugacy(&reached, &target).unwrap().is_found());
    }

    #[test]
    fn json_round_trip() {
        let f = period3_tuple(12).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"decoration":"none","entries":[[[1,-1],[0,1]]"#));
        assert_eq!(serde_json::from_str::<Factorization>(&s).unwrap(), f);
        assert!(serde_json::from_str::<Factorization>(r#"{"entries":[[[1,-1],[0,1]]]}"#).is_err());
        let w = ConjugacyWitness::Found {
            conjugator: Mat2::c4(),
        };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"status":"found","conjugator":[[0,-1],[1,0]]}"#);
    }

    fn small_tuple() -> impl Strategy<Value = Vec<Mat2>> {
        prop::collection::vec(prop::sample::select(crate::sl2z::sl2_box(2)), 2..6)
    }

    proptest! {
        #[test]
        fn moves_are_invertible(entries in small_tuple(), i in 1usize..5, fwd in any::<bool>()) {
            prop_assume!(i < entries.len());
            let mv = if fwd { Move::forward(i) } else { Move::backward(i) };
            let mut e = entries.clone();
            hurwitz_move_in_place(&mut e, mv).unwrap();
            prop_assert_eq!(tuple_product(&e), tuple_product(&entries));
            hurwitz_move_in_place(&mut e, mv.inverse()).unwrap();
            prop_assert_eq!(e, entries);
        }

        #[test]
        fn witnesses_compose(word in prop::collection::vec((1usize..12, any::<bool>()), 0..6),
                             d1 in prop::sample::select(crate::sl2z::sl2_box(2)),
                             d2 in prop::sample::select(crate::sl2z::sl2_box(2))) {
            let moves: Vec<Move> = word.iter().map(|&(i, f)| if f { Move::forward(i) } else { Move::backward(i) }).collect();
            let a = apply_word(&standard_tuple(12).unwrap(), &moves).unwrap();
            let b = a.conjugated_by(&d1).unwrap();
            let c = b.conjugated_by(&d2).unwrap();
            let ab = decide_sim_conjugacy(&a, &b).unwrap();
            let ba = decide_sim_conjugacy(&b, &a).unwrap();
            let bc = decide_sim_conjugacy(&b, &c).unwrap();
            let dab = ab.conjugator().unwrap();
            let dba = ba.conjugator().unwrap();
            let dbc = bc.conjugator().unwrap();
            prop_assert_eq!(a.conjugated_by(dab).unwrap(), b.clone());
            prop_assert_eq!(b.conjugated_by(dba).unwrap(), a.clone());
            prop_assert_eq!(a.conjugated_by(&(dbc * dab)).unwrap(), c);
        }

        #[test]
        fn tau_power_is_identity(word in prop::collection::vec((2usize..12, any::<bool>()), 0..5)) {
            // moves avoiding the boundary letter keep a valid tau-shaped tuple
            let moves: Vec<Move> = word.iter().map(|&(i, f)| if f { Move::forward(i) } else { Move::backward(i) }).collect();
            let std = apply_word(&standard_tuple(12).unwrap(), &moves).unwrap();
            let f = Factorization::decorated(std.into_entries(), Decoration::Tau).unwrap();
            let mut g = f.clone();
            for _ in 0..11 {
                g = tau_act(&g).unwrap();
                prop_assert!(g.product().is_identity());
            }
            prop_assert!(decide_sim_conjugacy(&f, &g).unwrap().is_found());
        }
    }
}
