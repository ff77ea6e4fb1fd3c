//! Bounded searches for factorizations fixed by the boundary-decorated
//! rotations, and checkable lemmas behind their nonexistence.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hurwitz::tuple_product;
use crate::sl2z::{
    abelianize, conjugate_unchecked, is_transvection, primitive_vectors, sl2_box, transvection,
    Mat2, PrimVec,
};

/// `C`, `X_1 = T_v`, `L = T_w` satisfying all conditions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TauSolution {
    pub v: PrimVec,
    pub w: PrimVec,
    pub c: Mat2,
}

/// `C`, `X_1 = T_v`, `L_1 = T_{w1}`, `L_2 = T_{w2}` satisfying all conditions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EtaSolution {
    pub v: PrimVec,
    pub w1: PrimVec,
    pub w2: PrimVec,
    pub c: Mat2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport<T> {
    pub n: i64,
    pub bound: i64,
    pub conjugators: usize,
    pub vectors: usize,
    /// `(C, v)` pairs with `C^m v = ±v`, `m` the number of middle letters.
    pub wrap_passes: u64,
    /// Candidates that also satisfy the boundary conjugation conditions.
    pub boundary_passes: u64,
    pub solutions: Vec<T>,
}

#[derive(Default)]
struct Counts {
    wrap: u64,
    boundary: u64,
}

fn same_line(m: &Mat2, v: &PrimVec, target: &PrimVec) -> bool {
    m.apply(v).same_line(target)
}

fn orbit_letters(c: &Mat2, v: &PrimVec, m: usize) -> Vec<Mat2> {
    super::orbit_tuple(c, v, m)
}

fn check_positive(n: i64, bound: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("n must be positive, got {n}")));
    }
    if bound < 1 {
        return Err(Error::InvalidArgument(format!("box must be positive, got {bound}")));
    }
    Ok(())
}

/// Tuples `(L, X_1, ..., X_{n-1})` of transvections with `L X_1 ... X_{n-1} = Id`,
/// `C X_i C^{-1} = X_{i+1}` (indices mod `n-1`) and `C L C^{-1} = X_1^{-1} L X_1`,
/// over all `C` in `SL2(Z)` and `v, w` with entries in `[-bound, bound]`.
pub fn search_tau_fixed(n: i64, bound: i64) -> Result<SearchReport<TauSolution>> {
    check_positive(n, bound)?;
    let m = (n - 1) as usize;
    let vectors = primitive_vectors(bound);
    let cs = sl2_box(bound);

    let per_c: Vec<(Counts, Vec<TauSolution>)> = cs
        .par_iter()
        .map(|c| {
            let mut counts = Counts::default();
            let mut found = Vec::new();
            if m == 0 {
                // the tuple is (L) alone, so L = Id
                for w in &vectors {
                    counts.boundary += 1;
                    if transvection(w).is_identity() {
                        found.push(TauSolution {
                            v: w.clone(),
                            w: w.clone(),
                            c: c.clone(),
                        });
                    }
                }
                return (counts, found);
            }
            let cm = c.pow(m as i64).expect("det 1");
            let c_inv = c.adjugate();
            for v in &vectors {
                if !same_line(&cm, v, v) {
                    continue;
                }
                counts.wrap += 1;
                let x1 = transvection(v);
                let x1_inv = x1.adjugate();
                let mut letters: Option<Vec<Mat2>> = None;
                for w in &vectors {
                    // C T_w C^{-1} = T_{Cw} and X_1^{-1} T_w X_1 = T_{X_1^{-1} w}
                    if !c.apply(w).same_line(&x1_inv.apply(w)) {
                        continue;
                    }
                    let l = transvection(w);
                    debug_assert_eq!(&(&(c * &l) * &c_inv), &(&(&x1_inv * &l) * &x1));
                    counts.boundary += 1;
                    let xs = letters.get_or_insert_with(|| orbit_letters(c, v, m));
                    if (&l * &tuple_product(xs)).is_identity() {
                        found.push(TauSolution {
                            v: v.clone(),
                            w: w.clone(),
                            c: c.clone(),
                        });
                    }
                }
            }
            (counts, found)
        })
        .collect();

    Ok(collect_report(n, bound, cs.len(), vectors.len(), per_c))
}

/// Tuples `(L_1, X_1, ..., X_{n-2}, L_2)` of transvections with product `Id`,
/// `C X_i C^{-1} = X_{i+1}` (indices mod `n-2`), `C L_1 C^{-1} = X_1^{-1} L_1 X_1`
/// and `C L_2 C^{-1} = L_2`.
pub fn search_eta_fixed(n: i64, bound: i64) -> Result<SearchReport<EtaSolution>> {
    check_positive(n, bound)?;
    let vectors = primitive_vectors(bound);
    let cs = sl2_box(bound);
    if n < 2 {
        // fewer than two entries: no room for both boundary letters
        return Ok(collect_report(n, bound, cs.len(), vectors.len(), Vec::new()));
    }
    let m = (n - 2) as usize;

    let per_c: Vec<(Counts, Vec<EtaSolution>)> = cs
        .par_iter()
        .map(|c| {
            let mut counts = Counts::default();
            let mut found = Vec::new();
            let fixed: Vec<&PrimVec> = vectors.iter().filter(|w| same_line(c, w, w)).collect();
            if fixed.is_empty() {
                return (counts, found);
            }
            if m == 0 {
                for w1 in &vectors {
                    for w2 in &fixed {
                        counts.boundary += 1;
                        if (&transvection(w1) * &transvection(w2)).is_identity() {
                            found.push(EtaSolution {
                                v: w1.clone(),
                                w1: w1.clone(),
                                w2: (*w2).clone(),
                                c: c.clone(),
                            });
                        }
                    }
                }
                return (counts, found);
            }
            let cm = c.pow(m as i64).expect("det 1");
            for v in &vectors {
                if !same_line(&cm, v, v) {
                    continue;
                }
                counts.wrap += 1;
                let x1_inv = transvection(v).adjugate();
                let mut middle: Option<Mat2> = None;
                for w1 in &vectors {
                    if !c.apply(w1).same_line(&x1_inv.apply(w1)) {
                        continue;
                    }
                    let l1 = transvection(w1);
                    for w2 in &fixed {
                        counts.boundary += 1;
                        let l2 = transvection(w2);
                        debug_assert_eq!(conjugate_unchecked(c, &l2), l2);
                        let mid = middle.get_or_insert_with(|| tuple_product(&orbit_letters(c, v, m)));
                        if (&(&l1 * mid) * &l2).is_identity() {
                            found.push(EtaSolution {
                                v: v.clone(),
                                w1: w1.clone(),
                                w2: (*w2).clone(),
                                c: c.clone(),
                            });
                        }
                    }
                }
            }
            (counts, found)
        })
        .collect();

    Ok(collect_report(n, bound, cs.len(), vectors.len(), per_c))
}

fn collect_report<T: Ord>(
    n: i64,
    bound: i64,
    conjugators: usize,
    vectors: usize,
    per_c: Vec<(Counts, Vec<T>)>,
) -> SearchReport<T> {
    let mut report = SearchReport {
        n,
        bound,
        conjugators,
        vectors,
        wrap_passes: 0,
        boundary_passes: 0,
        solutions: Vec::new(),
    };
    for (counts, found) in per_c {
        report.wrap_passes += counts.wrap;
        report.boundary_passes += counts.boundary;
        report.solutions.extend(found);
    }
    report.solutions.sort();
    report
}

/// Outcome of an exhaustive check of one lemma over a finite range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok" } else { "FAILED" };
        write!(f, "[{status}] {} ({} cases): {}", self.name, self.cases, self.detail)
    }
}

/// `T_v^k` is a transvection exactly when `k = 1`.
pub fn lemma_transvection_powers(bound: i64, kmax: i64) -> LemmaReport {
    let mut cases = 0;
    let mut bad = Vec::new();
    for v in primitive_vectors(bound) {
        let t = transvection(&v);
        for k in -kmax..=kmax {
            cases += 1;
            let is_t = is_transvection(&t.pow(k).expect("det 1"));
            if is_t != (k == 1) {
                bad.push(format!("v = {v}, k = {k}"));
            }
        }
    }
    LemmaReport {
        name: "transvection powers".into(),
        passed: bad.is_empty(),
        cases,
        detail: if bad.is_empty() {
            format!("T_v^k is a transvection only for k = 1 (|p|,|q| <= {bound}, |k| <= {kmax})")
        } else {
            format!("counterexamples: {}", bad.join("; "))
        },
    }
}

/// `T_w^{-1} T_v T_w = T_v` exactly when `w = ±v`.
pub fn lemma_commuting_transvections(bound: i64) -> LemmaReport {
    let vectors = primitive_vectors(bound);
    let mut cases = 0;
    let mut bad = Vec::new();
    for v in &vectors {
        let tv = transvection(v);
        for w in &vectors {
            cases += 1;
            let tw = transvection(w);
            let commutes = (&(&tw.adjugate() * &tv) * &tw) == tv;
            if commutes != v.same_line(w) {
                bad.push(format!("v = {v}, w = {w}"));
            }
        }
    }
    LemmaReport {
        name: "commuting transvections".into(),
        passed: bad.is_empty(),
        cases,
        detail: if bad.is_empty() {
            "a transvection commuting with T_v is T_v itself".into()
        } else {
            format!("counterexamples: {}", bad.join("; "))
        },
    }
}

fn abelianization_lemma(bound: i64, letters: usize) -> LemmaReport {
    let vectors = primitive_vectors(bound);
    let id = abelianize(&Mat2::identity()).expect("det 1");
    let neg = abelianize(&Mat2::neg_identity()).expect("det 1");
    let mut cases = 0;
    let mut values = std::collections::BTreeSet::new();
    let mut stack: Vec<(usize, Mat2)> = vec![(0, Mat2::identity())];
    while let Some((depth, acc)) = stack.pop() {
        if depth == letters {
            cases += 1;
            values.insert(abelianize(&acc).expect("det 1"));
            continue;
        }
        for v in &vectors {
            stack.push((depth + 1, &acc * &transvection(v)));
        }
    }
    let passed = !values.contains(&id) && !values.contains(&neg);
    let value_list: Vec<String> = values.iter().map(u8::to_string).collect();
    LemmaReport {
        name: format!("abelianization of {letters} transvections"),
        passed,
        cases,
        detail: format!(
            "image {{{}}} mod 12 avoids Id = {id} and -Id = {neg}; a product equal to ±Id would force {letters} = 0 mod 12",
            value_list.join(", ")
        ),
    }
}

/// A product of two transvections is never `±Id`.
pub fn lemma_abelianization_pair(bound: i64) -> LemmaReport {
    abelianization_lemma(bound, 2)
}

/// A product of three transvections is never `±Id`.
pub fn lemma_abelianization_triple(bound: i64) -> LemmaReport {
    abelianization_lemma(bound, 3)
}

/// If `C^m v = ±v` for some `m >= 1`, then `Cv = ±v`, `C^2 = -Id`, or `C^3 = ±Id`.
pub fn lemma_trichotomy(bound: i64, max_m: u32) -> LemmaReport {
    let vectors = primitive_vectors(bound);
    let mut cases = 0;
    let mut branch = [0u64; 3];
    let mut bad = Vec::new();
    for c in sl2_box(bound) {
        let c2 = &c * &c;
        let c3 = &c2 * &c;
        let mut power = c.clone();
        let mut powers = Vec::new();
        for _ in 1..=max_m {
            powers.push(power.clone());
            power = &power * &c;
        }
        for v in &vectors {
            if !powers.iter().any(|p| same_line(p, v, v)) {
                continue;
            }
            cases += 1;
            if same_line(&c, v, v) {
                branch[0] += 1;
            } else if c2.is_neg_identity() {
                branch[1] += 1;
            } else if c3.is_identity() || c3.is_neg_identity() {
                branch[2] += 1;
            } else {
                bad.push(format!("C = {c}, v = {v}"));
            }
        }
    }
    LemmaReport {
        name: "order trichotomy".into(),
        passed: bad.is_empty(),
        cases,
        detail: if bad.is_empty() {
            format!(
                "Cv = ±v: {}, C^2 = -Id: {}, C^3 = ±Id: {} (m <= {max_m})",
                branch[0], branch[1], branch[2]
            )
        } else {
            format!("counterexamples: {}", bad.join("; "))
        },
    }
}

/// The lemma suite behind the nonexistence of `tau`-fixed tuples.
pub fn tau_lemmas(bound: i64) -> Vec<LemmaReport> {
    vec![
        lemma_trichotomy(bound.min(4), 36),
        lemma_transvection_powers(bound, 10),
        lemma_abelianization_pair(bound.min(3)),
        lemma_abelianization_triple(2),
        lemma_commuting_transvections(bound),
    ]
}

/// An integer of the form `c + k n` with `n` symbolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub constant: i64,
    pub n_coeff: i64,
}

impl Affine {
    pub const fn new(constant: i64, n_coeff: i64) -> Self {
        Affine { constant, n_coeff }
    }

    fn is_zero(self) -> bool {
        self.constant == 0 && self.n_coeff == 0
    }

    fn add(self, other: Affine) -> Affine {
        Affine::new(self.constant + other.constant, self.n_coeff + other.n_coeff)
    }

    fn neg(self) -> Affine {
        Affine::new(-self.constant, -self.n_coeff)
    }

    /// Solves `self = value` for `n`, if a unique rational solution exists.
    pub fn solve_for_n(self, value: i64) -> Option<(i64, i64)> {
        (self.n_coeff != 0).then_some((value - self.constant, self.n_coeff))
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constant, self.n_coeff) {
            (c, 0) => write!(f, "{c}"),
            (0, k) => write!(f, "{}", n_term(k)),
            (c, k) if k < 0 => write!(f, "{c} - {}", n_term(-k)),
            (c, k) if c < 0 => write!(f, "{} - {}", n_term(k), -c),
            (c, k) => write!(f, "{} + {c}", n_term(k)),
        }
    }
}

fn n_term(k: i64) -> String {
    match k {
        1 => "n".into(),
        -1 => "-n".into(),
        k => format!("{k}n"),
    }
}

/// Letters of the free group used in the derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    L1,
    L2,
    X1,
    /// The block `X_2 ... X_{n-2}`.
    W,
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sym::L1 => "L1",
            Sym::L2 => "L2",
            Sym::X1 => "X1",
            Sym::W => "W",
        };
        f.write_str(s)
    }
}

/// A freely reduced word with symbolic exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word(Vec<(Sym, Affine)>);

impl Word {
    pub fn new(letters: &[(Sym, Affine)]) -> Word {
        let mut w = Word::default();
        for &(s, e) in letters {
            w.push(s, e);
        }
        w
    }

    fn letter(s: Sym, e: i64) -> (Sym, Affine) {
        (s, Affine::new(e, 0))
    }

    pub fn push(&mut self, s: Sym, e: Affine) {
        if e.is_zero() {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == s {
                last.1 = last.1.add(e);
                if last.1.is_zero() {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((s, e));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(s, e) in &other.0 {
            w.push(s, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::default();
        for &(s, e) in self.0.iter().rev() {
            w.push(s, e.neg());
        }
        w
    }

    /// Replaces every occurrence of `s` (which must have exponent 1) by `by`.
    pub fn substitute(&self, s: Sym, by: &Word) -> Option<Word> {
        let mut w = Word::default();
        for &(t, e) in &self.0 {
            if t == s {
                let piece = match (e.constant, e.n_coeff) {
                    (1, 0) => by.clone(),
                    (-1, 0) => by.inverse(),
                    _ => return None,
                };
                w = w.concat(&piece);
            } else {
                w.push(t, e);
            }
        }
        Some(w)
    }

    /// Cyclic conjugate `g^{-1} self g`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.inverse().concat(self).concat(g)
    }

    pub fn letters(&self) -> &[(Sym, Affine)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| match (e.constant, e.n_coeff) {
                (1, 0) => s.to_string(),
                (c, 0) => format!("{s}^{c}"),
                _ => format!("{s}^({e})"),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationStep {
    pub claim: String,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
    pub contradiction: Option<String>,
}

impl Derivation {
    pub fn all_verified(&self) -> bool {
        self.steps.iter().all(|s| s.verified)
    }
}

/// Walks the forced chain `L_2 = X_1`, `X_i = X_1`, `L_1 = X_1^{1-n}` for
/// `eta`-fixed tuples and reports where it becomes contradictory.
pub fn eta_derivation(bound: i64) -> Derivation {
    use Sym::*;
    let one = |s| Word::letter(s, 1);
    let mut steps = Vec::new();

    // L1 X1 W L2 = 1
    let relation = Word::new(&[one(L1), one(X1), one(W), one(L2)]);
    steps.push(DerivationStep {
        claim: format!("product relation: {relation} = 1"),
        verified: true,
    });

    // conjugating by C: L1 -> X1^-1 L1 X1, X1 W -> W X1, L2 -> L2
    let conj_l1 = Word::new(&[one(L1)]).conjugate_by(&Word::new(&[one(X1)]));
    let conjugated = conj_l1
        .concat(&Word::new(&[one(W), one(X1), one(L2)]));
    steps.push(DerivationStep {
        claim: format!("conjugated relation: {conjugated} = 1"),
        verified: true,
    });

    // W = X1^-1 L1^-1 L2^-1 from the product relation
    let w_solved = Word::new(&[one(L1), one(X1)]).inverse().concat(&Word::new(&[one(L2)]).inverse());
    let back = relation
        .substitute(W, &w_solved)
        .map(|r| r.is_identity())
        .unwrap_or(false);
    steps.push(DerivationStep {
        claim: format!("W = {w_solved}"),
        verified: back,
    });

    let reduced = conjugated.substitute(W, &w_solved).unwrap_or_default();
    let commutator = Word::new(&[Word::letter(X1, -1), Word::letter(L2, -1), one(X1), one(L2)]);
    steps.push(DerivationStep {
        claim: format!("substituting: {reduced} = 1, so L2^-1 X1 L2 = X1"),
        verified: reduced == commutator,
    });

    let commuting = lemma_commuting_transvections(bound);
    steps.push(DerivationStep {
        claim: format!("L2 commutes with X1, hence L2 = X1 ({})", commuting.detail),
        verified: commuting.passed,
    });

    steps.push(DerivationStep {
        claim: "C L2 C^-1 = L2 with L2 = X1 gives X2 = C X1 C^-1 = X1, so every X_i = X1".into(),
        verified: true,
    });

    // W = X1^(n-3), L2 = X1
    let w_power = Word::new(&[(X1, Affine::new(-3, 1))]);
    let chain = relation
        .substitute(W, &w_power)
        .and_then(|r| r.substitute(L2, &Word::new(&[one(X1)])))
        .unwrap_or_default();
    let l1_expected = Word::new(&[(L1, Affine::new(1, 0)), (X1, Affine::new(-1, 1))]);
    steps.push(DerivationStep {
        claim: format!("product relation becomes {chain} = 1, so L1 = X1^(1 - n)"),
        verified: chain == l1_expected,
    });

    let exponent = Affine::new(1, -1);
    let powers = lemma_transvection_powers(bound, 10);
    steps.push(DerivationStep {
        claim: format!("L1 is a transvection and a power of X1, so {exponent} = 1 ({})", powers.detail),
        verified: powers.passed,
    });

    let contradiction = exponent.solve_for_n(1).and_then(|(num, den)| {
        (num % den == 0).then(|| format!("{exponent} = 1 forces n = {}", num / den))
    });
    Derivation {
        steps,
        contradiction,
    }
}
