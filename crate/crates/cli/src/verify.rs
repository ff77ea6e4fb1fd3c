use std::fmt::Write;

use clap::ValueEnum;
use monodromy::classify::explore::{build_eta12_example, eta_fixing_report, explore_half_rotation};
use monodromy::classify::nonexistence::{
    eta_derivation, lemma_abelianization_pair, lemma_abelianization_triple,
    lemma_transvection_powers, search_eta_fixed, search_tau_fixed, tau_lemmas, LemmaReport,
};
use monodromy::classify::{
    classify_rotation_invariant, enumerate_conic_points, norm_expression,
    oracle_rotation_invariant, reports_agree, CanonicalC,
};
use monodromy::hurwitz::{decide_sim_conjugacy, solve_shift_conjugator, ConjugacyWitness};
use monodromy::invariants::{
    commutant, norm_head_check, proportionality_constant, verify_generators, GeneratorCase,
};
use monodromy::sl2z::order_of;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    #[value(alias = "thm12")]
    Rotation,
    #[value(alias = "thm51")]
    Tau,
    #[value(alias = "prop52")]
    Eta,
    Invariants,
    Examples,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub topic: &'static str,
    pub reference: String,
    pub computed: String,
}

#[derive(Serialize)]
struct Report {
    suite: Suite,
    checks: Vec<Check>,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    discrepancies: Option<Vec<Discrepancy>>,
}

struct Checks {
    suite: &'static str,
    out: Vec<Check>,
}

impl Checks {
    fn new(suite: &'static str) -> Self {
        Checks {
            suite,
            out: Vec::new(),
        }
    }

    fn add(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.out.push(Check {
            suite: self.suite,
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn lemma(&mut self, l: &LemmaReport) {
        self.add(l.name.clone(), l.passed, format!("{} cases: {}", l.cases, l.detail));
    }
}

fn rotation(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut c = Checks::new("rotation");
    let classes = classify_rotation_invariant(cfg.n)?;
    let oracle = oracle_rotation_invariant(cfg.n, cfg.bound)?;
    let expected = if cfg.n > 0 && cfg.n % 12 == 0 { 2 } else { 0 };
    c.add(
        "class count",
        classes.len() == expected,
        format!("{} classes, expected {expected}", classes.len()),
    );
    c.add(
        "oracle agreement",
        reports_agree(&classes, &oracle),
        format!("oracle at box {} found {} classes", cfg.bound, oracle.len()),
    );
    for class in &classes {
        let w = solve_shift_conjugator(&class.representative, 1)?;
        let ok = match w.conjugator() {
            Some(m) => order_of(m)? == class.conjugator_order,
            None => false,
        };
        c.add(
            format!("period {} shift invariance", class.period),
            ok,
            format!("{w:?}, reported order {:?}", class.conjugator_order),
        );
    }
    if let [a, b] = classes.as_slice() {
        let w = decide_sim_conjugacy(&a.representative, &b.representative)?;
        c.add(
            "classes not conjugate",
            w == ConjugacyWitness::NotConjugate,
            format!("{w:?}"),
        );
    }
    Ok(c.out)
}

fn tau(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut c = Checks::new("tau");
    let r = search_tau_fixed(cfg.n, cfg.bound)?;
    c.add(
        "bounded search",
        r.solutions.is_empty(),
        format!(
            "{} conjugators x {} vectors, {} wrap passes, {} boundary passes, {} solutions",
            r.conjugators,
            r.vectors,
            r.wrap_passes,
            r.boundary_passes,
            r.solutions.len()
        ),
    );
    for l in tau_lemmas(cfg.bound) {
        c.lemma(&l);
    }
    c.lemma(&lemma_transvection_powers(cfg.bound, 12));
    c.lemma(&lemma_abelianization_pair(cfg.bound));
    c.lemma(&lemma_abelianization_triple(cfg.bound));
    Ok(c.out)
}

fn eta(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut c = Checks::new("eta");
    let r = search_eta_fixed(cfg.n, cfg.bound)?;
    c.add(
        "bounded search",
        r.solutions.is_empty(),
        format!(
            "{} conjugators x {} vectors, {} wrap passes, {} boundary passes, {} solutions",
            r.conjugators,
            r.vectors,
            r.wrap_passes,
            r.boundary_passes,
            r.solutions.len()
        ),
    );
    let d = eta_derivation(cfg.bound);
    for step in &d.steps {
        c.add("derivation step", step.verified, step.claim.clone());
    }
    let contradiction = d.contradiction.clone().unwrap_or_default();
    c.add(
        "derivation contradiction",
        contradiction.contains("1 - n = 1"),
        contradiction,
    );
    Ok(c.out)
}

fn invariants() -> Result<Vec<Check>, CliError> {
    let mut c = Checks::new("invariants");
    for case in GeneratorCase::ALL {
        let r = verify_generators(case)?;
        c.add(
            format!("{case} invariance"),
            r.invariant(),
            if r.invariant() {
                format!("group of order {}", r.group_order)
            } else {
                format!("group of order {}: {}", r.group_order, r.invariance_failures.join("; "))
            },
        );
        c.add(
            format!("{case} jacobian nonzero"),
            r.jacobian_nonzero,
            format!("J = {}", r.jacobian),
        );
        c.add(
            format!("{case} degree product"),
            r.degrees_ok(),
            format!(
                "{} * {} = {}, want {}",
                r.degrees.0, r.degrees.1, r.degree_product, r.expected_degree_product
            ),
        );
        c.add(
            format!("{case} jacobian vs reference"),
            r.matches_reference(),
            match &r.constant {
                Some(k) => format!("J = ({k}) * ({})", r.reference_jacobian),
                None => format!("J = {} vs {}", r.jacobian, r.reference_jacobian),
            },
        );
        c.add(
            format!("{case} jacobian factor"),
            r.divisible_by_reference_factor,
            format!("divisible by {}", r.reference_factor),
        );
    }
    for case in CanonicalC::ALL {
        let r = norm_head_check(case)?;
        c.add(format!("{case} norm head"), r.passed(), r.to_string());
        let cm = commutant(&case.matrix(), 2)?;
        c.add(
            format!("{case} symmetry groups"),
            cm.strict.is_group() && cm.extended.is_group(),
            format!("strict: {}, extended: {}", cm.strict.shape(), cm.extended.shape()),
        );
    }
    Ok(c.out)
}

fn examples() -> Result<Vec<Check>, CliError> {
    let mut c = Checks::new("examples");
    let f = build_eta12_example();
    let r = eta_fixing_report(&f, 12)?;
    c.add(
        "eta-12 product",
        r.product_is_identity,
        format!("length {}", r.length),
    );
    c.add(
        "eta-12 fixed by eta^12",
        r.fixed_by_queried_power,
        format!("fixing powers {:?}", r.fixing_powers),
    );
    c.add(
        "eta-12 minimal fixing power",
        r.minimal_power == Some(12),
        format!("minimal power {:?}, expected 12", r.minimal_power),
    );
    c.add(
        "eta-12 induced order",
        r.induced_order == 11,
        format!("order {} in Z/{}", r.induced_order, r.middle_letters),
    );
    let h = explore_half_rotation(12)?;
    let found = |s: i64| h.shifts.iter().find(|r| r.shift == s).map(|r| r.witness.is_found());
    c.add(
        "half rotation shift 1",
        found(1) == Some(false),
        format!("gamma {:?}, delta {:?}", h.gamma, h.delta),
    );
    c.add(
        "half rotation shift 3",
        found(3) == Some(true),
        format!(
            "minimal shift {:?}, induced order {:?}",
            h.minimal_shift, h.induced_order
        ),
    );
    Ok(c.out)
}

/// Reference values that differ from what is computed.
pub fn discrepancies() -> Result<Vec<Discrepancy>, CliError> {
    let mut out = Vec::new();
    let f4 = norm_expression(CanonicalC::C4)?;
    out.push(Discrepancy {
        topic: "f4 in N4",
        reference: "-2(N4 + 1)(N4 - 1)".into(),
        computed: f4.in_norm.display_with("N4").to_string(),
    });
    let head = norm_head_check(CanonicalC::C4)?;
    out.push(Discrepancy {
        topic: "C4 degree-4 head",
        reference: head.reference.into(),
        computed: format!(
            "{}*N4^2",
            head.constant.map(|k| k.to_string()).unwrap_or_else(|| "?".into())
        ),
    });
    for case in GeneratorCase::ALL {
        let r = verify_generators(case)?;
        let computed = match proportionality_constant(&r.jacobian, &r.reference_jacobian) {
            Some(k) => format!("{} = ({k}) * reference", r.jacobian),
            None => format!("{} (not a constant multiple)", r.jacobian),
        };
        out.push(Discrepancy {
            topic: if case == GeneratorCase::Order4 {
                "Jacobian order4"
            } else {
                "Jacobian order34_6"
            },
            reference: r.reference_jacobian.to_string(),
            computed,
        });
    }
    let c4 = enumerate_conic_points(CanonicalC::C4)?;
    out.push(Discrepancy {
        topic: "C4 conic orbits",
        reference: "one orbit {(1, 0), (0, 1)}".into(),
        computed: c4
            .orbits
            .iter()
            .map(|o| format!("{:?} {:?}", o.members, o.product_order))
            .collect::<Vec<_>>()
            .join("; "),
    });
    let r = eta_fixing_report(&build_eta12_example(), 12)?;
    out.push(Discrepancy {
        topic: "eta-12 minimal fixing power",
        reference: "12".into(),
        computed: format!("{:?} (fixing powers {:?})", r.minimal_power, r.fixing_powers),
    });
    Ok(out)
}

pub fn run(cfg: &RunConfig, suite: Suite, log: bool) -> Result<(), CliError> {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Rotation {
        checks.extend(rotation(cfg)?);
    }
    if all || suite == Suite::Tau {
        checks.extend(tau(cfg)?);
    }
    if all || suite == Suite::Eta {
        checks.extend(eta(cfg)?);
    }
    if all || suite == Suite::Invariants {
        checks.extend(invariants()?);
    }
    if all || suite == Suite::Examples {
        checks.extend(examples()?);
    }
    let passed = checks.iter().all(|c| c.passed);
    let discrepancies = if log { Some(discrepancies()?) } else { None };
    let text = match cfg.format {
        Format::Json => cfg.json(&Report {
            suite,
            checks: checks.clone(),
            passed,
            discrepancies: discrepancies.clone(),
        })?,
        Format::Text => {
            let mut s = cfg.header();
            s.push('\n');
            for c in &checks {
                let mark = if c.passed { "ok" } else { "FAIL" };
                let _ = writeln!(s, "[{mark}] {}/{}: {}", c.suite, c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(s, "{} checks, {failed} failed", checks.len());
            if let Some(ds) = &discrepancies {
                let _ = writeln!(s, "discrepancies (reference vs computed):");
                for d in ds {
                    let _ = writeln!(s, "  {}: {} vs {}", d.topic, d.reference, d.computed);
                }
            }
            s
        }
    };
    cfg.emit(&text)?;
    if passed {
        Ok(())
    } else {
        let names: Vec<String> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}/{}", c.suite, c.name))
            .collect();
        Err(CliError::Verification(format!("failed checks: {}", names.join(", "))))
    }
}
