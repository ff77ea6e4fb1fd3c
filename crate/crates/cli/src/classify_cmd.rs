use std::fmt::Write;

use monodromy::classify::{
    classify_rotation_invariant, oracle_rotation_invariant, reports_agree, ClassReport,
};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Serialize)]
struct Report<'a> {
    classes: &'a [ClassReport],
    oracle: &'a [ClassReport],
    agree: bool,
    expected_count: usize,
}

pub fn describe(c: &ClassReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "period {} seed {:?} C = {:?} ({:?})",
        c.period, c.seed, c.conjugator, c.conjugator_order
    );
    let first: Vec<String> = c
        .representative
        .entries()
        .iter()
        .take(c.period as usize)
        .map(|m| format!("{m:?}"))
        .collect();
    let _ = writeln!(s, "  block {}", first.join(" "));
    match (&c.canonical, &c.witness) {
        (Some(t), Some(d)) => {
            let _ = write!(s, "  conjugate to {t:?} tuple by D = {d:?}");
        }
        _ => {
            let _ = write!(s, "  no canonical tuple matched");
        }
    }
    s
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let classes = classify_rotation_invariant(cfg.n)?;
    let oracle = oracle_rotation_invariant(cfg.n, cfg.bound)?;
    let agree = reports_agree(&classes, &oracle);
    let expected_count = if cfg.n > 0 && cfg.n % 12 == 0 { 2 } else { 0 };
    let out = match cfg.format {
        Format::Json => cfg.json(&Report {
            classes: &classes,
            oracle: &oracle,
            agree,
            expected_count,
        })?,
        Format::Text => {
            let mut s = cfg.header();
            s.push('\n');
            let _ = writeln!(s, "{} classes", classes.len());
            for c in &classes {
                let _ = writeln!(s, "{}", describe(c));
            }
            let _ = writeln!(
                s,
                "oracle (box {}): {} classes, {}",
                cfg.bound,
                oracle.len(),
                if agree { "agrees" } else { "DISAGREES" }
            );
            s
        }
    };
    cfg.emit(&out)?;
    if !agree {
        let mut diff = String::from("structured and oracle results differ\n");
        for c in classes.iter().filter(|c| !oracle.iter().any(|o| same_class(c, o))) {
            let _ = writeln!(diff, "- {}", describe(c));
        }
        for o in oracle.iter().filter(|o| !classes.iter().any(|c| same_class(c, o))) {
            let _ = writeln!(diff, "+ {}", describe(o));
        }
        return Err(CliError::Verification(diff));
    }
    if classes.len() != expected_count {
        return Err(CliError::Verification(format!(
            "expected {expected_count} classes, found {}",
            classes.len()
        )));
    }
    Ok(())
}

fn same_class(a: &ClassReport, b: &ClassReport) -> bool {
    a.period == b.period && a.canonical == b.canonical
}
