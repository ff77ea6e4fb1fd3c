use std::fmt::Write;
use std::fs;
use std::path::Path;

use clap::ValueEnum;
use monodromy::classify::CanonicalTuple;
use monodromy::hurwitz::{
    apply_word, decide_sim_conjugacy, eta_act, format_word, garside_act, parse_word,
    period3_tuple, rotate, standard_tuple, tau_act, ConjugacyWitness, Decoration, Factorization,
};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Garside,
    Rotate,
    Tau,
    Eta,
}

#[derive(Serialize)]
struct Report {
    applied: String,
    input: Factorization,
    output: Factorization,
    /// `D` with `D input_i D^{-1} = output_i`.
    versus_input: ConjugacyWitness,
    /// Reference tuple the output is conjugate to, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    canonical: Option<CanonicalTuple>,
}

fn canonical_match(f: &Factorization) -> Result<Option<CanonicalTuple>, CliError> {
    let n = f.len() as i64;
    if f.decoration() != Decoration::None || n == 0 || n % 12 != 0 {
        return Ok(None);
    }
    if decide_sim_conjugacy(f, &standard_tuple(n)?)?.is_found() {
        return Ok(Some(CanonicalTuple::Standard));
    }
    if decide_sim_conjugacy(f, &period3_tuple(n)?)?.is_found() {
        return Ok(Some(CanonicalTuple::Period3));
    }
    Ok(None)
}

pub fn run(
    cfg: &RunConfig,
    input: &Path,
    moves: Option<&str>,
    action: Option<Action>,
) -> Result<(), CliError> {
    let raw = fs::read_to_string(input)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.display())))?;
    let f: Factorization = serde_json::from_str(&raw)
        .map_err(|e| CliError::Usage(format!("malformed factorization in {}: {e}", input.display())))?;
    let (applied, output) = match (moves, action) {
        (Some(w), None) => {
            let word = parse_word(w)?;
            (format_word(&word), apply_word(&f, &word)?)
        }
        (None, Some(a)) => {
            let out = match a {
                Action::Garside => garside_act(&f)?,
                Action::Rotate => rotate(&f)?,
                Action::Tau => tau_act(&f)?,
                Action::Eta => eta_act(&f)?,
            };
            (format!("{a:?}").to_lowercase(), out)
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --moves or --action".into(),
            ))
        }
    };
    let versus_input = if f.decoration() == Decoration::None {
        decide_sim_conjugacy(&f, &output)?
    } else {
        monodromy::hurwitz::decide_tuple_conjugacy(
            f.entries(),
            output.entries(),
            &Default::default(),
        )?
    };
    let report = Report {
        applied,
        canonical: canonical_match(&output)?,
        input: f,
        output,
        versus_input,
    };
    let text = match cfg.format {
        Format::Json => cfg.json(&report)?,
        Format::Text => {
            let mut s = cfg.header();
            s.push('\n');
            let _ = writeln!(s, "applied: {}", report.applied);
            let _ = writeln!(s, "output ({} entries):", report.output.len());
            for m in report.output.entries() {
                let _ = writeln!(s, "  {m:?}");
            }
            let _ = writeln!(s, "versus input: {:?}", report.versus_input);
            if let Some(t) = report.canonical {
                let _ = writeln!(s, "conjugate to {t:?} tuple");
            }
            s
        }
    };
    cfg.emit(&text)
}
