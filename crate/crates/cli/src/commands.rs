//! The subcommands as pure functions from inputs to report values.

use crolab::channels::{pauli_index_from_str, pauli_index_to_str};
use crolab::cro::{classify as classify_kind, eb_ppt_test, vqa_replaceable_set_r_with, CroKind, EbVerdict};
use crolab::game::advantage_report;
use crolab::measures::{relative_entropy_irreplaceability, robustness_with, sweep_u_theta_with};
use crolab::{Channel64, SdpOptions};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::format::{csv_field, fmt_sig};

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;
pub const DEFAULT_SOLVER_TOL: f64 = 1e-7;
pub const DEFAULT_GAME_TOL: f64 = 1e-3;
pub const MAX_MEASURES_DIM: usize = 8;
pub const CSV_DIGITS: usize = 12;

fn envelope(command: &str, tol: f64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!("crolab"));
    m.insert("version".into(), json!(crate::VERSION));
    m.insert("command".into(), json!(command));
    m.insert("tol".into(), json!(tol));
    m
}

fn solver_options(tol: f64) -> SdpOptions<f64> {
    let defaults = SdpOptions::<f64>::default();
    SdpOptions {
        tol_gap: tol,
        tol_feas: defaults.tol_feas.min(tol),
        ..defaults
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::parse(format!("--tol must be positive, got {tol}")))
    }
}

fn eb_name(v: EbVerdict) -> &'static str {
    match v {
        EbVerdict::EbConfirmed => "eb_confirmed",
        EbVerdict::NotEbConfirmed => "not_eb_confirmed",
        EbVerdict::Inconclusive => "inconclusive",
    }
}

/// Membership in the four classes, the PPT verdict and, when any class
/// holds, the replacement matrix `T[j][i] = ⟨j|O(|i⟩⟨i|)|j⟩`.
pub fn classify(o: &Channel64, tol: f64) -> Result<Value, CliError> {
    check_tol(tol)?;
    let mut report = envelope("classify", tol);
    report.insert("dim".into(), json!(o.dim()));
    let mut replacement = None;
    for kind in CroKind::ALL {
        let v = classify_kind(o, kind, tol);
        if replacement.is_none() {
            replacement = v.replacement.as_ref().map(|t| t.to_rows());
        }
        report.insert(
            kind.name().into(),
            json!({"member": v.is_member, "residual": v.residual}),
        );
    }
    report.insert("eb_ppt".into(), json!(eb_name(eb_ppt_test(o))));
    report.insert("replacement".into(), json!(replacement));
    Ok(Value::Object(report))
}

pub fn measures(n: &Channel64, tol: f64) -> Result<Value, CliError> {
    check_tol(tol)?;
    if n.dim() > MAX_MEASURES_DIM {
        return Err(CliError::from(crolab::Error::Unsupported(format!(
            "measures support d ≤ {MAX_MEASURES_DIM}, got {}",
            n.dim()
        ))));
    }
    let r = robustness_with(n, &solver_options(tol))?;
    let mut report = envelope("measures", tol);
    report.insert("dim".into(), json!(n.dim()));
    report.insert("robustness".into(), json!(r.value));
    report.insert(
        "relative_entropy_bits".into(),
        json!(relative_entropy_irreplaceability(n)),
    );
    report.insert("witness_trace_check".into(), json!(r.witness_value(n)));
    report.insert("duality_gap".into(), json!(r.abs_gap));
    report.insert("iterations".into(), json!(r.iterations));
    Ok(Value::Object(report))
}

/// CSV of the `U(θ)` family. A fourth `solver_error` column appears only
/// when some row failed; the failed row leaves `robustness` empty.
pub fn sweep(family: &str, points: usize, threads: usize, tol: f64) -> Result<String, CliError> {
    check_tol(tol)?;
    if family != "u-theta" {
        return Err(CliError::parse(format!(
            "unknown sweep family `{family}` (expected u-theta)"
        )));
    }
    if points < 2 {
        return Err(CliError::parse("--points must be at least 2"));
    }
    let rows = sweep_u_theta_with::<f64>(points, threads, &solver_options(tol))?;
    let any_failed = rows.iter().any(|r| r.robustness.is_err());
    let mut out = String::from("theta,robustness,relative_entropy_bits");
    if any_failed {
        out.push_str(",solver_error");
    }
    out.push('\n');
    for row in &rows {
        out.push_str(&fmt_sig(row.theta, CSV_DIGITS));
        out.push(',');
        if let Ok(r) = &row.robustness {
            out.push_str(&fmt_sig(*r, CSV_DIGITS));
        }
        out.push(',');
        out.push_str(&fmt_sig(row.relative_entropy_bits, CSV_DIGITS));
        if any_failed {
            out.push(',');
            if let Err(e) = &row.robustness {
                out.push_str(&csv_field(&e.to_string()));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Builds the witness game for `n` and checks `payoff / max_qcCRO = 1 + R`.
/// `tol` bounds the accepted gap.
pub fn game(n: &Channel64, tol: f64) -> Result<Value, CliError> {
    check_tol(tol)?;
    let rep = advantage_report(n)?;
    let mut report = envelope("game", tol);
    report.insert("dim".into(), json!(n.dim()));
    report.insert("payoff".into(), json!(rep.payoff));
    report.insert("qccro_max".into(), json!(rep.qccro_max));
    report.insert("qccro_min".into(), json!(rep.qccro_min));
    report.insert("advantage_ratio".into(), json!(rep.advantage_ratio));
    report.insert("one_plus_R".into(), json!(rep.one_plus_r));
    report.insert("gap".into(), json!(rep.gap));
    report.insert("identity_holds".into(), json!(rep.gap <= tol));
    Ok(Value::Object(report))
}

pub fn vqa_check(o: &Channel64, observables: &[String], threads: usize, tol: f64) -> Result<Value, CliError> {
    check_tol(tol)?;
    let d = o.dim();
    if !d.is_power_of_two() || d < 2 {
        return Err(CliError::parse(format!(
            "vqa-check needs a qubit channel, got dimension {d}"
        )));
    }
    let n = d.trailing_zeros() as usize;
    if observables.is_empty() {
        return Err(CliError::parse("vqa-check needs at least one observable"));
    }
    let indices = observables
        .iter()
        .map(|s| {
            if s.chars().count() != n {
                return Err(CliError::parse(format!("observable `{s}` must have {n} Pauli letters")));
            }
            Ok(pauli_index_from_str(s)?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (member, j) = vqa_replaceable_set_r_with(o, &indices, n, threads, tol)?;
    let mut report = envelope("vqa-check", tol);
    report.insert("n_qubits".into(), json!(n));
    report.insert(
        "observable".into(),
        json!(indices.iter().map(|&i| pauli_index_to_str(i, n)).collect::<Vec<_>>()),
    );
    report.insert("member".into(), json!(member));
    report.insert("replacing_pauli_j".into(), json!(j.map(|j| pauli_index_to_str(j, n))));
    Ok(Value::Object(report))
}
