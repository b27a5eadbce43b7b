//! Report rendering behind the `olt` binary. Every command builds its whole
//! output as a string so it is flushed once.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use olt_core::analysis::grid_angles;
use olt_core::functional::setting_combinations;
use olt_core::protocol::evolve_reduced;
use olt_core::{
    correlation_direct, correlator_table, optimize_angles_with, ppt_separable, stabilizer_eigenvalue,
    verify_factorization, violation_report, AngleSetting, DensityMatrix, OltError, OptimizerConfig, Route,
    Scenario, SettingsVector, ViolationReport,
};

/// `x` rounded to `digits` significant digits, trailing zeros dropped.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        let s = format!("{:.*e}", digits.saturating_sub(1), x);
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        return format!("{}e{e}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A setting in scenario syntax with 12 significant digits per angle.
pub fn fmt_setting(s: &AngleSetting) -> String {
    let angles: Vec<String> = s.params().iter().map(|&a| fmt_sig(a, 12)).collect();
    format!("{}:{}", s.mode(), angles.join(","))
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Scenario::parse(&text).map_err(|e| match e {
        OltError::Parse { .. } => anyhow::anyhow!("parse error in {}: {e}", path.display()),
        OltError::PartyMismatch { .. } | OltError::ShapeMismatch { .. } => {
            anyhow::anyhow!("invariant violated in {}: {e}", path.display())
        }
        other => anyhow::anyhow!("invalid scenario {}: {other}", path.display()),
    })
}

struct Inputs {
    system: DensityMatrix,
    ancilla: DensityMatrix,
}

fn build_inputs(sc: &Scenario) -> Result<Inputs> {
    Ok(Inputs {
        system: sc.system.build().context("system state")?,
        ancilla: sc.ancilla.build().context("ancilla state")?,
    })
}

fn echo(out: &mut String, sc: &Scenario) {
    out.push_str("[scenario]\n");
    out.push_str(&sc.to_string());
    out.push('\n');
}

fn verdict_lines(out: &mut String, r: &ViolationReport) {
    let _ = writeln!(out, "bound = {}", fmt_sig(r.bound, 12));
    let _ = writeln!(out, "verdict = {}", if r.violated { "violated" } else { "not violated" });
    let _ = writeln!(out, "margin = {}", fmt_sig(r.margin, 12));
}

/// Rounding noise below the structural tolerance prints as zero.
fn denoise(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn combo_label(combo: &[usize]) -> String {
    let parts: Vec<String> = combo.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// Cut verdicts of a reduced state: the single bipartition for two parties,
/// every one-party cut otherwise.
fn separability(reduced: &DensityMatrix) -> Result<String> {
    let n = reduced.n_qubits();
    let cuts: Vec<usize> = if n == 2 { vec![0] } else { (0..n).collect() };
    let mut parts = Vec::new();
    for party in cuts {
        let r = ppt_separable(reduced, &[party])?;
        let label = if n == 2 { String::new() } else { format!("{party}|rest ") };
        parts.push(format!("{label}{} (min PT eigenvalue {})", r.verdict(), fmt_sig(denoise(r.min_eigenvalue), 6)));
    }
    Ok(parts.join(", "))
}

pub fn run_report(sc: &Scenario) -> Result<String> {
    let Some(settings) = &sc.settings else {
        bail!("run needs explicit settings (settings.<party> = ...)");
    };
    let inputs = build_inputs(sc)?;
    let functional = sc.functional.build()?;
    let table = correlator_table(&inputs.system, &inputs.ancilla, settings, Route::Direct)?;
    let report = violation_report(&functional, &table)?;
    let parity = stabilizer_eigenvalue(&inputs.system);

    let mut out = String::new();
    echo(&mut out, sc);

    out.push_str("[correlators]\n");
    let shape: Vec<usize> = settings.iter().map(Vec::len).collect();
    for combo in setting_combinations(&shape) {
        let _ = writeln!(out, "{} = {}", combo_label(&combo), fmt_sig(table.get(&combo), 12));
    }

    out.push_str("\n[result]\n");
    let _ = writeln!(out, "functional = {}", functional.label());
    let _ = writeln!(out, "value = {}", fmt_sig(report.value, 12));
    verdict_lines(&mut out, &report);
    let eigen = match parity.eigenvalue {
        Some(1) => "+1 eigenstate",
        Some(_) => "-1 eigenstate",
        None => "not an eigenstate",
    };
    let _ = writeln!(out, "system parity = {eigen} (expectation {})", fmt_sig(parity.expectation, 12));

    out.push_str("\n[reduced states]\n");
    for combo in setting_combinations(&shape) {
        let chosen: SettingsVector = combo.iter().enumerate().map(|(p, &s)| settings[p][s]).collect::<Vec<_>>().into();
        let reduced = evolve_reduced(&inputs.system, &inputs.ancilla, &chosen)?;
        let _ = writeln!(out, "{} = {}", combo_label(&combo), separability(&reduced)?);
    }
    Ok(out)
}

pub fn optimize_report(sc: &Scenario, restarts: usize, seed: u64) -> Result<String> {
    let inputs = build_inputs(sc)?;
    let functional = sc.functional.build()?;
    let config = OptimizerConfig {
        restarts,
        seed,
        ..OptimizerConfig::default()
    };
    let result = optimize_angles_with(&inputs.system, &inputs.ancilla, &functional, sc.mode, &config)?;
    let table = correlator_table(&inputs.system, &inputs.ancilla, &result.best_settings, Route::Factorized)?;
    let report = violation_report(&functional, &table)?;

    let mut out = String::new();
    echo(&mut out, sc);
    out.push_str("[optimization]\n");
    let _ = writeln!(out, "functional = {}", functional.label());
    let _ = writeln!(out, "mode = {}", sc.mode);
    let _ = writeln!(out, "restarts = {}", result.restarts_used);
    let _ = writeln!(out, "seed = {seed}");
    let _ = writeln!(out, "converged = {}", result.converged);
    let _ = writeln!(out, "best value = {}", fmt_sig(result.best_value, 12));
    verdict_lines(&mut out, &report);

    out.push_str("\n[best settings]\n");
    for (party, list) in result.best_settings.iter().enumerate() {
        let items: Vec<String> = list.iter().map(fmt_setting).collect();
        let _ = writeln!(out, "settings.{party} = {}", items.join("; "));
    }
    Ok(out)
}

/// CSV of the two-party correlator and reduced-state separability over a
/// `grid × grid` lattice of planar angles, row-major in `(theta_a, theta_b)`.
pub fn sweep_csv(sc: &Scenario, grid: usize) -> Result<String> {
    if sc.n_parties() != 2 {
        bail!("sweep needs a 2-party scenario, got {} parties", sc.n_parties());
    }
    if grid < 2 {
        bail!("grid must be at least 2, got {grid}");
    }
    let inputs = build_inputs(sc)?;
    let angles = grid_angles(grid);
    let mut out = String::from("theta_a,theta_b,correlator,separable\n");
    for &a in &angles {
        for &b in &angles {
            let settings: SettingsVector = vec![AngleSetting::so2(a), AngleSetting::so2(b)].into();
            let corr = correlation_direct(&inputs.system, &inputs.ancilla, &settings)?;
            let reduced = evolve_reduced(&inputs.system, &inputs.ancilla, &settings)?;
            let separable = ppt_separable(&reduced, &[1])?.separable().expect("two-qubit test is conclusive");
            let _ = writeln!(out, "{},{},{},{separable}", fmt_sig(a, 15), fmt_sig(b, 15), fmt_sig(corr, 15));
        }
    }
    Ok(out)
}

/// Report text and whether the campaign passed.
pub fn verify_report(parties: usize, trials: usize, seed: u64) -> Result<(String, bool)> {
    if !(2..=4).contains(&parties) {
        bail!("--parties must be 2, 3 or 4, got {parties}");
    }
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    let r = verify_factorization(trials, parties, seed)?;
    let mut out = String::new();
    let _ = writeln!(out, "parties = {parties}");
    let _ = writeln!(out, "trials = {}", r.trials);
    let _ = writeln!(out, "seed = {seed}");
    let _ = writeln!(out, "max deviation = {:.3e}", r.max_deviation);
    let _ = writeln!(out, "result = {}", if r.pass { "pass" } else { "FAIL" });
    Ok((out, r.pass))
}

/// The `[scenario]` section of a report.
pub fn echoed_scenario(report: &str) -> Option<&str> {
    let start = report.find("[scenario]\n")? + "[scenario]\n".len();
    let rest = &report[start..];
    let end = rest.find("\n\n").map_or(rest.len(), |i| i + 1);
    Some(&rest[..end])
}
