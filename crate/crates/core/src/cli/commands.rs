use std::io::Write;

use rayon::prelude::*;

use super::config::{Command, Mode, RunConfig};
use super::io::{csv_text, manifest, manifest_path, rational_fields, read_spectrum, spectrum_csv, write_atomic};
use super::CliError;
use crate::convolution::{finite_convolution, omega_factors, original_factors, rearrange, rearranged_prefix};
use crate::fourier::{empirical_cf_many, equivalence_gap, grid, mu_hat, nu_hat};
use crate::moran::{level_measure, refinement_check, DiscreteMeasure};
use crate::spectra::{bizero_check, build_spectrum, q_grid, SpectraError, SpectrumCandidate, Transform};
use crate::spectrality::{decide, decompose_spectrum, default_modulus};

/// Runs one command; stdout-style output goes to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    match config.command {
        Command::Decide => run_decide(config, out),
        Command::Transform => run_transform(config, out),
        Command::Measure => run_measure(config, out),
        Command::Spectrum => run_spectrum(config, out),
        Command::Qcheck => run_qcheck(config, out),
        Command::Oracle => run_oracle(config, out),
        Command::Decompose => run_decompose(config, out),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Sends `bytes` to the output file if one is configured, else to `out`.
fn emit(config: &RunConfig, out: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match &config.output_path {
        Some(p) => write_atomic(p, bytes),
        None => out.write_all(bytes).map_err(io_err),
    }
}

fn f(x: f64) -> String {
    format!("{x:e}")
}

fn run_decide(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let verdict = decide(&config.params);
    let report = verdict.report(&config.params);
    if let Some(p) = &config.output_path {
        write_atomic(p, report.as_bytes())?;
    }
    out.write_all(report.as_bytes()).map_err(io_err)?;
    Ok(verdict.exit_code())
}

fn run_transform(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let ts = grid(config.grid.t_min, config.grid.t_max, config.grid.count);
    let k = config.truncation;
    let mut header = vec!["t", "re_mu", "im_mu", "bound_mu"];
    if config.include_nu {
        header.extend(["re_nu", "im_nu", "bound_nu"]);
    }
    let rows: Vec<Vec<String>> = ts
        .par_iter()
        .map(|&t| {
            let m = mu_hat(&config.params, t, k);
            let mut row = vec![f(t), f(m.value.re), f(m.value.im), f(m.error_bound)];
            if config.include_nu {
                let n = nu_hat(&config.params, t, k);
                row.extend([f(n.value.re), f(n.value.im), f(n.error_bound)]);
            }
            row
        })
        .collect();
    emit(config, out, &csv_text(&header, rows))?;
    Ok(0)
}

fn finite_measure(config: &RunConfig, mode: Mode) -> Result<DiscreteMeasure, CliError> {
    let p = &config.params;
    let k = config.levels;
    Ok(match mode {
        Mode::Level => level_measure(p, config.level, k),
        Mode::Convolution | Mode::Factors => finite_convolution(&rearranged_prefix(p, k).factors, k),
        Mode::Original => finite_convolution(&original_factors(p, k), k),
        Mode::Mu | Mode::Nu => {
            return Err(CliError::Input("mode mu/nu does not describe a finite measure".into()))
        }
    })
}

fn run_measure(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let m = finite_measure(config, config.mode.unwrap_or(Mode::Convolution))?;
    let rows = m.atoms().map(|(x, w)| {
        let [a, b] = rational_fields(&x);
        let [c, d] = rational_fields(&w);
        vec![a, b, c, d]
    });
    emit(config, out, &csv_text(&["num", "den", "weight_num", "weight_den"], rows))?;
    Ok(0)
}

fn spectrum_for(config: &RunConfig) -> Result<SpectrumCandidate, CliError> {
    match &config.spectrum_file {
        Some(p) => read_spectrum(p),
        None => build_spectrum(&config.params, config.levels).map_err(guard_error),
    }
}

fn guard_error(e: SpectraError) -> CliError {
    match e {
        SpectraError::Guards(g) => {
            CliError::Guard(g.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
        }
        other => CliError::Guard(other.to_string()),
    }
}

fn run_spectrum(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let s = build_spectrum(&config.params, config.levels).map_err(guard_error)?;
    emit(config, out, &spectrum_csv(s.realized()))?;
    if let Some(p) = &config.output_path {
        write_atomic(&manifest_path(p), manifest(&s).as_bytes())?;
    }
    Ok(0)
}

fn run_qcheck(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let lambda = spectrum_for(config)?;
    let p = &config.params;
    let transform = match config.mode.unwrap_or(Mode::Convolution) {
        Mode::Mu => Transform::MuHat { params: p.clone(), truncation: config.truncation },
        Mode::Nu => Transform::NuHat { params: p.clone(), truncation: config.truncation },
        Mode::Factors => Transform::factors(&rearranged_prefix(p, config.levels).factors),
        mode => Transform::empirical(&finite_measure(config, mode)?),
    };
    let ts = grid(config.grid.t_min, config.grid.t_max, config.grid.count);
    let rows = q_grid(&lambda, &transform, &ts)
        .into_iter()
        .map(|v| vec![f(v.t), f(v.value), f(v.lower), f(v.upper)]);
    emit(config, out, &csv_text(&["t", "q", "lower", "upper"], rows))?;
    Ok(0)
}

fn run_oracle(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = &config.params;
    let mut all_ok = true;
    let mut line = |name: &str, ok: bool, detail: String| -> Result<(), CliError> {
        all_ok &= ok;
        writeln!(out, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" }).map_err(io_err)
    };

    let mut refinement_failures = Vec::new();
    for k in 1..=2 {
        for depth in 1..=4 {
            if let Err(e) = refinement_check(p, k, depth) {
                refinement_failures.push(format!("k={k} depth={depth}: {e}"));
            }
        }
    }
    line(
        "refinement",
        refinement_failures.is_empty(),
        if refinement_failures.is_empty() {
            "levels 1-2, depths 1-4 exact".into()
        } else {
            refinement_failures.join("; ")
        },
    )?;

    let top = config.levels.max(2);
    let bad: Vec<usize> = (2..=top)
        .filter(|&k| {
            let orig = finite_convolution(&original_factors(p, k), k);
            let re = rearrange(p, k);
            finite_convolution(&re.factors, re.len()) != orig
        })
        .collect();
    line(
        "rearrangement",
        bad.is_empty(),
        if bad.is_empty() { format!("levels 2-{top} exact") } else { format!("mismatch at levels {bad:?}") },
    )?;

    let ts = grid(config.grid.t_min, config.grid.t_max, config.grid.count);
    let gaps: Vec<_> = ts.par_iter().map(|&t| equivalence_gap(p, t, config.truncation)).collect();
    let worst = gaps.iter().map(|g| g.gap).fold(0.0, f64::max);
    let violations = gaps.iter().filter(|g| g.gap > g.bound).count();
    line(
        "equivalence",
        violations == 0,
        format!("max gap {worst:e}, {violations} points outside the certified bound"),
    )?;

    let k = config.levels;
    let m = finite_convolution(&original_factors(p, k), k);
    let emp = empirical_cf_many(&m, &ts);
    let worst = ts
        .iter()
        .zip(&emp)
        .map(|(&t, &e)| (nu_hat(p, t, k).value - e).norm())
        .fold(0.0, f64::max);
    line(
        "two-path",
        worst < config.tolerance.max(1e-8),
        format!("max difference {worst:e} at {k} levels"),
    )?;

    Ok(if all_ok { 0 } else { 1 })
}

fn run_decompose(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = &config.params;
    let lambda = spectrum_for(config)?;
    let seq = rearranged_prefix(p, config.levels.max(2));
    let first = &seq.factors[0];
    let d1 = config.d1.clone().unwrap_or_else(|| first.step.clone());
    let gamma1 = config.gamma1.unwrap_or(first.digits.len() as u64);
    let c = match config.modulus {
        Some(c) => c,
        None => u64::try_from(default_modulus(p))
            .map_err(|_| CliError::Input("default modulus does not fit in 64 bits".into()))?,
    };
    let q = if gamma1 == 0 { 0 } else { c / gamma1 };
    let choices = config.choices.clone().unwrap_or_else(|| vec![0; q as usize]);
    let d = decompose_spectrum(&lambda, &d1, gamma1, c, &choices).map_err(|e| CliError::Input(e.to_string()))?;
    let points = d.gamma.as_ref().map(|g| g.realized().to_vec()).unwrap_or_default();
    emit(config, out, &spectrum_csv(&points))?;
    if config.output_path.is_some() {
        let mut summary = format!("c = {}\nq = {}\nclasses = {}\ngamma_size = {}\n", d.c, d.q, d.classes.len(), points.len());
        if let (None, Some(g)) = (&config.spectrum_file, &d.gamma) {
            let extra = config.levels.max(2) - 1;
            let tail = omega_factors(&seq, 1, extra);
            summary.push_str(&format!("bizero_tail = {}\n", bizero_check(g, &tail, extra).holds()));
        }
        out.write_all(summary.as_bytes()).map_err(io_err)?;
    }
    Ok(0)
}
