//! Command implementations. Every command is deterministic given its config
//! (and seed, where one applies); reports echo the inputs, the environment
//! overrides, and the crate version so a report can be reproduced
//! bit-for-bit from its own contents.

use crate::config::RunConfig;
use crate::{write_atomic, CommandError, Environment};
use nlspec_core::inverse::{ball_rigidity_verdict, geometry_from_fit, Rigidity};
use nlspec_core::spectra::{
    disk_spectrum, interval_spectrum, rectangle_fd_spectrum, spectrum_export, spectrum_import,
    Domain, Spectrum,
};
use nlspec_core::trace::{fit_spectrum, sample_heat_trace, select_t_window};
use nlspec_core::verify::{inverse_identity_suite, parametrix_defect_suite, VerifyField};
use num_complex::Complex64;
use serde_json::json;
use std::path::{Path, PathBuf};

const INVERSE_ERROR_THRESHOLD: f64 = 1e-12;

fn base_report(command: &str, config: Option<&RunConfig>, env: &Environment) -> serde_json::Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config.map(|c| serde_json::to_value(c).unwrap()),
        "environment": {
            "out_dir_override": env.out_dir_override,
            "threads": env.threads,
        },
    })
}

fn classify_core(e: &nlspec_core::Error) -> CommandError {
    use nlspec_core::Error as E;
    match e {
        E::PoleProximity { .. }
        | E::InvalidParameter(_)
        | E::InvalidMetric(_)
        | E::ChartError(_)
        | E::MalformedFile { .. }
        | E::SortedViolation { .. }
        | E::Io(_) => CommandError::Config(e.to_string()),
        E::TruncationDominated { .. } => CommandError::Solver(format!(
            "{e}; increase the eigenvalue count or raise trace.t_min"
        )),
        E::RootBracketFailure(_)
        | E::DiscretizationTooCoarse { .. }
        | E::EigensolverFailure(_)
        | E::IllConditionedFit { .. } => CommandError::Solver(e.to_string()),
    }
}

fn out_path(env: &Environment, config: Option<&RunConfig>, name: &str) -> PathBuf {
    let dir = env
        .out_dir_override
        .clone()
        .or_else(|| config.and_then(|c| c.output.as_ref()).and_then(|o| o.dir.clone()))
        .unwrap_or_else(|| ".".into());
    PathBuf::from(dir).join(name)
}

fn emit(report: &serde_json::Value, path: &Path) -> Result<(), CommandError> {
    let text = serde_json::to_string_pretty(report).expect("report serialization");
    write_atomic(path, &text).map_err(|e| CommandError::Config(e.to_string()))?;
    println!("{text}");
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// Randomized principal-inverse suite plus parametrix-defect diagnostics.
/// Exit 2 when any threshold is violated.
pub fn cmd_symbol_verify(config: &RunConfig, env: &Environment) -> Result<(), CommandError> {
    let params = config.params().map_err(|e| CommandError::Config(e.to_string()))?;
    let sv = config.symbol_verify.clone().unwrap_or(crate::config::SymbolVerifySection {
        trials: None,
        seed: None,
        fields: None,
        max_order: None,
        tau: None,
    });
    let trials = sv.trials.unwrap_or(1000);
    let seed = sv.seed.unwrap_or(0);
    let fields: Vec<VerifyField> = sv
        .fields
        .unwrap_or_else(|| vec!["flat".into(), "polar".into(), "sphere".into()])
        .iter()
        .map(|f| f.parse().map_err(|e: nlspec_core::Error| CommandError::Config(e.to_string())))
        .collect::<Result<_, _>>()?;
    let max_order = sv.max_order.unwrap_or(2);
    let tau = sv.tau.map(|[re, im]| Complex64::new(re, im));

    let mut report = base_report("symbol-verify", Some(config), env);
    report["seed"] = json!(seed);

    let suite = match inverse_identity_suite(&params, trials, seed, tau) {
        Ok(s) => s,
        Err(e) => {
            // Structured error in the report; a spectral parameter placed on
            // a wave ray is a config-class failure.
            report["error"] = json!({
                "kind": match e {
                    nlspec_core::Error::PoleProximity { .. } => "PoleProximity",
                    _ => "Error",
                },
                "message": e.to_string(),
            });
            let path = out_path(env, Some(config), "symbol_verify.json");
            emit(&report, &path)?;
            return Err(classify_core(&e));
        }
    };
    let defects =
        parametrix_defect_suite(&params, &fields, max_order, 1e-3).map_err(|e| classify_core(&e))?;

    let all_pass =
        suite.max_inverse_error < INVERSE_ERROR_THRESHOLD && defects.iter().all(|d| d.passes());
    report["results"] = json!({
        "trials": suite.trials,
        "max_inverse_error": suite.max_inverse_error,
        "max_trace_error": suite.max_trace_error,
        "inverse_error_threshold": INVERSE_ERROR_THRESHOLD,
        "defects": defects.iter().map(|d| json!({
            "field": d.field.name(),
            "max_order": d.max_order,
            "defect": d.defect,
            "threshold": d.threshold,
            "pass": d.passes(),
        })).collect::<Vec<_>>(),
        "pass": all_pass,
    });
    let path = out_path(env, Some(config), "symbol_verify.json");
    emit(&report, &path)?;
    if all_pass {
        Ok(())
    } else {
        Err(CommandError::Threshold("symbol verification exceeded a threshold".into()))
    }
}

/// Closed-form coefficient prediction for the configured domain.
pub fn cmd_predict(config: &RunConfig, env: &Environment) -> Result<(), CommandError> {
    let params = config.params().map_err(|e| CommandError::Config(e.to_string()))?;
    let domain = config.require_domain().map_err(|e| CommandError::Config(e.to_string()))?;
    let n = domain.dim();
    let p = nlspec_core::heat::predict_coefficients(
        n,
        &params,
        domain.volume(),
        domain.boundary_volume(),
    );
    let mut report = base_report("predict", Some(config), env);
    report["results"] = json!({
        "n": n,
        "vol": p.vol,
        "boundary_vol": p.boundary_vol,
        "a0": p.a0,
        "a1": p.a1,
        "weyl_coefficient": nlspec_core::heat::weyl_coefficient(n, &params, domain.volume()),
        "trace_model": "a0 t^{-n/2} - sign a1 t^{-(n-1)/2} + O(t^{-(n-2)/2}), sign -1 Dirichlet / +1 traction-free",
    });
    let path = out_path(env, Some(config), "predict.json");
    emit(&report, &path)
}

fn solve_from_config(config: &RunConfig) -> Result<Spectrum, CommandError> {
    let params = config.params().map_err(|e| CommandError::Config(e.to_string()))?;
    let domain = config.require_domain().map_err(|e| CommandError::Config(e.to_string()))?;
    let bc = config.bc().map_err(|e| CommandError::Config(e.to_string()))?;
    let solver = config.solver.clone().unwrap_or(crate::config::SolverSection {
        count: None,
        grid_n: None,
        m_max: None,
        k_max: None,
    });
    let spectrum = match domain {
        Domain::Interval { length } => {
            interval_spectrum(length, &params, bc, solver.count.unwrap_or(500))
        }
        Domain::Rectangle { a, b } => {
            rectangle_fd_spectrum(a, b, &params, bc, solver.grid_n.unwrap_or(48))
        }
        Domain::Disk { radius } => {
            if bc != nlspec_core::spectra::BoundaryCondition::Dirichlet {
                return Err(CommandError::Config(
                    "the disk solver supports only the Dirichlet condition".into(),
                ));
            }
            disk_spectrum(radius, &params, solver.m_max.unwrap_or(40), solver.k_max.unwrap_or(12))
        }
    };
    spectrum.map_err(|e| classify_core(&e))
}

/// Solves the configured eigenvalue problem and writes the spectrum file.
pub fn cmd_eigs(config: &RunConfig, env: &Environment) -> Result<(), CommandError> {
    let spectrum = solve_from_config(config)?;
    let path = out_path(env, Some(config), "spectrum.csv");
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CommandError::Config(e.to_string()))?;
    }
    spectrum_export(&spectrum, &path).map_err(|e| classify_core(&e))?;
    let mut report = base_report("eigs", Some(config), env);
    report["results"] = json!({
        "count": spectrum.count(),
        "tau_1": spectrum.first(),
        "tau_max": spectrum.last(),
        "spectrum_file": path.display().to_string(),
    });
    emit(&report, &out_path(env, Some(config), "eigs.json"))
}

/// Samples the heat trace, fits the expansion coefficients, and compares to
/// the closed-form prediction. Optionally reads the spectrum from a file
/// instead of solving.
pub fn cmd_trace_fit(
    config: &RunConfig,
    spectrum_file: Option<&Path>,
    env: &Environment,
) -> Result<(), CommandError> {
    let spectrum = match spectrum_file {
        Some(p) => spectrum_import(p).map_err(|e| classify_core(&e))?,
        None => solve_from_config(config)?,
    };
    let trace_cfg = config.trace.clone().unwrap_or(crate::config::TraceSection {
        t_min: None,
        t_max: None,
        samples: None,
    });
    let window = match (trace_cfg.t_min, trace_cfg.t_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        _ => None,
    };
    let samples_n = trace_cfg.samples.unwrap_or(16);
    let fit = fit_spectrum(&spectrum, window, samples_n).map_err(|e| classify_core(&e))?;
    let p = fit.prediction.as_ref().expect("fit_spectrum attaches the prediction");
    let (e0, e1) = fit.relative_errors().expect("prediction attached");

    let mut report = base_report("trace-fit", Some(config), env);
    report["results"] = json!({
        "a0_hat": fit.a0_hat,
        "a1_hat": fit.a1_hat,
        "sign": fit.sign,
        "t_window": [fit.t_window.0, fit.t_window.1],
        "residual_norm": fit.residual_norm,
        "prediction": { "a0": p.a0, "a1": p.a1 },
        "relative_errors": { "a0": e0, "a1": e1 },
        "spectrum": {
            "count": spectrum.count(),
            "domain": spectrum.domain().to_string(),
            "bc": spectrum.bc().to_string(),
        },
    });

    // Optional plot data: sampled trace plus the fitted model.
    let want_csv = config
        .output
        .as_ref()
        .and_then(|o| o.formats.as_ref())
        .map(|f| f.iter().any(|s| s == "csv"))
        .unwrap_or(false);
    if want_csv {
        let (lo, hi) = fit.t_window;
        let samples =
            sample_heat_trace(&spectrum, lo, hi, samples_n).map_err(|e| classify_core(&e))?;
        let n = spectrum.domain().dim() as f64;
        let mut csv = String::from("t,value,fitted\n");
        for s in &samples {
            let fitted = fit.a0_hat * s.t.powf(-n / 2.0)
                + (fit.sign as f64) * fit.a1_hat * s.t.powf(-(n - 1.0) / 2.0);
            csv.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", s.t, s.value, fitted));
        }
        let csv_path = out_path(env, Some(config), "trace_fit.csv");
        write_atomic(&csv_path, &csv).map_err(|e| CommandError::Config(e.to_string()))?;
        report["results"]["plot_file"] = json!(csv_path.display().to_string());
    }
    emit(&report, &out_path(env, Some(config), "trace_fit.json"))
}

/// Full pipeline: spectrum file -> coefficient fit -> geometry estimate ->
/// ball-rigidity verdict.
pub fn cmd_hear(
    spectrum_file: &Path,
    mu: Option<f64>,
    lambda: Option<f64>,
    tolerance: f64,
    env: &Environment,
) -> Result<(), CommandError> {
    let spectrum = spectrum_import(spectrum_file).map_err(|e| classify_core(&e))?;
    let params = match (mu, lambda) {
        (Some(m), Some(l)) => nlspec_core::geometry::LameParameters::new(m, l)
            .map_err(|e| CommandError::Config(e.to_string()))?,
        (None, None) => *spectrum.params(),
        _ => {
            return Err(CommandError::Config(
                "provide both --mu and --lambda or neither (metadata is used)".into(),
            ))
        }
    };
    let n = spectrum.domain().dim();
    let window = select_t_window(&spectrum).map_err(|e| classify_core(&e))?;
    let fit = fit_spectrum(&spectrum, Some(window), 16).map_err(|e| classify_core(&e))?;
    let estimate = geometry_from_fit(&fit, n, &params);
    let verdict =
        ball_rigidity_verdict(&estimate, tolerance).map_err(|e| classify_core(&e))?;

    let mut report = base_report("hear", None, env);
    report["inputs"] = json!({
        "spectrum_file": spectrum_file.display().to_string(),
        "mu": params.mu(),
        "lambda": params.lambda(),
        "n": n,
        "tolerance": tolerance,
    });
    report["results"] = json!({
        "vol_hat": estimate.vol_hat,
        "boundary_vol_hat": estimate.boundary_vol_hat,
        "bc_sign": estimate.bc_sign,
        "confidence": estimate.confidence,
        "ratio": verdict.ratio,
        "ball_ratio": verdict.ball_ratio,
        "verdict": match verdict.verdict {
            Rigidity::Ball => "Ball",
            Rigidity::NotBall => "NotBall",
            Rigidity::Inconclusive => "Inconclusive",
        },
        "margin": verdict.margin,
        "consistency_warning": verdict.consistency_warning,
    });
    emit(&report, &out_path(env, None, "hear.json"))
}
