//! One function per experiment; each returns CSV artifacts and summary lines.

use std::path::Path;

use rayon::prelude::*;

use ptdyn::dynamics::{
    default_power_law_window, default_relaxation_window, distinguishability_series, evolve, fit_power_law_exponent,
    fit_recurrence_time, fit_relaxation_time, log_grid, uniform_grid, TimeSeries, DEFAULT_POINTS,
};
use ptdyn::embedding::{
    build_h_tot, entanglement_entropy_series, mutual_information_series, postselected_distinguishability_series,
};
use ptdyn::models::{build_hamiltonian, classify_regime, recurrence_time, relaxation_time, Family, RegimeKind};
use ptdyn::optics::{compile_single_qubit, compile_two_qubit, CompileOptions, DecompositionVariant};
use ptdyn::qcore::{mat_exp, trace_distance};
use ptdyn::rng::child_seed;
use ptdyn::tomography::{born_probabilities, mle_fit, simulate_counts, standard_bases, MleOptions};
use ptdyn::{Complex, Density, Matrix, Spec};

use crate::config::{Experiment, ExperimentConfig, GridKind};
use crate::{csv, fmt_num, CliError};

/// Grid size for tomography runs when none is given.
pub const TOMOGRAPHY_POINTS: usize = 32;

/// One CSV document; `suffix` names secondary outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub suffix: Option<String>,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    /// Human-readable `key=value` lines (fits, residuals).
    pub summary: Vec<String>,
}

impl RunOutput {
    fn primary(contents: String) -> Self {
        Self { artifacts: vec![Artifact { suffix: None, contents }], summary: vec![] }
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    match cfg.experiment {
        Experiment::Distinguishability => distinguishability(cfg),
        Experiment::Scaling => scaling(cfg),
        Experiment::PowerLaw => power_law(cfg),
        Experiment::Embed => embed(cfg),
        Experiment::Tomography => tomography(cfg),
        Experiment::Compile => compile(cfg),
    }
}

fn spec(cfg: &ExperimentConfig, a: f64) -> Result<Spec, CliError> {
    Ok(Spec::new(cfg.family, a, cfg.c)?)
}

/// Regime-dependent default span of `spec`.
fn default_span(spec: &Spec) -> (f64, f64, GridKind) {
    if spec.family() == Family::NoSymmetry {
        return (0.0, 10.0, GridKind::Uniform);
    }
    let a = spec.a();
    match classify_regime(a).kind {
        RegimeKind::Unbroken => (0.0, 4.0 * recurrence_time(a).unwrap(), GridKind::Uniform),
        RegimeKind::Broken => (0.0, 8.0 * relaxation_time(a).unwrap(), GridKind::Uniform),
        RegimeKind::ExceptionalPoint => (0.1, 200.0, GridKind::Log),
    }
}

/// Configured grid with unset fields taken from `default`.
fn grid(cfg: &ExperimentConfig, default: (f64, f64, GridKind), points: usize) -> Result<Vec<f64>, CliError> {
    let g = &cfg.grid;
    let kind = g.kind.unwrap_or(default.2);
    let t0 = g.t_min.unwrap_or(if kind == GridKind::Log { default.0.max(1e-3) } else { default.0 });
    let t1 = g.t_max.unwrap_or(default.1);
    let n = g.points.unwrap_or(points);
    if t1 <= t0 || (kind == GridKind::Log && t0 <= 0.0) {
        return Err(CliError::Config(vec![format!("grid: empty or invalid span [{t0}, {t1}] for a {kind:?} grid")]));
    }
    Ok(match kind {
        GridKind::Uniform => uniform_grid(t0, t1, n),
        GridKind::Log => log_grid(t0, t1, n),
    })
}

fn initial_states(cfg: &ExperimentConfig) -> (Density, Density) {
    (Density::pure(&cfg.initial.0.state()), Density::pure(&cfg.initial.1.state()))
}

/// Fit appropriate to the regime, rendered as summary text.
fn describe_fit(cfg: &ExperimentConfig, spec: &Spec, series: &TimeSeries) -> String {
    let a = spec.a();
    let head = if spec.family() == Family::NoSymmetry {
        format!("a={a} c={}", spec.c())
    } else {
        format!("a={a}")
    };
    if spec.family() == Family::NoSymmetry {
        let last = series.values().last().copied().unwrap_or(f64::NAN);
        return format!("{head} D_final={}", fmt_num(last));
    }
    let fitted = match classify_regime(a).kind {
        RegimeKind::Unbroken => fit_recurrence_time(series).map(|f| {
            format!("T_fit={} T_theory={}", fmt_num(f.parameter), fmt_num(recurrence_time(a).unwrap()))
        }),
        RegimeKind::Broken => {
            let window = cfg.window.unwrap_or_else(|| default_relaxation_window(series));
            fit_relaxation_time(series, window).map(|f| {
                format!("tau_fit={} tau_theory={}", fmt_num(f.parameter), fmt_num(relaxation_time(a).unwrap()))
            })
        }
        RegimeKind::ExceptionalPoint => {
            let window = cfg.window.unwrap_or_else(default_power_law_window);
            fit_power_law_exponent(series, window).map(|f| format!("exponent={}", fmt_num(f.parameter)))
        }
    };
    match fitted {
        Ok(text) => format!("{head} {text}"),
        Err(e) => format!("{head} fit_unavailable=\"{e}\""),
    }
}

fn distinguishability(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let (r1, r2) = initial_states(cfg);
    let runs = cfg
        .a
        .par_iter()
        .map(|&a| {
            let spec = spec(cfg, a)?;
            let grid = grid(cfg, default_span(&spec), DEFAULT_POINTS)?;
            let series = distinguishability_series(&spec, &r1, &r2, &grid)?;
            let summary = describe_fit(cfg, &spec, &series);
            Ok((a, series, summary))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = if runs.len() == 1 {
        csv(&["t", "D"], runs[0].1.iter().map(|(t, d)| vec![fmt_num(t), fmt_num(d)]))
    } else {
        let rows = runs
            .iter()
            .flat_map(|(a, s, _)| s.iter().map(move |(t, d)| vec![fmt_num(*a), fmt_num(t), fmt_num(d)]));
        csv(&["a", "t", "D"], rows)
    };
    let mut out = RunOutput::primary(text);
    out.summary = runs.into_iter().map(|(_, _, s)| s).collect();
    Ok(out)
}

fn scaling(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    if cfg.family == Family::NoSymmetry {
        return Err(CliError::Config(vec!["family: scaling needs a family with an exceptional point".into()]));
    }
    let kinds: Vec<RegimeKind> = cfg.a.iter().map(|&a| classify_regime(a).kind).collect();
    if kinds.contains(&RegimeKind::ExceptionalPoint) {
        return Err(CliError::Config(vec!["a: the exceptional point has no time scale; use powerlaw".into()]));
    }
    if kinds.windows(2).any(|w| w[0] != w[1]) {
        return Err(CliError::Config(vec!["a: scaling sweeps must stay within one regime".into()]));
    }
    let broken = kinds.first() == Some(&RegimeKind::Broken);
    let (r1, r2) = initial_states(cfg);
    let rows = cfg
        .a
        .par_iter()
        .map(|&a| {
            let spec = spec(cfg, a)?;
            let grid = grid(cfg, default_span(&spec), DEFAULT_POINTS)?;
            let series = distinguishability_series(&spec, &r1, &r2, &grid)?;
            let (fit, theory) = if broken {
                let window = cfg.window.unwrap_or_else(|| default_relaxation_window(&series));
                (fit_relaxation_time(&series, window)?.parameter, relaxation_time(a).unwrap())
            } else {
                (fit_recurrence_time(&series)?.parameter, recurrence_time(a).unwrap())
            };
            Ok(vec![fmt_num(a), fmt_num(fit), fmt_num(theory)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let header = if broken { ["a", "tau_fit", "tau_theory"] } else { ["a", "T_fit", "T_theory"] };
    let summary = rows.iter().map(|r| format!("a={}", r.join(" "))).collect();
    Ok(RunOutput { artifacts: vec![Artifact { suffix: None, contents: csv(&header, rows) }], summary })
}

fn power_law(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let spec = spec(cfg, cfg.a[0])?;
    let (r1, r2) = initial_states(cfg);
    let grid = grid(cfg, (0.1, 200.0, GridKind::Log), DEFAULT_POINTS)?;
    let series = distinguishability_series(&spec, &r1, &r2, &grid)?;
    let window = cfg.window.unwrap_or_else(default_power_law_window);
    let fit = fit_power_law_exponent(&series, window)?;
    let mut out = RunOutput::primary(csv(&["t", "D"], series.iter().map(|(t, d)| vec![fmt_num(t), fmt_num(d)])));
    out.summary.push(format!(
        "a={} exponent={} stderr={} window={},{}",
        spec.a(),
        fmt_num(fit.parameter),
        fmt_num(fit.stderr),
        window.0,
        window.1
    ));
    Ok(out)
}

fn embed(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let a = cfg.a[0];
    let pt = Spec::pt(a)?;
    let grid = grid(cfg, default_span(&pt), DEFAULT_POINTS)?;
    let (chi1, chi2) = (cfg.initial.0.state(), cfg.initial.1.state());
    let d = postselected_distinguishability_series(a, &chi1, &chi2, &grid)?;
    let s = entanglement_entropy_series(a, &chi1, &grid)?;
    let i = mutual_information_series(a, &chi1, &grid)?;
    let rows = (0..grid.len()).map(|k| {
        vec![fmt_num(grid[k]), fmt_num(d.values()[k]), fmt_num(s.values()[k]), fmt_num(i.values()[k])]
    });
    let mut out = RunOutput::primary(csv(&["t", "D", "S", "I"], rows));
    for (name, series) in [("D", &d), ("S", &s), ("I", &i)] {
        match fit_recurrence_time(series) {
            Ok(f) => out.summary.push(format!("a={a} {name}_period={}", fmt_num(f.parameter))),
            Err(e) => out.summary.push(format!("a={a} {name}_period_unavailable=\"{e}\"")),
        }
    }
    Ok(out)
}

fn tomography(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let spec = spec(cfg, cfg.a[0])?;
    let default = match (spec.family(), classify_regime(spec.a()).kind) {
        (Family::NoSymmetry, _) => default_span(&spec),
        (_, RegimeKind::Unbroken) => (0.0, recurrence_time(spec.a()).unwrap(), GridKind::Uniform),
        _ => default_span(&spec),
    };
    let grid = grid(cfg, default, TOMOGRAPHY_POINTS)?;
    let bases = standard_bases(2)?;
    let (r1, r2) = initial_states(cfg);
    let labels = [cfg.initial.0.name(), cfg.initial.1.name()];
    let results = grid
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let exact = [evolve(&spec, &r1, t)?, evolve(&spec, &r2, t)?];
            let mut records = Vec::with_capacity(2);
            let mut estimates = Vec::with_capacity(2);
            for (j, rho) in exact.iter().enumerate() {
                let seed = child_seed(cfg.seed, (2 * k + j) as u64);
                let rec = simulate_counts(&bases, &born_probabilities(rho, &bases)?, cfg.shots, seed)?;
                estimates.push(mle_fit(&rec, &bases, &MleOptions::default())?.state);
                records.push(rec);
            }
            let d_exact = trace_distance(&exact[0], &exact[1])?;
            let d_mle = trace_distance(&estimates[0], &estimates[1])?;
            Ok((t, records, d_exact, d_mle))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let count_rows = results.iter().flat_map(|(t, records, _, _)| {
        records.iter().zip(labels).flat_map(move |(rec, label)| {
            rec.iter().map(move |r| {
                vec![
                    fmt_num(*t),
                    label.to_string(),
                    r.basis_label.clone(),
                    r.counts.to_string(),
                    r.shots.to_string(),
                    r.seed.to_string(),
                ]
            })
        })
    });
    let counts = csv(&["t", "initial", "basis_label", "counts", "shots", "seed"], count_rows);
    let mle = csv(
        &["t", "D_exact", "D_mle"],
        results.iter().map(|(t, _, e, m)| vec![fmt_num(*t), fmt_num(*e), fmt_num(*m)]),
    );
    let mae = results.iter().map(|(_, _, e, m)| (e - m).abs()).sum::<f64>() / results.len() as f64;
    Ok(RunOutput {
        artifacts: vec![
            Artifact { suffix: None, contents: counts },
            Artifact { suffix: Some("mle".into()), contents: mle },
        ],
        summary: vec![format!(
            "a={} shots={} seed={} mean_abs_error={}",
            spec.a(),
            cfg.shots,
            cfg.seed,
            fmt_num(mae)
        )],
    })
}

/// Complex matrix from CSV rows of interleaved `re,im` pairs; `#` starts a comment.
pub fn read_target(path: &Path) -> Result<Matrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_target(&text)
}

pub fn parse_target(text: &str) -> Result<Matrix, CliError> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Input(format!("bad number {x:?} in target"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let dim = rows.len();
    if !(dim == 2 || dim == 4) || rows.iter().any(|r| r.len() != 2 * dim) {
        return Err(CliError::Input(format!(
            "target must have 2 or 4 rows of 2*dim numbers (re,im pairs); got {dim} rows"
        )));
    }
    let entries: Vec<Complex<f64>> = rows
        .iter()
        .flat_map(|r| r.chunks(2).map(|p| Complex::new(p[0], p[1])))
        .collect();
    Ok(Matrix::from_row_major(dim, &entries)?)
}

fn compile(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let mut summary = Vec::new();
    let target = match &cfg.target_file {
        Some(path) => read_target(path)?,
        None => {
            let (a, t) = (cfg.a[0], cfg.time.unwrap_or(0.0));
            if cfg.family == Family::Embedded {
                mat_exp(&build_h_tot(a)?, t)?
            } else {
                let u = mat_exp(&build_hamiltonian(&spec(cfg, a)?)?, t)?;
                let norm = u.spectral_norm();
                if norm > 1.0 {
                    // normalized evolution ignores overall scale; rescale gain into a passive operator
                    summary.push(format!("target_scale={}", fmt_num(1.0 / norm)));
                    u.scale_real(1.0 / norm)
                } else {
                    u
                }
            }
        }
    };
    let options = CompileOptions { restarts: cfg.restarts, seed: cfg.seed, ..CompileOptions::default() };
    let solution = if target.dim() == 4 {
        if cfg.variant.is_some_and(|v| v != DecompositionVariant::TwoQubit) {
            return Err(CliError::Config(vec!["variant: 4x4 targets use the two-qubit layout".into()]));
        }
        compile_two_qubit(&target, &options)?
    } else {
        let variant = cfg.variant.unwrap_or(match cfg.family {
            Family::PT | Family::PassivePT if cfg.target_file.is_none() => DecompositionVariant::PTSimplified,
            _ => DecompositionVariant::Full12Param,
        });
        compile_single_qubit(&target, variant, &options)?
    };
    summary.push(format!("variant={} residual={}", solution.variant, fmt_num(solution.residual)));
    Ok(RunOutput { artifacts: vec![Artifact { suffix: None, contents: solution.to_record() }], summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_parsing() {
        let m = parse_target("# sigma x\n0,0,1,0\n1,0,0,0\n").unwrap();
        assert_eq!(m[(0, 1)], Complex::new(1.0, 0.0));
        assert!(parse_target("1,0\n").is_err());
        assert!(parse_target("0,0,1\n1,0,0,0\n").is_err());
        assert!(parse_target("0,0,x,0\n1,0,0,0\n").is_err());
    }
}
