//! Experiment configuration: a flat TOML file overlaid with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ptdyn::models::Family;
use ptdyn::optics::DecompositionVariant;
use ptdyn::qcore::StateVector;
use ptdyn::{Complex, State};
use toml::Value;

pub const KEYS: [&str; 16] = [
    "experiment",
    "family",
    "a",
    "c",
    "initial",
    "t_min",
    "t_max",
    "points",
    "grid",
    "window",
    "shots",
    "seed",
    "out",
    "target_file",
    "variant",
    "restarts",
];

/// Extra key accepted by `compile` when no target file is given.
pub const TIME_KEY: &str = "time";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Distinguishability,
    Scaling,
    PowerLaw,
    Embed,
    Tomography,
    Compile,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Distinguishability => "distinguishability",
            Self::Scaling => "scaling",
            Self::PowerLaw => "powerlaw",
            Self::Embed => "embed",
            Self::Tomography => "tomography",
            Self::Compile => "compile",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "distinguishability" => Ok(Self::Distinguishability),
            "scaling" => Ok(Self::Scaling),
            "powerlaw" => Ok(Self::PowerLaw),
            "embed" => Ok(Self::Embed),
            "tomography" => Ok(Self::Tomography),
            "compile" => Ok(Self::Compile),
            _ => Err(format!(
                "unknown experiment {s:?} (expected distinguishability, scaling, powerlaw, embed, tomography or compile)"
            )),
        }
    }
}

/// Initial polarization by label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    H,
    V,
    /// `(H + V)/√2`
    P,
    /// `(H − V)/√2`
    M,
    /// `(H + iV)/√2`
    R,
    /// `(H − iV)/√2`
    L,
}

impl StateLabel {
    pub fn name(self) -> &'static str {
        match self {
            Self::H => "H",
            Self::V => "V",
            Self::P => "P+",
            Self::M => "M",
            Self::R => "R",
            Self::L => "L",
        }
    }

    pub fn state(self) -> State {
        let c = |re: f64, im: f64| Complex::new(re, im);
        let amps = match self {
            Self::H => vec![c(1.0, 0.0), c(0.0, 0.0)],
            Self::V => vec![c(0.0, 0.0), c(1.0, 0.0)],
            Self::P => vec![c(1.0, 0.0), c(1.0, 0.0)],
            Self::M => vec![c(1.0, 0.0), c(-1.0, 0.0)],
            Self::R => vec![c(1.0, 0.0), c(0.0, 1.0)],
            Self::L => vec![c(1.0, 0.0), c(0.0, -1.0)],
        };
        StateVector::normalized_from(amps).expect("fixed nonzero amplitudes")
    }
}

impl FromStr for StateLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "H" => Ok(Self::H),
            "V" => Ok(Self::V),
            "P+" | "P" => Ok(Self::P),
            "M" | "P-" => Ok(Self::M),
            "R" => Ok(Self::R),
            "L" => Ok(Self::L),
            other => Err(format!("unknown initial state {other:?} (expected H, V, P+, M, R or L)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Uniform,
    Log,
}

/// Explicit grid; `None` fields fall back to the experiment default.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub kind: Option<GridKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub family: Family,
    pub a: Vec<f64>,
    pub c: f64,
    pub initial: (StateLabel, StateLabel),
    pub grid: GridSpec,
    pub window: Option<(f64, f64)>,
    pub shots: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub target_file: Option<PathBuf>,
    pub variant: Option<DecompositionVariant>,
    pub restarts: usize,
    pub time: Option<f64>,
}

/// Raw key/value layers; later layers win.
#[derive(Debug, Clone, Default)]
pub struct Layers {
    values: BTreeMap<String, Value>,
    errors: Vec<String>,
}

impl Layers {
    /// Adds every key of a TOML document.
    pub fn add_toml(&mut self, text: &str, origin: &str) {
        match text.parse::<toml::Table>() {
            Ok(table) => {
                for (k, v) in table {
                    let key = k.replace('-', "_");
                    if KEYS.contains(&key.as_str()) || key == TIME_KEY {
                        self.values.insert(key, v);
                    } else {
                        self.errors.push(format!("{origin}: unknown key {k:?}"));
                    }
                }
            }
            Err(e) => self.errors.push(format!("{origin}: {}", e.message())),
        }
    }

    /// Sets `key` from a flag value, replacing any file value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), Value::String(value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    /// Typed configuration, or every violation found.
    pub fn resolve(&self) -> Result<ExperimentConfig, Vec<String>> {
        let mut errs = self.errors.clone();
        let mut r = Reader { layers: self, errs: &mut errs };

        let experiment = r.parsed::<Experiment>("experiment");
        let family = r.parsed_with("family", |s| s.parse::<Family>().map_err(|e| e.to_string()));
        let a = r.list("a");
        let c = r.float("c");
        let initial = r.initial();
        let t_min = r.float("t_min");
        let t_max = r.float("t_max");
        let points = r.integer("points").map(|p| p as usize);
        let kind = r.parsed_with("grid", |s| match s {
            "uniform" => Ok(GridKind::Uniform),
            "log" => Ok(GridKind::Log),
            _ => Err(format!("unknown grid {s:?} (expected uniform or log)")),
        });
        let window = r.list("window");
        let shots = r.integer("shots");
        let seed = r.integer("seed");
        let out = r.text("out").map(PathBuf::from);
        let target_file = r.text("target_file").map(PathBuf::from);
        let variant = r.parsed_with("variant", |s| s.parse::<DecompositionVariant>().map_err(|e| e.to_string()));
        let restarts = r.integer("restarts").map(|n| n as usize);
        let time = r.float(TIME_KEY);

        let Some(experiment) = experiment else {
            if self.get("experiment").is_none() {
                errs.push("experiment: missing (give it as the run argument or in the config file)".into());
            }
            return Err(errs);
        };
        let family = family.unwrap_or(match experiment {
            Experiment::Embed => Family::Embedded,
            _ => Family::PT,
        });
        let a = a.unwrap_or_default();
        let c = c.unwrap_or(0.0);
        let window = match window {
            Some(w) if w.len() == 2 => Some((w[0], w[1])),
            Some(w) => {
                errs.push(format!("window: expected two numbers, got {}", w.len()));
                None
            }
            None => None,
        };
        let cfg = ExperimentConfig {
            experiment,
            family,
            a,
            c,
            initial: initial.unwrap_or((StateLabel::H, StateLabel::V)),
            grid: GridSpec { t_min, t_max, points, kind },
            window,
            shots: shots.unwrap_or(ptdyn::tomography::DEFAULT_SHOTS),
            seed: seed.unwrap_or(0),
            out,
            target_file,
            variant,
            restarts: restarts.unwrap_or(50),
            time,
        };
        validate(&cfg, self, &mut errs);
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(errs)
        }
    }
}

struct Reader<'a> {
    layers: &'a Layers,
    errs: &'a mut Vec<String>,
}

impl Reader<'_> {
    fn text(&mut self, key: &str) -> Option<String> {
        match self.layers.get(key)? {
            Value::String(s) => Some(s.clone()),
            other => {
                self.errs.push(format!("{key}: expected a string, got {other}"));
                None
            }
        }
    }

    fn parsed<T: FromStr<Err = String>>(&mut self, key: &str) -> Option<T> {
        self.parsed_with(key, |s| s.parse::<T>())
    }

    fn parsed_with<T>(&mut self, key: &str, f: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        let s = self.text(key)?;
        match f(s.trim()) {
            Ok(v) => Some(v),
            Err(e) => {
                self.errs.push(format!("{key}: {e}"));
                None
            }
        }
    }

    fn float(&mut self, key: &str) -> Option<f64> {
        let v = self.layers.get(key)?;
        let parsed = match v {
            Value::Float(x) => Some(*x),
            Value::Integer(n) => Some(*n as f64),
            Value::String(s) => s.trim().parse::<f64>().ok(),
            _ => None,
        };
        match parsed {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.errs.push(format!("{key}: expected a finite number, got {v}"));
                None
            }
        }
    }

    fn integer(&mut self, key: &str) -> Option<u64> {
        let v = self.layers.get(key)?;
        let parsed = match v {
            Value::Integer(n) if *n >= 0 => Some(*n as u64),
            Value::String(s) => s.trim().parse::<u64>().ok(),
            _ => None,
        };
        if parsed.is_none() {
            self.errs.push(format!("{key}: expected a non-negative integer, got {v}"));
        }
        parsed
    }

    fn list(&mut self, key: &str) -> Option<Vec<f64>> {
        let v = self.layers.get(key)?;
        let items: Option<Vec<f64>> = match v {
            Value::Float(x) => Some(vec![*x]),
            Value::Integer(n) => Some(vec![*n as f64]),
            Value::String(s) => s.split(',').map(|t| t.trim().parse::<f64>().ok()).collect(),
            Value::Array(xs) => xs
                .iter()
                .map(|x| match x {
                    Value::Float(f) => Some(*f),
                    Value::Integer(n) => Some(*n as f64),
                    _ => None,
                })
                .collect(),
            _ => None,
        };
        match items {
            Some(xs) if !xs.is_empty() && xs.iter().all(|x| x.is_finite()) => Some(xs),
            _ => {
                self.errs.push(format!("{key}: expected a number or a list of numbers, got {v}"));
                None
            }
        }
    }

    fn initial(&mut self) -> Option<(StateLabel, StateLabel)> {
        let v = self.layers.get("initial")?;
        let labels: Vec<String> = match v {
            Value::String(s) => s.split(',').map(str::to_string).collect(),
            Value::Array(xs) => xs.iter().map(|x| x.as_str().unwrap_or("?").to_string()).collect(),
            other => {
                self.errs.push(format!("initial: expected two state labels, got {other}"));
                return None;
            }
        };
        if labels.len() != 2 {
            self.errs.push(format!("initial: expected two state labels, got {}", labels.len()));
            return None;
        }
        match (labels[0].parse::<StateLabel>(), labels[1].parse::<StateLabel>()) {
            (Ok(x), Ok(y)) => Some((x, y)),
            (x, y) => {
                for e in [x.err(), y.err()].into_iter().flatten() {
                    self.errs.push(format!("initial: {e}"));
                }
                None
            }
        }
    }
}

fn validate(cfg: &ExperimentConfig, layers: &Layers, errs: &mut Vec<String>) {
    use Experiment::*;
    let needs_a = !matches!(cfg.experiment, Compile) || cfg.target_file.is_none();
    if needs_a && cfg.a.is_empty() && layers.get("a").is_none() {
        errs.push(format!("a: required for {}", cfg.experiment));
    }
    if let Some(x) = cfg.a.iter().find(|x| **x < 0.0) {
        errs.push(format!("a: must be >= 0, got {x}"));
    }
    if matches!(cfg.experiment, PowerLaw | Embed | Tomography) && cfg.a.len() > 1 {
        errs.push(format!("a: {} takes a single value, got {}", cfg.experiment, cfg.a.len()));
    }
    if cfg.experiment == Embed {
        if cfg.family != Family::Embedded && cfg.family != Family::PT {
            errs.push(format!("family: embed dilates the pt family, got {}", cfg.family));
        }
        if let Some(x) = cfg.a.iter().find(|x| **x >= 1.0) {
            errs.push(format!("a: embed requires 0 <= a < 1, got {x}"));
        }
    } else if cfg.family == Family::Embedded && cfg.experiment != Compile {
        errs.push(format!("family: embedded is only valid for embed and compile, not {}", cfg.experiment));
    }
    if cfg.c != 0.0 && cfg.family != Family::NoSymmetry {
        errs.push(format!("c: only the nosym family takes c (family is {})", cfg.family));
    }
    let g = &cfg.grid;
    if let Some(p) = g.points {
        if p < 2 {
            errs.push(format!("points: need at least 2, got {p}"));
        }
    }
    if let Some(t) = g.t_min {
        if t < 0.0 {
            errs.push(format!("t_min: must be >= 0, got {t}"));
        }
    }
    if let (Some(lo), Some(hi)) = (g.t_min, g.t_max) {
        if hi <= lo {
            errs.push(format!("t_max: must exceed t_min ({hi} <= {lo})"));
        }
    }
    if let Some(t) = g.t_max {
        if t <= 0.0 {
            errs.push(format!("t_max: must be > 0, got {t}"));
        }
    }
    if g.kind == Some(GridKind::Log) && g.t_min.is_some_and(|t| t <= 0.0) {
        errs.push("t_min: a log grid needs t_min > 0".into());
    }
    if let Some((lo, hi)) = cfg.window {
        if hi <= lo {
            errs.push(format!("window: upper bound {hi} must exceed lower bound {lo}"));
        }
    }
    if cfg.shots == 0 {
        errs.push("shots: must be at least 1".into());
    }
    if cfg.restarts == 0 {
        errs.push("restarts: must be at least 1".into());
    }
    if cfg.experiment == Compile {
        if cfg.target_file.is_none() && cfg.time.is_none() {
            errs.push("time: compile needs either target_file or time".into());
        }
        if cfg.target_file.is_some() && cfg.time.is_some() {
            errs.push("time: give either target_file or time, not both".into());
        }
        if cfg.time.is_some_and(|t| t < 0.0) {
            errs.push("time: must be >= 0".into());
        }
        if cfg.target_file.is_none() && cfg.a.len() > 1 {
            errs.push("a: compile takes a single value".into());
        }
    } else if cfg.time.is_some() || cfg.target_file.is_some() || cfg.variant.is_some() {
        errs.push(format!("time/target_file/variant: only valid for compile, not {}", cfg.experiment));
    }
}
