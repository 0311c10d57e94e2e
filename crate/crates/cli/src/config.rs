//! Flat `key = value` experiment configuration.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; blank
//! lines are ignored; keys may appear once. Lists are comma separated and
//! integer lists accept inclusive ranges `a..b` or `a..b:step`, e.g.
//! `n_list = 2..10, 20..100:20`. Levels are written `n:l`, e.g. `levels = 1:0, 3:2`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;
use trotter_core::bessel::DEFAULT_MAX_PROJECTION_LOSS;
use trotter_core::{suzuki_times, verify_order, Alg, HydrogenLevel, ProductFormula};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{path}: cannot read: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: String, line: usize },
    #[error("{path}:{line}: duplicate key `{key}`")]
    Duplicate { path: String, line: usize, key: String },
    #[error("{path}: unknown key `{key}` (line {line})")]
    UnknownKey { path: String, line: usize, key: String },
    #[error("{1}: missing required key `{0}`")]
    Missing(&'static str, String),
    #[error("{path}: invalid `{key}`: {message}")]
    Invalid { path: String, key: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    BoundDerivation,
    HydrogenBoundCurve,
    SimSweep,
    Ionization,
    OrderComparison,
    OracleBattery,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::BoundDerivation, Kind::HydrogenBoundCurve, Kind::SimSweep, Kind::Ionization, Kind::OrderComparison, Kind::OracleBattery];

    pub fn name(self) -> &'static str {
        match self {
            Kind::BoundDerivation => "bound-derivation",
            Kind::HydrogenBoundCurve => "hydrogen-bound-curve",
            Kind::SimSweep => "sim-sweep",
            Kind::Ionization => "ionization",
            Kind::OrderComparison => "order-comparison",
            Kind::OracleBattery => "oracle-battery",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Kind::BoundDerivation => "exact error-bound coefficients of a product formula",
            Kind::HydrogenBoundCurve => "closed-form first-order bound for a hydrogen level versus N",
            Kind::SimSweep => "simulated Trotter error of hydrogen levels over N and basis sizes",
            Kind::Ionization => "ionization probability after Trotterized evolution versus N",
            Kind::OrderComparison => "simulated error of several orders against the number of unitaries",
            Kind::OracleBattery => "measured versus derived bound on seeded random matrix pairs",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Kind::BoundDerivation => &["order", "taus", "scheme", "simplify", "expect_terms"],
            Kind::HydrogenBoundCurve => &["n", "l", "t", "n_list", "fit_window", "expect_slope", "expect_slope_above"],
            Kind::SimSweep => &[
                "levels",
                "n",
                "l",
                "order",
                "taus",
                "scheme",
                "t",
                "n_list",
                "r_max",
                "modes",
                "initial",
                "max_projection_loss",
                "fit_window",
                "expect_slope",
                "expect_slope_above",
                "expect_max_spread",
            ],
            Kind::Ionization => &[
                "levels",
                "n",
                "l",
                "order",
                "taus",
                "scheme",
                "t",
                "n_list",
                "r_max",
                "modes",
                "n_max",
                "max_projection_loss",
                "expect_trend",
                "expect_exact_below",
            ],
            Kind::OrderComparison => &["n", "l", "orders", "t", "n_list", "r_max", "modes", "initial", "max_projection_loss"],
            Kind::OracleBattery => &["orders", "t", "n_list", "instances", "dim", "expect_violations"],
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = Kind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown kind {s:?}; expected one of {}", names.join(", "))
        })
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which formula, in the `order`/`taus`/`scheme` keys.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaSpec {
    pub formula: ProductFormula,
    pub label: String,
}

impl FormulaSpec {
    /// First order for `p = 1`, Suzuki's construction for even `p`.
    pub fn standard(p: usize, swap: bool) -> Result<Self, String> {
        let base = match p {
            1 => ProductFormula::first_order(),
            p if p % 2 == 0 => suzuki_times(p).map_err(|e| e.to_string())?,
            _ => return Err(format!("no standard formula of order {p}")),
        };
        let (formula, label) =
            if swap { (base.swapped_generators().map_err(|e| e.to_string())?, format!("p{p}-bab")) } else { (base, format!("p{p}")) };
        Ok(FormulaSpec { formula, label })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialKind {
    Eigenstate,
    Projected,
    Sto3g,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub target: f64,
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Negative,
    Positive,
}

/// Declared checks; each one becomes a pass/fail entry in the summary.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expectations {
    pub slope: Option<Tolerance>,
    /// The fitted slope must exceed this value (a shallower decay).
    pub slope_above: Option<f64>,
    pub max_spread: Option<f64>,
    pub trend: Option<Trend>,
    pub exact_below: Option<f64>,
    pub violations: Option<usize>,
    pub terms: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub source: String,
    pub kind: Kind,
    pub levels: Vec<HydrogenLevel>,
    pub formula: Option<FormulaSpec>,
    pub orders: Vec<usize>,
    pub simplify: bool,
    pub t: f64,
    pub n_list: Vec<usize>,
    pub fit_window: Option<(f64, f64)>,
    pub r_max: f64,
    pub modes: Vec<usize>,
    pub initial: InitialKind,
    pub max_projection_loss: f64,
    pub n_max: Option<usize>,
    pub instances: usize,
    pub dim: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub expect: Expectations,
}

const COMMON_KEYS: [&str; 3] = ["kind", "seed", "out"];

struct Raw {
    path: String,
    entries: BTreeMap<String, (usize, String)>,
}

impl Raw {
    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn invalid(&self, key: &str, message: impl fmt::Display) -> ConfigError {
        ConfigError::Invalid { path: self.path.clone(), key: key.to_string(), message: message.to_string() }
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.get(key).map(|v| v.parse::<T>().map_err(|e| self.invalid(key, e))).transpose()
    }

    fn required<T: FromStr>(&self, key: &'static str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.parse(key)?.ok_or_else(|| ConfigError::Missing(key, self.path.clone()))
    }

    fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>, ConfigError> {
        self.get(key).map(|v| parse_usize_list(v).map_err(|e| self.invalid(key, e))).transpose()
    }
}

/// Comma-separated integers and inclusive ranges `a..b[:step]`.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        if item.is_empty() {
            continue;
        }
        let int = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("not a non-negative integer: {x:?}"));
        if let Some((a, rest)) = item.split_once("..") {
            let (b, step) = match rest.split_once(':') {
                Some((b, st)) => (int(b)?, int(st)?),
                None => (int(rest)?, 1),
            };
            let a = int(a)?;
            if step == 0 || b < a {
                return Err(format!("empty or invalid range {item:?}"));
            }
            out.extend((a..=b).step_by(step));
        } else {
            out.push(int(item)?);
        }
    }
    Ok(out)
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once("..").ok_or("expected `lo..hi`")?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad bound {a:?}"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad bound {b:?}"))?;
    if !(lo <= hi) {
        return Err("lower end exceeds upper end".into());
    }
    Ok((lo, hi))
}

fn parse_tolerance(s: &str) -> Result<Tolerance, String> {
    let (a, b) = s.split_once("+-").ok_or("expected `value +- tolerance`")?;
    let target = a.trim().parse().map_err(|_| format!("bad value {a:?}"))?;
    let tol: f64 = b.trim().parse().map_err(|_| format!("bad tolerance {b:?}"))?;
    if !(tol >= 0.0) {
        return Err("tolerance must be non-negative".into());
    }
    Ok(Tolerance { target, tol })
}

fn parse_level(s: &str) -> Result<HydrogenLevel, String> {
    let (n, l) = s.split_once(':').ok_or_else(|| format!("expected `n:l`, got {s:?}"))?;
    let n = n.trim().parse().map_err(|_| format!("bad n in {s:?}"))?;
    let l = l.trim().parse().map_err(|_| format!("bad l in {s:?}"))?;
    HydrogenLevel::nl(n, l).map_err(|e| e.to_string())
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses config text; `source` names it in error messages.
    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        let path = source.to_string();
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content.split_once('=').ok_or(ConfigError::Syntax { path: path.clone(), line: line_no })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() {
                return Err(ConfigError::Syntax { path, line: line_no });
            }
            if entries.insert(k.clone(), (line_no, v)).is_some() {
                return Err(ConfigError::Duplicate { path, line: line_no, key: k });
            }
        }
        let raw = Raw { path: path.clone(), entries };
        let kind: Kind = raw.required("kind")?;
        for (key, (line, _)) in &raw.entries {
            if !COMMON_KEYS.contains(&key.as_str()) && !kind.keys().contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey { path, line: *line, key: key.clone() });
            }
        }
        Self::build(kind, &raw)
    }

    fn build(kind: Kind, raw: &Raw) -> Result<Self, ConfigError> {
        let levels = match raw.get("levels") {
            Some(v) => v.split(',').map(|s| parse_level(s.trim())).collect::<Result<Vec<_>, _>>().map_err(|e| raw.invalid("levels", e))?,
            None => match (raw.parse::<usize>("n")?, raw.parse::<usize>("l")?) {
                (Some(n), Some(l)) => vec![HydrogenLevel::nl(n, l).map_err(|e| raw.invalid("n", e))?],
                (None, None) => vec![],
                (Some(_), None) => return Err(ConfigError::Missing("l", raw.path.clone())),
                (None, Some(_)) => return Err(ConfigError::Missing("n", raw.path.clone())),
            },
        };
        let needs_level = matches!(kind, Kind::HydrogenBoundCurve | Kind::Ionization | Kind::OrderComparison);
        let initial = match raw.get("initial").unwrap_or("eigenstate") {
            "eigenstate" => InitialKind::Eigenstate,
            "projected" => InitialKind::Projected,
            "sto3g" => InitialKind::Sto3g,
            other => return Err(raw.invalid("initial", format!("{other:?} is not eigenstate, projected or sto3g"))),
        };
        if levels.is_empty() && (needs_level || (kind == Kind::SimSweep && initial != InitialKind::Sto3g)) {
            return Err(ConfigError::Missing("n", raw.path.clone()));
        }
        if levels.len() > 1 && matches!(kind, Kind::HydrogenBoundCurve | Kind::OrderComparison) {
            return Err(raw.invalid("levels", "this kind takes a single level (n, l)"));
        }

        let formula = Self::formula(kind, raw)?;
        let orders = match raw.usize_list("orders")? {
            Some(o) => o,
            None if matches!(kind, Kind::OrderComparison | Kind::OracleBattery) => vec![1, 2, 4],
            None => vec![],
        };
        for &p in &orders {
            if ![1, 2, 4].contains(&p) {
                return Err(raw.invalid("orders", format!("order {p} not in {{1, 2, 4}}")));
            }
        }

        let t: f64 = raw.parse("t")?.unwrap_or(1.0);
        if !(t > 0.0 && t.is_finite()) {
            return Err(raw.invalid("t", "must be positive"));
        }
        let n_list = raw.usize_list("n_list")?.unwrap_or_default();
        if kind != Kind::BoundDerivation {
            if n_list.is_empty() {
                return Err(raw.invalid("n_list", "must list at least one N"));
            }
            if n_list.contains(&0) {
                return Err(raw.invalid("n_list", "N must be at least 1"));
            }
        }
        let modes = raw.usize_list("modes")?.unwrap_or_else(|| vec![100]);
        if modes.is_empty() {
            return Err(raw.invalid("modes", "must list at least one basis size"));
        }
        if matches!(kind, Kind::Ionization | Kind::OrderComparison) && modes.len() != 1 {
            return Err(raw.invalid("modes", "this kind takes a single basis size"));
        }
        let r_max: f64 = raw.parse("r_max")?.unwrap_or(30.0);
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(raw.invalid("r_max", "must be positive"));
        }
        let max_projection_loss: f64 = raw.parse("max_projection_loss")?.unwrap_or(DEFAULT_MAX_PROJECTION_LOSS);
        if !(max_projection_loss >= 0.0) {
            return Err(raw.invalid("max_projection_loss", "must be non-negative"));
        }
        let n_max = raw.parse::<usize>("n_max")?;
        if let Some(nm) = n_max {
            if let Some(bad) = levels.iter().find(|lv| lv.n() > nm) {
                return Err(raw.invalid("n_max", format!("smaller than n of {bad}")));
            }
        }
        let instances = raw.parse("instances")?.unwrap_or(500);
        let dim = raw.parse("dim")?.unwrap_or(4);
        if kind == Kind::OracleBattery && !(1..=trotter_core::dense::MAX_DIM).contains(&dim) {
            return Err(raw.invalid("dim", format!("must be in 1..={}", trotter_core::dense::MAX_DIM)));
        }
        let fit_window = raw.get("fit_window").map(|v| parse_window(v).map_err(|e| raw.invalid("fit_window", e))).transpose()?;
        let expect = Expectations {
            slope: raw.get("expect_slope").map(|v| parse_tolerance(v).map_err(|e| raw.invalid("expect_slope", e))).transpose()?,
            slope_above: raw.parse("expect_slope_above")?,
            max_spread: raw.parse("expect_max_spread")?,
            trend: match raw.get("expect_trend") {
                None => None,
                Some("negative") => Some(Trend::Negative),
                Some("positive") => Some(Trend::Positive),
                Some(other) => return Err(raw.invalid("expect_trend", format!("{other:?} is not negative or positive"))),
            },
            exact_below: raw.parse("expect_exact_below")?,
            violations: raw.parse("expect_violations")?,
            terms: raw.parse("expect_terms")?,
        };
        Ok(ExperimentConfig {
            source: raw.path.clone(),
            kind,
            levels,
            formula,
            orders,
            simplify: raw.parse("simplify")?.unwrap_or(true),
            t,
            n_list,
            fit_window,
            r_max,
            modes,
            initial,
            max_projection_loss,
            n_max,
            instances,
            dim,
            seed: raw.parse("seed")?.unwrap_or(0),
            out: raw.get("out").map(PathBuf::from),
            expect,
        })
    }

    fn formula(kind: Kind, raw: &Raw) -> Result<Option<FormulaSpec>, ConfigError> {
        if !matches!(kind, Kind::BoundDerivation | Kind::SimSweep | Kind::Ionization) {
            return Ok(None);
        }
        let swap = match raw.get("scheme").unwrap_or("aba") {
            "aba" => false,
            "bab" => true,
            other => return Err(raw.invalid("scheme", format!("{other:?} is not aba or bab"))),
        };
        let order: Option<usize> = raw.parse("order")?;
        let spec = match raw.get("taus") {
            Some(list) => {
                let taus = list.split(',').map(|s| s.parse::<Alg>()).collect::<Result<Vec<_>, _>>().map_err(|e| raw.invalid("taus", e))?;
                let order = order.ok_or_else(|| ConfigError::Missing("order", raw.path.clone()))?;
                let pf = ProductFormula::new(taus, order).map_err(|e| raw.invalid("taus", e))?;
                let pf = if swap { pf.swapped_generators().map_err(|e| raw.invalid("taus", e))? } else { pf };
                let check = verify_order(&pf);
                if !check.holds {
                    return Err(raw.invalid("taus", format!("order conditions fail at k={}", check.first_failure.unwrap_or(0))));
                }
                FormulaSpec { formula: pf, label: "custom".into() }
            }
            None => FormulaSpec::standard(order.unwrap_or(1), swap).map_err(|e| raw.invalid("order", e))?,
        };
        Ok(Some(spec))
    }
}
