//! Experiment execution.

use crate::config::{ExperimentConfig, FormulaSpec, InitialKind, Kind, Trend};
use crate::output::{fmt9, sig9, ArtifactDir};
use serde_json::{json, Value};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;
use trotter_core::bessel::{ionization_probability, trotter_error_curve, Evolution};
use trotter_core::dense::validation_battery;
use trotter_core::hydrogen::{first_order_bound, first_order_terms, tail_exponents};
use trotter_core::{
    derive_bound, kendall_tau, local_slopes, slope_fit, verify_order, BesselBasis, HydrogenLevel, InitialState, ReducedTime,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot write artifacts under {dir}: {source}")]
    Io { dir: String, source: std::io::Error },
    #[error("{context}: {message}")]
    Failed { context: String, message: String },
}

fn failed(context: impl Into<String>, e: impl std::fmt::Display) -> RunError {
    RunError::Failed { context: context.into(), message: e.to_string() }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub kind: Kind,
    pub assertions: Vec<Assertion>,
    pub artifacts: Vec<String>,
    pub results: Value,
}

impl Summary {
    /// Green when every declared assertion passed.
    pub fn green(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    out: ArtifactDir,
    assertions: Vec<Assertion>,
}

impl Ctx<'_> {
    fn io(&self, e: std::io::Error) -> RunError {
        RunError::Io { dir: self.out.root().display().to_string(), source: e }
    }

    fn csv(&mut self, name: &str, rows: &[(usize, f64)]) -> Result<(), RunError> {
        self.out.csv(name, rows).map_err(|e| self.io(e))
    }

    fn json(&mut self, name: &str, v: Value) -> Result<(), RunError> {
        self.out.json(name, v).map_err(|e| self.io(e))
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion { name: name.into(), passed, detail: detail.into() });
    }

    fn slope_checks(&mut self, label: &str, rows: &[(usize, f64)]) -> Result<Value, RunError> {
        let pts: Vec<(f64, f64)> = rows.iter().map(|&(n, e)| (n as f64, e)).collect();
        let fit = match slope_fit(&pts, self.cfg.fit_window) {
            Ok(f) => f,
            Err(e) if self.cfg.expect.slope.is_none() && self.cfg.expect.slope_above.is_none() => {
                return Ok(json!({"error": e.to_string()}))
            }
            Err(e) => return Err(failed(format!("slope fit of {label}"), e)),
        };
        if let Some(tol) = self.cfg.expect.slope {
            let ok = (fit.slope - tol.target).abs() <= tol.tol;
            self.check(format!("slope {label}"), ok, format!("{} vs {} +- {}", sig9(fit.slope), tol.target, tol.tol));
        }
        if let Some(floor) = self.cfg.expect.slope_above {
            self.check(format!("shallow slope {label}"), fit.slope > floor, format!("{} vs floor {floor}", sig9(fit.slope)));
        }
        let local: Vec<Value> = local_slopes(&pts).into_iter().map(|(n, s)| json!([n, s])).collect();
        Ok(json!({"slope": fit.slope, "intercept": fit.intercept, "residual_rms": fit.residual_rms,
                  "points": fit.points, "window": [fit.window.0, fit.window.1], "local_slopes": local}))
    }
}

fn level_label(l: &HydrogenLevel) -> String {
    format!("n{}_l{}", l.n(), l.l())
}

fn level_json(l: &HydrogenLevel) -> Value {
    json!({"n": l.n(), "l": l.l(), "energy": l.energy()})
}

fn formula_json(f: &FormulaSpec) -> Value {
    json!({"label": f.label, "order": f.formula.order(), "taus": f.formula.taus().iter().map(|t| t.to_string()).collect::<Vec<_>>()})
}

/// Runs the experiment and writes its artifacts plus `summary.json` into `out_dir`.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Summary, RunError> {
    let out = ArtifactDir::create(out_dir).map_err(|e| RunError::Io { dir: out_dir.display().to_string(), source: e })?;
    let mut ctx = Ctx { cfg, out, assertions: Vec::new() };
    let results = match cfg.kind {
        Kind::BoundDerivation => bound_derivation(&mut ctx)?,
        Kind::HydrogenBoundCurve => hydrogen_bound_curve(&mut ctx)?,
        Kind::SimSweep => sim_sweep(&mut ctx)?,
        Kind::Ionization => ionization(&mut ctx)?,
        Kind::OrderComparison => order_comparison(&mut ctx)?,
        Kind::OracleBattery => oracle_battery(&mut ctx)?,
    };
    let mut summary = Summary { kind: cfg.kind, assertions: ctx.assertions, artifacts: ctx.out.written().to_vec(), results };
    let assertions: Vec<Value> =
        summary.assertions.iter().map(|a| json!({"name": a.name, "passed": a.passed, "detail": a.detail})).collect();
    let doc = json!({
        "kind": cfg.kind.name(),
        "seed": cfg.seed,
        "green": summary.green(),
        "assertions": assertions,
        "artifacts": summary.artifacts,
        "results": summary.results,
    });
    ctx.out.json("summary.json", doc).map_err(|e| RunError::Io { dir: out_dir.display().to_string(), source: e })?;
    summary.artifacts.push("summary.json".into());
    Ok(summary)
}

fn bound_derivation(ctx: &mut Ctx) -> Result<Value, RunError> {
    let spec = ctx.cfg.formula.clone().expect("formula parsed for this kind");
    let check = verify_order(&spec.formula);
    let be = derive_bound(&spec.formula, ctx.cfg.simplify).map_err(|e| failed("bound derivation", e))?;
    ctx.json("bound.json", be.to_json())?;
    if let Some(want) = ctx.cfg.expect.terms {
        ctx.check("term count", be.terms.len() == want, format!("{} terms, expected {want}", be.terms.len()));
    }
    Ok(json!({"formula": formula_json(&spec), "order_conditions_hold": check.holds, "terms": be.terms.len(), "total": be.total()}))
}

fn hydrogen_bound_curve(ctx: &mut Ctx) -> Result<Value, RunError> {
    let level = ctx.cfg.levels[0];
    let t = ReducedTime::new(ctx.cfg.t).map_err(|e| failed("time", e))?;
    let rows: Vec<(usize, f64)> = ctx.cfg.n_list.iter().map(|&n| (n, first_order_bound(&level, t, n))).collect();
    let name = format!("bound_{}", level_label(&level));
    ctx.csv(&format!("{name}.csv"), &rows)?;
    let terms: Vec<Value> = first_order_terms(&level)
        .iter()
        .map(|p| json!({"coeff": p.coeff, "time_power": p.time_power, "step_power": p.step_power}))
        .collect();
    let te = tail_exponents(&level);
    let fit = ctx.slope_checks(&name, &rows)?;
    let side = json!({"level": level_json(&level), "t": ctx.cfg.t, "terms": terms,
                      "tail_exponents": {"kinetic": te.kinetic.delta, "potential": te.potential.delta}, "fit": fit});
    ctx.json(&format!("{name}.json"), side.clone())?;
    Ok(side)
}

fn initial_state(kind: InitialKind, level: HydrogenLevel) -> InitialState {
    match kind {
        InitialKind::Eigenstate => InitialState::Level(level),
        InitialKind::Projected => InitialState::Projected(level),
        InitialKind::Sto3g => InitialState::Sto3g,
    }
}

fn basis(cache: &mut BTreeMap<(usize, usize), BesselBasis>, l: usize, r_max: f64, modes: usize) -> Result<&BesselBasis, RunError> {
    match cache.entry((l, modes)) {
        Entry::Occupied(e) => Ok(e.into_mut()),
        Entry::Vacant(e) => {
            let b = BesselBasis::build(l, r_max, modes).map_err(|err| failed(format!("basis l={l} modes={modes}"), err))?;
            Ok(e.insert(b))
        }
    }
}

fn sim_sweep(ctx: &mut Ctx) -> Result<Value, RunError> {
    let cfg = ctx.cfg;
    let spec = cfg.formula.clone().expect("formula parsed for this kind");
    let targets: Vec<(String, usize, InitialState, Option<HydrogenLevel>)> = if cfg.initial == InitialKind::Sto3g {
        vec![("sto3g".into(), 0, InitialState::Sto3g, None)]
    } else {
        cfg.levels.iter().map(|lv| (level_label(lv), lv.l(), initial_state(cfg.initial, *lv), Some(*lv))).collect()
    };
    let mut cache = BTreeMap::new();
    let mut curves = Vec::new();
    for (label, l, init, level) in &targets {
        let mut by_modes: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();
        for &m in &cfg.modes {
            let b = basis(&mut cache, *l, cfg.r_max, m)?;
            let curve = trotter_error_curve(b, init, &spec.formula, cfg.t, &cfg.n_list, cfg.max_projection_loss)
                .map_err(|e| failed(format!("{label}, {} modes", m), e))?;
            let defect = b.sampling_defect();
            let name = format!("sweep_{label}_{}_m{m}", spec.label);
            ctx.csv(&format!("{name}.csv"), &curve.points)?;
            let fit = ctx.slope_checks(&name, &curve.points)?;
            let side = json!({
                "level": level.as_ref().map(level_json), "initial": format!("{:?}", cfg.initial).to_lowercase(),
                "basis": {"l": l, "r_max": cfg.r_max, "modes": m, "sampling_defect": defect},
                "formula": formula_json(&spec), "t": cfg.t, "projection_loss": curve.projection_loss,
                "unitaries": curve.unitaries, "fit": fit,
            });
            ctx.json(&format!("{name}.json"), side)?;
            curves.push(json!({"name": name, "slope": fit.get("slope").cloned().unwrap_or(Value::Null)}));
            by_modes.push((m, curve.points));
        }
        if let Some(limit) = cfg.expect.max_spread {
            let (mref, reference) = by_modes.iter().max_by_key(|c| c.0).expect("at least one basis").clone();
            let spread = by_modes
                .iter()
                .filter(|c| c.0 != mref)
                .flat_map(|c| c.1.iter().zip(&reference).map(|(a, b)| ((a.1 - b.1) / b.1).abs()))
                .fold(0.0f64, f64::max);
            ctx.check(format!("spread {label}"), spread <= limit, format!("max relative difference to {mref} modes {}", fmt9(spread)));
        }
    }
    Ok(json!({"formula": formula_json(&spec), "curves": curves}))
}

fn ionization(ctx: &mut Ctx) -> Result<Value, RunError> {
    let cfg = ctx.cfg;
    let spec = cfg.formula.clone().expect("formula parsed for this kind");
    let m = cfg.modes[0];
    let mut cache = BTreeMap::new();
    let mut per_level = Vec::new();
    for level in &cfg.levels {
        let b = basis(&mut cache, level.l(), cfg.r_max, m)?;
        let label = level_label(level);
        let ctx_err = |e| failed(format!("ionization of {label}"), e);
        let exact = ionization_probability(b, level, Evolution::Exact, cfg.t, cfg.n_max, cfg.max_projection_loss).map_err(ctx_err)?;
        let rows = cfg
            .n_list
            .iter()
            .map(|&n| {
                ionization_probability(b, level, Evolution::Trotter(&spec.formula, n), cfg.t, cfg.n_max, cfg.max_projection_loss)
                    .map(|p| (n, p))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(ctx_err)?;
        let name = format!("ionization_{label}");
        ctx.csv(&format!("{name}.csv"), &rows)?;
        let xs: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let tau = kendall_tau(&xs, &ys);
        if let Some(trend) = cfg.expect.trend {
            let ok = match (trend, tau) {
                (Trend::Negative, Some(t)) => t < 0.0,
                (Trend::Positive, Some(t)) => t > 0.0,
                (_, None) => false,
            };
            ctx.check(format!("trend {label}"), ok, format!("Kendall tau {}", tau.map_or("undefined".into(), fmt9)));
        }
        if let Some(limit) = cfg.expect.exact_below {
            ctx.check(format!("exact {label}"), exact <= limit, format!("exact-evolution ionization {}", fmt9(exact)));
        }
        let side = json!({"level": level_json(level), "basis": {"l": level.l(), "r_max": cfg.r_max, "modes": m},
                          "formula": formula_json(&spec), "t": cfg.t, "n_max": cfg.n_max, "exact": exact, "kendall_tau": tau});
        ctx.json(&format!("{name}.json"), side)?;
        per_level.push(json!({"level": label, "exact": exact, "kendall_tau": tau}));
    }
    Ok(json!({"levels": per_level}))
}

fn order_comparison(ctx: &mut Ctx) -> Result<Value, RunError> {
    let cfg = ctx.cfg;
    let level = cfg.levels[0];
    let b = BesselBasis::build(level.l(), cfg.r_max, cfg.modes[0]).map_err(|e| failed("basis", e))?;
    let init = initial_state(cfg.initial, level);
    let mut orders = Vec::new();
    for &p in &cfg.orders {
        let spec = FormulaSpec::standard(p, false).map_err(|e| failed("formula", e))?;
        let curve = trotter_error_curve(&b, &init, &spec.formula, cfg.t, &cfg.n_list, cfg.max_projection_loss)
            .map_err(|e| failed(format!("order {p}"), e))?;
        // the N column carries the number of unitaries
        let rows: Vec<(usize, f64)> = curve.unitaries.iter().zip(&curve.points).map(|(&u, &(_, e))| (u, e)).collect();
        let name = format!("order_p{p}");
        ctx.csv(&format!("{name}.csv"), &rows)?;
        let side = json!({"level": level_json(&level), "basis": {"l": level.l(), "r_max": cfg.r_max, "modes": cfg.modes[0]},
                          "formula": formula_json(&spec), "t": cfg.t, "steps": cfg.n_list, "unitaries": curve.unitaries,
                          "projection_loss": curve.projection_loss});
        ctx.json(&format!("{name}.json"), side)?;
        orders.push(json!({"order": p, "unitaries": curve.unitaries}));
    }
    Ok(json!({"orders": orders}))
}

fn oracle_battery(ctx: &mut Ctx) -> Result<Value, RunError> {
    let cfg = ctx.cfg;
    let mut total = 0;
    let mut per_order = Vec::new();
    for &p in &cfg.orders {
        let spec = FormulaSpec::standard(p, false).map_err(|e| failed("formula", e))?;
        let mut rows = Vec::new();
        let mut violations = 0;
        for &n in &cfg.n_list {
            let r = validation_battery(cfg.seed, cfg.instances, cfg.dim, std::slice::from_ref(&spec.formula), &[n], cfg.t)
                .map_err(|e| failed(format!("battery p={p} N={n}"), e))?;
            violations += r.violations;
            rows.push((n, r.worst_ratio));
        }
        total += violations;
        let name = format!("battery_p{p}");
        ctx.csv(&format!("{name}.csv"), &rows)?;
        per_order.push(json!({"order": p, "violations": violations, "worst_ratio_by_n": rows}));
    }
    if let Some(want) = cfg.expect.violations {
        ctx.check("bound violations", total == want, format!("{total} violations, expected {want}"));
    }
    Ok(json!({"instances": cfg.instances, "dim": cfg.dim, "t": cfg.t, "violations": total, "orders": per_order}))
}
