//! Fractional Trotter scaling from spectral-tail decay.
//!
//! A state whose spectral measure obeys `μ({|λ| ≥ Λ}) ≤ (λ0/Λ)^(2δ)` admits
//! the bounds below on
//!
//! * `Δ⁰(s) = ‖(e^{-isH} - 1)φ‖²`
//! * `Δ¹(s) = ‖(e^{-isH} - 1 + isH)φ‖²`
//! * `Δ²(s) = ‖(e^{-isH} - 1 + isH + s²H²/2)φ‖²`
//! * `Δ̃²(s) = ‖[e^{-isH}(1 + isH) - e^{isH}(1 - isH)]φ‖²`
//!
//! each in three regimes: a pure power law below the critical exponent, a
//! logarithmic bound at it (split at a cutoff `Λ`), and the plain moment
//! bound once `φ` lies in the relevant operator domain.

use crate::special::{ci, gamma, EULER_GAMMA};
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TailError {
    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("{kind} needs a tail exponent above {min}, got δ = {delta}")]
    TooSlow { kind: DeltaKind, delta: f64, min: f64 },
    #[error("{kind} at δ = {delta} needs the moment ‖H^{power}φ‖")]
    MissingMoment { kind: DeltaKind, delta: f64, power: u32 },
    #[error("time must be nonnegative and N at least 1 (t = {t}, N = {n})")]
    BadTime { t: f64, n: usize },
}

/// Tail cap `μ_φ({|λ| ≥ Λ}) ≤ (λ0/Λ)^(2δ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailProfile {
    pub delta: f64,
    pub lambda0: f64,
}

impl TailProfile {
    pub fn new(delta: f64, lambda0: f64) -> Result<Self, TailError> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(TailError::NonPositive { what: "tail exponent δ", value: delta });
        }
        if !(lambda0 > 0.0 && lambda0.is_finite()) {
            return Err(TailError::NonPositive { what: "energy scale λ0", value: lambda0 });
        }
        Ok(TailProfile { delta, lambda0 })
    }

    /// Tail cap evaluated at `Λ` (clipped to 1).
    pub fn cap(&self, lambda: f64) -> f64 {
        (self.lambda0 / lambda).powf(2.0 * self.delta).min(1.0)
    }

    /// Moment norm `‖H^k φ‖` of the measure that saturates the cap, finite for `δ > k`.
    pub fn saturating_moment(&self, k: u32) -> Option<f64> {
        let k = k as f64;
        (self.delta > k).then(|| (self.lambda0.powf(2.0 * k) * self.delta / (self.delta - k)).sqrt())
    }
}

/// Moment norms `‖Hφ‖, ‖H²φ‖, ‖H³φ‖` where known.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub first: Option<f64>,
    pub second: Option<f64>,
    pub third: Option<f64>,
}

impl Moments {
    pub fn none() -> Self {
        Self::default()
    }

    fn get(&self, k: u32) -> Option<f64> {
        match k {
            1 => self.first,
            2 => self.second,
            3 => self.third,
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaKind {
    Zero,
    One,
    Two,
    TwoTilde,
}

impl fmt::Display for DeltaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaKind::Zero => "Δ0",
            DeltaKind::One => "Δ1",
            DeltaKind::Two => "Δ2",
            DeltaKind::TwoTilde => "Δ~2",
        })
    }
}

impl DeltaKind {
    pub const ALL: [DeltaKind; 4] = [DeltaKind::Zero, DeltaKind::One, DeltaKind::Two, DeltaKind::TwoTilde];

    /// Exponent at which the bound turns logarithmic.
    pub fn critical(self) -> f64 {
        match self {
            DeltaKind::Zero => 1.0,
            DeltaKind::One => 2.0,
            DeltaKind::Two | DeltaKind::TwoTilde => 3.0,
        }
    }

    /// Smallest admissible δ (exclusive).
    pub fn min_delta(self) -> f64 {
        match self {
            DeltaKind::Zero => 0.0,
            DeltaKind::One | DeltaKind::TwoTilde => 1.0,
            DeltaKind::Two => 2.0,
        }
    }

    /// `k` with `f(x) ~ c x^(2k)` at the origin.
    fn half_power(self) -> u32 {
        match self {
            DeltaKind::Zero => 1,
            DeltaKind::One => 2,
            DeltaKind::Two | DeltaKind::TwoTilde => 3,
        }
    }

    /// Leading small-x constant `c` in `f(x) ≤ c x^(2k)`.
    fn small_x_constant(self) -> f64 {
        match self {
            DeltaKind::Zero => 1.0,
            DeltaKind::One => 0.25,
            DeltaKind::Two => 1.0 / 36.0,
            DeltaKind::TwoTilde => 4.0 / 9.0,
        }
    }

    /// The integrand `f(x)` with `Δ(s) = ∫ f(sλ) dμ(λ)`.
    pub fn f(self, x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        match self {
            DeltaKind::Zero => 2.0 * (1.0 - c),
            DeltaKind::One => {
                if x.abs() < 1e-2 {
                    return eval_even(&series(self), x);
                }
                (1.0 - c).powi(2) + (x - s).powi(2)
            }
            DeltaKind::Two => {
                if x.abs() < 0.1 {
                    return eval_even(&series(self), x);
                }
                (1.0 - 0.5 * x * x - c).powi(2) + (x - s).powi(2)
            }
            DeltaKind::TwoTilde => {
                if x.abs() < 1e-2 {
                    return eval_even(&series(self), x);
                }
                4.0 * (s - x * c).powi(2)
            }
        }
    }

    /// Constant `C` of the sub-critical bound `C (λ0 s)^(2δ)`.
    pub fn subcritical_constant(self, delta: f64) -> f64 {
        match self {
            DeltaKind::Zero => 2.0 * PI * delta / (gamma(2.0 * delta + 1.0) * (delta * PI).sin()),
            DeltaKind::One => PI / (gamma(2.0 * delta - 1.0) * ((delta - 1.0) * PI).sin()),
            DeltaKind::Two => PI / (2.0 * gamma(2.0 * delta - 2.0) * (delta * PI).sin()),
            DeltaKind::TwoTilde => {
                let e = delta - 2.0;
                // (δ−2)π / sin((δ−2)π) has a removable singularity at δ = 2
                let ratio = if e.abs() < 1e-8 { 1.0 } else { e * PI / (e * PI).sin() };
                2f64.powf(2.0 * delta - 1.0) * ratio / gamma(2.0 * delta - 1.0)
            }
        }
    }

    /// Prefactor `K` with `Δ ≤ low part + K (λ0/Λ)^(2k) g(Λs)` at the critical exponent.
    fn critical_tail_factor(self) -> f64 {
        match self {
            DeltaKind::Zero => 2.0,
            DeltaKind::One => 1.0,
            DeltaKind::Two => 1.0 / 6.0,
            DeltaKind::TwoTilde => 8.0 / 3.0,
        }
    }

    fn g(self, x: f64) -> f64 {
        let g = g_functions(x).expect("positive argument");
        match self {
            DeltaKind::Zero => g.g0,
            DeltaKind::One => g.g1,
            DeltaKind::Two => g.g2,
            DeltaKind::TwoTilde => g.g2_tilde,
        }
    }
}

/// Taylor coefficients `c_m` of `f(x) = Σ c_m x^(2m)`, m = 0..TERMS.
const TERMS: usize = 30;

fn series(kind: DeltaKind) -> Vec<f64> {
    // odd/even parts of the complex residual as power series in x
    let mut fact = vec![1.0; 2 * TERMS + 2];
    for i in 1..fact.len() {
        fact[i] = fact[i - 1] * i as f64;
    }
    let cos_minus_1: Vec<f64> = (0..=TERMS).map(|m| if m == 0 { 0.0 } else { sgn(m) / fact[2 * m] }).collect();
    // coefficient of x^(2m+1) in x − sin x
    let x_minus_sin: Vec<f64> = (0..=TERMS).map(|m| if m == 0 { 0.0 } else { -sgn(m) / fact[2 * m + 1] }).collect();
    let square_even = |a: &[f64]| -> Vec<f64> { (0..=TERMS).map(|m| (0..=m).map(|i| a[i] * a[m - i]).sum()).collect() };
    // (Σ b_m x^(2m+1))² has x^(2m) coefficient Σ_{i+j=m−1} b_i b_j
    let square_odd =
        |b: &[f64]| -> Vec<f64> { (0..=TERMS).map(|m| if m == 0 { 0.0 } else { (0..m).map(|i| b[i] * b[m - 1 - i]).sum() }).collect() };
    let add = |a: Vec<f64>, b: Vec<f64>| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>();
    match kind {
        DeltaKind::Zero => cos_minus_1.iter().map(|c| -2.0 * c).collect(),
        DeltaKind::One => add(square_even(&cos_minus_1), square_odd(&x_minus_sin)),
        DeltaKind::Two => {
            let mut re = cos_minus_1.clone();
            re[1] += 0.5;
            add(square_even(&re), square_odd(&x_minus_sin))
        }
        DeltaKind::TwoTilde => {
            // sin x − x cos x = Σ_{m≥1} (−1)^(m+1) 2m/(2m+1)! x^(2m+1)
            let b: Vec<f64> = (0..=TERMS).map(|m| if m == 0 { 0.0 } else { -sgn(m) * 2.0 * m as f64 / fact[2 * m + 1] }).collect();
            square_odd(&b).iter().map(|c| 4.0 * c).collect()
        }
    }
}

fn sgn(m: usize) -> f64 {
    if m.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn eval_even(c: &[f64], x: f64) -> f64 {
    let x2 = x * x;
    c.iter().rev().fold(0.0, |acc, ci| acc * x2 + ci)
}

/// The four g-functions; each behaves like `-x^(2k) log x` near the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GValues {
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    pub g2_tilde: f64,
}

/// Below this argument the closed forms lose too many digits to cancellation.
const SERIES_BELOW: f64 = 1.0;

pub fn g_functions(x: f64) -> Result<GValues, TailError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(TailError::NonPositive { what: "g-function argument", value: x });
    }
    if x < SERIES_BELOW {
        return Ok(GValues {
            g0: g_series(DeltaKind::Zero, x),
            g1: g_series(DeltaKind::One, x),
            g2: g_series(DeltaKind::Two, x),
            g2_tilde: g_series(DeltaKind::TwoTilde, x),
        });
    }
    let (s, c) = x.sin_cos();
    let (x2, x3, x4) = (x * x, x * x * x, x * x * x * x);
    let x6 = x4 * x2;
    let ci_x = ci(x);
    let g0 = -x2 * ci_x + (1.0 - c) + x * s;
    let g1 = -x4 * ci_x + (1.0 + 0.5 * x2) * ((1.0 - c).powi(2) + (x - s).powi(2)) - 2.0 * x3 * (x - s) + 1.5 * x4;
    let g2 = -x6 * ci_x + 12.0 + 4.5 * x4 - (12.0 - 6.0 * x2 + x4) * c - x * (12.0 + 2.0 * x2 - x4) * s;
    let (s2, c2) = (2.0 * x).sin_cos();
    let g2_tilde =
        -x6 * ci(2.0 * x) + 0.125 * (6.0 + 9.0 * x2 - (6.0 - 3.0 * x2 + 2.0 * x4) * c2 - 2.0 * x * (2.0 - x2) * (3.0 + 2.0 * x2) * s2);
    Ok(GValues { g0, g1, g2, g2_tilde })
}

/// `g(x) = K x^(2k) ∫_x^∞ f(y) y^(-2k-1) dy`, expanded termwise; the
/// constant `B` collects the `y^(-1)` integral from 1 to ∞.
fn g_series(kind: DeltaKind, x: f64) -> f64 {
    let k = kind.half_power() as usize;
    let big_k = 1.0 / kind.small_x_constant();
    let b = match kind {
        DeltaKind::Zero => 1.5 - EULER_GAMMA,
        DeltaKind::One => 1.75 - EULER_GAMMA,
        DeltaKind::Two => 2.0 - EULER_GAMMA,
        DeltaKind::TwoTilde => 1.75 - EULER_GAMMA - std::f64::consts::LN_2,
    };
    let c = series(kind);
    let x2 = x * x;
    let mut tail = 0.0;
    let mut pw = x2; // x^(2(m−k))
    for (m, cm) in c.iter().enumerate().skip(k + 1) {
        tail += cm * pw / (2 * (m - k)) as f64;
        pw *= x2;
    }
    x.powi(2 * k as i32) * (-x.ln() + b - big_k * tail)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    SubCritical,
    CriticalLog,
    DomainSatisfied,
}

/// Growth `√Δ(s) ~ s^power` (times `√log(1/s)` when `log` is set) as s → 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rate {
    pub power: f64,
    pub log: bool,
}

impl Rate {
    fn slowest(a: Rate, b: Rate) -> Rate {
        const EPS: f64 = 1e-12;
        if a.power < b.power - EPS {
            a
        } else if b.power < a.power - EPS {
            b
        } else {
            Rate { power: a.power, log: a.log || b.log }
        }
    }
}

/// One of the Δ bounds, resolved to a regime for a given state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaBound {
    pub kind: DeltaKind,
    pub regime: Regime,
    pub profile: TailProfile,
    /// Moment used by the low-energy part (critical) or by the whole bound (domain).
    moment: f64,
    /// Cutoff `Λ` of the critical regime.
    cutoff: f64,
}

const CRITICAL_TOL: f64 = 1e-12;

impl DeltaBound {
    pub fn new(kind: DeltaKind, tp: TailProfile, moments: &Moments) -> Result<Self, TailError> {
        let delta = tp.delta;
        if delta <= kind.min_delta() {
            return Err(TailError::TooSlow { kind, delta, min: kind.min_delta() });
        }
        let crit = kind.critical();
        let missing = |power| TailError::MissingMoment { kind, delta, power };
        let (regime, moment, cutoff) = if (delta - crit).abs() <= CRITICAL_TOL {
            // quasi-optimal cutoff, balancing the two leading small-s terms
            let (moment, cutoff) = match kind {
                DeltaKind::Zero => (1.0, tp.lambda0),
                DeltaKind::One => {
                    let m = moments.get(1).ok_or(missing(1))?;
                    (m, 2f64.sqrt() * tp.lambda0.powi(2) / m)
                }
                DeltaKind::Two | DeltaKind::TwoTilde => {
                    let m = moments.get(2).ok_or(missing(2))?;
                    (m, 3f64.sqrt() * tp.lambda0.powi(3) / m)
                }
            };
            (Regime::CriticalLog, moment, cutoff)
        } else if delta < crit {
            (Regime::SubCritical, 0.0, 0.0)
        } else {
            let k = kind.half_power();
            (Regime::DomainSatisfied, moments.get(k).ok_or(missing(k))?, 0.0)
        };
        Ok(DeltaBound { kind, regime, profile: tp, moment, cutoff })
    }

    /// Upper bound on `Δ(s)`, `s ≥ 0`.
    pub fn value(&self, s: f64) -> f64 {
        let s = s.abs();
        if s == 0.0 {
            return 0.0;
        }
        let k = self.kind.half_power() as i32;
        let c = self.kind.small_x_constant();
        let TailProfile { delta, lambda0 } = self.profile;
        match self.regime {
            Regime::SubCritical => self.kind.subcritical_constant(delta) * (lambda0 * s).powf(2.0 * delta),
            Regime::DomainSatisfied => c * self.moment.powi(2) * s.powi(2 * k),
            Regime::CriticalLog => {
                if !self.cutoff.is_finite() {
                    // vanishing moment: the measure sits at λ = 0
                    return 0.0;
                }
                let lam = self.cutoff;
                // the Δ0 low part uses ∫_{|λ|<Λ} λ² dμ ≤ Λ², the others ‖H^(k−1)φ‖²
                let low = match self.kind {
                    DeltaKind::Zero => lam * lam * s * s,
                    _ => c * lam * lam * self.moment.powi(2) * s.powi(2 * k),
                };
                let high = self.kind.critical_tail_factor() * (lambda0 / lam).powi(2 * k) * self.kind.g(lam * s);
                low + high
            }
        }
    }

    pub fn rate(&self) -> Rate {
        match self.regime {
            Regime::SubCritical => Rate { power: self.profile.delta, log: false },
            Regime::CriticalLog => Rate { power: self.kind.half_power() as f64, log: true },
            Regime::DomainSatisfied => Rate { power: self.kind.half_power() as f64, log: false },
        }
    }

    /// Cutoff used in the logarithmic regime.
    pub fn cutoff(&self) -> Option<f64> {
        (self.regime == Regime::CriticalLog).then_some(self.cutoff)
    }
}

pub fn delta_bound(kind: DeltaKind, tp: TailProfile, s: f64, moments: &Moments) -> Result<f64, TailError> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(TailError::NonPositive { what: "time step s", value: s });
    }
    Ok(DeltaBound::new(kind, tp, moments)?.value(s))
}

/// Bound on `‖(e^{-isH} - 1 + isH)φ‖²`.
pub fn delta1_bound(tp: TailProfile, s: f64, moments: &Moments) -> Result<f64, TailError> {
    delta_bound(DeltaKind::One, tp, s, moments)
}

/// Spectral data of one summand at the input state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorTail {
    pub profile: TailProfile,
    pub moments: Moments,
}

/// Energy shifts `H1 → H1 - first`, `H2 → H2 - second`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Shift {
    pub first: f64,
    pub second: f64,
}

impl Shift {
    pub const NONE: Shift = Shift { first: 0.0, second: 0.0 };
}

/// A bound together with its asymptotic decay `N^-exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalBound {
    pub value: f64,
    /// Decay exponent in `N` of the slowest term.
    pub exponent: f64,
    /// Whether the slowest term carries a `√log N` factor.
    pub log: bool,
    pub terms: Vec<(String, f64)>,
}

struct Assembly {
    terms: Vec<(String, f64, Rate)>,
}

impl Assembly {
    fn new() -> Self {
        Assembly { terms: Vec::new() }
    }

    /// Adds a term `value` that decays like `N^(-exponent)`.
    fn push(&mut self, label: &str, value: f64, exponent: f64, log: bool) {
        self.terms.push((label.to_string(), value, Rate { power: exponent, log }));
    }

    fn finish(self) -> FractionalBound {
        // the rate is set by the slowest term that is actually present
        let live: Vec<Rate> = self.terms.iter().filter(|t| t.1 != 0.0).map(|t| t.2).collect();
        let pool = if live.is_empty() { self.terms.iter().map(|t| t.2).collect() } else { live };
        let rate = pool.into_iter().reduce(Rate::slowest).unwrap_or(Rate { power: f64::INFINITY, log: false });
        FractionalBound {
            value: self.terms.iter().map(|t| t.1).sum(),
            exponent: rate.power,
            log: rate.log,
            terms: self.terms.into_iter().map(|(l, v, _)| (l, v)).collect(),
        }
    }
}

fn check_time(t: f64, n: usize) -> Result<(), TailError> {
    if !(t >= 0.0 && t.is_finite()) || n == 0 {
        return Err(TailError::BadTime { t, n });
    }
    Ok(())
}

fn sqrt_delta(b: &DeltaBound, s: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        b.value(s).sqrt()
    }
}

/// First-order bound `N(√Δ¹₁(t/N) + √Δ¹₂(t/N))` for the unshifted summands plus
/// the corrections `g²t²/(2N) + |g| t² ‖H_j φ‖ / N` for each shift `g`.
pub fn first_order_fractional(h1: &OperatorTail, h2: &OperatorTail, t: f64, n: usize, shift: Shift) -> Result<FractionalBound, TailError> {
    check_time(t, n)?;
    let nf = n as f64;
    let s = t / nf;
    let b1 = DeltaBound::new(DeltaKind::One, h1.profile, &h1.moments)?;
    let b2 = DeltaBound::new(DeltaKind::One, h2.profile, &h2.moments)?;
    let mut a = Assembly::new();
    a.push("H1", nf * sqrt_delta(&b1, s), b1.rate().power - 1.0, b1.rate().log);
    a.push("H2", nf * sqrt_delta(&b2, s), b2.rate().power - 1.0, b2.rate().log);
    for (g, target, label) in [(shift.first, h1, "shift H1"), (shift.second, h2, "shift H2")] {
        if g == 0.0 {
            continue;
        }
        let norm = target.moments.first.ok_or(TailError::MissingMoment { kind: DeltaKind::One, delta: target.profile.delta, power: 1 })?;
        let g = g.abs();
        a.push(label, g * g * t * t / (2.0 * nf) + g * t * t * norm / nf, 1.0, false);
    }
    Ok(a.finish())
}

/// Which of the two second-order estimates is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondOrderPath {
    /// Needs `φ` in the domain of `H1`; uses Δ¹ of `H1` and Δ̃² of `H2`.
    Coarse,
    /// Needs `φ` in the domain of `H1²`; uses Δ² of `H1`, Δ̃² of `H2` and Δ⁰ of `H2` at `H1²φ`.
    Refined,
}

/// Tail of `H2` at the normalized vector `H1²φ / ‖H1²φ‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquaredStateTail {
    pub norm: f64,
    pub tail: OperatorTail,
}

/// Inputs for the symmetric `e^{-isH1/2} e^{-isH2} e^{-isH1/2}` cycle.
///
/// `outer` describes `H1` before the shift `H1 → H1 - outer_shift`, `inner`
/// describes `H2` as used; together `(H1 - outer_shift + H2)φ = 0`. The
/// shift costs explicit correction terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondOrderInput {
    pub outer: OperatorTail,
    pub inner: OperatorTail,
    pub outer_shift: f64,
    pub outer_squared: Option<SquaredStateTail>,
}

/// Second-order bound. With `path = None` the refined estimate is used when
/// `δ1 > 2` and the data for `H1²φ` is present, the coarse one otherwise.
pub fn second_order_fractional(
    input: &SecondOrderInput,
    t: f64,
    n: usize,
    path: Option<SecondOrderPath>,
) -> Result<(SecondOrderPath, FractionalBound), TailError> {
    check_time(t, n)?;
    let nf = n as f64;
    let half = t / (2.0 * nf);
    let d1 = input.outer.profile.delta;
    let path = path.unwrap_or(if d1 > 2.0 && input.outer_squared.is_some() { SecondOrderPath::Refined } else { SecondOrderPath::Coarse });
    let g = input.outer_shift.abs();
    let mut a = Assembly::new();
    match path {
        SecondOrderPath::Coarse => {
            let b1 = DeltaBound::new(DeltaKind::One, input.outer.profile, &input.outer.moments)?;
            a.push("H1", 2.0 * nf * sqrt_delta(&b1, half), b1.rate().power - 1.0, b1.rate().log);
        }
        SecondOrderPath::Refined => {
            let b1 = DeltaBound::new(DeltaKind::Two, input.outer.profile, &input.outer.moments)?;
            a.push("H1", 2.0 * nf * sqrt_delta(&b1, half), b1.rate().power - 1.0, b1.rate().log);
        }
    }
    let b2 = DeltaBound::new(DeltaKind::TwoTilde, input.inner.profile, &input.inner.moments)?;
    a.push("H2", nf * sqrt_delta(&b2, half), b2.rate().power - 1.0, b2.rate().log);
    if path == SecondOrderPath::Refined {
        let sq = input.outer_squared.ok_or(TailError::MissingMoment { kind: DeltaKind::Two, delta: d1, power: 2 })?;
        let b0 = DeltaBound::new(DeltaKind::Zero, sq.tail.profile, &sq.tail.moments)?;
        let r = b0.rate();
        a.push("H2 at H1²φ", t * t / (8.0 * nf) * sq.norm * sqrt_delta(&b0, t / nf), r.power + 1.0, r.log);
    }
    if g != 0.0 {
        let missing = |power| TailError::MissingMoment { kind: DeltaKind::One, delta: d1, power };
        let m1 = input.outer.moments.first.ok_or(missing(1))?;
        match path {
            SecondOrderPath::Coarse => {
                a.push("shift", t * t / (2.0 * nf) * (0.5 * g * g + g * m1), 1.0, false);
            }
            SecondOrderPath::Refined => {
                let m2 = input.outer.moments.second.ok_or(missing(2))?;
                let c = g.powi(3) / 6.0 + 0.5 * g * g * m1 + 0.5 * g * m2;
                a.push("shift", t.powi(3) / (4.0 * nf * nf) * c, 2.0, false);
            }
        }
    }
    Ok((path, a.finish()))
}

/// Result of combining per-eigenstate bounds for a superposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SuperpositionBound {
    Finite(f64),
    Unbounded,
}

impl SuperpositionBound {
    pub fn value(&self) -> f64 {
        match self {
            SuperpositionBound::Finite(v) => *v,
            SuperpositionBound::Unbounded => f64::INFINITY,
        }
    }
}

/// `min(Σ|c_l| ξ_l, (Σ ξ_l²)^(1/2))` over `(|c_l|, ξ_l)` pairs. Components with
/// zero weight contribute nothing to the first sum even if their bound is infinite.
pub fn superposition_bound(weights: &[(f64, f64)]) -> SuperpositionBound {
    let weighted: f64 = weights.iter().filter(|(c, _)| *c != 0.0).map(|(c, x)| c.abs() * x).sum();
    let root: f64 = weights.iter().map(|(_, x)| x * x).sum::<f64>().sqrt();
    let v = weighted.min(root);
    if v.is_finite() {
        SuperpositionBound::Finite(v)
    } else {
        SuperpositionBound::Unbounded
    }
}
