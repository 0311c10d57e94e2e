//! Hydrogen atom in Hartree units (ħ = m_e = a0 = 1): eigenfunctions, moments,
//! spectral tails of the kinetic and potential energies, and the explicit
//! first-order Trotter bounds built from them.

use crate::special::{beta, gamma, gegenbauer, laguerre, ln_gamma};
use crate::tails::{
    first_order_fractional, second_order_fractional, FractionalBound, Moments, OperatorTail, SecondOrderInput, SecondOrderPath, Shift,
    SquaredStateTail, TailError, TailProfile,
};
use num_rational::Rational64;
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HydrogenError {
    #[error("invalid quantum numbers n = {n}, l = {l}, m = {m}")]
    BadLevel { n: usize, l: usize, m: i64 },
    #[error("reduced time must be finite and nonnegative, got {0}")]
    BadTime(f64),
    #[error(transparent)]
    Tail(#[from] TailError),
}

/// Bound state `Ψ_{nlm}` with energy `-1/(2n²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HydrogenLevel {
    n: usize,
    l: usize,
    m: i64,
}

impl HydrogenLevel {
    pub fn new(n: usize, l: usize, m: i64) -> Result<Self, HydrogenError> {
        if n == 0 || l >= n || m.unsigned_abs() as usize > l {
            return Err(HydrogenError::BadLevel { n, l, m });
        }
        Ok(HydrogenLevel { n, l, m })
    }

    /// `Ψ_{nl0}`.
    pub fn nl(n: usize, l: usize) -> Result<Self, HydrogenError> {
        Self::new(n, l, 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn energy(&self) -> f64 {
        -0.5 / (self.n * self.n) as f64
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    fn lf(&self) -> f64 {
        self.l as f64
    }

    /// `ln[(n+l)!/(n-l-1)!]`, the ratio that shows up in every normalization.
    fn ln_factorial_ratio(&self) -> f64 {
        ln_gamma((self.n + self.l + 1) as f64) - ln_gamma((self.n - self.l) as f64)
    }
}

impl fmt::Display for HydrogenLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ψ_{}{}{}", self.n, self.l, self.m)
    }
}

/// Time in units of `t0 = m_e a0²/ħ`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ReducedTime(f64);

impl ReducedTime {
    /// `t0` in seconds.
    pub const T0_SECONDS: f64 = 2.418_884_326_585_7e-17;

    pub fn new(t_tilde: f64) -> Result<Self, HydrogenError> {
        if !(t_tilde >= 0.0 && t_tilde.is_finite()) {
            return Err(HydrogenError::BadTime(t_tilde));
        }
        Ok(ReducedTime(t_tilde))
    }

    pub fn from_seconds(t: f64) -> Result<Self, HydrogenError> {
        Self::new(t / Self::T0_SECONDS)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Radial function `𝓡_{nl}(u)`, normalized as `∫ u² 𝓡² du = 1`.
pub fn radial_wavefunction(level: &HydrogenLevel, u: f64) -> f64 {
    let (n, l) = (level.nf(), level.l);
    let x = 2.0 * u / n;
    let norm = (2.0 / n).powf(1.5) * (-0.5 * level.ln_factorial_ratio()).exp() / (2.0 * n).sqrt();
    norm * (-u / n).exp() * x.powi(l as i32) * laguerre(level.n - l - 1, (2 * l + 1) as f64, x)
}

/// Momentum distribution `Ξ_{nl}(u)`, normalized as `∫ Ξ du = 1`.
pub fn momentum_distribution(level: &HydrogenLevel, u: f64) -> f64 {
    let (n, l) = (level.nf(), level.lf());
    let ln_pref = (2.0 * l + 3.0) * 4f64.ln() + 2.0 * n.ln() + 2.0 * ln_gamma(l + 1.0) - level.ln_factorial_ratio();
    let y = n * n * u * u;
    let c = gegenbauer(level.n - level.l - 1, l + 1.0, (y - 1.0) / (y + 1.0));
    ln_pref.exp() / (2.0 * PI) * y.powf(l + 1.0) / (y + 1.0).powf(2.0 * l + 4.0) * c * c
}

/// A moment that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Moment {
    Finite(f64),
    Divergent,
}

impl Moment {
    pub fn finite(self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(v),
            Moment::Divergent => None,
        }
    }
}

/// `⟨1/r⟩ … ⟨1/r⁴⟩` in units of `a0^-k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialMoments {
    pub inv_r: f64,
    pub inv_r2: f64,
    pub inv_r3: Moment,
    pub inv_r4: Moment,
}

pub fn potential_moments(level: &HydrogenLevel) -> PotentialMoments {
    let (n, l) = (level.nf(), level.lf());
    let (inv_r3, inv_r4) = if level.l == 0 {
        (Moment::Divergent, Moment::Divergent)
    } else {
        let p = l * (l + 1.0) * (l + 0.5);
        (
            Moment::Finite(1.0 / (p * n.powi(3))),
            Moment::Finite((3.0 * n * n - l * (l + 1.0)) / (2.0 * p * (l - 0.5) * (l + 1.5) * n.powi(5))),
        )
    };
    PotentialMoments { inv_r: 1.0 / (n * n), inv_r2: 1.0 / ((l + 0.5) * n.powi(3)), inv_r3, inv_r4 }
}

/// `‖(V - E_n)² Ψ‖` from the moments (finite for `l ≥ 1`).
pub fn shifted_potential_square_norm(level: &HydrogenLevel) -> Moment {
    let m = potential_moments(level);
    let e = level.energy();
    match (m.inv_r3, m.inv_r4) {
        (Moment::Finite(r3), Moment::Finite(r4)) => {
            // V = -1/r, so odd powers of V flip sign
            let v4 = r4 + 4.0 * e * r3 + 6.0 * e * e * m.inv_r2 + 4.0 * e.powi(3) * m.inv_r + e.powi(4);
            Moment::Finite(v4.sqrt())
        }
        _ => Moment::Divergent,
    }
}

/// `‖T Ψ‖ = ‖(E_n - V) Ψ‖`.
pub fn kinetic_norm(level: &HydrogenLevel) -> f64 {
    let m = potential_moments(level);
    let e = level.energy();
    (e * e + 2.0 * e * m.inv_r + m.inv_r2).sqrt()
}

/// Upper bound on `‖T² Ψ‖` via the Gegenbauer envelope; finite for `l ≥ 2`.
pub fn kinetic_square_norm_bound(level: &HydrogenLevel) -> Moment {
    if level.l < 2 {
        return Moment::Divergent;
    }
    let l = level.lf();
    let x = (level.ln_factorial_ratio()).exp() * beta(l - 1.5, l + 5.5) / (level.nf().powi(7) * gamma(l + 1.5).powi(2));
    Moment::Finite(0.5 * x.sqrt())
}

/// Spectral-tail data of the kinetic and potential energies at `Ψ_{nlm}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailExponents {
    /// `δ1 = l/2 + 5/4`.
    pub delta1: Rational64,
    /// `δ2 = l + 3/2`.
    pub delta2: Rational64,
    /// Density cap `ρ1(λ) ≤ c1 λ^-(l+7/2)`.
    pub c1: f64,
    /// Density cap `ρ2(λ) ≤ c2 λ^-(2l+4)`.
    pub c2: f64,
    pub kinetic: TailProfile,
    pub potential: TailProfile,
}

pub fn tail_exponents(level: &HydrogenLevel) -> TailExponents {
    let (n, l) = (level.nf(), level.lf());
    let li = level.l as i64;
    let delta1 = Rational64::new(2 * li + 5, 4);
    let delta2 = Rational64::new(2 * li + 3, 2);
    let ln_ratio = level.ln_factorial_ratio();
    let ln_odd = 2.0 * ln_gamma(2.0 * l + 2.0);
    let c1 = ((3.0 * l + 1.5) * 2f64.ln() + 2.0 * ln_gamma(l + 1.0) + ln_ratio - (2.0 * l + 4.0) * n.ln() - ln_odd).exp() / PI;
    let c2 = ((2.0 * l + 2.0) * 2f64.ln() + ln_ratio - (2.0 * l + 4.0) * n.ln() - ln_odd).exp();
    // integrating the density caps: ∫_λ^∞ c x^-(a+1) dx = (c/a) λ^-a with a = 2δ
    let (a1, a2) = (l + 2.5, 2.0 * l + 3.0);
    let kinetic = TailProfile { delta: a1 / 2.0, lambda0: (c1 / a1).powf(1.0 / a1) };
    let potential = TailProfile { delta: a2 / 2.0, lambda0: (c2 / a2).powf(1.0 / a2) };
    TailExponents { delta1, delta2, c1, c2, kinetic, potential }
}

fn r2f(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// One term `coeff · t̃^time_power / N^step_power`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub time_power: f64,
    pub step_power: f64,
}

impl PowerTerm {
    pub fn eval(&self, t: ReducedTime, n: usize) -> f64 {
        self.coeff * t.value().powf(self.time_power) / (n as f64).powf(self.step_power)
    }
}

/// Closed-form first-order bound on `ξ_N(t; Ψ_{nlm})` split into powers of `N`;
/// same-power terms are merged.
pub fn first_order_terms(level: &HydrogenLevel) -> Vec<PowerTerm> {
    let (n, l) = (level.nf(), level.lf());
    let term = |coeff, tp, sp| PowerTerm { coeff, time_power: tp, step_power: sp };
    match level.l {
        0 => vec![
            term(4.0 / (5.0 * PI.sqrt() * n.powi(3)).sqrt(), 1.25, 0.25),
            term((4.0 * PI / (3.0 * n.powi(3))).sqrt(), 1.5, 0.5),
            term(0.5 * ((2.0 / n.powi(7)).sqrt() + 0.25 / n.powi(4)), 2.0, 1.0),
        ],
        1 => vec![
            term((64.0 * (n * n - 1.0) / (189.0 * PI.sqrt() * n.powi(5))).sqrt(), 1.75, 0.75),
            term(
                0.5 * (((6.0 - 4.0 / (n * n)) / (15.0 * n.powi(3))).sqrt() + (2.0 / (3.0 * n.powi(7))).sqrt() + 0.25 / n.powi(4)),
                2.0,
                1.0,
            ),
        ],
        _ => {
            let kin = (level.ln_factorial_ratio().exp() * beta(l - 1.5, l + 5.5) / (n.powi(7) * gamma(l + 1.5).powi(2))).sqrt();
            let pot = ((3.0 - l * (l + 1.0) / (n * n)) / (2.0 * n.powi(3) * l * (l + 1.0) * (l + 0.5) * (l + 1.5) * (l - 0.5))).sqrt();
            let shift = 1.0 / (n.powi(7) * (l + 0.5)).sqrt() + 0.25 / n.powi(4);
            vec![term(0.5 * (kin / 8.0 + pot + shift), 2.0, 1.0)]
        }
    }
}

/// Explicit first-order bound for the hydrogen eigenstate.
pub fn first_order_bound(level: &HydrogenLevel, t: ReducedTime, n: usize) -> f64 {
    first_order_terms(level).iter().map(|term| term.eval(t, n)).sum()
}

/// The kinetic term of [`first_order_bound`] for `l ≥ 2` carries the factor
/// 1/8 in front of the Gegenbauer-bounded fourth moment, whereas
/// `‖T²Ψ‖ ≤ kinetic_square_norm_bound` gives 1/2. This is the ratio.
pub const KINETIC_PRINTED_OVER_ASSEMBLED: f64 = 0.25;

/// Kinetic and potential operator data in the form the tail bounds consume.
pub fn operator_tails(level: &HydrogenLevel) -> (OperatorTail, OperatorTail) {
    let te = tail_exponents(level);
    let pm = potential_moments(level);
    let kinetic = OperatorTail {
        profile: te.kinetic,
        moments: Moments { first: Some(kinetic_norm(level)), second: kinetic_square_norm_bound(level).finite(), third: None },
    };
    let potential = OperatorTail {
        profile: te.potential,
        moments: Moments { first: Some(pm.inv_r2.sqrt()), second: pm.inv_r4.finite().map(f64::sqrt), third: None },
    };
    (kinetic, potential)
}

/// First-order bound assembled from the generic tail machinery: kinetic part
/// shifted by `g`, potential part by `E_n - g`. With `g = 0` this reproduces
/// the closed forms for `l ≤ 1`.
pub fn first_order_assembled(level: &HydrogenLevel, t: ReducedTime, n: usize, g: f64) -> Result<FractionalBound, HydrogenError> {
    let (kin, pot) = operator_tails(level);
    let shift = Shift { first: g, second: level.energy() - g };
    Ok(first_order_fractional(&kin, &pot, t.value(), n, shift)?)
}

/// Second-order (kinetic-outer) bound for `l ≤ 1`, potential unshifted and the
/// kinetic energy shifted by `E_n`.
pub fn second_order_assembled(level: &HydrogenLevel, t: ReducedTime, n: usize) -> Result<FractionalBound, HydrogenError> {
    let (kin, pot) = operator_tails(level);
    let input = SecondOrderInput { outer: kin, inner: pot, outer_shift: level.energy(), outer_squared: None };
    Ok(second_order_fractional(&input, t.value(), n, Some(SecondOrderPath::Coarse))?.1)
}

/// Decay exponents in `N` of the first- and second-order bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScalingClass {
    pub first_order: Rational64,
    /// Kinetic-potential-kinetic cycle.
    pub second_order_aba: Rational64,
    /// Potential-kinetic-potential cycle.
    pub second_order_bab: Rational64,
}

/// Tail exponents of the secondary measures entering the refined second-order bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixedExponent {
    NotApplicable,
    Exact(Rational64),
    AtLeast(Rational64),
}

/// `δ12`: tail of the potential at `T²Ψ`.
pub fn delta12(level: &HydrogenLevel) -> MixedExponent {
    match level.l {
        0 | 1 => MixedExponent::NotApplicable,
        2 | 3 => MixedExponent::Exact(Rational64::new(1, 2)),
        _ => MixedExponent::AtLeast(Rational64::new(5, 2)),
    }
}

/// `δ21`: tail of the kinetic energy at `V²Ψ`.
pub fn delta21(level: &HydrogenLevel) -> MixedExponent {
    match level.l {
        0 => MixedExponent::NotApplicable,
        l => MixedExponent::Exact(Rational64::new(2 * l as i64 - 1, 4)),
    }
}

pub fn scaling_class(level: &HydrogenLevel) -> ScalingClass {
    let r = |a, b| Rational64::new(a, b);
    let (aba, bab) = match level.l {
        0 => (r(1, 4), r(1, 4)),
        1 => (r(3, 4), r(3, 4)),
        2 => (r(5, 4), r(5, 4)),
        3 => (r(3, 2), r(7, 4)),
        _ => (r(2, 1), r(2, 1)),
    };
    let first = match level.l {
        0 => r(1, 4),
        1 => r(3, 4),
        _ => r(1, 1),
    };
    ScalingClass { first_order: first, second_order_aba: aba, second_order_bab: bab }
}

/// Decay exponents re-derived from the tail exponents through the generic
/// bounds; used to cross-check [`scaling_class`].
pub fn derived_scaling(level: &HydrogenLevel) -> Result<(f64, f64, f64), HydrogenError> {
    let te = tail_exponents(level);
    let unit = Moments { first: Some(1.0), second: Some(1.0), third: Some(1.0) };
    let op = |d: f64| OperatorTail { profile: TailProfile { delta: d, lambda0: 1.0 }, moments: unit };
    let (d1, d2) = (r2f(te.delta1), r2f(te.delta2));
    let first = first_order_fractional(&op(d1), &op(d2), 1.0, 1, Shift::NONE)?.exponent;
    let second = |outer: f64, inner: f64, mixed: MixedExponent| -> Result<f64, TailError> {
        let sq = match mixed {
            MixedExponent::Exact(d) | MixedExponent::AtLeast(d) => Some(SquaredStateTail { norm: 1.0, tail: op(r2f(d)) }),
            MixedExponent::NotApplicable => None,
        };
        let input = SecondOrderInput { outer: op(outer), inner: op(inner), outer_shift: 0.0, outer_squared: sq };
        Ok(second_order_fractional(&input, 1.0, 1, None)?.1.exponent)
    };
    Ok((first, second(d1, d2, delta12(level))?, second(d2, d1, delta21(level))?))
}

/// Contracted-Gaussian approximation of the ground state used as a
/// non-eigenstate test input (not normalized).
pub fn sto3g_state(u: f64) -> f64 {
    STO3G.iter().map(|(c, a)| c * (-a * u * u).exp()).sum()
}

pub const STO3G: [(f64, f64); 3] = [(0.44, 0.11), (0.53, 0.41), (0.15, 2.23)];

/// `∫ u² ψ² du` for [`sto3g_state`], in closed form.
pub fn sto3g_norm_squared() -> f64 {
    let mut s = 0.0;
    for (ci, ai) in STO3G {
        for (cj, aj) in STO3G {
            s += ci * cj * PI.sqrt() / (4.0 * (ai + aj).powf(1.5));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn lvl(n: usize, l: usize) -> HydrogenLevel {
        HydrogenLevel::nl(n, l).unwrap()
    }

    fn six(x: f64, printed: f64) -> bool {
        ((x - printed) / printed).abs() <= 5e-6
    }

    #[test]
    fn level_validation() {
        assert!(HydrogenLevel::new(0, 0, 0).is_err());
        assert!(HydrogenLevel::new(2, 2, 0).is_err());
        assert!(HydrogenLevel::new(3, 1, -2).is_err());
        assert_eq!(lvl(3, 2).energy(), -1.0 / 18.0);
    }

    #[test]
    fn radial_examples() {
        for &u in &[0.0, 0.5, 2.0] {
            assert!((radial_wavefunction(&lvl(1, 0), u) - 2.0 * (-u).exp()).abs() < 1e-14);
        }
        for n in 1..=5 {
            for l in 0..n {
                let lv = lvl(n, l);
                let norm = integrate(|u| u * u * radial_wavefunction(&lv, u).powi(2), 0.0, 60.0 * n as f64, 1e-13, 1e-12);
                assert!((norm - 1.0).abs() < 1e-8, "{lv}: {norm}");
                let mom = integrate(|u| momentum_distribution(&lv, u), 0.0, 1.0, 1e-13, 1e-12)
                    + integrate(|v| momentum_distribution(&lv, 1.0 / v) / (v * v), 1e-9, 1.0, 1e-13, 1e-12);
                assert!((mom - 1.0).abs() < 1e-8, "{lv}: Ξ norm {mom}");
            }
        }
        // u·𝓡_21 ∝ u² e^(-u/2) peaks at u = 4
        let f = |u: f64| u * radial_wavefunction(&lvl(2, 1), u);
        assert!(f(4.0) > f(3.99) && f(4.0) > f(4.01));
    }

    #[test]
    fn moments_against_quadrature() {
        for n in 1..=4 {
            for l in 0..n {
                let lv = lvl(n, l);
                let m = potential_moments(&lv);
                let q = |k: i32| integrate(|u| u.powi(2 - k) * radial_wavefunction(&lv, u).powi(2), 0.0, 80.0, 1e-13, 1e-11);
                assert!((q(1) - m.inv_r).abs() < 1e-9);
                assert!((q(2) - m.inv_r2).abs() < 1e-9);
                if l >= 1 {
                    assert!((q(3) - m.inv_r3.finite().unwrap()).abs() < 1e-9);
                    assert!((q(4) - m.inv_r4.finite().unwrap()).abs() < 1e-8);
                } else {
                    assert_eq!(m.inv_r3, Moment::Divergent);
                }
            }
        }
        assert!((potential_moments(&lvl(2, 1)).inv_r4.finite().unwrap() - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_potential_against_quadrature() {
        for n in 2..=5 {
            for l in 1..n {
                let lv = lvl(n, l);
                let e = lv.energy();
                let q = integrate(|u| u * u * (1.0 / u + e).powi(4) * radial_wavefunction(&lv, u).powi(2), 0.0, 100.0, 1e-14, 1e-12);
                let v = shifted_potential_square_norm(&lv).finite().unwrap();
                assert!((v * v - q).abs() < 1e-9 * q, "n={n} l={l}: {} vs {q}", v * v);
                // 16 P n^8 ⟨(V-E)^4⟩ = 24n^5 - 8L n^3 - 32(l-1/2)(l+3/2) n^3 + 24 L (l-1/2)(l+3/2) n - 7P
                let (nf, lf) = (n as f64, l as f64);
                let big_l = lf * (lf + 1.0);
                let w = (lf - 0.5) * (lf + 1.5);
                let p = big_l * (lf + 0.5) * w;
                let poly = 24.0 * nf.powi(5) - 8.0 * big_l * nf.powi(3) - 32.0 * w * nf.powi(3) + 24.0 * big_l * w * nf - 7.0 * p;
                assert!((poly / (16.0 * p * nf.powi(8)) - q).abs() < 1e-9 * q);
            }
        }
    }

    #[test]
    fn tail_exponent_examples() {
        let r = Rational64::new;
        let t0 = tail_exponents(&lvl(1, 0));
        assert_eq!((t0.delta1, t0.delta2), (r(5, 4), r(3, 2)));
        let t2 = tail_exponents(&lvl(3, 2));
        assert_eq!((t2.delta1, t2.delta2), (r(9, 4), r(7, 2)));
        let t4 = tail_exponents(&lvl(5, 4));
        assert_eq!((t4.delta1, t4.delta2), (r(13, 4), r(11, 2)));
    }

    #[test]
    fn reference_coefficients() {
        let c: Vec<f64> = first_order_terms(&lvl(1, 0)).iter().map(|t| t.coeff).collect();
        assert!(six(c[0], 1.34365) && six(c[1], 2.04665) && six(c[2], 0.832107), "{c:?}");
        let c: Vec<f64> = first_order_terms(&lvl(2, 1)).iter().map(|t| t.coeff).collect();
        assert!(six(c[0], 0.133831) && six(c[1], 0.145959), "{c:?}");
        let c = first_order_terms(&lvl(3, 2))[0].coeff;
        assert!(six(c, 0.023591), "{c}");
        assert!(c <= 1.0 / 40.0);
    }

    #[test]
    fn closed_forms_match_tail_assembly() {
        let t = ReducedTime::new(1.3).unwrap();
        for n in 1..=6 {
            for l in 0..n.min(2) {
                let lv = lvl(n, l);
                for steps in [1, 7, 100, 1000] {
                    let closed = first_order_bound(&lv, t, steps);
                    let asm = first_order_assembled(&lv, t, steps, 0.0).unwrap().value;
                    assert!((closed - asm).abs() < 1e-12 * closed, "{lv} N={steps}: {closed} vs {asm}");
                }
            }
        }
    }

    #[test]
    fn second_order_ground_state_relation() {
        let lv = lvl(1, 0);
        let t = ReducedTime::new(1.0).unwrap();
        let a = second_order_assembled(&lv, t, 10).unwrap();
        assert_eq!(a.exponent, 0.25);
        for steps in [10, 100, 10_000, 1_000_000] {
            let b1 = first_order_bound(&lv, t, steps);
            let b2 = second_order_assembled(&lv, t, steps).unwrap().value;
            assert!(b2 < b1);
        }
        // leading terms: the kinetic one shrinks by 2^(-1/4), the potential one by 1/2
        let big = 1e12 as usize;
        let ratio = second_order_assembled(&lv, t, big).unwrap().value / first_order_bound(&lv, t, big);
        assert!((ratio - 2f64.powf(-0.25)).abs() < 1e-3, "{ratio}");
    }

    #[test]
    fn scaling_table_rows() {
        let r = Rational64::new;
        let s3 = scaling_class(&lvl(4, 3));
        assert_eq!((s3.second_order_aba, s3.second_order_bab), (r(3, 2), r(7, 4)));
        let s0 = scaling_class(&lvl(1, 0));
        assert_eq!((s0.first_order, s0.second_order_aba, s0.second_order_bab), (r(1, 4), r(1, 4), r(1, 4)));
        let s5 = scaling_class(&lvl(6, 5));
        assert_eq!((s5.first_order, s5.second_order_aba, s5.second_order_bab), (r(1, 1), r(2, 1), r(2, 1)));
        for l in 0..8 {
            let lv = lvl(l + 1, l);
            let s = scaling_class(&lv);
            let (f, a, b) = derived_scaling(&lv).unwrap();
            assert_eq!((f, a, b), (r2f(s.first_order), r2f(s.second_order_aba), r2f(s.second_order_bab)), "l={l}");
        }
        assert_eq!(delta21(&lvl(5, 4)), MixedExponent::Exact(r(7, 4)));
    }

    #[test]
    fn sto3g_examples() {
        assert!((sto3g_state(0.0) - 1.12).abs() < 1e-15);
        assert!(sto3g_state(40.0) < 1e-30);
        let q = integrate(|u| u * u * sto3g_state(u).powi(2), 0.0, 40.0, 1e-14, 1e-13);
        assert!((q - sto3g_norm_squared()).abs() < 1e-10);
        let ov = integrate(|u| u * u * sto3g_state(u) * radial_wavefunction(&lvl(1, 0), u), 0.0, 40.0, 1e-14, 1e-13);
        let cos = ov / sto3g_norm_squared().sqrt();
        assert!((cos - 0.967_813_6).abs() < 1e-6, "{cos}");
    }
}
