//! Radial hydrogen dynamics in a truncated spherical-Bessel basis.
//!
//! Mode `k` is `u_k(r) ∝ j_l(α_k r / R)` with `α_k` the `k`-th positive zero
//! of `j_l`; the kinetic energy is diagonal there, `(α_k / R)² / 2`. The
//! potential `-1/r` is diagonal on the collocation grid `r_i = α_i R / α_{M+1}`.
//! Samples are weighted by `√w_i` with the Fourier-Bessel quadrature weights,
//! and the sampled mode matrix is replaced by its nearest orthogonal matrix
//! (polar factor). The transform between the two representations is then
//! exactly orthogonal, every step is unitary, and the discretized generators
//! are explicit symmetric matrices.

use crate::formula::ProductFormula;
use crate::hydrogen::{radial_wavefunction, HydrogenLevel};
use crate::special::{sph_bessel, sph_bessel_zeros, RootError};
use crate::word::Letter;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

pub const MIN_MODES: usize = 8;
/// Default ceiling on the projection loss of an initial state.
pub const DEFAULT_MAX_PROJECTION_LOSS: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BesselError {
    #[error("need at least {MIN_MODES} modes, got {0}")]
    TooFewModes(usize),
    #[error("radial cutoff must be positive, got {0}")]
    BadRadius(f64),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("projection loss {loss:e} exceeds {threshold:e} (R={r_max}, modes={modes}); enlarge the basis")]
    ProjectionLoss { loss: f64, threshold: f64, r_max: f64, modes: usize },
    #[error("state has angular momentum {state} but the basis has {basis}")]
    AngularMomentum { state: usize, basis: usize },
    #[error("basis has {modes} modes, state has {len} coefficients")]
    Length { modes: usize, len: usize },
    #[error("state has zero norm")]
    ZeroState,
    #[error("number of cycles must be at least 1")]
    ZeroSteps,
    #[error("n_max={n_max} must be at least n={n}")]
    BadLevelRange { n: usize, n_max: usize },
}

#[derive(Debug)]
pub struct BesselBasis {
    l: usize,
    r_max: f64,
    zeros: Vec<f64>,
    grid: Vec<f64>,
    weights: Vec<f64>,
    kinetic: Vec<f64>,
    potential: Vec<f64>,
    /// grid ← modes
    q: DMatrix<f64>,
    qt: DMatrix<f64>,
    sampling_defect: f64,
    spectrum: OnceLock<(Vec<f64>, DMatrix<f64>)>,
}

impl BesselBasis {
    pub fn build(l: usize, r_max: f64, modes: usize) -> Result<Self, BesselError> {
        if modes < MIN_MODES {
            return Err(BesselError::TooFewModes(modes));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(BesselError::BadRadius(r_max));
        }
        let mut zeros = sph_bessel_zeros(l, modes + 1)?;
        let a_last = zeros.pop().expect("modes + 1 zeros");
        let h = r_max / a_last;
        let grid: Vec<f64> = zeros.iter().map(|a| a * h).collect();
        let weights: Vec<f64> = zeros.iter().map(|&a| PI * h.powi(3) / sph_bessel(l + 1, a).powi(2)).collect();
        let norms: Vec<f64> = zeros.iter().map(|&a| (0.5 * r_max.powi(3)).sqrt() * sph_bessel(l + 1, a).abs()).collect();
        let y = DMatrix::from_fn(modes, modes, |i, k| weights[i].sqrt() * sph_bessel(l, zeros[k] * grid[i] / r_max) / norms[k]);
        let sampling_defect = (y.tr_mul(&y) - DMatrix::identity(modes, modes)).amax();
        let svd = y.svd(true, true);
        let q = svd.u.expect("u requested") * svd.v_t.expect("v_t requested");
        let qt = q.transpose();
        let kinetic = zeros.iter().map(|a| 0.5 * (a / r_max).powi(2)).collect();
        let potential = grid.iter().map(|r| -1.0 / r).collect();
        Ok(BesselBasis { l, r_max, zeros, grid, weights, kinetic, potential, q, qt, sampling_defect, spectrum: OnceLock::new() })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn modes(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kinetic_eigenvalues(&self) -> &[f64] {
        &self.kinetic
    }

    /// `-1/r_i` on the grid.
    pub fn potential_samples(&self) -> &[f64] {
        &self.potential
    }

    /// Orthogonal map from mode coefficients to weighted grid samples.
    pub fn transform(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// Largest entry of `YᵀY - I` for the raw sampled modes, before orthogonalization.
    pub fn sampling_defect(&self) -> f64 {
        self.sampling_defect
    }

    /// Weighted grid samples `√w_i f(r_i)` to mode coefficients.
    pub fn forward(&self, samples: &[f64]) -> Vec<f64> {
        (&self.qt * nalgebra::DVector::from_column_slice(samples)).as_slice().to_vec()
    }

    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        (&self.q * nalgebra::DVector::from_column_slice(coeffs)).as_slice().to_vec()
    }

    /// Mode coefficients of a radial function sampled on the grid.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let s: Vec<f64> = self.grid.iter().zip(&self.weights).map(|(r, w)| w.sqrt() * f(*r)).collect();
        self.forward(&s)
    }

    pub fn kinetic_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.kinetic))
    }

    /// `Qᵀ diag(-1/r_i) Q`, the potential in mode space.
    pub fn potential_matrix(&self) -> DMatrix<f64> {
        let mut vq = self.q.clone();
        for (i, v) in self.potential.iter().enumerate() {
            vq.row_mut(i).scale_mut(*v);
        }
        let m = &self.qt * vq;
        // symmetrize away round-off
        (&m + m.transpose()) * 0.5
    }

    pub fn hamiltonian(&self) -> DMatrix<f64> {
        self.potential_matrix() + self.kinetic_matrix()
    }

    /// Eigenvalues (ascending) and eigenvectors of the discretized Hamiltonian.
    pub fn spectrum(&self) -> &(Vec<f64>, DMatrix<f64>) {
        self.spectrum.get_or_init(|| {
            let eig = SymmetricEigen::new(self.hamiltonian());
            let mut idx: Vec<usize> = (0..self.modes()).collect();
            idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let vals = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
            let mut vecs = DMatrix::from_fn(self.modes(), self.modes(), |i, j| eig.eigenvectors[(i, idx[j])]);
            // fix the sign so the largest component is positive
            for mut c in vecs.column_iter_mut() {
                let big = c.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
                if big < 0.0 {
                    c.neg_mut();
                }
            }
            (vals, vecs)
        })
    }

    /// Discrete counterpart of level `n` in this angular-momentum sector.
    pub fn bound_state(&self, n: usize) -> Result<(f64, Vec<f64>), BesselError> {
        if n <= self.l {
            return Err(BesselError::BadLevelRange { n: self.l + 1, n_max: n });
        }
        let (vals, vecs) = self.spectrum();
        let k = n - self.l - 1;
        if k >= vals.len() {
            return Err(BesselError::Length { modes: self.modes(), len: k + 1 });
        }
        Ok((vals[k], vecs.column(k).iter().copied().collect()))
    }
}

/// Complex mode coefficients, stored as real and imaginary columns.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialState {
    l: usize,
    parts: DMatrix<f64>,
}

impl RadialState {
    pub fn from_real(l: usize, coeffs: &[f64]) -> Self {
        let m = coeffs.len();
        RadialState { l, parts: DMatrix::from_fn(m, 2, |i, j| if j == 0 { coeffs[i] } else { 0.0 }) }
    }

    pub fn from_complex(l: usize, coeffs: &[Complex64]) -> Self {
        let m = coeffs.len();
        RadialState { l, parts: DMatrix::from_fn(m, 2, |i, j| if j == 0 { coeffs[i].re } else { coeffs[i].im }) }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn coeffs(&self) -> Vec<Complex64> {
        (0..self.parts.nrows()).map(|i| Complex64::new(self.parts[(i, 0)], self.parts[(i, 1)])).collect()
    }

    pub fn norm(&self) -> f64 {
        self.parts.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &RadialState) -> Complex64 {
        let (a, b) = (&self.parts, &other.parts);
        let re = a.column(0).dot(&b.column(0)) + a.column(1).dot(&b.column(1));
        let im = a.column(0).dot(&b.column(1)) - a.column(1).dot(&b.column(0));
        Complex64::new(re, im)
    }

    pub fn distance(&self, other: &RadialState) -> f64 {
        (&self.parts - &other.parts).norm()
    }

    fn phase(&mut self, angles: impl Iterator<Item = f64>) {
        for (i, th) in angles.enumerate() {
            let (s, c) = th.sin_cos();
            let (a, b) = (self.parts[(i, 0)], self.parts[(i, 1)]);
            // (a + ib) e^{-iθ}
            self.parts[(i, 0)] = a * c + b * s;
            self.parts[(i, 1)] = b * c - a * s;
        }
    }
}

/// Exponentials for `n` cycles, adjacent same-generator slots merged.
pub fn fused_slots(pf: &ProductFormula, t: f64, n: usize) -> Vec<(Letter, f64)> {
    let dt = t / n as f64;
    let taus = pf.taus_f64();
    let mut out: Vec<(Letter, f64)> = Vec::with_capacity(n * taus.len());
    for _ in 0..n {
        for (j, tau) in taus.iter().enumerate() {
            if *tau == 0.0 {
                continue;
            }
            let x = Letter::for_slot(j + 1);
            match out.last_mut() {
                Some((y, acc)) if *y == x => *acc += tau * dt,
                _ => out.push((x, tau * dt)),
            }
        }
    }
    out
}

/// Applies `e^{-i x H_X}` for each `(X, x)` in order (`A` kinetic, `B` potential).
pub fn evolve_slots(basis: &BesselBasis, state: &RadialState, slots: &[(Letter, f64)]) -> RadialState {
    let mut s = state.clone();
    let mut on_grid = false;
    for &(x, dt) in slots {
        match x {
            Letter::A => {
                if on_grid {
                    s.parts = &basis.qt * &s.parts;
                    on_grid = false;
                }
                s.phase(basis.kinetic.iter().map(|k| k * dt));
            }
            Letter::B => {
                if !on_grid {
                    s.parts = &basis.q * &s.parts;
                    on_grid = true;
                }
                s.phase(basis.potential.iter().map(|v| v * dt));
            }
        }
    }
    if on_grid {
        s.parts = &basis.qt * &s.parts;
    }
    s
}

/// `n` cycles of `pf` over total time `t`.
pub fn trotter_step(basis: &BesselBasis, state: &RadialState, pf: &ProductFormula, t: f64, n: usize) -> RadialState {
    evolve_slots(basis, state, &fused_slots(pf, t, n))
}

/// Exact `e^{-iHt}` of the discretized Hamiltonian.
pub fn exact_evolution(basis: &BesselBasis, state: &RadialState, t: f64) -> RadialState {
    let (vals, vecs) = basis.spectrum();
    let mut c = RadialState { l: state.l, parts: vecs.tr_mul(&state.parts) };
    c.phase(vals.iter().map(|e| e * t));
    c.parts = vecs * c.parts;
    c
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialState {
    /// Discrete eigenstate matching a hydrogen level.
    Level(HydrogenLevel),
    /// Hydrogen level sampled on the grid and normalized; evolved exactly with
    /// the discretized Hamiltonian.
    Projected(HydrogenLevel),
    /// The three-Gaussian ground-state approximation (an `s` state).
    Sto3g,
}

/// Initial state, the exact reference at time `t`, and the projection loss.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub state: RadialState,
    pub energy: Option<f64>,
    pub projection_loss: f64,
}

impl Prepared {
    pub fn reference(&self, basis: &BesselBasis, t: f64) -> RadialState {
        match self.energy {
            Some(e) => {
                let mut s = self.state.clone();
                s.phase(std::iter::repeat_n(e * t, basis.modes()));
                s
            }
            None => exact_evolution(basis, &self.state, t),
        }
    }
}

/// For a level, the discrete eigenstate with loss `1 - |⟨analytic, discrete⟩|²`
/// (both normalized); for the Gaussian state, its normalized projection with
/// loss `1 - ‖sampled‖² / ‖ψ‖²`.
pub fn prepare(basis: &BesselBasis, init: &InitialState, max_loss: f64) -> Result<Prepared, BesselError> {
    let (state, energy, loss) = match init {
        InitialState::Level(level) => {
            if level.l() != basis.l() {
                return Err(BesselError::AngularMomentum { state: level.l(), basis: basis.l() });
            }
            let a = basis.sample(|r| radial_wavefunction(level, r));
            let an = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            let (e, v) = basis.bound_state(level.n())?;
            let ov: f64 = a.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() / an;
            (RadialState::from_real(basis.l(), &v), Some(e), (1.0 - ov * ov).max(0.0))
        }
        InitialState::Projected(level) => {
            if level.l() != basis.l() {
                return Err(BesselError::AngularMomentum { state: level.l(), basis: basis.l() });
            }
            let a = basis.sample(|r| radial_wavefunction(level, r));
            let n2: f64 = a.iter().map(|v| v * v).sum();
            let a: Vec<f64> = a.iter().map(|v| v / n2.sqrt()).collect();
            (RadialState::from_real(basis.l(), &a), None, (1.0 - n2).abs())
        }
        InitialState::Sto3g => {
            if basis.l() != 0 {
                return Err(BesselError::AngularMomentum { state: 0, basis: basis.l() });
            }
            let a = basis.sample(crate::hydrogen::sto3g_state);
            let n2: f64 = a.iter().map(|v| v * v).sum();
            if n2 == 0.0 {
                return Err(BesselError::ZeroState);
            }
            let a: Vec<f64> = a.iter().map(|v| v / n2.sqrt()).collect();
            (RadialState::from_real(0, &a), None, (1.0 - n2 / crate::hydrogen::sto3g_norm_squared()).abs())
        }
    };
    if !(loss <= max_loss) {
        return Err(BesselError::ProjectionLoss { loss, threshold: max_loss, r_max: basis.r_max(), modes: basis.modes() });
    }
    Ok(Prepared { state, energy, projection_loss: loss })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorCurve {
    pub points: Vec<(usize, f64)>,
    pub projection_loss: f64,
    pub unitaries: Vec<usize>,
}

/// Discrete `L²` distance between the Trotterized and exact states for every `N`.
pub fn trotter_error_curve(
    basis: &BesselBasis,
    init: &InitialState,
    pf: &ProductFormula,
    t: f64,
    ns: &[usize],
    max_loss: f64,
) -> Result<ErrorCurve, BesselError> {
    if ns.contains(&0) {
        return Err(BesselError::ZeroSteps);
    }
    let prep = prepare(basis, init, max_loss)?;
    let reference = prep.reference(basis, t);
    let errs: Vec<f64> = ns.par_iter().map(|&n| trotter_step(basis, &prep.state, pf, t, n).distance(&reference)).collect();
    Ok(ErrorCurve {
        points: ns.iter().copied().zip(errs).collect(),
        projection_loss: prep.projection_loss,
        unitaries: ns.iter().map(|&n| pf.unitaries(n)).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evolution<'a> {
    Exact,
    Trotter(&'a ProductFormula, usize),
}

/// `1 - ‖P φ(t)‖²` with `P` the projector on the discrete bound states of the
/// basis sector: levels `n' = l+1 ..= n_max` (all of them when `None`) whose
/// discrete energy is negative.
pub fn ionization_probability(
    basis: &BesselBasis,
    level: &HydrogenLevel,
    evolution: Evolution,
    t: f64,
    n_max: Option<usize>,
    max_loss: f64,
) -> Result<f64, BesselError> {
    if let Some(n_max) = n_max {
        if n_max < level.n() {
            return Err(BesselError::BadLevelRange { n: level.n(), n_max });
        }
    }
    let prep = prepare(basis, &InitialState::Level(*level), max_loss)?;
    let evolved = match evolution {
        Evolution::Exact => exact_evolution(basis, &prep.state, t),
        Evolution::Trotter(_, 0) => return Err(BesselError::ZeroSteps),
        Evolution::Trotter(pf, n) => trotter_step(basis, &prep.state, pf, t, n),
    };
    let (vals, vecs) = basis.spectrum();
    let last = n_max.map_or(vals.len(), |m| (m - basis.l()).min(vals.len()));
    let mut kept = 0.0;
    for k in (0..last).take_while(|&k| vals[k] < 0.0) {
        let v: Vec<f64> = vecs.column(k).iter().copied().collect();
        kept += RadialState::from_real(basis.l(), &v).inner(&evolved).norm_sqr();
    }
    Ok((1.0 - kept / evolved.norm().powi(2)).max(0.0))
}
