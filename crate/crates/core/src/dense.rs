//! Brute-force Trotter evolution for small Hermitian pairs.
//!
//! Every slot exponential is applied through a cached eigendecomposition of
//! its generator, so phases are exact up to round-off and the measured error
//! is a reliable reference for the analytic bounds.

use crate::bound::{derive_bound, BoundError, BoundExpression};
use crate::formula::ProductFormula;
use crate::word::{Letter, OperatorWord};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest dimension accepted by [`HermitianPair`].
pub const MAX_DIM: usize = 64;
/// Points of the energy-split grid used by [`bound_validation`].
pub const SHIFT_GRID: usize = 21;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DenseError {
    #[error("{which} is not Hermitian (deviation {deviation:e})")]
    NotHermitian { which: &'static str, deviation: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("dimension {0} exceeds the limit of {MAX_DIM}")]
    TooLarge(usize),
    #[error("state is not an eigenvector of H1+H2 (residual {0:e})")]
    NotEigenstate(f64),
    #[error("state has zero norm")]
    ZeroState,
    #[error("number of cycles must be at least 1")]
    ZeroSteps,
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Exact propagator `e^{-i x H}` for one Hermitian generator.
#[derive(Clone, Debug)]
pub struct Propagator {
    vectors: CMatrix,
    values: DVector<f64>,
}

impl Propagator {
    pub fn new(h: &CMatrix) -> Self {
        let eig = SymmetricEigen::new(h.clone());
        Propagator { vectors: eig.eigenvectors, values: eig.eigenvalues }
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// `e^{-i x H} v`.
    pub fn apply(&self, v: &CVector, x: f64) -> CVector {
        let mut c = self.vectors.ad_mul(v);
        for (ci, &l) in c.iter_mut().zip(self.values.iter()) {
            *ci *= Complex64::from_polar(1.0, -x * l);
        }
        &self.vectors * c
    }

    /// Spectral norm `max |λ|`.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

fn hermitian_deviation(h: &CMatrix) -> f64 {
    (h - h.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

fn check_hermitian(h: &CMatrix, which: &'static str) -> Result<(), DenseError> {
    if !h.is_square() {
        return Err(DenseError::Dimension(format!("{which} is {}x{}", h.nrows(), h.ncols())));
    }
    let scale = h.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let deviation = hermitian_deviation(h);
    if deviation > 1e-12 * scale {
        return Err(DenseError::NotHermitian { which, deviation });
    }
    Ok(())
}

/// Evolves `psi` through `n` cycles of `pf` with time step `t/n`; slot 1 acts first.
pub fn trotter_evolve(h1: &Propagator, h2: &Propagator, psi: &CVector, pf: &ProductFormula, t: f64, n: usize) -> CVector {
    let dt = t / n as f64;
    let taus = pf.taus_f64();
    let mut v = psi.clone();
    for _ in 0..n {
        for (j, tau) in taus.iter().enumerate() {
            if *tau == 0.0 {
                continue;
            }
            let p = if Letter::for_slot(j + 1) == Letter::A { h1 } else { h2 };
            v = p.apply(&v, tau * dt);
        }
    }
    v
}

/// Two Hermitian generators and a normalized eigenstate of their sum.
#[derive(Clone, Debug)]
pub struct HermitianPair {
    h1: CMatrix,
    h2: CMatrix,
    phi: CVector,
    energy: f64,
    p1: Propagator,
    p2: Propagator,
}

impl HermitianPair {
    /// Validates the generators and `phi` (normalized here); the eigenvalue is
    /// the Rayleigh quotient and the residual must stay below `1e-12` times
    /// `max(1, ‖H1+H2‖)`.
    pub fn new(h1: CMatrix, h2: CMatrix, phi: CVector) -> Result<Self, DenseError> {
        check_hermitian(&h1, "H1")?;
        check_hermitian(&h2, "H2")?;
        let d = h1.nrows();
        if h2.nrows() != d || phi.len() != d {
            return Err(DenseError::Dimension(format!("H1 {d}, H2 {}, state {}", h2.nrows(), phi.len())));
        }
        if d > MAX_DIM {
            return Err(DenseError::TooLarge(d));
        }
        let nrm = phi.norm();
        if nrm == 0.0 {
            return Err(DenseError::ZeroState);
        }
        let phi = phi / Complex64::from(nrm);
        let h = &h1 + &h2;
        let hphi = &h * &phi;
        let energy = phi.dotc(&hphi).re;
        let residual = (&hphi - &phi * Complex64::from(energy)).norm();
        let scale = Propagator::new(&h).norm().max(1.0);
        if residual > 1e-12 * scale {
            return Err(DenseError::NotEigenstate(residual));
        }
        let p1 = Propagator::new(&h1);
        let p2 = Propagator::new(&h2);
        Ok(HermitianPair { h1, h2, phi, energy, p1, p2 })
    }

    /// Pair whose state is eigenvector number `index` (ascending energy) of `H1+H2`.
    pub fn from_eigenvector(h1: CMatrix, h2: CMatrix, index: usize) -> Result<Self, DenseError> {
        check_hermitian(&h1, "H1")?;
        check_hermitian(&h2, "H2")?;
        if h1.shape() != h2.shape() {
            return Err(DenseError::Dimension(format!("H1 {:?}, H2 {:?}", h1.shape(), h2.shape())));
        }
        let eig = SymmetricEigen::new(&h1 + &h2);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let k = *order.get(index).ok_or_else(|| DenseError::Dimension(format!("no eigenvector {index}")))?;
        let phi = eig.eigenvectors.column(k).into_owned();
        HermitianPair::new(h1, h2, phi)
    }

    pub fn h1(&self) -> &CMatrix {
        &self.h1
    }

    pub fn h2(&self) -> &CMatrix {
        &self.h2
    }

    pub fn state(&self) -> &CVector {
        &self.phi
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn dim(&self) -> usize {
        self.h1.nrows()
    }

    pub fn propagators(&self) -> (&Propagator, &Propagator) {
        (&self.p1, &self.p2)
    }

    /// `‖[H1, H2] φ‖`.
    pub fn commutator_action(&self) -> f64 {
        let c = &self.h1 * &self.h2 - &self.h2 * &self.h1;
        (c * &self.phi).norm()
    }

    /// `‖w φ‖` for every word, with `A = H1 - g` and `B = H2 - h + g`.
    pub fn word_norms(&self, words: impl IntoIterator<Item = OperatorWord>, g: f64) -> BTreeMap<OperatorWord, f64> {
        let d = self.dim();
        let id = CMatrix::identity(d, d);
        let a = &self.h1 - &id * Complex64::from(g);
        let b = &self.h2 - &id * Complex64::from(self.energy - g);
        words
            .into_iter()
            .map(|w| {
                let mut v = self.phi.clone();
                for l in w.letters().iter().rev() {
                    v = match l {
                        Letter::A => &a * v,
                        Letter::B => &b * v,
                    };
                }
                (w, v.norm())
            })
            .collect()
    }
}

/// `‖[S_N(t) - e^{-ith}] φ‖`.
pub fn trotter_error(pair: &HermitianPair, pf: &ProductFormula, t: f64, n: usize) -> Result<f64, DenseError> {
    if n == 0 {
        return Err(DenseError::ZeroSteps);
    }
    let v = trotter_evolve(&pair.p1, &pair.p2, &pair.phi, pf, t, n);
    let exact = &pair.phi * Complex64::from_polar(1.0, -t * pair.energy);
    Ok((v - exact).norm())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validation {
    pub measured: f64,
    pub bound: f64,
    /// Energy split attaining the minimum bound.
    pub shift: f64,
    pub holds: bool,
}

/// Measured error against the derived bound minimized over an energy-split grid.
pub fn bound_validation(
    pair: &HermitianPair,
    be: &BoundExpression,
    pf: &ProductFormula,
    t: f64,
    n: usize,
) -> Result<Validation, DenseError> {
    let measured = trotter_error(pair, pf, t, n)?;
    let r = pair.p1.norm();
    if !(t >= 0.0) {
        return Err(BoundError::BadArgument("t must be nonnegative").into());
    }
    let coeffs = be.floats();
    let scale = t.powi(be.time_power() as i32) / (n as f64).powi(be.step_power() as i32);
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..SHIFT_GRID {
        let g = if r == 0.0 { 0.0 } else { -r + 2.0 * r * i as f64 / (SHIFT_GRID - 1) as f64 };
        let norms = pair.word_norms(coeffs.keys().cloned(), g);
        let b = scale * coeffs.iter().map(|(w, c)| c * norms[w]).sum::<f64>();
        if b < best.0 {
            best = (b, g);
        }
    }
    // the bound is an exact inequality; allow only round-off in the measurement
    let holds = measured <= best.0 * (1.0 + 1e-9) + 1e-13;
    Ok(Validation { measured, bound: best.0, shift: best.1, holds })
}

fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let d = rows.len();
    CMatrix::from_fn(d, d, |i, j| Complex64::from(rows[i][j]))
}

/// The 3×3 pair with `[H1, H2] φ = 0` but a nonzero Trotter error.
pub fn no_go_example() -> HermitianPair {
    let h1 = real_matrix(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]);
    let h2 = real_matrix(&[&[0.0, -1.0, 0.0], &[-1.0, 0.0, -1.0], &[0.0, -1.0, 0.0]]);
    let phi = CVector::from_vec(vec![Complex64::from(1.0), Complex64::from(0.0), Complex64::from(0.0)]);
    HermitianPair::new(h1, h2, phi).expect("valid example")
}

/// Block pair `[[0, ε], [ε†, A]]`, `[[0, ε], [ε†, B]]` with the state in the
/// two-dimensional zero block. `A` and `B` are fixed non-commuting 3×3 blocks.
pub fn block_example(eps: f64) -> HermitianPair {
    let a = [[1.0, 0.5, 0.0], [0.5, -1.0, 0.3], [0.0, 0.3, 2.0]];
    let b = [[0.0, 1.0, 0.2], [1.0, 0.5, 0.0], [0.2, 0.0, -0.7]];
    let build = |blk: &[[f64; 3]; 3]| {
        CMatrix::from_fn(5, 5, |i, j| {
            let v = match (i < 2, j < 2) {
                (true, true) => 0.0,
                (false, false) => blk[i - 2][j - 2],
                _ => eps,
            };
            Complex64::from(v)
        })
    };
    let mut phi = CVector::zeros(5);
    phi[0] = Complex64::from(0.6);
    phi[1] = Complex64::from(0.8);
    // with ε ≠ 0 the block state is no longer an eigenstate; take the nearest one
    if eps == 0.0 {
        HermitianPair::new(build(&a), build(&b), phi).expect("valid example")
    } else {
        let (h1, h2) = (build(&a), build(&b));
        let eig = SymmetricEigen::new(&h1 + &h2);
        let k = (0..5)
            .max_by(|&x, &y| eig.eigenvectors.column(x).dotc(&phi).norm().total_cmp(&eig.eigenvectors.column(y).dotc(&phi).norm()))
            .expect("nonempty");
        HermitianPair::new(h1, h2, eig.eigenvectors.column(k).into_owned()).expect("eigenvector")
    }
}

/// Random Hermitian matrix with i.i.d. Gaussian-like entries, scaled to spectral norm `scale`.
pub fn random_hermitian(rng: &mut impl Rng, d: usize, scale: f64) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = Complex64::from(rng.gen_range(-1.0..1.0));
        for j in i + 1..d {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let nrm = Propagator::new(&m).norm();
    m * Complex64::from(scale / nrm)
}

/// Random pair whose state is a uniformly chosen eigenvector of the sum.
pub fn random_pair(rng: &mut impl Rng, d: usize, scale: f64) -> HermitianPair {
    let h1 = random_hermitian(rng, d, scale);
    let h2 = random_hermitian(rng, d, scale);
    let index = rng.gen_range(0..d);
    HermitianPair::from_eigenvector(h1, h2, index).expect("random pair is valid")
}

/// Summary of a seeded validation battery.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatteryReport {
    pub seed: u64,
    pub instances: usize,
    pub checks: usize,
    pub violations: usize,
    /// Largest measured/bound ratio over all checks with a nonzero bound.
    pub worst_ratio: f64,
}

/// Validates `count` random `d`-dimensional pairs against the bound of every
/// formula at every `N`. Instance `i` draws from its own ChaCha stream, so the
/// result does not depend on scheduling.
pub fn validation_battery(
    seed: u64,
    count: usize,
    d: usize,
    formulas: &[ProductFormula],
    ns: &[usize],
    t: f64,
) -> Result<BatteryReport, DenseError> {
    let bounds = formulas.iter().map(|pf| derive_bound(pf, true)).collect::<Result<Vec<_>, _>>()?;
    let per: Vec<Result<(usize, usize, f64), DenseError>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let pair = random_pair(&mut rng, d, 1.0);
            let (mut checks, mut bad, mut worst) = (0, 0, 0.0f64);
            for (pf, be) in formulas.iter().zip(&bounds) {
                for &n in ns {
                    let v = bound_validation(&pair, be, pf, t, n)?;
                    checks += 1;
                    bad += usize::from(!v.holds);
                    if v.bound > 0.0 {
                        worst = worst.max(v.measured / v.bound);
                    }
                }
            }
            Ok((checks, bad, worst))
        })
        .collect();
    let mut report = BatteryReport { seed, instances: count, checks: 0, violations: 0, worst_ratio: 0.0 };
    for r in per {
        let (c, b, w) = r?;
        report.checks += c;
        report.violations += b;
        report.worst_ratio = report.worst_ratio.max(w);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::evaluate_bound;
    use crate::formula::suzuki_times;

    #[test]
    fn propagator_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = random_hermitian(&mut rng, 6, 3.0);
        let p = Propagator::new(&h);
        let v = CVector::from_fn(6, |i, _| Complex64::new(i as f64, 1.0 - i as f64));
        for x in [-2.0, 0.1, 17.0] {
            assert!((p.apply(&v, x).norm() - v.norm()).abs() < 1e-12 * v.norm());
        }
        // against the Taylor series at small argument
        let x = 1e-4;
        let w = p.apply(&v, x);
        let taylor = &v - (&h * &v) * Complex64::new(0.0, x) - (&h * &h * &v) * Complex64::from(x * x / 2.0);
        assert!((w - taylor).norm() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        let h = real_matrix(&[&[0.0, 1.0], &[2.0, 0.0]]);
        let phi = CVector::from_element(2, Complex64::from(1.0));
        assert!(matches!(HermitianPair::new(h.clone(), h.adjoint(), phi.clone()), Err(DenseError::NotHermitian { .. })));
        let h = real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = real_matrix(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(HermitianPair::new(h.clone(), z, phi.clone()), Err(DenseError::NotEigenstate(_))));
        assert!(matches!(HermitianPair::new(h.clone(), h.clone(), CVector::zeros(2)), Err(DenseError::ZeroState)));
        let pair = HermitianPair::new(h.clone(), h, phi).unwrap();
        assert!(matches!(trotter_error(&pair, &ProductFormula::first_order(), 1.0, 0), Err(DenseError::ZeroSteps)));
    }

    #[test]
    fn commuting_generators_are_exact() {
        let h1 = real_matrix(&[&[1.0, 0.0, 0.0], &[0.0, -2.0, 0.0], &[0.0, 0.0, 0.5]]);
        let h2 = real_matrix(&[&[0.3, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 4.0]]);
        let pair = HermitianPair::from_eigenvector(h1, h2, 1).unwrap();
        for pf in [ProductFormula::first_order(), ProductFormula::strang(), suzuki_times(4).unwrap()] {
            for n in [1, 3, 10] {
                assert!(trotter_error(&pair, &pf, 2.0, n).unwrap() < 1e-13);
            }
        }
    }

    #[test]
    fn no_go_pair() {
        let pair = no_go_example();
        assert!(pair.energy().abs() < 1e-15);
        assert!(pair.commutator_action() < 1e-12);
        assert!(trotter_error(&pair, &ProductFormula::first_order(), 1.0, 4).unwrap() > 1e-3);
    }

    #[test]
    fn block_example_is_exact_when_decoupled() {
        let pair = block_example(0.0);
        let be = derive_bound(&ProductFormula::first_order(), true).unwrap();
        for n in [1, 2, 5, 40] {
            assert!(trotter_error(&pair, &ProductFormula::first_order(), 1.0, n).unwrap() < 1e-14);
            let norms = pair.word_norms(be.terms.keys().cloned(), 0.0);
            assert_eq!(evaluate_bound(&be, &norms, 1.0, n).unwrap(), 0.0);
        }
        let coupled = block_example(0.3);
        assert!(trotter_error(&coupled, &ProductFormula::first_order(), 1.0, 4).unwrap() > 1e-4);
    }

    #[test]
    fn validation_holds_on_small_battery() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let formulas = [ProductFormula::first_order(), ProductFormula::strang(), suzuki_times(4).unwrap()];
        let bounds: Vec<_> = formulas.iter().map(|pf| derive_bound(pf, true).unwrap()).collect();
        for _ in 0..20 {
            let pair = random_pair(&mut rng, 4, 1.0);
            for (pf, be) in formulas.iter().zip(&bounds) {
                for n in [1, 4, 16] {
                    let v = bound_validation(&pair, be, pf, 1.0, n).unwrap();
                    assert!(v.holds, "{v:?}");
                    assert!(v.shift.abs() <= pair.propagators().0.norm() + 1e-12);
                }
            }
        }
    }
}
