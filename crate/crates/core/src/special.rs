//! Special functions used by the tail bounds, the hydrogen analytics and the
//! Bessel basis.

use num_complex::Complex64;

pub use statrs::function::beta::beta;
pub use statrs::function::gamma::{gamma, ln_gamma};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Cosine integral `Ci(x) = -∫_x^∞ cos t / t dt` for `x > 0`.
///
/// Power series up to `x = 4`; above that the auxiliary functions
/// `f(x) sin x - g(x) cos x` are evaluated through the continued fraction of
/// `E1(ix)`, which (unlike the divergent asymptotic series) converges to full
/// precision for every `x > 4`.
pub fn ci(x: f64) -> f64 {
    assert!(x > 0.0, "Ci needs x > 0");
    if x <= 4.0 {
        let x2 = x * x;
        let mut term = 1.0; // (-1)^k x^(2k) / (2k)!
        let mut sum = 0.0;
        for k in 1..60 {
            let kk = 2.0 * k as f64;
            term *= -x2 / ((kk - 1.0) * kk);
            let add = term / kk;
            sum += add;
            if add.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        EULER_GAMMA + x.ln() + sum
    } else {
        // modified Lentz for E1(ix) = e^{-ix} * (1/(1+ix-) 1^2/(3+ix-) 2^2/(5+ix-) ...)
        let tiny = 1e-300;
        let mut b = Complex64::new(1.0, x);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = b.inv();
        let mut h = d;
        for i in 2..10_000 {
            let a = -((i - 1) as f64).powi(2);
            b += Complex64::new(2.0, 0.0);
            d = (d * a + b).inv();
            c = b + c.inv() * a;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        let e1 = Complex64::new(x.cos(), -x.sin()) * h;
        -e1.re
    }
}

/// Spherical Bessel function `j_l(x)` for `x >= 0`.
pub fn sph_bessel(l: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    if l == 0 {
        return x.sin() / x;
    }
    if x <= (l as f64).max(1.0) {
        // ascending series; no cancellation for x <= max(l, 1)
        let mut pref = 1.0;
        for k in 0..=l {
            pref *= if k == 0 { 1.0 } else { x / (2 * k + 1) as f64 };
        }
        let y = -0.5 * x * x;
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..200 {
            term *= y / (k as f64 * (2 * l + 2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return pref * sum;
    }
    // upward recurrence is stable for x > l
    let (s, c) = x.sin_cos();
    let mut jm = s / x;
    let mut j = s / (x * x) - c / x;
    for k in 1..l {
        let next = (2 * k + 1) as f64 / x * j - jm;
        jm = j;
        j = next;
    }
    j
}

/// `d/dx j_l(x)`.
pub fn sph_bessel_deriv(l: usize, x: f64) -> f64 {
    if l == 0 {
        -sph_bessel(1, x)
    } else {
        sph_bessel(l - 1, x) - (l + 1) as f64 / x * sph_bessel(l, x)
    }
}

/// Failure to isolate a root inside a bracket.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("root search failed in bracket [{lo}, {hi}]")]
pub struct RootError {
    pub lo: f64,
    pub hi: f64,
}

/// Safeguarded Newton iteration on a sign-changing bracket.
pub fn bracketed_newton(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64, RootError> {
    let (a0, b0) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(RootError { lo, hi });
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let step = fx / df(x);
        let mut next = x - step;
        if !(next > lo && next < hi) || !step.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= tol * x.abs().max(1.0) || hi - lo <= tol * x.abs().max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Err(RootError { lo: a0, hi: b0 })
}

/// First `count` positive zeros of `j_l`.
pub fn sph_bessel_zeros(l: usize, count: usize) -> Result<Vec<f64>, RootError> {
    // consecutive zeros are at least π apart, so a half-unit scan cannot miss one
    let mut zeros = Vec::with_capacity(count);
    let h = 0.5;
    let mut a = (l as f64).max(0.5);
    let mut fa = sph_bessel(l, a);
    while zeros.len() < count {
        let b = a + h;
        let fb = sph_bessel(l, b);
        if fa.signum() != fb.signum() || fb == 0.0 {
            let z = bracketed_newton(|x| sph_bessel(l, x), |x| sph_bessel_deriv(l, x), a, b, 1e-15)?;
            zeros.push(z);
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

/// Generalized Laguerre polynomial `L_n^(α)(x)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Gegenbauer polynomial `C_n^(λ)(x)` by the three-term recurrence.
pub fn gegenbauer(n: usize, lambda: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * lambda * x;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * x * (kf + lambda - 1.0) * cur - (kf + 2.0 * lambda - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

/// `n!` as a float (exact up to 22!).
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
