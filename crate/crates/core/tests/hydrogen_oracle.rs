use trotter_core::hydrogen::{
    first_order_assembled, first_order_bound, kinetic_square_norm_bound, momentum_distribution, radial_wavefunction, tail_exponents,
    HydrogenLevel, ReducedTime, KINETIC_PRINTED_OVER_ASSEMBLED,
};
use trotter_core::quad::integrate;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// ∫_a^∞ Ξ(u) du, mapped to a finite interval.
fn momentum_tail(level: &HydrogenLevel, a: f64) -> f64 {
    integrate(|v| momentum_distribution(level, a / v) * a / (v * v), 0.0, 1.0, 1e-300, 1e-11)
}

#[test]
fn kinetic_and_potential_tails_stay_under_caps() {
    for n in 1..=4 {
        for l in 0..n.min(4) {
            let level = HydrogenLevel::nl(n, l).unwrap();
            let te = tail_exponents(&level);
            for lambda in log_grid(1e-3, 1e4, 50) {
                // kinetic energy u²/2 exceeds λ for u > √(2λ)
                let kin = momentum_tail(&level, (2.0 * lambda).sqrt());
                let cap = (te.kinetic.lambda0 / lambda).powf(2.0 * te.kinetic.delta);
                assert!(kin <= cap * (1.0 + 1e-9), "{level} kinetic at λ={lambda}: {kin} > {cap}");
                // |V| = 1/u exceeds λ for u < 1/λ
                let pot = integrate(|u| u * u * radial_wavefunction(&level, u).powi(2), 0.0, 1.0 / lambda, 1e-300, 1e-11);
                let cap = (te.potential.lambda0 / lambda).powf(2.0 * te.potential.delta);
                assert!(pot <= cap * (1.0 + 1e-9), "{level} potential at λ={lambda}: {pot} > {cap}");
            }
        }
    }
}

#[test]
fn excited_bound_is_generic_bound_with_reduced_kinetic_factor() {
    let t = ReducedTime::new(1.0).unwrap();
    for n in 3..=7 {
        for l in 2..n {
            let level = HydrogenLevel::nl(n, l).unwrap();
            let kin = kinetic_square_norm_bound(&level).finite().unwrap();
            for steps in (2..=1000).step_by(37) {
                let assembled = first_order_assembled(&level, t, steps, 0.0).unwrap().value;
                let kinetic_part = kin / (2.0 * steps as f64);
                let expected = assembled - (1.0 - KINETIC_PRINTED_OVER_ASSEMBLED) * kinetic_part;
                let printed = first_order_bound(&level, t, steps);
                assert!((printed - expected).abs() <= 1e-10 * printed, "{level} N={steps}: {printed} vs {expected}");
            }
        }
    }
}

#[test]
fn fractional_term_exponent_is_delta1_minus_one() {
    let t = ReducedTime::new(1.0).unwrap();
    for (n, l) in [(1, 0), (3, 0), (2, 1), (4, 1)] {
        let level = HydrogenLevel::nl(n, l).unwrap();
        let want = l as f64 / 2.0 + 0.25;
        // local slope of the bound at very large N
        let (a, b) = (1e14, 2e14);
        let slope = (first_order_bound(&level, t, b as usize) / first_order_bound(&level, t, a as usize)).ln() / 2f64.ln();
        assert!((slope + want).abs() < 1e-3, "{level}: slope {slope}");
        let asm = first_order_assembled(&level, t, 10, 0.0).unwrap();
        assert_eq!(asm.exponent, want);
    }
}
