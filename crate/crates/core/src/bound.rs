//! State-dependent error bounds derived from the integral actions.
//!
//! For an eigenstate shifted to zero energy, the `N`-cycle error obeys
//! `ξ ≤ N Σ_j ∫_slot ‖τ_j X_j S_p(s) φ‖ ds`. Inside each slot the action is a
//! polynomial in the local time; after optional use of `Aφ = -Bφ` on the
//! rightmost pair, the triangle inequality is applied once per slot and word:
//! the coefficient gained by word `w` from slot `j` is `|τ_j ∫_0^1 c_w(u) du|`.
//! All bounds carry the global factor `t^(p+1)/N^p`.

use crate::field::Alg;
use crate::formula::{slot_polynomials, verify_order, walk_slots, FormulaError, ProductFormula};
use crate::word::{Letter, OperatorWord};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("no norm supplied for word {0}")]
    MissingNorm(OperatorWord),
    #[error("invalid evaluation point: {0}")]
    BadArgument(&'static str),
}

/// Map from words of length `p+1` to exact positive coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundExpression {
    pub order: usize,
    pub terms: BTreeMap<OperatorWord, Alg>,
}

impl BoundExpression {
    pub fn time_power(&self) -> usize {
        self.order + 1
    }

    pub fn step_power(&self) -> usize {
        self.order
    }

    pub fn coefficient(&self, word: &str) -> Option<&Alg> {
        self.terms.get(&word.parse().ok()?)
    }

    pub fn floats(&self) -> BTreeMap<OperatorWord, f64> {
        self.terms.iter().map(|(w, c)| (w.clone(), c.to_f64())).collect()
    }

    /// Sum of all coefficients (the bound when every word norm is 1).
    pub fn total(&self) -> f64 {
        self.terms.values().map(Alg::to_f64).sum()
    }

    pub fn global_factor(&self) -> String {
        format!("t^{}/N^{}", self.time_power(), self.step_power())
    }

    /// Same bound with the generators exchanged term by term.
    pub fn swapped(&self) -> BoundExpression {
        BoundExpression { order: self.order, terms: self.terms.iter().map(|(w, c)| (w.swapped(), c.clone())).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(w, c)| json!({"word": w.to_string(), "coeff_exact": c.to_string(), "coeff_float": c.to_f64()}))
            .collect();
        json!({"order": self.order, "terms": terms, "global_factor": self.global_factor()})
    }
}

/// Σ coeff · norm(word) · t^(p+1) / N^p.
pub fn evaluate_bound(be: &BoundExpression, norms: &BTreeMap<OperatorWord, f64>, t: f64, n: usize) -> Result<f64, BoundError> {
    if !(t >= 0.0) {
        return Err(BoundError::BadArgument("t must be nonnegative"));
    }
    if n == 0 {
        return Err(BoundError::BadArgument("N must be at least 1"));
    }
    let mut sum = 0.0;
    for (w, c) in &be.terms {
        let v = norms.get(w).ok_or_else(|| BoundError::MissingNorm(w.clone()))?;
        sum += c.to_f64() * v;
    }
    Ok(sum * t.powi(be.time_power() as i32) / (n as f64).powi(be.step_power() as i32))
}

/// Word (as letters) to polynomial coefficients in `u`.
type Integrands = BTreeMap<Vec<Letter>, Vec<Alg>>;

/// Per-slot integrands after the optional rightmost rewrite, keyed by the
/// full word `X_j·w`. Coefficients are polynomials in `u` with `τ_j` folded in.
fn slot_integrands(pf: &ProductFormula, simplify: bool) -> Vec<(usize, Integrands)> {
    let p = pf.order();
    let mut out = Vec::new();
    walk_slots(pf, p, |j, x, tau, full| {
        if tau.is_zero() {
            return;
        }
        let mut merged: BTreeMap<Vec<Letter>, Vec<Alg>> = BTreeMap::new();
        for (word, coeffs) in slot_polynomials(x, tau, p, full) {
            let mut fw = Vec::with_capacity(p + 1);
            fw.push(x);
            fw.extend(word);
            let (fw, flip) = if simplify {
                let (w, f) = OperatorWord::new(fw).expect("nonempty").zero_eigenstate_form();
                (w.letters().to_vec(), f)
            } else {
                (fw, false)
            };
            let e = merged.entry(fw).or_insert_with(|| vec![Alg::zero(); p + 1]);
            for (m, c) in coeffs.iter().enumerate() {
                let v = c * tau;
                e[m] = if flip { &e[m] - &v } else { &e[m] + &v };
            }
        }
        merged.retain(|_, v| v.iter().any(|c| !c.is_zero()));
        out.push((j, merged));
    });
    out
}

fn integrate_unit(coeffs: &[Alg]) -> Alg {
    coeffs
        .iter()
        .enumerate()
        .fold(Alg::zero(), |acc, (m, c)| &acc + &c.scale(&BigRational::new(BigInt::from(1u32), BigInt::from(m as u64 + 1))))
}

/// The per-slot triangle-inequality bound with exact coefficients.
pub fn derive_bound(pf: &ProductFormula, simplify_zero_eigenstate: bool) -> Result<BoundExpression, BoundError> {
    let check = verify_order(pf);
    if let Some(k) = check.first_failure {
        return Err(FormulaError::OrderViolated(k).into());
    }
    let mut terms: BTreeMap<OperatorWord, Alg> = BTreeMap::new();
    for (_, integrands) in slot_integrands(pf, simplify_zero_eigenstate) {
        for (w, poly) in integrands {
            let c = integrate_unit(&poly).abs();
            if !c.is_zero() {
                let e = terms.entry(OperatorWord::new(w).expect("nonempty")).or_default();
                *e += &c;
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(BoundExpression { order: pf.order(), terms })
}

/// Slot/word pairs whose integrand changes sign inside the slot.
///
/// For these, `|∫c|` is smaller than `∫|c|`, so the per-slot coefficient of
/// [`derive_bound`] undercounts the triangle inequality. Empty for the
/// first, second and fourth order Suzuki formulas.
pub fn sign_indefinite_terms(pf: &ProductFormula, simplify_zero_eigenstate: bool) -> Vec<(usize, OperatorWord)> {
    let mut out = Vec::new();
    for (j, integrands) in slot_integrands(pf, simplify_zero_eigenstate) {
        for (w, poly) in integrands {
            let f: Vec<f64> = poly.iter().map(Alg::to_f64).collect();
            if !sign_changes(&f).is_empty() {
                out.push((j, OperatorWord::new(w).expect("nonempty")));
            }
        }
    }
    out
}

/// Floating-point bound using `|τ_j| ∫_0^1 |c_w(u)| du` per slot, which is a
/// valid triangle inequality even where an integrand changes sign.
pub fn derive_bound_integral_of_abs(
    pf: &ProductFormula,
    simplify_zero_eigenstate: bool,
) -> Result<BTreeMap<OperatorWord, f64>, BoundError> {
    if let Some(k) = verify_order(pf).first_failure {
        return Err(FormulaError::OrderViolated(k).into());
    }
    let mut terms: BTreeMap<OperatorWord, f64> = BTreeMap::new();
    for (_, integrands) in slot_integrands(pf, simplify_zero_eigenstate) {
        for (w, poly) in integrands {
            let f: Vec<f64> = poly.iter().map(Alg::to_f64).collect();
            let mut cuts = vec![0.0];
            cuts.extend(sign_changes(&f));
            cuts.push(1.0);
            let prim = |u: f64| f.iter().enumerate().rev().fold(0.0, |acc, (m, c)| acc * u + c / (m as f64 + 1.0)) * u;
            let v: f64 = cuts.windows(2).map(|ab| (prim(ab[1]) - prim(ab[0])).abs()).sum();
            if v > 0.0 {
                *terms.entry(OperatorWord::new(w).expect("nonempty")).or_default() += v;
            }
        }
    }
    Ok(terms)
}

fn poly_eval(f: &[f64], u: f64) -> f64 {
    f.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

/// Interior sign changes of a low-degree polynomial on (0, 1).
fn sign_changes(f: &[f64]) -> Vec<f64> {
    let scale: f64 = f.iter().map(|c| c.abs()).sum();
    let tol = 1e-13 * scale.max(f64::MIN_POSITIVE);
    const GRID: usize = 4096;
    let mut roots = Vec::new();
    let mut prev_u = 0.0;
    let mut prev = poly_eval(f, 0.0);
    for i in 1..=GRID {
        let u = i as f64 / GRID as f64;
        let v = poly_eval(f, u);
        if prev.abs() > tol && v.abs() > tol && prev.signum() != v.signum() {
            let (mut a, mut b, mut fa) = (prev_u, u, prev);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                let fm = poly_eval(f, mid);
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        if v.abs() > tol {
            prev = v;
            prev_u = u;
        }
    }
    roots
}

/// Operator-norm style bound `(τ_* t)^(p+1) / ((p+1)! N^p) · K_(p+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LooseBound {
    pub order: usize,
    pub tau_star: Alg,
    /// Words `X_(j_(p+1))···X_(j_1)` with nondecreasing slot indices; `K` is
    /// the largest of their norms.
    pub words: BTreeSet<OperatorWord>,
}

impl LooseBound {
    pub fn tau_star_f64(&self) -> f64 {
        self.tau_star.to_f64()
    }

    pub fn evaluate(&self, norms: &BTreeMap<OperatorWord, f64>, t: f64, n: usize) -> Result<f64, BoundError> {
        let mut k: f64 = 0.0;
        for w in &self.words {
            k = k.max(*norms.get(w).ok_or_else(|| BoundError::MissingNorm(w.clone()))?);
        }
        let q = self.order + 1;
        let fact: f64 = (1..=q).map(|i| i as f64).product();
        Ok((self.tau_star_f64() * t).powi(q as i32) / (fact * (n as f64).powi(self.order as i32)) * k)
    }
}

pub fn loose_bound(pf: &ProductFormula) -> Result<LooseBound, BoundError> {
    if let Some(k) = verify_order(pf).first_failure {
        return Err(FormulaError::OrderViolated(k).into());
    }
    let tau_star = pf.taus().iter().fold(Alg::zero(), |acc, t| &acc + &t.abs());
    let q = pf.order() + 1;
    let m = pf.slots();
    let words = OperatorWord::all_of_length(q)
        .into_iter()
        .filter(|w| {
            // greedy: earliest slot able to host each letter, read right to left
            let mut slot = 0usize;
            for &l in w.letters().iter().rev() {
                if slot == 0 || Letter::for_slot(slot) != l {
                    slot += 1;
                    if Letter::for_slot(slot) != l {
                        slot += 1;
                    }
                }
            }
            slot <= m
        })
        .collect();
    Ok(LooseBound { order: pf.order(), tau_star, words })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::suzuki_times;

    fn norms_one(be: &BoundExpression) -> BTreeMap<OperatorWord, f64> {
        be.terms.keys().map(|w| (w.clone(), 1.0)).collect()
    }

    #[test]
    fn first_order_bound() {
        let be = derive_bound(&ProductFormula::first_order(), true).unwrap();
        assert_eq!(be.terms.len(), 2);
        assert_eq!(be.coefficient("aa"), Some(&Alg::frac(1, 2)));
        assert_eq!(be.coefficient("bb"), Some(&Alg::frac(1, 2)));
        let v = evaluate_bound(&be, &norms_one(&be), 1.0, 2).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn strang_bound_exact() {
        let be = derive_bound(&ProductFormula::strang(), true).unwrap();
        let got: Vec<(String, Alg)> = be.terms.iter().map(|(w, c)| (w.to_string(), c.clone())).collect();
        assert_eq!(
            got,
            vec![("aaa".to_string(), Alg::frac(1, 24)), ("baa".to_string(), Alg::frac(1, 8)), ("bbb".to_string(), Alg::frac(1, 12)),]
        );
        let v = evaluate_bound(&be, &norms_one(&be), 1.0, 1).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn evaluation_errors() {
        let be = derive_bound(&ProductFormula::strang(), true).unwrap();
        let mut norms = norms_one(&be);
        norms.remove(&"baa".parse().unwrap());
        assert_eq!(evaluate_bound(&be, &norms, 1.0, 1), Err(BoundError::MissingNorm("baa".parse().unwrap())));
        let zeros = be.terms.keys().map(|w| (w.clone(), 0.0)).collect();
        assert_eq!(evaluate_bound(&be, &zeros, 1.0, 3).unwrap(), 0.0);
    }

    #[test]
    fn rejects_formula_failing_order() {
        let pf = ProductFormula::strang().with_order(3).unwrap();
        assert_eq!(derive_bound(&pf, true), Err(BoundError::Formula(FormulaError::OrderViolated(3))));
    }

    #[test]
    fn unsimplified_bound_has_more_words() {
        let pf = ProductFormula::strang();
        let raw = derive_bound(&pf, false).unwrap();
        let simp = derive_bound(&pf, true).unwrap();
        assert!(simp.terms.len() <= raw.terms.len());
    }

    #[test]
    fn loose_bound_tau_star() {
        assert_eq!(loose_bound(&ProductFormula::first_order()).unwrap().tau_star, Alg::from_int(2));
        assert_eq!(loose_bound(&ProductFormula::strang()).unwrap().tau_star, Alg::from_int(2));
        let lb = loose_bound(&suzuki_times(4).unwrap()).unwrap();
        assert!((lb.tau_star_f64() - 6.107243151757947).abs() < 1e-12);
        // first order: words of length 2 following slot order a then b
        let lb1 = loose_bound(&ProductFormula::first_order()).unwrap();
        let ws: Vec<String> = lb1.words.iter().map(|w| w.to_string()).collect();
        assert_eq!(ws, ["aa", "ba", "bb"]);
    }

    #[test]
    fn fourth_order_has_no_sign_indefinite_slots() {
        assert!(sign_indefinite_terms(&suzuki_times(4).unwrap(), true).is_empty());
        let exact = derive_bound(&suzuki_times(4).unwrap(), true).unwrap();
        let abs = derive_bound_integral_of_abs(&suzuki_times(4).unwrap(), true).unwrap();
        for (w, c) in &exact.terms {
            assert!((c.to_f64() - abs[w]).abs() < 1e-13 * c.to_f64().max(1.0));
        }
    }

    #[test]
    fn json_shape() {
        let be = derive_bound(&ProductFormula::strang(), true).unwrap();
        let v = be.to_json();
        assert_eq!(v["order"], 2);
        assert_eq!(v["global_factor"], "t^3/N^2");
        assert_eq!(v["terms"][1]["word"], "baa");
        assert_eq!(v["terms"][1]["coeff_exact"], "1/8");
        assert_eq!(v["terms"][1]["coeff_float"], 0.125);
    }
}
