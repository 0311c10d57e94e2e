//! Product formulas and their integral actions.
//!
//! A cycle has `M` slots of equal length `t/N` in the integration variable;
//! slot `j` carries `τ_j` times `A` (odd `j`) or `B` (even `j`). Time inside a
//! slot is measured by `u ∈ [0, 1]` in units of `t/N`, and every action
//! `S_k` is homogeneous of degree `k` in `t/N`, so all coefficients below are
//! pure numbers.

use crate::field::Alg;
use crate::word::{Letter, OperatorWord};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("product formula needs at least one slot")]
    Empty,
    #[error("order must be positive")]
    ZeroOrder,
    #[error("{slots} slots cannot realise order {order}")]
    TooFewSlots { slots: usize, order: usize },
    #[error("switching times of {parity} slots sum to {sum}, expected 1")]
    NotNormalized { parity: &'static str, sum: String },
    #[error("Suzuki recursion needs an even order >= 2, got {0}")]
    OddOrder(usize),
    #[error("action order k={k} outside 1..={p}")]
    BadActionOrder { k: usize, p: usize },
    #[error("slot {j} outside 1..={m}")]
    BadSlot { j: usize, m: usize },
    #[error("formula fails the order conditions at k={0}")]
    OrderViolated(usize),
}

/// Switching times `τ_1..τ_M` with a declared order.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFormula {
    taus: Vec<Alg>,
    order: usize,
}

impl ProductFormula {
    pub fn new(taus: Vec<Alg>, order: usize) -> Result<Self, FormulaError> {
        if taus.is_empty() {
            return Err(FormulaError::Empty);
        }
        if order == 0 {
            return Err(FormulaError::ZeroOrder);
        }
        if taus.len() < order {
            return Err(FormulaError::TooFewSlots { slots: taus.len(), order });
        }
        for (parity, start) in [("odd", 0usize), ("even", 1)] {
            let sum = taus.iter().skip(start).step_by(2).fold(Alg::zero(), |acc, t| &acc + t);
            if sum != Alg::one() {
                return Err(FormulaError::NotNormalized { parity, sum: sum.to_string() });
            }
        }
        Ok(ProductFormula { taus, order })
    }

    /// `A B` cycle: `τ = [1, 1]`.
    pub fn first_order() -> Self {
        ProductFormula::new(vec![Alg::one(), Alg::one()], 1).expect("valid")
    }

    /// Symmetric `A B A` (Strang) cycle.
    pub fn strang() -> Self {
        suzuki_times(2).expect("valid")
    }

    /// Same cycle with the roles of the generators exchanged, by prepending
    /// an empty `A` slot: `B A B` becomes `[0, 1/2, 1, 1/2]`.
    pub fn swapped_generators(&self) -> Result<Self, FormulaError> {
        let mut taus = vec![Alg::zero()];
        taus.extend(self.taus.iter().cloned());
        ProductFormula::new(taus, self.order)
    }

    pub fn taus(&self) -> &[Alg] {
        &self.taus
    }

    pub fn taus_f64(&self) -> Vec<f64> {
        self.taus.iter().map(Alg::to_f64).collect()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn slots(&self) -> usize {
        self.taus.len()
    }

    /// Same switching times declared with another order (used to probe
    /// order conditions).
    pub fn with_order(&self, order: usize) -> Result<Self, FormulaError> {
        ProductFormula::new(self.taus.clone(), order)
    }

    /// Exponentials per cycle after fusing the boundary slots of adjacent
    /// cycles (both ends carry the same generator when `M` is odd).
    pub fn unitaries(&self, n: usize) -> usize {
        let nonzero = self.taus.iter().filter(|t| !t.is_zero()).count();
        let fused = {
            let first = self.taus.iter().position(|t| !t.is_zero());
            let last = self.taus.iter().rposition(|t| !t.is_zero());
            match (first, last) {
                (Some(f), Some(l)) if f != l && f % 2 == l % 2 => 1,
                _ => 0,
            }
        };
        n * nonzero - n.saturating_sub(1) * fused
    }
}

/// Suzuki's fractal construction.
///
/// `S_2(x) = [x/2, x, x/2]` and
/// `S_2k(x) = S_2k-2(s x) S_2k-2((1-2s) x) S_2k-2(s x)` with
/// `s = 1/(2 - 2^(1/(2k-1)))`; touching `A` slots are merged.
pub fn suzuki_times(p: usize) -> Result<ProductFormula, FormulaError> {
    if p < 2 || p % 2 == 1 {
        return Err(FormulaError::OddOrder(p));
    }
    let mut taus = vec![Alg::frac(1, 2), Alg::one(), Alg::frac(1, 2)];
    for k in 2..=p / 2 {
        let s = (&Alg::from_int(2) - &Alg::root2(2 * k - 1)).inv().expect("nonzero");
        let mid = &Alg::one() - &(&s * &Alg::from_int(2));
        let mut out: Vec<Alg> = Vec::with_capacity(3 * taus.len());
        for factor in [&s, &mid, &s] {
            let scaled: Vec<Alg> = taus.iter().map(|t| t * factor).collect();
            if let Some(last) = out.last_mut() {
                *last = &*last + &scaled[0];
                out.extend(scaled.into_iter().skip(1));
            } else {
                out = scaled;
            }
        }
        taus = out;
    }
    ProductFormula::new(taus, p)
}

pub(crate) type WordMap = BTreeMap<Vec<Letter>, Alg>;

fn factorial(m: usize) -> BigRational {
    BigRational::from_integer((1..=m as u64).fold(BigInt::from(1u32), |a, b| a * b))
}

/// Powers `τ^m / m!` for `m = 0..=p`.
fn taylor_weights(tau: &Alg, p: usize) -> Vec<Alg> {
    let mut out = Vec::with_capacity(p + 1);
    let mut pw = Alg::one();
    for m in 0..=p {
        out.push(pw.scale(&factorial(m).recip()));
        pw = &pw * tau;
    }
    out
}

fn prepend(x: Letter, m: usize, w: &[Letter]) -> Vec<Letter> {
    let mut v = vec![x; m];
    v.extend_from_slice(w);
    v
}

/// Iterates the slots, handing each closure call the actions `S_0..S_p` at
/// the start of the slot.
pub(crate) fn walk_slots(pf: &ProductFormula, p: usize, mut visit: impl FnMut(usize, Letter, &Alg, &[WordMap])) -> Vec<WordMap> {
    let mut full: Vec<WordMap> = (0..=p).map(|_| WordMap::new()).collect();
    full[0].insert(Vec::new(), Alg::one());
    for (idx, tau) in pf.taus.iter().enumerate() {
        let j = idx + 1;
        let x = Letter::for_slot(j);
        visit(j, x, tau, &full);
        if tau.is_zero() {
            continue;
        }
        let w = taylor_weights(tau, p);
        let mut next: Vec<WordMap> = Vec::with_capacity(p + 1);
        next.push(full[0].clone());
        for k in 1..=p {
            let mut d = WordMap::new();
            for m in 0..=k {
                for (word, c) in &full[k - m] {
                    let e = d.entry(prepend(x, m, word)).or_default();
                    *e += &(c * &w[m]);
                }
            }
            d.retain(|_, c| !c.is_zero());
            next.push(d);
        }
        full = next;
    }
    full
}

/// Action `S_k` inside slot `j` as a polynomial in the local time `u`.
pub(crate) fn slot_polynomials(x: Letter, tau: &Alg, k: usize, full: &[WordMap]) -> BTreeMap<Vec<Letter>, Vec<Alg>> {
    let w = taylor_weights(tau, k);
    let mut poly: BTreeMap<Vec<Letter>, Vec<Alg>> = BTreeMap::new();
    for m in 0..=k {
        if m > 0 && tau.is_zero() {
            break;
        }
        for (word, c) in &full[k - m] {
            let e = poly.entry(prepend(x, m, word)).or_insert_with(|| vec![Alg::zero(); k + 1]);
            e[m] += &(c * &w[m]);
        }
    }
    poly.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    poly
}

/// `S_k(s)` restricted to one slot.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralAction {
    pub slot: usize,
    pub k: usize,
    /// word → coefficients of `u^0..u^k`, `u` the time since the slot began
    /// in units of `t/N`.
    pub terms: BTreeMap<OperatorWord, Vec<Alg>>,
}

impl IntegralAction {
    /// Coefficients in the global variable `s = (j-1) + u` (units of `t/N`).
    pub fn global_terms(&self) -> BTreeMap<OperatorWord, Vec<Alg>> {
        let shift = Alg::from_int(-(self.slot as i64 - 1));
        self.terms.iter().map(|(w, c)| (w.clone(), taylor_shift(c, &shift))).collect()
    }

    /// Numeric coefficients at local time `u`.
    pub fn evaluate(&self, u: f64) -> BTreeMap<OperatorWord, f64> {
        self.terms.iter().map(|(w, c)| (w.clone(), c.iter().rev().fold(0.0, |acc, a| acc * u + a.to_f64()))).collect()
    }
}

/// `q(s) = p(s + a)`.
fn taylor_shift(p: &[Alg], a: &Alg) -> Vec<Alg> {
    let n = p.len();
    let mut out = vec![Alg::zero(); n];
    // Horner on polynomials: q = (...(p_n (s+a) + p_{n-1})(s+a) + ...)
    for c in p.iter().rev() {
        let mut next = vec![Alg::zero(); n];
        for i in 0..n {
            if out[i].is_zero() {
                continue;
            }
            if i + 1 < n {
                next[i + 1] += &out[i];
            }
            next[i] += &(&out[i] * a);
        }
        next[0] += c;
        out = next;
    }
    out
}

pub fn integral_action(pf: &ProductFormula, k: usize, j: usize) -> Result<IntegralAction, FormulaError> {
    if k == 0 || k > pf.order {
        return Err(FormulaError::BadActionOrder { k, p: pf.order });
    }
    if j == 0 || j > pf.slots() {
        return Err(FormulaError::BadSlot { j, m: pf.slots() });
    }
    let mut result = None;
    walk_slots(pf, k, |slot, x, tau, full| {
        if slot == j {
            result = Some(slot_polynomials(x, tau, k, full));
        }
    });
    let terms = result.expect("slot visited").into_iter().map(|(w, c)| (OperatorWord::new(w).expect("k >= 1"), c)).collect();
    Ok(IntegralAction { slot: j, k, terms })
}

/// `S_1..S_p` at the end of the cycle, keyed by word.
pub fn cycle_actions(pf: &ProductFormula) -> Vec<BTreeMap<OperatorWord, Alg>> {
    let full = walk_slots(pf, pf.order, |_, _, _, _| {});
    full.into_iter().skip(1).map(|m| m.into_iter().map(|(w, c)| (OperatorWord::new(w).expect("nonempty"), c)).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCheck {
    pub holds: bool,
    pub first_failure: Option<usize>,
}

/// Checks `S_k(T_M) = (A+B)^k / k!` word by word for `k = 1..=p`.
pub fn verify_order(pf: &ProductFormula) -> OrderCheck {
    for (idx, action) in cycle_actions(pf).iter().enumerate() {
        let k = idx + 1;
        let target = Alg::from_rational(factorial(k).recip());
        let all = OperatorWord::all_of_length(k);
        let ok = action.len() == all.len() && all.iter().all(|w| action.get(w) == Some(&target));
        if !ok {
            return OrderCheck { holds: false, first_failure: Some(k) };
        }
    }
    OrderCheck { holds: true, first_failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> OperatorWord {
        s.parse().unwrap()
    }

    #[test]
    fn suzuki_fourth_order_slots() {
        let pf = suzuki_times(4).unwrap();
        let tau = (&Alg::from_int(2) - &Alg::root2(3)).inv().unwrap();
        let half = Alg::frac(1, 2);
        let one = Alg::one();
        let expect = vec![
            &tau * &half,
            tau.clone(),
            &(&one - &tau) * &half,
            &one - &(&tau * &Alg::from_int(2)),
            &(&one - &tau) * &half,
            tau.clone(),
            &tau * &half,
        ];
        assert_eq!(pf.taus(), expect.as_slice());
        assert_eq!(suzuki_times(6).unwrap().slots(), 19);
        assert_eq!(suzuki_times(3), Err(FormulaError::OddOrder(3)));
    }

    #[test]
    fn normalization_is_enforced() {
        let bad = ProductFormula::new(vec![Alg::one(), Alg::frac(1, 2)], 1);
        assert!(matches!(bad, Err(FormulaError::NotNormalized { parity: "even", .. })));
        assert!(matches!(ProductFormula::new(vec![Alg::one(), Alg::one()], 3), Err(FormulaError::TooFewSlots { .. })));
    }

    #[test]
    fn first_order_action_in_second_slot() {
        let act = integral_action(&ProductFormula::first_order(), 1, 2).unwrap();
        // local: u B + A ; global: (s - 1) B + A
        assert_eq!(act.terms[&w("b")], vec![Alg::zero(), Alg::one()]);
        assert_eq!(act.terms[&w("a")], vec![Alg::one(), Alg::zero()]);
        let g = act.global_terms();
        assert_eq!(g[&w("b")], vec![Alg::from_int(-1), Alg::one()]);
    }

    #[test]
    fn strang_second_action_first_slot() {
        let act = integral_action(&ProductFormula::strang(), 2, 1).unwrap();
        assert_eq!(act.terms.len(), 1);
        assert_eq!(act.terms[&w("aa")], vec![Alg::zero(), Alg::zero(), Alg::frac(1, 8)]);
    }

    #[test]
    fn first_action_first_slot_is_linear() {
        let pf = suzuki_times(4).unwrap();
        let act = integral_action(&pf, 1, 1).unwrap();
        assert_eq!(act.terms[&w("a")], vec![Alg::zero(), pf.taus()[0].clone()]);
        assert!(integral_action(&pf, 0, 1).is_err());
        assert!(integral_action(&pf, 1, 8).is_err());
    }

    #[test]
    fn order_conditions() {
        assert!(verify_order(&ProductFormula::first_order()).holds);
        assert!(verify_order(&ProductFormula::strang()).holds);
        let bad = ProductFormula::strang().with_order(3).unwrap();
        assert_eq!(verify_order(&bad).first_failure, Some(3));
        assert!(verify_order(&suzuki_times(4).unwrap()).holds);
        let first_as_second = ProductFormula::first_order().with_order(2).unwrap();
        assert_eq!(verify_order(&first_as_second).first_failure, Some(2));
    }

    #[test]
    fn unitary_counts() {
        let (p1, p2, p4) = (ProductFormula::first_order(), ProductFormula::strang(), suzuki_times(4).unwrap());
        assert_eq!(p1.unitaries(3), 6);
        assert_eq!(p2.unitaries(1), 3);
        assert_eq!(p2.unitaries(2), 5);
        assert_eq!(p4.unitaries(2), 13);
    }
}
