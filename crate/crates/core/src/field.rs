//! Exact arithmetic in the real radical fields `Q(2^(1/d))`.
//!
//! An element is a rational vector over the power basis `1, θ, …, θ^(d-1)`
//! with `θ = 2^(1/d)`. Since `x^d - 2` is Eisenstein at 2 it is irreducible,
//! so the representation is unique. Elements of different degrees are lifted
//! to the lcm of their degrees before combining; results are shrunk back to
//! the smallest subfield that contains them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alg {
    deg: usize,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Alg {
    pub fn zero() -> Self {
        Alg { deg: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    /// `n / d`; panics on `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Alg { deg: 1, coeffs: vec![q] }
    }

    /// `2^(k/d)` for `0 <= k`, reduced into the power basis.
    pub fn pow2_frac(k: usize, d: usize) -> Self {
        assert!(d >= 1, "degree must be positive");
        let mut coeffs = vec![BigRational::zero(); d];
        let whole = k / d;
        coeffs[k % d] = BigRational::from_integer(BigInt::one() << whole);
        Alg { deg: d, coeffs }.normalized()
    }

    /// `2^(1/d)`.
    pub fn root2(d: usize) -> Self {
        Self::pow2_frac(1, d)
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    /// Coefficient of `2^(i/deg)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.deg == 1).then(|| self.coeffs[0].clone())
    }

    fn lift(&self, to: usize) -> Vec<BigRational> {
        debug_assert_eq!(to % self.deg, 0);
        let step = to / self.deg;
        let mut out = vec![BigRational::zero(); to];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * step] = c.clone();
        }
        out
    }

    fn normalized(mut self) -> Self {
        let mut g = self.deg;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&i);
            }
        }
        if g == self.deg {
            // only the constant term (or nothing) survives
            let c0 = std::mem::take(&mut self.coeffs[0]);
            return Alg { deg: 1, coeffs: vec![c0] };
        }
        if g > 1 {
            let coeffs = self.coeffs.into_iter().step_by(g).collect();
            self = Alg { deg: self.deg / g, coeffs };
        }
        self
    }

    fn combine(&self, other: &Self) -> (usize, Vec<BigRational>, Vec<BigRational>) {
        let l = self.deg.lcm(&other.deg);
        (l, self.lift(l), other.lift(l))
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Alg::zero();
        }
        Alg { deg: self.deg, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Alg::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    ///
    /// Solves `self * x = 1` as a linear system over `Q` in the power basis.
    #[allow(clippy::needless_range_loop)] // Gauss-Jordan on a small dense matrix
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.deg;
        if d == 1 {
            return Some(Alg::from_rational(self.coeffs[0].recip()));
        }
        // column j holds the coordinates of self * θ^j
        let mut m = vec![vec![BigRational::zero(); d + 1]; d];
        for j in 0..d {
            for (i, c) in self.coeffs.iter().enumerate() {
                let (idx, wrap) = ((i + j) % d, (i + j) >= d);
                let v = if wrap { c * rat(2, 1) } else { c.clone() };
                m[idx][j] = &m[idx][j] + v;
            }
        }
        m[0][d] = BigRational::one();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=d {
                        let v = &m[col][k] * &f;
                        m[r][k] = &m[r][k] - v;
                    }
                }
            }
        }
        let coeffs = m.into_iter().map(|row| row[d].clone()).collect();
        Some(Alg { deg: d, coeffs }.normalized())
    }

    /// Interval enclosure of the value using θ truncated to `digits` decimals.
    fn enclosure(&self, digits: u32) -> (BigRational, BigRational) {
        if self.deg == 1 {
            return (self.coeffs[0].clone(), self.coeffs[0].clone());
        }
        let scale = BigInt::from(10u32).pow(digits);
        let big = BigInt::from(2u32) * scale.pow(self.deg as u32);
        let lo_int = big.nth_root(self.deg as u32);
        let lo = BigRational::new(lo_int.clone(), scale.clone());
        let hi = BigRational::new(lo_int + 1u32, scale);
        let (mut plo, mut phi) = (BigRational::one(), BigRational::one());
        let (mut slo, mut shi) = (BigRational::zero(), BigRational::zero());
        for c in &self.coeffs {
            if c.is_positive() {
                slo += c * &plo;
                shi += c * &phi;
            } else if c.is_negative() {
                slo += c * &phi;
                shi += c * &plo;
            }
            plo = &plo * &lo;
            phi = &phi * &hi;
        }
        (slo, shi)
    }

    /// Exact sign, resolved by refining a rational enclosure.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let mut digits = 40;
        loop {
            let (lo, hi) = self.enclosure(digits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            digits *= 2;
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(40);
        let mid = (lo + hi) / rat(2, 1);
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

impl Default for Alg {
    fn default() -> Self {
        Alg::zero()
    }
}

impl PartialOrd for Alg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Alg {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl From<i64> for Alg {
    fn from(n: i64) -> Self {
        Alg::from_int(n)
    }
}

impl From<BigRational> for Alg {
    fn from(q: BigRational) -> Self {
        Alg::from_rational(q)
    }
}

impl<'a> Add<&'a Alg> for &'a Alg {
    type Output = Alg;
    fn add(self, rhs: &Alg) -> Alg {
        let (deg, a, b) = self.combine(rhs);
        let coeffs = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        Alg { deg, coeffs }.normalized()
    }
}

impl<'a> Sub<&'a Alg> for &'a Alg {
    type Output = Alg;
    fn sub(self, rhs: &Alg) -> Alg {
        let (deg, a, b) = self.combine(rhs);
        let coeffs = a.into_iter().zip(b).map(|(x, y)| x - y).collect();
        Alg { deg, coeffs }.normalized()
    }
}

impl<'a> Mul<&'a Alg> for &'a Alg {
    type Output = Alg;
    fn mul(self, rhs: &Alg) -> Alg {
        if self.deg == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.deg == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (deg, a, b) = self.combine(rhs);
        let two = rat(2, 1);
        let mut out = vec![BigRational::zero(); deg];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let p = x * y;
                if i + j >= deg {
                    out[i + j - deg] += p * &two;
                } else {
                    out[i + j] += p;
                }
            }
        }
        Alg { deg, coeffs: out }.normalized()
    }
}

impl<'a> Div<&'a Alg> for &'a Alg {
    type Output = Alg;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Alg) -> Alg {
        self * &rhs.inv().expect("division by zero in Alg")
    }
}

impl Neg for &Alg {
    type Output = Alg;
    fn neg(self) -> Alg {
        Alg { deg: self.deg, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Alg {
    type Output = Alg;
    fn neg(self) -> Alg {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Alg> for Alg {
            type Output = Alg;
            fn $m(self, rhs: Alg) -> Alg {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Alg> for Alg {
            type Output = Alg;
            fn $m(self, rhs: &Alg) -> Alg {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::ops::AddAssign<&Alg> for Alg {
    fn add_assign(&mut self, rhs: &Alg) {
        *self = &*self + rhs;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a rational such as `-3/4`, `2` or `0.125`.
impl std::str::FromStr for Alg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("not a rational number: {s:?}");
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            let den = num_traits::pow(BigInt::from(10u32), frac.len());
            return Ok(Alg::from_rational(BigRational::new(digits, den)));
        }
        let q: BigRational = s.parse().map_err(|_| bad())?;
        Ok(Alg::from_rational(q))
    }
}

impl fmt::Display for Alg {
    /// Renders e.g. `23/17280 + 19/17280*2^(1/3) + 17/17280*2^(2/3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = fmt_rational(&c.abs());
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                let g = i.gcd(&self.deg);
                let (num, den) = (i / g, self.deg / g);
                if mag == "1" {
                    write!(f, "2^({num}/{den})")?;
                } else {
                    write!(f, "{mag}*2^({num}/{den})")?;
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_cubes_to_two() {
        let c = Alg::root2(3);
        assert_eq!(c.pow(3), Alg::from_int(2));
        assert_eq!(c.degree(), 3);
    }

    #[test]
    fn mixed_radicals_lift_to_common_field() {
        let a = Alg::root2(3);
        let b = Alg::root2(5);
        let p = &a * &b;
        assert_eq!(p.degree(), 15);
        assert_eq!(p.pow(15), Alg::from_int(2 * 2 * 2 * 2 * 2 * 2 * 2 * 2));
        // 2^(1/3) lives in the degree 15 field and shrinks back
        let back = &(&a + &b) - &b;
        assert_eq!(back, a);
        assert_eq!(back.degree(), 3);
    }

    #[test]
    fn inverse_of_suzuki_denominator() {
        let den = &Alg::from_int(2) - &Alg::root2(3);
        let tau = den.inv().unwrap();
        assert_eq!(&tau * &den, Alg::one());
        assert!((tau.to_f64() - 1.0 / (2.0 - 2f64.powf(1.0 / 3.0))).abs() < 1e-14);
    }

    #[test]
    fn signs_of_near_cancellations() {
        // 2^(1/3) - 1259921/1000000 is positive but tiny
        let x = &Alg::root2(3) - &Alg::frac(1259921, 1000000);
        assert_eq!(x.signum(), 1);
        assert_eq!((-x.clone()).signum(), -1);
        assert_eq!(Alg::zero().signum(), 0);
    }

    #[test]
    fn display_is_readable() {
        let a = &Alg::frac(1, 2) - &Alg::pow2_frac(2, 3).scale(&rat(3, 4));
        assert_eq!(a.to_string(), "1/2 - 3/4*2^(2/3)");
        assert_eq!(Alg::pow2_frac(5, 15).to_string(), "2^(1/3)");
    }

    #[test]
    fn parses_rationals() {
        assert_eq!("1/2".parse::<Alg>().unwrap(), Alg::frac(1, 2));
        assert_eq!(" -3 ".parse::<Alg>().unwrap(), Alg::from_int(-3));
        assert_eq!("0.125".parse::<Alg>().unwrap(), Alg::frac(1, 8));
        assert_eq!("-0.5".parse::<Alg>().unwrap(), Alg::frac(-1, 2));
        for bad in ["1/0", "x", "1.", "1.2.3", ""] {
            assert!(bad.parse::<Alg>().is_err(), "{bad}");
        }
    }
}
