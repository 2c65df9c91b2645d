//! Scalar backends.
//!
//! Two field backends share one trait: [`Q`] (exact big rationals) for the
//! identity suites and `f64` for grid work. [`Dual`] is a forward-mode
//! derivative carrier used by the analytic model geometries.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for the rounding-free backend.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    fn to_f64(&self) -> f64;

    /// Embeds an exact rational (rounded on float backends).
    fn from_q(x: &Q) -> Self;

    /// Square root. On the exact backend this only succeeds for perfect
    /// rational squares; `None` also signals a negative argument.
    fn sqrt(&self) -> Option<Self>;

    /// Exact backend: `== 0`. Float backend: `|x| <= tol`.
    fn is_negligible(&self, tol: f64) -> bool;

    fn abs(&self) -> Self;

    fn is_positive(&self) -> bool;
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }

    fn from_q(x: &Q) -> Self {
        x.clone()
    }

    fn to_f64(&self) -> f64 {
        // Large numerators and denominators overflow f64 individually, so
        // shift both down before dividing.
        let n = self.numer();
        let d = self.denom();
        match (n.to_f64(), d.to_f64()) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
            _ => {
                let shift = n.bits().max(d.bits()).saturating_sub(900);
                let a = (n >> shift).to_f64().unwrap_or(0.0);
                let b = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
                a / b
            }
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Q::new(rn, rd))
        } else {
            None
        }
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_q(x: &Q) -> Self {
        Scalar::to_f64(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(f64::sqrt(*self))
        }
    }

    fn is_negligible(&self, tol: f64) -> bool {
        f64::abs(*self) <= tol
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_positive(&self) -> bool {
        *self > 0.0
    }
}

/// Builds an exact rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Value plus one directional derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn new(v: f64, d: f64) -> Self {
        Dual { v, d }
    }

    pub fn constant(v: f64) -> Self {
        Dual { v, d: 0.0 }
    }

    pub fn sin(self) -> Self {
        Dual::new(self.v.sin(), self.v.cos() * self.d)
    }

    pub fn cos(self) -> Self {
        Dual::new(self.v.cos(), -self.v.sin() * self.d)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Dual::constant(0.0)
    }
    fn is_zero(&self) -> bool {
        self.v == 0.0 && self.d == 0.0
    }
}

impl One for Dual {
    fn one() -> Self {
        Dual::constant(1.0)
    }
}

impl Scalar for Dual {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        Dual::constant(n as f64)
    }

    fn from_q(x: &Q) -> Self {
        Dual::constant(Scalar::to_f64(x))
    }

    fn to_f64(&self) -> f64 {
        self.v
    }

    fn sqrt(&self) -> Option<Self> {
        if self.v < 0.0 {
            return None;
        }
        let s = self.v.sqrt();
        Some(Dual::new(s, if s > 0.0 { self.d / (2.0 * s) } else { 0.0 }))
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.v.abs() <= tol
    }

    fn abs(&self) -> Self {
        if self.v < 0.0 {
            -*self
        } else {
            *self
        }
    }

    fn is_positive(&self) -> bool {
        self.v > 0.0
    }
}

/// Converts a double to the exact backend (dyadic, no rounding).
pub fn q_from_f64(v: f64) -> Q {
    Q::from_float(v).unwrap_or_else(Q::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sqrt_only_on_squares() {
        assert_eq!(Scalar::sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(Scalar::sqrt(&q(2, 1)), None);
        assert_eq!(Scalar::sqrt(&q(-1, 1)), None);
    }

    #[test]
    fn cast_round_trips() {
        let x = q(-355, 113);
        let y: Q = Scalar::from_q(&x);
        assert_eq!(x, y);
        let f: f64 = Scalar::from_q(&x);
        assert!((f + 355.0 / 113.0).abs() < 1e-15);
        assert_eq!(q_from_f64(0.375), q(3, 8));
        assert_eq!(q_from_f64(-1.5), q(-3, 2));
    }

    #[test]
    fn dual_chain_rule() {
        let x = Dual::new(3.0, 1.0);
        let y = x * x / (x + Dual::constant(1.0));
        // d/dx x^2/(x+1) = (x^2 + 2x)/(x+1)^2 = 15/16 at x = 3
        assert!((y.d - 15.0 / 16.0).abs() < 1e-15);
        let s = Scalar::sqrt(&x).unwrap();
        assert!((s.d - 0.5 / 3f64.sqrt()).abs() < 1e-15);
        let t = (x * x).sin();
        assert!((t.d - 6.0 * 9f64.cos()).abs() < 1e-14);
        assert!((x.cos().d + 3f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Q::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399) * 4);
        assert!((Scalar::to_f64(&big) - 2.5).abs() < 1e-12);
    }
}
