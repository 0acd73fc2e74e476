//! Closed f64 intervals with outward rounding.
//!
//! Arithmetic operations are correctly rounded by IEEE 754, so one ulp of
//! widening per endpoint suffices. `ln`, `exp` and `powf` come from libm,
//! which is within one ulp on the supported platforms; those results are
//! widened by two ulps.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Encloses a decimal-like constant that may not be representable.
    pub fn around(x: f64) -> Self {
        Interval { lo: down(x), hi: up(x) }
    }

    pub fn from_u128(n: u128) -> Self {
        let f = n as f64;
        if f as u128 == n {
            Interval::point(f)
        } else {
            Interval::around(f)
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        match n.to_f64() {
            Some(f) if f.is_finite() => {
                if BigInt::from(f as i128) == *n && f.abs() < 1.0e38 {
                    Interval::point(f)
                } else {
                    Interval::around(f)
                }
            }
            _ => {
                if n.is_negative() {
                    Interval::new(f64::NEG_INFINITY, -f64::MAX)
                } else {
                    Interval::new(f64::MAX, f64::INFINITY)
                }
            }
        }
    }

    pub fn ln2() -> Self {
        Interval::around(std::f64::consts::LN_2)
    }

    pub fn pi() -> Self {
        Interval::around(std::f64::consts::PI)
    }

    pub fn e() -> Self {
        Interval::around(std::f64::consts::E)
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval { lo: 0.0, hi: (-self.lo).max(self.hi) }
        }
    }

    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0.0, "ln of non-positive interval {self}");
        let lo = if self.lo == 1.0 { 0.0 } else { down(down(self.lo.ln())) };
        let hi = if self.hi == 1.0 {
            0.0
        } else if self.hi.is_infinite() {
            f64::INFINITY
        } else {
            up(up(self.hi.ln()))
        };
        Interval { lo, hi }
    }

    pub fn exp(&self) -> Interval {
        let lo = if self.lo == 0.0 { 1.0 } else { down(down(self.lo.exp())).max(0.0) };
        let hi = if self.hi == 0.0 { 1.0 } else { up(up(self.hi.exp())) };
        Interval { lo, hi }
    }

    pub fn sqrt(&self) -> Interval {
        assert!(self.lo >= 0.0);
        Interval { lo: down(self.lo.sqrt()).max(0.0), hi: up(self.hi.sqrt()) }
    }

    /// Non-negative base raised to a real interval exponent.
    pub fn powf(&self, e: &Interval) -> Interval {
        assert!(self.lo > 0.0);
        (*e * self.ln()).exp()
    }

    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::point(1.0);
        for _ in 0..k {
            acc = acc * *self;
        }
        acc
    }

    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo + o.lo), hi: up(self.hi + o.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo - o.hi), hi: up(self.hi - o.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

fn mul_end(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [
            mul_end(self.lo, o.lo),
            mul_end(self.lo, o.hi),
            mul_end(self.hi, o.lo),
            mul_end(self.hi, o.hi),
        ];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo), hi: up(hi) }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        assert!(!o.contains_zero(), "division by interval containing zero: {o}");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo), hi: up(hi) }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// Natural log of a positive big integer, enclosed.
pub fn ln_bigint(n: &BigInt) -> Interval {
    assert!(n.is_positive(), "ln of non-positive integer");
    let bits = n.bits();
    if bits <= 1000 {
        let x = Interval::from_bigint(n);
        return x.ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    let t = top.to_u64().expect("64-bit top");
    let lo = Interval::point(t as f64).ln().lo;
    let hi = Interval::from_u128(t as u128 + 1).ln().hi;
    Interval { lo, hi } + Interval::ln2().scale(shift as f64)
}

/// Natural log of |n| for a non-zero integer.
pub fn ln_abs_bigint(n: &BigInt) -> Interval {
    assert!(!n.is_zero());
    ln_bigint(&n.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_enclosure() {
        let a = Interval::point(0.1) + Interval::point(0.2);
        assert!(a.contains(0.30000000000000004));
        assert!(a.lo <= 0.3 && a.hi > 0.3);
        let l = Interval::point(6.0).ln();
        assert!(l.contains(6f64.ln()));
    }

    #[test]
    fn ln_of_large_integer() {
        let n = BigInt::from(3u32).pow(2000);
        let l = ln_bigint(&n);
        let want = 2000.0 * 3f64.ln();
        assert!(l.lo <= want && want <= l.hi, "{l} vs {want}");
        assert!(l.width() < 1e-9);
    }

    #[test]
    fn division_and_abs() {
        let q = Interval::new(1.0, 2.0) / Interval::new(-4.0, -2.0);
        assert!(q.lo <= -1.0 && q.hi >= -0.25);
        assert_eq!(Interval::new(-3.0, 1.0).abs().hi, 3.0);
    }
}
