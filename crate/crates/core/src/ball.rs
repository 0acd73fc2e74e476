//! Arbitrary-precision dyadic numbers and midpoint-radius balls.
//!
//! A [`Dyadic`] is `man * 2^exp` with a big-integer mantissa. A [`Ball`]
//! pairs a dyadic midpoint with a dyadic radius; every operation returns a
//! ball containing all results of the operation applied to members of the
//! inputs. Radii are kept to a short mantissa and rounded upward.

use crate::interval::Interval;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

const RAD_BITS: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn new(man: BigInt, exp: i64) -> Self {
        Dyadic { man, exp }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { man: n.into(), exp: 0 }
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: e }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Dyadic { man: BigInt::from(m) * sign, exp: e }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Upper bound on log2|x|, as the position just past the top bit.
    pub fn mag_exp(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        match self.exp.cmp(&o.exp) {
            Ordering::Equal => Dyadic { man: &self.man + &o.man, exp: self.exp },
            Ordering::Less => {
                let s = (o.exp - self.exp) as u64;
                Dyadic { man: &self.man + (&o.man << s), exp: self.exp }
            }
            Ordering::Greater => {
                let s = (self.exp - o.exp) as u64;
                Dyadic { man: (&self.man << s) + &o.man, exp: o.exp }
            }
        }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { man: &self.man * &o.man, exp: self.exp + o.exp }
    }

    /// Rounds to at most `prec` mantissa bits in the given direction.
    pub fn round(&self, prec: u64, mode: Round) -> Dyadic {
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        let man = match mode {
            Round::Down => &self.man >> shift,
            Round::Up => -((-&self.man) >> shift),
            Round::Nearest => (&self.man + (BigInt::one() << (shift - 1))) >> shift,
        };
        Dyadic { man, exp: self.exp + shift as i64 }
    }

    /// Quotient rounded in the given direction with about `prec` bits.
    pub fn div(&self, o: &Dyadic, prec: u64, mode: Round) -> Dyadic {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let neg = self.is_negative() != o.is_negative();
        let a = self.man.abs();
        let b = o.man.abs();
        let s = (prec as i64 + b.bits() as i64 - a.bits() as i64 + 2).max(0) as u64;
        let num = a << s;
        let (mut q, r) = num.div_rem(&b);
        let inexact = !r.is_zero();
        let mag_up = match mode {
            Round::Up => !neg,
            Round::Down => neg,
            Round::Nearest => (&r << 1u32) >= b,
        };
        if inexact && mag_up {
            q += 1;
        }
        let q = if neg { -q } else { q };
        Dyadic { man: q, exp: self.exp - o.exp - s as i64 }.round(prec, mode)
    }

    /// Square root of a non-negative dyadic, rounded.
    pub fn sqrt(&self, prec: u64, mode: Round) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut man = self.man.clone();
        let mut exp = self.exp;
        let want = 2 * prec as i64 + 4;
        let have = man.bits() as i64;
        let mut s = (want - have).max(0);
        if (exp - s) % 2 != 0 {
            s += 1;
        }
        man <<= s as u64;
        exp -= s;
        let r = man.sqrt();
        let exact = &r * &r == man;
        let r = if !exact && mode == Round::Up { r + 1 } else { r };
        Dyadic { man: r, exp: exp / 2 }.round(prec, mode)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            &self.man >> (-self.exp) as u64
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.floor() == self.ceil()
    }

    /// Nearest-ish f64 with directed rounding.
    pub fn to_f64(&self, mode: Round) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, mode);
        let m = r.man.to_f64().unwrap();
        let e = r.exp;
        let top = e + 53;
        if top > 1025 {
            let inf = if mode == Round::Nearest || (mode == Round::Up) != r.is_negative() {
                f64::INFINITY
            } else {
                f64::MAX
            };
            return if r.is_negative() { -inf } else { inf };
        }
        if e >= -1022 && e <= 970 {
            return m * 2f64.powi(e as i32);
        }
        let mut v = m;
        let mut k = e;
        while k > 0 {
            let step = k.min(1000);
            v *= 2f64.powi(step as i32);
            k -= step;
        }
        while k < 0 {
            let step = (-k).min(1000);
            v /= 2f64.powi(step as i32);
            k += step;
        }
        match mode {
            Round::Down => v.next_down(),
            Round::Up => v.next_up(),
            Round::Nearest => v,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Interval enclosing ln(x) for positive x, valid far beyond f64 range.
    pub fn ln_interval(&self) -> Interval {
        assert!(!self.is_negative() && !self.is_zero(), "ln of non-positive dyadic");
        let lo_r = self.round(53, Round::Down);
        let hi_r = self.round(53, Round::Up);
        let part = |d: &Dyadic, lower: bool| {
            let m = d.man.to_f64().unwrap();
            let l = Interval::point(m).ln() + Interval::ln2().scale(d.exp as f64);
            if lower {
                l.lo
            } else {
                l.hi
            }
        };
        Interval::new(part(&lo_r, true), part(&hi_r, false))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.sub(o).sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64(Round::Nearest))
    }
}

fn rad_up(d: Dyadic) -> Dyadic {
    d.round(RAD_BITS, Round::Up)
}

/// Real ball `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub mid: Dyadic,
    pub rad: Dyadic,
}

impl Ball {
    pub fn exact(mid: Dyadic) -> Self {
        Ball { mid, rad: Dyadic::zero() }
    }

    pub fn zero() -> Self {
        Ball::exact(Dyadic::zero())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Ball::exact(Dyadic::from_int(n))
    }

    pub fn with_rad(mid: Dyadic, rad: Dyadic) -> Self {
        Ball { mid, rad: rad_up(rad.abs()) }
    }

    pub fn from_rational(q: &BigRational, prec: u64) -> Self {
        if q.is_zero() {
            return Ball::zero();
        }
        let n = Dyadic::from_int(q.numer().clone());
        let den = q.denom();
        if den.is_one() {
            return Ball::exact(n);
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz).is_one() {
            return Ball::exact(n.mul_pow2(-(tz as i64)));
        }
        let d = Dyadic::from_int(den.clone());
        let m = n.div(&d, prec, Round::Nearest);
        let ulp = Dyadic::pow2(m.exponent());
        Ball::with_rad(m, ulp)
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// Upper bound on |x| over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound on |x| over the ball, zero when the ball meets 0.
    pub fn abs_lower(&self) -> Dyadic {
        let d = self.mid.abs().sub(&self.rad);
        if d.is_negative() {
            Dyadic::zero()
        } else {
            d
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn contains_int(&self, n: &BigInt) -> bool {
        self.mid.sub(&Dyadic::from_int(n.clone())).abs() <= self.rad
    }

    pub fn to_interval(&self) -> Interval {
        Interval::new(self.lower().to_f64(Round::Down), self.upper().to_f64(Round::Up))
    }

    fn finish(exact: Dyadic, rad: Dyadic, prec: u64) -> Ball {
        let mid = exact.round(prec, Round::Nearest);
        let err = exact.sub(&mid).abs();
        Ball { mid, rad: rad_up(rad.add(&err)) }
    }

    pub fn add(&self, o: &Ball, prec: u64) -> Ball {
        Ball::finish(self.mid.add(&o.mid), self.rad.add(&o.rad), prec)
    }

    pub fn sub(&self, o: &Ball, prec: u64) -> Ball {
        Ball::finish(self.mid.sub(&o.mid), self.rad.add(&o.rad), prec)
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    pub fn mul(&self, o: &Ball, prec: u64) -> Ball {
        let r = self
            .mid
            .abs()
            .mul(&o.rad)
            .add(&o.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&o.rad));
        Ball::finish(self.mid.mul(&o.mid), rad_up(r), prec)
    }

    pub fn inv(&self, prec: u64) -> Option<Ball> {
        let m = self.mid.abs();
        if m <= self.rad {
            return None;
        }
        let q = Dyadic::from_int(1).div(&self.mid, prec, Round::Nearest);
        let ulp = Dyadic::pow2(q.exponent() + 1);
        let gap = m.sub(&self.rad);
        let den = m.mul(&gap).round(RAD_BITS, Round::Down);
        let prop = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            self.rad.div(&den, RAD_BITS, Round::Up)
        };
        Some(Ball { mid: q, rad: rad_up(prop.add(&ulp)) })
    }

    pub fn div(&self, o: &Ball, prec: u64) -> Option<Ball> {
        o.inv(prec).map(|i| self.mul(&i, prec))
    }

    pub fn pow(&self, mut n: u64, prec: u64) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::from_int(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    /// Ball square of a value, non-negative lower end.
    pub fn sqr(&self, prec: u64) -> Ball {
        let lo = self.abs_lower();
        let hi = self.abs_upper();
        let l = lo.mul(&lo);
        let h = hi.mul(&hi);
        let mid = l.add(&h).mul_pow2(-1);
        let rad = h.sub(&l).mul_pow2(-1);
        Ball::finish(mid, rad, prec)
    }

    /// Floor of the ball if it is the same for every member.
    pub fn floor_if_decided(&self) -> Option<BigInt> {
        let lo = self.lower().floor();
        if lo == self.upper().floor() {
            Some(lo)
        } else {
            None
        }
    }
}

/// Complex ball as a rectangle of two real balls.
#[derive(Clone, Debug, PartialEq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn real(re: Ball) -> Self {
        CBall { re, im: Ball::zero() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        CBall::real(Ball::from_int(n))
    }

    pub fn exact(re: Dyadic, im: Dyadic) -> Self {
        CBall { re: Ball::exact(re), im: Ball::exact(im) }
    }

    pub fn add(&self, o: &CBall, prec: u64) -> CBall {
        CBall { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &CBall, prec: u64) -> CBall {
        CBall { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CBall, prec: u64) -> CBall {
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        CBall { re, im }
    }

    pub fn scale(&self, k: &Ball, prec: u64) -> CBall {
        CBall { re: self.re.mul(k, prec), im: self.im.mul(k, prec) }
    }

    pub fn norm_sqr(&self, prec: u64) -> Ball {
        self.re.sqr(prec).add(&self.im.sqr(prec), prec)
    }

    pub fn inv(&self, prec: u64) -> Option<CBall> {
        let n = self.norm_sqr(prec + 16).inv(prec + 16)?;
        Some(CBall { re: self.re.mul(&n, prec), im: self.im.neg().mul(&n, prec) })
    }

    pub fn div(&self, o: &CBall, prec: u64) -> Option<CBall> {
        o.inv(prec + 8).map(|i| self.mul(&i, prec))
    }

    pub fn pow(&self, mut n: u64, prec: u64) -> CBall {
        let mut base = self.clone();
        let mut acc = CBall::from_int(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Upper bound on the modulus over the rectangle.
    pub fn abs_upper(&self) -> Dyadic {
        let a = self.re.abs_upper();
        let b = self.im.abs_upper();
        a.mul(&a).add(&b.mul(&b)).sqrt(64, Round::Up)
    }

    /// Lower bound on the modulus over the rectangle.
    pub fn abs_lower(&self) -> Dyadic {
        let a = self.re.abs_lower();
        let b = self.im.abs_lower();
        a.mul(&a).add(&b.mul(&b)).sqrt(64, Round::Down)
    }

    /// Enclosure of ln|z|, requires the rectangle to avoid 0.
    pub fn ln_abs(&self) -> Option<Interval> {
        let lo = self.abs_lower();
        if lo.is_zero() {
            return None;
        }
        let hi = self.abs_upper();
        Some(Interval::new(lo.ln_interval().lo, hi.ln_interval().hi))
    }

    /// Largest radius over both parts, as a dyadic.
    pub fn max_rad(&self) -> Dyadic {
        self.re.rad.clone().max(self.im.rad.clone())
    }
}

/// Lightweight complex number with rounded dyadic parts, used for iteration
/// where no error tracking is needed.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl Cx {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        Cx { re, im }
    }

    pub fn zero() -> Self {
        Cx { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Cx { re: Dyadic::from_f64(re), im: Dyadic::from_f64(im) }
    }

    pub fn add(&self, o: &Cx, prec: u64) -> Cx {
        Cx {
            re: self.re.add(&o.re).round(prec, Round::Nearest),
            im: self.im.add(&o.im).round(prec, Round::Nearest),
        }
    }

    pub fn sub(&self, o: &Cx, prec: u64) -> Cx {
        Cx {
            re: self.re.sub(&o.re).round(prec, Round::Nearest),
            im: self.im.sub(&o.im).round(prec, Round::Nearest),
        }
    }

    pub fn mul(&self, o: &Cx, prec: u64) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)).round(prec, Round::Nearest),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)).round(prec, Round::Nearest),
        }
    }

    pub fn norm_sqr(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div(&self, o: &Cx, prec: u64) -> Option<Cx> {
        let n = o.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(Cx { re: re.div(&n, prec, Round::Nearest), im: im.div(&n, prec, Round::Nearest) })
    }

    /// Approximate modulus as f64, with huge values saturating.
    pub fn abs_f64(&self) -> f64 {
        self.norm_sqr().sqrt(60, Round::Nearest).to_f64(Round::Nearest)
    }

    pub fn to_cball(&self) -> CBall {
        CBall::exact(self.re.clone(), self.im.clone())
    }
}

/// log2 of |x| as f64, tolerant of magnitudes beyond f64 range.
pub fn log2_abs(d: &Dyadic) -> f64 {
    if d.is_zero() {
        return f64::NEG_INFINITY;
    }
    let r = d.round(53, Round::Nearest);
    r.mantissa().abs().to_f64().unwrap().log2() + r.exponent() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x)
    }

    #[test]
    fn rounding_directions() {
        let x = Dyadic::new(BigInt::from(0b1011_0111), 0);
        assert_eq!(x.round(4, Round::Down), Dyadic::new(BigInt::from(0b1011), 4));
        assert_eq!(x.round(4, Round::Up), Dyadic::new(BigInt::from(0b1100), 4));
        let y = x.neg();
        assert_eq!(y.round(4, Round::Down), Dyadic::new(BigInt::from(-0b1100), 4));
        assert_eq!(y.round(4, Round::Up), Dyadic::new(BigInt::from(-0b1011), 4));
    }

    #[test]
    fn division_brackets_quotient() {
        let one = Dyadic::from_int(1);
        let three = Dyadic::from_int(3);
        let lo = one.div(&three, 100, Round::Down);
        let hi = one.div(&three, 100, Round::Up);
        assert!(lo < hi);
        assert!(lo.mul(&three) < one && hi.mul(&three) > one);
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(80, Round::Down);
        let hi = two.sqrt(80, Round::Up);
        assert!(lo.mul(&lo) < two && hi.mul(&hi) > two);
        assert_eq!(Dyadic::from_int(9).sqrt(10, Round::Up).cmp(&Dyadic::from_int(3)), Ordering::Equal);
    }

    #[test]
    fn f64_roundtrip_and_directed() {
        for x in [1.5, -0.1, 1e300, 3e-310, 123456.789] {
            assert_eq!(d(x).to_f64(Round::Nearest), x);
        }
        let third = Dyadic::from_int(1).div(&Dyadic::from_int(3), 200, Round::Nearest);
        assert!(third.to_f64(Round::Down) < third.to_f64(Round::Up));
    }

    #[test]
    fn ball_inverse_contains_truth() {
        let b = Ball::with_rad(d(3.0), d(0.01));
        let i = b.inv(64).unwrap();
        for x in [2.99, 3.0, 3.01] {
            let t = d(1.0).div(&d(x), 80, Round::Nearest);
            assert!(t.sub(&i.mid).abs() <= i.rad);
        }
        assert!(Ball::with_rad(d(0.1), d(0.2)).inv(64).is_none());
    }

    #[test]
    fn floor_decision() {
        assert_eq!(Ball::with_rad(d(7.59), d(0.1)).floor_if_decided(), Some(BigInt::from(7)));
        assert_eq!(Ball::with_rad(d(7.0), d(0.1)).floor_if_decided(), None);
        assert_eq!(Ball::exact(d(7.0)).floor_if_decided(), Some(BigInt::from(7)));
        assert_eq!(Ball::with_rad(d(-0.5), d(0.1)).floor_if_decided(), Some(BigInt::from(-1)));
    }

    #[test]
    fn rational_ball_contains_value() {
        let q = BigRational::new(BigInt::from(3), BigInt::from(7));
        let b = Ball::from_rational(&q, 100);
        let diff = b.mid.to_rational() - &q;
        let rad = b.rad.to_rational();
        assert!(diff.abs() <= rad);
    }

    #[test]
    fn ln_interval_of_huge_dyadic() {
        let x = Dyadic::new(BigInt::from(5), 5000);
        let l = x.ln_interval();
        let want = 5f64.ln() + 5000.0 * std::f64::consts::LN_2;
        assert!(l.contains(want));
    }
}
