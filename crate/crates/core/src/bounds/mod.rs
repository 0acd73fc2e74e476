//! Explicit lower bounds for linear forms in logarithms, the greatest prime
//! factor curves, and effective exponent certificates.

mod arch;
mod binary;
mod cert;
mod padic;

pub use arch::{effective_archimedean, effective_archimedean_with, effective_floorpower, effective_floorpower_with};
pub use binary::{effective_binary, effective_binary_with};
pub use cert::{CertConfig, EffectiveExponentCertificate, LedgerEntry, TheoremTag, CERT_FORMAT};
pub use padic::{effective_padic, effective_padic_with};

use crate::error::{domain, Result};
use crate::interval::Interval;
use crate::intpoly::valuation;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

fn iv(x: f64) -> Interval {
    Interval::point(x)
}

fn ln_iv(x: f64) -> Interval {
    Interval::point(x).ln()
}

fn abs_f64(b: &BigInt) -> Interval {
    Interval::from_bigint(&b.abs())
}

/// Archimedean bound data.
#[derive(Clone, Debug, PartialEq)]
pub struct MatveevInputs {
    pub d: u32,
    pub log_a: Vec<f64>,
    pub b: Vec<BigInt>,
    /// Must dominate `max(1, max_j |b_j| log A_j / log A_n)`.
    pub big_b: f64,
}

impl MatveevInputs {
    /// Inputs with `B` set to its smallest admissible value.
    pub fn new(d: u32, log_a: Vec<f64>, b: Vec<BigInt>) -> Self {
        let mut m = MatveevInputs { d, log_a, b, big_b: 1.0 };
        m.big_b = m.theorem_b().hi;
        m
    }

    pub fn n(&self) -> usize {
        self.log_a.len()
    }

    /// `max(1, max_j |b_j| log A_j / log A_n)`.
    pub fn theorem_b(&self) -> Interval {
        let last = iv(*self.log_a.last().unwrap_or(&1.0));
        let mut best = iv(1.0);
        let n = self.log_a.len();
        for (j, (la, b)) in self.log_a.iter().zip(&self.b).enumerate() {
            let term = if j + 1 == n { abs_f64(b) } else { abs_f64(b) * iv(*la) / last };
            best = best.max(&term);
        }
        best
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return domain("at least two logarithms are required");
        }
        if self.b.len() != n {
            return domain("one exponent per logarithm");
        }
        if self.d == 0 {
            return domain("field degree must be positive");
        }
        let floor = 0.16 / self.d as f64;
        if self.log_a.iter().any(|&x| !x.is_finite() || x < floor) {
            return domain(format!("log A_i must be at least 0.16/D = {floor}"));
        }
        if !(self.big_b >= 1.0) || self.big_b < self.theorem_b().lo {
            return domain("B is below its defining maximum");
        }
        Ok(())
    }
}

/// `4 30^(n+4) (n+1)^5.5 D^(n+2) log(eD) log A_1 ... log A_n`.
pub fn matveev_prefactor(d: u32, log_a: &[f64]) -> Interval {
    let n = log_a.len() as i32;
    let dd = iv(d as f64);
    let mut k = iv(4.0)
        * iv(30.0).powi((n + 4) as u32)
        * iv((n + 1) as f64).powf(&iv(5.5))
        * dd.powi((n + 2) as u32)
        * (Interval::e() * dd).ln();
    for &la in log_a {
        k = k * iv(la);
    }
    k
}

/// Lower bound for `log |alpha_1^b_1 ... alpha_n^b_n - 1|`, rounded down.
pub fn matveev_lower_bound(input: &MatveevInputs) -> Result<f64> {
    input.validate()?;
    let n = input.n() as f64;
    let k = matveev_prefactor(input.d, &input.log_a);
    let l = (Interval::e() * iv(n) * iv(input.big_b)).ln();
    Ok((-(k * l)).lo)
}

/// p-adic bound data; `yu_delta` is the free parameter of the theorem.
#[derive(Clone, Debug, PartialEq)]
pub struct YuInputs {
    pub p: u64,
    pub d: u32,
    pub log_a: Vec<f64>,
    pub b: Vec<BigInt>,
    pub big_b: f64,
    pub b_n: f64,
    pub yu_delta: f64,
}

impl YuInputs {
    pub fn n(&self) -> usize {
        self.log_a.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 1 || self.b.len() != n {
            return domain("one non-zero exponent per logarithm");
        }
        if self.d == 0 {
            return domain("field degree must be positive");
        }
        if !crate::sparts::is_prime_u64(self.p) {
            return domain(format!("{} is not prime", self.p));
        }
        if !(self.yu_delta > 0.0 && self.yu_delta <= 0.5) {
            return domain("yu_delta must lie in (0, 1/2]");
        }
        let d = self.d as f64;
        let floor = 1.0 / (16.0 * std::f64::consts::E.powi(2) * d * d);
        if self.log_a.iter().any(|&x| !x.is_finite() || x < floor) {
            return domain("log A_i below 1/(16 e^2 D^2)");
        }
        if self.b.iter().any(Zero::is_zero) {
            return domain("exponents must be non-zero");
        }
        let bmax = self.b.iter().map(|b| abs_f64(b).hi).fold(3.0, f64::max);
        if self.big_b < bmax {
            return domain("B must dominate every |b_i| and 3");
        }
        let last = abs_f64(self.b.last().unwrap()).lo;
        if !(self.big_b >= self.b_n && self.b_n >= last) {
            return domain("need B >= B_n >= |b_n|");
        }
        let vn = valuation(self.b.last().unwrap(), self.p);
        if self.b.iter().any(|b| valuation(b, self.p) < vn) {
            return domain("|b_n|_p must dominate every |b_j|_p");
        }
        Ok(())
    }
}

/// `c_0(n, D) = (2D)^(2n+1) log(2D) log^3(3D)`.
pub fn yu_c0(n: usize, d: u32) -> Interval {
    let dd = iv(d as f64);
    (iv(2.0) * dd).powi(2 * n as u32 + 1) * (iv(2.0) * dd).ln() * (iv(3.0) * dd).ln().powi(3)
}

/// `log c_1(n, D)` with `c_1(n, D) = 2 e^((n+1)(6n+5)) D^(3n) log(2D)`.
pub fn yu_ln_c1(n: usize, d: u32) -> Interval {
    let dd = iv(d as f64);
    let nf = n as f64;
    Interval::ln2()
        + iv((nf + 1.0) * (6.0 * nf + 5.0))
        + iv(3.0 * nf) * dd.ln()
        + (iv(2.0) * dd).ln().ln()
}

/// `(16 e D)^(2(n+1)) n^(3/2) log^2(2nD) D^n p^D / log p`.
pub fn yu_prefactor(p: u64, n: usize, d: u32) -> Interval {
    let dd = iv(d as f64);
    let nf = iv(n as f64);
    let pp = iv(p as f64);
    (iv(16.0) * Interval::e() * dd).powi(2 * (n as u32 + 1))
        * nf.powf(&iv(1.5))
        * (iv(2.0) * nf * dd).ln().powi(2)
        * dd.powi(n as u32)
        * pp.powi(d)
        / pp.ln()
}

/// Lower bound for `log |alpha_1^b_1 ... alpha_n^b_n - 1|_p`, rounded down.
pub fn yu_lower_bound(input: &YuInputs) -> Result<f64> {
    input.validate()?;
    let n = input.n();
    let pref = yu_prefactor(input.p, n, input.d);
    let mut prod = iv(1.0);
    let mut ln_head = iv(0.0);
    for (i, &la) in input.log_a.iter().enumerate() {
        prod = prod * iv(la);
        if i + 1 < n {
            ln_head = ln_head + ln_iv(la);
        }
    }
    let ln_t = ln_iv(input.b_n) - ln_iv(input.yu_delta)
        + yu_ln_c1(n, input.d)
        + iv(((n + 1) as u32 * input.d) as f64) * ln_iv(input.p as f64)
        + ln_head;
    let first = prod * ln_t;
    let second = iv(input.yu_delta) * iv(input.big_b) / (iv(input.b_n) * yu_c0(n, input.d));
    Ok((-(pref * first.max(&second))).lo)
}

fn curve_core(n: u64) -> Result<f64> {
    if n < 16 {
        return domain("the curve needs n >= 16");
    }
    let l1 = (n as f64).ln();
    let l2 = l1.ln();
    Ok(l1 * l2 / l2.ln())
}

/// `c log n loglog n / logloglog n`.
pub fn stewart_curve(n: u64, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return domain("c must be positive");
    }
    Ok(c * curve_core(n)?)
}

/// `(1 - eps) log n loglog n / logloglog n`.
pub fn gpf_threshold_curve(n: u64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain("epsilon must lie in (0, 1)");
    }
    Ok((1.0 - eps) * curve_core(n)?)
}

/// Largest `c` with `c <= x` of the form `m / 2^e`, `m` below `2^bits`.
pub(crate) fn dyadic_down(x: f64, bits: u32) -> num_rational::BigRational {
    assert!(x > 0.0 && x.is_finite());
    let e = bits as i32 - 1 - x.log2().floor() as i32;
    let scaled = x * 2f64.powi(e);
    let m = scaled.floor().to_u64().unwrap().max(1);
    let den = num_bigint::BigInt::from(1) << e.max(0) as usize;
    let num = if e >= 0 { BigInt::from(m) } else { BigInt::from(m) << (-e) as usize };
    num_rational::BigRational::new(num, den)
}

/// `floor(x) + 1` for an upper bound `x`, or 0 when `x < 0`.
pub(crate) fn index_above(x: f64) -> Result<num_bigint::BigUint> {
    use num_traits::FromPrimitive;
    if !x.is_finite() {
        return Err(crate::Error::Refused("threshold is not finite".into()));
    }
    if x < 0.0 {
        return Ok(num_bigint::BigUint::zero());
    }
    Ok(num_bigint::BigUint::from_f64(x.floor()).unwrap() + 1u32)
}

/// Smallest integer `n >= start` with `pred(n)`, for predicates that stay
/// true once they become true.
pub(crate) fn first_true(start: f64, pred: impl Fn(f64) -> bool) -> Result<f64> {
    let mut lo = start.max(1.0).ceil();
    if pred(lo) {
        return Ok(lo);
    }
    let mut hi = 2.0 * lo;
    while !pred(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(crate::Error::Refused("threshold search diverged".into()));
        }
    }
    while hi - lo > 1.0 && hi - lo > hi * 1e-15 {
        let mid = (0.5 * (lo + hi)).floor();
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `Res_y(g(y), x G'(y) - P(y))`, vanishing at `P(a) / G'(a)` for every root
/// `a` of `g`.
pub(crate) fn coefficient_annihilator(
    g: &crate::intpoly::IntPolynomial,
    big_g: &crate::intpoly::IntPolynomial,
    p: &crate::intpoly::IntPolynomial,
) -> Result<crate::intpoly::IntPolynomial> {
    use crate::intpoly::IntPolynomial;
    let dg = big_g.derivative();
    let len = dg.coeffs().len().max(p.coeffs().len());
    let h: Vec<IntPolynomial> = (0..len).map(|i| IntPolynomial::new(vec![-p.coeff(i), dg.coeff(i)])).collect();
    let r = crate::intpoly::resultant_y(g, &h)?;
    if r.is_zero() {
        return Err(crate::Error::Consistency("coefficient annihilator vanished".into()));
    }
    Ok(r)
}

pub(crate) fn refuse<T>(msg: impl Into<String>) -> Result<T> {
    Err(crate::Error::Refused(msg.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matveev_example() {
        let l2 = 2f64.ln();
        let l3 = 3f64.ln();
        let inp = MatveevInputs::new(1, vec![l2, l3], vec![1.into(), 1.into()]);
        assert_eq!(inp.big_b, 1.0);
        let got = matveev_lower_bound(&inp).unwrap();
        let want = -4.0 * 30f64.powi(6) * 3f64.powf(5.5) * (2.0 * std::f64::consts::E).ln() * l2 * l3;
        assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn matveev_rejects_small_log_a() {
        let inp = MatveevInputs::new(1, vec![0.1, 1.0], vec![1.into(), 1.into()]);
        assert!(matveev_lower_bound(&inp).is_err());
        let mut inp = MatveevInputs::new(1, vec![1.0, 1.0], vec![5.into(), 1.into()]);
        inp.big_b = 2.0;
        assert!(matveev_lower_bound(&inp).is_err());
    }

    #[test]
    fn yu_example() {
        let inp = YuInputs {
            p: 2,
            d: 1,
            log_a: vec![1.0, 1.0],
            b: vec![1.into(), 1.into()],
            big_b: 3.0,
            b_n: 3.0,
            yu_delta: 0.5,
        };
        let v = yu_lower_bound(&inp).unwrap();
        assert!(v < 0.0);
        let mut three = inp.clone();
        three.p = 3;
        let mut five = inp.clone();
        five.p = 5;
        assert!(yu_lower_bound(&five).unwrap() < yu_lower_bound(&three).unwrap());
        let mut bad = inp.clone();
        bad.yu_delta = 0.6;
        assert!(yu_lower_bound(&bad).is_err());
    }

    #[test]
    fn curves() {
        let v = stewart_curve(3_814_280, 1.0).unwrap();
        let l = 3_814_280f64.ln();
        assert!((v - l * l.ln() / l.ln().ln()).abs() < 1e-9);
        assert!(stewart_curve(15, 1.0).is_err());
        assert_eq!(gpf_threshold_curve(1000, 0.25).unwrap(), stewart_curve(1000, 0.75).unwrap());
    }

    #[test]
    fn threshold_search() {
        let n = first_true(1.0, |x| x >= 1234.0).unwrap();
        assert_eq!(n, 1234.0);
        let n = first_true(2.0, |x| 0.01 * x - x.ln() >= 0.0).unwrap();
        assert!(0.01 * n - n.ln() >= 0.0 && 0.01 * (n - 1.0) - (n - 1.0).ln() < 0.0);
        assert_eq!(index_above(3.7).unwrap(), 4u32.into());
        assert_eq!(index_above(-1.0).unwrap(), 0u32.into());
    }

    #[test]
    fn dyadic_rounding() {
        for x in [0.25, 1e-21, 0.3, 0.999] {
            let q = dyadic_down(x, 24);
            let f = q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap();
            assert!(f <= x && f > x * (1.0 - 2f64.powi(-22)), "{x} -> {f}");
        }
    }
}
