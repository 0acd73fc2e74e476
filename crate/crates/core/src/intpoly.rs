//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored constant term first. Besides ring arithmetic this
//! module provides subresultant resultants (univariate and eliminating `y`
//! from a bivariate polynomial), Yun square-free decomposition, cyclotomic
//! polynomials and p-adic Newton polygons.

use crate::error::{domain, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPolynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        IntPolynomial::new(vec![c.into()])
    }

    pub fn one() -> Self {
        IntPolynomial::constant(1)
    }

    /// `c * x^k`
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c.into();
        IntPolynomial::new(v)
    }

    /// `x - r`
    pub fn linear_root(r: impl Into<BigInt>) -> Self {
        IntPolynomial::new(vec![-r.into(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPolynomial::new(v)
    }

    pub fn pow(&self, k: u32) -> IntPolynomial {
        let mut acc = IntPolynomial::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    /// `p(c * x)`
    pub fn scale_arg(&self, c: &BigInt) -> IntPolynomial {
        let mut pw = BigInt::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        IntPolynomial::new(v)
    }

    /// `p(x^k)`
    pub fn inflate(&self, k: usize) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        IntPolynomial::new(v)
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with a positive leading coefficient.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        IntPolynomial::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder: `lead(d)^(deg a - deg d + 1) a = q d + r`.
    pub fn prem(&self, d: &IntPolynomial) -> IntPolynomial {
        assert!(!d.is_zero(), "pseudo-division by zero polynomial");
        let dd = d.deg();
        let mut r = self.clone();
        if r.is_zero() || r.deg() < dd {
            return r;
        }
        let ld = d.lead();
        let mut e = r.deg() - dd + 1;
        while !r.is_zero() && r.deg() >= dd {
            let shift = r.deg() - dd;
            let lr = r.lead();
            let t = IntPolynomial::monomial(lr, shift).mul(d);
            r = r.scale(&ld).sub(&t);
            e -= 1;
        }
        r.scale(&num_traits::pow(ld, e))
    }

    /// Exact quotient over the integers, `None` if `d` does not divide.
    pub fn exact_div(&self, d: &IntPolynomial) -> Option<IntPolynomial> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let dd = d.deg();
        let ld = d.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qi, rem) = top.div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                r[i + j] -= &qi * c;
            }
            q[i] = qi;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPolynomial::new(q))
        } else {
            None
        }
    }

    pub fn divides(&self, o: &IntPolynomial) -> bool {
        o.exact_div(self).is_some()
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &IntPolynomial) -> IntPolynomial {
        let mut a = self.primitive_part();
        let mut b = o.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Number of times `x - 1` divides the polynomial.
    pub fn multiplicity_of_one(&self) -> usize {
        let lin = IntPolynomial::linear_root(1);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            match p.exact_div(&lin) {
                Some(q) => {
                    p = q;
                    k += 1;
                }
                None => break,
            }
        }
        k
    }

    /// Discriminant `(-1)^(d(d-1)/2) Res(p, p') / lead(p)`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return domain("discriminant of a constant polynomial"),
        };
        let r = resultant(self, &self.derivative())?;
        let v = r / self.lead();
        Ok(if (d * (d - 1) / 2) % 2 == 1 { -v } else { v })
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Resultant of two univariate integer polynomials by the subresultant
/// pseudo-remainder sequence.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return domain("resultant of the zero polynomial");
    }
    let (df, dg) = (f.deg(), g.deg());
    if df == 0 {
        return Ok(num_traits::pow(f.lead(), dg));
    }
    if dg == 0 {
        return Ok(num_traits::pow(g.lead(), df));
    }
    let ca = f.content();
    let cb = g.content();
    let mut a = IntPolynomial::new(f.coeffs.iter().map(|c| c / &ca).collect());
    let mut b = IntPolynomial::new(g.coeffs.iter().map(|c| c / &cb).collect());
    let t = num_traits::pow(ca, dg) * num_traits::pow(cb, df);
    let mut s = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.deg();
        let db = b.deg();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.prem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        let div = &gg * num_traits::pow(h.clone(), delta);
        b = IntPolynomial::new(r.coeffs.iter().map(|c| c / &div).collect());
        gg = a.lead();
        if delta > 0 {
            h = num_traits::pow(gg.clone(), delta) / num_traits::pow(h.clone(), delta - 1);
        }
        if b.deg() == 0 {
            let da = a.deg();
            let hb = num_traits::pow(b.lead(), da) / num_traits::pow(h, da - 1);
            return Ok(s * t * hb);
        }
    }
}

/// `Res_y(f(y), h(x, y))` where `h = sum_i h[i](x) y^i`, as a polynomial in
/// `x`. Computed by evaluating `x` at integer points and interpolating.
pub fn resultant_y(f: &IntPolynomial, h: &[IntPolynomial]) -> Result<IntPolynomial> {
    if f.is_zero() {
        return domain("resultant of the zero polynomial");
    }
    let n = match h.iter().rposition(|c| !c.is_zero()) {
        Some(n) => n,
        None => return domain("resultant of the zero polynomial"),
    };
    let m = f.deg();
    let dx = h.iter().map(|c| c.deg()).max().unwrap_or(0);
    let bound = m * dx;
    let mut xs = Vec::with_capacity(bound + 1);
    let mut ys = Vec::with_capacity(bound + 1);
    let mut x0 = 1i64;
    while xs.len() <= bound {
        let xb = BigInt::from(x0);
        x0 += 1;
        if h[n].eval(&xb).is_zero() {
            continue;
        }
        let spec = IntPolynomial::new(h[..=n].iter().map(|c| c.eval(&xb)).collect());
        ys.push(resultant(f, &spec)?);
        xs.push(xb);
    }
    interpolate_integer(&xs, &ys)
}

/// Newton interpolation with an integrality check on the result.
fn interpolate_integer(xs: &[BigInt], ys: &[BigInt]) -> Result<IntPolynomial> {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - j]);
            dd[i] = num / den;
        }
    }
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n {
            if acc[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &acc[k];
            }
            next[k] -= &acc[k] * BigRational::from_integer(xs[i].clone());
        }
        next[0] += &dd[i];
        acc = next;
    }
    let mut out = Vec::with_capacity(n);
    for c in acc {
        if !c.is_integer() {
            return Err(crate::error::Error::Consistency(
                "interpolated resultant has a non-integral coefficient".into(),
            ));
        }
        out.push(c.to_integer());
    }
    Ok(IntPolynomial::new(out))
}

/// `R(x) = Res_y(g(y), g(x y))`, whose roots are the ratios of roots of `g`.
pub fn ratio_polynomial(g: &IntPolynomial) -> Result<IntPolynomial> {
    if g.is_zero() || g.deg() == 0 {
        return domain("ratio polynomial of a constant");
    }
    if g.coeff(0).is_zero() {
        return domain("ratio polynomial needs a non-zero constant term");
    }
    let h: Vec<IntPolynomial> =
        g.coeffs.iter().enumerate().map(|(i, c)| IntPolynomial::monomial(c.clone(), i)).collect();
    resultant_y(g, &h)
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut r = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if m > 1 {
        r -= r / m;
    }
    r
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// The m-th cyclotomic polynomial.
///
/// Built on the radical of m with `Phi_{np}(x) = Phi_n(x^p) / Phi_n(x)`, then
/// inflated by `m / rad(m)`.
pub fn cyclotomic(m: u64) -> Result<IntPolynomial> {
    if m == 0 {
        return domain("cyclotomic index must be positive");
    }
    let mut phi = IntPolynomial::linear_root(1);
    let mut rad = 1u64;
    for p in prime_factors(m) {
        let up = phi.inflate(p as usize);
        phi = up.exact_div(&phi).expect("cyclotomic recursion divides exactly");
        rad *= p;
    }
    Ok(phi.inflate((m / rad) as usize))
}

/// Every m up to the totient bound for which `Phi_m` divides `g`.
pub fn root_of_unity_content(g: &IntPolynomial, degree_bound: usize) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    if g.is_zero() {
        return out;
    }
    let b = degree_bound as u64;
    let limit = 4 * b * b + 2;
    for m in 1..=limit {
        let ph = euler_phi(m);
        if ph > b || ph as usize > g.deg() {
            continue;
        }
        let c = cyclotomic(m).expect("m >= 1");
        if c.divides(g) {
            out.insert(m);
        }
    }
    out
}

/// p-adic valuation of a non-zero integer.
pub fn valuation(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut k = 0;
    let mut x = n.clone();
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return k;
        }
        x = q;
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    /// Valuation of each root on this edge (the negated hull gradient).
    pub slope: Ratio<i64>,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub prime: u64,
    /// Lower hull vertices `(index, v_p(coefficient))` by increasing index.
    pub vertices: Vec<(usize, i64)>,
    /// Edges ordered by strictly increasing root valuation.
    pub slopes: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn min_slope(&self) -> Option<Ratio<i64>> {
        self.slopes.first().map(|s| s.slope)
    }

    /// Number of roots with valuation zero.
    pub fn unit_root_count(&self) -> usize {
        self.slopes.iter().filter(|s| s.slope.is_zero()).map(|s| s.length).sum()
    }

    /// Smallest strictly positive root valuation.
    pub fn min_positive_slope(&self) -> Option<Ratio<i64>> {
        self.slopes.iter().map(|s| s.slope).find(|s| *s > Ratio::zero())
    }

    pub fn total_length(&self) -> usize {
        self.slopes.iter().map(|s| s.length).sum()
    }

    /// Root valuations with multiplicity, ascending.
    pub fn valuations(&self) -> Vec<Ratio<i64>> {
        self.slopes.iter().flat_map(|s| std::iter::repeat(s.slope).take(s.length)).collect()
    }
}

/// Lower convex hull of `(i, v_p(c_i))`. Roots at zero (infinite valuation)
/// do not appear.
pub fn newton_polygon(g: &IntPolynomial, p: u64) -> Result<NewtonPolygon> {
    if g.is_zero() {
        return domain("newton polygon of the zero polynomial");
    }
    if p < 2 || !crate::sparts::is_prime_u64(p) {
        return domain(format!("{p} is not prime"));
    }
    let pts: Vec<(usize, i64)> = g
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, valuation(c, p) as i64))
        .collect();
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 as i64 - a.0 as i64) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut slopes: Vec<Segment> = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            Segment { slope: Ratio::new(w[0].1 - w[1].1, len as i64), length: len }
        })
        .collect();
    slopes.reverse();
    Ok(NewtonPolygon { prime: p, vertices: hull, slopes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    /// Primitive square-free factors with their multiplicities.
    pub factors: Vec<(IntPolynomial, usize)>,
}

impl SquarefreeDecomposition {
    /// Product of the distinct factors.
    pub fn squarefree_part(&self) -> IntPolynomial {
        self.factors.iter().fold(IntPolynomial::one(), |acc, (f, _)| acc.mul(f))
    }

    pub fn reassemble(&self) -> IntPolynomial {
        self.factors.iter().fold(IntPolynomial::one(), |acc, (f, l)| acc.mul(&f.pow(*l as u32)))
    }

    /// Sum of squared multiplicities weighted by factor degree.
    pub fn sum_sq_multiplicities(&self) -> usize {
        self.factors.iter().map(|(f, l)| f.deg() * l * l).sum()
    }
}

/// Yun's algorithm over the integers, using primitive gcds.
pub fn squarefree_decomposition(g: &IntPolynomial) -> Result<SquarefreeDecomposition> {
    if g.is_zero() {
        return domain("square-free decomposition of the zero polynomial");
    }
    let f = g.primitive_part();
    let mut factors = Vec::new();
    if f.deg() == 0 {
        return Ok(SquarefreeDecomposition { factors });
    }
    let fp = f.derivative();
    let b = f.gcd(&fp);
    let mut c = f.exact_div(&b).expect("gcd divides");
    let mut d = fp.exact_div(&b).expect("gcd divides derivative").sub(&c.derivative());
    let mut i = 1;
    while c.deg() > 0 {
        let a = c.gcd(&d);
        if a.deg() > 0 {
            factors.push((a.clone(), i));
        }
        c = c.exact_div(&a).expect("gcd divides");
        d = d.exact_div(&a).expect("gcd divides").sub(&c.derivative());
        i += 1;
    }
    Ok(SquarefreeDecomposition { factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-3, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[-4, 0, 1])).unwrap(), BigInt::from(9));
        let f = p(&[1, -3, 0, 2]);
        assert!(resultant(&f, &f).unwrap().is_zero());
        assert!(resultant(&IntPolynomial::zero(), &f).is_err());
    }

    #[test]
    fn resultant_against_root_product() {
        // f = (x-1)(x-2)(x+3), g = x^2 + 1: Res = prod g(root) = 2 * 5 * 10
        let f = p(&[-1, 1]).mul(&p(&[-2, 1])).mul(&p(&[3, 1]));
        let g = p(&[1, 0, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), BigInt::from(100));
        // Res(g, f) = (-1)^(3*2) Res(f, g)
        assert_eq!(resultant(&g, &f).unwrap(), BigInt::from(100));
        // non-monic: Res(2x-1, x-3) = 2 * (1/2 - 3) = -5
        assert_eq!(resultant(&p(&[-1, 2]), &p(&[-3, 1])).unwrap(), BigInt::from(-5));
    }

    #[test]
    fn ratio_polynomial_examples() {
        let r = ratio_polynomial(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(r.deg(), 4);
        assert_eq!(r.primitive_part(), p(&[-1, 0, 1]).pow(2));
        let r = ratio_polynomial(&p(&[-2, 1])).unwrap();
        assert_eq!(r.primitive_part(), p(&[-1, 1]));
        let fib = p(&[-1, -1, 1]);
        let r = ratio_polynomial(&fib).unwrap();
        assert_eq!(r.deg(), 4);
        assert_eq!(r.multiplicity_of_one(), 2);
        assert!(ratio_polynomial(&p(&[0, 1, 1])).is_err());
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1).unwrap(), p(&[-1, 1]));
        assert_eq!(cyclotomic(4).unwrap(), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(12).unwrap(), p(&[1, 0, -1, 0, 1]));
        assert!(cyclotomic(0).is_err());
    }

    #[test]
    fn newton_polygon_examples() {
        let np = newton_polygon(&p(&[6, -5, 1]), 2).unwrap();
        let v: Vec<_> = np.slopes.iter().map(|s| (s.slope, s.length)).collect();
        assert_eq!(v, vec![(Ratio::from_integer(0), 1), (Ratio::from_integer(1), 1)]);
        let np = newton_polygon(&p(&[12, -8, 1]), 2).unwrap();
        let v: Vec<_> = np.slopes.iter().map(|s| (s.slope, s.length)).collect();
        assert_eq!(v, vec![(Ratio::from_integer(1), 2)]);
        let np = newton_polygon(&p(&[5, 3, 1]), 2).unwrap();
        assert_eq!(np.min_slope(), Some(Ratio::from_integer(0)));
        // x^2 - 2 at 2: both roots valuation 1/2
        let np = newton_polygon(&p(&[-2, 0, 1]), 2).unwrap();
        assert_eq!(np.slopes, vec![Segment { slope: Ratio::new(1, 2), length: 2 }]);
        assert!(newton_polygon(&p(&[1, 1]), 4).is_err());
    }

    #[test]
    fn squarefree_examples() {
        let d = squarefree_decomposition(&p(&[4, -4, 1])).unwrap();
        assert_eq!(d.factors, vec![(p(&[-2, 1]), 2)]);
        let d = squarefree_decomposition(&p(&[-1, -1, 1])).unwrap();
        assert_eq!(d.factors, vec![(p(&[-1, -1, 1]), 1)]);
        let g = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        let d = squarefree_decomposition(&g).unwrap();
        assert_eq!(d.factors, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        assert_eq!(d.reassemble(), g);
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(root_of_unity_content(&p(&[1, 0, 1]), 2), BTreeSet::from([4]));
        assert!(root_of_unity_content(&p(&[-1, -1, 1]), 2).is_empty());
        assert_eq!(root_of_unity_content(&p(&[-1, 0, 1]), 2), BTreeSet::from([1, 2]));
    }

    #[test]
    fn discriminant_quadratic() {
        assert_eq!(p(&[-1, -1, 1]).discriminant().unwrap(), BigInt::from(5));
        assert_eq!(p(&[6, -5, 1]).discriminant().unwrap(), BigInt::from(1));
        assert_eq!(p(&[1, 0, 0, 1]).discriminant().unwrap(), BigInt::from(-27));
    }

    #[test]
    fn resultant_y_matches_direct_elimination() {
        // Res_y(y^2 - 2, x - y) = x^2 - 2
        let f = p(&[-2, 0, 1]);
        let h = vec![p(&[0, 1]), p(&[-1])];
        assert_eq!(resultant_y(&f, &h).unwrap(), p(&[-2, 0, 1]));
    }
}
