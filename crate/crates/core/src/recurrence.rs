//! Integer linear recurrences: exact terms, closed form, classification,
//! and floor-power sequences.

use crate::algnum::{certified_roots_with, RootCluster, Tri, DEFAULT_PRECISION_CEILING};
use crate::ball::{Ball, CBall, Dyadic, Round};
use crate::error::{domain, Error, Result};
use crate::interval::Interval;
use crate::intpoly::{
    newton_polygon, ratio_polynomial, resultant, root_of_unity_content, squarefree_decomposition,
    IntPolynomial,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// `u_{n+k} = a_1 u_{n+k-1} + ... + a_k u_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSpec {
    coeffs: Vec<BigInt>,
    init: Vec<BigInt>,
    name: Option<String>,
}

impl RecurrenceSpec {
    pub fn new(coeffs: Vec<BigInt>, init: Vec<BigInt>, name: Option<String>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("recurrence order must be at least 1");
        }
        if coeffs.len() != init.len() {
            return domain(format!(
                "{} coefficients but {} initial values",
                coeffs.len(),
                init.len()
            ));
        }
        if coeffs.last().unwrap().is_zero() {
            return domain("a_k must be non-zero");
        }
        if init.iter().all(Zero::is_zero) {
            return domain("initial values are all zero");
        }
        Ok(RecurrenceSpec { coeffs, init, name })
    }

    pub fn from_i64(coeffs: &[i64], init: &[i64]) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            init.iter().map(|&c| BigInt::from(c)).collect(),
            None,
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn init(&self) -> &[BigInt] {
        &self.init
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `G(X) = X^k - a_1 X^{k-1} - ... - a_k`.
    pub fn char_poly(&self) -> IntPolynomial {
        let mut c: Vec<BigInt> = self.coeffs.iter().rev().map(|a| -a).collect();
        c.push(BigInt::one());
        IntPolynomial::new(c)
    }

    /// Numerator of the generating function read backwards, so that a simple
    /// root `alpha` of G has coefficient `P(alpha) / G'(alpha)`.
    pub fn p_tilde(&self) -> IntPolynomial {
        let k = self.order();
        let mut c = vec![BigInt::zero(); k];
        for j in 0..k {
            let mut p = self.init[j].clone();
            for m in 1..=j {
                p -= &self.coeffs[m - 1] * &self.init[j - m];
            }
            c[k - 1 - j] = p;
        }
        IntPolynomial::new(c)
    }

    /// gcd of the recurrence coefficients.
    pub fn coeff_gcd(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    fn step(&self, state: &[BigInt]) -> BigInt {
        let k = self.order();
        let mut next = BigInt::zero();
        for i in 0..k {
            next += &self.coeffs[i] * &state[k - 1 - i];
        }
        next
    }

    /// Exact `u_n`.
    pub fn term(&self, n: u64) -> BigInt {
        let k = self.order() as u64;
        if n < k {
            return self.init[n as usize].clone();
        }
        if n <= 64 * k {
            return self.iter_from(0).nth(n as usize).unwrap();
        }
        self.term_matrix(n)
    }

    /// `u_n` through the companion matrix power.
    pub fn term_matrix(&self, n: u64) -> BigInt {
        self.state_at(n).swap_remove(0)
    }

    /// `(u_n, ..., u_{n+k-1})`.
    pub fn state_at(&self, n: u64) -> Vec<BigInt> {
        let m = companion_pow(&self.coeffs, n as u128, None);
        mat_vec(&m, &self.init, None)
    }

    /// `(u_n, ..., u_{n+k-1})` reduced modulo `modulus`.
    pub fn state_mod(&self, n: u128, modulus: &BigInt) -> Vec<BigInt> {
        let m = companion_pow(&self.coeffs, n, Some(modulus));
        mat_vec(&m, &self.init, Some(modulus))
    }

    /// Terms from index `from` onward.
    pub fn iter_from(&self, from: u64) -> TermIter<'_> {
        TermIter { spec: self, state: self.state_at(from) }
    }

    /// `u_lo, ..., u_hi` inclusive.
    pub fn terms(&self, lo: u64, hi: u64) -> Vec<BigInt> {
        if hi < lo {
            return Vec::new();
        }
        self.iter_from(lo).take((hi - lo + 1) as usize).collect()
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        if let Some(n) = &self.name {
            write!(f, "{n}: ")?;
        }
        write!(f, "a = ({}), u = ({})", join(&self.coeffs), join(&self.init))
    }
}

pub struct TermIter<'a> {
    spec: &'a RecurrenceSpec,
    state: Vec<BigInt>,
}

impl Iterator for TermIter<'_> {
    type Item = BigInt;
    fn next(&mut self) -> Option<BigInt> {
        let next = self.spec.step(&self.state);
        self.state.push(next);
        Some(self.state.remove(0))
    }
}

type Mat = Vec<Vec<BigInt>>;

fn reduce(x: BigInt, m: Option<&BigInt>) -> BigInt {
    match m {
        Some(m) => x.mod_floor(m),
        None => x,
    }
}

fn mat_mul(a: &Mat, b: &Mat, m: Option<&BigInt>) -> Mat {
    let k = a.len();
    let mut c = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..k {
                c[i][j] += &a[i][l] * &b[l][j];
            }
        }
        for j in 0..k {
            c[i][j] = reduce(std::mem::take(&mut c[i][j]), m);
        }
    }
    c
}

fn mat_vec(a: &Mat, v: &[BigInt], m: Option<&BigInt>) -> Vec<BigInt> {
    a.iter()
        .map(|row| reduce(row.iter().zip(v).map(|(x, y)| x * y).sum(), m))
        .collect()
}

fn companion_pow(coeffs: &[BigInt], mut n: u128, m: Option<&BigInt>) -> Mat {
    let k = coeffs.len();
    let mut base = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k - 1 {
        base[i][i + 1] = BigInt::one();
    }
    for j in 0..k {
        base[k - 1][j] = reduce(coeffs[k - 1 - j].clone(), m);
    }
    let mut acc: Mat = (0..k)
        .map(|i| (0..k).map(|j| reduce(BigInt::from((i == j) as u8), m)).collect())
        .collect();
    while n > 0 {
        if n & 1 == 1 {
            acc = mat_mul(&acc, &base, m);
        }
        n >>= 1;
        if n > 0 {
            base = mat_mul(&base, &base, m);
        }
    }
    acc
}

/// `u_n = sum_i f_i(n) alpha_i^n` with ball coefficients.
#[derive(Clone, Debug)]
pub struct ClosedFormData {
    pub clusters: Vec<RootCluster>,
    pub t: usize,
    /// `f[i][j]` is the coefficient of `n^j` in `f_i`.
    pub f: Vec<Vec<CBall>>,
    /// Upper bound on `max_i sum_j |f_ij|`.
    pub coeff_bound: f64,
    pub precision: u64,
}

impl ClosedFormData {
    /// `f_i(n) alpha_i^n` as a ball.
    pub fn root_term(&self, i: usize, n: u64) -> CBall {
        let p = self.precision;
        let a = self.clusters[i].ball();
        let an = a.pow(n, p);
        let mut fi = CBall::from_int(0);
        let nn = Ball::from_int(n);
        let mut np = Ball::from_int(1);
        for c in &self.f[i] {
            fi = fi.add(&c.scale(&np, p), p);
            np = np.mul(&nn, p);
        }
        fi.mul(&an, p)
    }

    pub fn eval(&self, n: u64) -> CBall {
        let mut acc = CBall::from_int(0);
        for i in 0..self.t {
            acc = acc.add(&self.root_term(i, n), self.precision);
        }
        acc
    }

    /// Upper bounds on `|f_ij|`.
    pub fn abs_coeffs(&self, i: usize) -> Vec<f64> {
        self.f[i].iter().map(|c| c.abs_upper().to_f64(Round::Up)).collect()
    }

    pub fn f_nonzero(&self, i: usize) -> bool {
        self.f[i].iter().any(|c| !c.contains_zero())
    }
}

fn cball_contains_int(z: &CBall, n: &BigInt) -> bool {
    z.re.contains_int(n) && z.im.contains_zero()
}

/// Solves the confluent Vandermonde system for the `f_i`.
pub fn closed_form(spec: &RecurrenceSpec, precision: u64) -> Result<ClosedFormData> {
    closed_form_with(spec, precision, DEFAULT_PRECISION_CEILING)
}

pub fn closed_form_with(spec: &RecurrenceSpec, precision: u64, ceiling: u64) -> Result<ClosedFormData> {
    let g = spec.char_poly();
    let clusters = certified_roots_with(&g, precision, ceiling)?;
    let k = spec.order();
    let p = precision + 64;
    let mut cols: Vec<(usize, usize)> = Vec::new();
    for (i, c) in clusters.iter().enumerate() {
        for j in 0..c.multiplicity {
            cols.push((i, j));
        }
    }
    debug_assert_eq!(cols.len(), k);
    let balls: Vec<CBall> = clusters.iter().map(|c| c.ball()).collect();
    let mut a: Vec<Vec<CBall>> = Vec::with_capacity(k);
    for n in 0..k {
        let row = cols
            .iter()
            .map(|&(i, j)| {
                let nj = if j == 0 { Ball::from_int(1) } else { Ball::from_int(n as u64).pow(j as u64, p) };
                balls[i].pow(n as u64, p).scale(&nj, p)
            })
            .collect();
        a.push(row);
    }
    let mut b: Vec<CBall> = spec.init.iter().map(|u| CBall::from_int(u.clone())).collect();
    let x = solve_cball(&mut a, &mut b, p)
        .ok_or_else(|| Error::Consistency("singular Vandermonde system at working precision".into()))?;
    let mut f: Vec<Vec<CBall>> = clusters.iter().map(|_| Vec::new()).collect();
    for (&(i, _), v) in cols.iter().zip(x) {
        f[i].push(v);
    }
    let coeff_bound = f
        .iter()
        .map(|fi| fi.iter().map(|c| c.abs_upper().to_f64(Round::Up)).fold(0.0, |s, x| (Interval::point(s) + Interval::point(x)).hi))
        .fold(0.0, f64::max);
    let t = clusters.len();
    let cf = ClosedFormData { clusters, t, f, coeff_bound, precision: p };
    for n in k..=2 * k {
        let z = cf.eval(n as u64);
        if !cball_contains_int(&z, &spec.term(n as u64)) {
            return Err(Error::Consistency(format!("closed form misses u_{n}")));
        }
    }
    Ok(cf)
}

fn solve_cball(a: &mut [Vec<CBall>], b: &mut [CBall], p: u64) -> Option<Vec<CBall>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&x, &y| a[x][col].abs_lower().cmp(&a[y][col].abs_lower()))?;
        if a[piv][col].abs_lower().is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv(p)?;
        for r in col + 1..k {
            let factor = a[r][col].mul(&inv, p);
            for c in col..k {
                let t = factor.mul(&a[col][c], p);
                a[r][c] = a[r][c].sub(&t, p);
            }
            let t = factor.mul(&b[col], p);
            b[r] = b[r].sub(&t, p);
        }
    }
    let mut x = vec![CBall::from_int(0); k];
    for r in (0..k).rev() {
        let mut s = b[r].clone();
        for c in r + 1..k {
            s = s.sub(&a[r][c].mul(&x[c], p), p);
        }
        x[r] = s.div(&a[r][r], p)?;
    }
    Some(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominant {
    Index(usize),
    None,
    Undecided,
}

impl fmt::Display for Dominant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dominant::Index(i) => write!(f, "root {i}"),
            Dominant::None => write!(f, "none"),
            Dominant::Undecided => write!(f, "undecided"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub degenerate: bool,
    /// Orders m >= 2 of roots of unity among the root ratios.
    pub witnesses: Vec<u64>,
    pub t: usize,
    pub dominant: Dominant,
    pub padic: BTreeMap<u64, bool>,
    pub nonzero_f: Vec<Tri>,
    pub clusters: Vec<RootCluster>,
}

/// Exact degeneracy test on the ratio polynomial of the square-free part.
pub fn degeneracy_witnesses(g: &IntPolynomial) -> Result<Vec<u64>> {
    let sq = squarefree_decomposition(g)?.squarefree_part();
    let r = ratio_polynomial(&sq)?;
    Ok(root_of_unity_content(&r, r.deg()).into_iter().filter(|&m| m >= 2).collect())
}

pub fn dominant_of(clusters: &[RootCluster]) -> Dominant {
    let n = clusters.len();
    let lo: Vec<Dyadic> = clusters.iter().map(|c| c.modulus_lower()).collect();
    let hi: Vec<Dyadic> = clusters.iter().map(|c| c.modulus_upper()).collect();
    for i in 0..n {
        if (0..n).all(|j| j == i || lo[i] > hi[j]) {
            return match clusters[i].is_real {
                Tri::Yes => Dominant::Index(i),
                Tri::No => Dominant::None,
                Tri::Undecided => Dominant::Undecided,
            };
        }
    }
    for c in 0..n {
        if clusters[c].is_real == Tri::No
            && (0..n).all(|j| j == c || clusters[j].is_real == Tri::No || lo[c] >= hi[j])
        {
            return Dominant::None;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let exact = lo[i] == hi[i] && lo[j] == hi[j] && lo[i] == lo[j];
            if exact && (0..n).all(|l| lo[i] >= hi[l]) {
                return Dominant::None;
            }
        }
    }
    Dominant::Undecided
}

/// Roots of G at increasing precision until the dominant root is settled.
pub fn settled_roots(spec: &RecurrenceSpec, ceiling: u64) -> Result<(Vec<RootCluster>, Dominant)> {
    let g = spec.char_poly();
    let mut p = 128;
    loop {
        let roots = certified_roots_with(&g, p, ceiling.max(p))?;
        let d = dominant_of(&roots);
        if d != Dominant::Undecided || p >= ceiling {
            return Ok((roots, d));
        }
        p = (2 * p).min(ceiling);
    }
}

pub fn classify(spec: &RecurrenceSpec, primes: &[u64]) -> Result<Classification> {
    classify_with(spec, primes, DEFAULT_PRECISION_CEILING)
}

pub fn classify_with(spec: &RecurrenceSpec, primes: &[u64], ceiling: u64) -> Result<Classification> {
    let g = spec.char_poly();
    let witnesses = degeneracy_witnesses(&g)?;
    let (clusters, dominant) = settled_roots(spec, ceiling)?;
    let dec = squarefree_decomposition(&g)?;
    let sq = dec.squarefree_part();
    let mut padic = BTreeMap::new();
    for &p in primes {
        padic.insert(p, newton_polygon(&sq, p)?.unit_root_count() == 1);
    }
    let pt = spec.p_tilde();
    let cf = closed_form_with(spec, 128, ceiling).ok();
    let nonzero_f = clusters
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.multiplicity == 1 && !pt.is_zero() {
                let factor = &dec.factors[c.factor].0;
                if !resultant(factor, &pt).map(|r| r.is_zero()).unwrap_or(true) {
                    return Tri::Yes;
                }
            }
            if pt.is_zero() {
                return Tri::No;
            }
            match &cf {
                Some(cf) if cf.f_nonzero(i) => Tri::Yes,
                _ => Tri::Undecided,
            }
        })
        .collect();
    Ok(Classification {
        degenerate: !witnesses.is_empty(),
        witnesses,
        t: clusters.len(),
        dominant,
        padic,
        nonzero_f,
        clusters,
    })
}

/// `|u_n - f_d(n) alpha_d^n| <= C |alpha_d|^(theta n)` for all `n >= 0`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub dominant: usize,
    pub theta: f64,
    pub c: f64,
    /// Enclosure of `log |alpha_d|`.
    pub ln_alpha: Interval,
    /// Upper bound on `log` of the second largest modulus.
    pub ln_rho: f64,
    /// Upper bound on `sum_j |f_dj|`.
    pub f_dom_upper: f64,
    pub closed_form: ClosedFormData,
}

fn dyadic_up(x: f64, bits: i32) -> f64 {
    let s = (2f64).powi(bits);
    (x * s).ceil() / s
}

pub fn dominant_envelope(spec: &RecurrenceSpec) -> Result<Envelope> {
    dominant_envelope_with(spec, 256, DEFAULT_PRECISION_CEILING)
}

pub fn dominant_envelope_with(spec: &RecurrenceSpec, precision: u64, ceiling: u64) -> Result<Envelope> {
    let (roots, dom) = settled_roots(spec, ceiling)?;
    match dom {
        Dominant::Index(_) => {}
        other => return Err(Error::Precondition(format!("no dominant root ({other})"))),
    }
    if roots.len() < 2 {
        return Err(Error::Precondition("a single distinct root leaves nothing to bound".into()));
    }
    let cf = closed_form_with(spec, precision, ceiling)?;
    let dd = match dominant_of(&cf.clusters) {
        Dominant::Index(i) => i,
        _ => return Err(Error::Consistency("dominant root lost at working precision".into())),
    };
    let ln_alpha = cf.clusters[dd]
        .ln_modulus()
        .ok_or_else(|| Error::Consistency("zero dominant root".into()))?;
    if ln_alpha.lo <= 0.0 {
        return Err(Error::Precondition("dominant root has modulus at most 1".into()));
    }
    let ln_rho = cf
        .clusters
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != dd)
        .map(|(_, c)| c.modulus_upper().ln_interval().hi)
        .fold(f64::NEG_INFINITY, f64::max);
    let gap = (Interval::point(ln_alpha.lo) - Interval::point(ln_rho)).lo;
    if gap <= 0.0 {
        return Err(Error::Consistency("dominant gap not positive".into()));
    }
    let raw = ((Interval::point(ln_rho) + Interval::point(gap / 64.0)) / Interval::point(ln_alpha.lo)).hi;
    let theta = dyadic_up(raw.max(1.0 / 64.0), 20);
    if theta >= 1.0 {
        return Err(Error::Precondition("no envelope exponent below 1".into()));
    }
    let th = Interval::point(theta);
    let mut c = Interval::point(0.0);
    for (i, cl) in cf.clusters.iter().enumerate() {
        if i == dd {
            continue;
        }
        let x = Interval::point(cl.modulus_upper().ln_interval().hi) - th * Interval::point(ln_alpha.lo);
        if x.hi >= 0.0 {
            return Err(Error::Consistency("envelope exponent does not separate roots".into()));
        }
        let ax = Interval::point(-x.hi);
        for (j, fij) in cf.abs_coeffs(i).into_iter().enumerate() {
            let sup = if j == 0 {
                Interval::point(1.0)
            } else {
                (Interval::point(j as f64) / (Interval::e() * ax)).powi(j as u32)
            };
            c = c + Interval::point(fij) * sup;
        }
    }
    let f_dom_upper = cf.abs_coeffs(dd).into_iter().fold(0.0, |s, x| (Interval::point(s) + Interval::point(x)).hi);
    Ok(Envelope { dominant: dd, theta, c: c.hi.max(f64::MIN_POSITIVE), ln_alpha, ln_rho, f_dom_upper, closed_form: cf })
}

/// A real number given exactly or as a selected real root of an integer
/// polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraicReal {
    Rational(BigRational),
    Root { poly: IntPolynomial, hint: f64 },
}

impl AlgebraicReal {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            AlgebraicReal::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Polynomial of the number, primitive with positive leading coefficient.
    pub fn poly(&self) -> IntPolynomial {
        match self {
            AlgebraicReal::Rational(q) => {
                IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()])
            }
            AlgebraicReal::Root { poly, .. } => poly.primitive_part(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            AlgebraicReal::Rational(_) => 1,
            AlgebraicReal::Root { poly, .. } => poly.deg(),
        }
    }

    /// The selected root cluster together with the other roots.
    pub fn locate(&self, precision: u64, ceiling: u64) -> Result<(RootCluster, Vec<RootCluster>)> {
        let poly = match self {
            AlgebraicReal::Rational(q) => {
                let b = Ball::from_rational(q, precision);
                let c = RootCluster {
                    re: b.mid,
                    im: Dyadic::zero(),
                    radius: b.rad,
                    multiplicity: 1,
                    is_real: Tri::Yes,
                    factor: 0,
                };
                return Ok((c, Vec::new()));
            }
            AlgebraicReal::Root { poly, .. } => poly,
        };
        let hint = match self {
            AlgebraicReal::Root { hint, .. } => *hint,
            _ => unreachable!(),
        };
        let roots = certified_roots_with(poly, precision, ceiling)?;
        let mut best: Option<(usize, f64)> = None;
        for (i, r) in roots.iter().enumerate() {
            if r.is_real != Tri::Yes {
                continue;
            }
            let d = (r.re.to_f64(Round::Nearest) - hint).abs();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        let (i, _) = best.ok_or_else(|| Error::Domain("no certified real root near the hint".into()))?;
        let mut rest = roots;
        let sel = rest.remove(i);
        Ok((sel, rest))
    }

    pub fn ball(&self, precision: u64, ceiling: u64) -> Result<Ball> {
        match self {
            AlgebraicReal::Rational(q) => Ok(Ball::from_rational(q, precision)),
            _ => {
                let (c, _) = self.locate(precision, ceiling)?;
                Ok(Ball::with_rad(c.re, c.radius))
            }
        }
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicReal::Rational(q) => write!(f, "{q}"),
            AlgebraicReal::Root { poly, hint } => write!(f, "root of {poly} near {hint}"),
        }
    }
}

/// `v_n = floor(lambda theta^n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloorPowerSpec {
    pub lambda: AlgebraicReal,
    pub theta: AlgebraicReal,
    pub integrality_bound: u64,
    pub name: Option<String>,
}

impl FloorPowerSpec {
    pub fn new(lambda: AlgebraicReal, theta: AlgebraicReal, integrality_bound: u64) -> Result<Self> {
        Self::new_with(lambda, theta, integrality_bound, DEFAULT_PRECISION_CEILING)
    }

    pub fn new_with(lambda: AlgebraicReal, theta: AlgebraicReal, integrality_bound: u64, ceiling: u64) -> Result<Self> {
        if integrality_bound == 0 {
            return domain("integrality bound must be positive");
        }
        match &lambda {
            AlgebraicReal::Rational(q) if q.is_zero() => return domain("lambda must be non-zero"),
            AlgebraicReal::Root { poly, .. } if poly.coeff(0).is_zero() && poly.deg() == 1 => {
                return domain("lambda must be non-zero")
            }
            _ => {}
        }
        let (th, others) = theta.locate(128, ceiling)?;
        let lo = th.re.sub(&th.radius);
        if lo <= Dyadic::from_int(1) {
            return Err(Error::Hypothesis("theta must exceed 1".into()));
        }
        let th_lo = th.modulus_lower();
        if others.iter().any(|o| o.modulus_upper() >= th_lo) {
            return Err(Error::Hypothesis("a conjugate of theta is not strictly smaller in modulus".into()));
        }
        if let AlgebraicReal::Root { .. } = &lambda {
            let b = lambda.ball(128, ceiling)?;
            if b.contains_zero() {
                return domain("lambda must be non-zero");
            }
        }
        let fp = FloorPowerSpec { lambda, theta, integrality_bound, name: None };
        if let Some(l) = fp.integral_power(ceiling)? {
            return Err(Error::Hypothesis(format!("theta^{l} is an integer")));
        }
        Ok(fp)
    }

    pub fn rational(ln: i64, ld: i64, tn: i64, td: i64) -> Result<Self> {
        let q = |n: i64, d: i64| -> Result<BigRational> {
            if d == 0 {
                return domain("zero denominator");
            }
            Ok(BigRational::new(n.into(), d.into()))
        };
        Self::new(AlgebraicReal::Rational(q(ln, ld)?), AlgebraicReal::Rational(q(tn, td)?), 64)
    }

    /// Smallest `l <= integrality_bound` with `theta^l` an integer.
    pub fn integral_power(&self, ceiling: u64) -> Result<Option<u64>> {
        match &self.theta {
            AlgebraicReal::Rational(q) => Ok(if q.is_integer() { Some(1) } else { None }),
            AlgebraicReal::Root { poly, .. } => {
                let (th, _) = self.theta.locate(256, ceiling)?;
                let tb = Ball::with_rad(th.re.clone(), th.radius.clone());
                for l in 1..=self.integrality_bound {
                    let pw = tb.pow(l, 256);
                    let m = pw.mid.add(&Dyadic::pow2(-1)).floor();
                    if !pw.contains_int(&m) {
                        continue;
                    }
                    let target = IntPolynomial::monomial(1, l as usize).sub(&IntPolynomial::constant(m));
                    let g = poly.gcd(&target);
                    if g.deg() == 0 {
                        continue;
                    }
                    let roots = certified_roots_with(&g, 128, ceiling)?;
                    let hit = roots.iter().any(|r| {
                        let d = r.re.sub(&th.re).abs();
                        r.is_real != Tri::No && d <= r.radius.add(&th.radius)
                    });
                    if hit {
                        return Ok(Some(l));
                    }
                }
                Ok(None)
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        self.lambda.as_rational().is_some() && self.theta.as_rational().is_some()
    }

    /// Degree of a field containing lambda and theta.
    pub fn field_degree(&self) -> usize {
        self.lambda.degree() * self.theta.degree()
    }

    /// `floor(lambda theta^n)`.
    pub fn term(&self, n: u64) -> Result<BigInt> {
        if self.is_rational() {
            Ok(self.term_exact(n).unwrap())
        } else {
            self.term_ball(n, 128, DEFAULT_PRECISION_CEILING)
        }
    }

    /// Exact integer path; `None` unless both numbers are rational.
    pub fn term_exact(&self, n: u64) -> Option<BigInt> {
        let l = self.lambda.as_rational()?;
        let t = self.theta.as_rational()?;
        let e = n as u32;
        let num = l.numer() * t.numer().pow(e);
        let den = l.denom() * t.denom().pow(e);
        Some(num.div_floor(&den))
    }

    /// Ball path with precision escalation.
    pub fn term_ball(&self, n: u64, precision: u64, ceiling: u64) -> Result<BigInt> {
        let mut p = precision.max(64);
        loop {
            let work = p + 2 * n + 64;
            let l = self.lambda.ball(work, ceiling.max(work))?;
            let t = self.theta.ball(work, ceiling.max(work))?;
            let v = l.mul(&t.pow(n, work), work);
            if let Some(f) = v.floor_if_decided() {
                return Ok(f);
            }
            if p >= ceiling {
                return Err(Error::FloorUndecided { n, precision: p });
            }
            p = (2 * p).min(ceiling);
        }
    }

    pub fn terms(&self, lo: u64, hi: u64) -> Result<Vec<BigInt>> {
        (lo..=hi).map(|n| self.term(n)).collect()
    }
}

impl fmt::Display for FloorPowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "floor(({}) * ({})^n)", self.lambda, self.theta)
    }
}

/// Either kind of integer sequence the scanners accept.
#[derive(Clone, Debug)]
pub enum Sequence {
    Recurrence(RecurrenceSpec),
    FloorPower(FloorPowerSpec),
}

impl Sequence {
    pub fn terms(&self, lo: u64, hi: u64) -> Result<Vec<BigInt>> {
        match self {
            Sequence::Recurrence(r) => Ok(r.terms(lo, hi)),
            Sequence::FloorPower(f) => f.terms(lo, hi),
        }
    }

    pub fn term(&self, n: u64) -> Result<BigInt> {
        match self {
            Sequence::Recurrence(r) => Ok(r.term(n)),
            Sequence::FloorPower(f) => f.term(n),
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Sequence::Recurrence(r) => r.name(),
            Sequence::FloorPower(f) => f.name.as_deref(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> RecurrenceSpec {
        RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap()
    }

    #[test]
    fn terms_small() {
        assert_eq!(fib().term(10), BigInt::from(55));
        let s = RecurrenceSpec::from_i64(&[8, -12], &[2, 8]).unwrap();
        assert_eq!(s.term(3), BigInt::from(224));
        assert_eq!(s.term(0), BigInt::from(2));
    }

    #[test]
    fn matrix_agrees_with_iteration() {
        let s = RecurrenceSpec::from_i64(&[2, -1, 3], &[1, -2, 5]).unwrap();
        let it = s.terms(0, 300);
        for (n, u) in it.iter().enumerate() {
            assert_eq!(&s.term_matrix(n as u64), u);
        }
        let m = BigInt::from(1_000_003);
        assert_eq!(s.state_mod(250, &m)[0], it[250].mod_floor(&m));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(RecurrenceSpec::from_i64(&[1, 0], &[0, 1]).is_err());
        assert!(RecurrenceSpec::from_i64(&[1, 1], &[0, 0]).is_err());
        assert!(RecurrenceSpec::from_i64(&[1], &[0, 1]).is_err());
    }

    #[test]
    fn binet_coefficients() {
        let cf = closed_form(&fib(), 128).unwrap();
        assert_eq!(cf.t, 2);
        let s5 = 1.0 / 5f64.sqrt();
        let mut got: Vec<f64> = cf.f.iter().map(|f| f[0].re.mid.to_f64(Round::Nearest)).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((got[0] + s5).abs() < 1e-12 && (got[1] - s5).abs() < 1e-12);
        for n in 0..=8 {
            assert!(cball_contains_int(&cf.eval(n), &fib().term(n)));
        }
    }

    #[test]
    fn repeated_root_closed_form() {
        // u_n = (n + 1) 2^n
        let s = RecurrenceSpec::from_i64(&[4, -4], &[1, 4]).unwrap();
        let cf = closed_form(&s, 128).unwrap();
        assert_eq!(cf.t, 1);
        assert_eq!(cf.f[0].len(), 2);
        assert!(cball_contains_int(&cf.eval(20), &s.term(20)));
    }

    #[test]
    fn classification_examples() {
        let c = classify(&fib(), &[2]).unwrap();
        assert!(!c.degenerate);
        assert!(matches!(c.dominant, Dominant::Index(_)));
        assert_eq!(c.padic[&2], false);
        let s = RecurrenceSpec::from_i64(&[5, -6], &[2, 5]).unwrap();
        let c = classify(&s, &[2, 5]).unwrap();
        assert!(c.padic[&2] && !c.padic[&5]);
        let s = RecurrenceSpec::from_i64(&[0, 1], &[1, 2]).unwrap();
        let c = classify(&s, &[]).unwrap();
        assert!(c.degenerate && c.witnesses.contains(&2));
        assert_eq!(c.dominant, Dominant::None);
        let s = RecurrenceSpec::from_i64(&[1, -2], &[1, 1]).unwrap();
        assert_eq!(classify(&s, &[]).unwrap().dominant, Dominant::None);
    }

    #[test]
    fn envelope_for_two_powers() {
        let s = RecurrenceSpec::from_i64(&[8, -12], &[2, 8]).unwrap();
        let e = dominant_envelope(&s).unwrap();
        let base = 2f64.ln() / 6f64.ln();
        assert!(e.theta > base && e.theta < base + 0.02);
        assert!(e.c >= 1.0 && e.c < 1.001);
    }

    #[test]
    fn floor_power_examples() {
        let fp = FloorPowerSpec::rational(1, 1, 3, 2).unwrap();
        assert_eq!(fp.term(5).unwrap(), BigInt::from(7));
        assert_eq!(fp.term(0).unwrap(), BigInt::from(1));
        let fp2 = FloorPowerSpec::rational(2, 1, 3, 2).unwrap();
        assert_eq!(fp2.term(1).unwrap(), BigInt::from(3));
        assert!(matches!(FloorPowerSpec::rational(1, 1, 2, 1), Err(Error::Hypothesis(_))));
        assert_eq!(fp.term_ball(40, 64, 4096).unwrap(), fp.term_exact(40).unwrap());
    }

    #[test]
    fn algebraic_floor_power() {
        // golden ratio: floor(phi^n) = F_{n+1} - [n odd] ... checked against the exact recurrence
        let phi = AlgebraicReal::Root { poly: IntPolynomial::from_i64(&[-1, -1, 1]), hint: 1.618 };
        let fp = FloorPowerSpec::new(AlgebraicReal::Rational(BigRational::one()), phi, 32).unwrap();
        let lucas = RecurrenceSpec::from_i64(&[1, 1], &[2, 1]).unwrap();
        for n in 2..60u64 {
            let l = lucas.term(n);
            let want = if n % 2 == 0 { l - 1 } else { l };
            assert_eq!(fp.term(n).unwrap(), want, "n = {n}");
        }
        let sqrt2 = AlgebraicReal::Root { poly: IntPolynomial::from_i64(&[-2, 0, 1]), hint: 1.41 };
        assert!(FloorPowerSpec::new(AlgebraicReal::Rational(BigRational::one()), sqrt2, 8).is_err());
    }
}
