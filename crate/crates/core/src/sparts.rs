//! S-parts and greatest prime factors of big integers.

use crate::error::{domain, Result};
use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::OnceLock;

const TRIAL_LIMIT: u64 = 1 << 16;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
    })
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &MR_BASES[..12] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Composite,
    Prime,
    /// Passed random-base rounds only.
    ProbablePrime,
}

fn mr_witness(n: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == nm1 {
        return false;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return false;
        }
    }
    true
}

/// Miller-Rabin with a fixed base schedule below 3.3e24 and `rounds` seeded
/// random bases above.
pub fn primality(n: &BigUint, rounds: u32) -> Primality {
    if let Some(m) = n.to_u64() {
        return if is_prime_u64(m) { Primality::Prime } else { Primality::Composite };
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let det_limit = BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap();
    if *n < det_limit {
        for &a in &MR_BASES {
            if mr_witness(n, &d, s, &BigUint::from(a)) {
                return Primality::Composite;
            }
        }
        return Primality::Prime;
    }
    let seed = n.iter_u64_digits().next().unwrap_or(0) ^ n.bits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    let hi = n - 2u32;
    for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &hi);
        if mr_witness(n, &d, s, &a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn brent_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let m = 128u64;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            *budget = budget.saturating_sub(lim);
            g = gcd_u64(q, n);
            k += m;
        }
        r *= 2;
        if *budget == 0 && g == 1 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    let cc = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &cc) % n;
    let m = 128u64;
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let diff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { b - a };
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            *budget = budget.saturating_sub(lim);
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if *budget == 0 && g == one {
            return None;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if g > one {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

/// Splits a composite into a non-trivial factor within the budget.
fn split(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    for c in 1u64.. {
        if *budget == 0 {
            return None;
        }
        let f = match n.to_u64() {
            Some(m) => brent_u64(m, c, budget).map(BigUint::from),
            None => brent_big(n, c, budget),
        };
        if f.is_some() {
            return f;
        }
    }
    None
}

#[derive(Clone, Copy, Debug)]
pub struct GpfOptions {
    /// Pollard-rho iterations allowed per input number.
    pub budget: u64,
    pub mr_rounds: u32,
}

impl Default for GpfOptions {
    fn default() -> Self {
        GpfOptions { budget: 100_000_000, mr_rounds: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gpf {
    /// The greatest prime factor, or a lower bound when incomplete.
    pub value: BigUint,
    /// Largest prime factor actually found.
    pub largest_found: BigUint,
    pub complete: bool,
    /// Some factor was only shown probably prime.
    pub probabilistic: bool,
}

impl fmt::Display for Gpf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.complete {
            write!(f, "{}", self.value)
        } else {
            write!(f, ">={}", self.value)
        }
    }
}

/// Greatest prime factor with `P[0] = P[1] = P[-1] = 1`.
pub fn greatest_prime_factor(m: &BigInt, opts: GpfOptions) -> Gpf {
    let mut n = m.magnitude().clone();
    let one = BigUint::one();
    let mut best = BigUint::one();
    let mut gpf = Gpf { value: one.clone(), largest_found: one.clone(), complete: true, probabilistic: false };
    if n <= one {
        return gpf;
    }
    for &p in small_primes() {
        if (&n % p).is_zero() {
            best = BigUint::from(p);
            while (&n % p).is_zero() {
                n /= p;
            }
        }
        if n == one {
            break;
        }
        if BigUint::from(p) * p > n {
            best = best.max(n.clone());
            n = one.clone();
            break;
        }
    }
    let mut budget = opts.budget;
    let mut stack = if n > one { vec![n] } else { Vec::new() };
    let mut unresolved = false;
    while let Some(c) = stack.pop() {
        match primality(&c, opts.mr_rounds) {
            Primality::Prime => best = best.max(c),
            Primality::ProbablePrime => {
                gpf.probabilistic = true;
                best = best.max(c);
            }
            Primality::Composite => match split(&c, &mut budget) {
                Some(f) => {
                    let g = &c / &f;
                    stack.push(f);
                    stack.push(g);
                }
                None => unresolved = true,
            },
        }
    }
    gpf.largest_found = best.clone();
    if unresolved {
        gpf.complete = false;
        gpf.value = best.max(BigUint::from(TRIAL_LIMIT + 1));
    } else {
        gpf.value = best;
    }
    gpf
}

/// Distinct prime factors of `|m|`, ascending, or `None` when the budget
/// runs out.
pub fn prime_factors(m: &BigInt, opts: GpfOptions) -> Option<Vec<BigUint>> {
    let mut n = m.magnitude().clone();
    let one = BigUint::one();
    let mut out = Vec::new();
    for &p in small_primes() {
        if n == one {
            break;
        }
        if BigUint::from(p) * p > n {
            break;
        }
        if (&n % p).is_zero() {
            out.push(BigUint::from(p));
            while (&n % p).is_zero() {
                n /= p;
            }
        }
    }
    let mut budget = opts.budget;
    let mut stack = if n > one { vec![n] } else { Vec::new() };
    while let Some(c) = stack.pop() {
        if primality(&c, opts.mr_rounds) != Primality::Composite {
            out.push(c);
            continue;
        }
        let f = split(&c, &mut budget)?;
        let g = &c / &f;
        stack.push(f);
        stack.push(g);
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// The set S of distinct primes, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return domain("prime set must be non-empty");
        }
        primes.sort_unstable();
        for w in primes.windows(2) {
            if w[0] == w[1] {
                return domain(format!("prime {} listed twice", w[0]));
            }
        }
        if let Some(p) = primes.iter().find(|&&p| !is_prime_u64(p)) {
            return domain(format!("{p} is not prime"));
        }
        Ok(PrimeSet { primes })
    }

    /// Parses a comma separated list such as `2,3,5`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: std::result::Result<Vec<u64>, _> =
            s.split(',').map(|t| t.trim()).filter(|t| !t.is_empty()).map(|t| t.parse::<u64>()).collect();
        match v {
            Ok(v) => PrimeSet::new(v),
            Err(e) => Err(crate::error::Error::Parse(format!("prime list {s:?}: {e}"))),
        }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn product(&self) -> BigInt {
        self.primes.iter().fold(BigInt::one(), |a, &p| a * p)
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPartDecomposition {
    pub s_part: BigInt,
    /// Carries the sign of the input.
    pub cofactor: BigInt,
    pub exponents: Vec<u64>,
}

pub fn s_part(m: &BigInt, s: &PrimeSet) -> Result<SPartDecomposition> {
    if m.is_zero() {
        return domain("S-part of zero is undefined");
    }
    let mut rest = m.clone();
    let mut part = BigInt::one();
    let mut exps = Vec::with_capacity(s.len());
    for &q in s.primes() {
        let mut r = 0u64;
        if q == 2 {
            let tz = rest.trailing_zeros().unwrap_or(0);
            rest >>= tz;
            r = tz;
            part <<= tz;
        } else {
            let qb = BigInt::from(q);
            loop {
                let (d, rem) = rest.div_rem(&qb);
                if !rem.is_zero() {
                    break;
                }
                rest = d;
                r += 1;
            }
            part *= num_traits::pow(qb, r as usize);
        }
        exps.push(r);
    }
    Ok(SPartDecomposition { s_part: part, cofactor: rest, exponents: exps })
}

/// Number of decimal digits of |m| (zero has one digit).
pub fn decimal_digits(m: &BigInt) -> usize {
    let s = m.magnitude().to_str_radix(10);
    s.len()
}

/// True when |m| <= 1.
pub fn is_trivial_term(m: &BigInt) -> bool {
    m.sign() == Sign::NoSign || m.magnitude().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn s_part_examples() {
        let s23 = PrimeSet::new(vec![2, 3]).unwrap();
        let d = s_part(&big(12), &s23).unwrap();
        assert_eq!((d.s_part, d.cofactor, d.exponents), (big(12), big(1), vec![2, 1]));
        let d = s_part(&big(-40), &PrimeSet::new(vec![2]).unwrap()).unwrap();
        assert_eq!((d.s_part, d.cofactor), (big(8), big(-5)));
        let d = s_part(&big(55), &s23).unwrap();
        assert_eq!((d.s_part, d.cofactor), (big(1), big(55)));
        assert!(s_part(&big(0), &s23).is_err());
    }

    #[test]
    fn prime_set_validation() {
        assert!(PrimeSet::new(vec![]).is_err());
        assert!(PrimeSet::new(vec![2, 4]).is_err());
        assert!(PrimeSet::new(vec![3, 3]).is_err());
        assert_eq!(PrimeSet::parse("5, 2").unwrap().primes(), &[2, 5]);
    }

    #[test]
    fn gpf_examples() {
        let o = GpfOptions::default();
        assert_eq!(greatest_prime_factor(&big(0), o).value, BigUint::from(1u32));
        assert_eq!(greatest_prime_factor(&big(-1), o).value, BigUint::from(1u32));
        assert_eq!(greatest_prime_factor(&big(55), o).value, BigUint::from(11u32));
        assert_eq!(greatest_prime_factor(&big(75025), o).value, BigUint::from(3001u32));
    }

    #[test]
    fn gpf_semiprimes_beyond_trial_division() {
        let o = GpfOptions::default();
        let p = 1_000_003u64;
        let q = 999_983u64;
        let g = greatest_prime_factor(&(BigInt::from(p) * q), o);
        assert!(g.complete);
        assert_eq!(g.value, BigUint::from(p));
        // two 40-bit primes
        let a = 1_099_511_627_791u64;
        let b = 1_099_511_628_401u64;
        assert!(is_prime_u64(a) && is_prime_u64(b));
        let g = greatest_prime_factor(&(BigInt::from(a) * b * 7), o);
        assert_eq!(g.value, BigUint::from(b));
    }

    #[test]
    fn budget_exhaustion_gives_lower_bound() {
        let a = 1_099_511_627_791u64;
        let b = 1_099_511_628_401u64;
        let g = greatest_prime_factor(&(BigInt::from(a) * b), GpfOptions { budget: 10, mr_rounds: 8 });
        assert!(!g.complete);
        assert!(g.value > BigUint::from(TRIAL_LIMIT));
        assert!(g.to_string().starts_with(">="));
    }

    #[test]
    fn primality_large() {
        let p24 = BigUint::parse_bytes(b"1000000000000000000000007", 10).unwrap();
        assert_eq!(primality(&p24, 16), Primality::Prime);
        assert_eq!(primality(&(&p24 * 3u32), 16), Primality::Composite);
        let m67 = (BigUint::one() << 67u32) - 1u32;
        assert_eq!(primality(&m67, 16), Primality::Composite);
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert_eq!(primality(&m127, 16), Primality::ProbablePrime);
    }
}
