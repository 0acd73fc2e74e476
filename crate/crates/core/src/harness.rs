//! Scans of S-parts over index ranges, certificate verification and output.

use crate::bounds::{gpf_threshold_curve, stewart_curve, EffectiveExponentCertificate, TheoremTag};
use crate::delta::ratio_of;
use crate::error::{Error, Result};
use crate::interval::{ln_abs_bigint, Interval};
use crate::recurrence::{dominant_envelope, RecurrenceSpec, Sequence};
use crate::sparts::{decimal_digits, greatest_prime_factor, is_trivial_term, s_part, Gpf, GpfOptions, PrimeSet};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use std::io::Write;

/// Indices per work unit in the chunked scans.
pub const DEFAULT_CHUNK: u64 = 64;

/// Largest index the verifier computes terms for in full.
pub const EXACT_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub n: u64,
    pub digits: usize,
    /// Empty when `u_n = 0`.
    pub exponents: Vec<u64>,
    pub cofactor_digits: Option<usize>,
    /// `None` marks a skipped term, `u_n` in {-1, 0, 1}.
    pub ratio: Option<f64>,
    pub gpf: Option<Gpf>,
    pub stewart: Option<f64>,
    pub gpf_threshold: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Factor every term when set.
    pub gpf: Option<GpfOptions>,
    pub epsilon: f64,
    pub chunk: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { gpf: None, epsilon: 0.5, chunk: DEFAULT_CHUNK }
    }
}

fn row(n: u64, u: &BigInt, s: &PrimeSet, opts: &ScanOptions) -> ScanRow {
    let (exponents, cofactor_digits) = match s_part(u, s) {
        Ok(d) => (d.exponents, Some(decimal_digits(&d.cofactor))),
        Err(_) => (Vec::new(), None),
    };
    let curves = n >= 16;
    ScanRow {
        n,
        digits: decimal_digits(u),
        exponents,
        cofactor_digits,
        ratio: ratio_of(u, s),
        gpf: opts.gpf.map(|g| greatest_prime_factor(u, g)),
        stewart: if curves { stewart_curve(n, 1.0).ok() } else { None },
        gpf_threshold: if curves { gpf_threshold_curve(n, opts.epsilon).ok() } else { None },
    }
}

fn check_range(lo: u64, hi: u64, opts: &ScanOptions) -> Result<()> {
    if hi < lo {
        return Err(Error::Domain(format!("empty range [{lo}, {hi}]")));
    }
    if !(opts.epsilon > 0.0 && opts.epsilon < 1.0) {
        return Err(Error::Domain("epsilon must lie in (0, 1)".into()));
    }
    if opts.chunk == 0 {
        return Err(Error::Domain("chunk size must be positive".into()));
    }
    Ok(())
}

fn scan_chunk(seq: &Sequence, s: &PrimeSet, lo: u64, hi: u64, opts: &ScanOptions) -> Result<Vec<ScanRow>> {
    match seq {
        Sequence::Recurrence(r) => {
            Ok(r.iter_from(lo).zip(lo..=hi).map(|(u, n)| row(n, &u, s, opts)).collect())
        }
        Sequence::FloorPower(f) => (lo..=hi).map(|n| Ok(row(n, &f.term(n)?, s, opts))).collect(),
    }
}

fn chunks(lo: u64, hi: u64, size: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = lo;
    loop {
        let b = a.saturating_add(size - 1).min(hi);
        out.push((a, b));
        if b == hi {
            return out;
        }
        a = b + 1;
    }
}

#[cfg(feature = "parallel")]
fn map_chunks<T: Send>(
    parts: Vec<(u64, u64)>,
    f: impl Fn(u64, u64) -> Result<Vec<T>> + Sync + Send,
) -> Result<Vec<T>> {
    use rayon::prelude::*;
    let done: Result<Vec<Vec<T>>> = parts.into_par_iter().map(|(a, b)| f(a, b)).collect();
    Ok(done?.into_iter().flatten().collect())
}

#[cfg(not(feature = "parallel"))]
fn map_chunks<T: Send>(
    parts: Vec<(u64, u64)>,
    f: impl Fn(u64, u64) -> Result<Vec<T>> + Sync + Send,
) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (a, b) in parts {
        out.extend(f(a, b)?);
    }
    Ok(out)
}

/// One row per index in `[lo, hi]`, computed in a single pass.
pub fn scan_sequential(seq: &Sequence, s: &PrimeSet, lo: u64, hi: u64, opts: &ScanOptions) -> Result<Vec<ScanRow>> {
    check_range(lo, hi, opts)?;
    scan_chunk(seq, s, lo, hi, opts)
}

/// Same rows as [`scan_sequential`]; chunks are seeded by random access and
/// run on the rayon pool when the `parallel` feature is on.
pub fn scan_parallel(seq: &Sequence, s: &PrimeSet, lo: u64, hi: u64, opts: &ScanOptions) -> Result<Vec<ScanRow>> {
    check_range(lo, hi, opts)?;
    map_chunks(chunks(lo, hi, opts.chunk), |a, b| scan_chunk(seq, s, a, b, opts))
}

pub fn scan(seq: &Sequence, s: &PrimeSet, lo: u64, hi: u64, opts: &ScanOptions) -> Result<Vec<ScanRow>> {
    if cfg!(feature = "parallel") {
        scan_parallel(seq, s, lo, hi, opts)
    } else {
        scan_sequential(seq, s, lo, hi, opts)
    }
}

pub const CSV_HEADER: &str = "n,digits,exponents,cofactor_digits,ratio,gpf,stewart,gpf_threshold";

fn opt<T: fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

fn opt_f(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.12}")).unwrap_or_default()
}

impl ScanRow {
    pub fn csv_line(&self) -> String {
        let e: Vec<String> = self.exponents.iter().map(|r| r.to_string()).collect();
        let ratio = match self.ratio {
            Some(r) => format!("{r:.12}"),
            None => "skip".into(),
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.digits,
            e.join(";"),
            opt(&self.cofactor_digits),
            ratio,
            opt(&self.gpf),
            opt_f(self.stewart),
            opt_f(self.gpf_threshold)
        )
    }
}

pub fn write_csv<W: Write>(rows: &[ScanRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RowWire {
    n: u64,
    digits: usize,
    exponents: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cofactor_digits: Option<usize>,
    ratio: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    gpf: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stewart: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gpf_threshold: Option<f64>,
}

#[derive(Serialize)]
struct RowsWire {
    rows: Vec<RowWire>,
}

/// TOML with one `[[rows]]` table per row.
pub fn rows_to_toml(rows: &[ScanRow]) -> Result<String> {
    let w = RowsWire {
        rows: rows
            .iter()
            .map(|r| RowWire {
                n: r.n,
                digits: r.digits,
                exponents: r.exponents.clone(),
                cofactor_digits: r.cofactor_digits,
                ratio: r.ratio.map(|x| format!("{x:.12}")).unwrap_or_else(|| "skip".into()),
                gpf: r.gpf.as_ref().map(|g| g.to_string()),
                stewart: r.stewart,
                gpf_threshold: r.gpf_threshold,
            })
            .collect(),
    };
    toml::to_string(&w).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMethod {
    /// Full terms and exact S-parts.
    Exact,
    /// Valuations from residues, sizes from the dominant envelope.
    Modular,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem_tag: TheoremTag,
    pub c1: String,
    pub n0: String,
    pub from: String,
    pub to: String,
    pub method: VerifyMethod,
    pub checked: u64,
    pub skipped: u64,
    pub violations: Vec<String>,
    pub undecided: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }

    /// Every index checked and none violated.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.undecided.is_empty()
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} certificate, n in [{}, {}] ({:?}): {} checked, {} skipped, {} violations, {} undecided",
            self.theorem_tag,
            self.from,
            self.to,
            self.method,
            self.checked,
            self.skipped,
            self.violations.len(),
            self.undecided.len()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Holds,
    Violated,
    Skipped,
    Undecided,
}

fn c1_f64(c1: &BigRational) -> Interval {
    Interval::from_bigint(c1.numer()) / Interval::from_bigint(c1.denom())
}

/// `|u|/[u]_S >= |u|^c1` for a full term.
fn check_exact(u: &BigInt, s: &PrimeSet, c1: &BigRational) -> Outcome {
    if is_trivial_term(u) {
        return Outcome::Skipped;
    }
    let d = s_part(u, s).expect("non-zero term");
    let m = d.cofactor.abs();
    let ln_u = ln_abs_bigint(u);
    let ln_m = if m.is_one() { Interval::point(0.0) } else { ln_abs_bigint(&m) };
    let rhs = c1_f64(c1) * ln_u;
    if ln_m.lo >= rhs.hi {
        return Outcome::Holds;
    }
    if ln_m.hi < rhs.lo {
        return Outcome::Violated;
    }
    // M^q >= |u|^p with c1 = p / q
    let (p, q) = (c1.numer(), c1.denom());
    let cost = (p.bits() as f64).exp2() * u.bits() as f64 + (q.bits() as f64).exp2() * m.bits() as f64;
    if !(cost < 4e7) {
        return Outcome::Undecided;
    }
    let (p, q) = (p.to_u32().unwrap(), q.to_u32().unwrap());
    if num_traits::pow(m, q as usize) >= num_traits::pow(u.abs(), p as usize) {
        Outcome::Holds
    } else {
        Outcome::Violated
    }
}

/// Exact path: full terms, in chunks.
fn verify_exact(cert: &EffectiveExponentCertificate, lo: u64, hi: u64) -> Result<Vec<(u64, Outcome)>> {
    let s = &cert.primes;
    let c1 = &cert.c1;
    map_chunks(chunks(lo, hi, DEFAULT_CHUNK), |a, b| match &cert.source {
        Sequence::Recurrence(r) => Ok(r.iter_from(a).zip(a..=b).map(|(u, n)| (n, check_exact(&u, s, c1))).collect()),
        Sequence::FloorPower(fp) => (a..=b)
            .map(|n| {
                if let (Some(l), Some(t)) = (fp.lambda.as_rational(), fp.theta.as_rational()) {
                    let e = n as u32;
                    let num = l.numer() * t.numer().pow(e);
                    let den = l.denom() * t.denom().pow(e);
                    if num.is_multiple_of(&den) {
                        return Ok((n, Outcome::Skipped));
                    }
                }
                match fp.term(n) {
                    Ok(u) => Ok((n, check_exact(&u, s, c1))),
                    Err(Error::FloorUndecided { .. }) => Ok((n, Outcome::Undecided)),
                    Err(e) => Err(e),
                }
            })
            .collect(),
    })
}

/// `v_q(u_n)` from residues modulo growing powers of `q`; `None` when
/// `u_n = 0` follows from `q^E > |u_n|`.
fn valuation_mod(r: &RecurrenceSpec, n: u128, q: u64, ln_u_hi: f64) -> Option<u64> {
    let qb = BigInt::from(q);
    let ln_q = Interval::point(q as f64).ln().lo;
    let mut e = 64u32;
    loop {
        let m = num_traits::pow(qb.clone(), e as usize);
        let res = r.state_mod(n, &m).swap_remove(0);
        if !res.is_zero() {
            return Some(crate::intpoly::valuation(&res, q));
        }
        if e as f64 * ln_q > ln_u_hi {
            return None;
        }
        e *= 2;
    }
}

/// Modular path for recurrences with a simple dominant root.
fn verify_modular(cert: &EffectiveExponentCertificate, r: &RecurrenceSpec, lo: u128, hi: u128) -> Result<Vec<(u128, Outcome)>> {
    let env = dominant_envelope(r)?;
    let cf = &env.closed_form;
    if cf.f[env.dominant].len() != 1 {
        return Err(Error::Refused("the dominant root is repeated".into()));
    }
    let c0 = &cf.f[env.dominant][0];
    let c0_lo = c0.abs_lower();
    if c0_lo.is_zero() {
        return Err(Error::Refused("dominant coefficient not separated from zero".into()));
    }
    let ln_c0 = Interval::new(c0_lo.ln_interval().lo, c0.abs_upper().ln_interval().hi);
    let ln_c = Interval::point(env.c).ln();
    let ln_up = (Interval::point(c0.abs_upper().to_f64(crate::ball::Round::Up)) + Interval::point(env.c)).ln();
    let ell = env.ln_alpha;
    let theta = Interval::point(env.theta);
    let c1 = c1_f64(&cert.c1);
    let lnq: Vec<Interval> = cert.primes.primes().iter().map(|&q| Interval::point(q as f64).ln()).collect();

    let span = (hi - lo) as u64;
    let outcome = |n: u128| -> Outcome {
        let nn = Interval::from_u128(n);
        let a = ln_c0 + nn * Interval::point(ell.lo);
        let b = ln_c + theta * nn * Interval::point(ell.hi);
        let gap = a - b;
        if gap.lo <= 1.0 {
            return Outcome::Undecided;
        }
        let ln_u_lo = (a + (Interval::point(1.0) - (-gap).exp()).ln()).lo;
        let ln_u_hi = (ln_up + nn * Interval::point(ell.hi)).hi;
        let mut sp = Interval::point(0.0);
        for (i, &q) in cert.primes.primes().iter().enumerate() {
            match valuation_mod(r, n, q, ln_u_hi) {
                Some(v) => sp = sp + Interval::point(v as f64) * lnq[i],
                None => return Outcome::Skipped,
            }
        }
        let ln_m = Interval::new(ln_u_lo, ln_u_hi) - sp;
        let rhs = c1 * Interval::new(ln_u_lo, ln_u_hi);
        if ln_m.lo >= rhs.hi {
            Outcome::Holds
        } else if ln_m.hi < rhs.lo {
            Outcome::Violated
        } else {
            Outcome::Undecided
        }
    };
    map_chunks(chunks(0, span, DEFAULT_CHUNK), |a, b| {
        Ok((a..=b).map(|k| lo + k as u128).map(|n| (n, outcome(n))).collect())
    })
}

/// Checks `[u_n]_S <= |u_n|^(1 - c1)` for the `window` indices starting at
/// `N0`, skipping `u_n` in {-1, 0, 1}.
pub fn verify_certificate(cert: &EffectiveExponentCertificate, window: u64) -> Result<VerificationReport> {
    if window == 0 {
        return Err(Error::Domain("window must be at least 1".into()));
    }
    let lo_big = cert.n0.clone();
    let hi_big = &lo_big + BigUint::from(window - 1);
    let mut report = VerificationReport {
        theorem_tag: cert.theorem,
        c1: format!("{}/{}", cert.c1.numer(), cert.c1.denom()),
        n0: cert.n0.to_string(),
        from: lo_big.to_string(),
        to: hi_big.to_string(),
        method: VerifyMethod::Exact,
        checked: 0,
        skipped: 0,
        violations: Vec::new(),
        undecided: Vec::new(),
        note: None,
    };
    let tally = |n: String, o: Outcome, rep: &mut VerificationReport| match o {
        Outcome::Holds => rep.checked += 1,
        Outcome::Violated => {
            rep.checked += 1;
            rep.violations.push(n)
        }
        Outcome::Skipped => rep.skipped += 1,
        Outcome::Undecided => rep.undecided.push(n),
    };
    let exact_hi = hi_big.to_u64().filter(|&h| h <= EXACT_LIMIT);
    if let Some(hi) = exact_hi {
        let lo = lo_big.to_u64().unwrap();
        for (n, o) in verify_exact(cert, lo, hi)? {
            tally(n.to_string(), o, &mut report);
        }
        return Ok(report);
    }
    report.method = VerifyMethod::Modular;
    let (lo, hi) = match (lo_big.to_u128(), hi_big.to_u128()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Refused("N0 beyond 128 bits".into())),
    };
    match &cert.source {
        Sequence::Recurrence(r) => match verify_modular(cert, r, lo, hi) {
            Ok(rows) => {
                for (n, o) in rows {
                    tally(n.to_string(), o, &mut report);
                }
            }
            Err(Error::Refused(m)) | Err(Error::Precondition(m)) => {
                report.note = Some(format!("modular check unavailable: {m}"));
                for k in 0..window {
                    report.undecided.push((lo + k as u128).to_string());
                }
            }
            Err(e) => return Err(e),
        },
        Sequence::FloorPower(_) => {
            report.note = Some("floor-power terms at these indices are out of reach".into());
            for k in 0..window {
                report.undecided.push((lo + k as u128).to_string());
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Sequence {
        Sequence::Recurrence(RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap())
    }

    #[test]
    fn fibonacci_rows() {
        let s = PrimeSet::parse("2,3").unwrap();
        let rows = scan_sequential(&fib(), &s, 10, 12, &ScanOptions::default()).unwrap();
        assert_eq!(rows[0].exponents, vec![0, 0]);
        assert_eq!(rows[2].exponents, vec![4, 2]);
        assert_eq!(rows[2].cofactor_digits, Some(1));
        assert_eq!(rows[2].ratio, Some(1.0));
    }

    #[test]
    fn parallel_matches_sequential() {
        let s = PrimeSet::parse("2,3,5").unwrap();
        let opts = ScanOptions { chunk: 7, ..Default::default() };
        let a = scan_sequential(&fib(), &s, 0, 200, &opts).unwrap();
        let b = scan_parallel(&fib(), &s, 0, 200, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(chunks(5, 5, 3), vec![(5, 5)]);
    }

    #[test]
    fn csv_shape() {
        let mut out = Vec::new();
        write_csv(&[], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), format!("{CSV_HEADER}\n"));
        let s = PrimeSet::parse("2").unwrap();
        let rows = scan_sequential(&fib(), &s, 0, 1, &ScanOptions::default()).unwrap();
        assert_eq!(rows[0].csv_line(), "0,1,,,skip,,,");
        assert_eq!(rows[1].csv_line(), "1,1,0,1,skip,,,");
    }

    #[test]
    fn synthetic_certificate_fails() {
        let cert = EffectiveExponentCertificate {
            theorem: TheoremTag::Archimedean,
            c1: BigRational::new(999.into(), 1000.into()),
            n0: BigUint::from(3u32),
            primes: PrimeSet::parse("2,3").unwrap(),
            padic_prime: None,
            source: fib(),
            ledger: vec![],
        };
        let rep = verify_certificate(&cert, 10).unwrap();
        assert_eq!(rep.from, "3");
        assert_eq!(rep.to, "12");
        assert!(rep.violations.contains(&"12".to_string()));
        let one = verify_certificate(&cert, 1).unwrap();
        assert_eq!(one.checked + one.skipped + one.undecided.len() as u64, 1);
    }
}
