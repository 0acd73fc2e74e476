//! The limit exponent delta of `[u_n]_S` against `|u_n|`, and the empirical
//! ratio `log [u_n]_S / log |u_n|` that approaches it.

use crate::algnum::DEFAULT_PRECISION_CEILING;
use crate::ball::Dyadic;
use crate::error::{Error, Result};
use crate::interval::{ln_abs_bigint, Interval};
use crate::intpoly::{newton_polygon, squarefree_decomposition};
use crate::recurrence::{degeneracy_witnesses, settled_roots, RecurrenceSpec};
use crate::sparts::{is_trivial_term, s_part, PrimeSet};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct DeltaReport {
    pub delta: Interval,
    /// Enclosure of the largest root modulus.
    pub a: Interval,
    /// `(p, e)` with `A_p = p^e`, one entry per prime of S.
    pub a_p: Vec<(u64, Ratio<i64>)>,
    pub gcd_shortcut: bool,
}

pub fn compute_delta(spec: &RecurrenceSpec, s: &PrimeSet) -> Result<DeltaReport> {
    compute_delta_with(spec, s, DEFAULT_PRECISION_CEILING)
}

pub fn compute_delta_with(spec: &RecurrenceSpec, s: &PrimeSet, ceiling: u64) -> Result<DeltaReport> {
    let g = spec.char_poly();
    let wit = degeneracy_witnesses(&g)?;
    if !wit.is_empty() {
        return Err(Error::Precondition(format!("degenerate sequence (ratio of order {})", wit[0])));
    }
    let (roots, _) = settled_roots(spec, ceiling)?;
    if roots.len() < 2 {
        return Err(Error::Precondition("a single distinct root (t = 1)".into()));
    }
    let lo = roots.iter().map(|c| c.modulus_lower()).max().unwrap();
    let hi = roots.iter().map(|c| c.modulus_upper()).max().unwrap();
    if lo <= Dyadic::from_int(1) {
        return Err(Error::Precondition("largest root modulus not certified above 1".into()));
    }
    let a = Interval::new(lo.ln_interval().lo.exp(), hi.ln_interval().hi.exp());
    let ln_a = Interval::new(lo.ln_interval().lo, hi.ln_interval().hi);

    let sq = squarefree_decomposition(&g)?.squarefree_part();
    let mut a_p = Vec::new();
    for &p in s.primes() {
        let poly = newton_polygon(&sq, p)?;
        let v = poly.min_slope().unwrap_or_else(Ratio::zero);
        a_p.push((p, -v));
    }

    let gcd = spec.coeffs().iter().fold(s.product(), |g, a| g.gcd(a));
    if gcd.is_one() {
        return Ok(DeltaReport { delta: Interval::point(0.0), a, a_p, gcd_shortcut: true });
    }
    let mut num = Interval::point(0.0);
    for &(p, e) in &a_p {
        let ln_p = Interval::point(p as f64).ln();
        let ex = Interval::point(*e.numer() as f64) / Interval::point(*e.denom() as f64);
        num = num - ex * ln_p;
    }
    let delta = num / ln_a;
    let delta = Interval::new(delta.lo.max(0.0), delta.hi);
    Ok(DeltaReport { delta, a, a_p, gcd_shortcut: false })
}

/// `log [u]_S / log |u|`, or `None` for `u` in {-1, 0, 1}.
pub fn ratio_of(u: &BigInt, s: &PrimeSet) -> Option<f64> {
    if is_trivial_term(u) {
        return None;
    }
    let d = s_part(u, s).ok()?;
    if d.s_part.is_one() {
        return Some(0.0);
    }
    Some(ln_abs_bigint(&d.s_part).mid() / ln_abs_bigint(u).mid())
}

pub fn empirical_ratio(spec: &RecurrenceSpec, s: &PrimeSet, n: u64) -> Option<f64> {
    ratio_of(&spec.term(n), s)
}

/// Largest `|ratio - delta|` in consecutive blocks of `window` indices;
/// skipped terms are ignored.
pub fn block_deviation(ratios: &[Option<f64>], delta: f64, window: usize) -> Vec<f64> {
    ratios
        .chunks(window.max(1))
        .map(|b| b.iter().flatten().map(|r| (r - delta).abs()).fold(0.0, f64::max))
        .collect()
}

/// Block maxima trend down: the last block is no larger than the first and
/// the running maximum of later blocks never exceeds the first block.
pub fn trend_is_decreasing(blocks: &[f64]) -> bool {
    match (blocks.first(), blocks.last()) {
        (Some(f), Some(l)) => l <= f && blocks.iter().all(|b| b <= f),
        _ => true,
    }
}
