use super::cert::{CertConfig, EffectiveExponentCertificate, LedgerEntry, TheoremTag};
use super::{dyadic_down, first_true, index_above, iv, matveev_prefactor, refuse, yu_c0, yu_ln_c1, yu_prefactor};
use crate::algnum::{mahler_measure_upper, Tri};
use crate::ball::Round;
use crate::error::{Error, Result};
use crate::interval::{ln_bigint, Interval};
use crate::intpoly::{ratio_polynomial, IntPolynomial};
use crate::recurrence::{closed_form_with, degeneracy_witnesses, dominant_of, Dominant, RecurrenceSpec, Sequence};
use crate::sparts::{prime_factors, PrimeSet};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Valuation at a prime of any size; `None` for zero.
fn val(n: &BigInt, q: &BigUint) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let qb = BigInt::from(q.clone());
    let mut x = n.clone();
    let mut k = 0;
    loop {
        let (d, r) = x.div_rem(&qb);
        if !r.is_zero() {
            return Some(k);
        }
        x = d;
        k += 1;
    }
}

/// Root valuations of `x^2 - a1 x - a2` at `q`: `(smaller, larger)`.
fn root_valuations(a1: &BigInt, a2: &BigInt, q: &BigUint) -> (f64, f64) {
    let v2 = val(a2, q).expect("a2 != 0") as f64;
    match val(a1, q) {
        Some(v1) if (v1 as f64) < v2 / 2.0 => (v1 as f64, v2 - v1 as f64),
        _ => (v2 / 2.0, v2 / 2.0),
    }
}

pub fn effective_binary(spec: &RecurrenceSpec, s: &PrimeSet) -> Result<EffectiveExponentCertificate> {
    effective_binary_with(spec, s, &CertConfig::default())
}

pub fn effective_binary_with(
    spec: &RecurrenceSpec,
    s: &PrimeSet,
    cfg: &CertConfig,
) -> Result<EffectiveExponentCertificate> {
    if spec.order() != 2 {
        return refuse(format!("order {} is not 2", spec.order()));
    }
    let g = spec.char_poly();
    let wit = degeneracy_witnesses(&g)?;
    if !wit.is_empty() {
        return refuse(format!("degenerate sequence: the root ratio is a root of unity of order {}", wit[0]));
    }
    let (a1, a2) = (&spec.coeffs()[0], &spec.coeffs()[1]);
    let (u0, u1) = (&spec.init()[0], &spec.init()[1]);
    let disc: BigInt = a1 * a1 + BigInt::from(4) * a2;
    if disc.is_zero() {
        return refuse("repeated root");
    }
    let nb: BigInt = u1 * u1 - a1 * u0 * u1 - a2 * u0 * u0;
    if nb.is_zero() {
        return refuse("one of the two root coefficients vanishes");
    }

    let cf = closed_form_with(spec, 256, cfg.precision_ceiling)?;
    let abs_lo = |i: usize| cf.f[i][0].abs_lower();
    let abs_hi = |i: usize| cf.f[i][0].abs_upper().to_f64(Round::Up);
    if abs_lo(0).is_zero() || abs_lo(1).is_zero() {
        return Err(Error::Consistency("root coefficients not separated from zero".into()));
    }
    let ln_abs = |i: usize| abs_lo(i).ln_interval().lo;
    let dom = dominant_of(&cf.clusters);
    let (ell, complex) = match dom {
        Dominant::Index(i) => (cf.clusters[i].ln_modulus().unwrap(), false),
        Dominant::None if cf.clusters.iter().all(|c| c.is_real == Tri::No) => {
            let a = cf.clusters[0].ln_modulus().unwrap();
            let b = cf.clusters[1].ln_modulus().unwrap();
            (a.hull(&b), true)
        }
        _ => {
            return Err(Error::UndecidedClustering { precision: 256, detail: "dominance of a binary recurrence".into() })
        }
    };
    if ell.lo <= 0.0 {
        return refuse("no root of modulus above 1");
    }

    let qs = prime_factors(a2, cfg.gpf).ok_or_else(|| Error::Refused("could not factor a2 within the budget".into()))?;
    let mut w_all = iv(0.0);
    for q in &qs {
        let (w, _) = root_valuations(a1, a2, q);
        if w == 0.0 {
            continue;
        }
        w_all = w_all + iv(w) * ln_bigint(&BigInt::from(q.clone()));
    }
    let eta = ((iv(ell.lo) - w_all) / iv(2.0)).lo;
    if eta <= 0.0 {
        return refuse("prime factors of a2 absorb the whole growth rate");
    }
    let c1q = dyadic_down((eta / (2.0 * ell.hi)).min(0.5), 24);
    let c1 = c1q.numer().to_f64().unwrap() / c1q.denom().to_f64().unwrap();
    let c_u = (iv(abs_hi(0)) + iv(abs_hi(1))).ln().hi;
    let mut ledger = vec![
        LedgerEntry::new("route", "binary", ""),
        LedgerEntry::new("log_alpha", ell, "log of the largest root modulus"),
        LedgerEntry::new("W_all", w_all.hi, "sum over primes of a2 of min root valuation times log q"),
        LedgerEntry::new("eta", eta, "(log_alpha - W_all) / 2"),
        LedgerEntry::new("c2", (iv(ell.lo) - iv(eta)).lo, "log |u_n| >= c2 n for n >= n1"),
        LedgerEntry::new("c_U", c_u, ""),
    ];

    // log |u_n| >= (log_alpha - eta) n
    let n1 = if !complex {
        let (i, j) = match dom {
            Dominant::Index(i) => (i, 1 - i),
            _ => unreachable!(),
        };
        let gap = (iv(ell.lo) - iv(cf.clusters[j].modulus_upper().ln_interval().hi)).lo;
        if gap <= 0.0 {
            return Err(Error::Consistency("dominant gap not positive".into()));
        }
        let ratio = (iv(abs_hi(j)) / iv(abs_lo(i).to_f64(Round::Down))).hi;
        let la = ln_abs(i);
        let n1 = first_true(1.0, |n| {
            let tail = iv(ratio) * (iv(-gap) * iv(n)).exp();
            let rest = iv(1.0) - tail;
            if rest.lo <= 0.0 {
                return false;
            }
            (iv(eta) * iv(n) + iv(la) + rest.ln()).lo >= 0.0
        })?;
        ledger.push(LedgerEntry::new("growth_route", "direct", "dominant real root"));
        n1
    } else {
        let r = ratio_polynomial(&g)?;
        let pab = IntPolynomial::new(vec![-nb.clone(), -&disc * u0, disc.clone()]);
        let half_pi = (Interval::pi() / iv(2.0)).hi;
        let la1 = mahler_measure_upper(&r)?.value.max(half_pi).max(0.08);
        let la2 = (iv(2.0) * iv(mahler_measure_upper(&pab)?.value)).hi.max(half_pi).max(0.08);
        let k2 = matveev_prefactor(2, &[la1, la2]);
        let lb = ln_abs(0).min(ln_abs(1));
        let ratio = iv(la1) / iv(la2);
        let n1 = first_true(k2.hi / eta, |n| {
            let big_b = iv(1.0).max(&(iv(n) * ratio));
            let lhs = iv(eta) * iv(n) + iv(lb) - k2 * (iv(2.0) * Interval::e() * big_b).ln();
            lhs.lo >= 0.0
        })?;
        ledger.push(LedgerEntry::new("growth_route", "matveev", "complex conjugate roots"));
        ledger.push(LedgerEntry::new("growth_K", k2.hi, ""));
        n1
    };
    ledger.push(LedgerEntry::new("n1", n1, "growth threshold"));

    let ln_q = |q: u64| iv(q as f64).ln();
    let mut n0 = index_above(n1 - 1.0)?.max(BigUint::from(2u32));
    let mut fixed = iv(c1) * iv(c_u.max(0.0));
    // (prefactor * logA1 * logA2, q) for primes with equal root valuations
    let mut flat: Vec<(Interval, u64, f64, f64)> = Vec::new();
    let r = ratio_polynomial(&g)?;
    let pab = IntPolynomial::new(vec![-nb.clone(), -&disc * u0, disc.clone()]);
    let la1p = mahler_measure_upper(&r)?.value.max(1.0);
    let la2p = (iv(2.0) * iv(mahler_measure_upper(&pab)?.value)).hi.max(1.0);
    for &q in s.primes() {
        let qb = BigUint::from(q);
        let (w_lo, w_hi) = root_valuations(a1, a2, &qb);
        let v_nb = val(&nb, &qb).unwrap() as f64;
        let v_d = val(&disc, &qb).unwrap() as f64;
        fixed = fixed + iv(v_nb) * ln_q(q);
        if w_hi > w_lo {
            let nq = index_above(((iv(v_nb) + iv(v_d) / iv(2.0)) / iv(w_hi - w_lo)).hi)?;
            ledger.push(LedgerEntry::new(&format!("r_{q}"), format!("v(Nb) + {w_lo} n for n >= {nq}"), "distinct root valuations"));
            n0 = n0.max(nq);
        } else {
            let pref = yu_prefactor(q, 2, 2) * iv(la1p) * iv(la2p);
            ledger.push(LedgerEntry::new(&format!("r_{q}"), format!("Yu, prefactor {:e}", pref.hi), "equal root valuations"));
            flat.push((pref, q, la1p, la2p));
        }
    }
    let c0_21 = yu_c0(2, 1);
    let ln_c1_22 = yu_ln_c1(2, 2);
    let y_sum = |n: f64| {
        let mut acc = iv(0.0);
        for (pref, q, la1, la2) in &flat {
            let t = iv(2.0).max(&(iv(n.max(3.0)) / (c0_21 * iv(*la1) * iv(*la2))));
            let ln_t = t.ln() + ln_c1_22 + iv(6.0) * ln_q(*q) + iv(*la1).ln();
            acc = acc + *pref * ln_t.max(&iv(1.0));
        }
        acc
    };
    let k_s: f64 = flat.iter().map(|f| f.0.hi).sum();
    let tail = first_true((2.0 * k_s / eta).max(16.0), |n| {
        (iv(eta / 2.0) * iv(n) - fixed - y_sum(n)).lo >= 0.0
    })?;
    ledger.push(LedgerEntry::new("n_tail", tail, "(eta / 2) n >= S-dependent remainder"));
    n0 = n0.max(index_above(tail - 1.0)?);
    ledger.push(LedgerEntry::new("excluded", "u_n = 0", ""));

    Ok(EffectiveExponentCertificate {
        theorem: TheoremTag::Binary,
        c1: c1q,
        n0,
        primes: s.clone(),
        padic_prime: None,
        source: Sequence::Recurrence(spec.clone()),
        ledger,
    })
}
