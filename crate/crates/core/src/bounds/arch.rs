use super::cert::{CertConfig, EffectiveExponentCertificate, LedgerEntry, TheoremTag};
use super::{coefficient_annihilator, dyadic_down, index_above, iv, matveev_prefactor, refuse};
use crate::algnum::{mahler_measure_upper, rational_height};
use crate::ball::Round;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::intpoly::squarefree_decomposition;
use crate::recurrence::{degeneracy_witnesses, dominant_envelope_with, AlgebraicReal, FloorPowerSpec, RecurrenceSpec, Sequence};
use crate::sparts::PrimeSet;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Inputs of the chain `|u_n - c0 alpha^n| <= C |alpha|^(theta n)`.
struct Chain {
    la_q: Vec<f64>,
    la_alpha: f64,
    d: u32,
    ell: Interval,
    theta: f64,
    ln_c: Interval,
    ln_c0: Interval,
    c_u: f64,
    kappa: f64,
    k_min: u64,
}

fn solve(ch: &Chain, ledger: &mut Vec<LedgerEntry>) -> Result<(BigRational, BigUint)> {
    let nlogs = ch.la_q.len() + 2;
    let mut la = ch.la_q.clone();
    la.push(ch.la_alpha);
    let k = matveev_prefactor(ch.d, &la);
    let en = Interval::e() * iv(nlogs as f64);
    let top = (iv(1.0) - iv(ch.theta)) * iv(ch.ell.lo);
    if top.lo <= 0.0 {
        return refuse("envelope leaves no decay");
    }
    let ell_hi = ch.ell.hi;
    let rho_of = |c1: f64| {
        let l1 = c1 * ell_hi;
        let l0 = c1 * ch.c_u + ch.kappa;
        1f64.max(ch.la_alpha / l1).max(ch.c_u / l0).max(ell_hi / l1)
    };
    let mut c1 = top.lo / (2.0 * k.hi * en.hi.ln() * ell_hi);
    for _ in 0..200 {
        let next = top.lo / (2.0 * k.hi * (en.hi * rho_of(c1)).ln() * ell_hi);
        let done = (next - c1).abs() <= 1e-14 * c1;
        c1 = next;
        if done {
            break;
        }
    }
    if !(c1 > 0.0 && c1.is_finite()) {
        return refuse("exponent fixed point failed");
    }
    let c1q = dyadic_down(0.999 * c1.min(0.5), 24);
    let c1f = c1q.numer().to_f64().unwrap() / c1q.denom().to_f64().unwrap();

    let ci = iv(c1f);
    let l1 = ci * iv(ell_hi);
    let l0 = ci * iv(ch.c_u) + iv(ch.kappa);
    if l0.lo <= 0.0 {
        return Err(Error::Consistency("height offset not positive".into()));
    }
    let rho = iv(1.0).max(&(iv(ch.la_alpha) / l1)).max(&(iv(ch.c_u) / l0)).max(&(iv(ell_hi) / l1));
    let lg = (en * rho).ln();
    let s1 = top - k * lg * l1;
    if s1.lo <= 0.0 {
        return refuse("linear term of the chain is not positive");
    }
    let s0 = ch.ln_c0 - ch.ln_c - k * lg * l0;
    let x = -s0 / Interval::point(s1.lo);
    let n0 = index_above(x.hi)?.max(BigUint::from(ch.k_min));

    ledger.push(LedgerEntry::new("theta", ch.theta, "envelope exponent"));
    ledger.push(LedgerEntry::new("log_C", ch.ln_c.hi, "envelope constant, log"));
    ledger.push(LedgerEntry::new("log_alpha", ch.ell, "log of the dominant modulus"));
    ledger.push(LedgerEntry::new("log_abs_c0", ch.ln_c0, "log of the dominant coefficient"));
    ledger.push(LedgerEntry::new("D", ch.d, "field degree bound"));
    ledger.push(LedgerEntry::new("logA_q", format!("{:?}", ch.la_q), ""));
    ledger.push(LedgerEntry::new("logA_alpha", ch.la_alpha, ""));
    ledger.push(LedgerEntry::new("kappa", ch.kappa, "logA_gamma <= log M + kappa"));
    ledger.push(LedgerEntry::new("c_U", ch.c_u, "log |u_n| <= c_U + n log_alpha"));
    ledger.push(LedgerEntry::new("K", k.hi, "Matveev prefactor without the last logarithm"));
    ledger.push(LedgerEntry::new("rho", rho.hi, "B / logA_gamma bound"));
    ledger.push(LedgerEntry::new("slope", s1.lo, "coefficient of n"));
    ledger.push(LedgerEntry::new("intercept", s0.lo, "constant term"));
    ledger.push(LedgerEntry::new("c1_fixed_point", format!("{c1:e}"), "before rounding down"));
    Ok((c1q, n0))
}

fn la_q(s: &PrimeSet) -> Vec<f64> {
    s.primes().iter().map(|&q| Interval::point(q as f64).ln().hi).collect()
}

pub fn effective_archimedean(spec: &RecurrenceSpec, s: &PrimeSet) -> Result<EffectiveExponentCertificate> {
    effective_archimedean_with(spec, s, &CertConfig::default())
}

pub fn effective_archimedean_with(
    spec: &RecurrenceSpec,
    s: &PrimeSet,
    cfg: &CertConfig,
) -> Result<EffectiveExponentCertificate> {
    let g = spec.char_poly();
    let wit = degeneracy_witnesses(&g)?;
    if !wit.is_empty() {
        return refuse(format!("degenerate sequence: a root ratio is a root of unity of order {}", wit[0]));
    }
    let env = match dominant_envelope_with(spec, 256, cfg.precision_ceiling) {
        Ok(e) => e,
        Err(Error::Precondition(m)) => return refuse(m),
        Err(e) => return Err(e),
    };
    let cf = &env.closed_form;
    let dom = &cf.clusters[env.dominant];
    if dom.multiplicity != 1 {
        return refuse("the dominant root is repeated");
    }
    let c0 = &cf.f[env.dominant][0];
    let lo = c0.abs_lower();
    if lo.is_zero() {
        return refuse("dominant coefficient not certified non-zero");
    }
    let ln_c0 = Interval::new(lo.ln_interval().lo, c0.abs_upper().ln_interval().hi);
    let c0_hi = c0.abs_upper().to_f64(Round::Up);

    let dec = squarefree_decomposition(&g)?;
    let g_fac = &dec.factors[dom.factor].0;
    let d = g_fac.deg() as u32;
    let ann = coefficient_annihilator(g_fac, &g, &spec.p_tilde())?;
    let h_c = mahler_measure_upper(&ann)?.value;
    let ell = env.ln_alpha;
    let sign_pi = if dom.re.is_negative() { Interval::pi().hi } else { 0.0 };
    let la_alpha = mahler_measure_upper(g_fac)?.value.max((iv(ell.hi) + iv(sign_pi)).hi).max(0.16);
    let kappa = h_c.max((iv(ln_c0.lo.abs().max(ln_c0.hi.abs())) + Interval::pi()).hi).max(2.0);
    let c_u = (iv(c0_hi) + iv(env.c)).ln().hi;
    let chain = Chain {
        la_q: la_q(s),
        la_alpha,
        d,
        ell,
        theta: env.theta,
        ln_c: iv(env.c).ln(),
        ln_c0,
        c_u,
        kappa,
        k_min: spec.order() as u64,
    };
    let mut ledger = vec![
        LedgerEntry::new("route", "archimedean", "Matveev bound on u_n / (c0 alpha^n) - 1"),
        LedgerEntry::new("H_c0", h_c, "log Mahler measure of an annihilator of c0"),
        LedgerEntry::new("excluded", "u_n = 0 or u_n = c0 alpha^n", ""),
    ];
    let (c1, n0) = solve(&chain, &mut ledger)?;
    Ok(EffectiveExponentCertificate {
        theorem: TheoremTag::Archimedean,
        c1,
        n0,
        primes: s.clone(),
        padic_prime: None,
        source: Sequence::Recurrence(spec.clone()),
        ledger,
    })
}

pub fn effective_floorpower(fp: &FloorPowerSpec, s: &PrimeSet) -> Result<EffectiveExponentCertificate> {
    effective_floorpower_with(fp, s, &CertConfig::default())
}

pub fn effective_floorpower_with(
    fp: &FloorPowerSpec,
    s: &PrimeSet,
    cfg: &CertConfig,
) -> Result<EffectiveExponentCertificate> {
    let ceil = cfg.precision_ceiling;
    if let Some(l) = fp.integral_power(ceil)? {
        return refuse(format!("theta^{l} is an integer"));
    }
    let lam = fp.lambda.ball(128, ceil)?;
    if lam.contains_zero() {
        return refuse("lambda not certified non-zero");
    }
    let ln_lam = Interval::new(lam.abs_lower().ln_interval().lo, lam.abs_upper().ln_interval().hi);
    let th = fp.theta.ball(128, ceil)?;
    let ell = Interval::new(th.abs_lower().ln_interval().lo, th.abs_upper().ln_interval().hi);
    if ell.lo <= 0.0 {
        return refuse("theta not certified above 1");
    }
    let h_lam = match &fp.lambda {
        AlgebraicReal::Rational(q) => rational_height(q)?.value,
        AlgebraicReal::Root { .. } => mahler_measure_upper(&fp.lambda.poly())?.value,
    };
    let la_theta = match &fp.theta {
        AlgebraicReal::Rational(q) => rational_height(q)?.value,
        AlgebraicReal::Root { .. } => mahler_measure_upper(&fp.theta.poly())?.value,
    };
    let kappa = h_lam.max((iv(ln_lam.lo.abs().max(ln_lam.hi.abs())) + Interval::pi()).hi).max(2.0);
    let lam_hi = lam.abs_upper().to_f64(Round::Up);
    let c_u = (iv(lam_hi) + iv(1.0)).ln().hi;

    // v_n = 0 needs |lambda| theta^n < 1; lambda theta^n in Z needs
    // den(theta)^n | num(lambda) in the rational case.
    let small = if ln_lam.lo < 0.0 { (-ln_lam.lo / ell.lo).floor() as u64 + 1 } else { 1 };
    let integral = match (&fp.lambda, &fp.theta) {
        (AlgebraicReal::Rational(l), AlgebraicReal::Rational(_)) => l.numer().bits() + 1,
        _ => 1,
    };
    let chain = Chain {
        la_q: la_q(s),
        la_alpha: la_theta.max(ell.hi).max(0.16),
        d: fp.field_degree() as u32,
        ell,
        theta: 0.0,
        ln_c: Interval::point(0.0),
        ln_c0: ln_lam,
        c_u,
        kappa,
        k_min: small.max(integral),
    };
    let excluded = if fp.is_rational() { "none beyond n0" } else { "n with lambda theta^n in Z" };
    let mut ledger = vec![
        LedgerEntry::new("route", "floorpower", "Matveev bound on v_n / (lambda theta^n) - 1, |v_n - lambda theta^n| < 1"),
        LedgerEntry::new("h_lambda", h_lam, ""),
        LedgerEntry::new("excluded", excluded, ""),
    ];
    let (c1, n0) = solve(&chain, &mut ledger)?;
    Ok(EffectiveExponentCertificate {
        theorem: TheoremTag::Floorpower,
        c1,
        n0,
        primes: s.clone(),
        padic_prime: None,
        source: Sequence::FloorPower(fp.clone()),
        ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_certificate() {
        let fib = RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap();
        let c = effective_archimedean(&fib, &PrimeSet::parse("2,3").unwrap()).unwrap();
        let c1 = c.c1_f64();
        assert!(c1 > 0.0 && c1 < 1e-6, "{c1}");
        assert!(c.n0 > BigUint::from(2u32));
        let again = effective_archimedean(&fib, &PrimeSet::parse("2,3").unwrap()).unwrap();
        assert_eq!(again.c1, c.c1);
        assert_eq!(again.n0, c.n0);
    }

    #[test]
    fn refusals() {
        let deg = RecurrenceSpec::from_i64(&[0, 1], &[1, 2]).unwrap();
        assert!(matches!(effective_archimedean(&deg, &PrimeSet::parse("2").unwrap()), Err(Error::Refused(_))));
        // x^2 - 2x + 2 has no dominant root
        let cx = RecurrenceSpec::from_i64(&[2, -2], &[0, 1]).unwrap();
        assert!(matches!(effective_archimedean(&cx, &PrimeSet::parse("2").unwrap()), Err(Error::Refused(_))));
    }

    #[test]
    fn floor_power_certificate() {
        let fp = FloorPowerSpec::rational(1, 1, 3, 2).unwrap();
        let c = effective_floorpower(&fp, &PrimeSet::parse("2,3").unwrap()).unwrap();
        assert!(c.c1_f64() > 0.0);
        assert!(c.n0 >= BigUint::from(2u32));
    }
}
