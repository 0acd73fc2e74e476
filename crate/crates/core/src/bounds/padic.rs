use super::cert::{CertConfig, EffectiveExponentCertificate, LedgerEntry, TheoremTag};
use super::{coefficient_annihilator, dyadic_down, index_above, iv, refuse, yu_c0, yu_ln_c1, yu_prefactor};
use crate::algnum::{mahler_measure_upper, Tri};
use crate::ball::Round;
use crate::error::Result;
use crate::interval::Interval;
use crate::intpoly::{newton_polygon, resultant, valuation, IntPolynomial};
use crate::recurrence::{closed_form_with, degeneracy_witnesses, RecurrenceSpec, Sequence};
use crate::sparts::{is_prime_u64, PrimeSet};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

fn ratio_f64(r: num_rational::Ratio<i64>) -> Interval {
    iv(*r.numer() as f64) / iv(*r.denom() as f64)
}

pub fn effective_padic(spec: &RecurrenceSpec, s: &PrimeSet, p: u64) -> Result<EffectiveExponentCertificate> {
    effective_padic_with(spec, s, p, &CertConfig::default())
}

pub fn effective_padic_with(
    spec: &RecurrenceSpec,
    s: &PrimeSet,
    p: u64,
    cfg: &CertConfig,
) -> Result<EffectiveExponentCertificate> {
    if !is_prime_u64(p) {
        return Err(crate::Error::Domain(format!("{p} is not prime")));
    }
    let g = spec.char_poly();
    let k = spec.order();
    if k < 2 {
        return refuse("a single root leaves nothing to bound");
    }
    let wit = degeneracy_witnesses(&g)?;
    if !wit.is_empty() {
        return refuse(format!("degenerate sequence: a root ratio is a root of unity of order {}", wit[0]));
    }
    let disc = g.discriminant()?;
    if disc.is_zero() {
        return refuse("characteristic polynomial has a repeated root");
    }
    let poly = newton_polygon(&g, p)?;
    let units = poly.unit_root_count();
    if units != 1 {
        let slopes: Vec<String> = poly.slopes.iter().map(|sg| format!("{}x{}", sg.slope, sg.length)).collect();
        return refuse(format!(
            "no {p}-adic dominant root: Newton polygon has {units} roots of valuation 0 (slopes {})",
            slopes.join(", ")
        ));
    }
    let theta_p = poly.min_positive_slope().expect("k >= 2 with one unit root");
    let pt = spec.p_tilde();
    let res = resultant(&g, &pt)?;
    if res.is_zero() {
        return refuse("a root coefficient vanishes");
    }
    let kappa_p = valuation(&disc, p) + valuation(&res, p);

    let cf = closed_form_with(spec, 256, cfg.precision_ceiling)?;
    let ell_a = cf
        .clusters
        .iter()
        .map(|c| c.modulus_upper().ln_interval().hi)
        .fold(f64::NEG_INFINITY, f64::max);
    if ell_a <= 0.0 {
        return refuse("no root of modulus above 1");
    }
    let mut csum = iv(0.0);
    for f in &cf.f {
        csum = csum + iv(f[0].abs_upper().to_f64(Round::Up));
    }
    let c_u = csum.ln().hi;

    // An integral unit root gives a degree one field.
    let mut unit_int = None;
    for c in &cf.clusters {
        if c.is_real != Tri::Yes {
            continue;
        }
        let m = c.re.add(&crate::ball::Dyadic::pow2(-1)).floor();
        if g.eval(&m).is_zero() && !m.is_zero() && valuation(&m, p) == 0 {
            unit_int = Some(m);
        }
    }
    let g_fac = match &unit_int {
        Some(m) => IntPolynomial::linear_root(m.clone()),
        None => g.clone(),
    };
    let d = g_fac.deg() as u32;
    let h_c = mahler_measure_upper(&coefficient_annihilator(&g_fac, &g, &pt)?)?.value;
    let la_alpha = mahler_measure_upper(&g_fac)?.value.max(1.0);
    let mut pi = iv(la_alpha);
    for &q in s.primes() {
        pi = pi * iv(Interval::point(q as f64).ln().hi.max(1.0));
    }
    let nlogs = s.len() + 2;
    let pref = yu_prefactor(p, nlogs, d);
    let ln_p = iv(p as f64).ln();
    let tau0 = yu_ln_c1(nlogs, d) + iv(((nlogs + 1) as u32 * d) as f64) * ln_p;
    let eps = iv(1.0) / yu_c0(2, 1);
    let theta = ratio_f64(theta_p);
    let top = theta * ln_p;
    let ln2 = Interval::ln2();
    let b1 = iv(1.0).max(&(iv(ell_a) / ln2));
    let b0 = iv(c_u.max(0.0)) / ln2 + iv(3.0);
    let hc1 = h_c.max(1.0);

    let l_of = |c1: f64| (c1 * ell_a, c1 * c_u.max(0.0) + hc1);
    let mut c1 = 1e-3;
    for _ in 0..200 {
        let (l1, l0) = l_of(c1);
        let rho = 1f64.max(b1.hi / l1).max(b0.hi / l0);
        let w = pref.hi * pi.hi * (rho.ln() + tau0.hi + eps.hi);
        let next = top.lo / (2.0 * w * ell_a);
        let done = (next - c1).abs() <= 1e-14 * c1;
        c1 = next;
        if done {
            break;
        }
    }
    if !(c1 > 0.0 && c1.is_finite()) {
        return refuse("exponent fixed point failed");
    }
    let c1q: BigRational = dyadic_down(0.999 * c1.min(0.5), 24);
    let ci = iv(c1q.numer().to_f64().unwrap() / c1q.denom().to_f64().unwrap());
    let l1 = ci * iv(ell_a);
    let l0 = ci * iv(c_u.max(0.0)) + iv(hc1);
    let rho = iv(1.0).max(&(b1 / l1)).max(&(b0 / l0));
    let w = pref * pi * (rho.ln() + tau0 + eps);
    let two_pi_l1 = iv(2.0) * pi * l1;
    if two_pi_l1.hi >= 1.0 {
        return refuse("small-B case does not close");
    }
    if (l0 + l1).ln().hi >= (tau0 - iv(1.0)).lo {
        return refuse("monotonicity range of the Yu bound not reached");
    }
    let slope = top - w * l1;
    if slope.lo <= 0.0 {
        return refuse("linear term of the chain is not positive");
    }
    let kp = iv(kappa_p as f64) * ln_p;
    let n_b = index_above(((w * l0 + kp) / Interval::point(slope.lo)).hi)?;
    let n_a = index_above((iv(2.0) * pi * l0 / (iv(1.0) - two_pi_l1)).hi)?;
    let n0 = n_a.clone().max(n_b.clone()).max(BigUint::from(k as u64)).max(BigUint::from(3u32));

    let ledger = vec![
        LedgerEntry::new("route", "padic", "Yu bound on u_n / (c_d alpha_d^n) - 1 at p"),
        LedgerEntry::new("theta_p", theta_p, "smallest positive root valuation"),
        LedgerEntry::new("kappa_p", kappa_p, "v_p(disc G) + v_p(Res(G, P))"),
        LedgerEntry::new("D", d, if unit_int.is_some() { "unit root is an integer" } else { "degree of G" }),
        LedgerEntry::new("log_max_root", ell_a, ""),
        LedgerEntry::new("c_U", c_u, "log of the coefficient sum"),
        LedgerEntry::new("H_c", h_c, "log Mahler measure of an annihilator of c_d"),
        LedgerEntry::new("Pi", pi.hi, "product of logA over the primes and alpha_d"),
        LedgerEntry::new("prefactor", pref.hi, ""),
        LedgerEntry::new("tau0", tau0.hi, "log c1(n, D) + (n + 1) D log p"),
        LedgerEntry::new("rho", rho.hi, "B / logA_gamma bound"),
        LedgerEntry::new("W", w.hi, ""),
        LedgerEntry::new("N_small_B", &n_a, "n below which B < 2 Pi logA_gamma is possible"),
        LedgerEntry::new("N_chain", &n_b, ""),
        LedgerEntry::new("excluded", "u_n = 0 or u_n = c_d alpha_d^n", ""),
    ];
    Ok(EffectiveExponentCertificate {
        theorem: TheoremTag::Padic,
        c1: c1q,
        n0,
        primes: s.clone(),
        padic_prime: Some(p),
        source: Sequence::Recurrence(spec.clone()),
        ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn two_plus_three() {
        let s = RecurrenceSpec::from_i64(&[5, -6], &[2, 5]).unwrap();
        let c = effective_padic(&s, &PrimeSet::parse("5").unwrap(), 2).unwrap();
        assert!(c.c1_f64() > 0.0);
        assert_eq!(c.ledger_value("D"), Some("1"));
        assert_eq!(c.padic_prime, Some(2));
    }

    #[test]
    fn flat_polygons_refused() {
        let fib = RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap();
        let e = effective_padic(&fib, &PrimeSet::parse("3").unwrap(), 2).unwrap_err();
        assert!(matches!(&e, Error::Refused(m) if m.contains("Newton polygon")), "{e}");
        let s = RecurrenceSpec::from_i64(&[5, -6], &[2, 5]).unwrap();
        assert!(matches!(effective_padic(&s, &PrimeSet::parse("2").unwrap(), 5), Err(Error::Refused(_))));
    }
}
