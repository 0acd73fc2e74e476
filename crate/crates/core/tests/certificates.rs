use lrs_sparts::bounds::{
    effective_archimedean, effective_binary, effective_floorpower, effective_padic, EffectiveExponentCertificate,
    TheoremTag,
};
use lrs_sparts::config::Config;
use lrs_sparts::recurrence::{FloorPowerSpec, RecurrenceSpec};
use lrs_sparts::sparts::PrimeSet;
use lrs_sparts::Error;

fn fib() -> RecurrenceSpec {
    RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap()
}

fn set(s: &str) -> PrimeSet {
    PrimeSet::parse(s).unwrap()
}

#[test]
fn toml_round_trip() {
    let certs = [
        effective_archimedean(&fib(), &set("2,3")).unwrap(),
        effective_binary(&fib(), &set("2,3")).unwrap(),
        effective_padic(&RecurrenceSpec::from_i64(&[5, -6], &[2, 5]).unwrap(), &set("5"), 2).unwrap(),
        effective_floorpower(&FloorPowerSpec::rational(1, 1, 3, 2).unwrap(), &set("2,3")).unwrap(),
    ];
    for c in &certs {
        let text = c.to_toml().unwrap();
        let back = EffectiveExponentCertificate::from_toml(&text).unwrap();
        assert_eq!((back.theorem, &back.c1, &back.n0, &back.primes), (c.theorem, &c.c1, &c.n0, &c.primes));
        assert_eq!(back.to_toml().unwrap(), text);
        assert!(c.c1_f64() > 0.0 && c.c1_f64() < 1.0);
        assert!(!c.ledger.is_empty());
    }
}

#[test]
fn deterministic() {
    let a = effective_archimedean(&fib(), &set("2,3,5")).unwrap();
    let b = effective_archimedean(&fib(), &set("2,3,5")).unwrap();
    assert_eq!(a.to_toml().unwrap(), b.to_toml().unwrap());
}

#[test]
fn tampered_files_rejected() {
    let c = effective_padic(&RecurrenceSpec::from_i64(&[5, -6], &[2, 5]).unwrap(), &set("5"), 2).unwrap();
    let text = c.to_toml().unwrap();
    assert!(EffectiveExponentCertificate::from_toml(&text.replace("padic_prime = 2\n", "")).is_err());
    assert!(EffectiveExponentCertificate::from_toml(&text.replace("lrs-sparts-certificate-v1", "v0")).is_err());
}

#[test]
fn hypotheses_gate_the_routes() {
    let refused = |r: Result<EffectiveExponentCertificate, Error>| matches!(r, Err(Error::Refused(_)));
    // x^2 - 1: degenerate
    let degenerate = RecurrenceSpec::from_i64(&[0, 1], &[1, 2]).unwrap();
    assert!(refused(effective_archimedean(&degenerate, &set("2"))));
    assert!(refused(effective_binary(&degenerate, &set("2"))));
    // third order
    let tribonacci = RecurrenceSpec::from_i64(&[1, 1, 1], &[0, 0, 1]).unwrap();
    assert!(refused(effective_binary(&tribonacci, &set("2"))));
    // theta = 2 is an integer
    assert!(matches!(FloorPowerSpec::rational(1, 1, 2, 1), Err(Error::Hypothesis(m)) if m.contains("integer")));
}

#[test]
fn floor_power_with_other_primes() {
    let c = effective_floorpower(&FloorPowerSpec::rational(1, 1, 3, 2).unwrap(), &set("7")).unwrap();
    assert_eq!(c.theorem, TheoremTag::Floorpower);
    assert!(c.c1_f64() > 0.0);
}

#[test]
fn config_limits_reach_the_certificate() {
    let cfg = Config::parse("precision_ceiling = 64\n").unwrap();
    let r = lrs_sparts::bounds::effective_archimedean_with(&fib(), &set("2"), &cfg.cert());
    assert!(r.is_ok() || matches!(r, Err(Error::UndecidedClustering { .. })));
    assert!(Config::parse("mr_rounds = 0\n").is_err());
}
