use lrs_sparts::bounds::{effective_binary, EffectiveExponentCertificate, TheoremTag};
use lrs_sparts::harness::{
    rows_to_toml, scan, scan_parallel, scan_sequential, verify_certificate, write_csv, ScanOptions, VerifyMethod,
    CSV_HEADER,
};
use lrs_sparts::recurrence::{FloorPowerSpec, RecurrenceSpec, Sequence};
use lrs_sparts::sparts::{GpfOptions, PrimeSet};
use num_bigint::BigUint;
use num_rational::BigRational;

fn fib() -> Sequence {
    Sequence::Recurrence(RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap())
}

fn set(s: &str) -> PrimeSet {
    PrimeSet::parse(s).unwrap()
}

fn csv(rows: &[lrs_sparts::harness::ScanRow]) -> String {
    let mut out = Vec::new();
    write_csv(rows, &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn fibonacci_rows_ten_to_twelve() {
    let rows = scan(&fib(), &set("2,3"), 10, 12, &ScanOptions::default()).unwrap();
    let got: Vec<_> = rows.iter().map(|r| (r.n, r.exponents.clone(), r.cofactor_digits)).collect();
    assert_eq!(got, vec![(10, vec![0, 0], Some(2)), (11, vec![0, 0], Some(2)), (12, vec![4, 2], Some(1))]);
}

#[test]
fn single_index_range() {
    let rows = scan(&fib(), &set("2"), 5, 5, &ScanOptions::default()).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(scan(&fib(), &set("2"), 6, 5, &ScanOptions::default()).is_err());
}

#[test]
fn two_plus_six_row_four() {
    let seq = Sequence::Recurrence(RecurrenceSpec::from_i64(&[8, -12], &[2, 8]).unwrap());
    let row = &scan(&seq, &set("2"), 4, 4, &ScanOptions::default()).unwrap()[0];
    // 1312 = 2^5 * 41
    assert_eq!((row.digits, row.exponents.clone(), row.cofactor_digits), (4, vec![5], Some(2)));
    let r = row.ratio.unwrap();
    assert!((r - 32f64.ln() / 1312f64.ln()).abs() < 1e-12);
}

#[test]
fn golden_fibonacci_csv() {
    let rows = scan(&fib(), &set("2,3"), 1, 50, &ScanOptions::default()).unwrap();
    assert_eq!(csv(&rows), include_str!("fixtures/fibonacci_1_50_s23.csv"));
}

#[test]
fn csv_line_counts() {
    assert_eq!(csv(&[]), format!("{CSV_HEADER}\n"));
    let rows = scan(&fib(), &set("2"), 7, 7, &ScanOptions::default()).unwrap();
    assert_eq!(csv(&rows).lines().count(), 2);
}

#[test]
fn chunking_does_not_change_bytes() {
    let fp = Sequence::FloorPower(FloorPowerSpec::rational(1, 1, 3, 2).unwrap());
    let gpf = ScanOptions { gpf: Some(GpfOptions { budget: 10_000, mr_rounds: 16 }), ..Default::default() };
    for seq in [fib(), fp] {
        let base = csv(&scan_sequential(&seq, &set("2,3,7"), 0, 150, &gpf).unwrap());
        for chunk in [1, 2, 16, 151, 1000] {
            let opts = ScanOptions { chunk, ..gpf };
            assert_eq!(csv(&scan_parallel(&seq, &set("2,3,7"), 0, 150, &opts).unwrap()), base, "chunk {chunk}");
        }
    }
}

#[test]
fn structured_rows() {
    let rows = scan(&fib(), &set("2,3"), 0, 1, &ScanOptions::default()).unwrap();
    let t = rows_to_toml(&rows).unwrap();
    assert_eq!(t.matches("[[rows]]").count(), 2);
    assert!(t.contains("ratio = \"skip\""));
}

#[test]
fn gpf_lower_bound_marker() {
    // F_249 has large prime factors rho cannot split in 10 steps
    let tiny = ScanOptions { gpf: Some(GpfOptions { budget: 10, mr_rounds: 8 }), ..Default::default() };
    let row = &scan(&fib(), &set("2"), 249, 249, &tiny).unwrap()[0];
    assert!(row.csv_line().split(',').nth(5).unwrap().starts_with(">="), "{}", row.csv_line());
}

fn synthetic(c1: (i64, i64), n0: u32) -> EffectiveExponentCertificate {
    EffectiveExponentCertificate {
        theorem: TheoremTag::Archimedean,
        c1: BigRational::new(c1.0.into(), c1.1.into()),
        n0: BigUint::from(n0),
        primes: set("2,3"),
        padic_prime: None,
        source: fib(),
        ledger: vec![],
    }
}

/// Direct check of `M >= |u|^c1` as `M^q >= |u|^p`.
fn violates(n: u64, p: u32, q: u32) -> bool {
    let u = RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap().term(n);
    let mut m = u.clone();
    for d in [2, 3] {
        while &m % d == 0.into() {
            m /= d;
        }
    }
    u > 1.into() && m.pow(q) < u.pow(p)
}

#[test]
fn synthetic_violations_match_direct_check() {
    let rep = verify_certificate(&synthetic((999, 1000), 3), 60).unwrap();
    assert_eq!(rep.method, VerifyMethod::Exact);
    let want: Vec<String> = (3..63).filter(|&n| violates(n, 999, 1000)).map(|n| n.to_string()).collect();
    assert!(!want.is_empty());
    assert_eq!(rep.violations, want);
    let again = verify_certificate(&synthetic((999, 1000), 3), 60).unwrap();
    assert_eq!(again, rep);
}

#[test]
fn window_of_one() {
    let rep = verify_certificate(&synthetic((1, 2), 12), 1).unwrap();
    assert_eq!((rep.from.as_str(), rep.to.as_str()), ("12", "12"));
    // F_12 = 144 = [144]_S
    assert_eq!(rep.violations, vec!["12".to_string()]);
    assert!(verify_certificate(&synthetic((1, 2), 12), 0).is_err());
}

#[test]
fn binary_certificate_checks_modularly() {
    let cert = effective_binary(&RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap(), &set("2,3")).unwrap();
    let rep = verify_certificate(&cert, 50).unwrap();
    assert_eq!(rep.method, VerifyMethod::Modular);
    assert!(rep.is_clean(), "{rep}");
    assert_eq!(rep.checked, 50);
    let text = rep.to_toml().unwrap();
    assert!(text.contains("method = \"modular\""));
}

#[test]
fn floor_power_far_window_is_undecided() {
    let mut cert = synthetic((1, 1000), 0);
    cert.source = Sequence::FloorPower(FloorPowerSpec::rational(1, 1, 3, 2).unwrap());
    cert.theorem = TheoremTag::Floorpower;
    cert.n0 = BigUint::from(10u32).pow(17);
    let rep = verify_certificate(&cert, 5).unwrap();
    assert_eq!(rep.undecided.len(), 5);
    assert!(rep.violations.is_empty() && !rep.is_clean());
    cert.n0 = BigUint::from(20u32);
    let rep = verify_certificate(&cert, 30).unwrap();
    assert_eq!(rep.method, VerifyMethod::Exact);
    assert_eq!(rep.checked + rep.skipped, 30);
}
