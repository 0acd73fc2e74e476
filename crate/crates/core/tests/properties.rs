use lrs_sparts::delta::ratio_of;
use lrs_sparts::harness::{scan_parallel, scan_sequential, ScanOptions};
use lrs_sparts::interval::ln_abs_bigint;
use lrs_sparts::intpoly::{newton_polygon, resultant, IntPolynomial};
use lrs_sparts::recurrence::{FloorPowerSpec, RecurrenceSpec, Sequence};
use lrs_sparts::sparts::{s_part, PrimeSet};
use lrs_sparts::specfile::SpecFile;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

fn prime_set() -> impl Strategy<Value = PrimeSet> {
    proptest::sample::subsequence(SMALL_PRIMES.to_vec(), 1..5).prop_map(|v| PrimeSet::new(v).unwrap())
}

fn recurrence() -> impl Strategy<Value = RecurrenceSpec> {
    (1usize..4)
        .prop_flat_map(|k| (prop::collection::vec(-6i64..7, k), prop::collection::vec(-9i64..10, k)))
        .prop_filter_map("a_k = 0", |(mut a, u)| {
            if *a.last().unwrap() == 0 {
                *a.last_mut().unwrap() = 1;
            }
            RecurrenceSpec::from_i64(&a, &u).ok()
        })
}

fn from_roots(roots: &[i64]) -> IntPolynomial {
    roots.iter().fold(IntPolynomial::one(), |g, &r| g.mul(&IntPolynomial::from_i64(&[-r, 1])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn s_part_reconstructs(m in any::<i128>().prop_filter("zero", |m| *m != 0), s in prime_set()) {
        let m = BigInt::from(m);
        let d = s_part(&m, &s).unwrap();
        prop_assert_eq!(&d.s_part * &d.cofactor, m.clone());
        prop_assert!(d.s_part.is_positive());
        let mut rebuilt = BigInt::one();
        for (&q, &e) in s.primes().iter().zip(&d.exponents) {
            prop_assert!(!d.cofactor.is_multiple_of(&BigInt::from(q)));
            rebuilt *= BigInt::from(q).pow(e as u32);
        }
        prop_assert_eq!(rebuilt, d.s_part);
        if let Some(r) = ratio_of(&m, &s) {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn random_access_matches_iteration(spec in recurrence(), n in 0u64..120, m in 2i64..10_000) {
        let direct = spec.terms(0, n).pop().unwrap();
        prop_assert_eq!(spec.term(n), direct.clone());
        prop_assert_eq!(spec.term_matrix(n), direct.clone());
        prop_assert_eq!(spec.iter_from(n).next().unwrap(), direct.clone());
        let m = BigInt::from(m);
        prop_assert_eq!(spec.state_mod(n as u128, &m)[0].clone(), direct.mod_floor(&m));
    }

    #[test]
    fn parallel_scan_is_sequential(spec in recurrence(), lo in 0u64..50, len in 0u64..80, chunk in 1u64..20, s in prime_set()) {
        let seq = Sequence::Recurrence(spec);
        let opts = ScanOptions { chunk, ..Default::default() };
        let a = scan_sequential(&seq, &s, lo, lo + len, &opts).unwrap();
        let b = scan_parallel(&seq, &s, lo, lo + len, &opts).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn newton_polygon_of_known_roots(roots in prop::collection::vec((1i64..60, any::<bool>()), 1..7), pi in 0usize..5) {
        let p = SMALL_PRIMES[pi];
        let roots: Vec<i64> = roots.into_iter().map(|(r, neg)| if neg { -r } else { r }).collect();
        let g = from_roots(&roots);
        let poly = newton_polygon(&g, p).unwrap();
        let mut want: Vec<i64> = roots
            .iter()
            .map(|&r| {
                let (mut r, mut k) = (r.abs(), 0);
                while r % p as i64 == 0 { r /= p as i64; k += 1; }
                k
            })
            .collect();
        want.sort_unstable();
        let got: Vec<i64> = poly.valuations().iter().map(|v| v.to_integer()).collect();
        prop_assert_eq!(got, want);
        prop_assert_eq!(poly.total_length(), roots.len());
    }

    #[test]
    fn resultant_and_discriminant_from_roots(
        roots in prop::collection::vec(-8i64..9, 1..5),
        g in prop::collection::vec(-5i64..6, 1..4),
    ) {
        let f = from_roots(&roots);
        let g = IntPolynomial::from_i64(&g);
        prop_assume!(!g.is_zero());
        let want = roots.iter().fold(BigInt::one(), |acc, &r| acc * g.eval(&BigInt::from(r)));
        prop_assert_eq!(resultant(&f, &g).unwrap(), want);
        let mut disc = BigInt::one();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                disc *= BigInt::from(roots[i] - roots[j]).pow(2);
            }
        }
        prop_assert_eq!(f.discriminant().unwrap(), disc);
    }

    #[test]
    fn log_enclosure(n in any::<u64>().prop_filter("small", |n| *n > 1)) {
        let iv = ln_abs_bigint(&BigInt::from(n));
        let x = (n as f64).ln();
        prop_assert!(iv.lo <= x + 1e-15 * x && x - 1e-15 * x <= iv.hi, "{iv} vs {x}");
        prop_assert!(iv.width() < 1e-12);
    }

    #[test]
    fn floor_paths_agree(ln in 1i64..20, ld in 1i64..20, tn in 2i64..30, td in 1i64..15, n in 0u64..80) {
        prop_assume!(tn % td != 0 && tn > td);
        let fp = FloorPowerSpec::rational(ln, ld, tn, td).unwrap();
        prop_assert_eq!(fp.term_exact(n).unwrap(), fp.term_ball(n, 64, 1 << 14).unwrap());
    }

    #[test]
    fn spec_file_round_trip(spec in recurrence()) {
        let seq = Sequence::Recurrence(spec);
        let text = SpecFile::from_sequence(&seq).to_toml().unwrap();
        let back = SpecFile::parse(&text).unwrap().to_sequence().unwrap();
        prop_assert_eq!(back.terms(0, 30).unwrap(), seq.terms(0, 30).unwrap());
    }
}

#[test]
fn zero_has_no_s_part() {
    assert!(s_part(&BigInt::zero(), &PrimeSet::parse("2").unwrap()).is_err());
}
