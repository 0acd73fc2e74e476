use crate::algnum::DEFAULT_PRECISION_CEILING;
use crate::error::{Error, Result};
use crate::recurrence::Sequence;
use crate::specfile::SpecFile;
use crate::sparts::{GpfOptions, PrimeSet};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

pub const CERT_FORMAT: &str = "lrs-sparts-certificate-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremTag {
    Archimedean,
    Binary,
    Padic,
    Floorpower,
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremTag::Archimedean => "archimedean",
            TheoremTag::Binary => "binary",
            TheoremTag::Padic => "padic",
            TheoremTag::Floorpower => "floorpower",
        };
        f.write_str(s)
    }
}

/// One named constant of the derivation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub name: String,
    pub value: String,
    #[serde(default)]
    pub note: String,
}

impl LedgerEntry {
    pub fn new(name: &str, value: impl fmt::Display, note: &str) -> Self {
        LedgerEntry { name: name.into(), value: value.to_string(), note: note.into() }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertConfig {
    pub precision_ceiling: u64,
    pub gpf: GpfOptions,
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig { precision_ceiling: DEFAULT_PRECISION_CEILING, gpf: GpfOptions::default() }
    }
}

/// `[u_n]_S <= |u_n|^(1 - c1)` for every `n >= n0` outside the excluded set
/// recorded in the ledger.
#[derive(Clone, Debug)]
pub struct EffectiveExponentCertificate {
    pub theorem: TheoremTag,
    pub c1: BigRational,
    pub n0: BigUint,
    pub primes: PrimeSet,
    pub padic_prime: Option<u64>,
    pub source: Sequence,
    pub ledger: Vec<LedgerEntry>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    format: String,
    theorem_tag: TheoremTag,
    c1: String,
    c1_approx: f64,
    n0: String,
    primes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    padic_prime: Option<u64>,
    source: SpecFile,
    #[serde(default)]
    ledger: Vec<LedgerEntry>,
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl EffectiveExponentCertificate {
    pub fn c1_f64(&self) -> f64 {
        self.c1.numer().to_f64().unwrap_or(f64::NAN) / self.c1.denom().to_f64().unwrap_or(f64::NAN)
    }

    /// `n0` when it fits in 64 bits.
    pub fn n0_u64(&self) -> Option<u64> {
        self.n0.to_u64()
    }

    pub fn ledger_value(&self, name: &str) -> Option<&str> {
        self.ledger.iter().find(|e| e.name == name).map(|e| e.value.as_str())
    }

    pub fn to_toml(&self) -> Result<String> {
        let w = Wire {
            format: CERT_FORMAT.into(),
            theorem_tag: self.theorem,
            c1: format!("{}/{}", self.c1.numer(), self.c1.denom()),
            c1_approx: self.c1_f64(),
            n0: self.n0.to_string(),
            primes: self.primes.primes().to_vec(),
            padic_prime: self.padic_prime,
            source: SpecFile::from_sequence(&self.source),
            ledger: self.ledger.clone(),
        };
        toml::to_string(&w).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let w: Wire = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if w.format != CERT_FORMAT {
            return Err(Error::Parse(format!("unknown certificate format {:?}", w.format)));
        }
        let c1 = parse_ratio(&w.c1)?;
        let n0: BigUint = w.n0.trim().parse().map_err(|_| Error::Parse(format!("bad n0 {:?}", w.n0)))?;
        if (w.theorem_tag == TheoremTag::Padic) != w.padic_prime.is_some() {
            return Err(Error::Parse("padic_prime must be given exactly for padic certificates".into()));
        }
        Ok(EffectiveExponentCertificate {
            theorem: w.theorem_tag,
            c1,
            n0,
            primes: PrimeSet::new(w.primes)?,
            padic_prime: w.padic_prime,
            source: w.source.to_sequence()?,
            ledger: w.ledger,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for EffectiveExponentCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} certificate: c1 = {} (~{:.3e}), N0 = {}, S = {}", self.theorem, self.c1, self.c1_f64(), self.n0, self.primes)?;
        if let Some(p) = self.padic_prime {
            write!(f, ", p = {p}")?;
        }
        Ok(())
    }
}
