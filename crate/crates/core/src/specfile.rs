//! Sequence description files (TOML).
//!
//! ```toml
//! name = "fibonacci"
//! coeffs = [1, 1]
//! init = [0, 1]
//! ```
//!
//! Floor-power sequences use `lambda_num`, `lambda_den` and either
//! `theta_num`/`theta_den` or `theta_minpoly` (constant term first) with
//! `theta_root_hint`. Integers may be written as strings when they exceed
//! 64 bits.

use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;
use crate::recurrence::{AlgebraicReal, FloorPowerSpec, RecurrenceSpec, Sequence};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntValue {
    Int(i64),
    Str(String),
}

impl IntValue {
    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntValue::Int(i) => Ok(BigInt::from(*i)),
            IntValue::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(i) => IntValue::Int(i),
            None => IntValue::Str(n.to_string()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<IntValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<Vec<IntValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_num: Option<IntValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_den: Option<IntValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_num: Option<IntValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_den: Option<IntValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_minpoly: Option<Vec<IntValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_root_hint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrality_bound: Option<u64>,
}

fn ints(v: &[IntValue]) -> Result<Vec<BigInt>> {
    v.iter().map(IntValue::to_bigint).collect()
}

fn opt_int(v: &Option<IntValue>, default: i64) -> Result<BigInt> {
    v.as_ref().map_or(Ok(BigInt::from(default)), IntValue::to_bigint)
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn is_floor_power(&self) -> bool {
        self.coeffs.is_none()
    }

    pub fn to_sequence(&self) -> Result<Sequence> {
        match (&self.coeffs, &self.init) {
            (Some(c), Some(i)) => {
                let spec = RecurrenceSpec::new(ints(c)?, ints(i)?, self.name.clone())?;
                Ok(Sequence::Recurrence(spec))
            }
            (Some(_), None) | (None, Some(_)) => {
                Err(Error::Parse("`coeffs` and `init` must be given together".into()))
            }
            (None, None) => Ok(Sequence::FloorPower(self.floor_power()?)),
        }
    }

    fn floor_power(&self) -> Result<FloorPowerSpec> {
        let ratio = |n: BigInt, d: BigInt| -> Result<BigRational> {
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        };
        let lambda = AlgebraicReal::Rational(ratio(opt_int(&self.lambda_num, 1)?, opt_int(&self.lambda_den, 1)?)?);
        let theta = match (&self.theta_num, &self.theta_minpoly) {
            (Some(n), None) => AlgebraicReal::Rational(ratio(n.to_bigint()?, opt_int(&self.theta_den, 1)?)?),
            (None, Some(p)) => {
                let hint = self
                    .theta_root_hint
                    .ok_or_else(|| Error::Parse("`theta_minpoly` needs `theta_root_hint`".into()))?;
                AlgebraicReal::Root { poly: IntPolynomial::new(ints(p)?), hint }
            }
            (Some(_), Some(_)) => return Err(Error::Parse("give theta either as a ratio or a polynomial".into())),
            (None, None) => return Err(Error::Parse("neither `coeffs` nor `theta_num`/`theta_minpoly` given".into())),
        };
        let mut fp = FloorPowerSpec::new(lambda, theta, self.integrality_bound.unwrap_or(64))?;
        fp.name = self.name.clone();
        Ok(fp)
    }

    pub fn from_sequence(seq: &Sequence) -> Self {
        let iv = |v: &[BigInt]| v.iter().map(IntValue::from_bigint).collect::<Vec<_>>();
        match seq {
            Sequence::Recurrence(r) => SpecFile {
                name: r.name().map(str::to_owned),
                coeffs: Some(iv(r.coeffs())),
                init: Some(iv(r.init())),
                ..Default::default()
            },
            Sequence::FloorPower(fp) => {
                let mut out = SpecFile {
                    name: fp.name.clone(),
                    integrality_bound: Some(fp.integrality_bound),
                    ..Default::default()
                };
                if let AlgebraicReal::Rational(l) = &fp.lambda {
                    out.lambda_num = Some(IntValue::from_bigint(l.numer()));
                    if !l.denom().is_one() {
                        out.lambda_den = Some(IntValue::from_bigint(l.denom()));
                    }
                }
                match &fp.theta {
                    AlgebraicReal::Rational(t) => {
                        out.theta_num = Some(IntValue::from_bigint(t.numer()));
                        out.theta_den = Some(IntValue::from_bigint(t.denom()));
                    }
                    AlgebraicReal::Root { poly, hint } => {
                        out.theta_minpoly = Some(iv(poly.coeffs()));
                        out.theta_root_hint = Some(*hint);
                    }
                }
                out
            }
        }
    }
}

/// Reads a sequence from a spec file.
pub fn load_sequence(path: &Path) -> Result<Sequence> {
    SpecFile::load(path)?.to_sequence()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_roundtrip() {
        let s = SpecFile::parse("name = \"fib\"\ncoeffs = [1, 1]\ninit = [0, \"1\"]\n").unwrap();
        let seq = s.to_sequence().unwrap();
        assert_eq!(seq.term(10).unwrap(), BigInt::from(55));
        let back = SpecFile::from_sequence(&seq);
        assert_eq!(back.to_sequence().unwrap().term(20).unwrap(), BigInt::from(6765));
    }

    #[test]
    fn floor_power_forms() {
        let s = SpecFile::parse("lambda_num = 1\ntheta_num = 3\ntheta_den = 2\n").unwrap();
        assert_eq!(s.to_sequence().unwrap().term(5).unwrap(), BigInt::from(7));
        let s = SpecFile::parse("theta_minpoly = [-1, -1, 1]\ntheta_root_hint = 1.6\n").unwrap();
        assert_eq!(s.to_sequence().unwrap().term(4).unwrap(), BigInt::from(6));
        let big = SpecFile::parse("coeffs = [\"123456789012345678901234567890\"]\ninit = [1]\n").unwrap();
        assert!(big.to_sequence().is_ok());
    }

    #[test]
    fn malformed_inputs() {
        assert!(SpecFile::parse("coeffs = [1]\n").unwrap().to_sequence().is_err());
        assert!(SpecFile::parse("theta_num = 3\ntheta_den = 0\n").unwrap().to_sequence().is_err());
        assert!(SpecFile::parse("bogus = 1\n").is_err());
        assert!(SpecFile::parse("coeffs = [\"x\"]\ninit = [1]\n").unwrap().to_sequence().is_err());
    }
}
