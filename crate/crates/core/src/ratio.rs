// SPDX-License-Identifier: Apache-2.0

//! Exact rationals. All probabilities and weighted indices are reduced
//! fractions of arbitrary-precision integers, serialized as `"p/q"` strings.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serializer;

pub type Rational = BigRational;

pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rational {
    Rational::new(numer.into(), denom.into())
}

pub fn from_biguint(numer: &BigUint, denom: &BigUint) -> Rational {
    Rational::new(BigInt::from(numer.clone()), BigInt::from(denom.clone()))
}

pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub fn serialize_opt<S: Serializer>(
    value: &Option<Rational>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => serializer.collect_str(v),
        None => serializer.serialize_none(),
    }
}

pub fn serialize_biguint<S: Serializer>(value: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(p.trim().parse().ok()?, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        assert_eq!(ratio(8, 18).to_string(), "4/9");
        assert_eq!(ratio(8, 2).to_string(), "4");
        assert_eq!(parse("4/9"), Some(ratio(4, 9)));
        assert_eq!(parse("16"), Some(ratio(16, 1)));
        assert_eq!(parse("1/0"), None);
    }
}
