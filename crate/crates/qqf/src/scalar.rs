//! Exact rational scalars. All arithmetic in the crate goes through
//! `num_rational::BigRational`, which keeps values in lowest terms with a
//! positive denominator; equality is exact everywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"n"` exactly. Rejects empty parts, zero denominators
/// and anything else `BigInt` does not accept.
pub fn parse(s: &str) -> Result<Scalar> {
    let bad = || Error::Invalid(format!("malformed rational `{s}`"));
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Scalar::from_integer(num)),
        Some(d) => {
            let den: BigInt = d.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(num, den))
        }
    }
}

/// Canonical serialization: `"p/q"` with q > 1, plain `"p"` otherwise.
pub fn format(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn is_integer(s: &Scalar) -> bool {
    s.denom().is_one()
}

/// Exact rational square root, if one exists.
pub fn sqrt(s: &Scalar) -> Option<Scalar> {
    if s.is_negative() {
        return None;
    }
    let num = s.numer().sqrt();
    let den = s.denom().sqrt();
    if &(&num * &num) == s.numer() && &(&den * &den) == s.denom() {
        Some(Scalar::new(num, den))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "1/2", "-22/7"] {
            let v = parse(s).unwrap();
            assert_eq!(format(&v), s);
        }
        assert_eq!(format(&parse("4/6").unwrap()), "2/3");
        assert_eq!(format(&parse("3/-6").unwrap()), "-1/2");
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
        assert!(parse("a/b").is_err());
        assert!(parse("1.5").is_err());
    }

    #[test]
    fn sqrt_exact() {
        assert_eq!(sqrt(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(sqrt(&int(2)), None);
        assert_eq!(sqrt(&int(-1)), None);
        assert_eq!(sqrt(&zero()), Some(zero()));
    }

    proptest! {
        // Field axioms on random rationals: exactness means these hold
        // on the nose, not up to tolerance.
        #[test]
        fn field_axioms(an in -50i64..50, ad in 1i64..20,
                        bn in -50i64..50, bd in 1i64..20,
                        cn in -50i64..50, cd in 1i64..20) {
            let a = frac(an, ad);
            let b = frac(bn, bd);
            let c = frac(cn, cd);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * (one() / &a), one());
            }
            prop_assert_eq!(&a - &a, zero());
        }

        #[test]
        fn round_trip_random(n in -10000i64..10000, d in 1i64..10000) {
            let v = frac(n, d);
            prop_assert_eq!(parse(&format(&v)).unwrap(), v);
        }
    }
}
