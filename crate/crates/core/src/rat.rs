//! exact rational scalars. everything numeric in this crate is either an
//! arbitrary-precision rational or a residue mod a small prime; floats are
//! banned from the whole pipeline.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// rational from an integer.
pub fn rat_i(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// rational from numerator and denominator. panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// parses "num" or "num/den" with optional sign and whitespace.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| format!("bad rational {s:?}: {e}"))
}

/// renders in the same "num" / "num/den" syntax `parse_rat` accepts.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one() || r.numer().is_zero()
}

/// exact integer value; None if r has a nontrivial denominator.
pub fn to_bigint(r: &Rat) -> Option<BigInt> {
    is_integer(r).then(|| r.to_integer())
}

/// |r| as a convenience for verdict tolerances (which are all exact zero).
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "7", "-3", "1/2", "-22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(parse_rat(" 4/6 ").unwrap(), rat(2, 3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn integrality() {
        assert!(is_integer(&rat_i(5)));
        assert!(is_integer(&rat(6, 3)));
        assert!(!is_integer(&rat(1, 3)));
        assert_eq!(to_bigint(&rat(6, 3)), Some(BigInt::from(2)));
        assert_eq!(to_bigint(&rat(1, 3)), None);
    }
}
