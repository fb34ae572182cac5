//! Exact rational dense linear algebra with deterministic basis choices.
//!
//! Everything downstream (section spaces, admissibility tests, the
//! contraction/insertion correspondence) is phrased in this vocabulary.
//! All arithmetic is over arbitrary-precision rationals, so every test in
//! the crate can assert bit-equality instead of tolerances. The single
//! normalization rule is reduced (row or column) echelon form with
//! first-nonzero pivoting.

mod feasible;
mod matrix;
mod subspace;

pub use feasible::{MatrixSystem, UnknownId, DEFAULT_FEASIBILITY_DRAWS};
pub use matrix::Matrix;
pub use subspace::{image_basis, intersect, kernel_basis, preimage, Subspace};

use crate::error::{Error, Result};
use num_bigint::BigInt;

/// The field of scalars: arbitrary-precision rationals, always reduced,
/// denominator always positive (`num_rational` maintains both invariants).
pub type Rat = num_rational::BigRational;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise (q > 0).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`; the result is reduced with positive denominator.
pub fn rat_from_string(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den == BigInt::from(0) {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_round_trip() {
        for (n, d, s) in [(1, 2, "1/2"), (-3, 6, "-1/2"), (4, 1, "4"), (0, 5, "0")] {
            let r = rat(n, d);
            assert_eq!(rat_to_string(&r), s);
            assert_eq!(rat_from_string(s).unwrap(), r);
        }
        // sign lives on the numerator
        assert_eq!(rat_from_string("1/-2").unwrap(), rat(-1, 2));
        assert!(rat_from_string("1/0").is_err());
        assert!(rat_from_string("a/2").is_err());
    }
}
