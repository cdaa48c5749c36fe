//! Exact q-series engines for the `Zhat` invariant of plumbed three-manifolds.
//!
//! The invariant is computed by four routes that are checked against one
//! another:
//!
//! * [`zhat::zhat_negative_definite`]: lattice theta sum with principal-value
//!   constant-term extraction, for negative-definite plumbings;
//! * [`zhat::zhat_three_star`]: closed form in false theta functions for
//!   four-node three-star graphs;
//! * [`indefinite::zhat_reversed`]: cone-regularized signature (1,1) theta
//!   function for the orientation-reversed manifold;
//! * [`surgery::surgery_zhat`]: Laplace transform of two-variable knot series
//!   for Dehn surgeries.
//!
//! [`modular`] evaluates the resulting series near rational cusps in high
//! precision. All q-series arithmetic is exact over the rationals.

pub mod cyclotomic;
pub mod error;
pub mod highprec;
pub mod indefinite;
pub mod lattice;
pub mod linalg;
pub mod modular;
pub mod plumbing;
pub mod series;
pub mod surgery;
pub mod zhat;

pub use error::{Error, Result};
pub use series::{Coeff, Exp, QSeries, WLaurentQSeries};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

/// Build an exponent `num/den`.
pub fn exp(num: i64, den: i64) -> Exp {
    Rational64::new(num, den)
}

/// Build an exact coefficient `num/den`.
pub fn coeff(num: i64, den: i64) -> Coeff {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"p"` or `"p/q"` into an exponent.
pub fn parse_exp(s: &str) -> Result<Exp> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational64::new(parse(n)?, d))
        }
        None => Ok(Rational64::from_integer(parse(s)?)),
    }
}
