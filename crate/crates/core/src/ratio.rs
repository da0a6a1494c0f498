//! Exact rationals used for every threshold comparison.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<u64>;

/// Renders a rational as `num/den`, including integers (`3/1`).
pub fn fmt_exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_exact(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not an exact rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: u64 = n.parse().map_err(|_| bad())?;
    let d: u64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Checks `0 < eps < 1`.
pub fn check_open_unit(eps: &Rational, what: &str) -> Result<()> {
    if eps.is_zero() || *eps >= Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "{what} must lie in (0,1), got {}",
            fmt_exact(eps)
        )));
    }
    Ok(())
}

/// `count >= fraction * whole`, decided in integers.
pub fn at_least(count: u64, fraction: &Rational, whole: u64) -> bool {
    count as u128 * *fraction.denom() as u128 >= *fraction.numer() as u128 * whole as u128
}

/// `(1 - loss) * whole`, with a loss above one clamped to zero.
pub fn retained(loss: &Rational, whole: u64) -> Rational {
    if *loss >= Rational::one() {
        Rational::zero()
    } else {
        (Rational::one() - loss) * Rational::from_integer(whole)
    }
}

/// Smallest `c` with `2^c >= k`; `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(k: u64) -> u32 {
    if k <= 1 {
        0
    } else {
        64 - (k - 1).leading_zeros()
    }
}
