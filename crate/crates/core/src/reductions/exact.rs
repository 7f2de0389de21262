//! Checked `i128` helpers for the closed-form constants.

use crate::error::{Error, Result};

const WHAT: &str = "reduction constants";

pub(crate) fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow(WHAT))
}

pub(crate) fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow(WHAT))
}

pub(crate) fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow(WHAT))
}

pub(crate) fn product(xs: &[i128]) -> Result<i128> {
    xs.iter().try_fold(1, |acc, &x| mul(acc, x))
}

/// `num / den`, failing unless the division is exact.
pub(crate) fn div_exact(num: i128, den: i128, what: &str) -> Result<i128> {
    if num % den != 0 {
        return Err(Error::Precondition(format!(
            "{what} = {num}/{den} is not an integer"
        )));
    }
    Ok(num / den)
}

/// Ceiling of `num / den` for positive `den`.
pub(crate) fn div_ceil(num: i128, den: i128) -> i128 {
    num.div_euclid(den) + i128::from(num.rem_euclid(den) != 0)
}

pub(crate) fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(WHAT))
}

pub(crate) fn to_usize(x: i128) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::Overflow(WHAT))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceilings_and_exact_division() {
        assert_eq!(div_ceil(7, 2), 4);
        assert_eq!(div_ceil(8, 2), 4);
        assert_eq!(div_ceil(0, 3), 0);
        assert_eq!(div_exact(12, 4, "x").unwrap(), 3);
        assert!(div_exact(13, 4, "x").is_err());
        assert!(mul(i128::MAX, 2).is_err());
        assert!(to_i64(i128::from(i64::MAX) + 1).is_err());
    }
}
