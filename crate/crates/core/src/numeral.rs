//! Factorial-base numerals.
//!
//! Every natural number has a unique expansion `x = a_1·1! + a_2·2! + … + a_n·n!`
//! with `0 ≤ a_i ≤ i`. Digits are stored least-significant first, so `digits[0]`
//! is the coefficient of `1!`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Natural numbers handled by the library.
pub type Natural = u64;

/// Largest `n` with `n!` representable as a [`Natural`].
pub const MAX_FACTORIAL_ARG: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumeralError {
    #[error("{0} does not fit in 64 bits")]
    Overflow(String),
    #[error("digit {digit} at position {position} exceeds the bound {position}")]
    InvalidDigit { position: usize, digit: u8 },
    #[error("left factorial !n is defined for n >= 1")]
    ZeroLeftFactorial,
}

/// `n!`, or an overflow error once it leaves 64 bits.
pub fn factorial(n: u32) -> Result<Natural, NumeralError> {
    (1..=n as u64).try_fold(1u64, |acc, i| {
        acc.checked_mul(i)
            .ok_or_else(|| NumeralError::Overflow(format!("{n}!")))
    })
}

/// `n!` in 128 bits, for moduli that may exceed every 64-bit input.
pub(crate) fn factorial_u128(n: u32) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, i| acc.checked_mul(i))
}

/// The left factorial `!n = 0! + 1! + … + (n−1)!`.
pub fn left_factorial(n: u32) -> Result<Natural, NumeralError> {
    if n == 0 {
        return Err(NumeralError::ZeroLeftFactorial);
    }
    let overflow = || NumeralError::Overflow(format!("!{n}"));
    let mut sum = 0u64;
    let mut term = 1u64;
    for i in 0..n {
        if i > 0 {
            term = term.checked_mul(i as u64).ok_or_else(overflow)?;
        }
        sum = sum.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(sum)
}

/// Canonical factorial-base digits `a_1, a_2, …, a_j` with `a_j ≠ 0`.
///
/// Zero is the empty sequence. Ordering agrees with the ordering of the
/// represented values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FactorialDigits {
    digits: Vec<u8>,
}

impl FactorialDigits {
    /// Validates digit bounds and strips trailing zeros.
    pub fn new(mut digits: Vec<u8>) -> Result<Self, NumeralError> {
        for (idx, &digit) in digits.iter().enumerate() {
            let position = idx + 1;
            if digit as usize > position {
                return Err(NumeralError::InvalidDigit { position, digit });
            }
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(Self { digits })
    }

    /// Digits least-significant first.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// The coefficient of `i!` (1-based), zero past the stored expansion.
    pub fn digit(&self, i: usize) -> u8 {
        if i == 0 {
            return 0;
        }
        self.digits.get(i - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

impl Ord for FactorialDigits {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digits
            .len()
            .cmp(&other.digits.len())
            .then_with(|| self.digits.iter().rev().cmp(other.digits.iter().rev()))
    }
}

impl PartialOrd for FactorialDigits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FactorialDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Iterator over the factorial digits of a number, least significant first.
///
/// Yields `a_1, a_2, …` and then stops; callers that need digits beyond the
/// expansion treat them as zero.
#[derive(Debug, Clone)]
pub struct DigitStream {
    rest: u64,
    radix: u64,
}

impl DigitStream {
    pub fn new(x: Natural) -> Self {
        Self { rest: x, radix: 2 }
    }
}

impl Iterator for DigitStream {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.rest == 0 {
            return None;
        }
        let digit = (self.rest % self.radix) as u8;
        self.rest /= self.radix;
        self.radix += 1;
        Some(digit)
    }
}

/// Factorial-base expansion of `x`. Never overflows: the digits come from
/// repeated division by 2, 3, 4, …
pub fn to_factorial(x: Natural) -> FactorialDigits {
    FactorialDigits {
        digits: DigitStream::new(x).collect(),
    }
}

/// `Σ a_i · i!` with checked arithmetic.
pub fn from_factorial(digits: &FactorialDigits) -> Result<Natural, NumeralError> {
    from_digit_slice(digits.digits())
}

/// Like [`from_factorial`] but for an unvalidated slice.
pub fn from_digit_slice(digits: &[u8]) -> Result<Natural, NumeralError> {
    let overflow = || NumeralError::Overflow("factorial-base value".to_string());
    let mut total = 0u64;
    let mut weight = 1u64;
    for (idx, &digit) in digits.iter().enumerate() {
        let position = idx + 1;
        if digit as usize > position {
            return Err(NumeralError::InvalidDigit { position, digit });
        }
        if idx > 0 {
            // Weights past 20! can only multiply zero digits.
            match weight.checked_mul(position as u64) {
                Some(w) => weight = w,
                None if digits[idx..].iter().all(|&d| d == 0) => break,
                None => return Err(overflow()),
            }
        }
        let term = weight.checked_mul(digit as u64).ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_match_hand_checked_values() {
        assert_eq!(to_factorial(0).digits(), &[] as &[u8]);
        assert_eq!(to_factorial(1).digits(), &[1]);
        assert_eq!(to_factorial(34).digits(), &[0, 2, 1, 1]);
        assert_eq!(to_factorial(119).digits(), &[1, 2, 3, 4]);

        let d = FactorialDigits::new(vec![0, 2, 1, 1]).unwrap();
        assert_eq!(from_factorial(&d).unwrap(), 34);
        assert_eq!(from_factorial(&FactorialDigits::default()).unwrap(), 0);
        assert_eq!(from_digit_slice(&[0, 1]).unwrap(), 2);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0).unwrap(), 1);
        assert_eq!(factorial(5).unwrap(), 120);
        assert_eq!(factorial(10).unwrap(), 3_628_800);
        assert_eq!(factorial(20).unwrap(), 2_432_902_008_176_640_000);
        assert!(matches!(factorial(21), Err(NumeralError::Overflow(_))));
    }

    #[test]
    fn left_factorials() {
        let listed: Vec<u64> = (1..=7).map(|n| left_factorial(n).unwrap()).collect();
        assert_eq!(listed, vec![1, 2, 4, 10, 34, 154, 874]);
        assert_eq!(left_factorial(0), Err(NumeralError::ZeroLeftFactorial));
        assert!(left_factorial(21).is_ok());
        assert!(matches!(left_factorial(22), Err(NumeralError::Overflow(_))));
        for n in 1..21 {
            assert_eq!(
                left_factorial(n + 1).unwrap() - left_factorial(n).unwrap(),
                factorial(n).unwrap()
            );
        }
    }

    #[test]
    fn invalid_digits_rejected() {
        assert_eq!(
            FactorialDigits::new(vec![2]),
            Err(NumeralError::InvalidDigit { position: 1, digit: 2 })
        );
        assert_eq!(
            from_digit_slice(&[0, 0, 4]),
            Err(NumeralError::InvalidDigit { position: 3, digit: 4 })
        );
        assert_eq!(FactorialDigits::new(vec![1, 0, 0]).unwrap().digits(), &[1]);
    }

    #[test]
    fn overflow_is_reported() {
        let mut digits = vec![0u8; 20];
        digits[19] = 20;
        assert!(matches!(
            from_digit_slice(&digits),
            Err(NumeralError::Overflow(_))
        ));
        assert_eq!(
            from_factorial(&to_factorial(u64::MAX)).unwrap(),
            u64::MAX
        );
        let mut padded = to_factorial(7).digits().to_vec();
        padded.resize(30, 0);
        assert_eq!(from_digit_slice(&padded).unwrap(), 7);
    }

    #[test]
    fn roundtrip_and_bounds_to_a_million() {
        for x in 0..=1_000_000u64 {
            let d = to_factorial(x);
            assert!(d.digits().iter().enumerate().all(|(i, &a)| a as usize <= i + 1));
            assert_ne!(d.digits().last(), Some(&0));
            assert_eq!(from_factorial(&d).unwrap(), x);
        }
    }

    #[test]
    fn digit_access_pads_with_zero() {
        let d = to_factorial(34);
        assert_eq!(d.digit(2), 2);
        assert_eq!(d.digit(5), 0);
        assert_eq!(d.digit(0), 0);
        assert_eq!(d.to_string(), "[0,2,1,1]");
    }
}
