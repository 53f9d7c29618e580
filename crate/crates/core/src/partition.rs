//! Classification of naturals into the columns `B_m`, the cells `B_{m,k}` and
//! the rows `A_k`, together with the closed-form residue classes of `B_m` and
//! `B_{m,k}`.
//!
//! `B_m` is a union of `(m−2)!` classes modulo `m!` (density `1/(m(m−1))`), and
//! `B_{m,k}` is a union of `(m−1)!` classes modulo `m^{k−1}·m!` (density `1/m^k`).
//! `A_k` collects `B_{m,k}` over all `m ≥ 2` and has density `ζ(k) − 1`.
//!
//! Membership is always decided by [`classify_b`] / [`classify_a`], which read
//! factorial-base and base-`m` digits; residue enumeration exists for display
//! and cross-checking.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::numeral::{factorial, factorial_u128, DigitStream, Natural, NumeralError};

/// Largest column index accepted by a [`Selector`].
pub const MAX_COLUMN: u32 = 20;
/// Largest row index accepted by a [`Selector`].
pub const MAX_ROW: u32 = 64;
/// Residue enumeration refuses to materialise more classes than this (`10!`).
pub const MAX_ENUMERATED_RESIDUES: u64 = 3_628_800;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("0 is not a natural number here; classification starts at 1")]
    Zero,
    #[error("{x} lies in B{actual}, not B{expected}")]
    ColumnMismatch { x: Natural, expected: u32, actual: u32 },
    #[error("{0}")]
    Numeral(#[from] NumeralError),
    #[error("modulus of {0} does not fit in 64 bits")]
    ModulusOverflow(String),
    #[error("{what} would enumerate {count} residues (limit {MAX_ENUMERATED_RESIDUES})")]
    TooManyResidues { what: String, count: u128 },
    #[error("{0}")]
    OutOfRange(String),
    #[error("invalid residue set: {0}")]
    InvalidResidues(String),
}

/// The cell `B_{m,k}` containing a number: column `m`, row `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionClass {
    pub m: u32,
    pub k: u32,
}

impl fmt::Display for PartitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{},{}", self.m, self.k)
    }
}

/// Least-positive representative of `x` modulo `modulus`, in `[1, modulus]`.
pub fn least_positive_residue(x: Natural, modulus: Natural) -> Natural {
    match x % modulus {
        0 => modulus,
        r => r,
    }
}

/// A union of arithmetic progressions `r mod modulus`.
///
/// Residues are least-positive representatives (the class of `0` is written
/// as `modulus`), strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClassSet {
    modulus: Natural,
    residues: Vec<Natural>,
}

impl ResidueClassSet {
    pub fn new(modulus: Natural, residues: Vec<Natural>) -> Result<Self, PartitionError> {
        if modulus == 0 {
            return Err(PartitionError::InvalidResidues("modulus 0".into()));
        }
        if let Some(&bad) = residues.iter().find(|&&r| r == 0 || r > modulus) {
            return Err(PartitionError::InvalidResidues(format!(
                "residue {bad} outside [1, {modulus}]"
            )));
        }
        if residues.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PartitionError::InvalidResidues(
                "residues not strictly increasing".into(),
            ));
        }
        Ok(Self { modulus, residues })
    }

    /// Builds from arbitrary residues, reducing, sorting and deduplicating.
    pub fn from_unsorted(modulus: Natural, residues: impl IntoIterator<Item = Natural>) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let mut residues: Vec<Natural> = residues
            .into_iter()
            .map(|r| least_positive_residue(r, modulus))
            .collect();
        residues.sort_unstable();
        residues.dedup();
        Self { modulus, residues }
    }

    pub fn modulus(&self) -> Natural {
        self.modulus
    }

    pub fn residues(&self) -> &[Natural] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, x: Natural) -> bool {
        self.residues
            .binary_search(&least_positive_residue(x, self.modulus))
            .is_ok()
    }

    /// Asymptotic density `len / modulus`.
    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.residues.len() as u64, self.modulus)
    }

    /// The same set written modulo a multiple of the current modulus.
    pub fn lift(&self, modulus: Natural) -> Result<Self, PartitionError> {
        if modulus % self.modulus != 0 {
            return Err(PartitionError::InvalidResidues(format!(
                "{modulus} is not a multiple of {}",
                self.modulus
            )));
        }
        let copies = modulus / self.modulus;
        let mut residues = Vec::with_capacity(self.residues.len() * copies as usize);
        for t in 0..copies {
            residues.extend(self.residues.iter().map(|r| r + t * self.modulus));
        }
        residues.sort_unstable();
        Ok(Self { modulus, residues })
    }
}

impl fmt::Display for ResidueClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {}:", self.modulus)?;
        for r in &self.residues {
            write!(f, " {r}")?;
        }
        Ok(())
    }
}

/// The column `m` with `x ∈ B_m`.
///
/// Let `j` be the first position with a nonzero factorial digit. A leading `1`
/// there means `m = j + 1`; otherwise `m − 1` is the first zero digit after
/// `j`, counting digits past the expansion as zero.
pub fn classify_b(x: Natural) -> Result<u32, PartitionError> {
    if x == 0 {
        return Err(PartitionError::Zero);
    }
    let mut digits = DigitStream::new(x).zip(1u32..);
    let (lead, j) = digits
        .by_ref()
        .find(|&(a, _)| a != 0)
        .expect("nonzero x has a nonzero digit");
    if lead == 1 {
        return Ok(j + 1);
    }
    let mut last = j;
    for (a, i) in digits {
        if a == 0 {
            return Ok(i + 1);
        }
        last = i;
    }
    Ok(last + 2)
}

/// Offset and base-`m` quotient digits of `x ∈ B_m`:
/// `x = x0 + m!·(b_0 + b_1·m + b_2·m² + …)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientDigits {
    pub x0: Natural,
    pub digits: Vec<u32>,
}

impl QuotientDigits {
    /// `b_i`, zero past the stored digits.
    pub fn digit(&self, i: usize) -> u32 {
        self.digits.get(i).copied().unwrap_or(0)
    }
}

/// `(x0, q)` with `x0` the least-positive residue of `x` mod `m!`.
fn split_offset(x: Natural, m: u32) -> (Natural, u128) {
    if let Ok(modulus) = factorial(m) {
        let x0 = least_positive_residue(x, modulus);
        return (x0, ((x - x0) / modulus) as u128);
    }
    // m ≤ 22 for any 64-bit x, so m! fits in 128 bits.
    let modulus = factorial_u128(m).expect("column index within 128-bit factorial range");
    let x = x as u128;
    let x0 = match x % modulus {
        0 => modulus,
        r => r,
    };
    (x0 as Natural, (x - x0) / modulus)
}

/// Quotient digits of `x` relative to its column `m`.
pub fn subclass_digits(x: Natural, m: u32) -> Result<QuotientDigits, PartitionError> {
    let actual = classify_b(x)?;
    if actual != m {
        return Err(PartitionError::ColumnMismatch { x, expected: m, actual });
    }
    let (x0, mut q) = split_offset(x, m);
    let base = m as u128;
    let mut digits = Vec::new();
    while q > 0 {
        digits.push((q % base) as u32);
        q /= base;
    }
    Ok(QuotientDigits { x0, digits })
}

/// The cell `(m, k)` with `x ∈ B_{m,k} ⊆ A_k`.
///
/// `k − 2` is the number of leading quotient digits equal to `m − 1`; the
/// digits are consumed one at a time and never materialised.
pub fn classify_a(x: Natural) -> Result<PartitionClass, PartitionError> {
    let m = classify_b(x)?;
    let (_, q) = split_offset(x, m);
    // q < 2^64 whenever m! fits in 64 bits, and q = 0 otherwise
    let mut q = q as u64;
    let base = m as u64;
    let top = base - 1;
    let mut k = 2;
    while q % base == top {
        q /= base;
        k += 1;
    }
    Ok(PartitionClass { m, k })
}

fn enumeration_guard(what: impl FnOnce() -> String, count: u128) -> Result<(), PartitionError> {
    if count > MAX_ENUMERATED_RESIDUES as u128 {
        return Err(PartitionError::TooManyResidues { what: what(), count });
    }
    Ok(())
}

fn check_column(m: u32) -> Result<(), PartitionError> {
    if m < 2 {
        return Err(PartitionError::OutOfRange(format!("column index {m} < 2")));
    }
    Ok(())
}

/// The closed-form classes of `B_m` modulo `m!`:
/// `0! + Σ_{j=1}^{m−2} a_j·j!` for `1 ≤ a_j ≤ j`.
pub fn b_residues(m: u32) -> Result<ResidueClassSet, PartitionError> {
    check_column(m)?;
    let modulus = factorial(m)?;
    enumeration_guard(|| format!("B{m}"), factorial(m - 2)? as u128)?;
    let mut residues = vec![1u64];
    for j in 1..=m.saturating_sub(2) {
        let weight = factorial(j)?;
        residues = residues
            .iter()
            .flat_map(|&r| (1..=j as u64).map(move |a| r + a * weight))
            .collect();
    }
    residues.sort_unstable();
    Ok(ResidueClassSet { modulus, residues })
}

/// Modulus `m^{k−1}·m!` of `B_{m,k}`.
pub fn bmk_modulus(m: u32, k: u32) -> Result<Natural, PartitionError> {
    check_column(m)?;
    if k < 2 {
        return Err(PartitionError::OutOfRange(format!("row index {k} < 2")));
    }
    (m as u64)
        .checked_pow(k - 1)
        .and_then(|p| p.checked_mul(factorial(m).ok()?))
        .ok_or_else(|| PartitionError::ModulusOverflow(format!("B{m},{k}")))
}

/// The classes of `B_{m,k}` modulo `m^{k−1}·m!`: the quotient digits
/// `b_0 … b_{k−3}` all equal `m − 1` and `b_{k−2} = c ≤ m − 2`.
pub fn bmk_residues(m: u32, k: u32) -> Result<ResidueClassSet, PartitionError> {
    let modulus = bmk_modulus(m, k)?;
    enumeration_guard(|| format!("B{m},{k}"), factorial(m - 1)? as u128)?;
    let column = b_residues(m)?;
    let mf = factorial(m)?;
    let step = (m as u64).pow(k - 2);
    let mut residues = Vec::with_capacity(column.len() * (m as usize - 1));
    for c in 0..(m as u64 - 1) {
        // Σ_{i<k−2} (m−1)·m^i = m^{k−2} − 1
        let offset = mf * ((c + 1) * step - 1);
        residues.extend(column.residues().iter().map(|x0| x0 + offset));
    }
    residues.sort_unstable();
    Ok(ResidueClassSet { modulus, residues })
}

/// One of the sets built by the partition: a row, a column, or a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selector {
    /// `A_k`
    Row(u32),
    /// `B_m`
    Column(u32),
    /// `B_{m,k}`
    Cell { m: u32, k: u32 },
}

impl Selector {
    /// Rejects indices outside `2..=MAX_COLUMN` / `2..=MAX_ROW`.
    pub fn validate(self) -> Result<Self, PartitionError> {
        let (m, k) = match self {
            Selector::Row(k) => (None, Some(k)),
            Selector::Column(m) => (Some(m), None),
            Selector::Cell { m, k } => (Some(m), Some(k)),
        };
        if let Some(m) = m {
            if !(2..=MAX_COLUMN).contains(&m) {
                return Err(PartitionError::OutOfRange(format!(
                    "column index {m} outside 2..={MAX_COLUMN}"
                )));
            }
        }
        if let Some(k) = k {
            if !(2..=MAX_ROW).contains(&k) {
                return Err(PartitionError::OutOfRange(format!(
                    "row index {k} outside 2..={MAX_ROW}"
                )));
            }
        }
        Ok(self)
    }

    /// Membership by classification. `x = 0` belongs to nothing.
    pub fn contains(self, x: Natural) -> bool {
        if x == 0 {
            return false;
        }
        match self {
            Selector::Column(m) => classify_b(x).is_ok_and(|c| c == m),
            Selector::Row(k) => classify_a(x).is_ok_and(|c| c.k == k),
            Selector::Cell { m, k } => classify_a(x).is_ok_and(|c| c == PartitionClass { m, k }),
        }
    }

    /// Closed-form residues, for columns and cells only.
    pub fn residues(self) -> Result<ResidueClassSet, PartitionError> {
        match self.validate()? {
            Selector::Column(m) => b_residues(m),
            Selector::Cell { m, k } => bmk_residues(m, k),
            Selector::Row(k) => Err(PartitionError::OutOfRange(format!(
                "A{k} is an infinite union of residue classes with growing moduli"
            ))),
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Row(k) => write!(f, "A{k}"),
            Selector::Column(m) => write!(f, "B{m}"),
            Selector::Cell { m, k } => write!(f, "B{m},{k}"),
        }
    }
}

impl FromStr for Selector {
    type Err = PartitionError;

    /// Parses `A<k>`, `B<m>` or `B<m>,<k>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PartitionError::OutOfRange(format!("malformed set descriptor {s:?}"));
        let index = |t: &str| -> Result<u32, PartitionError> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        let selector = if let Some(rest) = s.strip_prefix('A') {
            Selector::Row(index(rest)?)
        } else if let Some(rest) = s.strip_prefix('B') {
            match rest.split_once(',') {
                Some((m, k)) => Selector::Cell { m: index(m)?, k: index(k)? },
                None => Selector::Column(index(rest)?),
            }
        } else {
            return Err(bad());
        };
        selector.validate()
    }
}

/// Members of the selected set in `[1, limit]`, ascending, found by
/// classifying every number in range.
pub fn sequence(selector: Selector, limit: Natural) -> Result<Vec<Natural>, PartitionError> {
    let selector = selector.validate()?;
    Ok((1..=limit).filter(|&x| selector.contains(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeral::left_factorial;

    #[test]
    fn column_examples() {
        assert_eq!(classify_b(1).unwrap(), 2);
        assert_eq!(classify_b(10).unwrap(), 5);
        assert_eq!(classify_b(34).unwrap(), 6);
        assert_eq!(classify_b(2).unwrap(), 3);
        assert_eq!(classify_b(120).unwrap(), 6);
        assert_eq!(classify_b(0), Err(PartitionError::Zero));
    }

    #[test]
    fn cell_examples() {
        assert_eq!(classify_a(3).unwrap(), PartitionClass { m: 2, k: 3 });
        assert_eq!(classify_a(7).unwrap(), PartitionClass { m: 2, k: 4 });
        assert_eq!(classify_a(50).unwrap(), PartitionClass { m: 3, k: 4 });
        assert_eq!(classify_a(34).unwrap(), PartitionClass { m: 6, k: 2 });
        assert_eq!(classify_a(0), Err(PartitionError::Zero));
    }

    #[test]
    fn quotient_digits_examples() {
        assert_eq!(
            subclass_digits(50, 3).unwrap(),
            QuotientDigits { x0: 2, digits: vec![2, 2] }
        );
        assert_eq!(subclass_digits(1, 2).unwrap(), QuotientDigits { x0: 1, digits: vec![] });
        assert_eq!(subclass_digits(14, 3).unwrap(), QuotientDigits { x0: 2, digits: vec![2] });
        assert_eq!(
            subclass_digits(14, 2),
            Err(PartitionError::ColumnMismatch { x: 14, expected: 2, actual: 3 })
        );
    }

    #[test]
    fn extreme_inputs_classify() {
        let c = classify_a(u64::MAX).unwrap();
        assert!(c.m >= 2 && c.k >= 2);
        // 2^64 − 1 is odd, so column 2; its quotient (2^64 − 2)/2 = 2^63 − 1 is
        // 63 ones in binary.
        assert_eq!(c, PartitionClass { m: 2, k: 65 });
        let big = factorial(20).unwrap();
        assert_eq!(classify_b(big).unwrap(), 21);
        assert_eq!(classify_a(big).unwrap().k, 2);
    }

    #[test]
    fn column_residue_examples() {
        assert_eq!(b_residues(2).unwrap().to_string(), "mod 2: 1");
        assert_eq!(b_residues(3).unwrap().to_string(), "mod 6: 2");
        assert_eq!(b_residues(4).unwrap().to_string(), "mod 24: 4 6");
        assert_eq!(
            b_residues(5).unwrap().to_string(),
            "mod 120: 10 12 16 18 22 24"
        );
        assert!(matches!(b_residues(1), Err(PartitionError::OutOfRange(_))));
        assert!(matches!(
            b_residues(14),
            Err(PartitionError::TooManyResidues { .. })
        ));
        assert!(matches!(b_residues(21), Err(PartitionError::Numeral(_))));
    }

    #[test]
    fn cell_residue_examples() {
        assert_eq!(bmk_residues(2, 2).unwrap().to_string(), "mod 4: 1");
        assert_eq!(bmk_residues(2, 3).unwrap().to_string(), "mod 8: 3");
        assert_eq!(bmk_residues(2, 4).unwrap().to_string(), "mod 16: 7");
        assert_eq!(bmk_residues(3, 2).unwrap().to_string(), "mod 18: 2 8");
        assert_eq!(bmk_residues(3, 3).unwrap().to_string(), "mod 54: 14 32");
        assert_eq!(bmk_residues(3, 4).unwrap().to_string(), "mod 162: 50 104");
        assert_eq!(
            bmk_residues(4, 2).unwrap().to_string(),
            "mod 96: 4 6 28 30 52 54"
        );
        assert!(matches!(
            bmk_residues(2, 70),
            Err(PartitionError::ModulusOverflow(_))
        ));
    }

    #[test]
    fn residue_set_validation() {
        assert!(ResidueClassSet::new(6, vec![2, 2]).is_err());
        assert!(ResidueClassSet::new(6, vec![0]).is_err());
        assert!(ResidueClassSet::new(6, vec![7]).is_err());
        let s = ResidueClassSet::new(6, vec![6]).unwrap();
        assert!(s.contains(12));
        assert!(!s.contains(13));
        assert_eq!(ResidueClassSet::from_unsorted(6, [8, 2, 0]).residues(), &[2, 6]);
        assert_eq!(s.lift(18).unwrap().residues(), &[6, 12, 18]);
        assert!(s.lift(20).is_err());
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("A4".parse::<Selector>().unwrap(), Selector::Row(4));
        assert_eq!("B5".parse::<Selector>().unwrap(), Selector::Column(5));
        assert_eq!("B3,2".parse::<Selector>().unwrap(), Selector::Cell { m: 3, k: 2 });
        for bad in ["A", "A1", "B21", "A65", "C3", "B3,", "B+3", "a2", "B3,2,1"] {
            assert!(bad.parse::<Selector>().is_err(), "{bad}");
        }
        for s in ["A2", "B20", "B3,7"] {
            assert_eq!(s.parse::<Selector>().unwrap().to_string(), s);
        }
        assert!(Selector::Row(2).residues().is_err());
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(
            sequence(Selector::Column(4), 80).unwrap(),
            vec![4, 6, 28, 30, 52, 54, 76, 78]
        );
        assert_eq!(sequence(Selector::Row(5), 120).unwrap(), vec![15, 47, 79, 111]);
        assert!(sequence(Selector::Row(2), 0).unwrap().is_empty());
        assert!(sequence(Selector::Row(99), 10).is_err());
    }

    #[test]
    fn column_minimum_is_a_left_factorial() {
        for m in 2..=10 {
            let set = b_residues(m).unwrap();
            assert_eq!(set.len() as u64, factorial(m - 2).unwrap());
            assert_eq!(set.residues()[0], left_factorial(m - 1).unwrap());
            assert_eq!(*set.residues().last().unwrap(), factorial(m - 1).unwrap());
        }
    }
}
