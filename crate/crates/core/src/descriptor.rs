//! Textual set descriptors: `A<k>`, `B<m>`, `B<m>,<k>`, `missed`, `powerfree<k>`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::{max_exponent, DensityTarget};
use crate::numeral::Natural;
use crate::oracle::missed_predicate;
use crate::partition::{Selector, MAX_ROW};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed set descriptor {input:?}: {reason}")]
pub struct DescriptorError {
    pub input: String,
    pub reason: String,
}

/// Any set the tools can list, count or measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetDescriptor {
    Partition(Selector),
    /// Points never assigned by the last-available construction.
    Missed,
    /// Numbers whose largest prime exponent is exactly `k` (1 counts as `k = 1`).
    Powerfree(u32),
}

impl SetDescriptor {
    pub fn contains(&self, x: Natural) -> bool {
        match *self {
            SetDescriptor::Partition(selector) => selector.contains(x),
            SetDescriptor::Missed => missed_predicate(x),
            SetDescriptor::Powerfree(k) => max_exponent(x).is_ok_and(|e| e == k),
        }
    }

    pub fn target(&self) -> DensityTarget {
        match *self {
            SetDescriptor::Partition(Selector::Row(k)) => DensityTarget::Row(k),
            SetDescriptor::Partition(Selector::Column(m)) => DensityTarget::Column(m),
            SetDescriptor::Partition(Selector::Cell { m, k }) => DensityTarget::Cell { m, k },
            SetDescriptor::Missed => DensityTarget::Zero,
            SetDescriptor::Powerfree(k) => DensityTarget::Powerfree(k),
        }
    }

    /// Members in `[1, limit]`, ascending.
    pub fn members(&self, limit: Natural) -> Vec<Natural> {
        (1..=limit).filter(|&x| self.contains(x)).collect()
    }
}

impl From<Selector> for SetDescriptor {
    fn from(selector: Selector) -> Self {
        SetDescriptor::Partition(selector)
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetDescriptor::Partition(s) => s.fmt(f),
            SetDescriptor::Missed => f.write_str("missed"),
            SetDescriptor::Powerfree(k) => write!(f, "powerfree{k}"),
        }
    }
}

impl FromStr for SetDescriptor {
    type Err = DescriptorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: String| DescriptorError { input: s.to_string(), reason };
        if s == "missed" {
            return Ok(SetDescriptor::Missed);
        }
        if let Some(rest) = s.strip_prefix("powerfree") {
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(fail("expected powerfree<k>".into()));
            }
            let k: u32 = rest.parse().map_err(|_| fail("index too large".into()))?;
            if !(1..=MAX_ROW).contains(&k) {
                return Err(fail(format!("powerfree index outside 1..={MAX_ROW}")));
            }
            return Ok(SetDescriptor::Powerfree(k));
        }
        s.parse::<Selector>()
            .map(SetDescriptor::Partition)
            .map_err(|e| fail(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["A2", "B5", "B3,2", "missed", "powerfree1", "powerfree64"] {
            assert_eq!(s.parse::<SetDescriptor>().unwrap().to_string(), s);
        }
        for bad in ["", "missing", "powerfree", "powerfree0", "powerfree65", "pf1", "A0", "B1", "B2,1"] {
            assert!(bad.parse::<SetDescriptor>().is_err(), "{bad}");
        }
    }

    #[test]
    fn membership() {
        assert_eq!(SetDescriptor::Missed.members(33), vec![1, 3, 7, 9, 13, 15, 25, 27, 31, 33]);
        assert_eq!(SetDescriptor::Powerfree(2).members(20), vec![4, 9, 12, 18, 20]);
        let b5: SetDescriptor = "B5".parse().unwrap();
        assert_eq!(b5.members(30), vec![10, 12, 16, 18, 22, 24]);
        assert!(!b5.contains(0));
    }
}
