//! Brute-force greedy construction of the columns.
//!
//! Level `j` picks `(j−2)!` residue classes modulo `j!` that no earlier level
//! has claimed. Which ones it picks is up to a [`Strategy`]: taking the
//! smallest available classes reproduces the closed form of
//! [`b_residues`](crate::partition::b_residues); taking the largest leaves a
//! density-zero "missed set" that is never assigned.

use num_integer::Integer;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numeral::{factorial, to_factorial, Natural};
use crate::partition::{self, least_positive_residue, ResidueClassSet};

/// Deepest level the oracle will construct (`9! = 362880` residues).
pub const MAX_DEPTH: u32 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("depth {0} outside 2..={MAX_DEPTH}")]
    Depth(u32),
    #[error("level {level}: strategy returned {got} classes, expected {expected}")]
    WrongCount { level: u32, expected: usize, got: usize },
    #[error("level {level}: residue {residue} is not available")]
    Unavailable { level: u32, residue: Natural },
    #[error("level {level}: only {available} classes available, {needed} needed")]
    Exhausted { level: u32, available: usize, needed: usize },
    #[error("missed-set check needs N <= (depth-1)! = {bound}, got {n}")]
    Range { n: Natural, bound: Natural },
}

/// A rule choosing `count` classes for level `j` out of the ascending list of
/// available residues mod `j!`.
pub trait Strategy {
    fn choose(&mut self, level: u32, available: &[Natural], count: usize) -> Vec<Natural>;
}

impl<F> Strategy for F
where
    F: FnMut(u32, &[Natural], usize) -> Vec<Natural>,
{
    fn choose(&mut self, level: u32, available: &[Natural], count: usize) -> Vec<Natural> {
        self(level, available, count)
    }
}

/// Smallest available classes first.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstAvailable;

impl Strategy for FirstAvailable {
    fn choose(&mut self, _level: u32, available: &[Natural], count: usize) -> Vec<Natural> {
        available.iter().take(count).copied().collect()
    }
}

/// Largest available classes first.
#[derive(Debug, Clone, Copy, Default)]
pub struct LastAvailable;

impl Strategy for LastAvailable {
    fn choose(&mut self, _level: u32, available: &[Natural], count: usize) -> Vec<Natural> {
        available.iter().rev().take(count).copied().collect()
    }
}

/// Uniformly random classes from a seeded generator; the same seed replays
/// the same construction.
#[derive(Debug, Clone)]
pub struct SeededRandom {
    rng: ChaCha8Rng,
}

impl SeededRandom {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Strategy for SeededRandom {
    fn choose(&mut self, _level: u32, available: &[Natural], count: usize) -> Vec<Natural> {
        rand::seq::index::sample(&mut self.rng, available.len(), count.min(available.len()))
            .into_iter()
            .map(|i| available[i])
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Level {
    classes: ResidueClassSet,
    // mask[r - 1] is set when r mod j! was chosen at this level
    mask: Vec<bool>,
}

/// The classes chosen at each level `2..=depth`.
#[derive(Debug, Clone)]
pub struct Assignment {
    levels: Vec<Level>,
}

impl Assignment {
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 + 1
    }

    /// Classes chosen for level `j`, modulo `j!`.
    pub fn level(&self, j: u32) -> Option<&ResidueClassSet> {
        let idx = j.checked_sub(2)? as usize;
        self.levels.get(idx).map(|l| &l.classes)
    }

    /// The level whose classes contain `x`, if any up to the constructed depth.
    pub fn owner(&self, x: Natural) -> Option<u32> {
        self.levels.iter().zip(2u32..).find_map(|(level, j)| {
            let r = least_positive_residue(x, level.classes.modulus());
            level.mask[(r - 1) as usize].then_some(j)
        })
    }

    /// The first level and chosen class `s mod j!` that meets the progression
    /// `{x + t·y}` in a full subprogression, i.e. `s ≡ x (mod gcd(j!, y))`.
    pub fn progression_hit(&self, x: Natural, y: Natural) -> Option<ProgressionHit> {
        self.levels.iter().zip(2u32..).find_map(|(level, j)| {
            let modulus = level.classes.modulus();
            let g = modulus.gcd(&y);
            level
                .classes
                .residues()
                .iter()
                .find(|&&s| s % g == x % g)
                .map(|&residue| ProgressionHit { level: j, residue, modulus })
        })
    }
}

/// A chosen class `residue mod modulus` at `level` that meets a progression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgressionHit {
    pub level: u32,
    pub residue: Natural,
    pub modulus: Natural,
}

fn check_depth(depth: u32) -> Result<(), OracleError> {
    if !(2..=MAX_DEPTH).contains(&depth) {
        return Err(OracleError::Depth(depth));
    }
    Ok(())
}

/// Runs the greedy construction for levels `2..=depth`.
///
/// A residue `r ∈ [1, j!]` is available at level `j` when `r mod i!` was not
/// chosen at any level `i < j`.
pub fn greedy_assign<S: Strategy + ?Sized>(
    strategy: &mut S,
    depth: u32,
) -> Result<Assignment, OracleError> {
    check_depth(depth)?;
    let mut levels: Vec<Level> = Vec::with_capacity(depth as usize - 1);
    for j in 2..=depth {
        let modulus = factorial(j).expect("depth is bounded");
        let needed = factorial(j - 2).expect("depth is bounded") as usize;
        let available: Vec<Natural> = (1..=modulus)
            .filter(|&r| {
                levels.iter().all(|level| {
                    let s = least_positive_residue(r, level.classes.modulus());
                    !level.mask[(s - 1) as usize]
                })
            })
            .collect();
        if available.len() < needed {
            return Err(OracleError::Exhausted { level: j, available: available.len(), needed });
        }
        let chosen = strategy.choose(j, &available, needed);
        if chosen.len() != needed {
            return Err(OracleError::WrongCount { level: j, expected: needed, got: chosen.len() });
        }
        let mut mask = vec![false; modulus as usize];
        for &r in &chosen {
            let fresh = r >= 1 && available.binary_search(&r).is_ok() && !mask[(r - 1) as usize];
            if !fresh {
                return Err(OracleError::Unavailable { level: j, residue: r });
            }
            mask[(r - 1) as usize] = true;
        }
        let classes = ResidueClassSet::from_unsorted(modulus, chosen);
        levels.push(Level { classes, mask });
    }
    Ok(Assignment { levels })
}

/// Convenience form of [`Assignment::progression_hit`] that builds the
/// assignment first.
pub fn progression_hit<S: Strategy + ?Sized>(
    x: Natural,
    y: Natural,
    strategy: &mut S,
    depth: u32,
) -> Result<Option<ProgressionHit>, OracleError> {
    Ok(greedy_assign(strategy, depth)?.progression_hit(x, y))
}

/// First disagreement between the greedy and closed-form columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub level: u32,
    pub residue: Natural,
    /// Whether the residue came from the greedy side (otherwise closed form).
    pub in_greedy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

/// Compares first-available greedy levels with the closed-form columns.
pub fn oracle_equivalence(depth: u32) -> Result<Equivalence, OracleError> {
    let assignment = greedy_assign(&mut FirstAvailable, depth)?;
    for j in 2..=depth {
        let greedy = assignment.level(j).expect("level constructed");
        let closed = partition::b_residues(j).expect("depth is bounded");
        if greedy == &closed {
            continue;
        }
        let counterexample = greedy
            .residues()
            .iter()
            .find(|r| !closed.contains(**r))
            .map(|&residue| Counterexample { level: j, residue, in_greedy: true })
            .or_else(|| {
                closed
                    .residues()
                    .iter()
                    .find(|r| !greedy.contains(**r))
                    .map(|&residue| Counterexample { level: j, residue, in_greedy: false })
            });
        return Ok(Equivalence { holds: false, counterexample });
    }
    Ok(Equivalence { holds: true, counterexample: None })
}

/// Whether `x` lies in the conjectured missed set `1 + Σ a_i·i!`, `a_i < i`.
/// Returns `false` for `x = 0`.
pub fn missed_predicate(x: Natural) -> bool {
    x != 0
        && to_factorial(x - 1)
            .digits()
            .iter()
            .zip(1u8..)
            .all(|(&a, i)| a < i)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    /// Greedy and predicate agree on every `x ≤ N`.
    Confirmed,
    /// Stabilised greedy output disagrees with the predicate at these points.
    Mismatch(Vec<Natural>),
    /// Depths `d − 1` and `d` disagree below `N`; these points are unsettled.
    Inconclusive(Vec<Natural>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissedSetCheck {
    pub status: CheckStatus,
    /// Points `x ≤ N` left unassigned by the last-available construction.
    pub missed: Vec<Natural>,
}

/// Runs the last-available construction to `depth` and `depth − 1`, checks
/// that the unassigned points below `n` agree, and compares them with
/// [`missed_predicate`].
pub fn missed_set_check(n: Natural, depth: u32) -> Result<MissedSetCheck, OracleError> {
    check_depth(depth)?;
    check_depth(depth - 1)?;
    let bound = factorial(depth - 1).expect("depth is bounded");
    if n > bound {
        return Err(OracleError::Range { n, bound });
    }
    let deep = greedy_assign(&mut LastAvailable, depth)?;
    let shallow = greedy_assign(&mut LastAvailable, depth - 1)?;
    let missed: Vec<Natural> = (1..=n).filter(|&x| deep.owner(x).is_none()).collect();
    let unsettled: Vec<Natural> = (1..=n)
        .filter(|&x| deep.owner(x).is_none() != shallow.owner(x).is_none())
        .collect();
    let status = if !unsettled.is_empty() {
        CheckStatus::Inconclusive(unsettled)
    } else {
        let wrong: Vec<Natural> = (1..=n)
            .filter(|&x| deep.owner(x).is_none() != missed_predicate(x))
            .collect();
        if wrong.is_empty() {
            CheckStatus::Confirmed
        } else {
            CheckStatus::Mismatch(wrong)
        }
    };
    Ok(MissedSetCheck { status, missed })
}

/// Fraction of `x ≤ n!` satisfying [`missed_predicate`], exactly.
pub fn missed_density(n: u32) -> Result<Ratio<u64>, OracleError> {
    check_depth(n)?;
    let total = factorial(n).expect("depth is bounded");
    let count = (1..=total).filter(|&x| missed_predicate(x)).count() as u64;
    Ok(Ratio::new(count, total))
}
