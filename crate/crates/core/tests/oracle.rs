use num_rational::Ratio;
use zeta_partition::numeral::factorial;
use zeta_partition::oracle::{
    greedy_assign, missed_density, missed_predicate, missed_set_check, oracle_equivalence,
    Assignment, CheckStatus, FirstAvailable, LastAvailable, SeededRandom, Strategy,
};
use zeta_partition::partition::classify_b;

/// Every other available class, starting from the second.
fn alternating(_level: u32, available: &[u64], count: usize) -> Vec<u64> {
    let mut picks: Vec<u64> = available.iter().skip(1).step_by(2).take(count).copied().collect();
    for &r in available.iter().step_by(2) {
        if picks.len() == count {
            break;
        }
        picks.push(r);
    }
    picks
}

fn check_structure(assignment: &Assignment, depth: u32) {
    let top = factorial(depth).unwrap();
    for j in 2..=depth {
        let level = assignment.level(j).unwrap();
        assert_eq!(level.modulus(), factorial(j).unwrap());
        assert_eq!(level.len() as u64, factorial(j - 2).unwrap());
        // density 1/(j(j−1))
        assert_eq!(level.density(), Ratio::new(1, (j * (j - 1)) as u64));
    }
    for x in 1..=top {
        let owners = (2..=depth)
            .filter(|&j| assignment.level(j).unwrap().contains(x))
            .count();
        assert!(owners <= 1, "{x} assigned {owners} times");
        assert_eq!(owners == 1, assignment.owner(x).is_some());
    }
}

#[test]
fn no_double_assignment_for_any_strategy() {
    let depth = 7;
    let strategies: Vec<(&str, Box<dyn Strategy>)> = vec![
        ("first", Box::new(FirstAvailable)),
        ("last", Box::new(LastAvailable)),
        ("random", Box::new(SeededRandom::new(2024))),
        ("alternating", Box::new(alternating)),
    ];
    for (name, mut strategy) in strategies {
        let assignment = greedy_assign(strategy.as_mut(), depth).unwrap();
        assert_eq!(assignment.depth(), depth, "{name}");
        check_structure(&assignment, depth);
    }
}

#[test]
fn first_available_covers_an_unbroken_prefix() {
    let depth = 8;
    let assignment = greedy_assign(&mut FirstAvailable, depth).unwrap();
    for x in 1..=factorial(depth - 1).unwrap() {
        assert_eq!(assignment.owner(x), Some(classify_b(x).unwrap()), "x = {x}");
    }
}

#[test]
fn greedy_equals_closed_form_to_depth_nine() {
    let eq = oracle_equivalence(9).unwrap();
    assert!(eq.holds, "{:?}", eq.counterexample);
}

#[test]
fn missed_set_to_depth_eight() {
    let check = missed_set_check(500, 8).unwrap();
    assert_eq!(check.status, CheckStatus::Confirmed);
    let expected: Vec<u64> = (1..=500).filter(|&x| missed_predicate(x)).collect();
    assert_eq!(check.missed, expected);
    let check = missed_set_check(5040, 8).unwrap();
    assert_eq!(check.status, CheckStatus::Confirmed);
}

#[test]
fn missed_density_is_one_over_n() {
    for n in 2..=9u32 {
        assert_eq!(missed_density(n).unwrap(), Ratio::new(1, n as u64), "n = {n}");
    }
}

#[test]
fn progressions_meet_a_level() {
    for mut strategy in [Box::new(FirstAvailable) as Box<dyn Strategy>, Box::new(LastAvailable)] {
        let assignment = greedy_assign(strategy.as_mut(), 9).unwrap();
        for y in 1..=30u64 {
            for x in 1..=y {
                let hit = assignment
                    .progression_hit(x, y)
                    .unwrap_or_else(|| panic!("{x} mod {y} never met"));
                assert!(assignment.level(hit.level).unwrap().contains(hit.residue));
                // witness: a member of the progression lying in the chosen class
                let witness = (0..hit.modulus)
                    .map(|t| x + t * y)
                    .find(|&v| v % hit.modulus == hit.residue % hit.modulus)
                    .expect("intersection is nonempty");
                assert_eq!(assignment.owner(witness), Some(hit.level));
            }
        }
    }
}
