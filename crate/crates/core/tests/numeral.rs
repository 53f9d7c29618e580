use proptest::prelude::*;
use zeta_partition::numeral::{
    factorial, from_digit_slice, from_factorial, left_factorial, to_factorial, FactorialDigits,
};

/// Greedy expansion by the largest factorial not exceeding the remainder.
fn greedy_digits(mut x: u64) -> Vec<u8> {
    if x == 0 {
        return Vec::new();
    }
    let mut n = 1;
    while factorial(n + 1).map_or(false, |f| f <= x) {
        n += 1;
    }
    let mut digits = vec![0u8; n as usize];
    for i in (1..=n).rev() {
        let f = factorial(i).unwrap();
        digits[i as usize - 1] = (x / f) as u8;
        x %= f;
    }
    digits
}

#[test]
fn matches_greedy_expansion() {
    for x in (0..20_000u64).chain([119, 5039, 40_319, 3_628_799, 1 << 40, u64::MAX]) {
        assert_eq!(to_factorial(x).digits(), greedy_digits(x).as_slice(), "x = {x}");
    }
}

#[test]
fn all_maximal_digits_are_one_below_a_factorial() {
    for n in 1..=20u32 {
        let digits: Vec<u8> = (1..=n as u8).collect();
        let expect = factorial(n + 1).map(|f| f - 1);
        match expect {
            Ok(v) => assert_eq!(from_digit_slice(&digits).unwrap(), v),
            // 21! − 1 does not fit
            Err(_) => assert!(from_digit_slice(&digits).is_err()),
        }
    }
}

proptest! {
    #[test]
    fn roundtrip(x in any::<u64>()) {
        let d = to_factorial(x);
        prop_assert_eq!(from_factorial(&d).unwrap(), x);
        prop_assert_eq!(FactorialDigits::new(d.digits().to_vec()).unwrap(), d);
    }

    #[test]
    fn order_matches_value(x in any::<u64>(), y in any::<u64>()) {
        prop_assert_eq!(to_factorial(x).cmp(&to_factorial(y)), x.cmp(&y));
    }

    #[test]
    fn left_factorial_steps(n in 1u32..21) {
        prop_assert_eq!(
            left_factorial(n + 1).unwrap() - left_factorial(n).unwrap(),
            factorial(n).unwrap()
        );
    }
}
