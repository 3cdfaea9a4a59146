// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{lcm, rat};
use edfkit::bounds::{partition_count, per_profile_bound};
use edfkit::cyclotomy::is_prime;
use edfkit::{improved_bound, partitions, ps_bound};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

/// Partitions of `a` into `m` non-decreasing parts by plain recursion.
fn brute_partitions(a: u64, m: usize, lo: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if m == 0 {
        if a == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for v in lo..=a {
        prefix.push(v);
        brute_partitions(a - v, m - 1, v, prefix, out);
        prefix.pop();
    }
}

#[test]
fn partitions_match_recursion() {
    for a in 1..=18u64 {
        for m in 1..=a as usize {
            let mut expected = Vec::new();
            brute_partitions(a, m, 1, &mut Vec::new(), &mut expected);
            let got: Vec<Vec<u64>> = partitions(a, m).unwrap().collect();
            assert_eq!(got, expected, "a = {a}, m = {m}");
            assert_eq!(partition_count(a, m), BigUint::from(expected.len()));
        }
    }
}

#[test]
fn strict_improvement_when_n_minus_one_is_prime() {
    for n in 4..=40u64 {
        if !is_prime(n - 1) {
            continue;
        }
        for m in 2..=5usize {
            for a in m as u64..(n - 1) {
                let r = improved_bound(n, m, a, None).unwrap();
                assert!(r.strict_by_primality);
                assert!(r.strict_improvement, "n = {n}, m = {m}, a = {a}");
            }
        }
    }
}

proptest! {
    #[test]
    fn bound_ordering(n in 3u64..40, m in 2usize..6, a_off in 0u64..40) {
        prop_assume!((m as u64) <= n);
        let a = m as u64 + a_off % (n - m as u64 + 1);
        let r = improved_bound(n, m, a, None).unwrap();
        let ps = ps_bound(n, m, a).unwrap();
        prop_assert_eq!(&r.ps_bound, &ps);
        prop_assert!(ps <= r.improved_bound);
        let mut divisible_attains = false;
        for k in partitions(a, m).unwrap() {
            let per_k = per_profile_bound(n, m, &k).unwrap();
            prop_assert!(r.improved_bound <= per_k);
            let k_tilde = lcm(&k);
            if (k_tilde * a * (m as u64 - 1)).is_multiple_of(n - 1) {
                prop_assert_eq!(&per_k, &ps);
                divisible_attains = true;
            }
        }
        if divisible_attains {
            prop_assert_eq!(&r.improved_bound, &ps);
        }
    }

    #[test]
    fn rationals_are_reduced(n in 3u64..60, m in 2usize..6, a_off in 0u64..60) {
        prop_assume!((m as u64) <= n);
        let a = m as u64 + a_off % (n - m as u64 + 1);
        let r = improved_bound(n, m, a, None).unwrap();
        for q in [&r.ps_bound, &r.improved_bound, &r.argmin.bound, &r.argmin.rho_gap] {
            prop_assert!(q.denom() > &0.into());
            prop_assert!(q.numer().gcd(q.denom()).is_one());
        }
    }

    #[test]
    fn argmin_is_first_minimum(n in 3u64..30, m in 2usize..5, a_off in 0u64..30) {
        prop_assume!((m as u64) <= n);
        let a = m as u64 + a_off % (n - m as u64 + 1);
        let r = improved_bound(n, m, a, None).unwrap();
        let first = partitions(a, m)
            .unwrap()
            .find(|k| per_profile_bound(n, m, k).unwrap() == r.improved_bound)
            .unwrap();
        prop_assert_eq!(r.argmin.sizes, first);
    }
}

#[test]
fn example_values() {
    assert_eq!(
        improved_bound(10, 3, 5, None).unwrap().improved_bound,
        rat(4, 9)
    );
    assert_eq!(ps_bound(10, 3, 5).unwrap(), rat(10, 27));
    assert_eq!(
        improved_bound(12, 3, 5, None).unwrap().improved_bound,
        rat(1, 3)
    );
}
