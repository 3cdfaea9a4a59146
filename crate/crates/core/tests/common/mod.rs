// SPDX-License-Identifier: Apache-2.0

//! Shared generators and brute-force oracles. The oracles work on plain
//! integers and block membership only; they never touch the library's
//! multiset or verifier code.

#![allow(dead_code)]

use edfkit::{Family, GroupElement, GroupSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(values: &[u64]) -> u64 {
    values.iter().fold(1, |acc, &v| acc / gcd(acc, v) * v)
}

/// Blocks as integer lists; every test family here is cyclic.
pub fn int_blocks(family: &Family) -> Vec<Vec<u64>> {
    family.int_blocks().expect("cyclic family")
}

/// Family over `Z_n` from an owner label per element; label `m` means unused.
pub fn family_from_labels(n: u64, m: usize, labels: &[usize]) -> Family {
    let mut blocks = vec![Vec::new(); m];
    for (x, &l) in labels.iter().enumerate() {
        if l < m {
            blocks[l].push(x as u64);
        }
    }
    let refs: Vec<&[u64]> = blocks.iter().map(Vec::as_slice).collect();
    Family::cyclic(n, &refs).expect("labels give disjoint blocks")
}

/// Random disjoint families over `Z_n`, `2 <= n <= max_n`, `2 <= m <= max_m`.
pub fn cyclic_family(max_n: u64, max_m: usize) -> impl Strategy<Value = Family> {
    (2..=max_n)
        .prop_flat_map(move |n| (Just(n), 2..=max_m.min(n as usize)))
        .prop_flat_map(|(n, m)| {
            (
                Just(n),
                Just(m),
                proptest::collection::vec(0..=m, n as usize),
            )
        })
        .prop_filter("every block nonempty", |(_, m, labels)| {
            (0..*m).all(|b| labels.contains(&b))
        })
        .prop_map(|(n, m, labels)| family_from_labels(n, m, &labels))
}

/// Random disjoint families over `Z_a × Z_b`.
pub fn product_family() -> impl Strategy<Value = Family> {
    (2u64..=5, 2u64..=5, 2usize..=4)
        .prop_flat_map(|(p, q, m)| {
            (
                Just(p),
                Just(q),
                Just(m),
                proptest::collection::vec(0..=m, (p * q) as usize),
            )
        })
        .prop_filter("every block nonempty", |(_, _, m, labels)| {
            (0..*m).all(|b| labels.contains(&b))
        })
        .prop_map(|(p, q, m, labels)| {
            let group = GroupSpec::new(&[p, q]).unwrap();
            let mut blocks = vec![Vec::new(); m];
            for (x, &l) in labels.iter().enumerate() {
                if l < m {
                    let x = x as u64;
                    blocks[l].push(GroupElement::from_coords(vec![x / q, x % q]));
                }
            }
            Family::new(group, blocks).unwrap()
        })
}

/// Seeded random disjoint family over `Z_n` for sweeps outside proptest.
pub fn random_family(rng: &mut ChaCha8Rng, max_n: u64, max_m: usize) -> Family {
    loop {
        let n = rng.random_range(2..=max_n);
        let m = rng.random_range(2..=max_m.min(n as usize));
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..=m)).collect();
        if (0..m).all(|b| labels.contains(&b)) {
            return family_from_labels(n, m, &labels);
        }
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weighted external count of `delta` over `Z_n`, by direct pair counting.
pub fn brute_weighted_count(n: u64, blocks: &[Vec<u64>], delta: u64) -> u64 {
    let sizes: Vec<u64> = blocks.iter().map(|b| b.len() as u64).collect();
    let k_tilde = lcm(&sizes);
    let mut count = 0;
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            for &x in bi {
                for &y in bj {
                    if (x + n - y) % n == delta {
                        count += k_tilde / sizes[j];
                    }
                }
            }
        }
    }
    count
}

/// `max(1, max_δ count)` by direct pair counting.
pub fn brute_lambda(n: u64, blocks: &[Vec<u64>]) -> u64 {
    (1..n)
        .map(|d| brute_weighted_count(n, blocks, d))
        .max()
        .unwrap_or(0)
        .max(1)
}

/// Success probability of offset `delta` in the tampering game, summed over
/// sources and encodings with membership tests on the raw blocks.
pub fn brute_game(n: u64, blocks: &[Vec<u64>], delta: u64) -> BigRational {
    let m = blocks.len() as i64;
    let mut total = BigRational::from_integer(BigInt::from(0));
    for (s, block) in blocks.iter().enumerate() {
        let hits = block
            .iter()
            .filter(|&&g| {
                let moved = (g + delta) % n;
                blocks
                    .iter()
                    .enumerate()
                    .any(|(t, other)| t != s && other.contains(&moved))
            })
            .count() as i64;
        total += BigRational::new(BigInt::from(hits), BigInt::from(m * block.len() as i64));
    }
    total
}

pub fn brute_rho(n: u64, blocks: &[Vec<u64>]) -> BigRational {
    (1..n).map(|d| brute_game(n, blocks, d)).max().unwrap()
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
