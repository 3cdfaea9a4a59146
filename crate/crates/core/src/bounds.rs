// SPDX-License-Identifier: Apache-2.0

//! Closed-form bounds on `λ` and on the tampering probability `ρ`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomy::is_prime;
use crate::error::{EdfError, Result};
use crate::group::lcm_list;
use crate::ratio::{self, Rational};

/// Largest `a` for which [`improved_bound`] enumerates partitions by default.
pub const DEFAULT_PARTITION_CAP: u64 = 64;

fn check_nm(n: u64, m: usize) -> Result<()> {
    if n < 2 {
        return Err(EdfError::InvalidInput(format!(
            "group order {n} is below 2"
        )));
    }
    if m < 2 {
        return Err(EdfError::InvalidInput(format!("m = {m} is below 2")));
    }
    Ok(())
}

fn check_profile(n: u64, m: usize, sizes: &[u64]) -> Result<u64> {
    check_nm(n, m)?;
    if sizes.len() != m {
        return Err(EdfError::InvalidInput(format!(
            "size profile has {} entries, expected {m}",
            sizes.len()
        )));
    }
    if sizes.contains(&0) {
        return Err(EdfError::InvalidInput(
            "block sizes must be positive".into(),
        ));
    }
    let a = sizes
        .iter()
        .try_fold(0u64, |acc, &k| acc.checked_add(k))
        .ok_or(EdfError::Overflow("sum of block sizes"))?;
    if a > n {
        return Err(EdfError::Infeasible(format!(
            "{a} elements cannot be placed disjointly in a group of order {n}"
        )));
    }
    Ok(a)
}

fn check_nma(n: u64, m: usize, a: u64) -> Result<()> {
    check_nm(n, m)?;
    if (m as u64) > a {
        return Err(EdfError::Infeasible(format!(
            "{m} nonempty blocks need at least {m} elements, got {a}"
        )));
    }
    if a > n {
        return Err(EdfError::Infeasible(format!(
            "{a} elements cannot be placed disjointly in a group of order {n}"
        )));
    }
    Ok(())
}

/// `k̃·a·(m-1)`, the size of the weighted external union.
fn weighted_total(k_tilde: &BigUint, a: u64, m: usize) -> BigUint {
    k_tilde * BigUint::from(a) * BigUint::from(m as u64 - 1)
}

/// `⌈k̃a(m-1)/(n-1)⌉`, the least `λ` any disjoint family with profile `K` can have.
pub fn lambda_lower_bound(n: u64, m: usize, sizes: &[u64]) -> Result<BigUint> {
    let a = check_profile(n, m, sizes)?;
    let k_tilde = lcm_list(sizes)?;
    Ok(weighted_total(&k_tilde, a, m).div_ceil(&BigUint::from(n - 1)))
}

/// Whether `(n-1) | k̃a(m-1)`, necessary for an SWEDF (equivalently an RWEDF).
pub fn swedf_divisibility(n: u64, m: usize, sizes: &[u64]) -> Result<bool> {
    let a = check_profile(n, m, sizes)?;
    let k_tilde = lcm_list(sizes)?;
    Ok((weighted_total(&k_tilde, a, m) % BigUint::from(n - 1)).is_zero())
}

/// `a(m-1) / (m(n-1))`.
pub fn ps_bound(n: u64, m: usize, a: u64) -> Result<Rational> {
    check_nma(n, m, a)?;
    let m = m as u64;
    Ok(ratio::ratio(
        BigInt::from(a) * BigInt::from(m - 1),
        BigInt::from(m) * BigInt::from(n - 1),
    ))
}

/// `1/(k̃m)`: how far a profile optimum meeting the λ floor can sit above the overall optimum.
pub fn rho_gap_bound(n: u64, m: usize, sizes: &[u64]) -> Result<Rational> {
    check_profile(n, m, sizes)?;
    let k_tilde = lcm_list(sizes)?;
    Ok(Rational::new(
        BigInt::one(),
        BigInt::from(k_tilde) * BigInt::from(m as u64),
    ))
}

/// `⌈k̃a(m-1)/(n-1)⌉ / (k̃m)` for one profile.
pub fn per_profile_bound(n: u64, m: usize, sizes: &[u64]) -> Result<Rational> {
    let floor = lambda_lower_bound(n, m, sizes)?;
    let k_tilde = lcm_list(sizes)?;
    Ok(ratio::from_biguint(
        &floor,
        &(k_tilde * BigUint::from(m as u64)),
    ))
}

/// Partitions of `a` into exactly `m` positive parts, each non-decreasing,
/// yielded in lexicographic order.
pub fn partitions(a: u64, m: usize) -> Result<Partitions> {
    if m == 0 {
        return Err(EdfError::InvalidInput(
            "cannot partition into 0 parts".into(),
        ));
    }
    if m as u64 > a {
        return Err(EdfError::Infeasible(format!(
            "{a} cannot be split into {m} positive parts"
        )));
    }
    Ok(Partitions {
        a,
        current: Some(first_partition(a, m, 1)),
    })
}

/// Lexicographically smallest non-decreasing `m`-tuple with entries `>= lo`
/// summing to `a`. Assumes it exists.
fn first_partition(a: u64, m: usize, lo: u64) -> Vec<u64> {
    let mut parts = vec![lo; m];
    parts[m - 1] = a - lo * (m as u64 - 1);
    parts
}

pub struct Partitions {
    a: u64,
    current: Option<Vec<u64>>,
}

impl Iterator for Partitions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let m = out.len();
        // Raise the rightmost position that can grow while leaving room for
        // a non-decreasing tail, then refill the tail minimally.
        let mut prefix: u64 = out.iter().sum::<u64>() - out[m - 1];
        for i in (0..m.saturating_sub(1)).rev() {
            prefix -= out[i];
            let v = out[i] + 1;
            let tail_len = (m - i) as u64;
            if prefix + v * tail_len <= self.a {
                let mut next = out[..i].to_vec();
                next.extend(first_partition(self.a - prefix, m - i, v));
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Number of partitions of `a` into exactly `m` positive parts.
pub fn partition_count(a: u64, m: usize) -> BigUint {
    let (a, m) = (a as usize, m);
    if m > a {
        return BigUint::zero();
    }
    // p(s, j) = p(s-1, j-1) + p(s-j, j)
    let mut table = vec![vec![BigUint::zero(); m + 1]; a + 1];
    table[0][0] = BigUint::one();
    for s in 1..=a {
        for j in 1..=m.min(s) {
            table[s][j] = &table[s - 1][j - 1] + &table[s - j][j];
        }
    }
    table[a][m].clone()
}

/// Bound figures for one concrete size profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileBound {
    #[serde(rename = "K")]
    pub sizes: Vec<u64>,
    #[serde(serialize_with = "ratio::serialize_biguint")]
    pub k_tilde: BigUint,
    #[serde(serialize_with = "ratio::serialize_biguint")]
    pub lambda_floor: BigUint,
    #[serde(serialize_with = "ratio::serialize")]
    pub bound: Rational,
    #[serde(serialize_with = "ratio::serialize")]
    pub rho_gap: Rational,
    pub swedf_divisible: bool,
}

impl ProfileBound {
    pub fn new(n: u64, m: usize, sizes: &[u64]) -> Result<Self> {
        let lambda_floor = lambda_lower_bound(n, m, sizes)?;
        let k_tilde = lcm_list(sizes)?;
        let denom = &k_tilde * BigUint::from(m as u64);
        Ok(Self {
            sizes: sizes.to_vec(),
            bound: ratio::from_biguint(&lambda_floor, &denom),
            rho_gap: ratio::from_biguint(&BigUint::one(), &denom),
            swedf_divisible: swedf_divisibility(n, m, sizes)?,
            k_tilde,
            lambda_floor,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub m: usize,
    pub a: u64,
    #[serde(serialize_with = "ratio::serialize")]
    pub ps_bound: Rational,
    #[serde(serialize_with = "ratio::serialize")]
    pub improved_bound: Rational,
    /// Profile attaining the improved bound (lexicographically smallest on ties).
    pub argmin: ProfileBound,
    pub strict_improvement: bool,
    /// Whether `n-1` is prime and `a < n-1`, which forces a strict improvement.
    pub strict_by_primality: bool,
    pub partitions: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileBound>,
}

/// `min_K ⌈k̃a(m-1)/(n-1)⌉/(k̃m)` over partitions `K` of `a` into `m` parts.
///
/// `cap` bounds `a` to keep the enumeration tractable; pass `None` for
/// [`DEFAULT_PARTITION_CAP`].
pub fn improved_bound(n: u64, m: usize, a: u64, cap: Option<u64>) -> Result<BoundReport> {
    check_nma(n, m, a)?;
    let cap = cap.unwrap_or(DEFAULT_PARTITION_CAP);
    if a > cap {
        return Err(EdfError::PartitionCapExceeded { a, cap });
    }
    let ps = ps_bound(n, m, a)?;
    let mut best: Option<ProfileBound> = None;
    let mut count = 0u64;
    for sizes in partitions(a, m)? {
        count += 1;
        let candidate = ProfileBound::new(n, m, &sizes)?;
        if best.as_ref().is_none_or(|b| candidate.bound < b.bound) {
            best = Some(candidate);
        }
    }
    let argmin = best.expect("at least one partition exists");
    Ok(BoundReport {
        n,
        m,
        a,
        strict_improvement: argmin.bound > ps,
        strict_by_primality: is_prime(n - 1) && a < n - 1,
        improved_bound: argmin.bound.clone(),
        ps_bound: ps,
        argmin,
        partitions: count,
        profile: None,
    })
}

/// [`improved_bound`] for `a = ΣK`, with the figures for `K` itself attached.
pub fn bound_for_profile(n: u64, m: usize, sizes: &[u64], cap: Option<u64>) -> Result<BoundReport> {
    let a = check_profile(n, m, sizes)?;
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let mut report = improved_bound(n, m, a, cap)?;
    report.profile = Some(ProfileBound::new(n, m, &sorted)?);
    Ok(report)
}
