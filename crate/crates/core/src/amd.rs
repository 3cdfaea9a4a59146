// SPDX-License-Identifier: Apache-2.0

//! The weak tampering game on a family of encoding sets.
//!
//! Block `s` is the set `A_s` of valid encodings of source `s`. A source is
//! drawn uniformly, then an encoding `g` uniformly from `A_s`; the adversary,
//! blind to both, adds a fixed `Δ ≠ 0` and wins when `g + Δ` is a valid
//! encoding of a different source. A randomized adversary averages these
//! per-`Δ` probabilities, so the best deterministic `Δ` is optimal.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{improved_bound, lambda_lower_bound, ps_bound};
use crate::error::{EdfError, Result};
use crate::family::Family;
use crate::group::GroupElement;
use crate::multiset::weighted_external_union;
use crate::ratio::{self, Rational};
use crate::search::{strongly_optimal_search, SearchOptions};

/// Trials simulated per independent random stream in [`monte_carlo_attack`].
pub const MC_CHUNK: u64 = 1 << 16;

fn require_game(family: &Family) -> Result<()> {
    if family.m() < 2 {
        return Err(EdfError::InvalidInput(
            "the tampering game needs at least two sources".into(),
        ));
    }
    Ok(())
}

fn check_delta(family: &Family, delta: &GroupElement) -> Result<usize> {
    family.group().check(delta)?;
    if delta.is_zero() {
        return Err(EdfError::InvalidDelta);
    }
    Ok(family.group().index_of(delta))
}

/// `ρ_Δ` for every element index (`0` at index `0`), summed directly over
/// sources and encodings.
pub fn game_sum_table(family: &Family) -> Result<Vec<Rational>> {
    require_game(family)?;
    let group = family.group();
    let n = group.order() as usize;
    let owner = family.owner_table();
    let m = family.m() as u64;
    let mut table = vec![Rational::zero(); n];
    for (delta, entry) in table.iter_mut().enumerate().skip(1) {
        for (s, block) in family.index_blocks().iter().enumerate() {
            let hits = block
                .iter()
                .filter(|&&g| owner[group.add_idx(g, delta)].is_some_and(|t| t != s))
                .count() as u64;
            *entry += ratio::ratio(hits, m * block.len() as u64);
        }
    }
    Ok(table)
}

/// `ρ_Δ` computed both from the game and from the weighted difference count;
/// the two must agree.
pub fn rho_delta(family: &Family, delta: &GroupElement) -> Result<Rational> {
    require_game(family)?;
    let idx = check_delta(family, delta)?;
    let group = family.group();
    let owner = family.owner_table();
    let m = family.m() as u64;
    let game =
        family
            .index_blocks()
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (s, block)| {
                let hits = block
                    .iter()
                    .filter(|&&g| owner[group.add_idx(g, idx)].is_some_and(|t| t != s))
                    .count() as u64;
                acc + ratio::ratio(hits, m * block.len() as u64)
            });
    let union = weighted_external_union(family)?;
    let k_tilde = family.k_tilde_u64()?;
    let counted = ratio::ratio(union.count_idx(idx), k_tilde * m);
    if game != counted {
        return Err(EdfError::Inconsistent(format!(
            "rho at {delta}: game sum {game} differs from difference count {counted}"
        )));
    }
    Ok(game)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tristate {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Tristate {
    fn from(b: bool) -> Self {
        if b {
            Tristate::Yes
        } else {
            Tristate::No
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaProbability {
    pub delta: GroupElement,
    #[serde(serialize_with = "ratio::serialize")]
    pub rho: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    /// `ρ` meets `a(m-1)/(m(n-1))`, equivalently the family is an SWEDF.
    pub ps_r_optimal: bool,
    /// `λ` equals `⌈k̃a(m-1)/(n-1)⌉`, which certifies per-profile optimality.
    pub meets_per_k_floor: bool,
    pub strongly_optimal: Tristate,
    /// How `strongly_optimal` was settled: `bound`, `search` or `none`.
    pub method: &'static str,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ratio::serialize_opt"
    )]
    pub improved_bound: Option<Rational>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ratio::serialize_opt"
    )]
    pub searched_optimum: Option<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmdProfile {
    pub n: u64,
    pub m: usize,
    pub a: u64,
    #[serde(rename = "K")]
    pub sizes: Vec<u64>,
    pub k_tilde: u64,
    pub lambda: u64,
    #[serde(serialize_with = "ratio::serialize")]
    pub rho: Rational,
    pub best_deltas: Vec<GroupElement>,
    pub rho_by_delta: Vec<DeltaProbability>,
    #[serde(serialize_with = "ratio::serialize")]
    pub ps_bound: Rational,
    /// `ρ·k̃·m` equals the weighted-difference `λ`.
    pub bridge: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
}

/// Exact `ρ_Δ` for every `Δ ≠ 0` and the adversary's optimum `ρ`.
pub fn rho_profile(family: &Family) -> Result<AmdProfile> {
    require_game(family)?;
    let group = family.group();
    let m = family.m() as u64;
    let k_tilde = family.k_tilde_u64()?;
    let game = game_sum_table(family)?;
    let union = weighted_external_union(family)?;
    let mut rho_by_delta = Vec::with_capacity(game.len() - 1);
    for (idx, value) in game.into_iter().enumerate().skip(1) {
        let counted = ratio::ratio(union.count_idx(idx), k_tilde * m);
        if value != counted {
            return Err(EdfError::Inconsistent(format!(
                "rho at {}: game sum {value} differs from difference count {counted}",
                group.element_at(idx)
            )));
        }
        rho_by_delta.push(DeltaProbability {
            delta: group.element_at(idx),
            rho: value,
        });
    }
    let rho = rho_by_delta
        .iter()
        .map(|d| d.rho.clone())
        .max()
        .expect("group order is at least 2");
    let best_deltas = rho_by_delta
        .iter()
        .filter(|d| d.rho == rho)
        .map(|d| d.delta.clone())
        .collect();
    let max_count = union
        .nonzero_extremes()
        .expect("group order is at least 2")
        .max;
    let lambda = max_count.max(1);
    let scaled = &rho * Rational::from_integer(BigInt::from(k_tilde * m));
    Ok(AmdProfile {
        n: group.order(),
        m: family.m(),
        a: family.a(),
        sizes: family.sizes(),
        k_tilde,
        bridge: scaled == Rational::from_integer(BigInt::from(lambda)),
        lambda,
        ps_bound: ps_bound(group.order(), family.m(), family.a())?,
        rho,
        best_deltas,
        rho_by_delta,
        classification: None,
    })
}

/// Whether `ρ·k̃·m` equals the `λ` of the weighted external differences.
pub fn bridge_check(family: &Family) -> Result<bool> {
    Ok(rho_profile(family)?.bridge)
}

/// Optimality flags for the code given by `family`.
///
/// Strong optimality is settled by the closed-form bound when `ρ` meets it,
/// otherwise by exhaustive search over `Z_n` within `budget` nodes. Groups
/// that are not isomorphic to `Z_n` by CRT are left as unknown.
pub fn classify_optimality(family: &Family, budget: u64) -> Result<Classification> {
    let profile = rho_profile(family)?;
    classify_profile(family, &profile, budget)
}

fn classify_profile(family: &Family, profile: &AmdProfile, budget: u64) -> Result<Classification> {
    let n = profile.n;
    let m = profile.m;
    let floor = lambda_lower_bound(n, m, &profile.sizes)?;
    let improved = match improved_bound(n, m, profile.a, None) {
        Ok(r) => Some(r.improved_bound),
        Err(EdfError::PartitionCapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut out = Classification {
        ps_r_optimal: profile.rho == profile.ps_bound,
        meets_per_k_floor: floor.to_u64() == Some(profile.lambda),
        strongly_optimal: Tristate::Unknown,
        method: "none",
        improved_bound: improved.clone(),
        searched_optimum: None,
    };
    if improved.as_ref() == Some(&profile.rho) {
        out.strongly_optimal = Tristate::Yes;
        out.method = "bound";
        return Ok(out);
    }
    if improved.is_some() && family.group().is_flattenable() {
        let result = strongly_optimal_search(
            n,
            m,
            profile.a,
            SearchOptions {
                budget,
                unit_reduction: false,
            },
        )?;
        if result.exhausted {
            let optimum = result
                .minimal_rho
                .expect("an exhausted search finds a family");
            out.strongly_optimal = Tristate::from(optimum == profile.rho);
            out.method = "search";
            out.searched_optimum = Some(optimum);
        }
    }
    Ok(out)
}

/// [`rho_profile`] with [`classify_optimality`] attached.
pub fn rho_profile_classified(family: &Family, budget: u64) -> Result<AmdProfile> {
    let mut profile = rho_profile(family)?;
    profile.classification = Some(classify_profile(family, &profile, budget)?);
    Ok(profile)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloReport {
    pub delta: GroupElement,
    pub trials: u64,
    pub seed: u64,
    pub wins: u64,
    #[serde(serialize_with = "ratio::serialize")]
    pub rate: Rational,
    #[serde(serialize_with = "ratio::serialize")]
    pub exact: Rational,
}

/// Plays the game `trials` times at offset `delta`.
///
/// Trials are split into chunks of [`MC_CHUNK`]; chunk `c` draws from
/// ChaCha8 seeded with `seed` on stream `c`, so the result depends only on
/// `(seed, trials)` and not on thread scheduling.
pub fn monte_carlo_attack(
    family: &Family,
    delta: &GroupElement,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    require_game(family)?;
    let idx = check_delta(family, delta)?;
    if trials == 0 {
        return Err(EdfError::InvalidInput("trials must be positive".into()));
    }
    let group = family.group();
    let owner = family.owner_table();
    let blocks = family.index_blocks();
    let chunks = trials.div_ceil(MC_CHUNK);
    let wins: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = MC_CHUNK.min(trials - c * MC_CHUNK);
            let mut wins = 0u64;
            for _ in 0..len {
                let s = rng.random_range(0..blocks.len());
                let g = blocks[s][rng.random_range(0..blocks[s].len())];
                if owner[group.add_idx(g, idx)].is_some_and(|t| t != s) {
                    wins += 1;
                }
            }
            wins
        })
        .sum();
    Ok(MonteCarloReport {
        delta: delta.clone(),
        trials,
        seed,
        wins,
        rate: ratio::ratio(wins, trials),
        exact: rho_delta(family, delta)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2() -> Family {
        Family::cyclic(10, &[&[5], &[2], &[0, 4, 6]]).unwrap()
    }

    fn b1() -> Family {
        Family::cyclic(10, &[&[5], &[4, 6], &[2, 8]]).unwrap()
    }

    #[test]
    fn rho_examples() {
        let p = rho_profile(&b2()).unwrap();
        assert_eq!(p.rho, ratio::ratio(4, 9));
        assert!(p.bridge);
        for d in &p.best_deltas {
            assert_eq!(rho_delta(&b2(), d).unwrap(), ratio::ratio(4, 9));
        }
        assert_eq!(rho_profile(&b1()).unwrap().rho, ratio::ratio(1, 2));

        let two = Family::cyclic(3, &[&[0], &[1]]).unwrap();
        let p = rho_profile(&two).unwrap();
        assert_eq!(p.rho, ratio::ratio(1, 2));
        assert!(p.bridge);
    }

    #[test]
    fn zero_delta_rejected() {
        assert!(matches!(
            rho_delta(&b2(), &GroupElement::from(0)),
            Err(EdfError::InvalidDelta)
        ));
    }

    #[test]
    fn classification_examples() {
        let swedf = Family::cyclic(10, &[&[0], &[5], &[2, 3], &[6, 4]]).unwrap();
        let c = classify_optimality(&swedf, 1_000_000).unwrap();
        assert!(c.ps_r_optimal);
        assert_eq!(c.strongly_optimal, Tristate::Yes);

        let c = classify_optimality(&b2(), 1_000_000).unwrap();
        assert!(!c.ps_r_optimal);
        assert_eq!(c.strongly_optimal, Tristate::Yes);
        assert_eq!(c.method, "bound");

        let c = classify_optimality(&b1(), 1_000_000).unwrap();
        assert!(c.meets_per_k_floor);
        assert_eq!(c.strongly_optimal, Tristate::No);
        assert_eq!(c.searched_optimum, Some(ratio::ratio(4, 9)));

        let c = classify_optimality(&b1(), 0).unwrap();
        assert_eq!(c.strongly_optimal, Tristate::Unknown);
    }

    #[test]
    fn monte_carlo_zero_and_deterministic() {
        // Δ = 1 never moves an encoding of one source onto another here.
        let f = Family::cyclic(10, &[&[0], &[5]]).unwrap();
        let r = monte_carlo_attack(&f, &GroupElement::from(1), 10_000, 7).unwrap();
        assert_eq!(r.wins, 0);
        let a = monte_carlo_attack(&b2(), &GroupElement::from(3), 200_000, 9).unwrap();
        let b = monte_carlo_attack(&b2(), &GroupElement::from(3), 200_000, 9).unwrap();
        assert_eq!(a.wins, b.wins);
    }
}
