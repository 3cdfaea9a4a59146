// SPDX-License-Identifier: Apache-2.0

//! Exhaustive branch-and-bound search over disjoint families in `Z_n`.
//!
//! Families are enumerated in a canonical form:
//!
//! - the size profile is sorted non-decreasingly;
//! - the first block contains `0` (every family has a translate of this shape);
//! - elements inside a block increase;
//! - consecutive blocks of equal size have increasing first elements.
//!
//! Elements are placed one at a time while the weighted external counts are
//! updated incrementally, and a branch is cut once any count reaches the
//! best `λ` found so far. Enumeration is depth first in lexicographic order of
//! the placed elements, so the reported witness is the lexicographically
//! smallest canonical family attaining the optimum.
//!
//! The optional unit reduction additionally requires the first block, when it
//! has at least two elements, to contain a proper divisor of `n`. Scaling by a
//! unit fixes `0`, maps any `x` to `gcd(x, n)` for a suitable unit, and
//! preserves `λ`, so the reduction never loses an optimum.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bounds::{lambda_lower_bound, partitions, DEFAULT_PARTITION_CAP};
use crate::error::{EdfError, Result};
use crate::family::Family;
use crate::group::{lcm_list, GroupElement, GroupSpec};
use crate::ratio::{self, Rational};

/// Default node budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of element placements before giving up.
    pub budget: u64,
    pub unit_reduction: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            unit_reduction: false,
        }
    }
}

/// The optimum found for one size profile.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileOutcome {
    #[serde(rename = "K")]
    pub sizes: Vec<u64>,
    pub k_tilde: u64,
    pub lambda_floor: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_lambda: Option<u64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ratio::serialize_opt"
    )]
    pub minimal_rho: Option<Rational>,
    pub exhausted: bool,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub n: u64,
    pub m: usize,
    pub a: u64,
    /// Set for a single-profile search.
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_lambda: Option<u64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ratio::serialize_opt"
    )]
    pub minimal_rho: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Family>,
    pub nodes_explored: u64,
    /// False when the budget ran out before the space was covered.
    pub exhausted: bool,
    /// Per-profile outcomes of a search over all profiles.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub profiles: Vec<ProfileOutcome>,
}

struct Searcher {
    n: usize,
    sizes: Vec<usize>,
    weights: Vec<u64>,
    counts: Vec<u64>,
    blocks: Vec<Vec<usize>>,
    used: Vec<bool>,
    best: u64,
    best_blocks: Option<Vec<Vec<usize>>>,
    floor: u64,
    nodes: u64,
    budget: u64,
    truncated: bool,
    done: bool,
    unit_reduction: bool,
}

impl Searcher {
    /// Adds `x` to block `b`; returns whether every touched count stays below
    /// the incumbent. The update is applied either way.
    fn place(&mut self, b: usize, x: usize) -> bool {
        let n = self.n;
        let mut ok = true;
        for (j, block) in self.blocks.iter().enumerate() {
            if j == b {
                continue;
            }
            for &y in block {
                let d1 = (x + n - y) % n;
                let d2 = (y + n - x) % n;
                self.counts[d1] += self.weights[j];
                self.counts[d2] += self.weights[b];
                ok &= self.counts[d1] < self.best && self.counts[d2] < self.best;
            }
        }
        self.blocks[b].push(x);
        self.used[x] = true;
        ok
    }

    fn unplace(&mut self, b: usize) {
        let n = self.n;
        let x = self.blocks[b].pop().expect("block is nonempty");
        self.used[x] = false;
        for (j, block) in self.blocks.iter().enumerate() {
            if j == b {
                continue;
            }
            for &y in block {
                self.counts[(x + n - y) % n] -= self.weights[j];
                self.counts[(y + n - x) % n] -= self.weights[b];
            }
        }
    }

    fn first_block_admissible(&self) -> bool {
        !self.unit_reduction
            || self.sizes[0] < 2
            || self.blocks[0]
                .iter()
                .any(|&x| x != 0 && self.n.is_multiple_of(x))
    }

    fn record(&mut self) {
        let max = self.counts[1..].iter().copied().max().unwrap_or(0).max(1);
        if max < self.best {
            self.best = max;
            self.best_blocks = Some(self.blocks.clone());
            if max <= self.floor {
                self.done = true;
            }
        }
    }

    fn dfs(&mut self, b: usize, lo: usize) {
        if self.done || self.truncated {
            return;
        }
        if self.blocks[b].len() == self.sizes[b] {
            if b == 0 && !self.first_block_admissible() {
                return;
            }
            if b + 1 == self.sizes.len() {
                self.record();
                return;
            }
            let next_lo = if self.sizes[b + 1] == self.sizes[b] {
                self.blocks[b][0] + 1
            } else {
                1
            };
            self.dfs(b + 1, next_lo);
            return;
        }
        let remaining = self.sizes[b] - self.blocks[b].len() - 1;
        let hi = if b == 0 && self.blocks[0].is_empty() {
            0
        } else {
            self.n - 1 - remaining
        };
        for x in lo..=hi {
            if self.used[x] {
                continue;
            }
            if self.nodes == self.budget {
                self.truncated = true;
                return;
            }
            self.nodes += 1;
            if self.place(b, x) {
                self.dfs(b, x + 1);
            }
            self.unplace(b);
            if self.done || self.truncated {
                return;
            }
        }
    }
}

fn validate(n: u64, m: usize, sizes: &[u64]) -> Result<()> {
    GroupSpec::cyclic(n)?;
    if m < 2 || sizes.len() != m {
        return Err(EdfError::InvalidInput(format!(
            "search needs m >= 2 and one size per block (m = {m}, {} sizes)",
            sizes.len()
        )));
    }
    // Reuses the infeasibility checks of the closed-form bound.
    lambda_lower_bound(n, m, sizes)?;
    Ok(())
}

/// Minimal `λ` over all disjoint families in `Z_n` with size profile `K`.
///
/// The witness lists blocks in non-decreasing size order.
pub fn min_lambda_search(
    n: u64,
    m: usize,
    sizes: &[u64],
    options: SearchOptions,
) -> Result<SearchResult> {
    validate(n, m, sizes)?;
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let k_tilde = lcm_list(&sorted)?
        .to_u64()
        .ok_or(EdfError::Overflow("lcm of block sizes"))?;
    let floor = lambda_lower_bound(n, m, &sorted)?
        .to_u64()
        .ok_or(EdfError::Overflow("lambda floor"))?;
    let mut searcher = Searcher {
        n: n as usize,
        sizes: sorted.iter().map(|&k| k as usize).collect(),
        weights: sorted.iter().map(|&k| k_tilde / k).collect(),
        counts: vec![0; n as usize],
        blocks: vec![Vec::new(); m],
        used: vec![false; n as usize],
        best: u64::MAX,
        best_blocks: None,
        floor,
        nodes: 0,
        budget: options.budget,
        truncated: false,
        done: false,
        unit_reduction: options.unit_reduction,
    };
    searcher.dfs(0, 0);

    let witness = searcher
        .best_blocks
        .as_ref()
        .map(|blocks| {
            let group = GroupSpec::cyclic(n)?;
            let blocks = blocks
                .iter()
                .map(|b| b.iter().map(|&x| GroupElement::from(x as u64)).collect())
                .collect();
            Family::new(group, blocks)
        })
        .transpose()?;
    let minimal_lambda = searcher.best_blocks.is_some().then_some(searcher.best);
    Ok(SearchResult {
        n,
        m,
        a: sorted.iter().sum(),
        minimal_rho: minimal_lambda.map(|l| ratio::ratio(l, k_tilde * m as u64)),
        minimal_lambda,
        sizes: Some(sorted),
        witness,
        nodes_explored: searcher.nodes,
        exhausted: !searcher.truncated,
        profiles: Vec::new(),
    })
}

/// `ρ_(n,m,a)`: the minimum of `λ_K/(k̃m)` over every profile `K` of `a`.
///
/// The node budget is shared by all profiles. Ties keep the profile that comes
/// first in lexicographic order.
pub fn strongly_optimal_search(
    n: u64,
    m: usize,
    a: u64,
    options: SearchOptions,
) -> Result<SearchResult> {
    if a > DEFAULT_PARTITION_CAP {
        return Err(EdfError::PartitionCapExceeded {
            a,
            cap: DEFAULT_PARTITION_CAP,
        });
    }
    let mut remaining = options.budget;
    let mut nodes = 0;
    let mut exhausted = true;
    let mut best: Option<(Rational, SearchResult)> = None;
    let mut profiles = Vec::new();
    for sizes in partitions(a, m)? {
        validate(n, m, &sizes)?;
        let result = min_lambda_search(
            n,
            m,
            &sizes,
            SearchOptions {
                budget: remaining,
                ..options
            },
        )?;
        remaining -= result.nodes_explored;
        nodes += result.nodes_explored;
        exhausted &= result.exhausted;
        let k_tilde = lcm_list(&sizes)?.to_u64().expect("checked by the search");
        let floor = lambda_lower_bound(n, m, &sizes)?;
        profiles.push(ProfileOutcome {
            k_tilde,
            lambda_floor: floor.to_u64().expect("checked by the search"),
            minimal_lambda: result.minimal_lambda,
            minimal_rho: result.minimal_rho.clone(),
            exhausted: result.exhausted,
            nodes_explored: result.nodes_explored,
            sizes,
        });
        if let Some(rho) = result.minimal_rho.clone() {
            if best.as_ref().is_none_or(|(b, _)| rho < *b) {
                best = Some((rho, result));
            }
        }
    }
    let (minimal_rho, witness, minimal_lambda) = match best {
        Some((rho, r)) => (Some(rho), r.witness, r.minimal_lambda),
        None => (None, None, None),
    };
    Ok(SearchResult {
        n,
        m,
        a,
        sizes: None,
        minimal_lambda,
        minimal_rho,
        witness,
        nodes_explored: nodes,
        exhausted,
        profiles,
    })
}

/// Brute-force enumeration of all canonical families, exposed for testing the
/// pruning logic: returns `λ` for every canonical family with profile `K`.
#[doc(hidden)]
pub fn all_canonical_lambdas(n: u64, sizes: &[u64]) -> Result<Vec<u64>> {
    let m = sizes.len();
    validate(n, m, sizes)?;
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let k_tilde = lcm_list(&sorted)?;
    let k_tilde: u64 = (&k_tilde)
        .try_into()
        .map_err(|_| EdfError::Overflow("lcm"))?;
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut used = vec![false; n as usize];
    enumerate(
        n as usize,
        &sorted,
        k_tilde,
        0,
        0,
        &mut blocks,
        &mut used,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    n: usize,
    sizes: &[u64],
    k_tilde: u64,
    b: usize,
    lo: usize,
    blocks: &mut Vec<Vec<usize>>,
    used: &mut Vec<bool>,
    out: &mut Vec<u64>,
) {
    if blocks[b].len() == sizes[b] as usize {
        if b + 1 == sizes.len() {
            let mut counts = vec![0u64; n];
            for (i, bi) in blocks.iter().enumerate() {
                for (j, bj) in blocks.iter().enumerate() {
                    if i != j {
                        for &x in bi {
                            for &y in bj {
                                counts[(x + n - y) % n] += k_tilde / sizes[j];
                            }
                        }
                    }
                }
            }
            out.push(counts[1..].iter().copied().max().unwrap_or(0).max(1));
            return;
        }
        let next_lo = if sizes[b + 1] == sizes[b] {
            blocks[b][0] + 1
        } else {
            1
        };
        enumerate(n, sizes, k_tilde, b + 1, next_lo, blocks, used, out);
        return;
    }
    let hi = if b == 0 && blocks[0].is_empty() {
        0
    } else {
        n - 1
    };
    for x in lo..=hi {
        if used[x] {
            continue;
        }
        used[x] = true;
        blocks[b].push(x);
        enumerate(n, sizes, k_tilde, b, x + 1, blocks, used, out);
        blocks[b].pop();
        used[x] = false;
    }
}
