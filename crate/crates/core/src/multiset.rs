// SPDX-License-Identifier: Apache-2.0

//! Multisets of group differences.
//!
//! Differences are always ordered as `a - b` with `a` drawn from the first
//! argument. The weighted union over a family uses the standard weighted
//! multisets: block `B_j` repeated `lcm(K) / |B_j|` times.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{EdfError, Result};
use crate::family::Family;
use crate::group::{GroupElement, GroupSpec};

/// Count table from group elements to multiplicities.
///
/// Stored densely by element index; absent elements have count 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffMultiset {
    group: GroupSpec,
    counts: Vec<u64>,
    total: u64,
}

/// Smallest and largest count over the nonzero elements, each with the
/// first element (in lexicographic order) attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremes {
    pub min: u64,
    pub argmin: GroupElement,
    pub max: u64,
    pub argmax: GroupElement,
}

impl DiffMultiset {
    pub fn empty(group: &GroupSpec) -> Self {
        Self {
            group: group.clone(),
            counts: vec![0; group.order() as usize],
            total: 0,
        }
    }

    /// `c ⊠ (G \ {0})`.
    pub fn nonzero_scaled(group: &GroupSpec, c: u64) -> Result<Self> {
        let mut out = Self::empty(group);
        for idx in 1..out.counts.len() {
            out.add_idx(idx, c)?;
        }
        Ok(out)
    }

    /// Each listed element once.
    pub fn from_elements<'a>(
        group: &GroupSpec,
        elements: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<Self> {
        let mut out = Self::empty(group);
        for g in elements {
            group.check(g)?;
            out.add_idx(group.index_of(g), 1)?;
        }
        Ok(out)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn count(&self, g: &GroupElement) -> u64 {
        if self.group.contains(g) {
            self.counts[self.group.index_of(g)]
        } else {
            0
        }
    }

    pub fn count_idx(&self, idx: usize) -> u64 {
        self.counts[idx]
    }

    /// Dense counts indexed by element index.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub(crate) fn add_idx(&mut self, idx: usize, c: u64) -> Result<()> {
        let slot = &mut self.counts[idx];
        *slot = slot
            .checked_add(c)
            .ok_or(EdfError::Overflow("difference count"))?;
        self.total = self
            .total
            .checked_add(c)
            .ok_or(EdfError::Overflow("difference total"))?;
        Ok(())
    }

    /// Adds `weight` copies of every difference `a - b`.
    pub(crate) fn add_external(&mut self, a: &[usize], b: &[usize], weight: u64) -> Result<()> {
        for &x in a {
            for &y in b {
                self.add_idx(self.group.sub_idx(x, y), weight)?;
            }
        }
        Ok(())
    }

    /// Multiset union (counts add).
    pub fn union(&self, other: &DiffMultiset) -> Result<DiffMultiset> {
        if self.group != other.group {
            return Err(EdfError::GroupMismatch {
                element: "multiset".into(),
                group: self.group.to_string(),
            });
        }
        let mut out = self.clone();
        for (idx, &c) in other.counts.iter().enumerate() {
            if c > 0 {
                out.add_idx(idx, c)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> Result<DiffMultiset> {
        if c == 0 {
            return Err(EdfError::InvalidInput(
                "scale factor must be positive".into(),
            ));
        }
        let counts = self
            .counts
            .iter()
            .map(|&v| v.checked_mul(c))
            .collect::<Option<Vec<_>>>()
            .ok_or(EdfError::Overflow("scaled count"))?;
        let total = self
            .total
            .checked_mul(c)
            .ok_or(EdfError::Overflow("scaled total"))?;
        Ok(DiffMultiset {
            group: self.group.clone(),
            counts,
            total,
        })
    }

    /// `{ -x : x in M }`.
    pub fn negate(&self) -> DiffMultiset {
        let mut counts = vec![0; self.counts.len()];
        for (idx, &c) in self.counts.iter().enumerate() {
            counts[self.group.neg_idx(idx)] = c;
        }
        DiffMultiset {
            group: self.group.clone(),
            counts,
            total: self.total,
        }
    }

    /// Nonzero-count entries in lexicographic element order.
    pub fn iter(&self) -> impl Iterator<Item = (GroupElement, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(idx, &c)| (self.group.element_at(idx), c))
    }

    /// `None` for the trivial group.
    pub fn nonzero_extremes(&self) -> Option<Extremes> {
        let mut best: Option<(u64, usize, u64, usize)> = None;
        for (idx, &c) in self.counts.iter().enumerate().skip(1) {
            best = Some(match best {
                None => (c, idx, c, idx),
                Some((mn, amin, mx, amax)) => {
                    let (mn, amin) = if c < mn { (c, idx) } else { (mn, amin) };
                    let (mx, amax) = if c > mx { (c, idx) } else { (mx, amax) };
                    (mn, amin, mx, amax)
                }
            });
        }
        best.map(|(min, amin, max, amax)| Extremes {
            min,
            argmin: self.group.element_at(amin),
            max,
            argmax: self.group.element_at(amax),
        })
    }

    /// The common count when every nonzero element appears equally often.
    pub fn constant_on_nonzero(&self) -> Option<u64> {
        self.nonzero_extremes()
            .and_then(|e| (e.min == e.max).then_some(e.max))
    }
}

impl Serialize for DiffMultiset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(GroupElement, u64)> = self.iter().collect();
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (g, c) in entries {
            map.serialize_entry(&g.to_string(), &c)?;
        }
        map.end()
    }
}

fn indices(group: &GroupSpec, block: &[GroupElement]) -> Result<Vec<usize>> {
    block
        .iter()
        .map(|g| group.check(g).map(|_| group.index_of(g)))
        .collect()
}

/// `D(B)`: ordered differences of distinct elements of `B`.
pub fn internal_diffs(group: &GroupSpec, block: &[GroupElement]) -> Result<DiffMultiset> {
    let idx = indices(group, block)?;
    let mut out = DiffMultiset::empty(group);
    for (i, &x) in idx.iter().enumerate() {
        for (j, &y) in idx.iter().enumerate() {
            if i != j {
                out.add_idx(group.sub_idx(x, y), 1)?;
            }
        }
    }
    Ok(out)
}

/// `D(B1, B2)`: every `a - b` with `a` in `B1`, `b` in `B2`.
pub fn external_diffs(
    group: &GroupSpec,
    first: &[GroupElement],
    second: &[GroupElement],
) -> Result<DiffMultiset> {
    let a = indices(group, first)?;
    let b = indices(group, second)?;
    let mut out = DiffMultiset::empty(group);
    out.add_external(&a, &b, 1)?;
    Ok(out)
}

/// `c ⊠ M`.
pub fn scale(multiset: &DiffMultiset, c: u64) -> Result<DiffMultiset> {
    multiset.scale(c)
}

/// Block `B_i` together with its weight `lcm(K) / |B_i|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedBlock {
    pub base: Vec<GroupElement>,
    pub multiplier: u64,
}

impl WeightedBlock {
    pub fn as_multiset(&self, group: &GroupSpec) -> Result<DiffMultiset> {
        DiffMultiset::from_elements(group, &self.base)?.scale(self.multiplier)
    }
}

/// Weighted multiset of block `i` (0-based).
pub fn weighted_block(family: &Family, i: usize) -> Result<WeightedBlock> {
    let k_tilde = family.k_tilde_u64()?;
    let base = family.block(i).to_vec();
    Ok(WeightedBlock {
        multiplier: k_tilde / base.len() as u64,
        base,
    })
}

/// Per-block weights `lcm(K) / k_i`.
pub fn block_weights(family: &Family) -> Result<Vec<u64>> {
    let k_tilde = family.k_tilde_u64()?;
    Ok(family.sizes().iter().map(|k| k_tilde / k).collect())
}

/// `⋃_{i≠j} D(B_i, B̃_j)`.
pub fn weighted_external_union(family: &Family) -> Result<DiffMultiset> {
    let weights = block_weights(family)?;
    let blocks = family.index_blocks();
    let mut out = DiffMultiset::empty(family.group());
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            if i != j {
                out.add_external(bi, bj, weights[j])?;
            }
        }
    }
    Ok(out)
}

/// `⋃_{i≠j} D(B_i, B_j)` without weights.
pub fn external_union(family: &Family) -> Result<DiffMultiset> {
    let blocks = family.index_blocks();
    let mut out = DiffMultiset::empty(family.group());
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            if i != j {
                out.add_external(bi, bj, 1)?;
            }
        }
    }
    Ok(out)
}

/// `⋃_{j≠i} D(B_i, B_j)` for one block `i`.
pub fn external_union_from(family: &Family, i: usize) -> Result<DiffMultiset> {
    let blocks = family.index_blocks();
    let mut out = DiffMultiset::empty(family.group());
    for (j, bj) in blocks.iter().enumerate() {
        if j != i {
            out.add_external(&blocks[i], bj, 1)?;
        }
    }
    Ok(out)
}

/// `⋃_i D(B_i)`.
pub fn internal_union(family: &Family) -> Result<DiffMultiset> {
    let mut out = DiffMultiset::empty(family.group());
    for block in family.blocks() {
        out = out.union(&internal_diffs(family.group(), block)?)?;
    }
    Ok(out)
}
