// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{EdfError, Result};
use crate::group::{crt_lift, lcm_list, GroupElement, GroupSpec};

/// A group together with pairwise-disjoint, nonempty, duplicate-free blocks.
///
/// Block order and the element order inside each block are kept exactly as
/// given. Every verifier is insensitive to both; use [`Family::same_blocks`]
/// to compare families as set systems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct Family {
    group: GroupSpec,
    blocks: Vec<Vec<GroupElement>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    group: GroupSpec,
    blocks: Vec<Vec<GroupElement>>,
}

impl TryFrom<FamilyRepr> for Family {
    type Error = EdfError;

    fn try_from(repr: FamilyRepr) -> Result<Self> {
        Family::new(repr.group, repr.blocks)
    }
}

impl From<Family> for FamilyRepr {
    fn from(f: Family) -> Self {
        FamilyRepr {
            group: f.group,
            blocks: f.blocks,
        }
    }
}

impl Family {
    pub fn new(group: GroupSpec, blocks: Vec<Vec<GroupElement>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(EdfError::InvalidInput(
                "a family needs at least one block".into(),
            ));
        }
        let mut owner: HashMap<&GroupElement, usize> = HashMap::new();
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(EdfError::EmptyBlock(i));
            }
            for g in block {
                group.check(g)?;
                if let Some(&j) = owner.get(g) {
                    return Err(if j == i {
                        EdfError::DuplicateElement {
                            block: i,
                            element: g.to_string(),
                        }
                    } else {
                        EdfError::NotDisjoint {
                            first: j,
                            second: i,
                            element: g.to_string(),
                        }
                    });
                }
                owner.insert(g, i);
            }
        }
        Ok(Self { group, blocks })
    }

    /// A family over `Z_n` from integer blocks.
    pub fn cyclic(n: u64, blocks: &[&[u64]]) -> Result<Self> {
        let group = GroupSpec::cyclic(n)?;
        let blocks = blocks
            .iter()
            .map(|b| b.iter().map(|&x| GroupElement::from(x)).collect())
            .collect();
        Self::new(group, blocks)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn blocks(&self) -> &[Vec<GroupElement>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[GroupElement] {
        &self.blocks[i]
    }

    /// Number of blocks.
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    /// The size profile `K`.
    pub fn sizes(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.len() as u64).collect()
    }

    /// Total number of elements across blocks.
    pub fn a(&self) -> u64 {
        self.blocks.iter().map(|b| b.len() as u64).sum()
    }

    /// lcm of the block sizes.
    pub fn k_tilde(&self) -> BigUint {
        lcm_list(&self.sizes()).expect("blocks are nonempty")
    }

    pub fn k_tilde_u64(&self) -> Result<u64> {
        self.k_tilde()
            .to_u64()
            .ok_or(EdfError::Overflow("lcm of block sizes"))
    }

    pub fn is_regular(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == self.blocks[0].len())
    }

    /// True when the blocks cover the whole group.
    pub fn is_partition(&self) -> bool {
        self.a() == self.group.order()
    }

    pub fn index_blocks(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|g| self.group.index_of(g)).collect())
            .collect()
    }

    /// For every group element (by dense index), the block containing it.
    pub fn owner_table(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.group.order() as usize];
        for (i, block) in self.index_blocks().into_iter().enumerate() {
            for x in block {
                owner[x] = Some(i);
            }
        }
        owner
    }

    pub fn translate(&self, g: &GroupElement) -> Result<Family> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| self.group.add(x, g))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Family::new(self.group.clone(), blocks)
    }

    /// The same family over `Z_n` via CRT. Requires pairwise-coprime factors.
    pub fn flatten(&self) -> Result<Family> {
        let flat = self.group.flattened()?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|g| self.group.crt_flatten(g).map(GroupElement::from))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Family::new(flat, blocks)
    }

    /// Re-presents a family over `Z_n` in the product form given by `factors`.
    pub fn lift(&self, factors: &[u64]) -> Result<Family> {
        if !self.group.is_cyclic() {
            return Err(EdfError::InvalidInput(
                "only families over a cyclic group can be lifted".into(),
            ));
        }
        let target = GroupSpec::new(factors)?;
        if target.order() != self.group.order() {
            return Err(EdfError::InvalidInput(format!(
                "cannot lift Z{} onto {target}",
                self.group.order()
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|g| crt_lift(factors, g.coords()[0]))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Family::new(target, blocks)
    }

    /// Blocks with sorted elements, blocks sorted; the set-system view.
    pub fn canonical_blocks(&self) -> Vec<Vec<GroupElement>> {
        let mut blocks: Vec<Vec<GroupElement>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort();
                b
            })
            .collect();
        blocks.sort();
        blocks
    }

    pub fn same_blocks(&self, other: &Family) -> bool {
        self.group == other.group && self.canonical_blocks() == other.canonical_blocks()
    }

    /// Blocks of a cyclic family as plain integers.
    pub fn int_blocks(&self) -> Option<Vec<Vec<u64>>> {
        self.group.is_cyclic().then(|| {
            self.blocks
                .iter()
                .map(|b| b.iter().map(|g| g.coords()[0]).collect())
                .collect()
        })
    }
}
