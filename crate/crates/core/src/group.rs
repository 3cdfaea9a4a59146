// SPDX-License-Identifier: Apache-2.0

//! Finite abelian groups presented as direct products of cyclic groups.
//!
//! An element is a tuple of residues, one per cyclic factor. Elements also have
//! a dense index: the mixed-radix value of the tuple with the first coordinate
//! most significant, so index order is lexicographic order on coordinates. The
//! difference-counting code works on indices; the public surface works on
//! [`GroupElement`]s.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{EdfError, Result};

/// Largest group order accepted. Every routine here materializes per-element
/// tables, so anything beyond desk scale is refused up front.
pub const MAX_ORDER: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct GroupSpec {
    factors: Vec<u64>,
    order: u64,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    factors: Vec<u64>,
}

impl TryFrom<GroupRepr> for GroupSpec {
    type Error = EdfError;

    fn try_from(repr: GroupRepr) -> Result<Self> {
        GroupSpec::new(&repr.factors)
    }
}

impl From<GroupSpec> for GroupRepr {
    fn from(group: GroupSpec) -> Self {
        GroupRepr {
            factors: group.factors,
        }
    }
}

/// A group element: one reduced residue per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    /// Builds an element without reducing or range-checking; pair it with
    /// [`GroupSpec::contains`] or use [`GroupSpec::element`].
    pub fn from_coords(coords: Vec<u64>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl From<u64> for GroupElement {
    fn from(value: u64) -> Self {
        Self {
            coords: vec![value],
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords.as_slice() {
            [single] => write!(f, "{single}"),
            coords => {
                write!(f, "(")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

// Cyclic-group elements serialize as bare integers, product-group elements as arrays.
impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.coords.as_slice() {
            [single] => serializer.serialize_u64(*single),
            coords => coords.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Tuple(Vec<u64>),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Int(v) => GroupElement::from(v),
            Repr::Tuple(coords) => GroupElement { coords },
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

/// Shorthand for [`GroupSpec::new`].
pub fn make_group(factors: &[u64]) -> Result<GroupSpec> {
    GroupSpec::new(factors)
}

impl GroupSpec {
    pub fn new(factors: &[u64]) -> Result<Self> {
        if factors.is_empty() {
            return Err(EdfError::InvalidGroup(
                "at least one cyclic factor is required".into(),
            ));
        }
        let mut order: u64 = 1;
        for &n in factors {
            if n < 2 {
                return Err(EdfError::InvalidGroup(format!(
                    "cyclic factor {n} is smaller than 2"
                )));
            }
            order = order
                .checked_mul(n)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| {
                    EdfError::InvalidGroup(format!(
                        "group order exceeds the supported maximum {MAX_ORDER}"
                    ))
                })?;
        }
        Ok(Self {
            factors: factors.to_vec(),
            order,
        })
    }

    /// The cyclic group Z_n.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// True when the factors are pairwise coprime, i.e. the group is cyclic
    /// and CRT flattening applies.
    pub fn is_flattenable(&self) -> bool {
        pairwise_coprime(&self.factors)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.coords.len() == self.factors.len()
            && g.coords.iter().zip(&self.factors).all(|(c, n)| c < n)
    }

    /// Builds an element from coordinates, reducing each modulo its factor.
    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(self.mismatch_coords(coords));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(c, n)| c % n)
                .collect(),
        })
    }

    fn mismatch(&self, g: &GroupElement) -> EdfError {
        EdfError::GroupMismatch {
            element: g.to_string(),
            group: self.to_string(),
        }
    }

    fn mismatch_coords(&self, coords: &[u64]) -> EdfError {
        self.mismatch(&GroupElement::from_coords(coords.to_vec()))
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(self.mismatch(g))
        }
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(GroupElement {
            coords: g
                .coords
                .iter()
                .zip(&h.coords)
                .zip(&self.factors)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        })
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(GroupElement {
            coords: g
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(a, n)| (n - a) % n)
                .collect(),
        })
    }

    pub fn sub(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.add(g, &self.neg(h)?)
    }

    /// Every element once, in lexicographic coordinate order (zero first).
    pub fn enumerate(&self) -> Vec<GroupElement> {
        (0..self.order as usize)
            .map(|i| self.element_at(i))
            .collect()
    }

    /// Dense index of an element. The element must belong to the group.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        debug_assert!(self.contains(g));
        g.coords
            .iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (c, n)| acc * n + c) as usize
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        let mut rest = index as u64;
        let mut coords = vec![0; self.factors.len()];
        for (slot, n) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = rest % n;
            rest /= n;
        }
        GroupElement { coords }
    }

    /// `a + b` on dense indices.
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if let [n] = self.factors.as_slice() {
            return ((a as u64 + b as u64) % n) as usize;
        }
        self.combine_idx(a, b, |x, y, n| (x + y) % n)
    }

    /// `a - b` on dense indices.
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        if let [n] = self.factors.as_slice() {
            return ((a as u64 + n - b as u64) % n) as usize;
        }
        self.combine_idx(a, b, |x, y, n| (x + n - y) % n)
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.sub_idx(0, a)
    }

    fn combine_idx(&self, a: usize, b: usize, op: impl Fn(u64, u64, u64) -> u64) -> usize {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for &n in self.factors.iter().rev() {
            out += op(a % n, b % n, n) * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out as usize
    }

    /// Maps an element of a pairwise-coprime product to its residue in Z_n.
    pub fn crt_flatten(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        if !self.is_flattenable() {
            return Err(EdfError::NotCoprime {
                factors: self.factors.clone(),
            });
        }
        let n = self.order as u128;
        let mut x: u128 = 0;
        for (&c, &ni) in g.coords.iter().zip(&self.factors) {
            let mi = self.order / ni;
            let inv = mod_inverse(mi % ni, ni).expect("coprime factors have inverses");
            x = (x + c as u128 * mi as u128 % n * inv as u128) % n;
        }
        Ok(x as u64)
    }

    /// The cyclic group Z_n this group flattens onto.
    pub fn flattened(&self) -> Result<GroupSpec> {
        if !self.is_flattenable() {
            return Err(EdfError::NotCoprime {
                factors: self.factors.clone(),
            });
        }
        GroupSpec::cyclic(self.order)
    }
}

/// Inverse of [`GroupSpec::crt_flatten`]: residues of `x` modulo each factor.
pub fn crt_lift(factors: &[u64], x: u64) -> Result<GroupElement> {
    let group = GroupSpec::new(factors)?;
    if !group.is_flattenable() {
        return Err(EdfError::NotCoprime {
            factors: factors.to_vec(),
        });
    }
    if x >= group.order {
        return Err(EdfError::GroupMismatch {
            element: x.to_string(),
            group: format!("Z{}", group.order),
        });
    }
    Ok(GroupElement {
        coords: factors.iter().map(|n| x % n).collect(),
    })
}

pub fn pairwise_coprime(values: &[u64]) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, a)| values[i + 1..].iter().all(|b| a.gcd(b) == 1))
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

/// Exact least common multiple.
pub fn lcm_list(values: &[u64]) -> Result<BigUint> {
    if values.is_empty() {
        return Err(EdfError::InvalidInput("lcm of an empty list".into()));
    }
    if values.contains(&0) {
        return Err(EdfError::InvalidInput("lcm inputs must be positive".into()));
    }
    Ok(values
        .iter()
        .fold(BigUint::one(), |acc, &v| acc.lcm(&BigUint::from(v))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[u64]) -> GroupElement {
        GroupElement::from_coords(v.to_vec())
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(make_group(&[26]).unwrap().order(), 26);
        let g = make_group(&[2, 13]).unwrap();
        assert_eq!(g.order(), 26);
        assert_eq!(g.factors(), &[2, 13]);
        assert_eq!(make_group(&[3, 5]).unwrap().order(), 15);
        assert!(matches!(
            make_group(&[1, 5]),
            Err(EdfError::InvalidGroup(_))
        ));
        assert!(matches!(make_group(&[]), Err(EdfError::InvalidGroup(_))));
    }

    #[test]
    fn arithmetic_examples() {
        let g = make_group(&[2, 13]).unwrap();
        assert_eq!(g.sub(&el(&[1, 4]), &el(&[0, 1])).unwrap(), el(&[1, 3]));
        let z10 = GroupSpec::cyclic(10).unwrap();
        assert_eq!(z10.sub(&el(&[2]), &el(&[5])).unwrap(), el(&[7]));
        assert_eq!(z10.neg(&z10.zero()).unwrap(), z10.zero());
        assert!(matches!(
            z10.add(&el(&[1, 0]), &el(&[2])),
            Err(EdfError::GroupMismatch { .. })
        ));
        assert!(matches!(
            z10.add(&el(&[10]), &el(&[2])),
            Err(EdfError::GroupMismatch { .. })
        ));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            GroupSpec::cyclic(2).unwrap().enumerate(),
            vec![el(&[0]), el(&[1])]
        );
        assert_eq!(make_group(&[2, 2]).unwrap().enumerate().len(), 4);
        let z15 = GroupSpec::cyclic(15).unwrap().enumerate();
        assert_eq!(z15.len(), 15);
        assert!(z15[0].is_zero());
    }

    #[test]
    fn crt_examples() {
        let g = make_group(&[2, 13]).unwrap();
        assert_eq!(g.crt_flatten(&el(&[0, 1])).unwrap(), 14);
        let g = make_group(&[2, 11]).unwrap();
        assert_eq!(g.crt_flatten(&el(&[1, 0])).unwrap(), 11);
        let g = make_group(&[3, 13]).unwrap();
        assert_eq!(g.crt_flatten(&el(&[2, 0])).unwrap(), 26);
        assert_eq!(crt_lift(&[3, 13], 26).unwrap(), el(&[2, 0]));
        let bad = make_group(&[2, 4]).unwrap();
        assert!(matches!(
            bad.crt_flatten(&el(&[1, 1])),
            Err(EdfError::NotCoprime { .. })
        ));
        assert!(matches!(
            crt_lift(&[6, 4], 3),
            Err(EdfError::NotCoprime { .. })
        ));
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_list(&[1, 1, 3]).unwrap(), BigUint::from(3u32));
        assert_eq!(lcm_list(&[1, 2, 2]).unwrap(), BigUint::from(2u32));
        assert_eq!(lcm_list(&[2, 6, 6]).unwrap(), BigUint::from(6u32));
        assert!(matches!(lcm_list(&[]), Err(EdfError::InvalidInput(_))));
        // 1..=60 overflows u64 but not BigUint
        let big: Vec<u64> = (1..=60).collect();
        assert!(lcm_list(&big).unwrap().bits() > 64);
    }

    #[test]
    fn group_axioms_exhaustive() {
        for factors in [vec![12], vec![2, 6], vec![3, 4], vec![2, 2, 3]] {
            let g = GroupSpec::new(&factors).unwrap();
            let all = g.enumerate();
            for a in &all {
                assert_eq!(g.add(a, &g.zero()).unwrap(), *a);
                assert!(g.add(a, &g.neg(a).unwrap()).unwrap().is_zero());
                for b in &all {
                    let (ia, ib) = (g.index_of(a), g.index_of(b));
                    assert_eq!(g.element_at(g.add_idx(ia, ib)), g.add(a, b).unwrap());
                    assert_eq!(g.element_at(g.sub_idx(ia, ib)), g.sub(a, b).unwrap());
                    for c in &all {
                        let left = g.add(&g.add(a, b).unwrap(), c).unwrap();
                        let right = g.add(a, &g.add(b, c).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn crt_is_bijective_homomorphism() {
        let g = make_group(&[3, 4, 5]).unwrap();
        let all = g.enumerate();
        let mut seen = [false; 60];
        for a in &all {
            let x = g.crt_flatten(a).unwrap();
            assert!(!seen[x as usize]);
            seen[x as usize] = true;
            assert_eq!(crt_lift(g.factors(), x).unwrap(), *a);
            for b in &all {
                let y = g.crt_flatten(b).unwrap();
                assert_eq!(g.crt_flatten(&g.add(a, b).unwrap()).unwrap(), (x + y) % 60);
            }
        }
    }

    #[test]
    fn element_serialization() {
        assert_eq!(serde_json::to_string(&el(&[5])).unwrap(), "5");
        assert_eq!(serde_json::to_string(&el(&[0, 1])).unwrap(), "[0,1]");
        let back: GroupElement = serde_json::from_str("[1,3]").unwrap();
        assert_eq!(back, el(&[1, 3]));
        let g: GroupSpec = serde_json::from_str(r#"{"factors":[2,13]}"#).unwrap();
        assert_eq!(g.order(), 26);
        assert!(serde_json::from_str::<GroupSpec>(r#"{"factors":[1]}"#).is_err());
    }
}
