// SPDX-License-Identifier: Apache-2.0

//! Verifiers for the difference-family taxonomy.
//!
//! Every verifier returns a [`VerificationReport`]; a property failing is a
//! result (`holds == false`), not an error. Witnesses are the first element in
//! lexicographic order attaining the extremal count. Block numbers inside
//! reports are 1-based, matching the `B_1, ..., B_m` naming; function
//! arguments are 0-based.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{EdfError, Result};
use crate::family::Family;
use crate::group::GroupElement;
use crate::multiset::{
    block_weights, external_union, external_union_from, internal_union, weighted_external_union,
    DiffMultiset,
};
use crate::ratio::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyKind {
    Df,
    Pdf,
    Edf,
    Bedf,
    Gsedf,
    Bgsedf,
    Pedf,
    Bswedf,
    Swedf,
    Rwedf,
    Bimodal,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 11] = [
        PropertyKind::Df,
        PropertyKind::Pdf,
        PropertyKind::Edf,
        PropertyKind::Bedf,
        PropertyKind::Gsedf,
        PropertyKind::Bgsedf,
        PropertyKind::Pedf,
        PropertyKind::Bswedf,
        PropertyKind::Swedf,
        PropertyKind::Rwedf,
        PropertyKind::Bimodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::Df => "df",
            PropertyKind::Pdf => "pdf",
            PropertyKind::Edf => "edf",
            PropertyKind::Bedf => "bedf",
            PropertyKind::Gsedf => "gsedf",
            PropertyKind::Bgsedf => "bgsedf",
            PropertyKind::Pedf => "pedf",
            PropertyKind::Bswedf => "bswedf",
            PropertyKind::Swedf => "swedf",
            PropertyKind::Rwedf => "rwedf",
            PropertyKind::Bimodal => "bimodal",
        }
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyKind {
    type Err = EdfError;

    fn from_str(s: &str) -> Result<Self> {
        PropertyKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| EdfError::InvalidInput(format!("unknown property kind `{s}`")))
    }
}

/// A located count: which element, optionally which block or size class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<u64>,
    pub element: GroupElement,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ratio::serialize_opt"
    )]
    pub value: Option<Rational>,
}

impl Witness {
    fn at(element: GroupElement, count: u64) -> Self {
        Self {
            block: None,
            size: None,
            element,
            count: Some(count),
            value: None,
        }
    }
}

/// One size class `w_t` of a PEDF check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeClass {
    /// `w_t`
    pub size: u64,
    /// `c_t`, the number of blocks of this size
    pub blocks: usize,
    pub lambda: Option<u64>,
    pub max_count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub kind: PropertyKind,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub n: u64,
    pub m: usize,
    pub sizes: Vec<u64>,
    pub a: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_counts: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<SizeClass>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_swedf: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_tilde: Option<u64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ratio::serialize_opt"
    )]
    pub d: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<DiffMultiset>,
}

impl VerificationReport {
    fn blank(kind: PropertyKind, family: &Family) -> Self {
        Self {
            kind,
            holds: false,
            reason: None,
            n: family.group().order(),
            m: family.m(),
            sizes: family.sizes(),
            a: family.a(),
            lambda: None,
            target: None,
            min_count: None,
            max_count: None,
            lambdas: None,
            targets: None,
            max_counts: None,
            classes: None,
            is_swedf: None,
            k_tilde: None,
            d: None,
            witness: None,
            violations: Vec::new(),
            detail: None,
        }
    }

    fn too_few_blocks(kind: PropertyKind, family: &Family) -> Self {
        let mut r = Self::blank(kind, family);
        r.reason = Some("m<2".into());
        r
    }

    /// Fills counts, witness and `holds` for an "every nonzero element exactly
    /// λ times" test.
    fn constant_test(&mut self, multiset: DiffMultiset) {
        if let Some(ext) = multiset.nonzero_extremes() {
            self.min_count = Some(ext.min);
            self.max_count = Some(ext.max);
            self.holds = ext.min == ext.max;
            if self.holds {
                self.lambda = Some(ext.max);
            } else {
                self.witness = Some(Witness::at(ext.argmax, ext.max));
            }
        }
        self.detail = Some(multiset);
    }
}

/// Difference family: `⋃ D(B_i)` is constant on `G \ {0}`.
pub fn verify_df(family: &Family) -> VerificationReport {
    let mut report = VerificationReport::blank(PropertyKind::Df, family);
    report.constant_test(internal_union(family).expect("internal counts fit in u64"));
    report
}

/// Partitioned difference family: a difference family whose blocks cover `G`.
pub fn verify_pdf(family: &Family) -> VerificationReport {
    let mut report = verify_df(family);
    report.kind = PropertyKind::Pdf;
    if !family.is_partition() {
        let owner = family.owner_table();
        let missing = owner
            .iter()
            .position(Option::is_none)
            .expect("not a partition");
        report.holds = false;
        report.lambda = None;
        report.reason = Some("blocks do not cover the group".into());
        report.witness = Some(Witness::at(family.group().element_at(missing), 0));
    }
    report
}

/// External difference family: unweighted external union is constant.
pub fn verify_edf(family: &Family) -> VerificationReport {
    if family.m() < 2 {
        return VerificationReport::too_few_blocks(PropertyKind::Edf, family);
    }
    let mut report = VerificationReport::blank(PropertyKind::Edf, family);
    report.constant_test(external_union(family).expect("external counts fit in u64"));
    report
}

/// Bounded EDF with bound `target`. `lambda` reports the smallest feasible bound.
pub fn verify_bedf(family: &Family, target: u64) -> VerificationReport {
    if family.m() < 2 {
        return VerificationReport::too_few_blocks(PropertyKind::Bedf, family);
    }
    let mut report = VerificationReport::blank(PropertyKind::Bedf, family);
    let union = external_union(family).expect("external counts fit in u64");
    let ext = union.nonzero_extremes().expect("group order is at least 2");
    report.target = Some(target);
    report.min_count = Some(ext.min);
    report.max_count = Some(ext.max);
    report.lambda = Some(ext.max);
    report.holds = ext.max <= target;
    if !report.holds {
        report.witness = Some(Witness::at(ext.argmax, ext.max));
    }
    report.detail = Some(union);
    report
}

fn per_block_unions(family: &Family) -> Vec<DiffMultiset> {
    (0..family.m())
        .map(|i| external_union_from(family, i).expect("external counts fit in u64"))
        .collect()
}

/// Generalized strong EDF: each `⋃_{j≠i} D(B_i, B_j)` is constant (`λ_i`).
pub fn verify_gsedf(family: &Family) -> VerificationReport {
    if family.m() < 2 {
        return VerificationReport::too_few_blocks(PropertyKind::Gsedf, family);
    }
    let mut report = VerificationReport::blank(PropertyKind::Gsedf, family);
    let mut lambdas = Vec::new();
    let mut max_counts = Vec::new();
    for (i, union) in per_block_unions(family).into_iter().enumerate() {
        let ext = union.nonzero_extremes().expect("group order is at least 2");
        max_counts.push(ext.max);
        if ext.min == ext.max {
            lambdas.push(ext.max);
        } else if report.witness.is_none() {
            report.witness = Some(Witness {
                block: Some(i + 1),
                ..Witness::at(ext.argmax, ext.max)
            });
        }
    }
    report.holds = report.witness.is_none();
    if report.holds {
        report.lambdas = Some(lambdas);
    }
    report.max_counts = Some(max_counts);
    report
}

/// Bounded GSEDF with per-block bounds `targets` (one per block).
pub fn verify_bgsedf(family: &Family, targets: &[u64]) -> Result<VerificationReport> {
    if targets.len() != family.m() {
        return Err(EdfError::InvalidInput(format!(
            "expected {} per-block bounds, got {}",
            family.m(),
            targets.len()
        )));
    }
    if family.m() < 2 {
        return Ok(VerificationReport::too_few_blocks(
            PropertyKind::Bgsedf,
            family,
        ));
    }
    let mut report = VerificationReport::blank(PropertyKind::Bgsedf, family);
    let mut max_counts = Vec::new();
    for (i, union) in per_block_unions(family).into_iter().enumerate() {
        let ext = union.nonzero_extremes().expect("group order is at least 2");
        max_counts.push(ext.max);
        if ext.max > targets[i] && report.witness.is_none() {
            report.witness = Some(Witness {
                block: Some(i + 1),
                ..Witness::at(ext.argmax, ext.max)
            });
        }
    }
    report.holds = report.witness.is_none();
    report.targets = Some(targets.to_vec());
    report.lambdas = Some(max_counts.clone());
    report.max_counts = Some(max_counts);
    Ok(report)
}

/// Partitioned EDF: for each block size `w_t` (ascending), the union over
/// blocks of that size of their external differences is constant.
pub fn verify_pedf(family: &Family) -> VerificationReport {
    if family.m() < 2 {
        return VerificationReport::too_few_blocks(PropertyKind::Pedf, family);
    }
    let mut report = VerificationReport::blank(PropertyKind::Pedf, family);
    let unions = per_block_unions(family);
    let mut by_size: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, k) in family.sizes().into_iter().enumerate() {
        by_size.entry(k).or_default().push(i);
    }
    let mut classes = Vec::new();
    for (size, members) in by_size {
        let mut union = DiffMultiset::empty(family.group());
        for &i in &members {
            union = union.union(&unions[i]).expect("counts fit in u64");
        }
        let ext = union.nonzero_extremes().expect("group order is at least 2");
        let constant = ext.min == ext.max;
        if !constant && report.witness.is_none() {
            report.witness = Some(Witness {
                size: Some(size),
                ..Witness::at(ext.argmax, ext.max)
            });
        }
        classes.push(SizeClass {
            size,
            blocks: members.len(),
            lambda: constant.then_some(ext.max),
            max_count: ext.max,
        });
    }
    report.holds = report.witness.is_none();
    report.classes = Some(classes);
    report
}

/// Bounded standard weighted EDF classification.
///
/// `lambda` is the smallest positive bound on the weighted external union;
/// `is_swedf` says whether the union is exactly `λ ⊠ (G \ {0})`. Every
/// disjoint family with at least two blocks is a BSWEDF, so `holds` is true
/// whenever `m >= 2`.
pub fn classify_bswedf(family: &Family) -> Result<VerificationReport> {
    if family.m() < 2 {
        return Ok(VerificationReport::too_few_blocks(
            PropertyKind::Bswedf,
            family,
        ));
    }
    let mut report = VerificationReport::blank(PropertyKind::Bswedf, family);
    let union = weighted_external_union(family)?;
    let ext = union.nonzero_extremes().expect("group order is at least 2");
    let lambda = ext.max.max(1);
    report.holds = true;
    report.lambda = Some(lambda);
    report.min_count = Some(ext.min);
    report.max_count = Some(ext.max);
    report.is_swedf = Some(ext.min == ext.max);
    report.k_tilde = Some(family.k_tilde_u64()?);
    report.witness = Some(Witness::at(ext.argmax, ext.max));
    report.detail = Some(union);
    Ok(report)
}

/// Standard weighted EDF: [`classify_bswedf`] with `holds = is_swedf`.
pub fn verify_swedf(family: &Family) -> Result<VerificationReport> {
    let mut report = classify_bswedf(family)?;
    report.kind = PropertyKind::Swedf;
    if report.reason.is_none() {
        report.holds = report.is_swedf == Some(true);
        if !report.holds {
            let union = report.detail.as_ref().expect("detail is set");
            let ext = union.nonzero_extremes().expect("group order is at least 2");
            report.witness = Some(Witness::at(ext.argmin, ext.min));
        }
    }
    Ok(report)
}

/// `N_i(δ)` for every block `i` (rows) and element index `δ` (columns):
/// the number of pairs `(b_i, b_j)`, `b_i` in `B_i`, `b_j` in another block,
/// with `b_j - b_i = δ`.
pub fn n_table(family: &Family) -> Vec<Vec<u64>> {
    let group = family.group();
    let blocks = family.index_blocks();
    let n = group.order() as usize;
    let mut table = vec![vec![0u64; n]; blocks.len()];
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            for &x in bi {
                for &y in bj {
                    table[i][group.sub_idx(y, x)] += 1;
                }
            }
        }
    }
    table
}

/// Reciprocally weighted EDF: `d = Σ_i N_i(δ) / k_i` independent of `δ ≠ 0`.
pub fn rwedf_profile(family: &Family) -> VerificationReport {
    if family.m() < 2 {
        return VerificationReport::too_few_blocks(PropertyKind::Rwedf, family);
    }
    let mut report = VerificationReport::blank(PropertyKind::Rwedf, family);
    let table = n_table(family);
    let sizes = family.sizes();
    let n = family.group().order() as usize;
    let values: Vec<Rational> = (1..n)
        .map(|delta| {
            table
                .iter()
                .zip(&sizes)
                .fold(Rational::zero(), |acc, (row, &k)| {
                    acc + ratio::ratio(BigInt::from(row[delta]), BigInt::from(k))
                })
        })
        .collect();
    let max_pos = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > values[best] { i } else { best });
    report.holds = values.iter().all(|v| *v == values[0]);
    if report.holds {
        report.d = Some(values[0].clone());
    } else {
        report.witness = Some(Witness {
            block: None,
            size: None,
            element: family.group().element_at(max_pos + 1),
            count: None,
            value: Some(values[max_pos].clone()),
        });
    }
    report
}

/// Bimodal property: every `N_i(δ)` is `0` or `k_i`. All violations are
/// listed (block-major, then element order); the witness is the first.
pub fn bimodal_check(family: &Family) -> VerificationReport {
    if family.m() < 2 {
        return VerificationReport::too_few_blocks(PropertyKind::Bimodal, family);
    }
    let mut report = VerificationReport::blank(PropertyKind::Bimodal, family);
    let table = n_table(family);
    let sizes = family.sizes();
    for (i, row) in table.iter().enumerate() {
        for (delta, &count) in row.iter().enumerate().skip(1) {
            if count != 0 && count != sizes[i] {
                report.violations.push(Witness {
                    block: Some(i + 1),
                    ..Witness::at(family.group().element_at(delta), count)
                });
            }
        }
    }
    report.holds = report.violations.is_empty();
    report.witness = report.violations.first().cloned();
    report
}

/// Runs the verifier for `kind`. Bounded kinds need their bound(s).
pub fn verify_kind(
    family: &Family,
    kind: PropertyKind,
    bound: Option<u64>,
    bounds: Option<&[u64]>,
) -> Result<VerificationReport> {
    Ok(match kind {
        PropertyKind::Df => verify_df(family),
        PropertyKind::Pdf => verify_pdf(family),
        PropertyKind::Edf => verify_edf(family),
        PropertyKind::Bedf => {
            let target = bound
                .ok_or_else(|| EdfError::InvalidInput("bedf needs a bound (--lambda)".into()))?;
            verify_bedf(family, target)
        }
        PropertyKind::Gsedf => verify_gsedf(family),
        PropertyKind::Bgsedf => {
            let targets = bounds.ok_or_else(|| {
                EdfError::InvalidInput("bgsedf needs per-block bounds (--lambdas)".into())
            })?;
            verify_bgsedf(family, targets)?
        }
        PropertyKind::Pedf => verify_pedf(family),
        PropertyKind::Bswedf => classify_bswedf(family)?,
        PropertyKind::Swedf => verify_swedf(family)?,
        PropertyKind::Rwedf => rwedf_profile(family),
        PropertyKind::Bimodal => bimodal_check(family),
    })
}

/// Outcome of one implication between family classes on a concrete family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicationCheck {
    pub name: &'static str,
    /// False when the premise does not hold, so the check is vacuous.
    pub applicable: bool,
    pub holds: bool,
}

/// Checks how the unweighted classes relate to the weighted classification
/// on one family:
///
/// - `regular-edf`: a regular EDF is an SWEDF with the same λ;
/// - `gsedf`: a GSEDF is an SWEDF with `λ = Σ λ_i·k̃/k_i`;
/// - `pedf`: a PEDF is an SWEDF with `λ = Σ λ_t·k̃/w_t`;
/// - `regular-bedf`: for a regular family the BSWEDF λ is at most the BEDF bound;
/// - `bgsedf`: the BSWEDF λ is at most `Σ λ_i·k̃/k_i` for the per-block bounds;
/// - `swedf-arithmetic`: an SWEDF has `(n-1) | k̃a(m-1)` and `λ = k̃a(m-1)/(n-1)`;
/// - `rwedf-swedf`: RWEDF holds exactly when SWEDF does, with `d = λ/k̃`.
pub fn implication_checks(family: &Family) -> Result<Vec<ImplicationCheck>> {
    if family.m() < 2 {
        return Err(EdfError::InvalidInput(
            "implication checks need m >= 2".into(),
        ));
    }
    let bsw = classify_bswedf(family)?;
    let lambda = bsw.lambda.expect("m >= 2");
    let is_swedf = bsw.is_swedf == Some(true);
    let k_tilde = family.k_tilde_u64()?;
    let weights = block_weights(family)?;
    let sizes = family.sizes();
    let mut out = Vec::new();

    let edf = verify_edf(family);
    let regular_edf = edf.holds && family.is_regular();
    out.push(ImplicationCheck {
        name: "regular-edf",
        applicable: regular_edf,
        holds: !regular_edf || (is_swedf && edf.lambda == Some(lambda)),
    });

    let gsedf = verify_gsedf(family);
    let predicted = gsedf
        .lambdas
        .as_ref()
        .map(|ls| ls.iter().zip(&weights).map(|(l, w)| l * w).sum::<u64>());
    out.push(ImplicationCheck {
        name: "gsedf",
        applicable: gsedf.holds,
        holds: !gsedf.holds || (is_swedf && predicted == Some(lambda)),
    });

    let pedf = verify_pedf(family);
    let predicted: Option<u64> = pedf.classes.as_ref().and_then(|cs| {
        cs.iter()
            .map(|c| c.lambda.map(|l| l * (k_tilde / c.size)))
            .sum()
    });
    out.push(ImplicationCheck {
        name: "pedf",
        applicable: pedf.holds,
        holds: !pedf.holds || (is_swedf && predicted == Some(lambda)),
    });

    let bedf = verify_bedf(family, u64::MAX);
    let regular = family.is_regular();
    out.push(ImplicationCheck {
        name: "regular-bedf",
        applicable: regular,
        holds: !regular || Some(lambda) <= bedf.lambda,
    });

    let per_block = verify_gsedf(family).max_counts.expect("m >= 2");
    let bgsedf = verify_bgsedf(family, &per_block)?;
    let ceiling: u64 = per_block.iter().zip(&weights).map(|(l, w)| l * w).sum();
    out.push(ImplicationCheck {
        name: "bgsedf",
        applicable: bgsedf.holds,
        holds: lambda <= ceiling,
    });

    let n = family.group().order();
    let total = k_tilde as u128 * family.a() as u128 * (family.m() as u128 - 1);
    out.push(ImplicationCheck {
        name: "swedf-arithmetic",
        applicable: is_swedf,
        holds: !is_swedf
            || (total.is_multiple_of(n as u128 - 1) && total / (n as u128 - 1) == lambda as u128),
    });

    let rwedf = rwedf_profile(family);
    let expected_d = ratio::ratio(lambda, k_tilde);
    out.push(ImplicationCheck {
        name: "rwedf-swedf",
        applicable: true,
        holds: rwedf.holds == is_swedf && (!is_swedf || rwedf.d.as_ref() == Some(&expected_d)),
    });

    let _ = sizes;
    Ok(out)
}
