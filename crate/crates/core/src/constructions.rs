// SPDX-License-Identifier: Apache-2.0

//! Explicit families from cyclotomic classes and partitioned difference
//! families. Every output is re-verified against the parameters the
//! construction promises; a disagreement is reported as
//! [`EdfError::Inconsistent`] instead of being returned.

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bounds::lambda_lower_bound;
use crate::cyclotomy::{is_prime, qr_pdf, PrimeField};
use crate::error::{EdfError, Result};
use crate::family::Family;
use crate::group::{GroupElement, GroupSpec};
use crate::ratio::{self, Rational};
use crate::verify::{
    bimodal_check, classify_bswedf, rwedf_profile, verify_pdf, VerificationReport,
};

/// Parameters a construction promises.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Predicted {
    pub n: u64,
    pub m: usize,
    #[serde(rename = "K")]
    pub sizes: Vec<u64>,
    pub a: u64,
    pub lambda: u64,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ratio::serialize_opt"
    )]
    pub d: Option<Rational>,
    /// Whether the output is promised to be an SWEDF.
    pub swedf: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionResult {
    pub name: &'static str,
    /// Output in product form.
    pub family: Family,
    pub predicted: Predicted,
    pub verified: VerificationReport,
    pub lambda_floor: u64,
    /// `λ` equals `⌈k̃a(m-1)/(n-1)⌉`.
    pub optimal_certificate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rwedf: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bimodal: Option<VerificationReport>,
}

impl ConstructionResult {
    /// The output family over `Z_n` via CRT.
    pub fn flattened(&self) -> Result<Family> {
        self.family.flatten()
    }

    /// Flattened blocks as integers.
    pub fn flat_blocks(&self) -> Result<Vec<Vec<u64>>> {
        Ok(self
            .flattened()?
            .int_blocks()
            .expect("flattened family is cyclic"))
    }
}

fn finish(name: &'static str, family: Family, predicted: Predicted) -> Result<ConstructionResult> {
    if family.group().order() != predicted.n
        || family.m() != predicted.m
        || family.sizes() != predicted.sizes
        || family.a() != predicted.a
    {
        return Err(EdfError::Inconsistent(format!(
            "construction {name} produced parameters that differ from its promise"
        )));
    }
    let mut verified = classify_bswedf(&family)?;
    let lambda = verified.lambda.expect("m >= 2");
    if lambda != predicted.lambda {
        return Err(EdfError::Inconsistent(format!(
            "construction {name}: predicted lambda {} but verified {lambda}",
            predicted.lambda
        )));
    }
    if predicted.swedf && verified.is_swedf != Some(true) {
        return Err(EdfError::Inconsistent(format!(
            "construction {name}: output is not an SWEDF"
        )));
    }
    let floor = lambda_lower_bound(predicted.n, predicted.m, &predicted.sizes)?
        .to_u64()
        .ok_or(EdfError::Overflow("lambda floor"))?;
    let (rwedf, bimodal) = if predicted.d.is_some() {
        let rwedf = rwedf_profile(&family);
        if rwedf.d != predicted.d {
            return Err(EdfError::Inconsistent(format!(
                "construction {name}: reciprocal index differs from the prediction"
            )));
        }
        let bimodal = bimodal_check(&family);
        if bimodal.holds {
            return Err(EdfError::Inconsistent(format!(
                "construction {name}: output is unexpectedly bimodal"
            )));
        }
        (Some(rwedf), Some(bimodal))
    } else {
        (None, None)
    };
    verified.detail = None;
    Ok(ConstructionResult {
        name,
        optimal_certificate: lambda == floor,
        lambda_floor: floor,
        family,
        predicted,
        verified,
        rwedf,
        bimodal,
    })
}

/// `q = 4k + 1` prime with `k` odd; returns `(field, k)`.
fn quartic_field(q: u64) -> Result<(PrimeField, u64)> {
    let field = PrimeField::new(q)?;
    if q % 4 != 1 {
        return Err(EdfError::PreconditionUnmet(format!("{q} is not 1 mod 4")));
    }
    let k = (q - 1) / 4;
    if k.is_multiple_of(2) {
        return Err(EdfError::PreconditionUnmet(format!(
            "q = 4k + 1 with k = {k} even; k must be odd"
        )));
    }
    Ok((field, k))
}

fn pair(x: u64, y: u64) -> GroupElement {
    GroupElement::from_coords(vec![x, y])
}

fn tagged(tag: u64, elements: &[u64]) -> impl Iterator<Item = GroupElement> + '_ {
    elements.iter().map(move |&y| pair(tag, y))
}

/// Over `Z_2 × F_q`: `{(0,0),(1,0)}`, `{0}×D⁴₀ ∪ {1}×D⁴₂`, `{0}×D⁴₁ ∪ {0}×D⁴₃`.
pub fn construct_a(q: u64) -> Result<ConstructionResult> {
    let (field, k) = quartic_field(q)?;
    let d4 = field.classes(4)?;
    let group = GroupSpec::new(&[2, q])?;
    let blocks = vec![
        vec![pair(0, 0), pair(1, 0)],
        tagged(0, &d4[0].elements)
            .chain(tagged(1, &d4[2].elements))
            .collect(),
        tagged(0, &d4[1].elements)
            .chain(tagged(0, &d4[3].elements))
            .collect(),
    ];
    let predicted = Predicted {
        n: 2 * q,
        m: 3,
        sizes: vec![2, 2 * k, 2 * k],
        a: 4 * k + 2,
        lambda: 2 * k + 1,
        d: None,
        swedf: false,
    };
    finish("A", Family::new(group, blocks)?, predicted)
}

/// Over `Z_2 × Z_{n₁}` from the quadratic-residue partition `{0}, E₁, E₂` of
/// `Z_{n₁}`: `{(1,0)}`, `{0}×E₁`, `{0}×E₂`. The partition is verified to be a
/// `(n₁, k, k-1)` partitioned difference family first.
pub fn construct_b(n1: u64) -> Result<ConstructionResult> {
    let field = PrimeField::new(n1)?;
    let k = (n1 - 1) / 2;
    let pdf = qr_pdf(n1)?;
    let check = verify_pdf(&pdf);
    if !check.holds || check.lambda != Some(k - 1) {
        let at = check
            .witness
            .map(|w| format!(" (witness {})", w.element))
            .unwrap_or_default();
        return Err(EdfError::PreconditionUnmet(format!(
            "quadratic-residue partition of Z{n1} is not a ({n1},{k},{}) partitioned difference family{at}",
            k - 1
        )));
    }
    let group = GroupSpec::new(&[2, n1])?;
    let blocks = vec![
        vec![pair(1, 0)],
        tagged(0, &field.class(2, 0)?.elements).collect(),
        tagged(0, &field.class(2, 1)?.elements).collect(),
    ];
    let predicted = Predicted {
        n: 2 * n1,
        m: 3,
        sizes: vec![1, k, k],
        a: 2 * k + 1,
        lambda: k + 1,
        d: None,
        swedf: false,
    };
    finish("B", Family::new(group, blocks)?, predicted)
}

/// Over `Z_3 × F_q`: `{(1,0)}`, `{(2,0)}`, `{0}×D²₀`, `{0}×D²₁`.
pub fn construct_c(q: u64) -> Result<ConstructionResult> {
    let (field, k) = quartic_field(q)?;
    let d2 = field.classes(2)?;
    let group = GroupSpec::new(&[3, q])?;
    let blocks = vec![
        vec![pair(1, 0)],
        vec![pair(2, 0)],
        tagged(0, &d2[0].elements).collect(),
        tagged(0, &d2[1].elements).collect(),
    ];
    let predicted = Predicted {
        n: 3 * q,
        m: 4,
        sizes: vec![1, 1, 2 * k, 2 * k],
        a: 4 * k + 2,
        lambda: 2 * k + 1,
        d: None,
        swedf: false,
    };
    finish("C", Family::new(group, blocks)?, predicted)
}

/// From a partitioned difference family over `Z_{k-1} × Z_{tk+1}` with one
/// block `Z_{k-1} × {0}` and all others of size `k`: keep every block except
/// `Z_{k-1} × {0}` (in the given order), then append `{(j,0)}` for
/// `j = 1, ..., k-2`.
///
/// A family over the cyclic group of order `(k-1)(tk+1)` is first carried to
/// the product form by CRT.
pub fn construct_d(pdf: &Family, k: u64, t: u64) -> Result<ConstructionResult> {
    if k < 3 {
        return Err(EdfError::PreconditionUnmet(format!("k = {k} is below 3")));
    }
    if t < 1 {
        return Err(EdfError::PreconditionUnmet("t must be positive".into()));
    }
    let (u, v) = (k - 1, t * k + 1);
    if u.gcd(&v) != 1 {
        return Err(EdfError::NotCoprime {
            factors: vec![u, v],
        });
    }
    let n = u * v;
    let pdf = if pdf.group().factors() == [u, v] {
        pdf.clone()
    } else if pdf.group().is_cyclic() && pdf.group().order() == n {
        pdf.lift(&[u, v])?
    } else {
        return Err(EdfError::PreconditionUnmet(format!(
            "input family lives in {} but Z{u} x Z{v} is required",
            pdf.group()
        )));
    };
    let check = verify_pdf(&pdf);
    if !check.holds {
        let at = check
            .witness
            .map(|w| format!(" (witness {})", w.element))
            .unwrap_or_default();
        return Err(EdfError::PreconditionUnmet(format!(
            "input is not a partitioned difference family{at}"
        )));
    }
    if check.lambda != Some(k - 1) {
        return Err(EdfError::PreconditionUnmet(format!(
            "input has lambda {} but k - 1 = {} is required",
            check.lambda.unwrap_or(0),
            k - 1
        )));
    }
    let axis: Vec<GroupElement> = (0..u).map(|j| pair(j, 0)).collect();
    let mut kept = Vec::new();
    let mut axis_found = false;
    for (i, block) in pdf.blocks().iter().enumerate() {
        let mut sorted = block.clone();
        sorted.sort();
        if sorted == axis {
            axis_found = true;
        } else if block.len() as u64 == k {
            kept.push(block.clone());
        } else {
            return Err(EdfError::PreconditionUnmet(format!(
                "block {} has size {} but every block other than Z{u} x {{0}} must have size {k}",
                i + 1,
                block.len()
            )));
        }
    }
    if !axis_found {
        return Err(EdfError::PreconditionUnmet(format!(
            "no block equals Z{u} x {{0}}"
        )));
    }
    let l_minus_1 = kept.len();
    kept.extend((1..=k - 2).map(|j| vec![pair(j, 0)]));
    let m = l_minus_1 + (k - 2) as usize;
    let mut sizes = vec![k; l_minus_1];
    sizes.extend(std::iter::repeat_n(1, (k - 2) as usize));
    let predicted = Predicted {
        n,
        m,
        sizes,
        a: n - 1,
        lambda: (t + 1) * k * k - (t + 3) * k,
        d: Some(Rational::from_integer(((t + 1) * k - t - 3).into())),
        swedf: true,
    };
    let family = Family::new(pdf.group().clone(), kept)?;
    let mut result = finish("D", family, predicted)?;
    result.verified.kind = crate::verify::PropertyKind::Swedf;
    Ok(result)
}

/// The partitioned difference family over `Z_15` with blocks
/// `{6,9,2,8}, {11,14,7,13}, {1,4,12,3}, {0,5,10}`.
pub fn z15_pdf() -> Family {
    Family::cyclic(
        15,
        &[&[6, 9, 2, 8], &[11, 14, 7, 13], &[1, 4, 12, 3], &[0, 5, 10]],
    )
    .expect("static family is valid")
}

/// Largest prime for which the catalog ships a quadratic-residue entry.
pub const CATALOG_QR_LIMIT: u64 = 50;

/// Named partitioned difference families, each re-verified as it is built.
///
/// - `paper-z15`: [`z15_pdf`] over `Z_3 × Z_5`;
/// - `paper-z15-flat`: the same over `Z_15`;
/// - `qr-p`: `{0}, QR, QNR` over `Z_p` for odd primes `p < 50`.
pub fn builtin_pdf_catalog() -> Result<Vec<(String, Family)>> {
    let flat = z15_pdf();
    let mut out = vec![
        ("paper-z15".to_string(), flat.lift(&[3, 5])?),
        ("paper-z15-flat".to_string(), flat),
    ];
    for p in (3..CATALOG_QR_LIMIT).filter(|&p| is_prime(p)) {
        out.push((format!("qr-{p}"), qr_pdf(p)?));
    }
    for (name, family) in &out {
        if !verify_pdf(family).holds {
            return Err(EdfError::Inconsistent(format!(
                "built-in family {name} fails verification"
            )));
        }
    }
    Ok(out)
}

/// Looks up one entry of [`builtin_pdf_catalog`].
pub fn builtin_pdf(name: &str) -> Result<Family> {
    builtin_pdf_catalog()?
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, f)| f)
        .ok_or_else(|| EdfError::InvalidInput(format!("no built-in family named `{name}`")))
}
