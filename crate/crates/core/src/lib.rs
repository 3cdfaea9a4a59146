// SPDX-License-Identifier: Apache-2.0

//! External difference families, their weighted variants, and the weak
//! algebraic manipulation detection codes they define.
//!
//! A [`Family`] is a list of pairwise-disjoint blocks in a finite abelian
//! group. The [`verify`] module classifies it; [`amd`] computes the exact
//! tampering probabilities of the code whose encoding sets are the blocks;
//! [`bounds`] and [`search`] say how good that code could possibly be;
//! [`constructions`] builds optimal families from cyclotomic classes.
//!
//! ```
//! use edfkit::{classify_bswedf, rho_profile, ratio::ratio, Family};
//!
//! let family = Family::cyclic(10, &[&[5], &[2], &[0, 4, 6]])?;
//! assert_eq!(classify_bswedf(&family)?.lambda, Some(4));
//! assert_eq!(rho_profile(&family)?.rho, ratio(4, 9));
//! # Ok::<(), edfkit::EdfError>(())
//! ```

pub mod amd;
pub mod bounds;
pub mod catalog;
pub mod constructions;
pub mod cyclotomy;
pub mod document;
pub mod error;
pub mod family;
pub mod group;
pub mod multiset;
pub mod ratio;
pub mod search;
pub mod verify;

pub use amd::{
    bridge_check, classify_optimality, monte_carlo_attack, rho_delta, rho_profile, AmdProfile,
    Classification, MonteCarloReport, Tristate,
};
pub use bounds::{
    improved_bound, lambda_lower_bound, partitions, ps_bound, rho_gap_bound, swedf_divisibility,
    BoundReport,
};
pub use catalog::CatalogStore;
pub use constructions::{
    builtin_pdf, builtin_pdf_catalog, construct_a, construct_b, construct_c, construct_d,
    ConstructionResult,
};
pub use cyclotomy::{cyclotomic_class, primitive_root, qr_pdf, CyclotomicClass, PrimeField};
pub use document::{parse_document, parse_family, render_document, render_family, FamilyDocument};
pub use error::{EdfError, Result};
pub use family::Family;
pub use group::{make_group, GroupElement, GroupSpec};
pub use multiset::{DiffMultiset, WeightedBlock};
pub use ratio::Rational;
pub use search::{min_lambda_search, strongly_optimal_search, SearchOptions, SearchResult};
pub use verify::{
    bimodal_check, classify_bswedf, implication_checks, n_table, rwedf_profile, verify_bedf,
    verify_bgsedf, verify_df, verify_edf, verify_gsedf, verify_kind, verify_pdf, verify_pedf,
    verify_swedf, PropertyKind, VerificationReport,
};
