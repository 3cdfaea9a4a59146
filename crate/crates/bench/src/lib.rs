// SPDX-License-Identifier: Apache-2.0

//! Fixed workloads shared by the benchmarks.

use edfkit::{construct_a, construct_c, Family};

/// Construction outputs of growing order, flattened to cyclic groups.
pub fn construction_families() -> Vec<(String, Family)> {
    let mut out = Vec::new();
    for q in [13, 29, 61, 101, 197] {
        out.push((
            format!("A q={q}"),
            construct_a(q).unwrap().flattened().unwrap(),
        ));
        out.push((
            format!("C q={q}"),
            construct_c(q).unwrap().flattened().unwrap(),
        ));
    }
    out
}

/// `(n, m, a)` instances small enough for a full strong-optimality search.
pub const SEARCH_INSTANCES: [(u64, usize, u64); 4] =
    [(10, 3, 5), (11, 3, 6), (12, 3, 5), (13, 4, 6)];
