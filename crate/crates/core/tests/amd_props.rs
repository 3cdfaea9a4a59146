// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{brute_game, brute_rho, cyclic_family, int_blocks, lcm, rat};
use edfkit::amd::game_sum_table;
use edfkit::{
    bridge_check, classify_bswedf, improved_bound, monte_carlo_attack, rho_delta, rho_profile,
    Family, GroupElement,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn game_sum_matches_brute_force(f in cyclic_family(24, 5)) {
        let n = f.group().order();
        let blocks = int_blocks(&f);
        let table = game_sum_table(&f).unwrap();
        for d in 1..n {
            prop_assert_eq!(&table[d as usize], &brute_game(n, &blocks, d));
        }
        prop_assert_eq!(rho_profile(&f).unwrap().rho, brute_rho(n, &blocks));
    }

    #[test]
    fn bridge_and_bounds(f in cyclic_family(24, 5)) {
        prop_assert!(bridge_check(&f).unwrap());
        let p = rho_profile(&f).unwrap();
        let b = classify_bswedf(&f).unwrap();
        let k_tilde = lcm(&f.sizes());
        prop_assert_eq!(&p.rho, &rat(b.lambda.unwrap() as i64, (k_tilde * f.m() as u64) as i64));
        prop_assert!(p.rho >= p.ps_bound);
        prop_assert_eq!(p.rho == p.ps_bound, b.is_swedf == Some(true));
        let improved = improved_bound(p.n, p.m, p.a, None).unwrap().improved_bound;
        prop_assert!(p.rho >= improved);
    }

    #[test]
    fn best_deltas_attain_rho(f in cyclic_family(20, 4)) {
        let p = rho_profile(&f).unwrap();
        prop_assert!(!p.best_deltas.is_empty());
        for d in &p.best_deltas {
            prop_assert_eq!(&rho_delta(&f, d).unwrap(), &p.rho);
        }
        prop_assert_eq!(p.rho_by_delta.len() as u64, p.n - 1);
    }
}

#[test]
fn zero_offset_is_rejected() {
    let f = Family::cyclic(10, &[&[5], &[2], &[0, 4, 6]]).unwrap();
    assert!(rho_delta(&f, &GroupElement::from(0)).is_err());
    assert!(monte_carlo_attack(&f, &GroupElement::from(0), 10, 1).is_err());
}

#[test]
fn monte_carlo_is_seeded_and_close() {
    let f = Family::cyclic(10, &[&[5], &[2], &[0, 4, 6]]).unwrap();
    let delta = rho_profile(&f).unwrap().best_deltas[0].clone();
    let trials = 200_000u64;
    let a = monte_carlo_attack(&f, &delta, trials, 7).unwrap();
    let b = monte_carlo_attack(&f, &delta, trials, 7).unwrap();
    assert_eq!(a.wins, b.wins);
    assert_eq!(a.exact, rat(4, 9));
    let p = 4.0 / 9.0;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let rate = a.wins as f64 / trials as f64;
    assert!((rate - p).abs() <= 5.0 * sigma, "rate {rate}");
}
