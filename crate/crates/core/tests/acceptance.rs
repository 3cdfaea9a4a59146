// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

mod common;

use common::{brute_rho, int_blocks, random_family, rat, seeded};
use edfkit::constructions::z15_pdf;
use edfkit::cyclotomy::is_prime;
use edfkit::multiset::external_diffs;
use edfkit::{
    bimodal_check, classify_bswedf, construct_a, construct_b, construct_c, construct_d,
    implication_checks, improved_bound, min_lambda_search, monte_carlo_attack, ps_bound,
    rho_profile, rwedf_profile, strongly_optimal_search, verify_edf, verify_gsedf, verify_pedf,
    DiffMultiset, Family, GroupElement, GroupSpec, PrimeField, SearchOptions,
};
use num_traits::ToPrimitive;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn quartic_primes(limit: u64) -> impl Iterator<Item = u64> {
    (5..=limit).filter(|&q| is_prime(q) && q % 8 == 5)
}

fn z10() -> Family {
    Family::cyclic(10, &[&[5], &[2], &[0, 4, 6]]).unwrap()
}

fn ac1() -> Check {
    let rho = rho_profile(&z10()).unwrap().rho;
    ensure!(rho == rat(4, 9), "rho = {rho}");
    let r = improved_bound(10, 3, 5, None).unwrap();
    ensure!(
        r.improved_bound == rat(4, 9),
        "improved = {}",
        r.improved_bound
    );
    ensure!(r.argmin.sizes == [1, 1, 3], "argmin = {:?}", r.argmin.sizes);
    let ps = ps_bound(10, 3, 5).unwrap();
    ensure!(ps == rat(10, 27) && ps < rat(4, 9), "ps = {ps}");
    Ok(())
}

fn ac2() -> Check {
    let opts = SearchOptions::default();
    for (k, expected) in [([1, 2, 2], 3), ([1, 1, 3], 4)] {
        let r = min_lambda_search(10, 3, &k, opts).unwrap();
        ensure!(r.exhausted, "{k:?} not exhausted");
        ensure!(
            r.minimal_lambda == Some(expected),
            "{k:?}: {:?}",
            r.minimal_lambda
        );
    }
    let r = strongly_optimal_search(10, 3, 5, opts).unwrap();
    ensure!(
        r.exhausted && r.minimal_rho == Some(rat(4, 9)),
        "rho = {:?}",
        r.minimal_rho
    );
    let w = r.witness.ok_or("no witness")?;
    ensure!(w.sizes() == [1, 1, 3], "witness sizes {:?}", w.sizes());
    Ok(())
}

fn expect_blocks(
    name: &str,
    got: Vec<Vec<u64>>,
    want: &[&[u64]],
    lambda: Option<u64>,
    l: u64,
) -> Check {
    let want: Vec<Vec<u64>> = want.iter().map(|b| b.to_vec()).collect();
    ensure!(got == want, "{name}: blocks {got:?}");
    ensure!(lambda == Some(l), "{name}: lambda {lambda:?}");
    Ok(())
}

fn ac3() -> Check {
    let r = construct_a(13).unwrap();
    expect_blocks(
        "A",
        r.flat_blocks().unwrap(),
        &[&[0, 13], &[14, 16, 22, 17, 25, 23], &[2, 6, 18, 8, 24, 20]],
        r.verified.lambda,
        7,
    )?;
    ensure!(
        r.lambda_floor == 7 && r.optimal_certificate,
        "floor {}",
        r.lambda_floor
    );
    Ok(())
}

fn ac4() -> Check {
    let r = construct_b(11).unwrap();
    expect_blocks(
        "B",
        r.flat_blocks().unwrap(),
        &[&[11], &[12, 4, 16, 20, 14], &[2, 8, 10, 18, 6]],
        r.verified.lambda,
        6,
    )?;
    ensure!(r.optimal_certificate, "no certificate");
    Ok(())
}

fn ac5() -> Check {
    let r = construct_c(13).unwrap();
    expect_blocks(
        "C",
        r.flat_blocks().unwrap(),
        &[
            &[13],
            &[26],
            &[27, 30, 3, 12, 9, 36],
            &[15, 21, 6, 24, 18, 33],
        ],
        r.verified.lambda,
        7,
    )?;
    ensure!(r.optimal_certificate, "no certificate");
    Ok(())
}

fn ac6() -> Check {
    let r = construct_d(&z15_pdf(), 4, 1).unwrap();
    let f = r.flattened().unwrap();
    let b = classify_bswedf(&f).unwrap();
    ensure!(
        b.is_swedf == Some(true) && b.lambda == Some(16),
        "lambda {:?}",
        b.lambda
    );
    let d = rwedf_profile(&f).d;
    ensure!(d == Some(rat(4, 1)), "d = {d:?}");
    let bi = bimodal_check(&f);
    ensure!(!bi.holds, "bimodal holds");
    let found = bi
        .violations
        .iter()
        .any(|w| w.block == Some(3) && w.element == GroupElement::from(6) && w.count == Some(3));
    ensure!(found, "N_3(6) = 3 not reported");
    Ok(())
}

fn unweighted_variants_fail(name: &str, f: &Family) -> Check {
    ensure!(
        !verify_edf(f).holds && !verify_gsedf(f).holds && !verify_pedf(f).holds,
        "{name}: an unweighted variant holds"
    );
    Ok(())
}

fn ac7() -> Check {
    for q in quartic_primes(200) {
        for r in [construct_a(q).unwrap(), construct_c(q).unwrap()] {
            ensure!(
                r.verified.lambda == Some(r.predicted.lambda),
                "{} q={q}",
                r.name
            );
            ensure!(r.optimal_certificate, "{} q={q}: no certificate", r.name);
            unweighted_variants_fail(&format!("{} q={q}", r.name), &r.family)?;
        }
    }
    for p in (3..=200).filter(|&p| is_prime(p)) {
        let r = construct_b(p).unwrap();
        ensure!(r.verified.lambda == Some(r.predicted.lambda), "B n1={p}");
        ensure!(r.optimal_certificate, "B n1={p}: no certificate");
        unweighted_variants_fail(&format!("B n1={p}"), &r.family)?;
    }
    Ok(())
}

fn ac8() -> Check {
    let mut rng = seeded(0xAC8);
    for i in 0..1000 {
        let f = random_family(&mut rng, 30, 5);
        let rho = rho_profile(&f).unwrap().rho;
        let lambda = classify_bswedf(&f).unwrap().lambda.unwrap();
        let k_tilde = f.k_tilde_u64().unwrap();
        let expected = rat(lambda as i64, (k_tilde * f.m() as u64) as i64);
        ensure!(rho == expected, "family {i}: rho {rho} vs {expected}");
        let brute = brute_rho(f.group().order(), &int_blocks(&f));
        ensure!(rho == brute, "family {i}: rho {rho} vs brute {brute}");
    }
    Ok(())
}

fn implications(name: &str, f: &Family) -> Check {
    for c in implication_checks(f).unwrap() {
        ensure!(c.holds, "{name}: {} fails", c.name);
    }
    Ok(())
}

fn ac9() -> Check {
    for q in quartic_primes(200) {
        implications(&format!("A q={q}"), &construct_a(q).unwrap().family)?;
        implications(&format!("C q={q}"), &construct_c(q).unwrap().family)?;
    }
    for p in (3..=200).filter(|&p| is_prime(p)) {
        implications(&format!("B n1={p}"), &construct_b(p).unwrap().family)?;
    }
    implications("D", &construct_d(&z15_pdf(), 4, 1).unwrap().family)?;
    for n in 4..=11u64 {
        for m in 2..=3usize {
            for a in m as u64..=6.min(n) {
                let r = strongly_optimal_search(n, m, a, SearchOptions::default()).unwrap();
                implications(&format!("search ({n},{m},{a})"), &r.witness.unwrap())?;
            }
        }
    }
    Ok(())
}

fn union_of(group: &GroupSpec, pairs: &[(&[u64], &[u64])]) -> DiffMultiset {
    let els = |xs: &[u64]| {
        xs.iter()
            .map(|&x| GroupElement::from(x))
            .collect::<Vec<_>>()
    };
    pairs
        .iter()
        .fold(DiffMultiset::empty(group), |acc, (x, y)| {
            acc.union(&external_diffs(group, &els(x), &els(y)).unwrap())
                .unwrap()
        })
}

fn ac10() -> Check {
    for q in quartic_primes(200) {
        let k = (q - 1) / 4;
        let field = PrimeField::new(q).unwrap();
        let group = GroupSpec::cyclic(q).unwrap();
        let d2 = field.classes(2).unwrap();
        let d4 = field.classes(4).unwrap();
        let (e0, e1) = (&d2[0].elements, &d2[1].elements);
        ensure!(
            union_of(&group, &[(e0, e1), (e1, e0)])
                == DiffMultiset::nonzero_scaled(&group, 2 * k).unwrap(),
            "quadratic union q={q}"
        );
        let (c0, c1, c3) = (&d4[0].elements, &d4[1].elements, &d4[3].elements);
        ensure!(
            union_of(&group, &[(c0, c1), (c0, c3), (c1, c0), (c3, c0)])
                == DiffMultiset::nonzero_scaled(&group, k).unwrap(),
            "quartic union q={q}"
        );
    }
    Ok(())
}

fn ac11() -> Check {
    let b = construct_b(11).unwrap().flattened().unwrap();
    for (name, f) in [("Z10", z10()), ("B n1=11", b)] {
        let p = rho_profile(&f).unwrap();
        let delta = &p.best_deltas[0];
        let trials = 1_000_000u64;
        let mc = monte_carlo_attack(&f, delta, trials, 2024).unwrap();
        let exact = p.rho.to_f64().unwrap();
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        let rate = mc.wins as f64 / trials as f64;
        ensure!(
            (rate - exact).abs() <= 5.0 * sigma,
            "{name}: rate {rate} vs {exact} (sigma {sigma})"
        );
    }
    Ok(())
}

fn ac12() -> Check {
    let r = improved_bound(12, 3, 5, None).unwrap();
    ensure!(
        r.improved_bound > r.ps_bound,
        "{} vs {}",
        r.improved_bound,
        r.ps_bound
    );
    ensure!(
        r.strict_improvement && r.strict_by_primality,
        "flags not set"
    );
    let s = strongly_optimal_search(12, 3, 5, SearchOptions::default()).unwrap();
    ensure!(s.exhausted, "search not exhausted");
    let best = s.minimal_rho.ok_or("no optimum")?;
    ensure!(
        best >= r.improved_bound,
        "search found {best} below the bound"
    );
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("AC1 Z10 rho and bounds", ac1),
        ("AC2 per-profile optima", ac2),
        ("AC3 construction A q=13", ac3),
        ("AC4 construction B n1=11", ac4),
        ("AC5 construction C q=13", ac5),
        ("AC6 construction D on Z15", ac6),
        ("AC7 construction sweep", ac7),
        ("AC8 game sum bridge", ac8),
        ("AC9 implication suite", ac9),
        ("AC10 cyclotomic unions", ac10),
        ("AC11 Monte Carlo", ac11),
        ("AC12 strict improvement", ac12),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(result) => result,
            Err(payload) => Err(payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        match outcome {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
