//! Acceptance gate for the library: one test per criterion, each printing a
//! single `ACCEPTANCE n (title): PASS|FAIL` line with headline numbers.
//! Run with `--nocapture` to see the lines as they are produced.

use std::time::{Duration, Instant};

use modspectra::{run_suite, Ring, SuiteConfig, SuiteKind, SuiteReport};
use num_bigint::BigInt;

fn report_line(n: usize, title: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {n} ({title}): {verdict} — {detail}");
    assert!(ok, "acceptance criterion {n} ({title}) failed: {detail}");
}

fn run_default(kind: SuiteKind) -> (SuiteReport, Duration) {
    let start = Instant::now();
    let report = run_suite(kind, &SuiteConfig::default()).expect("suite should run to completion");
    (report, start.elapsed())
}

fn count(report: &SuiteReport, key: &str) -> u64 {
    report.result()[key].as_u64().unwrap_or(0)
}

fn failures(report: &SuiteReport) -> u64 {
    report.result()["failures"].as_u64().unwrap_or(u64::MAX)
}

#[test]
fn criterion_1_support_is_the_union_of_closures_of_associated_primes() {
    let (report, elapsed) = run_default(SuiteKind::SupportFormula);
    let checks = count(&report, "checks");
    let ok = report.passed() && checks >= 201 && failures(&report) == 0 && elapsed.as_secs() < 60;
    report_line(
        1,
        "support formula",
        ok,
        &format!(
            "{checks} exact set comparisons over ZZ, QQ[x], and the fixed QQ[x,y]/(x^2, x*y) example, {} failures, {elapsed:.1?}",
            failures(&report)
        ),
    );
}

#[test]
fn criterion_2_torsion_pair_laws_hold_on_seeded_data() {
    let (report, elapsed) = run_default(SuiteKind::TorsionPairs);
    let decompositions = count(&report, "decompositions");
    let orthogonality = count(&report, "orthogonality_checks");
    let ok = report.passed()
        && decompositions >= 200
        && orthogonality >= 500
        && failures(&report) == 0;
    report_line(
        2,
        "torsion pair laws",
        ok,
        &format!(
            "{decompositions} decompositions, {orthogonality} Hom-orthogonality checks, {} failures, {elapsed:.1?}",
            failures(&report)
        ),
    );
}

#[test]
fn criterion_3_injective_hull_characterizations_match_the_divisible_oracle() {
    let (report, elapsed) = run_default(SuiteKind::InjectiveHulls);
    let sets = count(&report, "set_samples");
    let per_set = count(&report, "modules_per_set");
    let ok = report.passed() && sets >= 50 && per_set >= 20 && failures(&report) == 0;
    report_line(
        3,
        "injective hull characterizations",
        ok,
        &format!(
            "{sets} sampled sets x {per_set} modules, {} checks, {} failures, {elapsed:.1?}",
            count(&report, "checks"),
            failures(&report)
        ),
    );
}

#[test]
fn criterion_4_bass_criterion_agrees_with_the_divisible_oracle() {
    let (report, elapsed) = run_default(SuiteKind::BassCriterion);
    let samples = count(&report, "samples");
    let anchors = report.result()["anchors"].as_bool().unwrap_or(false);
    let ok = report.passed()
        && samples >= 100
        && anchors
        && failures(&report) == 0
        && elapsed.as_secs() < 120;
    report_line(
        4,
        "generalized Bass criterion",
        ok,
        &format!(
            "{samples} modules x degrees 0..=2, anchors {}, {} checks, {} failures, {elapsed:.1?}",
            if anchors { "verified" } else { "FAILED" },
            count(&report, "checks"),
            failures(&report)
        ),
    );
}

#[test]
fn criterion_5_cosyzygy_containments_hold_on_verified_sequences() {
    let (report, elapsed) = run_default(SuiteKind::SesContainments);
    let sequences = count(&report, "sequences");
    let ok = report.passed() && sequences >= 100 && failures(&report) == 0;
    report_line(
        5,
        "short-exact-sequence containments",
        ok,
        &format!(
            "{sequences} verified sequences x degrees 0..=2, {} checks, {} failures, {elapsed:.1?}",
            count(&report, "checks"),
            failures(&report)
        ),
    );
}

#[test]
fn criterion_6_subcategory_bijections_are_exhaustive_over_both_finite_universes() {
    let start = Instant::now();
    let z12 = Ring::integers_mod(BigInt::from(12)).expect("Z/12 should construct");
    let f8 = {
        let base = Ring::prime_field(BigInt::from(2)).expect("GF(2) should construct");
        let poly = Ring::polynomial(base.base().clone(), vec!["x".into()])
            .expect("GF(2)[x] should construct");
        let x = poly.var(0).expect("x exists");
        Ring::quotient(&poly, &[x.pow(3)]).expect("GF(2)[x]/(x^3) should construct")
    };
    let kinds =
        [SuiteKind::SerreSupport, SuiteKind::NarrowSerre, SuiteKind::AssSubsets];
    let mut ok = true;
    let mut details = Vec::new();
    for (ring, expected) in [(z12, 4u64), (f8, 2u64)] {
        for kind in kinds {
            let config = SuiteConfig { ring: Some(ring.clone()), ..SuiteConfig::default() };
            let report = run_suite(kind, &config).expect("bijection suite should run");
            let lhs = count(&report, "lhs");
            let rhs = count(&report, "rhs");
            let bijection = report.result()["bijection"].as_bool().unwrap_or(false);
            let matching_len =
                report.result()["matching"].as_array().map(|m| m.len()).unwrap_or(0);
            let this_ok = report.passed()
                && bijection
                && lhs == expected
                && rhs == expected
                && matching_len == expected as usize;
            ok &= this_ok;
            details.push(format!("{} over {ring}: {lhs}={rhs}", kind.name()));
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed.as_secs() < 600;
    report_line(
        6,
        "exhaustive subcategory bijections",
        ok,
        &format!("{}, {elapsed:.1?}", details.join("; ")),
    );
}

#[test]
fn criterion_7_hom_into_nonzero_submodules_never_vanishes() {
    let (report, elapsed) = run_default(SuiteKind::HomNonvanishing);
    let checks = count(&report, "checks");
    let ok = report.passed() && checks >= 200 && failures(&report) == 0;
    report_line(
        7,
        "Hom-nonvanishing into submodules",
        ok,
        &format!("{checks} pairs over ZZ and QQ[x], {} failures, {elapsed:.1?}", failures(&report)),
    );
}

#[test]
fn criterion_8_g_sequence_machinery_is_exhaustive_over_the_small_prime_window() {
    let (report, elapsed) = run_default(SuiteKind::GSequences);
    let valid = count(&report, "valid");
    let separations = count(&report, "separations");
    let closure_checks = count(&report, "closure_checks");
    let ok = report.passed()
        && valid == 8
        && separations == 28
        && closure_checks >= 1
        && failures(&report) == 0;
    report_line(
        8,
        "G-sequence machinery",
        ok,
        &format!(
            "{valid} valid sequences, {separations} witness separations, {closure_checks} closure checks, {} failures, {elapsed:.1?}",
            failures(&report)
        ),
    );
}
