//! End-to-end guarantees for the workspace, one printed verdict per sweep.
//!
//! Each test checks one release gate at its stated tolerance and prints a
//! single `[PASS]`/`[FAIL]` line (visible with `--nocapture`).

use std::time::Instant;

use rand::Rng;
use unidisk_core::classify::{
    classify, from_halfplane, parabolic_defect, self_map_report, ClassTag, HalfPlaneAffine,
};
use unidisk_core::dynamics::{step_class, StepClass};
use unidisk_core::intertwine::{solve_family, type_compatible, FamilyKind, Verdict};
use unidisk_core::moebius::{Complex, Error, Moebius};
use unidisk_core::roots::{
    dyadic_element, embeddable, root_nonelliptic, roots_elliptic, EmbedKind,
};
use unidisk_core::{sample, tol};
use unidisk_corpus::{bundled, run, Check, ExampleRecord, MapSpec, RecordReport};

fn conclude(name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("[PASS] {name}: {detail}"),
        Err(detail) => {
            println!("[FAIL] {name}: {detail}");
            panic!("{name}: {detail}");
        }
    }
}

fn record_pair<'a>(
    records: &'a [ExampleRecord],
    reports: &'a [RecordReport],
    id: &str,
) -> Result<(&'a ExampleRecord, &'a RecordReport), String> {
    records
        .iter()
        .zip(reports.iter())
        .find(|(rec, _)| rec.id == id)
        .ok_or_else(|| format!("record {id} is missing from the bundled corpus"))
}

fn has_passing(
    record: &ExampleRecord,
    report: &RecordReport,
    want: impl Fn(&Check) -> bool,
) -> bool {
    record
        .expected
        .iter()
        .zip(report.checks.iter())
        .any(|(check, out)| out.pass && want(check))
}

fn corpus_replay() -> Result<String, String> {
    let records = bundled();
    let report = run(&records);
    if records.len() < 14 {
        return Err(format!("only {} records bundled", records.len()));
    }
    if !report.all_pass() {
        return Err(format!("replay failed:\n{}", report.render_table()));
    }

    let (rec, rep) = record_pair(&records, &report.records, "example_3_1")?;
    if !has_passing(rec, rep, |c| matches!(c, Check::Conditions { holds: true, .. })) {
        return Err("example_3_1 lacks a passing positive conditions check".into());
    }
    if !has_passing(
        rec,
        rep,
        |c| matches!(c, Check::DirectEquationLe { bound, .. } if *bound <= 1e-10),
    ) {
        return Err("example_3_1 lacks a passing direct-equation check at 1e-10".into());
    }

    let mut negatives = 0;
    for (rec, rep) in records.iter().zip(report.records.iter()) {
        if !rec.id.starts_with("example_3_7") {
            continue;
        }
        negatives += rec
            .expected
            .iter()
            .zip(rep.checks.iter())
            .filter(|(check, out)| {
                out.pass
                    && matches!(
                        check,
                        Check::Conditions { holds: false, reason_contains: Some(s), .. }
                            if !s.is_empty()
                    )
            })
            .count();
    }
    if negatives < 3 {
        return Err(format!(
            "expected at least 3 refuted conditions checks with cited reasons, found {negatives}"
        ));
    }

    for id in ["example_2_1", "example_2_2", "example_2_3", "example_3_2"] {
        let (rec, rep) = record_pair(&records, &report.records, id)?;
        if !has_passing(
            rec,
            rep,
            |c| matches!(c, Check::ResidualLe { bound, .. } if *bound <= 1e-10),
        ) {
            return Err(format!("{id} lacks a passing grid-residual check at 1e-10"));
        }
    }

    let checks: usize = report.records.iter().map(|r| r.checks.len()).sum();
    Ok(format!(
        "{} records, {checks} checks green; equation, refutation and residual assertions all present",
        report.total
    ))
}

#[test]
fn bundled_corpus_replays_green_with_equation_negative_and_residual_checks() {
    conclude("corpus replay", corpus_replay());
}

fn self_map_criteria() -> Result<String, String> {
    let start = Instant::now();
    let mut r = sample::rng(92);
    let mut tested = 0u32;
    let mut excluded = 0u32;
    while tested + excluded < 100_000 {
        let m = sample::matrix(&mut r);
        let rep = self_map_report(&m);
        if !rep.denom_dominant {
            continue;
        }
        if rep.margin_image.abs() <= 1e-9 || rep.margin_coeff.abs() <= 1e-9 {
            excluded += 1;
            continue;
        }
        if (rep.margin_image >= 0.0) != (rep.margin_coeff >= 0.0) {
            return Err(format!(
                "criteria disagree on {m:?}: image margin {:e}, coefficient margin {:e}",
                rep.margin_image, rep.margin_coeff
            ));
        }
        tested += 1;
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        return Err(format!("sweep took {elapsed:?}, budget is 5 s"));
    }
    Ok(format!(
        "{tested} denominator-dominant quadruples agree ({excluded} inside the margin band) in {elapsed:?}"
    ))
}

#[test]
fn image_and_coefficient_self_map_criteria_agree_on_random_matrices() {
    conclude("self-map criteria equivalence", self_map_criteria());
}

fn roots_round_trip() -> Result<String, String> {
    let mut r = sample::rng(93);
    for i in 0..1000u32 {
        let phi = match i % 4 {
            0 => sample::hyperbolic_aut(&mut r),
            1 => sample::hyperbolic_non_aut(&mut r),
            2 => sample::parabolic_aut(&mut r),
            _ => sample::parabolic_non_aut(&mut r),
        };
        for n in [2u32, 3, 5] {
            let root =
                root_nonelliptic(&phi, n).map_err(|e| format!("draw {i}, n = {n}: {e}"))?;
            let dist = root.iterate_n(n as u64).proj_distance(&phi);
            if dist >= 1e-10 {
                return Err(format!(
                    "draw {i}, n = {n}: the iterated root misses its map by {dist:e}"
                ));
            }
        }
    }

    let half_turn = Moebius::real(-1.0, 0.0, 0.0, 1.0).unwrap();
    let count = roots_elliptic(&half_turn, 2).map_err(|e| e.to_string())?.len();
    if count != 2 {
        return Err(format!("-z: expected exactly 2 square roots, found {count}"));
    }
    let pinched = Moebius::real(-1.0, 0.0, 3.0, 4.0).unwrap();
    let count = roots_elliptic(&pinched, 2).map_err(|e| e.to_string())?.len();
    if count != 0 {
        return Err(format!("-z/(3z+4): expected no square roots, found {count}"));
    }
    for i in 0..100u32 {
        let phi = sample::elliptic_aut(&mut r);
        for n in [2u32, 3, 4] {
            let count = roots_elliptic(&phi, n)
                .map_err(|e| format!("automorphism draw {i}, n = {n}: {e}"))?
                .len();
            if count != n as usize {
                return Err(format!(
                    "automorphism draw {i}: expected {n} roots of order {n}, found {count}"
                ));
            }
        }
    }
    Ok(
        "3000 iterated roots match within 1e-10; counts are 2 for -z, 0 for -z/(3z+4), n for rotations"
            .into(),
    )
}

#[test]
fn roots_reproduce_their_map_under_iteration_and_counts_are_exact() {
    conclude("iteration roots", roots_round_trip());
}

fn parabolic_conformality() -> Result<String, String> {
    let mut r = sample::rng(94);
    let mut members_checked = 0usize;
    for i in 0..100u64 {
        let tau_p = sample::boundary_point(&mut r);
        let tau_q = sample::boundary_point(&mut r);
        let slope = r.random_range(0.2..5.0);
        let b_phi = if i % 2 == 0 {
            let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
            Complex::new(0.0, sign * r.random_range(0.1..3.0))
        } else {
            Complex::new(r.random_range(0.1..2.0), r.random_range(-2.0..2.0))
        };
        let b_psi = slope * b_phi;
        let phi = from_halfplane(&HalfPlaneAffine { a: 1.0, b: b_phi, tau: tau_p })
            .map_err(|e| format!("pair {i}: {e}"))?;
        let psi = from_halfplane(&HalfPlaneAffine { a: 1.0, b: b_psi, tau: tau_q })
            .map_err(|e| format!("pair {i}: {e}"))?;
        let family = solve_family(&phi, &psi).map_err(|e| format!("pair {i}: {e}"))?;
        if family.kind != FamilyKind::ParabolicAffine {
            return Err(format!(
                "pair {i}: expected a parabolic affine family, got {:?} ({})",
                family.kind, family.reason
            ));
        }
        let members = family.sample(4000 + i, 3, 600);
        if members.is_empty() {
            return Err(format!("pair {i}: no verified members sampled"));
        }
        let forced = phi.jet_at(tau_p).map_err(|e| format!("pair {i}: {e}"))?.d2
            / psi.jet_at(tau_q).map_err(|e| format!("pair {i}: {e}"))?.d2;
        for f in &members {
            let d1 = f.jet_at(tau_p).map_err(|e| format!("pair {i}: {e}"))?.d1;
            if (d1 - forced).norm() > 1e-8 {
                return Err(format!(
                    "pair {i}: member derivative {d1} differs from the forced value {forced}"
                ));
            }
            let aligned = tau_p * tau_q.conj() * d1;
            if aligned.im.abs() > 1e-8 || aligned.re <= 0.0 {
                return Err(format!(
                    "pair {i}: p conj(q) f'(p) = {aligned} is not positive real"
                ));
            }
        }
        members_checked += members.len();
    }
    Ok(format!(
        "100 parabolic pairs, {members_checked} members: f'(p) = phi''(p)/psi''(q) and p conj(q) f'(p) > 0"
    ))
}

#[test]
fn parabolic_family_members_carry_the_forced_conformal_derivative() {
    conclude("parabolic conformality", parabolic_conformality());
}

fn family_matches_table() -> Result<String, String> {
    let mut r = sample::rng(95);
    let mut refused = 0u32;
    let mut empty = 0u32;
    for tp in ClassTag::ALL {
        for tq in ClassTag::ALL {
            let verdict = type_compatible(tp, tq).verdict;
            let identity_cell = tp == ClassTag::Identity || tq == ClassTag::Identity;
            for k in 0..1000u32 {
                let phi = sample::of_class(&mut r, tp);
                let psi = sample::of_class(&mut r, tq);
                match solve_family(&phi, &psi) {
                    Err(Error::IdentityInput { .. }) if identity_cell => refused += 1,
                    Err(e) => {
                        return Err(format!("cell ({tp}, {tq}) draw {k}: solver error: {e}"))
                    }
                    Ok(family) => {
                        if verdict == Verdict::No && family.kind != FamilyKind::Empty {
                            return Err(format!(
                                "cell ({tp}, {tq}) draw {k}: expected an empty family, got {:?} ({})",
                                family.kind, family.reason
                            ));
                        }
                        if verdict == Verdict::No {
                            empty += 1;
                        }
                    }
                }
            }
        }
    }

    let records = bundled();
    let report = run(&records);
    let mut witnessed: Vec<(ClassTag, ClassTag)> = Vec::new();
    for (rec, rep) in records.iter().zip(report.records.iter()) {
        let (Some(MapSpec::Lft(qp)), Some(MapSpec::Lft(qq))) =
            (rec.maps.get("phi"), rec.maps.get("psi"))
        else {
            continue;
        };
        let phi = qp.to_moebius().map_err(|e| format!("{}: {e}", rec.id))?;
        let psi = qq.to_moebius().map_err(|e| format!("{}: {e}", rec.id))?;
        let tp = classify(&phi).map_err(|e| format!("{}: {e}", rec.id))?.tag;
        let tq = classify(&psi).map_err(|e| format!("{}: {e}", rec.id))?.tag;
        let demonstrated = rec
            .expected
            .iter()
            .zip(rep.checks.iter())
            .any(|(check, out)| {
                out.pass
                    && match check {
                        Check::Conditions { holds, .. } => *holds,
                        Check::DirectEquationLe { .. } | Check::ResidualLe { .. } => true,
                        Check::Family { kind, sample_count, .. } => {
                            (kind == "two_point" || kind == "parabolic_affine")
                                && sample_count.is_some_and(|n| n > 0)
                        }
                        _ => false,
                    }
            });
        if demonstrated && !witnessed.contains(&(tp, tq)) {
            witnessed.push((tp, tq));
        }
    }
    let mut possible = 0u32;
    let mut missing = Vec::new();
    for tp in ClassTag::ALL {
        for tq in ClassTag::ALL {
            if type_compatible(tp, tq).verdict == Verdict::Possible {
                possible += 1;
                if !witnessed.contains(&(tp, tq)) {
                    missing.push(format!("({tp}, {tq})"));
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(format!(
            "possible cells without a corpus witness: {}",
            missing.join(", ")
        ));
    }
    Ok(format!(
        "49 cells x 1000 draws: {empty} excluded pairs solved empty, {refused} identity pairs refused; all {possible} possible cells witnessed"
    ))
}

#[test]
fn empty_family_verdicts_match_the_class_table_and_possible_cells_have_witnesses() {
    conclude("class-table consistency", family_matches_table());
}

fn step_dichotomy() -> Result<String, String> {
    let mut r = sample::rng(96);
    let mut zero = 0u32;
    let mut positive = 0u32;
    for i in 0..1000u32 {
        let m = if i % 2 == 0 {
            sample::parabolic_aut(&mut r)
        } else {
            sample::parabolic_non_aut(&mut r)
        };
        let z0 = sample::interior_point(&mut r);
        let defect = parabolic_defect(&m).map_err(|e| format!("draw {i}: {e}"))?;
        let step = step_class(&m, z0, tol::STEP_COUNT, tol::STEP_THRESHOLD)
            .map_err(|e| format!("draw {i}: {e}"))?;
        let agrees = matches!(
            (&step, defect > tol::DEFECT_ZERO),
            (StepClass::ZeroStep, true) | (StepClass::PositiveStep, false)
        );
        if !agrees {
            return Err(format!(
                "draw {i}: defect {defect:e} disagrees with verdict {step:?}"
            ));
        }
        match step {
            StepClass::ZeroStep => zero += 1,
            StepClass::PositiveStep => positive += 1,
        }
    }
    Ok(format!(
        "1000 parabolic maps: {zero} zero-step, {positive} positive-step, no disagreements"
    ))
}

#[test]
fn step_verdicts_follow_the_parabolic_defect_dichotomy() {
    conclude("step dichotomy", step_dichotomy());
}

fn embedding_and_dyadics() -> Result<String, String> {
    let pinched = Moebius::real(-1.0, 0.0, 3.0, 4.0).unwrap();
    let verdict = embeddable(&pinched, 8, tol::EMBED_NODE_BUDGET).map_err(|e| e.to_string())?;
    if !matches!(verdict.kind, EmbedKind::NotEmbeddable) {
        return Err(format!("-z/(3z+4): expected not_embeddable, got {}", verdict.kind));
    }
    if verdict.prune_depth != Some(1) {
        return Err(format!(
            "-z/(3z+4): expected every branch pruned at depth 1, got {:?}",
            verdict.prune_depth
        ));
    }

    let mut worst = 0f64;
    for m in [
        Moebius::real(1.0, 0.0, 0.0, 4.0).unwrap(),
        Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap(),
    ] {
        let v = embeddable(&m, 8, tol::EMBED_NODE_BUDGET).map_err(|e| e.to_string())?;
        if !matches!(v.kind, EmbedKind::Embeddable) {
            return Err(format!("{m:?}: expected embeddable, got {}", v.kind));
        }
        let witness = v.witness.as_ref();
        for log2 in 1..=4u32 {
            let denom = 1u64 << log2;
            for a in 1..=denom {
                for b in 1..=denom {
                    if a + b > denom {
                        continue;
                    }
                    let ea = dyadic_element(&m, a, log2, witness).map_err(|e| e.to_string())?;
                    let eb = dyadic_element(&m, b, log2, witness).map_err(|e| e.to_string())?;
                    let eab =
                        dyadic_element(&m, a + b, log2, witness).map_err(|e| e.to_string())?;
                    let err = ea.compose(&eb).proj_distance(&eab);
                    worst = worst.max(err);
                    if err >= 1e-9 {
                        return Err(format!(
                            "{m:?}: e({a}/{denom}) . e({b}/{denom}) misses e({}/{denom}) by {err:e}",
                            a + b
                        ));
                    }
                }
            }
        }
    }
    Ok(format!(
        "pruning verdict exact at depth 1; both flows dyadically additive, worst error {worst:e}"
    ))
}

#[test]
fn embedding_verdicts_are_exact_and_dyadic_elements_add() {
    conclude("semigroup embedding", embedding_and_dyadics());
}
