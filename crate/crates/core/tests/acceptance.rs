//! One line per acceptance criterion. All comparisons are exact: the only
//! tolerance is zero, and each criterion with a runtime budget also checks it.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use sl2crit::harness::{self, CheckSpec, Report, Suite};
use sl2crit::rep::{self, Chevalley, WeightTriple};
use sl2crit::{HalfInt, Rational};

const TOLERANCE: i64 = 0;

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn budget_line(elapsed: Duration, budget: Option<Duration>) -> (bool, String) {
    match budget {
        Some(b) => (
            elapsed <= b,
            format!(
                "elapsed {:.1}s, budget {}s",
                elapsed.as_secs_f64(),
                b.as_secs()
            ),
        ),
        None => (true, format!("elapsed {:.1}s", elapsed.as_secs_f64())),
    }
}

fn suite_outcome(
    id: u32,
    title: &'static str,
    spec: CheckSpec,
    budget: Option<Duration>,
) -> Outcome {
    let start = Instant::now();
    let report = harness::run_suite(&spec).expect("valid spec");
    let (in_budget, timing) = budget_line(start.elapsed(), budget);
    let residuals_ok = report.summary.failed == 0 && report.summary.checks > 0;
    let mut detail = format!(
        "{} checks, {} nonzero residuals, tolerance {TOLERANCE}, {timing}",
        report.summary.checks, report.summary.failed
    );
    if !residuals_ok {
        let first: Vec<String> = report
            .records
            .iter()
            .take(3)
            .map(|r| format!("{} {:?}", r.identity, r.params))
            .collect();
        detail.push_str(&format!("; first failures: {}", first.join(" | ")));
    }
    Outcome {
        id,
        title,
        pass: residuals_ok && in_budget,
        detail,
    }
}

fn criterion_1() -> Outcome {
    let mut spec = CheckSpec::default_for(Suite::Clifford);
    spec.max_wedge_deg = 8;
    spec.mode_bound = HalfInt::from_twice(11);
    suite_outcome(
        1,
        "Clifford relations, wedge degree <= 8, |m|,|n| <= 11/2",
        spec,
        Some(Duration::from_secs(60)),
    )
}

fn criterion_2() -> Outcome {
    let mut spec = CheckSpec::default_for(Suite::Current);
    spec.max_twice_deg = 10;
    spec.charge_bound = 2;
    spec.mode_bound = HalfInt::from_int(4);
    suite_outcome(
        2,
        "current algebra, twice-degree <= 10, |p| <= 2, |m|,|n| <= 4",
        spec,
        Some(Duration::from_secs(300)),
    )
}

fn criterion_3() -> Vec<Outcome> {
    let mut subs = Vec::new();
    let mut push = |title: &'static str, pass: bool, detail: String| {
        subs.push(Outcome {
            id: 3,
            title,
            pass,
            detail,
        });
    };

    let report: Report = harness::verify_hwv();
    let failing: Vec<&str> = report
        .records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.identity.as_str())
        .collect();
    push(
        "highest-weight checklist (annihilation, Cartan, d, two-step checks)",
        report.summary.failed == 0,
        format!("{} checks, failing: {:?}", report.summary.checks, failing),
    );

    let w0 = rep::weight_of(&rep::v0());
    let w1 = rep::weight_of(&rep::v1());
    let want0 = WeightTriple::new(Rational::from_int(-2), Rational::zero(), Rational::zero());
    let want1 = WeightTriple::new(
        Rational::zero(),
        Rational::from_int(-2),
        Rational::new(-1, 2),
    );
    push(
        "weights (-2,0,0) and (0,-2,-1/2)",
        w0.as_ref() == Ok(&want0) && w1.as_ref() == Ok(&want1),
        format!("v0 -> {w0:?}, v1 -> {w1:?}"),
    );

    let f0v0 = rep::chevalley_act(Chevalley::F0, &rep::v0());
    let displayed_f0 = harness::expected_f0_v0();
    push(
        "f0·v0 equals the displayed -2(1⊗u_{-3/2}∧u_{-1/2}∧u_{3/2}∧…⊗e^α)",
        f0v0 == displayed_f0,
        format!("computed {}", serde_json::to_string(&f0v0).unwrap()),
    );

    let f1v1 = rep::chevalley_act(Chevalley::F1, &rep::v1());
    let displayed_f1 = harness::displayed_f1_v1();
    push(
        "f1·v1 equals the displayed -2(1⊗u_{-1/2}∧u_{5/2}∧u_{7/2}∧…⊗e^{-2α})",
        f1v1 == displayed_f1,
        format!(
            "computed {}; the wedge sign rules force +2 (see the hwv report notes)",
            serde_json::to_string(&f1v1).unwrap()
        ),
    );
    subs
}

fn criterion_4() -> Outcome {
    let mut spec = CheckSpec::default_for(Suite::Exp);
    spec.mode_bound = HalfInt::from_int(6);
    spec.max_twice_deg = 12;
    suite_outcome(
        4,
        "exponential-operator identities, |k| <= 6, Fock degree <= 6",
        spec,
        None,
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let table = harness::character(12, None);
    let (in_budget, timing) = budget_line(start.elapsed(), Some(Duration::from_secs(60)));
    let guard = matches!(
        harness::character(12, Some(2)),
        Err(harness::HarnessError::ChargeCutoffLeak { .. })
    );
    match table {
        Ok(t) => {
            let v: Vec<u64> = t.v.iter().map(|r| r.enumerated).collect();
            let omega: Vec<u64> = t.omega.iter().map(|r| r.enumerated).collect();
            let printed_ratio = t.v.iter().all(|r| r.formula_m_from_zero == 4 * r.formula);
            let documented = t.notes.iter().any(|n| n.contains("m >= 0"));
            Outcome {
                id: 5,
                title: "character of V and of the vacuum space through twice-degree 12",
                pass: t.matches() && guard && printed_ratio && documented && in_budget,
                detail: format!(
                    "cutoff {}, V {:?}, vacuum space {:?}, m>=0 series = 4x: {printed_ratio}, leak guard: {guard}, {timing}",
                    t.charge_cutoff, v, omega
                ),
            }
        }
        Err(e) => Outcome {
            id: 5,
            title: "character",
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn criterion_6() -> Outcome {
    let spec = CheckSpec::default_for(Suite::Zalg);
    let mut o = suite_outcome(
        6,
        "Z-algebra relations, |m|,|n| <= 3, wedge degree <= 5, |p| <= 2; definition route; [H(n),Z]",
        spec.clone(),
        None,
    );
    let report = harness::run_suite(&spec).expect("valid spec");
    let ids = [
        "[Z+(m),Z-(n)]gen",
        "[Z+(m),Z+(n)]gen",
        "[Z-(m),Z-(n)]gen",
        "definition",
        "[H(n),Z+(m)]",
        "[H(n),Z-(m)]",
    ];
    let covered = ids
        .iter()
        .all(|id| report.summary.by_identity.keys().any(|k| k.contains(id)));
    o.pass &= covered;
    o.detail.push_str(&format!(
        ", all identity families present: {covered}, largest certified k-bound {}",
        report.facts["max_termination_bound"]
    ));
    o
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let report = harness::d_homogeneity_probe(&CheckSpec::default_for(Suite::Dprobe));
    let (_, timing) = budget_line(start.elapsed(), None);
    match report {
        Ok(r) => {
            let per_charge = &r.facts["per_charge"]["[d,X(m)] - mX(m)"];
            let charges = per_charge.as_object().map_or(0, |o| o.len());
            let nonzero: u64 = per_charge
                .as_object()
                .map(|o| o.values().filter_map(|s| s["nonzero"].as_u64()).sum())
                .unwrap_or(0);
            Outcome {
                id: 7,
                title: "d-homogeneity probe report",
                pass: charges > 0 && r.passed(),
                detail: format!("{charges} charge sectors reported, {nonzero} nonzero [d,X(m)] - mX(m) residuals (informational), {timing}"),
            }
        }
        Err(e) => Outcome {
            id: 7,
            title: "d-homogeneity probe report",
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn main() -> ExitCode {
    let mut all = Vec::new();
    all.push(criterion_1());
    all.push(criterion_2());
    let subs = criterion_3();
    for s in &subs {
        println!(
            "  criterion 3 / {}: {} ({})",
            s.title,
            if s.pass { "PASS" } else { "FAIL" },
            s.detail
        );
    }
    all.push(Outcome {
        id: 3,
        title: "highest-weight checklist with the displayed f0·v0 and f1·v1",
        pass: subs.iter().all(|s| s.pass),
        detail: format!(
            "{} of {} sub-checks pass, tolerance {TOLERANCE}",
            subs.iter().filter(|s| s.pass).count(),
            subs.len()
        ),
    });
    all.push(criterion_4());
    all.push(criterion_5());
    all.push(criterion_6());
    all.push(criterion_7());
    all.sort_by_key(|o| o.id);

    for o in &all {
        println!(
            "criterion {}: {} - {} ({})",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.title,
            o.detail
        );
    }
    let failed: Vec<u32> = all.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", all.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
