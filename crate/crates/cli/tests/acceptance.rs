//! End-to-end acceptance run: one line per criterion, every budget pinned here.

use std::io::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use nijenhuis_cli::input::algebra_to_file;
use nijenhuis_cli::{run_suite, RunReport, SuiteConfig, SUITES};
use nijenhuis_core::algebra::{AlgebraStructure, OpKind};
use nijenhuis_core::{samples, Scalar};

const COEFFICIENTS_BUDGET: Duration = Duration::from_secs(1);
const HOMOTOPY_BUDGET: Duration = Duration::from_secs(10);
const AXIOMS_BUDGET: Duration = Duration::from_secs(30);
const COBAR_BUDGET: Duration = Duration::from_secs(60);
const DIMS_BUDGET: Duration = Duration::from_secs(1);
const DICTIONARY_BUDGET: Duration = Duration::from_secs(30);
const QUADRATIC_BUDGET: Duration = Duration::from_secs(300);
const LIFT_BUDGET: Duration = Duration::from_secs(300);
const BICOMPLEX_BUDGET: Duration = Duration::from_secs(60);
const FN_BUDGET: Duration = Duration::from_secs(120);
const DUAL_BUDGET: Duration = Duration::from_secs(10);
const DETERMINISM_BUDGET: Duration = Duration::from_secs(300);

const HOMOTOPY_WEIGHT: usize = 4;
const AXIOM_WEIGHT: usize = 3;
const COBAR_ARITY: usize = 4;
const DIMS_UP_TO: usize = 8;
const DICTIONARY_SAMPLES: usize = 100;
const MC_SAMPLES: usize = 50;
const FN_SAMPLES: usize = 50;
const FN_CONSTANT: &str = "c ∈ {2}";

struct Outcome {
    passed: bool,
    detail: String,
}

fn config(suite: &str) -> SuiteConfig {
    SuiteConfig::new(suite)
}

fn run(c: &SuiteConfig) -> RunReport {
    run_suite(c).unwrap_or_else(|e| panic!("{} failed to run: {e}", c.suite))
}

fn summary(r: &RunReport) -> String {
    r.checks
        .iter()
        .map(|c| format!("[{}] {}", c.name, c.detail))
        .collect::<Vec<_>>()
        .join("; ")
}

fn from_report(r: &RunReport) -> Outcome {
    Outcome {
        passed: r.passed,
        detail: summary(r),
    }
}

fn write_input(name: &str, s: &AlgebraStructure) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&algebra_to_file(s)).unwrap()).unwrap();
    path
}

fn coefficients() -> Outcome {
    let mut c = config("freelie-coefficients");
    c.weight = 1;
    let r = run(&c);
    let wanted = ["c = 1/2", "c = 1/6", "c = 1/3"];
    let found = wanted.iter().all(|w| r.checks.iter().any(|c| c.detail.starts_with(w) && c.passed));
    Outcome {
        passed: r.passed && found,
        detail: summary(&r),
    }
}

fn homotopy() -> Outcome {
    let mut c = config("freelie-coefficients");
    c.weight = HOMOTOPY_WEIGHT;
    let r = run(&c);
    let check = r.checks.iter().find(|c| c.name.starts_with("dQ + Qd")).expect("homotopy check present");
    Outcome {
        passed: check.passed,
        detail: check.detail.clone(),
    }
}

fn perturbed(s: &AlgebraStructure) -> AlgebraStructure {
    let mut t = s.clone();
    let (&(i, j), v) = t.entries(OpKind::Circ).next().expect("Im Q has a circ product");
    let (&k, _) = v.iter().next().expect("nonzero entry");
    t.add_to(OpKind::Circ, i, j, k, Scalar::one());
    t
}

fn axioms() -> Outcome {
    let mut c = config("prelie2-axioms");
    c.weight = AXIOM_WEIGHT;
    let good = run(&c);
    let s = samples::image_of_q(&[0, 1], AXIOM_WEIGHT).unwrap();
    c.input = Some(write_input("perturbed_image.json", &perturbed(&s)));
    let bad = run(&c);
    let witness = bad.failures().find_map(|c| c.witness.clone());
    Outcome {
        passed: good.passed && !bad.passed && witness.is_some(),
        detail: format!(
            "Im Q: {}; perturbed: {} failing, witness {}",
            if good.passed { "all hold" } else { "violations" },
            bad.failures().count(),
            witness.unwrap_or_else(|| "none".into())
        ),
    }
}

fn cobar() -> Outcome {
    let mut c = config("cobar-d2");
    c.arity = COBAR_ARITY;
    from_report(&run(&c))
}

fn dims() -> Outcome {
    let mut c = config("smodule-dims");
    c.arity = DIMS_UP_TO;
    from_report(&run(&c))
}

fn dictionary() -> Outcome {
    let mut c = config("nijenhuis-dictionary");
    c.samples = DICTIONARY_SAMPLES;
    let r = run(&c);
    let full = r.checks[0].detail.starts_with(&format!("{DICTIONARY_SAMPLES}/{DICTIONARY_SAMPLES}"));
    Outcome {
        passed: r.passed && full,
        detail: summary(&r),
    }
}

fn agreement(suite: &str) -> Outcome {
    let mut c = config(suite);
    c.samples = MC_SAMPLES;
    let r = run(&c);
    let full = r.checks.iter().any(|c| c.detail.starts_with(&format!("{MC_SAMPLES}/{MC_SAMPLES} agree")));
    Outcome {
        passed: r.passed && full,
        detail: summary(&r),
    }
}

fn bicomplex() -> Outcome {
    let mut c = config("ce-bicomplex");
    let good = run(&c);
    c.input = Some(write_input("broken_compatibility.json", &samples::broken_compatibility()));
    let bad = run(&c);
    let residue = bad.checks.iter().any(|c| !c.passed && !c.detail.starts_with("0 "));
    Outcome {
        passed: good.passed && !bad.passed && residue,
        detail: format!("Im Q: {}; broken: {}", summary(&good), summary(&bad)),
    }
}

fn fn_constant() -> Outcome {
    let mut c = config("fn-constant");
    c.samples = FN_SAMPLES;
    let r = run(&c);
    let two = r.checks.iter().any(|c| c.detail.starts_with(FN_CONSTANT));
    Outcome {
        passed: r.passed && two,
        detail: summary(&r),
    }
}

fn dual() -> Outcome {
    from_report(&run(&config("dual-axioms")))
}

fn determinism() -> Outcome {
    let mut differing = Vec::new();
    for suite in SUITES {
        let c = config(suite);
        if run(&c).structured() != run(&c).structured() {
            differing.push(suite);
        }
    }
    Outcome {
        passed: differing.is_empty(),
        detail: format!("{} suites run twice, differing: {differing:?}", SUITES.len()),
    }
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("free Lie coefficients", COEFFICIENTS_BUDGET, coefficients),
        ("homotopy identities", HOMOTOPY_BUDGET, homotopy),
        ("pre-Lie² axioms and perturbation", AXIOMS_BUDGET, axioms),
        ("cobar d² = 0", COBAR_BUDGET, cobar),
        ("S-module dimensions", DIMS_BUDGET, dims),
        ("Nijenhuis dictionary", DICTIONARY_BUDGET, dictionary),
        ("quadratic relations vs Maurer-Cartan", QUADRATIC_BUDGET, || agreement("maurer-cartan")),
        ("lift vs Maurer-Cartan", LIFT_BUDGET, || agreement("theorem-521")),
        ("Chevalley-Eilenberg bicomplex", BICOMPLEX_BUDGET, bicomplex),
        ("Frölicher-Nijenhuis constant", FN_BUDGET, fn_constant),
        ("Koszul dual axioms", DUAL_BUDGET, dual),
        ("determinism", DETERMINISM_BUDGET, determinism),
    ];
    let mut failed = Vec::new();
    for (n, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let ok = o.passed && elapsed <= budget;
        let _ = writeln!(
            std::io::stderr(),
            "criterion {} {name}: {} {} ({elapsed:.2?}/{budget:?})",
            n + 1,
            if ok { "PASS" } else { "FAIL" },
            o.detail
        );
        if !ok {
            failed.push(n + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
