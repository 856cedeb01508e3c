//! Acceptance criteria, one test each. Every test prints a single
//! `[acceptance NN] ... PASS|FAIL` line; run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use open_xxz::params::ChainMode;
use open_xxz::report::VerificationReport;
use open_xxz::{suites, DoubleDouble};

const SEED: u64 = 20;

fn max_of(report: &VerificationReport, names: &[&str]) -> f64 {
    names.iter().filter_map(|n| report.max_value(n)).fold(0.0, |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

fn count(report: &VerificationReport, names: &[&str]) -> usize {
    names.iter().map(|n| report.records_named(n).count()).sum()
}

/// Prints the verdict line, then fails the test if any condition is violated.
fn verdict(id: u32, title: &str, max: f64, tol: f64, elapsed: Duration, budget: Duration, extra: &str) {
    let ok = max <= tol && elapsed < budget;
    println!(
        "[acceptance {id:02}] {title}: {} (max {max:.3e}, tolerance {tol:.0e}, {:.2} s of {} s){extra}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(max <= tol, "criterion {id}: {max:e} > {tol:e}");
    assert!(elapsed < budget, "criterion {id}: {elapsed:?} over budget {budget:?}");
}

#[test]
fn criterion_01_yang_baxter_and_reflection() {
    let t = Instant::now();
    let r = suites::verify_axioms::<f64>(SEED, 2, ChainMode::Inhomogeneous).unwrap();
    let names = ["yang_baxter", "reflection_equation", "dual_reflection_equation"];
    for n in names {
        assert_eq!(r.records_named(n).count(), 100);
    }
    verdict(1, "Yang-Baxter, reflection and dual reflection", max_of(&r, &names), 1e-12, t.elapsed(), Duration::from_secs(1), "");
}

#[test]
fn criterion_02_commutativity_and_crossing() {
    let t = Instant::now();
    let mut all = VerificationReport::new();
    for n in 1..=4 {
        all.extend(suites::verify_axioms::<f64>(SEED + n as u64, n, ChainMode::Inhomogeneous).unwrap());
    }
    let names = ["commutativity", "crossing"];
    verdict(2, "transfer-matrix commutativity and crossing", max_of(&all, &names), 1e-12, t.elapsed(), Duration::from_secs(5), "");
}

#[test]
fn criterion_03_hamiltonian_reconstruction() {
    let t = Instant::now();
    let mut all = VerificationReport::new();
    for n in 2..=3 {
        let r = suites::verify_axioms::<f64>(SEED + n as u64, n, ChainMode::Homogeneous).unwrap();
        assert!(r.records_named("hamiltonian").all(|x| x.hard));
        all.extend(r);
    }
    verdict(3, "Hamiltonian from the transfer matrix", max_of(&all, &["hamiltonian"]), 1e-10, t.elapsed(), Duration::from_secs(5), "");
}

#[test]
fn criterion_04_offshell_relations() {
    let t = Instant::now();
    let mut all = VerificationReport::new();
    for n in 1..=3 {
        all.extend(suites::offshell_trials::<f64>(SEED + n as u64, n, ChainMode::Inhomogeneous, Some(20)).unwrap());
    }
    let names = ["offshell_ket", "offshell_bra"];
    assert_eq!(count(&all, &names), 2 * 60);
    verdict(4, "off-shell action on kets and bras", max_of(&all, &names), 1e-9, t.elapsed(), Duration::from_secs(30), "");
}

#[test]
fn criterion_05_root_solver() {
    let t = Instant::now();
    let mut all = VerificationReport::new();
    for n in 1..=3 {
        let (r, roots) = suites::solve_all::<f64>(SEED + n as u64, n, ChainMode::Inhomogeneous).unwrap();
        assert_eq!(roots.len(), 1 << n);
        all.extend(r);
    }
    let names = ["bethe_residual", "eigenvalue_held_out"];
    assert_eq!(count(&all, &names), 2 * (2 + 4 + 8));
    verdict(5, "Bethe roots for every eigenstate", max_of(&all, &names), 1e-8, t.elapsed(), Duration::from_secs(60), "");
}

/// Trials per chain length; each is at least the number of eigenstates.
const SCALAR_TRIALS: [(usize, usize); 3] = [(1, 10), (2, 20), (3, 24)];

fn scalar_reports() -> (VerificationReport, Duration) {
    let t = Instant::now();
    let mut all = VerificationReport::new();
    for (n, trials) in SCALAR_TRIALS {
        assert!(trials >= 1 << n);
        let st = suites::scalar_product_trials::<f64>(SEED + n as u64, n, ChainMode::Inhomogeneous, trials).unwrap();
        let states: std::collections::BTreeSet<_> = st.report.records_named("scalar_product").map(|r| r.inputs["eigen_index"].clone()).collect();
        assert_eq!(states.len(), 1 << n);
        all.extend(st.report);
    }
    (all, t.elapsed())
}

#[test]
fn criterion_06_linear_system_singular() {
    let (all, elapsed) = scalar_reports();
    verdict(6, "det L vanishes on shell", max_of(&all, &["det_l"]), 1e-9, elapsed, Duration::from_secs(300), "");
}

#[test]
fn criterion_07_scalar_product_formula() {
    let (all, elapsed) = scalar_reports();
    let trials = all.records_named("scalar_product").count();
    assert!(trials >= 50);
    verdict(7, "pairing equals the determinant formula", max_of(&all, &["scalar_product"]), 1e-7, elapsed, Duration::from_secs(300), &format!(", {trials} trials"));
}

#[test]
fn criterion_08_nu_product() {
    let t = Instant::now();
    let mut all = VerificationReport::new();
    for n in 1..=5 {
        all.extend(suites::nu_check::<f64>(SEED + n as u64, n, ChainMode::Inhomogeneous).unwrap());
    }
    verdict(8, "nu_N determinant equals its product form", max_of(&all, &["nu_determinant_product"]), 1e-10, t.elapsed(), Duration::from_secs(5), "");
}

#[test]
fn criterion_09_dolan_grady_and_reference_eigenvalue() {
    let t = Instant::now();
    let mut all = VerificationReport::new();
    for n in 1..=4 {
        all.extend(suites::asymptotics::<f64>(SEED + n as u64, n, ChainMode::Inhomogeneous).unwrap());
    }
    let dg = max_of(&all, &["dolan_grady", "dolan_grady_dual"]);
    let eig = max_of(&all, &["a_eigenvalue"]);
    let elapsed = t.elapsed();
    let ok = dg <= 1e-10 && eig <= 1e-12;
    println!(
        "[acceptance 09] q-Dolan-Grady relations and A on the reference state: {} (Dolan-Grady max {dg:.3e} of 1e-10, eigenvalue max {eig:.3e} of 1e-12, {:.2} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(dg <= 1e-10, "{dg:e}");
    assert!(eig <= 1e-12, "{eig:e}");
}

#[test]
fn criterion_10_scalar_product_asymptotics() {
    let t = Instant::now();
    let mut all = VerificationReport::new();
    for n in 1..=2 {
        all.extend(suites::asymptotics::<DoubleDouble>(SEED + n as u64, n, ChainMode::Inhomogeneous).unwrap());
    }
    // the ratio is hard only at |u| = 1e4
    let ratio = all.records_named("asymptotic_scalar_ratio").filter(|r| r.hard).map(|r| r.value).fold(0.0, f64::max);
    assert_eq!(all.records_named("asymptotic_scalar_ratio").filter(|r| r.hard).count(), 2);
    assert!(all.records_named("asymptotic_scalar_ratio").filter(|r| r.hard).all(|r| r.inputs["magnitude"] == "10000.0"));
    let exponent = max_of(&all, &["asymptotic_exponent"]);
    verdict(10, "large-u exponent and leading coefficient (extended precision)", exponent.max(ratio), 1e-3, t.elapsed(), Duration::from_secs(120), &format!(", exponent {exponent:.2e}, ratio {ratio:.2e}"));
}

#[test]
fn criterion_11_four_determinant_routes() {
    let (all, elapsed) = scalar_reports();
    let pairs: std::collections::BTreeSet<_> = all.records_named("determinant_routes").map(|r| r.inputs["pair"].clone()).collect();
    assert_eq!(pairs.len(), 6);
    verdict(11, "four routes to det M agree", max_of(&all, &["determinant_routes"]), 1e-8, elapsed, Duration::from_secs(300), "");
}
