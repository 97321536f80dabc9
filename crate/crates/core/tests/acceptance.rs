//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use closedcurve::darboux::DarbouxParams;
use closedcurve::minkowski::max_abs;
use closedcurve::oracle::{monodromy, reconstruct_curve, OracleOptions};
use closedcurve::peano_baker::{
    closure_criterion, periodic_solution_test, tabulate_m, ClosureReport, Numerics, Verdict,
};
use closedcurve::{Sign, SystemSpec};
use nalgebra::DMatrix;

use common::{euclid, max_abs_diff, random_profile, rng};

/// Every Closed verdict produced anywhere in the suite, for criterion 7.
type ClosedLog = Vec<(String, f64)>;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }
}

fn run(sys: &SystemSpec, label: &str, log: &mut ClosedLog) -> (ClosureReport, Duration) {
    let start = Instant::now();
    let report = closure_criterion(sys, &Numerics::default()).expect("criterion runs");
    let elapsed = start.elapsed();
    if report.verdict == Verdict::Closed {
        log.push((label.to_string(), report.oracle_curve_gap));
    }
    (report, elapsed)
}

fn circle_anchor(log: &mut ClosedLog) -> Outcome {
    let mut out = Outcome::new();
    let (r, t) = run(&euclid(TAU, 0.0), "circle κ=2π σ=0", log);
    out.check(r.verdict == Verdict::Closed, format!("κ=2π σ=0 verdict {:?}", r.verdict));
    out.check(r.cond_i_residual < 1e-8, format!("cond_i {:.3e} < 1e-8", r.cond_i_residual));
    out.check(r.max_cond_ii() < 1e-8, format!("max|cond_ii| {:.3e} < 1e-8", r.max_cond_ii()));
    out.check(r.oracle_curve_gap < 1e-8, format!("oracle gap {:.3e} < 1e-8", r.oracle_curve_gap));
    out.check(t < Duration::from_secs(1), format!("runtime {t:.2?} < 1s"));

    let (r, t) = run(&euclid(TAU, 0.5), "circle κ=2π σ=0.5", log);
    out.check(r.verdict == Verdict::NotClosed, format!("σ=0.5 verdict {:?}", r.verdict));
    out.check(r.cond_i_residual > 0.1, format!("σ=0.5 cond_i {:.4} > 0.1", r.cond_i_residual));
    out.check(t < Duration::from_secs(1), format!("runtime {t:.2?} < 1s"));

    let (r, t) = run(&euclid(TAU * 1.05, 0.0), "circle κ=2.1π", log);
    out.check(r.verdict == Verdict::NotClosed, format!("κ=2π·1.05 verdict {:?}", r.verdict));
    out.check(t < Duration::from_secs(1), format!("runtime {t:.2?} < 1s"));
    out
}

fn darboux_concordance(log: &mut ClosedLog) -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let axis = |count: usize| -> Vec<f64> {
        (0..count).map(|i| 3.0 * i as f64 / (count - 1) as f64).collect()
    };
    let mut points = Vec::new();
    for eps in [Sign::Plus, Sign::Minus] {
        for &kg in &axis(5) {
            for &kn in &axis(5) {
                for &tg in &axis(3) {
                    points.push(DarbouxParams::new(kg, kn, tg, eps, 1.0).unwrap());
                }
            }
        }
    }
    // Discriminant below the limit cutoff with a non-trivial frame.
    let degenerate = DarbouxParams::new(1.2, 0.7, (1.2_f64.powi(2) + 0.7_f64.powi(2)).sqrt(), Sign::Minus, 1.0).unwrap();
    out.check(degenerate.discriminant().abs() < 1e-12, format!("constructed |D| = {:.1e} < 1e-12", degenerate.discriminant().abs()));
    points.push(degenerate);

    let numerics = Numerics::default();
    let (mut discord, mut worst_row, mut worst_int, mut closed) = (0, 0.0_f64, 0.0_f64, 0);
    for p in &points {
        let sys = SystemSpec::from(*p);
        let label = format!("darboux {:?}", p);
        let (report, _) = run(&sys, &label, log);
        let condition = p.closure_condition(numerics.tol_zero);
        if condition.closed != (report.verdict == Verdict::Closed) {
            discord += 1;
        }
        closed += usize::from(condition.closed);
        let table = tabulate_m(&sys, &numerics).unwrap();
        let row: Vec<f64> = table.result.m_omega.row(0).iter().copied().collect();
        worst_row = worst_row.max(max_abs_diff(&row, &p.closed_form_row1()));
        let ints = table.row1_integrals().unwrap();
        worst_int = worst_int.max(max_abs_diff(&ints, &p.closed_form_row1_integrals()));
    }
    let t = start.elapsed();
    out.check(discord == 0, format!("{} points, {discord} discordant verdicts ({closed} closed)", points.len()));
    out.check(worst_row < 1e-8, format!("row-1 closed form vs series {worst_row:.2e} < 1e-8"));
    out.check(worst_int < 1e-8, format!("row-1 integrals vs Simpson {worst_int:.2e} < 1e-8"));
    out.check(t < Duration::from_secs(30), format!("runtime {t:.2?} < 30s"));
    out
}

fn darboux_closed(log: &mut ClosedLog) -> Outcome {
    let mut out = Outcome::new();
    let p = DarbouxParams::new(0.0, TAU, 0.0, Sign::Plus, 1.0).unwrap();
    let cond = p.closure_condition(1e-8);
    out.check(cond.closed && cond.k == Some(1), format!("closure condition {cond:?}"));
    let sys = SystemSpec::from(p);
    let (r, _) = run(&sys, "darboux (0, 2π, 0, +1)", log);
    out.check(r.verdict == Verdict::Closed, format!("criterion verdict {:?}", r.verdict));
    let trace = reconstruct_curve(&sys, &OracleOptions::default(), None).unwrap();
    let gap = trace.closure_residuals().unwrap().gap;
    out.check(gap < 1e-6, format!("reconstructed gap {gap:.2e} < 1e-6"));
    out
}

struct RandomRun {
    series_vs_monodromy: f64,
    cond_ii_vs_oracle: f64,
    drift: f64,
    det_drift: f64,
}

fn random_runs() -> (Vec<RandomRun>, Duration) {
    let mut rng = rng(2024);
    let numerics = Numerics::default();
    let start = Instant::now();
    let runs = (0..100)
        .map(|_| {
            let sys = SystemSpec::from(random_profile(&mut rng, 3.0));
            let n = sys.dim();
            let table = tabulate_m(&sys, &numerics).unwrap();
            let trace = reconstruct_curve(&sys, &OracleOptions::default(), None).unwrap();
            let phi = trace.frames.last().unwrap();
            let cond_ii = table.row1_integrals().unwrap();
            let oracle = trace.closure_residuals().unwrap();
            RandomRun {
                series_vs_monodromy: max_abs(&(DMatrix::identity(n, n) + &table.result.m_omega - phi)),
                cond_ii_vs_oracle: max_abs_diff(&cond_ii, &oracle.tangent_integral),
                drift: trace.orthonormality_drift().unwrap(),
                det_drift: trace.determinant_drift(),
            }
        })
        .collect();
    (runs, start.elapsed())
}

fn series_oracle(runs: &[RandomRun], t: Duration) -> Outcome {
    let mut out = Outcome::new();
    let worst_phi = runs.iter().map(|r| r.series_vs_monodromy).fold(0.0, f64::max);
    let worst_ii = runs.iter().map(|r| r.cond_ii_vs_oracle).fold(0.0, f64::max);
    out.check(runs.len() == 100, format!("{} profiles", runs.len()));
    out.check(worst_phi < 1e-6, format!("max ‖I+M(ω)−Φ(ω)‖ {worst_phi:.2e} < 1e-6"));
    out.check(worst_ii < 1e-6, format!("max |cond_ii − row₁∫Φ| {worst_ii:.2e} < 1e-6"));
    out.check(t < Duration::from_secs(60), format!("runtime {t:.2?} < 60s"));
    out
}

fn geometric_invariants(runs: &[RandomRun]) -> Outcome {
    let mut out = Outcome::new();
    let drift = runs.iter().map(|r| r.drift).fold(0.0, f64::max);
    let det = runs.iter().map(|r| r.det_drift).fold(0.0, f64::max);
    out.check(drift < 1e-8, format!("orthonormality drift {drift:.2e} < 1e-8"));
    out.check(det < 1e-8, format!("|det Φ − 1| {det:.2e} < 1e-8"));

    // Constant curvature large enough for the RK4 error to clear round-off.
    let sys = euclid(20.0, 15.0);
    let reference = monodromy(&sys, 16384).unwrap();
    let coarse = max_abs(&(monodromy(&sys, 2048).unwrap() - &reference));
    let fine = max_abs(&(monodromy(&sys, 4096).unwrap() - &reference));
    let ratio = coarse / fine;
    out.check((12.0..=20.0).contains(&ratio), format!("error ratio 2048/4096 steps {ratio:.2} in [12, 20]"));
    out
}

fn periodic_solution_vs_closure(log: &mut ClosedLog) -> Outcome {
    let mut out = Outcome::new();
    let sys = euclid(1.0, 0.0);
    let numerics = Numerics::default();
    let (det, periodic) = periodic_solution_test(&sys, &numerics).unwrap();
    out.check(det.abs() < 1e-8 && periodic, format!("|det M(ω)| {:.2e} < 1e-8", det.abs()));
    let m = tabulate_m(&sys, &numerics).unwrap().result.m_omega;
    let max = max_abs(&m);
    let spectral = m.singular_values().max();
    out.check(max > 0.9, format!("‖M(ω)‖_max {max:.4} > 0.9 (spectral norm {spectral:.4})"));
    let (r, _) = run(&sys, "κ=1 σ=0", log);
    out.check(r.verdict == Verdict::NotClosed, format!("verdict {:?}", r.verdict));
    out
}

fn soundness_sweep(log: &mut ClosedLog) -> Outcome {
    let mut out = Outcome::new();
    let mut closed = Vec::new();
    for i in 0..11 {
        let kappa = PI + 2.0 * PI * i as f64 / 10.0;
        for j in 0..11 {
            let sigma = j as f64 / 10.0;
            let (r, _) = run(&euclid(kappa, sigma), &format!("sweep κ={kappa:.4} σ={sigma}"), log);
            if r.verdict == Verdict::Closed {
                closed.push((i, j));
            }
        }
    }
    out.check(closed == vec![(5, 0)], format!("closed grid points {closed:?} == [(κ=2π, σ=0)]"));
    let worst = log.iter().map(|(_, g)| *g).fold(0.0, f64::max);
    let bad: Vec<&String> = log.iter().filter(|(_, g)| *g >= 1e-6).map(|(l, _)| l).collect();
    out.check(bad.is_empty(), format!("{} Closed verdicts, worst oracle gap {worst:.2e} < 1e-6", log.len()));
    out
}

fn main() {
    let mut log = ClosedLog::new();
    let (runs, random_time) = random_runs();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 circle anchor", circle_anchor(&mut log)),
        ("2 Darboux concordance", darboux_concordance(&mut log)),
        ("3 Darboux closed case", darboux_closed(&mut log)),
        ("4 series-monodromy oracle", series_oracle(&runs, random_time)),
        ("5 geometric invariants", geometric_invariants(&runs)),
        ("6 det test vs M = 0", periodic_solution_vs_closure(&mut log)),
        ("7 soundness sweep", soundness_sweep(&mut log)),
    ];

    let mut failed = 0;
    for (name, outcome) in &criteria {
        if outcome.failures.is_empty() {
            println!("PASS criterion {name}: {}", outcome.notes.join("; "));
        } else {
            failed += 1;
            println!(
                "FAIL criterion {name}: failed [{}]; passed [{}]",
                outcome.failures.join("; "),
                outcome.notes.join("; ")
            );
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
