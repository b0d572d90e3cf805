//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p nikolskii-suite --test acceptance`. Exits non-zero if
//! any criterion fails or exceeds its time budget.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nikolskii::bounds::{beta_bound, conjecture_value, report, ReportOptions};
use nikolskii::extremal::{check_zero_constraints, optimize_zeros, verify_identity, ConstraintKind, OptimizerOptions};
use nikolskii::kernel::{constrained_sup_e, lambda_constraints_even, upper_bound_kernel, LevelGrid, SupSearchOptions};
use nikolskii::norms::{lp_norm_p, parseval_norm_even_p};
use nikolskii::specfun::beta;
use nikolskii::{par, QuadratureSpec, Result, ZeroConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn grid(lo: f64, step: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn ac1() -> Result<Outcome> {
    let mut worst_opt: f64 = 0.0;
    for d in 1..=6 {
        let r = optimize_zeros(d, 2.0, &OptimizerOptions::default(), &spec())?;
        worst_opt = worst_opt.max((r.lower_bound - (d + 1) as f64).abs());
    }
    let mut worst_kernel: f64 = 0.0;
    for d in 2..=4 {
        worst_kernel = worst_kernel.max((upper_bound_kernel(d, 2.0, &spec())? - (d + 1) as f64).abs());
    }
    outcome(
        worst_opt <= 1e-6 && worst_kernel <= 1e-8,
        format!("max |opt - (d+1)| = {worst_opt:.3e}, max |kernel - (d+1)| = {worst_kernel:.3e}"),
    )
}

fn ac2() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut coincide = true;
    for p in [2.0, 2.5, 3.0, 4.0, 6.0, 10.0] {
        let norm = lp_norm_p(&ZeroConfig::degree_one(), p, &spec())?.value;
        let exact = beta((p + 1.0) / 2.0, 0.5)? / PI;
        worst = worst.max((norm - exact).abs() / exact);
        let r = report(1, p, &spec(), &ReportOptions::default())?;
        coincide &= r.best_lower == r.best_upper && r.best_lower.is_some();
    }
    outcome(
        worst <= 1e-9 && coincide,
        format!("max relative error {worst:.3e}, report bounds coincide: {coincide}"),
    )
}

fn ac3() -> Result<Outcome> {
    let points: Vec<(usize, f64)> = (2..=4)
        .flat_map(|d| grid(2.0, 0.01, 200).into_iter().map(move |p| (d, p)))
        .collect();
    let values = par::map(&points, |&(d, p)| upper_bound_kernel(d, p, &spec()));
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    for (&(d, p), v) in points.iter().zip(values) {
        let excess = v? - conjecture_value(d, p);
        worst = worst.max(excess);
        if excess > 1e-9 {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{} points, {violations} above dp/2+1, max(E - (dp/2+1)) = {worst:.3e}", points.len()),
    )
}

fn ac4() -> Result<Outcome> {
    // Reference values of the optimised d = 4 lower-bound ratio, 4 decimals.
    let targets = [(2.0, 0.9999), (2.5, 0.9642), (3.0, 0.9307), (3.5, 0.9001), (4.0, 0.8723)];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (p, want) in targets {
        let r = optimize_zeros(4, p, &OptimizerOptions::default(), &spec())?;
        let ratio = r.lower_bound / conjecture_value(4, p);
        worst = worst.max((ratio - want).abs());
        parts.push(format!("{p}: {ratio:.5}"));
    }
    outcome(
        worst <= 2e-3,
        format!("{}; max deviation {worst:.2e}", parts.join(", ")),
    )
}

fn ac5() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let configs: Vec<ZeroConfig> = (0..100)
        .map(|_| {
            let d = rng.gen_range(1..=6);
            ZeroConfig::random(&mut rng, d, 0.05)
        })
        .collect::<Result<_>>()?;
    let checks = par::map(&configs, |c| {
        [0.75, 1.0, 1.5, 2.0]
            .iter()
            .map(|&q| verify_identity(c, q, &spec()))
            .collect::<Result<Vec<_>>>()
    });
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (c, results) in configs.iter().zip(checks) {
        for (q, r) in [0.75, 1.0, 1.5, 2.0].into_iter().zip(results?) {
            worst = worst.max(r.rel_err);
            if r.rel_err > 1e-8 {
                failures.push(format!(
                    "d={} args={:?} q={q}: rel_err {:.2e}, sum of |pieces| {:.2e}, rounding floor {:.2e}",
                    c.degree(),
                    c.args(),
                    r.rel_err,
                    r.magnitude,
                    r.magnitude * f64::EPSILON
                ));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("400 checks, {} above 1e-8, worst {worst:.3e} {failures:?}", failures.len()),
    )
}

fn ac6() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for p in [2u32, 4, 6, 8] {
        for _ in 0..50 {
            let d = rng.gen_range(1..=6);
            let c = ZeroConfig::random_peaked(&mut rng, d, 0.05)?;
            let quad = lp_norm_p(&c, p as f64, &spec())?.value;
            worst = worst.max((quad - parseval_norm_even_p(&c, p)?).abs());
            checks += 1;
        }
    }
    outcome(worst <= 1e-10, format!("{checks} configs, max |quad - parseval| = {worst:.3e}"))
}

fn ac7() -> Result<Outcome> {
    let g = LevelGrid::new(6, 2.5)?;
    let s = constrained_sup_e(&g, &lambda_constraints_even(6)?, &spec(), &SupSearchOptions::default())?;
    outcome(
        s.value >= 8.6 - 1e-2 && s.value > conjecture_value(6, 2.5),
        format!("sup E >= {:.5} at tau = {:?}", s.value, s.tau.interior()),
    )
}

fn ac8() -> Result<Outcome> {
    let ps = grid(6.8, 0.1, 432);
    let mut worst_conj = f64::NEG_INFINITY;
    let mut worst_half = f64::NEG_INFINITY;
    for d in 1..=10 {
        for (i, &p) in ps.iter().enumerate() {
            let b = beta_bound(d, p)?;
            worst_conj = worst_conj.max(b - conjecture_value(d, p));
            if i > 0 {
                worst_half = worst_half.max(b - d as f64 * p / 2.0);
            }
        }
    }
    let mut worst_p2: f64 = 0.0;
    for d in 1..=10 {
        worst_p2 = worst_p2.max((beta_bound(d, 2.0)? - 2.0 * d as f64).abs());
    }
    outcome(
        worst_conj <= 0.0 && worst_half <= 0.0 && worst_p2 <= 1e-10,
        format!(
            "max(beta - (dp/2+1)) = {worst_conj:.4}, max(beta - dp/2) = {worst_half:.4}, |beta(d,2) - 2d| <= {worst_p2:.1e}"
        ),
    )
}

fn ac9() -> Result<Outcome> {
    let mut worst = f64::INFINITY;
    let mut failed = Vec::new();
    for d in 2..=4 {
        for p in [2.5, 3.0, 3.5, 4.0] {
            let r = optimize_zeros(d, p, &OptimizerOptions::default(), &spec())?;
            for c in check_zero_constraints(&r).into_iter().filter(|c| c.kind == ConstraintKind::Hard) {
                worst = worst.min(c.margin);
                if !c.satisfied {
                    failed.push(format!("d={d} p={p} {}", c.name));
                }
            }
        }
    }
    outcome(failed.is_empty(), format!("smallest hard margin {worst:.4}, violations {failed:?}"))
}

fn ac10() -> Result<Outcome> {
    let points: Vec<(usize, f64)> = (1..=4)
        .flat_map(|d| grid(2.0, 0.1, 20).into_iter().map(move |p| (d, p)))
        .collect();
    let reports = par::map(&points, |&(d, p)| report(d, p, &spec(), &ReportOptions::all()));
    let mut bad = Vec::new();
    let mut failures = 0;
    let mut tightest = f64::INFINITY;
    for r in reports {
        let r = r?;
        failures += r.failures.len();
        if let (Some(lo), Some(hi)) = (r.best_lower, r.best_upper) {
            tightest = tightest.min(hi - lo);
        }
        if !r.is_consistent(1e-6) || r.best_lower.is_none() || r.best_upper.is_none() {
            bad.push((r.d, r.p));
        }
    }
    outcome(
        bad.is_empty() && failures == 0,
        format!(
            "{} reports, {failures} method failures, min(best_upper - best_lower) = {tightest:.3e}, violations {bad:?}",
            points.len()
        ),
    )
}

type Criterion = (&'static str, &'static str, Option<Duration>, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", "sharp constants at p = 2", Some(Duration::from_secs(30)), ac1),
        ("AC2", "d = 1 closed form", None, ac2),
        ("AC3", "kernel bound below dp/2+1", Some(Duration::from_secs(300)), ac3),
        ("AC4", "d = 4 optimised lower ratio regression", Some(Duration::from_secs(120)), ac4),
        ("AC5", "contour identity", Some(Duration::from_secs(120)), ac5),
        ("AC6", "quadrature vs Parseval oracle", None, ac6),
        ("AC7", "constrained sup E exceeds dp/2+1 for d = 6", None, ac7),
        ("AC8", "beta bound threshold", None, ac8),
        ("AC9", "zero constraint margins", None, ac9),
        ("AC10", "sandwich best_lower <= best_upper", None, ac10),
    ];
    let mut all_pass = true;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|b| elapsed > b);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && !over, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let budget_note = match budget {
            Some(b) if over => format!(", over budget {:.0}s", b.as_secs_f64()),
            Some(b) => format!(", budget {:.0}s", b.as_secs_f64()),
            None => String::new(),
        };
        println!(
            "{id} {} {name}: {detail} [{:.2}s{budget_note}]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        all_pass &= pass;
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
