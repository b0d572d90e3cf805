use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use nikolskii::bounds::{conjecture_value, report, BoundReport, Method, ReportOptions};
use nikolskii::extremal::{check_zero_constraints, optimize_zeros, verify_identity, ConstraintKind, OptimizerOptions};
use nikolskii::kernel::{constrained_sup_e, lambda_constraints_even, upper_bound_kernel, LevelGrid, SupSearchOptions};
use nikolskii::norms::{lp_norm_p, parseval_norm_even_p};
use nikolskii::{par, QuadratureSpec, ZeroConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::args::{BoundsArgs, Common, FigureArgs, FigureName, SweepArgs, VerifyArgs, VerifyKind};
use crate::error::{CliError, CliResult};
use crate::format::{g17, Format, Table};

const IDENTITY_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-10;

fn quadrature(common: &Common) -> CliResult<QuadratureSpec> {
    let spec = QuadratureSpec::new(common.tol_abs, common.tol_rel);
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(spec)
}

fn optimizer(common: &Common) -> OptimizerOptions {
    OptimizerOptions {
        seed: common.seed,
        ..OptimizerOptions::default()
    }
}

/// `p_min, p_min + step, ...` up to `p_max`, rounded to 12 decimals so grid
/// values print cleanly.
pub fn p_grid(p_min: f64, p_max: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(p_min.is_finite() && p_max.is_finite() && step.is_finite()) {
        return Err(CliError::Usage("p range must be finite".into()));
    }
    if !(step > 0.0) {
        return Err(CliError::Usage(format!("--p-step must be positive, got {step}")));
    }
    if p_min > p_max {
        return Err(CliError::Usage(format!("--p-min {p_min} exceeds --p-max {p_max}")));
    }
    let n = ((p_max - p_min) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| ((p_min + step * i as f64) * 1e12).round() / 1e12)
        .collect())
}

fn writer(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn dedup_methods(methods: &[Method]) -> Vec<Method> {
    let mut out = Vec::new();
    for &m in methods {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

fn check_point(d: usize, p: f64) -> CliResult<()> {
    if d == 0 {
        return Err(CliError::Usage("--d must be at least 1".into()));
    }
    if !(p >= 2.0) || !p.is_finite() {
        return Err(CliError::Usage(format!("p must be finite and at least 2, got {p}")));
    }
    Ok(())
}

fn failure_text(r: &BoundReport) -> String {
    r.failures
        .iter()
        .map(|f| format!("{}: {}", f.method, f.message))
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn bounds(common: &Common, args: &BoundsArgs) -> CliResult<()> {
    check_point(args.d, args.p)?;
    let methods = dedup_methods(&args.methods.clone().unwrap_or_else(|| ReportOptions::default().methods));
    if methods.is_empty() {
        return Err(CliError::Usage("--methods must name at least one method".into()));
    }
    let spec = quadrature(common)?;
    let opts = ReportOptions {
        methods: methods.clone(),
        optimizer: optimizer(common),
    };
    let r = report(args.d, args.p, &spec, &opts)?;

    let mut out = io::stdout().lock();
    writeln!(out, "bounds for C(d, p), d = {}, p = {}", r.d, g17(r.p))?;
    writeln!(out, "  {:<12} {:>22} {:>22}", "method", "value", "ratio to dp/2+1")?;
    for &m in &methods {
        let failed = r.failures.iter().find(|f| f.method == m);
        let (value, ratio) = match (r.value(m), failed) {
            (Some(v), _) => (g17(v), g17(v / r.conjecture)),
            (None, Some(_)) => ("failed".into(), String::new()),
            (None, None) => ("n/a".into(), String::new()),
        };
        writeln!(out, "  {:<12} {value:>22} {ratio:>22}", m.name())?;
    }
    let best = |v: Option<f64>, how: &Option<String>| match v {
        Some(v) => format!("{} ({})", g17(v), how.as_deref().unwrap_or("")),
        None => "n/a".into(),
    };
    writeln!(out, "  best upper   {}", best(r.best_upper, &r.best_upper_method))?;
    writeln!(out, "  best lower   {}", best(r.best_lower, &r.best_lower_method))?;
    for f in &r.failures {
        writeln!(out, "  error: {}: {}", f.method, f.message)?;
    }

    let mut sup = None;
    if args.sup_e {
        if args.d < 2 {
            writeln!(out, "  sup E        n/a (needs d >= 2)")?;
        } else {
            let grid = LevelGrid::new(args.d, args.p)?;
            let s = constrained_sup_e(&grid, &lambda_constraints_even(args.d)?, &spec, &SupSearchOptions::default())?;
            writeln!(
                out,
                "  sup E       >= {} at tau = [{}]",
                g17(s.value),
                s.tau.interior().iter().map(|&t| g17(t)).collect::<Vec<_>>().join(", ")
            )?;
            if s.value > r.conjecture {
                writeln!(out, "  note: sup E exceeds dp/2+1 = {}, method not conclusive", g17(r.conjecture))?;
            }
            sup = Some(s);
        }
    }
    if args.json {
        let mut v = serde_json::to_value(&r).map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(s) = &sup {
            v["sup_e"] = json!({ "value": s.value, "tau": s.tau.interior() });
        }
        writeln!(out, "{v}")?;
    }
    out.flush()?;

    if !r.is_consistent(1e-6) {
        return Err(CliError::Invariant(format!(
            "best lower {:?} exceeds best upper {:?}",
            r.best_lower, r.best_upper
        )));
    }
    if !r.failures.is_empty() && !args.partial {
        return Err(CliError::Failures(failure_text(&r)));
    }
    Ok(())
}

pub fn sweep(common: &Common, args: &SweepArgs) -> CliResult<()> {
    let methods = dedup_methods(&args.methods);
    if methods.is_empty() {
        return Err(CliError::Usage("--methods must name at least one method".into()));
    }
    let ps = p_grid(args.p_min, args.p_max, args.p_step)?;
    for &d in &args.d {
        check_point(d, ps[0])?;
    }
    let spec = quadrature(common)?;
    let opts = ReportOptions {
        methods: methods.clone(),
        optimizer: optimizer(common),
    };
    let points: Vec<(usize, f64)> = args
        .d
        .iter()
        .flat_map(|&d| ps.iter().map(move |&p| (d, p)))
        .collect();
    let reports = par::map(&points, |&(d, p)| report(d, p, &spec, &opts));

    let ratio_methods: Vec<Method> = methods.iter().copied().filter(|&m| m != Method::Conjecture).collect();
    let mut columns = vec!["d".to_string(), "p".to_string()];
    columns.extend(methods.iter().map(|m| m.name().to_string()));
    columns.extend(ratio_methods.iter().map(|m| format!("{}_ratio", m.name())));
    columns.extend(["best_upper", "best_lower", "upper_ratio", "lower_ratio"].map(String::from));
    let mut table = Table::new(columns);

    let mut errors = 0;
    let mut inconsistent = Vec::new();
    for (&(d, p), r) in points.iter().zip(reports) {
        let mut cells = vec![Some(d as f64), Some(p)];
        match r {
            Ok(r) => {
                cells.extend(methods.iter().map(|&m| r.value(m)));
                cells.extend(ratio_methods.iter().map(|&m| r.ratio(m)));
                cells.extend([r.best_upper, r.best_lower, r.upper_ratio, r.lower_ratio]);
                if !r.is_consistent(1e-6) {
                    inconsistent.push((d, p));
                }
                errors += usize::from(!r.failures.is_empty());
                table.push(cells, failure_text(&r));
            }
            Err(e) => {
                cells.resize(table_width(&methods, &ratio_methods), None);
                errors += 1;
                table.push(cells, e.to_string());
            }
        }
    }
    let mut out = writer(args.out.as_deref())?;
    table.write(&mut out, args.format)?;
    out.flush()?;

    if !inconsistent.is_empty() {
        return Err(CliError::Invariant(format!("best_lower > best_upper at {inconsistent:?}")));
    }
    if errors > 0 && !args.partial {
        return Err(CliError::Failures(format!("{errors} rows recorded errors")));
    }
    Ok(())
}

fn table_width(methods: &[Method], ratios: &[Method]) -> usize {
    2 + methods.len() + ratios.len() + 4
}

struct Tally {
    kind: &'static str,
    measure: &'static str,
    checks: usize,
    failed: usize,
    worst: f64,
}

impl Tally {
    fn finish(&self, out: &mut dyn Write) -> CliResult<()> {
        writeln!(
            out,
            "{}: {} checks, {} passed, {} failed, worst {} {}",
            self.kind,
            self.checks,
            self.checks - self.failed,
            self.failed,
            self.measure,
            g17(self.worst)
        )?;
        writeln!(
            out,
            "{}",
            json!({
                "verify": self.kind,
                "checks": self.checks,
                "passed": self.checks - self.failed,
                "failed": self.failed,
                "worst": self.worst,
            })
        )?;
        if self.failed > 0 {
            return Err(CliError::Invariant(format!("{} of {} {} checks failed", self.failed, self.checks, self.kind)));
        }
        Ok(())
    }
}

pub fn verify(common: &Common, args: &VerifyArgs) -> CliResult<()> {
    let spec = quadrature(common)?;
    let mut out = io::stdout().lock();
    match args.kind {
        VerifyKind::Identity => {
            if args.p.is_some() {
                return Err(CliError::Usage("verify identity takes no --p".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let configs = (0..args.trials)
                .map(|_| {
                    let d = rng.gen_range(1..=6);
                    ZeroConfig::random(&mut rng, d, 0.05)
                })
                .collect::<nikolskii::Result<Vec<_>>>()?;
            let qs = [0.75, 1.0, 1.5, 2.0];
            let results = par::map(&configs, |c| {
                qs.iter()
                    .map(|&q| verify_identity(c, q, &spec))
                    .collect::<nikolskii::Result<Vec<_>>>()
            });
            let mut tally = Tally { kind: "identity", measure: "rel_err", checks: 0, failed: 0, worst: 0.0 };
            for (c, rs) in configs.iter().zip(results) {
                for (q, r) in qs.iter().zip(rs?) {
                    tally.checks += 1;
                    tally.worst = tally.worst.max(r.rel_err);
                    if r.rel_err > IDENTITY_TOL {
                        tally.failed += 1;
                        writeln!(
                            out,
                            "FAIL d={} args={:?} q={q}: rel_err {}, sum of |pieces| {}",
                            c.degree(),
                            c.args(),
                            g17(r.rel_err),
                            g17(r.magnitude)
                        )?;
                    }
                }
            }
            tally.finish(&mut out)
        }
        VerifyKind::Oracle => {
            let ps: Vec<u32> = match args.p {
                None => vec![2, 4, 6, 8],
                Some(p) if p >= 2.0 && p.fract() == 0.0 && p % 2.0 == 0.0 && p <= 64.0 => vec![p as u32],
                Some(p) => return Err(CliError::Usage(format!("the oracle needs an even integer p, got {p}"))),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let mut cases = Vec::new();
            for &p in &ps {
                for _ in 0..args.trials {
                    let d = rng.gen_range(1..=6);
                    cases.push((ZeroConfig::random_peaked(&mut rng, d, 0.05)?, p));
                }
            }
            let diffs = par::map(&cases, |(c, p)| -> nikolskii::Result<f64> {
                Ok((lp_norm_p(c, *p as f64, &spec)?.value - parseval_norm_even_p(c, *p)?).abs())
            });
            let mut tally = Tally { kind: "oracle", measure: "abs_err", checks: 0, failed: 0, worst: 0.0 };
            for ((c, p), diff) in cases.iter().zip(diffs) {
                let diff = diff?;
                tally.checks += 1;
                tally.worst = tally.worst.max(diff);
                if diff > ORACLE_TOL {
                    tally.failed += 1;
                    writeln!(out, "FAIL d={} args={:?} p={p}: |quad - parseval| = {}", c.degree(), c.args(), g17(diff))?;
                }
            }
            tally.finish(&mut out)
        }
        VerifyKind::Constraints => {
            let p = args.p.unwrap_or(3.0);
            check_point(args.d, p)?;
            let r = optimize_zeros(args.d, p, &optimizer(common), &spec)?;
            writeln!(
                out,
                "optimised zeros for d = {}, p = {}: [{}], lower bound {}",
                args.d,
                g17(p),
                r.config.args().iter().map(|&t| g17(t)).collect::<Vec<_>>().join(", "),
                g17(r.lower_bound)
            )?;
            let mut tally = Tally { kind: "constraints", measure: "margin", checks: 0, failed: 0, worst: f64::INFINITY };
            for c in check_zero_constraints(&r) {
                let kind = match c.kind {
                    ConstraintKind::Hard => "hard",
                    ConstraintKind::Conjectural => "conjectural",
                };
                let status = match (c.kind, c.satisfied) {
                    (_, true) => "ok",
                    (ConstraintKind::Hard, false) => "FAIL",
                    (ConstraintKind::Conjectural, false) => "negative",
                };
                writeln!(
                    out,
                    "  {kind:<12} {:<22} value {} bound {} margin {} {status}",
                    c.name,
                    g17(c.value),
                    g17(c.bound),
                    g17(c.margin)
                )?;
                if c.kind == ConstraintKind::Hard {
                    tally.checks += 1;
                    tally.worst = tally.worst.min(c.margin);
                    tally.failed += usize::from(!c.satisfied);
                }
            }
            if tally.checks == 0 {
                tally.worst = 0.0;
            }
            tally.finish(&mut out)
        }
    }
}

pub fn figure(common: &Common, args: &FigureArgs) -> CliResult<()> {
    let ps = p_grid(2.0, 4.0, args.p_step)?;
    let spec = quadrature(common)?;
    let opt = optimizer(common);
    let (columns, rows): (Vec<&str>, Vec<nikolskii::Result<Vec<f64>>>) = match args.name {
        FigureName::UpD234 => (
            vec!["p", "upper_ratio_d2", "upper_ratio_d3", "upper_ratio_d4"],
            par::map(&ps, |&p| {
                let mut row = vec![p];
                for d in 2..=4 {
                    row.push(upper_bound_kernel(d, p, &spec)? / conjecture_value(d, p));
                }
                Ok(row)
            }),
        ),
        FigureName::D4Bounds => (
            vec!["p", "lower_ratio", "upper_ratio"],
            par::map(&ps, |&p| {
                let c = conjecture_value(4, p);
                let lower = optimize_zeros(4, p, &opt, &spec)?.lower_bound;
                Ok(vec![p, lower / c, upper_bound_kernel(4, p, &spec)? / c])
            }),
        ),
        FigureName::D6Zeros => (
            vec!["p", "t1", "t2", "t3", "lower_bound"],
            par::map(&ps, |&p| {
                let r = optimize_zeros(6, p, &opt, &spec)?;
                let mut row = vec![p];
                row.extend_from_slice(r.config.args());
                row.push(r.lower_bound);
                Ok(row)
            }),
        ),
    };

    let width = columns.len();
    let mut table = Table::new(columns.iter().map(|s| s.to_string()).collect());
    let mut errors = 0;
    let mut violations = Vec::new();
    for (&p, row) in ps.iter().zip(rows) {
        match row {
            Ok(row) => {
                let bad = match args.name {
                    FigureName::UpD234 => row[1..].iter().any(|&r| r > 1.0 + 1e-9),
                    FigureName::D4Bounds => row[1] > row[2] + 1e-6,
                    FigureName::D6Zeros => row[1] < PI / 6.0 - 1e-6,
                };
                if bad {
                    violations.push(p);
                }
                table.push(row.into_iter().map(Some).collect(), String::new());
            }
            Err(e) => {
                errors += 1;
                let mut cells = vec![Some(p)];
                cells.resize(width, None);
                table.push(cells, e.to_string());
            }
        }
    }
    let mut out = writer(args.out.as_deref())?;
    table.write(&mut out, Format::Csv)?;
    out.flush()?;
    if !violations.is_empty() {
        return Err(CliError::Invariant(format!("figure invariant fails at p = {violations:?}")));
    }
    if errors > 0 {
        return Err(CliError::Failures(format!("{errors} rows recorded errors")));
    }
    Ok(())
}
