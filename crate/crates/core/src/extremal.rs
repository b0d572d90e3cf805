//! Numerical search for the extremal polynomial and checks on its zeros.
//!
//! The extremal polynomial minimises `|P|_p^p` subject to `P(1) = 1`; its
//! zeros lie on the circle in conjugate pairs, so the search runs over the
//! `d/2` zero arguments only.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::zero_constraint_midpoint;
use crate::norms::lp_norm_p;
use crate::par;
use crate::polycircle::{gamma_config, ZeroConfig};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::simplex::{self, SimplexOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    pub starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            max_iters: 2000,
            tol: 1e-10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub config: ZeroConfig,
    pub p: f64,
    /// `1 / norm_p`, a lower bound for `C(d, p)`.
    pub lower_bound: f64,
    /// `|P|_p^p` of the best configuration, at the caller's tolerances.
    pub norm_p: f64,
    pub converged: bool,
    /// Starts whose lower bound agrees with the best within `1e-8`.
    pub starts_agreeing: usize,
}

const SNAP_TO_PI: f64 = 1e-9;
const JITTER: f64 = 0.1;

/// Zero arguments from log-increments: `t_j = Σ_{i<=j} exp(u_i)`, folded
/// into `[0, π]` by conjugation and re-sorted.
fn decode(u: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut t: Vec<f64> = u
        .iter()
        .map(|&x| {
            acc += x.exp();
            let r = acc.rem_euclid(2.0 * PI);
            let folded = r.min(2.0 * PI - r);
            if PI - folded <= SNAP_TO_PI {
                PI
            } else {
                folded
            }
        })
        .collect();
    t.sort_by(f64::total_cmp);
    t
}

fn encode(t: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    t.iter()
        .map(|&x| {
            let u = (x - prev).max(1e-12).ln();
            prev = x;
            u
        })
        .collect()
}

fn relaxed(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: spec.abs_tol.max(1e-10),
        rel_tol: spec.rel_tol.max(1e-8),
        ..spec.clone()
    }
}

struct StartOutcome {
    config: ZeroConfig,
    norm: f64,
    converged: bool,
}

fn norm_of(degree: usize, p: f64, u: &[f64], spec: &QuadratureSpec) -> f64 {
    ZeroConfig::new(degree, decode(u))
        .and_then(|c| lp_norm_p(&c, p, spec))
        .map(|r| r.value)
        .unwrap_or(f64::NAN)
}

fn run_start(
    degree: usize,
    p: f64,
    start: &[f64],
    opts: &OptimizerOptions,
    spec: &QuadratureSpec,
) -> Result<StartOutcome> {
    let coarse = relaxed(spec);
    let simplex_opts = SimplexOptions {
        max_iters: opts.max_iters,
        tol: opts.tol,
        step: 0.05,
    };
    let first = simplex::minimize(|u| norm_of(degree, p, u, &coarse), &encode(start), &simplex_opts);
    let polish_opts = SimplexOptions {
        step: 1e-3,
        ..simplex_opts
    };
    let second = simplex::minimize(|u| norm_of(degree, p, u, spec), &first.x, &polish_opts);
    let config = ZeroConfig::new(degree, decode(&second.x))?;
    let norm = lp_norm_p(&config, p, spec)?.value;
    Ok(StartOutcome {
        config,
        norm,
        converged: first.converged && second.converged,
    })
}

fn jittered_start(gamma: &[f64], seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prev = 0.0;
    let mut acc = 0.0;
    gamma
        .iter()
        .map(|&g| {
            let inc = g - prev;
            prev = g;
            acc += inc * (1.0 + rng.gen_range(-JITTER..=JITTER));
            acc.min(PI)
        })
        .collect()
}

/// Minimises `|P|_p^p` over zero configurations of degree `d`.
///
/// Simplex descent on log-increments of the zero arguments, started from
/// the gamma configuration and from `starts - 1` jittered copies of it.
/// Each start runs once at relaxed tolerances and is then polished with
/// `spec`. Start `i` draws its jitter from `seed + i`, so results do not
/// depend on thread scheduling.
pub fn optimize_zeros(
    degree: usize,
    p: f64,
    opts: &OptimizerOptions,
    spec: &QuadratureSpec,
) -> Result<ExtremalResult> {
    if degree == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("optimisation needs finite p > 1, got {p}")));
    }
    if opts.starts == 0 || !(opts.tol > 0.0) {
        return Err(Error::Domain("optimizer needs at least one start and tol > 0".into()));
    }
    spec.validate()?;

    if degree == 1 {
        let config = ZeroConfig::degree_one();
        let norm = lp_norm_p(&config, p, spec)?.value;
        return Ok(ExtremalResult {
            config,
            p,
            lower_bound: 1.0 / norm,
            norm_p: norm,
            converged: true,
            starts_agreeing: opts.starts,
        });
    }

    let gamma = gamma_config(degree, p)?.args().to_vec();
    let starts: Vec<Vec<f64>> = (0..opts.starts)
        .map(|i| {
            if i == 0 {
                gamma.clone()
            } else {
                jittered_start(&gamma, opts.seed.wrapping_add(i as u64))
            }
        })
        .collect();
    let outcomes = par::map(&starts, |s| run_start(degree, p, s, opts, spec));

    let mut best: Option<StartOutcome> = None;
    let mut norms = Vec::with_capacity(outcomes.len());
    let mut any_converged = false;
    let mut first_error = None;
    for o in outcomes {
        match o {
            Ok(o) => {
                any_converged |= o.converged;
                norms.push(o.norm);
                if best.as_ref().is_none_or(|b| o.norm < b.norm) {
                    best = Some(o);
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    let best = match (best, first_error) {
        (Some(b), _) => b,
        (None, Some(e)) => return Err(e),
        (None, None) => unreachable!("at least one start is run"),
    };
    let lower = 1.0 / best.norm;
    let starts_agreeing = norms
        .iter()
        .filter(|&&n| (1.0 / n - lower).abs() <= 1e-8 * lower.max(1.0))
        .count();
    Ok(ExtremalResult {
        config: best.config,
        p,
        lower_bound: lower,
        norm_p: best.norm,
        converged: any_converged,
        starts_agreeing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    /// `(1/π) Σ ∫ |integrand|`. The pieces cancel down to `lhs`, so
    /// `magnitude * f64::EPSILON` is the rounding floor of `rhs`.
    pub magnitude: f64,
}

/// Checks the contour identity
///
/// ```text
/// P(1)^q = Σ_n (1/π) ∫_{t_n}^{t_{n+1}} |P|^q sin((dq/2 + 1/2)θ - πqn) / sin(θ/2) dθ
/// ```
///
/// with `t_0 = 0` and `t_{k+1} = π`. The left side is 1 for a normalised
/// polynomial.
///
/// A piece that cannot meet `spec` is retried with its absolute tolerance
/// raised to the rounding floor set by the integral of its absolute value.
pub fn verify_identity(config: &ZeroConfig, q: f64, spec: &QuadratureSpec) -> Result<IdentityCheck> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("identity needs finite q > 0, got {q}")));
    }
    let mut t = Vec::with_capacity(config.args().len() + 2);
    t.push(0.0);
    t.extend_from_slice(config.args());
    t.push(PI);
    let freq = 0.5 * config.degree() as f64 * q + 0.5;
    let coarse = relaxed(spec);
    let mut rhs = 0.0;
    let mut magnitude = 0.0;
    for (n, w) in t.windows(2).enumerate() {
        if w[1] <= w[0] {
            continue;
        }
        let shift = PI * q * n as f64;
        let f = |theta: f64| {
            config.abs_value(theta).powf(q) * (freq * theta - shift).sin() / (0.5 * theta).sin()
        };
        let size = integrate(|x| f(x).abs(), w[0], w[1], &coarse)?.value;
        rhs += match integrate(f, w[0], w[1], spec) {
            Ok(r) => r.value,
            Err(Error::QuadratureNonConvergence { .. }) => {
                let floor = QuadratureSpec {
                    abs_tol: spec.abs_tol.max(4.0 * f64::EPSILON * size),
                    ..spec.clone()
                };
                integrate(f, w[0], w[1], &floor)?.value
            }
            Err(e) => return Err(e),
        };
        magnitude += size;
    }
    rhs /= PI;
    magnitude /= PI;
    let lhs = 1.0;
    Ok(IdentityCheck {
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / lhs,
        magnitude,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintKind {
    /// Proven for the true extremal polynomial; a violation means the
    /// optimiser did not find it.
    Hard,
    /// Expected but unproven; reported for information only.
    Conjectural,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub kind: ConstraintKind,
    pub bound: f64,
    pub value: f64,
    /// `value - bound`.
    pub margin: f64,
    pub satisfied: bool,
}

const CONSTRAINT_SLACK: f64 = 1e-6;

fn constraint(name: String, kind: ConstraintKind, value: f64, bound: f64) -> ConstraintCheck {
    let margin = value - bound;
    ConstraintCheck {
        name,
        kind,
        bound,
        value,
        margin,
        satisfied: margin >= -CONSTRAINT_SLACK,
    }
}

/// Known lower bounds on the zero arguments of the extremal polynomial:
/// `t_1 >= π/d`, `t_2 >= π/2` for `d = 4`, and the conjectured
/// `t_j >= (2pj - p - 1)π/(dp + 2)`.
pub fn check_zero_constraints(result: &ExtremalResult) -> Vec<ConstraintCheck> {
    let d = result.config.degree();
    let args = result.config.args();
    let mut out = Vec::new();
    if let Some(&t1) = args.first() {
        out.push(constraint("t1 >= pi/d".into(), ConstraintKind::Hard, t1, PI / d as f64));
    }
    if d == 4 {
        out.push(constraint("t2 >= pi/2".into(), ConstraintKind::Hard, args[1], PI / 2.0));
    }
    for (j, &t) in args.iter().enumerate() {
        if let Ok(m) = zero_constraint_midpoint(d, result.p, j + 1) {
            out.push(constraint(
                format!("t{} >= level midpoint", j + 1),
                ConstraintKind::Conjectural,
                t,
                m,
            ));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CavalliusCheck {
    /// `min |P(e^{iθ})| / cos(dθ/2)` over sampled `|θ| < π/d`.
    Applicable { worst_ratio: f64 },
    /// The sampled maximum of `|P|` is not at θ = 0.
    Inapplicable { max_value: f64, max_at: f64 },
}

/// Samples the lower estimate `|P(e^{iθ})| >= cos(dθ/2)` for `|θ| <= π/d`,
/// valid when `|P|` peaks at θ = 0 (where it equals 1).
pub fn check_cavallius(config: &ZeroConfig, samples: usize) -> CavalliusCheck {
    let samples = samples.max(2);
    let (max_at, max_value) = config.sampled_max(4 * samples);
    if max_value > 1.0 + 1e-12 {
        return CavalliusCheck::Inapplicable { max_value, max_at };
    }
    let d = config.degree() as f64;
    let worst_ratio = (0..samples)
        .map(|i| {
            let theta = PI / d * i as f64 / samples as f64;
            config.abs_value(theta) / (0.5 * d * theta).cos()
        })
        .fold(f64::INFINITY, f64::min);
    CavalliusCheck::Applicable { worst_ratio }
}
