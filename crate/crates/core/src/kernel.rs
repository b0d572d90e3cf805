//! The kernel functional behind the upper bounds for `d <= 4`.
//!
//! For a jump sequence `0 = τ_0 <= τ_1 <= ... <= τ_k <= τ_{k+1} = π`
//! (`k = d/2`) the kernel on `[τ_n, τ_{n+1})` is
//!
//! ```text
//! K(τ; θ) = sin(ωθ - pπn/2) / sin(θ/2),    ω = (dp + 2)/4
//! ```
//!
//! and `E(τ) = (1/π) ∫_0^π max(K, 0)^2 dθ` bounds `C(d, p)` from above
//! whenever `τ` ranges over a set containing the zero arguments of the
//! extremal polynomial.
//!
//! The maximal open subintervals of `[0, π]` where the level-`n` sine is
//! positive are the *intervals at level n*. They all have length
//! `l = 4π/(dp + 2)` and left endpoints `l(pn + 4j)/2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::polycircle::gamma_config;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::simplex::{self, SimplexOptions};

/// Relative slack used when matching interval endpoints.
const ENDPOINT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelGrid {
    degree: usize,
    p: f64,
    length: f64,
}

impl LevelGrid {
    pub fn new(degree: usize, p: f64) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Domain(format!("level grid needs d >= 2, got {degree}")));
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!("level grid needs finite p > 0, got {p}")));
        }
        Ok(Self {
            degree,
            p,
            length: 4.0 * PI / (degree as f64 * p + 2.0),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Common length `l = 4π/(dp + 2)` of every interval at level `n`.
    pub fn interval_length(&self) -> f64 {
        self.length
    }

    /// Number of free jumps, `d / 2`.
    pub fn jumps(&self) -> usize {
        self.degree / 2
    }

    /// Angular frequency `(dp + 2)/4 = π / l`.
    pub fn frequency(&self) -> f64 {
        (self.degree as f64 * self.p + 2.0) / 4.0
    }

    /// `sin(ωθ - pπn/2)`.
    pub fn level_sine(&self, level: usize, theta: f64) -> f64 {
        (self.frequency() * theta - 0.5 * self.p * PI * level as f64).sin()
    }

    /// Level-`n` intervals `(L, L + l)` with `L = l(pn + 4j)/2`, unclipped,
    /// keeping those that meet the open interval `(0, π)`.
    pub fn raw_intervals(&self, level: usize) -> Vec<(f64, f64)> {
        let l = self.length;
        let shift = 0.5 * l * self.p * level as f64;
        let mut j = ((-l - shift) / (2.0 * l)).floor() as i64;
        let mut out = Vec::new();
        loop {
            let left = shift + 2.0 * l * j as f64;
            if left >= PI {
                break;
            }
            if left + l > 0.0 {
                out.push((left, left + l));
            }
            j += 1;
        }
        out
    }

    /// Clipped level-`n` intervals within `[0, π]`, sorted.
    pub fn intervals_at_level(&self, level: usize) -> Vec<(f64, f64)> {
        self.raw_intervals(level)
            .into_iter()
            .map(|(a, b)| (a.max(0.0), b.min(PI)))
            .filter(|(a, b)| b - a > ENDPOINT_EPS * self.length)
            .collect()
    }

    /// Midpoint `(c + b)/2` between a level-`n` interval `(a, b)` and the
    /// unique level-`n+1` interval `(c, e)` overlapping it.
    ///
    /// `interval` may be given clipped to `[0, π]`; the unclipped endpoints
    /// are used for the midpoint. Tangent intervals (as at `p = 2`) do not
    /// count as overlapping.
    pub fn midpoint_between_levels(&self, interval: (f64, f64), level: usize) -> Result<f64> {
        let l = self.length;
        let eps = ENDPOINT_EPS * l;
        let (a, b) = self
            .raw_intervals(level)
            .into_iter()
            .find(|&(a, b)| {
                (a.max(0.0) - interval.0).abs() <= eps && (b.min(PI) - interval.1).abs() <= eps
            })
            .ok_or_else(|| {
                Error::Domain(format!(
                    "({}, {}) is not an interval at level {level}",
                    interval.0, interval.1
                ))
            })?;
        // Level n+1 left endpoints sit at a + l(p/2 + 2m).
        let half_p = 0.5 * self.p;
        let m_lo = ((-1.0 - half_p) / 2.0).floor() as i64 - 1;
        let m_hi = ((1.0 - half_p) / 2.0).ceil() as i64 + 1;
        let overlapping: Vec<f64> = (m_lo..=m_hi)
            .map(|m| a + l * (half_p + 2.0 * m as f64))
            .filter(|&c| (c - a).abs() < l - eps)
            .collect();
        match overlapping.as_slice() {
            [c] => Ok(0.5 * (c + b)),
            _ => Err(Error::NoIntersectingInterval {
                level,
                left: interval.0,
                right: interval.1,
            }),
        }
    }

    /// Points in `[0, π]` where the positive parts of two level sines
    /// cross: `θ = l(1 + p(a + b)/2 + 2m)/2` for every pair `a < b <= k`.
    pub fn crossing_points(&self, lo_level: usize, hi_level: usize) -> Vec<f64> {
        let l = self.length;
        let base = 1.0 + 0.5 * self.p * (lo_level + hi_level) as f64;
        let m_lo = ((-base) / 2.0).floor() as i64 - 1;
        let m_hi = ((2.0 * PI / l - base) / 2.0).ceil() as i64 + 1;
        (m_lo..=m_hi)
            .map(|m| 0.5 * l * (base + 2.0 * m as f64))
            .filter(|&t| (0.0..=PI).contains(&t))
            .collect()
    }
}

/// `(2pj - p - 1)π/(dp + 2)`: the midpoint between an interval at level
/// `j - 1` and one at level `j` that the `j`-th zero is expected to exceed.
pub fn zero_constraint_midpoint(degree: usize, p: f64, j: usize) -> Result<f64> {
    if j == 0 || j > degree / 2 {
        return Err(Error::Domain(format!("j = {j} outside 1..={}", degree / 2)));
    }
    let j = j as f64;
    Ok((2.0 * p * j - p - 1.0) * PI / (degree as f64 * p + 2.0))
}

/// Non-decreasing `(τ_0, ..., τ_{k+1})` with `τ_0 = 0` and `τ_{k+1} = π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpSequence {
    values: Vec<f64>,
}

impl JumpSequence {
    /// Builds `(0, interior..., π)` and checks ordering.
    pub fn new(interior: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(interior.len() + 2);
        values.push(0.0);
        values.extend_from_slice(interior);
        values.push(PI);
        if values.iter().any(|t| !t.is_finite() || *t < 0.0 || *t > PI) {
            return Err(Error::Domain("jump points must lie in [0, π]".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Domain("jump sequence must be non-decreasing".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `τ_1..τ_k`.
    pub fn interior(&self) -> &[f64] {
        &self.values[1..self.values.len() - 1]
    }

    /// Level active at `θ` under the half-open convention `[τ_n, τ_{n+1})`,
    /// with the last piece closed at π.
    pub fn level_at(&self, theta: f64) -> usize {
        self.interior().iter().filter(|&&t| t <= theta).count()
    }

    fn check(&self, grid: &LevelGrid) -> Result<()> {
        if self.interior().len() != grid.jumps() {
            return Err(Error::Domain(format!(
                "jump sequence has {} interior points, degree {} needs {}",
                self.interior().len(),
                grid.degree(),
                grid.jumps()
            )));
        }
        Ok(())
    }
}

pub fn kernel_k(grid: &LevelGrid, tau: &JumpSequence, theta: f64) -> f64 {
    let level = tau.level_at(theta);
    if theta == 0.0 {
        let s = grid.level_sine(level, 0.0);
        return if level == 0 {
            2.0 * grid.frequency()
        } else if s == 0.0 {
            0.0
        } else {
            s.signum() * f64::INFINITY
        };
    }
    grid.level_sine(level, theta) / (0.5 * theta).sin()
}

pub fn kernel_m(grid: &LevelGrid, tau: &JumpSequence, theta: f64) -> f64 {
    kernel_k(grid, tau, theta).max(0.0)
}

fn positive_part_squared(grid: &LevelGrid, level: usize, theta: f64) -> f64 {
    let s = grid.level_sine(level, theta);
    if s <= 0.0 {
        0.0
    } else {
        let r = s / (0.5 * theta).sin();
        r * r
    }
}

/// `E(τ) = (1/π) ∫_0^π M(τ; θ)^2 dθ`.
///
/// Integrated piece by piece over `[τ_n, τ_{n+1}]` with breakpoints at the
/// sign changes of the level-`n` sine.
pub fn functional_e(grid: &LevelGrid, tau: &JumpSequence, spec: &QuadratureSpec) -> Result<f64> {
    tau.check(grid)?;
    let mut total = 0.0;
    for (level, w) in tau.values().windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let cuts: Vec<f64> = grid
            .raw_intervals(level)
            .into_iter()
            .flat_map(|(x, y)| [x, y])
            .collect();
        let piece_spec = spec.clone().with_breakpoints(cuts);
        total += integrate(|t| positive_part_squared(grid, level, t), a, b, &piece_spec)?.value;
    }
    Ok(total / PI)
}

/// The gamma sequence padded with 0 and π, one of the maximisers of `E`
/// over the admissible set for `2 <= d <= 4`, `2 <= p <= 4`.
pub fn canonical_tau(degree: usize, p: f64) -> Result<JumpSequence> {
    if !(2..=4).contains(&degree) {
        return Err(Error::Domain(format!("canonical sequence needs 2 <= d <= 4, got {degree}")));
    }
    if !(2.0..=4.0).contains(&p) {
        return Err(Error::Domain(format!("canonical sequence needs 2 <= p <= 4, got {p}")));
    }
    JumpSequence::new(gamma_config(degree, p)?.args())
}

/// `E` at the canonical sequence: an upper bound for `C(d, p)`, `d <= 4`,
/// `p` in `[2, 4]`.
pub fn upper_bound_kernel(degree: usize, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    let grid = LevelGrid::new(degree, p)?;
    functional_e(&grid, &canonical_tau(degree, p)?, spec)
}

/// `A = (1/π) ∫_0^{2π(d+1)/(dp+2)} (sin(ωθ)/sin(θ/2))^2 dθ`, which dominates
/// the explicit kernel bounds for `d <= 4`.
pub fn majorant_a(degree: usize, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if degree < 2 || !(p >= 2.0) {
        return Err(Error::Domain(format!("majorant needs d >= 2, p >= 2, got ({degree}, {p})")));
    }
    let grid = LevelGrid::new(degree, p)?;
    let l = grid.interval_length();
    let upper = 0.5 * l * (degree + 1) as f64;
    let w = grid.frequency();
    let f = |t: f64| {
        let r = (w * t).sin() / (0.5 * t).sin();
        r * r
    };
    let cuts = (1..=degree + 1).map(|m| m as f64 * l).collect();
    let r = integrate(f, 0.0, upper, &spec.clone().with_breakpoints(cuts))?;
    Ok(r.value / PI)
}

/// Box constraints on `τ_1..τ_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ConstraintSet {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InfeasibleConstraints("lower and upper lengths differ".into()));
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(0.0..=PI).contains(&lo) || !(0.0..=PI).contains(&hi) {
                return Err(Error::InfeasibleConstraints(format!("bounds on τ_{} leave [0, π]", i + 1)));
            }
            if lo > hi {
                return Err(Error::InfeasibleConstraints(format!("τ_{}: {lo} > {hi}", i + 1)));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Lower bounds only; upper bounds default to π.
    pub fn lower_only(lower: Vec<f64>) -> Result<Self> {
        let upper = vec![PI; lower.len()];
        Self::new(lower, upper)
    }

    /// Tightest equivalent box for a non-decreasing sequence: lower bounds
    /// made non-decreasing, upper bounds made non-decreasing from the right.
    fn normalized(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut lo = self.lower.clone();
        for i in 1..lo.len() {
            lo[i] = lo[i].max(lo[i - 1]);
        }
        let mut hi = self.upper.clone();
        for i in (0..hi.len().saturating_sub(1)).rev() {
            hi[i] = hi[i].min(hi[i + 1]);
        }
        if let Some(i) = lo.iter().zip(&hi).position(|(a, b)| a > b) {
            return Err(Error::InfeasibleConstraints(format!(
                "no non-decreasing sequence satisfies the bounds at τ_{}",
                i + 1
            )));
        }
        Ok((lo, hi))
    }
}

/// The admissible set `τ_1 >= π/d`, plus `τ_2 >= π/2` for `d = 4`.
pub fn lambda_constraints(degree: usize) -> Result<ConstraintSet> {
    if degree < 2 {
        return Err(Error::Domain(format!("constraints need d >= 2, got {degree}")));
    }
    let mut lower = vec![0.0; degree / 2];
    lower[0] = PI / degree as f64;
    if degree == 4 {
        lower[1] = PI / 2.0;
    }
    ConstraintSet::lower_only(lower)
}

/// [`lambda_constraints`] with the even-degree condition that the largest
/// zero argument is at least π/2 (for `d = 4` this is the same set).
pub fn lambda_constraints_even(degree: usize) -> Result<ConstraintSet> {
    let mut c = lambda_constraints(degree)?;
    if degree.is_multiple_of(2) {
        let last = c.lower.len() - 1;
        c.lower[last] = c.lower[last].max(PI / 2.0);
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupSearchOptions {
    /// Uniformly spaced extra candidates added to the combinatorial ones.
    pub grid_points: usize,
    /// Number of best grid points refined by simplex ascent.
    pub refine_starts: usize,
    pub simplex: SimplexOptions,
}

impl Default for SupSearchOptions {
    fn default() -> Self {
        Self {
            grid_points: 24,
            refine_starts: 4,
            simplex: SimplexOptions {
                max_iters: 1000,
                tol: 1e-10,
                step: 0.05,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate {
    pub tau: JumpSequence,
    /// `E(tau)`: a lower estimate of the supremum over the constraint set.
    pub value: f64,
    pub grid_evaluations: usize,
}

fn dedup_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    v
}

fn non_decreasing_tuples(sets: &[Vec<f64>]) -> Vec<Vec<f64>> {
    fn rec(sets: &[Vec<f64>], prefix: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        let i = prefix.len();
        if i == sets.len() {
            out.push(prefix.clone());
            return;
        }
        let floor = prefix.last().copied().unwrap_or(f64::NEG_INFINITY);
        for &x in sets[i].iter().filter(|&&x| x >= floor) {
            prefix.push(x);
            rec(sets, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(sets, &mut Vec::with_capacity(sets.len()), &mut out);
    out
}

/// Searches for `sup E(τ)` over sequences satisfying `constraints`.
///
/// Every coordinate is seeded with the points where the optimum can sit:
/// interval endpoints, crossings of adjacent level sines, constraint bounds
/// and a uniform grid. All non-decreasing combinations are evaluated and
/// the best few are polished by simplex ascent. The returned value is
/// attained by the returned sequence, so it bounds the supremum from below.
pub fn constrained_sup_e(
    grid: &LevelGrid,
    constraints: &ConstraintSet,
    spec: &QuadratureSpec,
    opts: &SupSearchOptions,
) -> Result<SupEstimate> {
    let k = grid.jumps();
    if constraints.lower.len() != k {
        return Err(Error::InfeasibleConstraints(format!(
            "degree {} needs bounds on {k} jumps, got {}",
            grid.degree(),
            constraints.lower.len()
        )));
    }
    let (lo, hi) = constraints.normalized()?;
    if lo[0] <= 0.0 {
        return Err(Error::InfeasibleConstraints(
            "τ_1 must be bounded away from 0, E is unbounded otherwise".into(),
        ));
    }

    let mut sets = Vec::with_capacity(k);
    for i in 0..k {
        // τ_{i+1} switches from some level a <= i to some level b >= i + 1.
        let mut c = vec![lo[i], hi[i]];
        for level in i.saturating_sub(1)..=(i + 2).min(k) {
            for (x, y) in grid.raw_intervals(level) {
                c.extend([x, y]);
            }
        }
        for a in 0..=i {
            for b in i + 1..=k {
                c.extend(grid.crossing_points(a, b));
            }
        }
        if opts.grid_points > 1 {
            let n = opts.grid_points - 1;
            c.extend((0..=n).map(|s| lo[i] + (hi[i] - lo[i]) * s as f64 / n as f64));
        }
        let c: Vec<f64> = c.into_iter().filter(|&t| t >= lo[i] && t <= hi[i]).collect();
        sets.push(dedup_sorted(c));
    }

    let tuples = non_decreasing_tuples(&sets);
    let scored: Vec<Result<f64>> = par::map(&tuples, |t| {
        functional_e(grid, &JumpSequence::new(t)?, spec)
    });
    let mut ranked = Vec::with_capacity(tuples.len());
    for (i, s) in scored.into_iter().enumerate() {
        ranked.push((s?, i));
    }
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let project = |x: &[f64]| -> Vec<f64> {
        let mut out = Vec::with_capacity(k);
        let mut floor: f64 = 0.0;
        for i in 0..k {
            let v = x[i].clamp(lo[i], hi[i]).max(floor);
            out.push(v);
            floor = v;
        }
        out
    };
    let objective = |x: &[f64]| -> f64 {
        JumpSequence::new(&project(x))
            .and_then(|t| functional_e(grid, &t, spec))
            .map(|v| -v)
            .unwrap_or(f64::NAN)
    };

    let starts: Vec<(f64, Vec<f64>)> = ranked
        .iter()
        .take(opts.refine_starts.max(1))
        .map(|&(v, i)| (v, tuples[i].clone()))
        .collect();
    let refined = par::map(&starts, |(v, x)| {
        let r = simplex::minimize(objective, x, &opts.simplex);
        if -r.value > *v {
            (-r.value, project(&r.x))
        } else {
            (*v, x.clone())
        }
    });
    let (value, best) = refined
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .ok_or_else(|| Error::InfeasibleConstraints("no candidate sequences".into()))?;

    Ok(SupEstimate {
        tau: JumpSequence::new(&best)?,
        value,
        grid_evaluations: tuples.len(),
    })
}
