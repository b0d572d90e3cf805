//! Every bound on `C(d, p)` in one report.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{optimize_zeros, OptimizerOptions};
use crate::kernel::upper_bound_kernel;
use crate::norms::lower_bound_gamma;
use crate::quadrature::QuadratureSpec;
use crate::specfun::beta;

/// `dp/2 + 1`, conjectured to bound `C(d, p)` for `p >= 2`.
pub fn conjecture_value(degree: usize, p: f64) -> f64 {
    degree as f64 * p / 2.0 + 1.0
}

/// `d⌈p/2⌉ + 1`, from Hölder's inequality and the `p = 2` identity.
pub fn holder_bound(degree: usize, p: f64) -> f64 {
    degree as f64 * (p / 2.0).ceil() + 1.0
}

/// `min_n E(nd, p/n)` over `n` with `p/n` in `[2, 4]` and `2 <= nd <= 4`.
/// `None` when no `n` qualifies.
pub fn power_trick_bound(degree: usize, p: f64, spec: &QuadratureSpec) -> Result<Option<f64>> {
    if degree == 0 || !(p >= 2.0) {
        return Err(Error::Domain(format!("power trick needs d >= 1, p >= 2, got ({degree}, {p})")));
    }
    let mut best: Option<f64> = None;
    for n in 1..=4 / degree {
        let nd = n * degree;
        let q = p / n as f64;
        if nd < 2 || !(2.0 - 1e-12..=4.0 + 1e-12).contains(&q) {
            continue;
        }
        let v = upper_bound_kernel(nd, q.clamp(2.0, 4.0), spec)?;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    Ok(best)
}

/// `dπ / B((p+1)/2, 1/2)`.
pub fn beta_bound(degree: usize, p: f64) -> Result<f64> {
    if degree == 0 || !(p >= 1.0) {
        return Err(Error::Domain(format!("beta bound needs d >= 1, p >= 1, got ({degree}, {p})")));
    }
    Ok(degree as f64 * PI / beta((p + 1.0) / 2.0, 0.5)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Conjecture,
    Holder,
    Power,
    Kernel,
    Beta,
    LowerGamma,
    LowerOpt,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Conjecture,
        Method::Holder,
        Method::Power,
        Method::Kernel,
        Method::Beta,
        Method::LowerGamma,
        Method::LowerOpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Conjecture => "conjecture",
            Method::Holder => "holder",
            Method::Power => "power",
            Method::Kernel => "kernel",
            Method::Beta => "beta",
            Method::LowerGamma => "lower_gamma",
            Method::LowerOpt => "lower_opt",
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(self, Method::Holder | Method::Power | Method::Kernel | Method::Beta)
    }

    pub fn is_lower(self) -> bool {
        matches!(self, Method::LowerGamma | Method::LowerOpt)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub methods: Vec<Method>,
    pub optimizer: OptimizerOptions,
}

impl Default for ReportOptions {
    /// Everything except the optimised lower bound.
    fn default() -> Self {
        Self {
            methods: Method::ALL.into_iter().filter(|&m| m != Method::LowerOpt).collect(),
            optimizer: OptimizerOptions::default(),
        }
    }
}

impl ReportOptions {
    pub fn all() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodFailure {
    pub method: Method,
    pub message: String,
}

/// Two-sided bracket for `C(d, p)`. A method that was not requested, does
/// not apply, or failed leaves its field empty; failures are listed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d: usize,
    pub p: f64,
    pub conjecture: f64,
    pub holder: Option<f64>,
    pub power_trick: Option<f64>,
    pub kernel: Option<f64>,
    pub beta: Option<f64>,
    pub lower_gamma: Option<f64>,
    pub lower_opt: Option<f64>,
    pub best_upper: Option<f64>,
    pub best_upper_method: Option<String>,
    pub best_lower: Option<f64>,
    pub best_lower_method: Option<String>,
    pub upper_ratio: Option<f64>,
    pub lower_ratio: Option<f64>,
    pub failures: Vec<MethodFailure>,
}

impl BoundReport {
    pub fn value(&self, method: Method) -> Option<f64> {
        match method {
            Method::Conjecture => Some(self.conjecture),
            Method::Holder => self.holder,
            Method::Power => self.power_trick,
            Method::Kernel => self.kernel,
            Method::Beta => self.beta,
            Method::LowerGamma => self.lower_gamma,
            Method::LowerOpt => self.lower_opt,
        }
    }

    fn set(&mut self, method: Method, v: Option<f64>) {
        let slot = match method {
            Method::Conjecture => return,
            Method::Holder => &mut self.holder,
            Method::Power => &mut self.power_trick,
            Method::Kernel => &mut self.kernel,
            Method::Beta => &mut self.beta,
            Method::LowerGamma => &mut self.lower_gamma,
            Method::LowerOpt => &mut self.lower_opt,
        };
        *slot = v;
    }

    /// `value / conjecture` for one method.
    pub fn ratio(&self, method: Method) -> Option<f64> {
        self.value(method).map(|v| v / self.conjecture)
    }

    /// Flat `(key, value)` pairs in a fixed order.
    pub fn record(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("d", Some(self.d as f64)),
            ("p", Some(self.p)),
            ("conjecture", Some(self.conjecture)),
            ("holder", self.holder),
            ("power", self.power_trick),
            ("kernel", self.kernel),
            ("beta", self.beta),
            ("lower_gamma", self.lower_gamma),
            ("lower_opt", self.lower_opt),
            ("best_upper", self.best_upper),
            ("best_lower", self.best_lower),
            ("upper_ratio", self.upper_ratio),
            ("lower_ratio", self.lower_ratio),
        ]
    }

    /// Whether `best_lower <= best_upper + tol` (vacuously true if either is
    /// missing).
    pub fn is_consistent(&self, tol: f64) -> bool {
        match (self.best_lower, self.best_upper) {
            (Some(lo), Some(hi)) => lo <= hi + tol,
            _ => true,
        }
    }
}

fn compute(method: Method, d: usize, p: f64, spec: &QuadratureSpec, opts: &ReportOptions) -> Result<Option<f64>> {
    match method {
        Method::Conjecture => Ok(Some(conjecture_value(d, p))),
        Method::Holder => Ok(Some(holder_bound(d, p))),
        Method::Power => power_trick_bound(d, p, spec),
        Method::Kernel if (2..=4).contains(&d) && (2.0..=4.0).contains(&p) => {
            upper_bound_kernel(d, p, spec).map(Some)
        }
        Method::Kernel => Ok(None),
        Method::Beta => beta_bound(d, p).map(Some),
        Method::LowerGamma => lower_bound_gamma(d, p, spec).map(Some),
        Method::LowerOpt => optimize_zeros(d, p, &opts.optimizer, spec).map(|r| Some(r.lower_bound)),
    }
}

/// Builds the report for `(d, p)` with `d >= 1`, `p >= 2`.
///
/// For `d = 1` the constant is known in closed form, `π / B((p+1)/2, 1/2)`,
/// and is used as both best bounds.
pub fn report(d: usize, p: f64, spec: &QuadratureSpec, opts: &ReportOptions) -> Result<BoundReport> {
    if d == 0 || !(p >= 2.0) || !p.is_finite() {
        return Err(Error::Domain(format!("reports need d >= 1 and finite p >= 2, got ({d}, {p})")));
    }
    spec.validate()?;
    let mut r = BoundReport {
        d,
        p,
        conjecture: conjecture_value(d, p),
        holder: None,
        power_trick: None,
        kernel: None,
        beta: None,
        lower_gamma: None,
        lower_opt: None,
        best_upper: None,
        best_upper_method: None,
        best_lower: None,
        best_lower_method: None,
        upper_ratio: None,
        lower_ratio: None,
        failures: Vec::new(),
    };
    let mut methods = opts.methods.clone();
    methods.sort();
    methods.dedup();
    for &m in &methods {
        match compute(m, d, p, spec, opts) {
            Ok(v) => r.set(m, v),
            Err(e) => r.failures.push(MethodFailure {
                method: m,
                message: e.to_string(),
            }),
        }
    }

    let pick = |pred: fn(Method) -> bool, better: fn(f64, f64) -> bool| {
        methods
            .iter()
            .filter(|&&m| pred(m))
            .filter_map(|&m| r.value(m).map(|v| (v, m)))
            .fold(None, |acc: Option<(f64, Method)>, x| match acc {
                Some(a) if !better(x.0, a.0) => Some(a),
                _ => Some(x),
            })
    };
    let upper = pick(Method::is_upper, |a, b| a < b);
    let lower = pick(Method::is_lower, |a, b| a > b);
    r.best_upper = upper.map(|u| u.0);
    r.best_upper_method = upper.map(|u| u.1.name().to_string());
    r.best_lower = lower.map(|l| l.0);
    r.best_lower_method = lower.map(|l| l.1.name().to_string());

    if d == 1 {
        let exact = beta_bound(1, p)?;
        r.best_upper = Some(exact);
        r.best_lower = Some(exact);
        r.best_upper_method = Some("closed_form".into());
        r.best_lower_method = Some("closed_form".into());
    }
    r.upper_ratio = r.best_upper.map(|v| v / r.conjecture);
    r.lower_ratio = r.best_lower.map(|v| v / r.conjecture);
    Ok(r)
}
