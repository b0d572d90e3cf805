//! Polynomials with all zeros on the unit circle, stored by zero argument.
//!
//! A degree `d` polynomial with conjugate-symmetric zeros `e^{±i t_j}`,
//! `j = 1..=d/2`, plus a zero at `-1` when `d` is odd, normalised so that
//! `P(1) = 1`. On the circle
//!
//! ```text
//! |P(e^{iθ})| = |cos(θ/2)|^{d mod 2} · Π_j |cos θ - cos t_j| / (1 - cos t_j)
//! ```

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroConfig {
    degree: usize,
    args: Vec<f64>,
}

impl ZeroConfig {
    /// Builds a configuration, checking `args.len() == d / 2` and
    /// `0 < t_1 <= ... <= t_k <= π`. Repeated arguments (double zeros) are fine.
    pub fn new(degree: usize, args: Vec<f64>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidConfig("degree must be at least 1".into()));
        }
        if args.len() != degree / 2 {
            return Err(Error::InvalidConfig(format!(
                "degree {degree} needs {} zero arguments, got {}",
                degree / 2,
                args.len()
            )));
        }
        for (j, &t) in args.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidConfig(format!("t_{} is not finite", j + 1)));
            }
            if t <= 0.0 {
                return Err(Error::Domain(format!(
                    "t_{} = {t} puts a zero at z = 1, P(1) = 1 cannot hold",
                    j + 1
                )));
            }
            if t > PI {
                return Err(Error::InvalidConfig(format!("t_{} = {t} exceeds π", j + 1)));
            }
        }
        if args.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidConfig("zero arguments must be non-decreasing".into()));
        }
        Ok(Self { degree, args })
    }

    /// The linear polynomial `(1 + z) / 2`.
    pub fn degree_one() -> Self {
        Self {
            degree: 1,
            args: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn args(&self) -> &[f64] {
        &self.args
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    /// `|P(e^{iθ})|` for the normalised polynomial.
    ///
    /// Each factor uses `cos θ - cos t = -2 sin((θ+t)/2) sin((θ-t)/2)` and
    /// `1 - cos t = 2 sin²(t/2)`, which stay accurate near θ = t and t → 0.
    pub fn abs_value(&self, theta: f64) -> f64 {
        let mut v = if self.is_odd() {
            (0.5 * theta).cos().abs()
        } else {
            1.0
        };
        for &t in &self.args {
            let s = (0.5 * t).sin();
            v *= ((0.5 * (theta + t)).sin() * (0.5 * (theta - t)).sin()).abs() / (s * s);
        }
        v
    }

    /// Zero arguments in `(0, π]` including the implicit `π` for odd degree,
    /// deduplicated. These are the points where `|P|^p` loses smoothness.
    pub fn zero_arguments(&self) -> Vec<f64> {
        let mut z = self.args.clone();
        if self.is_odd() {
            z.push(PI);
        }
        z.dedup();
        z
    }

    /// Uniformly random sorted arguments in `[min_angle, π]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, degree: usize, min_angle: f64) -> Result<Self> {
        let mut args: Vec<f64> = (0..degree / 2)
            .map(|_| rng.gen_range(min_angle..=PI))
            .collect();
        args.sort_by(f64::total_cmp);
        Self::new(degree, args)
    }
    /// Largest of `|P|` on `samples + 1` equispaced points of `[0, π]`, as
    /// `(θ, value)`.
    pub fn sampled_max(&self, samples: usize) -> (f64, f64) {
        let samples = samples.max(1);
        (0..=samples)
            .map(|i| {
                let theta = PI * i as f64 / samples as f64;
                (theta, self.abs_value(theta))
            })
            .fold((0.0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
    }

    /// Like [`ZeroConfig::random`], rejecting draws whose sampled maximum
    /// exceeds `P(1) = 1`.
    pub fn random_peaked<R: Rng + ?Sized>(rng: &mut R, degree: usize, min_angle: f64) -> Result<Self> {
        for _ in 0..10_000 {
            let c = Self::random(rng, degree, min_angle)?;
            if c.sampled_max(1024).1 <= 1.0 + 1e-12 {
                return Ok(c);
            }
        }
        Err(Error::InvalidConfig(format!("no peaked configuration of degree {degree} found")))
    }
}

/// `γ_j = (2 - p + 2pj)π / (dp + 2)` for `j = 1..=d/2`.
pub fn gamma_config(degree: usize, p: f64) -> Result<ZeroConfig> {
    if degree == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p = {p} must be finite and >= 1")));
    }
    let denom = degree as f64 * p + 2.0;
    let args = (1..=degree / 2)
        .map(|j| (2.0 - p + 2.0 * p * j as f64) * PI / denom)
        .collect();
    ZeroConfig::new(degree, args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn degree_one_values() {
        let c = ZeroConfig::degree_one();
        assert_eq!(c.abs_value(0.0), 1.0);
        assert_abs_diff_eq!(c.abs_value(PI), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn quadratic_at_pi() {
        let c = ZeroConfig::new(2, vec![PI / 2.0]).unwrap();
        assert_abs_diff_eq!(c.abs_value(PI), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_zero_at_one() {
        assert!(matches!(ZeroConfig::new(2, vec![0.0]), Err(Error::Domain(_))));
        assert!(ZeroConfig::new(4, vec![1.0]).is_err());
        assert!(ZeroConfig::new(4, vec![2.0, 1.0]).is_err());
        assert!(ZeroConfig::new(2, vec![3.5]).is_err());
        assert!(ZeroConfig::new(0, vec![]).is_err());
    }

    #[test]
    fn double_zeros_allowed() {
        let c = ZeroConfig::new(4, vec![1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(c.abs_value(1.0), 0.0, epsilon = 1e-15);
        assert_eq!(c.zero_arguments(), vec![1.0]);
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_config(2, 2.0).unwrap();
        assert_abs_diff_eq!(g.args()[0], 2.0 * PI / 3.0, epsilon = 1e-15);
        let g = gamma_config(3, 10.0 / 3.0).unwrap();
        assert_abs_diff_eq!(g.args()[0], 4.0 * PI / 9.0, epsilon = 1e-15);
        let g = gamma_config(4, 2.0).unwrap();
        assert_abs_diff_eq!(g.args()[0], 2.0 * PI / 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.args()[1], 4.0 * PI / 5.0, epsilon = 1e-15);
        assert!(gamma_config(1, 3.0).unwrap().args().is_empty());
        assert!(gamma_config(0, 3.0).is_err());
        assert!(gamma_config(3, 0.5).is_err());
    }

    #[test]
    fn gamma_at_p2_is_dirichlet_spacing() {
        for d in 1..=10 {
            let g = gamma_config(d, 2.0).unwrap();
            for (j, &t) in g.args().iter().enumerate() {
                let want = 2.0 * PI * (j + 1) as f64 / (d + 1) as f64;
                assert_abs_diff_eq!(t, want, epsilon = 1e-14);
            }
        }
    }

    fn config_strategy() -> impl Strategy<Value = ZeroConfig> {
        (1usize..=8)
            .prop_flat_map(|d| (Just(d), prop::collection::vec(0.01f64..=PI, d / 2)))
            .prop_map(|(d, mut a)| {
                a.sort_by(f64::total_cmp);
                ZeroConfig::new(d, a).unwrap()
            })
    }

    proptest! {
        #[test]
        fn even_in_theta(c in config_strategy(), theta in -PI..=PI) {
            let a = c.abs_value(theta);
            let b = c.abs_value(-theta);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn unit_at_origin_and_zero_at_args(c in config_strategy()) {
            prop_assert!((c.abs_value(0.0) - 1.0).abs() <= 1e-12);
            for &t in c.args() {
                prop_assert!(c.abs_value(t) <= 1e-12);
            }
        }

        #[test]
        fn gamma_args_increasing_in_range(d in 1usize..=10, p in 2.0f64..=4.0) {
            let g = gamma_config(d, p).unwrap();
            let a = g.args();
            prop_assert!(a.iter().all(|&t| t > 0.0 && t <= PI));
            prop_assert!(a.windows(2).all(|w| w[1] > w[0]));
        }
    }
}
