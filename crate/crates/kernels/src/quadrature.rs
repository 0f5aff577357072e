//! Tensor-product Gauss-Legendre quadrature over unions of unit polydisks
//! in polar coordinates `t = r e^{i theta}`.
//!
//! Level `l` splits the radius into `l + 1` dyadic panels
//! `[0, 2^-l], [2^-l, 2^(1-l)], ..., [1/2, 1]` and the angle into
//! `2 (l + 1)` equal panels, each carrying `order` nodes. The error estimate
//! is the difference between the last two levels.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::KernelError;
use crate::scalar::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartStrategy {
    /// Unit polydisks in every standard affine chart (two parameter charts for curves).
    Auto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Number of refinements after the coarsest level.
    pub depth: u32,
    /// Relative tolerance on the difference between the last two levels.
    pub tol: f64,
    pub lambda: f64,
    pub charts: ChartStrategy,
    /// Gauss-Legendre nodes per panel and direction.
    pub order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { depth: 6, tol: 1e-9, lambda: 0.0, charts: ChartStrategy::Auto, order: 8 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), KernelError> {
        if self.depth < 1 {
            return Err(KernelError::InvalidInput("depth must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(KernelError::InvalidInput("tol must be positive".into()));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(KernelError::InvalidInput("lambda must be a finite non-negative number".into()));
        }
        if !(2..=64).contains(&self.order) {
            return Err(KernelError::InvalidInput("order must lie in 2..=64".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Vec<C64>,
    /// Largest componentwise difference to the previous level.
    pub error: f64,
    /// Cells evaluated at the final level.
    pub cells: usize,
    pub level: u32,
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// Points `t` and weights `w` of one panel, with `sum w f(t)` approximating
/// the area integral over the panel.
type Panel = Vec<(C64, f64)>;

fn disk_panels(level: u32, order: usize) -> Vec<Panel> {
    let gl = gauss_legendre(order);
    let radial = level as usize + 1;
    let angular = 2 * radial;
    let mut edges = vec![0.0];
    for k in (0..radial).rev() {
        edges.push(0.5f64.powi(k as i32));
    }
    let mut panels = Vec::with_capacity(radial * angular);
    for rp in 0..radial {
        let (r0, r1) = (edges[rp], edges[rp + 1]);
        for ap in 0..angular {
            let (a0, a1) = (2.0 * PI * ap as f64 / angular as f64, 2.0 * PI * (ap + 1) as f64 / angular as f64);
            let mut panel = Vec::with_capacity(order * order);
            for &(xr, wr) in &gl {
                let r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * xr;
                for &(xa, wa) in &gl {
                    let th = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * xa;
                    let w = 0.25 * (r1 - r0) * (a1 - a0) * wr * wa * r;
                    panel.push((C64::from_polar(r, th), w));
                }
            }
            panels.push(panel);
        }
    }
    panels
}

/// One level of `sum_c int_{|t_i| <= 1} f(c, t) dV(t)` over `charts` charts of dimension `dim`.
fn integrate_level<F>(
    dim: usize,
    charts: usize,
    width: usize,
    level: u32,
    order: usize,
    f: &F,
) -> Result<(Vec<C64>, usize), KernelError>
where
    F: Fn(usize, &[C64]) -> Result<Vec<C64>, KernelError> + Sync,
{
    let panels = disk_panels(level, order);
    let per_chart = panels.len().pow(dim as u32);
    let cells = charts * per_chart;
    let sums: Vec<Result<Vec<C64>, KernelError>> = (0..cells)
        .into_par_iter()
        .map(|cell| {
            let chart = cell / per_chart;
            let mut rest = cell % per_chart;
            let mut chosen = Vec::with_capacity(dim);
            for _ in 0..dim {
                chosen.push(&panels[rest % panels.len()]);
                rest /= panels.len();
            }
            let mut acc = vec![C64::new(0.0, 0.0); width];
            let per_panel = order * order;
            let mut t = vec![C64::new(0.0, 0.0); dim];
            for idx in 0..per_panel.pow(dim as u32) {
                let mut rest = idx;
                let mut w = 1.0;
                for (i, p) in chosen.iter().enumerate() {
                    let (ti, wi) = p[rest % per_panel];
                    t[i] = ti;
                    w *= wi;
                    rest /= per_panel;
                }
                let v = f(chart, &t)?;
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x * w;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![C64::new(0.0, 0.0); width];
    for s in sums {
        for (a, x) in total.iter_mut().zip(s?) {
            *a += x;
        }
    }
    Ok((total, cells))
}

/// Integrates a `width`-vector valued function over the union of unit
/// polydisks in `charts` charts, refining until two consecutive levels agree
/// to `cfg.tol` relative to `max(1, |value|)`.
pub fn integrate_polydisks<F>(
    dim: usize,
    charts: usize,
    width: usize,
    cfg: &QuadratureConfig,
    f: F,
) -> Result<QuadResult, KernelError>
where
    F: Fn(usize, &[C64]) -> Result<Vec<C64>, KernelError> + Sync,
{
    cfg.validate()?;
    let (mut prev, _) = integrate_level(dim, charts, width, 0, cfg.order, &f)?;
    let mut error = f64::INFINITY;
    for level in 1..=cfg.depth {
        let (cur, cells) = integrate_level(dim, charts, width, level, cfg.order, &f)?;
        error = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let size = cur.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if error <= cfg.tol * size {
            return Ok(QuadResult { value: cur, error, cells, level });
        }
        prev = cur;
    }
    Err(KernelError::NonConvergence { value: format!("{prev:?}"), error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [2, 5, 8, 13] {
            let rule = gauss_legendre(n);
            assert!((rule.iter().map(|p| p.1).sum::<f64>() - 2.0).abs() < 1e-14);
            for k in 0..2 * n {
                let got: f64 = rule.iter().map(|(x, w)| w * x.powi(k as i32)).sum();
                let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn disk_area_and_moments() {
        let cfg = QuadratureConfig { tol: 1e-12, ..Default::default() };
        let r = integrate_polydisks(1, 1, 2, &cfg, |_, t| Ok(vec![C64::new(1.0, 0.0), t[0] * t[0].conj()])).unwrap();
        assert!((r.value[0].re - PI).abs() < 1e-12);
        assert!((r.value[1].re - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn polydisk_of_rational_function() {
        // int_{|t|<=1} dA / (1 + |t|^2)^2 = pi / 2 per factor.
        let cfg = QuadratureConfig { tol: 1e-8, ..Default::default() };
        let f = |_: usize, t: &[C64]| {
            Ok(vec![C64::new(t.iter().map(|x| 1.0 / (1.0 + x.norm_sqr()).powi(2)).product(), 0.0)])
        };
        let r = integrate_polydisks(2, 1, 1, &cfg, f).unwrap();
        assert!((r.value[0].re - PI * PI / 4.0).abs() < 1e-8);
        assert!(r.error < 1e-7);
    }

    #[test]
    fn oscillating_terms_cancel() {
        let cfg = QuadratureConfig::default();
        let r = integrate_polydisks(1, 2, 1, &cfg, |c, t| Ok(vec![t[0].powu(3) * (c as f64 + 1.0)])).unwrap();
        assert!(r.value[0].norm() < 1e-12);
    }

    #[test]
    fn reduction_is_deterministic() {
        let cfg = QuadratureConfig { depth: 2, tol: 1e-3, ..Default::default() };
        let f = |_: usize, t: &[C64]| Ok(vec![(t[0] + 0.3).exp()]);
        let a = integrate_polydisks(1, 1, 1, &cfg, f).unwrap();
        let b = integrate_polydisks(1, 1, 1, &cfg, f).unwrap();
        assert_eq!(a.value[0].re.to_bits(), b.value[0].re.to_bits());
        assert_eq!(a.value[0].im.to_bits(), b.value[0].im.to_bits());
    }

    #[test]
    fn non_convergence_is_reported() {
        let cfg = QuadratureConfig { depth: 1, tol: 1e-15, order: 2, ..Default::default() };
        let r = integrate_polydisks(1, 1, 1, &cfg, |_, t| Ok(vec![C64::new(1.0 / (1.01 - t[0].re), 0.0)]));
        assert!(matches!(r, Err(KernelError::NonConvergence { .. })));
    }

    #[test]
    fn config_json_round_trip() {
        let text = r#"{"depth": 4, "tol": 1e-6, "lambda": 0.0, "charts": "auto"}"#;
        let cfg: QuadratureConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.depth, 4);
        assert_eq!(cfg.order, 8);
        assert!(QuadratureConfig { depth: 0, ..Default::default() }.validate().is_err());
        assert!(QuadratureConfig { tol: 0.0, ..Default::default() }.validate().is_err());
        let back: QuadratureConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
