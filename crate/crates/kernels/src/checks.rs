//! A seeded suite of pointwise identities of the kernels, reported as
//! largest deviation against a fixed tolerance.

use polydiv_core::poly::monomials_of_degree;
use polydiv_core::{parse_poly, rat, RatPoly, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::KernelError;
use crate::form::{FormValue, Layout, Weight};
use crate::hefer::{hefer_decompose, tau_scalar, tau_star, HeferSign, TauContext};
use crate::hypersurface::{omega, structure_form_sides, Hypersurface};
use crate::point::{ChartPoint, Pair};
use crate::quadrature::QuadratureConfig;
use crate::represent::{alpha_mass, CurveParam};
use crate::scalar::{Jet, C64};
use crate::weights::{alpha, b_form, delta_eta, eval_alpha, gamma, TWO_PI_I};

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckItem>,
}

fn item(name: &str, samples: usize, max_deviation: f64, tolerance: f64) -> CheckItem {
    CheckItem { name: name.into(), samples, max_deviation, tolerance, passed: max_deviation <= tolerance }
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> ChartPoint {
    loop {
        let v: Vec<C64> = (0..=n).map(|_| random_c64(rng)).collect();
        if let Ok(p) = ChartPoint::new(v) {
            return p;
        }
    }
}

/// A homogeneous polynomial of degree `d` with small integer coefficients,
/// nonzero when `d` admits monomials.
pub fn random_form(rng: &mut ChaCha8Rng, ring: &std::sync::Arc<Ring>, d: u32) -> RatPoly {
    let monos = monomials_of_degree(ring.nvars(), d);
    loop {
        let mut terms = Vec::new();
        for m in &monos {
            if rng.gen_bool(0.6) {
                terms.push((m.clone(), rat(rng.gen_range(-4..=4))));
            }
        }
        let p = RatPoly::from_terms(ring, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

fn ring(n: usize) -> std::sync::Arc<Ring> {
    Ring::grevlex((0..n).map(|i| format!("x{i}")))
}

/// `max |delta_eta b - 1|` over random pairs in `P^1, P^2, P^3`.
pub fn check_b_contraction(rng: &mut ChaCha8Rng, samples: usize) -> Result<f64, KernelError> {
    let mut worst = 0.0f64;
    for i in 0..samples {
        let n = 1 + i % 3;
        let (z, zeta) = (random_point(rng, n), random_point(rng, n));
        let pair = Pair::<C64>::new(z.coords(), zeta.coords());
        let b = b_form(&pair, Layout::new(n + 1, 0))?;
        let one = delta_eta(&b, &pair);
        worst = worst.max((one.coeff(0).copied().unwrap_or_default() - 1.0).norm());
        worst = worst.max(one.sub(&one.filter(|m| m == 0)).max_abs());
    }
    Ok(worst)
}

/// `max |delta_eta alpha_{1,1} - dbar alpha_{0,0}|` with `dbar` by central
/// differences of step `1e-5` in chart coordinates.
pub fn check_alpha_closed(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..samples {
        let n = 1 + i % 3;
        let z = random_point(rng, n);
        let t: Vec<C64> = (0..n).map(|_| random_c64(rng)).collect();
        let value = |t: &[C64]| *eval_alpha(&z, &ChartPoint::affine(0, t).expect("finite")).coeff(0).expect("alpha_00");
        let zeta = ChartPoint::affine(0, &t).expect("finite");
        let pair = Pair::<C64>::new(z.coords(), zeta.coords());
        let lay = Layout::new(n + 1, 0);
        let contracted = delta_eta(&alpha(&pair, lay).component(1, 1), &pair);
        for a in 0..n {
            let at = |d: C64| {
                let mut u = t.clone();
                u[a] += d;
                value(&u)
            };
            let dx = (at(C64::new(h, 0.0)) - at(C64::new(-h, 0.0))) / (2.0 * h);
            let dy = (at(C64::new(0.0, h)) - at(C64::new(0.0, -h))) / (2.0 * h);
            let dbar = (dx + C64::i() * dy) * 0.5;
            worst = worst.max((contracted.coeff(lay.dzb(a + 1)).copied().unwrap_or_default() - dbar).norm());
        }
    }
    worst
}

/// `max |nabla_eta gamma_j - 2 pi i (z_j - alpha zeta_j)|`.
pub fn check_gamma(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..samples {
        let n = 1 + i % 3;
        let (z, zeta) = (random_point(rng, n), random_point(rng, n));
        let pair = Pair::<Jet>::new(z.coords(), zeta.coords());
        let lay = Layout::new(n + 1, 0);
        let a = alpha(&pair, lay).values();
        for (j, g) in gamma(&pair, lay).into_iter().enumerate() {
            let lhs = delta_eta(&g, &pair).values().sub(&g.dbar());
            let zj = FormValue::scalar(lay, z.coords()[j], g.weight());
            let rhs = zj.sub(&a.mul_coeff(&zeta.coords()[j], Weight::new(1, 0))).scale(TWO_PI_I);
            worst = worst.max(lhs.distance(&rhs));
        }
    }
    worst
}

/// Exact decomposition identity under both sign conventions; returns the
/// number of failures.
pub fn check_hefer_exact(rng: &mut ChaCha8Rng, samples: usize) -> Result<usize, KernelError> {
    let mut failures = 0;
    for _ in 0..samples {
        let r = ring(rng.gen_range(1..=4));
        let d = rng.gen_range(0..=5);
        let p = random_form(rng, &r, d);
        for sign in [HeferSign::WMinusZ, HeferSign::ZMinusW] {
            if !hefer_decompose(&p, sign)?.verify() {
                failures += 1;
            }
        }
    }
    Ok(failures)
}

/// `max |nabla_eta tau* h + tau*(delta_{w-z} h)|` for random forms in three
/// variables, relative to the size of the right side.
pub fn check_tau(rng: &mut ChaCha8Rng, polys: usize, pairs: usize) -> Result<f64, KernelError> {
    let r = ring(3);
    let mut worst = 0.0f64;
    for i in 0..polys {
        let p = random_form(rng, &r, 1 + (i as u32 % 4));
        let deg = p.total_degree().unwrap_or(0);
        let sign = if i % 2 == 0 { HeferSign::ZMinusW } else { HeferSign::WMinusZ };
        let h = hefer_decompose(&p, sign)?;
        let contraction = h.contraction();
        for _ in 0..pairs {
            let (z, zeta) = (random_point(rng, 2), random_point(rng, 2));
            let pair = Pair::<Jet>::new(z.coords(), zeta.coords());
            let ctx = TauContext::new(&pair, Layout::new(3, 0), deg);
            let t = tau_star(&h, &pair, &ctx);
            let lhs = delta_eta(&t, &pair).values().sub(&t.dbar());
            let rhs = tau_scalar(&contraction, &pair, &ctx).values().neg();
            worst = worst.max(lhs.distance(&rhs) / rhs.max_abs().max(1.0));
        }
    }
    Ok(worst)
}

/// `max |Da ^ omega' - 2 pi i Omega|` at points of the conic `[1 : t : t^2]`
/// and `[s^2 : s : 1]`.
pub fn check_structure_form(rng: &mut ChaCha8Rng, samples: usize) -> Result<f64, KernelError> {
    let x = Hypersurface::new(&parse_poly("x0*x2 - x1^2", &ring(3))?)?;
    let param = CurveParam::conic();
    let mut worst = 0.0f64;
    for i in 0..samples {
        let t = random_c64(rng);
        let zeta = ChartPoint::new(param.point(i % 2, t))?;
        let (lhs, _) = structure_form_sides(&x, &zeta)?;
        let om = omega::<C64>(zeta.coords(), Layout::new(3, 0)).scale(TWO_PI_I);
        worst = worst.max(lhs.distance(&om));
    }
    Ok(worst)
}

/// `|int_{P^1} alpha_{1,1} - 1|`.
pub fn check_fubini_study(cfg: &QuadratureConfig) -> Result<f64, KernelError> {
    let z = ChartPoint::affine(0, &[C64::new(0.0, 0.0)])?;
    Ok((alpha_mass(&z, cfg)?.value[0] - 1.0).norm())
}

/// Runs every check with the given seed.
pub fn run_kernel_checks(seed: u64) -> Result<CheckReport, KernelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs_cfg = QuadratureConfig { depth: 12, tol: 1e-12, ..Default::default() };
    let hefer_failures = check_hefer_exact(&mut rng, 200)?;
    let checks = vec![
        item("delta_eta_b_equals_one", 100, check_b_contraction(&mut rng, 100)?, 1e-12),
        item("nabla_eta_alpha_finite_differences", 30, check_alpha_closed(&mut rng, 30), 1e-6),
        item("nabla_eta_gamma", 30, check_gamma(&mut rng, 30), 1e-12),
        item("hefer_identity_exact_failures", 400, hefer_failures as f64, 0.0),
        item("tau_substitution_identity", 200, check_tau(&mut rng, 10, 20)?, 1e-9),
        item("structure_form_identity_on_conic", 100, check_structure_form(&mut rng, 100)?, 1e-9),
        item("fubini_study_mass", 1, check_fubini_study(&fs_cfg)?, 1e-8),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(CheckReport { seed, passed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_is_reproducible() {
        let a = run_kernel_checks(0).unwrap();
        for c in &a.checks {
            assert!(c.passed, "{c:?}");
        }
        let b = run_kernel_checks(0).unwrap();
        let dev = |r: &CheckReport| r.checks.iter().map(|c| c.max_deviation.to_bits()).collect::<Vec<_>>();
        assert_eq!(dev(&a), dev(&b));
    }
}
