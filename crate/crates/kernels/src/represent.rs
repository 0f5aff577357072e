//! Quadrature realizations of the weighted representation formula on `P^N`,
//! the representation formula on a smooth plane curve `X = {a = 0}`, and the
//! division formula on such a curve.
//!
//! Integrals of top forms use `int c dt_1 ^ dt_bar_1 ^ ... ^ dt_N ^ dt_bar_N
//! = (2i)^N int c dV`, which makes `int_{P^N} alpha^N = 1`.

use polydiv_core::{parse_poly, RatPoly, Ring};

use crate::cpoly::CPoly;
use crate::error::KernelError;
use crate::form::{FormValue, Layout, Weight};
use crate::hefer::{hefer_decompose, tau_star, HeferSign, TauContext};
use crate::hypersurface::Hypersurface;
use crate::koszul::{delta_h_power, koszul_forms, SectionTuple};
use crate::point::{ChartPoint, Pair};
use crate::quadrature::{integrate_polydisks, QuadResult, QuadratureConfig};
use crate::scalar::C64;
use crate::weights::alpha;

/// Factor turning the coefficient of the canonical top mask
/// `dt_1 ... dt_N dt_bar_1 ... dt_bar_N` into a density for `dV`.
pub fn orientation_factor(n: usize) -> C64 {
    let sign = if (n * n.saturating_sub(1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    C64::new(0.0, 2.0).powu(n as u32) * sign
}

/// Checks that an integrand of record `w` with `p` holomorphic differentials
/// is a form on projective space, and returns its degree in `z`.
pub fn integrand_z_degree(w: Weight, p: u32) -> Result<i32, KernelError> {
    if w.zeta + p as i32 != 0 {
        return Err(KernelError::InvalidInput(format!(
            "integrand of record {w} has zeta-degree {}",
            w.zeta + p as i32
        )));
    }
    Ok(w.z - p as i32)
}

fn exact_zero(width: usize) -> QuadResult {
    QuadResult { value: vec![C64::new(0.0, 0.0); width], error: 0.0, cells: 0, level: 0 }
}

fn form_degree(p: &RatPoly, what: &str) -> Result<u32, KernelError> {
    if !p.is_homogeneous() {
        return Err(KernelError::InvalidInput(format!("{what} {p} is not homogeneous")));
    }
    Ok(p.total_degree().unwrap_or(0))
}

/// `zeta` in chart `k` of `P^N` with affine coordinates `t`.
fn chart_point(k: usize, t: &[C64]) -> Vec<C64> {
    let mut zeta = t.to_vec();
    zeta.insert(k, C64::new(1.0, 0.0));
    zeta
}

fn chart_jacobian(coords: usize, k: usize) -> Vec<Vec<C64>> {
    (0..coords)
        .map(|j| {
            (0..coords - 1)
                .map(
                    |a| {
                        if (a < k && j == a) || (a >= k && j == a + 1) {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    },
                )
                .collect()
        })
        .collect()
}

/// `int_{P^N} (alpha^N)_{N,N}`, the total mass of the `N`-th power of the
/// Fubini-Study form in the normalization used here. Independent of `z`.
pub fn alpha_mass(z: &ChartPoint, cfg: &QuadratureConfig) -> Result<QuadResult, KernelError> {
    let coords = z.coords().len();
    let n = coords - 1;
    let chart_lay = Layout::new(n, 0);
    let jacs: Vec<Vec<Vec<C64>>> = (0..coords).map(|k| chart_jacobian(coords, k)).collect();
    let factor = orientation_factor(n);
    integrate_polydisks(n, coords, 1, cfg, |k, t| {
        let zeta = chart_point(k, t);
        let a = alpha(&Pair::<C64>::new(z.coords(), &zeta), Layout::new(coords, 0)).pullback(chart_lay, &jacs[k]);
        Ok(vec![a.component(1, 1).pow(n as u32).coeff(chart_lay.top()).copied().unwrap_or_default() * factor])
    })
}

/// Approximates `phi(z) = int_{P^N} (alpha^(l+N))_{N,N} phi` for `phi` of degree `l`,
/// with `z` in its chart normalization. The integral runs over the unit
/// polydisks of the `N + 1` standard charts.
pub fn represent_pn(phi: &RatPoly, z: &ChartPoint, cfg: &QuadratureConfig) -> Result<QuadResult, KernelError> {
    cfg.validate()?;
    let coords = z.coords().len();
    if phi.ring().nvars() != coords {
        return Err(KernelError::InvalidInput("phi and z live in different spaces".into()));
    }
    if phi.is_zero() {
        return Ok(exact_zero(1));
    }
    let ell = form_degree(phi, "phi")?;
    let n = coords - 1;
    let power = ell + n as u32;
    let phi_c = CPoly::new(phi);
    let chart_lay = Layout::new(n, 0);
    let jacs: Vec<Vec<Vec<C64>>> = (0..coords).map(|k| chart_jacobian(coords, k)).collect();
    let factor = orientation_factor(n);
    let top = chart_lay.top();

    let sample = Pair::<C64>::new(z.coords(), z.coords());
    let g = alpha(&sample, Layout::new(coords, 0)).pow(power);
    let zdeg = integrand_z_degree(g.weight() + Weight::new(ell as i32, 0), n as u32)?;
    debug_assert_eq!(zdeg, ell as i32);

    integrate_polydisks(n, coords, 1, cfg, |k, t| {
        let zeta = chart_point(k, t);
        let pair = Pair::<C64>::new(z.coords(), &zeta);
        let a = alpha(&pair, Layout::new(coords, 0)).pullback(chart_lay, &jacs[k]);
        let c = a.pow(power).coeff(top).copied().unwrap_or_default();
        Ok(vec![c * phi_c.eval(&zeta) * factor])
    })
}

/// A rational parametrization `[u : v] -> [P_0(u, v) : ... : P_N(u, v)]` by
/// binary forms of a common degree, integrated over the charts `[1 : t]` and
/// `[s : 1]` with `|t|, |s| <= 1`.
#[derive(Clone, Debug)]
pub struct CurveParam {
    forms: Vec<RatPoly>,
    values: Vec<CPoly>,
    du: Vec<CPoly>,
    dv: Vec<CPoly>,
}

impl CurveParam {
    pub fn new(forms: &[RatPoly]) -> Result<Self, KernelError> {
        let first = forms.first().ok_or_else(|| KernelError::InvalidInput("empty parametrization".into()))?;
        let deg = first.total_degree();
        for p in forms {
            if p.ring().nvars() != 2 || !p.is_homogeneous() || p.total_degree() != deg {
                return Err(KernelError::InvalidInput(format!("{p} is not a binary form of degree {deg:?}")));
            }
        }
        let values: Vec<CPoly> = forms.iter().map(CPoly::new).collect();
        let du = values.iter().map(|p| p.derivative(0)).collect();
        let dv = values.iter().map(|p| p.derivative(1)).collect();
        Ok(CurveParam { forms: forms.to_vec(), values, du, dv })
    }

    /// `[u^2 : uv : v^2]`, the conic `zeta_0 zeta_2 = zeta_1^2`.
    pub fn conic() -> Self {
        let r = Ring::grevlex(["u", "v"]);
        let forms: Vec<RatPoly> =
            ["u^2", "u*v", "v^2"].iter().map(|s| parse_poly(s, &r).expect("literal form")).collect();
        Self::new(&forms).expect("conic forms are binary quadrics")
    }

    pub fn forms(&self) -> &[RatPoly] {
        &self.forms
    }

    pub fn coords(&self) -> usize {
        self.forms.len()
    }

    fn uv(chart: usize, t: C64) -> [C64; 2] {
        if chart == 0 {
            [C64::new(1.0, 0.0), t]
        } else {
            [t, C64::new(1.0, 0.0)]
        }
    }

    pub fn point(&self, chart: usize, t: C64) -> Vec<C64> {
        let uv = Self::uv(chart, t);
        self.values.iter().map(|p| p.eval(&uv)).collect()
    }

    /// `jac[j][0] = d zeta_j / dt` in the given chart.
    pub fn jacobian(&self, chart: usize, t: C64) -> Vec<Vec<C64>> {
        let uv = Self::uv(chart, t);
        let d = if chart == 0 { &self.dv } else { &self.du };
        d.iter().map(|p| vec![p.eval(&uv)]).collect()
    }

    /// Checks that the image lies on `x`, sampled at a few points of both charts.
    pub fn check_on(&self, x: &Hypersurface) -> Result<(), KernelError> {
        if self.coords() != x.coords() {
            return Err(KernelError::InvalidInput("parametrization and hypersurface in different spaces".into()));
        }
        for chart in 0..2 {
            for t in [C64::new(0.3, 0.1), C64::new(-0.7, 0.4), C64::new(0.0, -0.9)] {
                let r = x.residual(&self.point(chart, t));
                if r > 1e-10 {
                    return Err(KernelError::InvalidInput(format!("parametrization leaves X: |a| = {r:e}")));
                }
            }
        }
        Ok(())
    }
}

fn curve_setup(a: &RatPoly, param: &CurveParam) -> Result<Hypersurface, KernelError> {
    let x = Hypersurface::new(a)?;
    if x.coords() != 3 {
        return Err(KernelError::InvalidInput("only plane curves are parametrized".into()));
    }
    param.check_on(&x)?;
    Ok(x)
}

/// Approximates `phi(z) = -int_X delta_A(h^a ^ alpha^(l - kappa0 + n + 1)) phi` on a
/// parametrized plane curve `X = {a = 0}`, with `delta_{w-z} h^a = a(z) - a(w)`.
/// For `z` off `X` the value is that of the holomorphic extension of `phi|X`
/// defined by the formula.
pub fn represent_hypersurface(
    phi: &RatPoly,
    a: &RatPoly,
    z: &ChartPoint,
    param: &CurveParam,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, KernelError> {
    cfg.validate()?;
    let x = curve_setup(a, param)?;
    if phi.ring().nvars() != 3 || z.coords().len() != 3 {
        return Err(KernelError::InvalidInput("phi and z must live in P^2".into()));
    }
    if phi.is_zero() {
        return Ok(exact_zero(1));
    }
    let ell = form_degree(phi, "phi")?;
    let n = 1u32;
    let kappa0 = x.kappa0();
    let power = (ell + n + 1).checked_sub(kappa0).ok_or_else(|| {
        KernelError::InvalidInput(format!("deg phi = {ell} is below kappa0 - n - 1 = {}", kappa0 as i32 - 2))
    })?;
    let ha = hefer_decompose(a, HeferSign::ZMinusW)?;
    let phi_c = CPoly::new(phi);
    let lay = Layout::new(3, 0);
    let curve = Layout::new(1, 0);
    let factor = -orientation_factor(1);

    let integrand = |chart: usize, t: C64| -> Result<(FormValue, C64), KernelError> {
        let zeta = param.point(chart, t);
        let pair = Pair::<C64>::new(z.coords(), &zeta);
        let ctx = TauContext::new(&pair, lay, power.max(kappa0));
        let inner = tau_star(&ha, &pair, &ctx).wedge(&ctx.alpha_pows[power as usize]).component(n + 1, n);
        let form = x.delta_a(&inner, &zeta)?;
        Ok((form, phi_c.eval(&zeta)))
    };
    let (w, _) = integrand(0, C64::new(0.5, 0.25))?;
    integrand_z_degree(w.weight() + Weight::new(ell as i32, 0), n)?;

    integrate_polydisks(1, 2, 1, cfg, |chart, t| {
        let (form, phi_v) = integrand(chart, t[0])?;
        let pb = form.pullback(curve, &param.jacobian(chart, t[0]));
        let c = pb.coeff(curve.top()).copied().unwrap_or_default();
        Ok(vec![c * phi_v * factor])
    })
}

/// Approximates the solution `q = (q_1, ..., q_m)` of `f . q = phi` on a
/// parametrized plane curve `X = {a = 0}` given by
/// `q = -sum_{k=1}^{min(m, n+1)} int_X delta_A(h^a ^ alpha^(rho - kappa0 + n + 1 - dk)
/// ^ (delta_h)_{k-1} U_k) phi`, where `phi` has degree `rho` and the forms
/// `f_j` have no common zero on `X`. `q_j` is the coefficient of `e_j`.
///
/// `h^a` stands first, as in [`represent_hypersurface`]; for `m = 1` the
/// kernel is then that formula applied to `phi / f`. Moving the odd form
/// `h^a` to the end flips the sign of every term.
pub fn division_eval_hypersurface(
    f: &[RatPoly],
    phi: &RatPoly,
    a: &RatPoly,
    z: &ChartPoint,
    rho: u32,
    param: &CurveParam,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, KernelError> {
    cfg.validate()?;
    if cfg.lambda != 0.0 {
        return Err(KernelError::InvalidInput(
            "the division formula is evaluated without regularization; set lambda = 0".into(),
        ));
    }
    let x = curve_setup(a, param)?;
    let tuple = SectionTuple::new(f)?;
    let m = tuple.m();
    if tuple.polys()[0].ring().nvars() != 3 || phi.ring().nvars() != 3 || z.coords().len() != 3 {
        return Err(KernelError::InvalidInput("f, phi and z must live in P^2".into()));
    }
    if phi.is_zero() {
        return Ok(exact_zero(m));
    }
    if form_degree(phi, "phi")? != rho {
        return Err(KernelError::InvalidInput(format!("phi must have degree rho = {rho}")));
    }
    let n = 1u32;
    let d = tuple.degree();
    let kappa0 = x.kappa0();
    let kmax = m.min(n as usize + 1) as u32;
    let base = (rho + n + 1) as i64 - kappa0 as i64;
    if base < (d * kmax) as i64 {
        return Err(KernelError::InvalidInput(format!(
            "rho = {rho} is below d min(m, n+1) + kappa0 - (n+1) = {}",
            (d * kmax) as i64 + kappa0 as i64 - (n + 1) as i64
        )));
    }
    let hf = tuple.hefer(HeferSign::ZMinusW)?;
    let ha = hefer_decompose(a, HeferSign::ZMinusW)?;
    let phi_c = CPoly::new(phi);
    let lay = Layout::new(3, m);
    let curve = Layout::new(1, m);
    let factor = -orientation_factor(1);
    let max_power = (base as u32 - d).max(kappa0).max(d);

    let integrand = |chart: usize, t: C64| -> Result<(FormValue, C64), KernelError> {
        let zeta = param.point(chart, t);
        let pair = Pair::<C64>::new(z.coords(), &zeta);
        let ctx = TauContext::new(&pair, lay, max_power);
        let kf = koszul_forms(&tuple, &pair, lay, 0.0)?;
        let hs: Vec<FormValue> = hf.iter().map(|h| tau_star(h, &pair, &ctx)).collect();
        let ha_form = tau_star(&ha, &pair, &ctx);
        let mut inner: Option<FormValue> = None;
        for k in 1..=kmax {
            let p = (base as u32 - d * k) as usize;
            let term = ha_form
                .wedge(&ctx.alpha_pows[p])
                .wedge(&delta_h_power(&kf.u[k as usize - 1], &hs, d, k as usize - 1))
                .component(n + 1, n);
            inner = Some(match inner {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
        let form = x.delta_a(&inner.expect("kmax >= 1"), &zeta)?;
        Ok((form, phi_c.eval(&zeta)))
    };
    let (w, _) = integrand(0, C64::new(0.5, 0.25))?;
    // Stripping e_j removes its record (d, 0).
    let zdeg = integrand_z_degree(w.weight() + Weight::new(rho as i32 - d as i32, 0), n)?;
    debug_assert_eq!(zdeg, rho as i32 - d as i32);

    let masks: Vec<u32> = (0..m).map(|j| curve.dz(0) | curve.dzb(0) | curve.e(j)).collect();
    integrate_polydisks(1, 2, m, cfg, |chart, t| {
        let (form, phi_v) = integrand(chart, t[0])?;
        let pb = form.pullback(curve, &param.jacobian(chart, t[0]));
        Ok(masks.iter().map(|&mk| pb.coeff(mk).copied().unwrap_or_default() * phi_v * factor).collect())
    })
}
