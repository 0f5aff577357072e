//! Koszul complex data of a tuple `f = (f_1, ..., f_m)` of homogeneous forms
//! of degree `d`: the forms `sigma`, `U_k`, the regularized `U^{f,lambda}`,
//! `R^{f,lambda}`, and the Hefer morphism `alpha^{kappa - dk} (delta_h)_{k-l}`.
//!
//! The frame element `e_j` carries the record `O_zeta(d)`, so every `U_k`
//! has record `(0, 0)`.

use polydiv_core::RatPoly;

use crate::cpoly::CPoly;
use crate::error::KernelError;
use crate::form::{FormValue, Layout, Weight};
use crate::hefer::{hefer_decompose, tau_star, HeferData, HeferSign, TauContext};
use crate::point::{ChartPoint, Pair};
use crate::scalar::{Coeff, Jet, C64};

/// Below this value of `|f|^2 / |zeta|^(2d)` the tuple counts as vanishing.
pub const VANISHING_THRESHOLD: f64 = 1e-24;

/// Homogeneous forms of a common degree, with derivatives for evaluation.
#[derive(Clone, Debug)]
pub struct SectionTuple {
    polys: Vec<RatPoly>,
    values: Vec<CPoly>,
    grads: Vec<Vec<CPoly>>,
    hessians: Vec<Vec<Vec<CPoly>>>,
    degree: u32,
}

impl SectionTuple {
    pub fn new(polys: &[RatPoly]) -> Result<Self, KernelError> {
        let first = polys.first().ok_or_else(|| KernelError::InvalidInput("empty tuple".into()))?;
        let degree = first.total_degree().unwrap_or(0);
        for p in polys {
            if !p.is_homogeneous() || p.is_zero() || p.total_degree() != Some(degree) {
                return Err(KernelError::InvalidInput(format!("{p} is not a nonzero form of degree {degree}")));
            }
        }
        if degree == 0 {
            return Err(KernelError::InvalidInput("forms of degree 0".into()));
        }
        let values: Vec<CPoly> = polys.iter().map(CPoly::new).collect();
        let grads: Vec<Vec<CPoly>> = values.iter().map(CPoly::gradient).collect();
        let hessians = grads.iter().map(|g| g.iter().map(CPoly::gradient).collect()).collect();
        Ok(SectionTuple { polys: polys.to_vec(), values, grads, hessians, degree })
    }

    pub fn polys(&self) -> &[RatPoly] {
        &self.polys
    }

    pub fn m(&self) -> usize {
        self.polys.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn eval(&self, x: &[C64]) -> Vec<C64> {
        self.values.iter().map(|p| p.eval(x)).collect()
    }

    /// Hefer decompositions of every `f_j`.
    pub fn hefer(&self, sign: HeferSign) -> Result<Vec<HeferData>, KernelError> {
        self.polys.iter().map(|p| hefer_decompose(p, sign)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct KoszulForms<S> {
    pub sigma: FormValue<S>,
    /// `U_k` for `k = 1, ..., min(m, N + 1)`.
    pub u: Vec<FormValue<S>>,
    pub u_lambda: FormValue<S>,
    pub r_lambda: FormValue<S>,
}

fn frame_weight(d: u32) -> Weight {
    Weight::new(d as i32, 0)
}

/// Evaluates the Koszul forms at `pair.zeta`; `lay.frames` must equal `m`.
pub fn koszul_forms<S: Coeff>(
    f: &SectionTuple,
    pair: &Pair<S>,
    lay: Layout,
    lambda: f64,
) -> Result<KoszulForms<S>, KernelError> {
    assert_eq!(lay.frames, f.m(), "one frame element per f_j");
    let zeta = pair.zeta_values();
    let n = zeta.len();
    let d = f.degree();
    let conj_all = |v: Vec<C64>| -> Vec<C64> { v.into_iter().map(|c| c.conj()).collect() };
    let fv = f.eval(&zeta);
    let mut norm2 = S::constant(C64::new(0.0, 0.0));
    let mut fbar_e = Vec::new();
    let mut dfbar_e = Vec::new();
    let mut f_dfbar = Vec::new();
    for j in 0..f.m() {
        let g = conj_all(f.grads[j].iter().map(|p| p.eval(&zeta)).collect());
        let fbar = S::antiholomorphic(fv[j].conj(), &g);
        norm2 = norm2 + fbar.scale(fv[j]);
        fbar_e.push((lay.e(j), fbar));
        for k in 0..n {
            let h = conj_all(f.hessians[j][k].iter().map(|p| p.eval(&zeta)).collect());
            let c = S::antiholomorphic(g[k], &h);
            dfbar_e.push((lay.dzb(k) | lay.e(j), c.clone()));
            f_dfbar.push((lay.dzb(k), c.scale(fv[j])));
        }
    }
    let zeta2 = pair.zeta_norm2();
    let fe2 = norm2.clone() / zeta2.powf(d as f64);
    if lambda == 0.0 && fe2.value().re < VANISHING_THRESHOLD {
        return Err(KernelError::CommonZero(fe2.value().re.sqrt()));
    }
    // dzb_k ^ e_j is stored in canonical order already.
    let fbar_e = FormValue::from_terms(lay, Weight::ZERO, fbar_e);
    let dfbar_e = FormValue::from_terms(lay, Weight::ZERO, dfbar_e);
    let inv = S::constant(C64::new(1.0, 0.0)) / norm2.clone();
    let sigma = fbar_e.mul_coeff(&inv, Weight::ZERO).with_weight(Weight::ZERO);
    let kmax = f.m().min(n);
    let mut u = Vec::with_capacity(kmax);
    let mut acc = fbar_e.clone();
    let mut scale = inv.clone();
    for k in 1..=kmax {
        if k > 1 {
            acc = acc.wedge(&dfbar_e);
            scale = scale * inv.clone();
        }
        u.push(acc.mul_coeff(&scale, Weight::ZERO).with_weight(Weight::ZERO));
    }
    let mut u_sum = FormValue::zero(lay, Weight::ZERO);
    for uk in &u {
        u_sum = u_sum.add(uk);
    }
    let one = S::constant(C64::new(1.0, 0.0));
    let fl = if lambda == 0.0 { one.clone() } else { fe2.powf(lambda) };
    let u_lambda = u_sum.mul_coeff(&fl, Weight::ZERO);
    let mut r_lambda = FormValue::scalar(lay, one - fl.clone(), Weight::ZERO);
    if lambda != 0.0 {
        // dbar |f|^(2 lambda)_{E*} = lambda |f|^(2 lambda)_{E*} dbar log(|f|^2 / |zeta|^(2d))
        let mut terms: Vec<(u32, S)> = f_dfbar.into_iter().map(|(m, c)| (m, c / norm2.clone())).collect();
        for k in 0..n {
            terms.push((lay.dzb(k), (pair.zeta[k].clone() / zeta2.clone()).scale(C64::new(-(d as f64), 0.0))));
        }
        let dlog = FormValue::from_terms(lay, Weight::ZERO, terms);
        let dfl = dlog.mul_coeff(&fl.scale(C64::new(lambda, 0.0)), Weight::ZERO);
        r_lambda = r_lambda.add(&dfl.wedge(&u_sum));
    }
    Ok(KoszulForms { sigma, u, u_lambda, r_lambda })
}

pub fn eval_koszul(f: &SectionTuple, zeta: &ChartPoint, lambda: f64) -> Result<KoszulForms<C64>, KernelError> {
    let pair = Pair::<C64>::new(zeta.coords(), zeta.coords());
    koszul_forms(f, &pair, Layout::new(pair.len(), f.m()), lambda)
}

/// `delta_h xi = sum_j h_j ^ (contraction of e_j in xi)`; each `h_j` has
/// record `(0, d)`.
pub fn delta_h<S: Coeff>(xi: &FormValue<S>, hs: &[FormValue<S>], d: u32) -> FormValue<S> {
    let lay = xi.layout();
    let one = S::constant(C64::new(1.0, 0.0));
    let shift = Weight::new(-(d as i32), d as i32);
    let mut out = FormValue::zero(lay, xi.weight() + shift);
    for (j, h) in hs.iter().enumerate() {
        let c = xi.contract(&[(lay.e(j), one.clone())], Weight::ZERO - frame_weight(d));
        if !c.is_zero() {
            out = out.add(&h.wedge(&c));
        }
    }
    out
}

/// `(delta_h)_k = delta_h^k / k!`.
pub fn delta_h_power<S: Coeff>(xi: &FormValue<S>, hs: &[FormValue<S>], d: u32, k: usize) -> FormValue<S> {
    let mut out = xi.clone();
    for i in 1..=k {
        out = delta_h(&out, hs, d).scale(C64::new(1.0 / i as f64, 0.0));
    }
    out
}

/// Contraction of the frame elements with the values `f_j`; `record` is the
/// record of each value (`(d, 0)` at `zeta`, `(0, d)` at `z`).
pub fn delta_f<S: Coeff>(xi: &FormValue<S>, values: &[C64], d: u32, record: Weight) -> FormValue<S> {
    let lay = xi.layout();
    let v: Vec<(u32, S)> = values.iter().enumerate().map(|(j, c)| (lay.e(j), S::constant(*c))).collect();
    xi.contract(&v, record - frame_weight(d))
}

/// `e_{j_1} ^ ... ^ e_{j_k}`.
pub fn frame_monomial<S: Coeff>(lay: Layout, frames: &[usize], d: u32) -> FormValue<S> {
    let one = S::constant(C64::new(1.0, 0.0));
    let mut out = FormValue::scalar(lay, one.clone(), Weight::ZERO);
    for &j in frames {
        out = out.wedge(&FormValue::monomial(lay, lay.e(j), one.clone(), frame_weight(d)));
    }
    out
}

/// `(H^f_kappa)^l_k xi = alpha^(kappa - dk) ^ (delta_h)_{k-l} xi` for `xi` of frame degree `k`.
pub fn hefer_koszul_apply<S: Coeff>(
    xi: &FormValue<S>,
    hs: &[FormValue<S>],
    alpha_pows: &[FormValue<S>],
    d: u32,
    k: usize,
    ell: usize,
    kappa: u32,
) -> Result<FormValue<S>, KernelError> {
    let dk = d as usize * k;
    if (kappa as usize) < dk {
        return Err(KernelError::InvalidInput(format!("kappa = {kappa} < dk = {dk}")));
    }
    if ell > k {
        return Ok(FormValue::zero(xi.layout(), xi.weight()));
    }
    let p = kappa as usize - dk;
    if p >= alpha_pows.len() {
        return Err(KernelError::InvalidInput(format!("alpha power {p} not precomputed")));
    }
    Ok(alpha_pows[p].wedge(&delta_h_power(xi, hs, d, k - ell)))
}

/// Numeric `(H^f_kappa)^l_k` applied to `e_{j_1} ^ ... ^ e_{j_k}`.
#[allow(clippy::too_many_arguments)]
pub fn eval_hefer_koszul(
    f: &SectionTuple,
    sign: HeferSign,
    k: usize,
    ell: usize,
    kappa: u32,
    z: &ChartPoint,
    zeta: &ChartPoint,
    frames: &[usize],
) -> Result<FormValue, KernelError> {
    if frames.len() != k || frames.iter().any(|&j| j >= f.m()) {
        return Err(KernelError::InvalidInput(format!("{frames:?} is not a frame monomial of degree {k}")));
    }
    let pair = Pair::<C64>::new(z.coords(), zeta.coords());
    let lay = Layout::new(pair.len(), f.m());
    let ctx = TauContext::new(&pair, lay, kappa.max(f.degree()));
    let hs: Vec<FormValue> = f.hefer(sign)?.iter().map(|h| tau_star(h, &pair, &ctx)).collect();
    let xi = frame_monomial(lay, frames, f.degree());
    hefer_koszul_apply(&xi, &hs, &ctx.alpha_pows, f.degree(), k, ell, kappa)
}

/// `nabla_eta` of a jet-valued form.
pub fn nabla_eta(form: &FormValue<Jet>, pair: &Pair<Jet>) -> FormValue<C64> {
    crate::weights::delta_eta(form, pair).values().sub(&form.dbar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use polydiv_core::{parse_poly, Ring};

    fn tuple(vars: usize, polys: &[&str]) -> SectionTuple {
        let r = Ring::grevlex((0..vars).map(|i| format!("x{i}")));
        SectionTuple::new(&polys.iter().map(|p| parse_poly(p, &r).unwrap()).collect::<Vec<_>>()).unwrap()
    }

    fn pt(c: &[(f64, f64)]) -> ChartPoint {
        ChartPoint::new(c.iter().map(|&(a, b)| C64::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn single_function_gives_inverse() {
        let f = tuple(2, &["x0 + 2*x1"]);
        let zeta = pt(&[(1.0, 0.0), (0.3, 0.4)]);
        let k = eval_koszul(&f, &zeta, 0.0).unwrap();
        assert_eq!(k.u.len(), 1);
        let fv = C64::new(1.6, 0.8);
        let lay = k.u[0].layout();
        let c = *k.u[0].coeff(lay.e(0)).unwrap();
        assert!((c * fv - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(k.r_lambda.is_zero());
    }

    #[test]
    fn sigma_contracts_to_one() {
        let f = tuple(3, &["x0^2 - x1*x2", "x1^2 + x0*x2", "x2^2"]);
        let zeta = pt(&[(0.2, 0.1), (1.0, 0.0), (-0.4, 0.3)]);
        let k = eval_koszul(&f, &zeta, 0.0).unwrap();
        let fv = f.eval(zeta.coords());
        let one = delta_f(&k.sigma, &fv, 2, Weight::new(2, 0));
        assert!((one.coeff(0).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(k.u.len(), 3);
        for (i, uk) in k.u.iter().enumerate() {
            for (m, _) in uk.terms() {
                let (p, q, r) = uk.layout().degrees(*m);
                assert_eq!((p, q, r), (0, i as u32, i as u32 + 1));
            }
        }
    }

    #[test]
    fn r_scalar_term_vanishes_where_f_has_unit_norm() {
        let f = tuple(2, &["x0", "x1"]);
        let zeta = pt(&[(1.0, 0.0), (0.5, -0.2)]);
        let k = eval_koszul(&f, &zeta, 0.7).unwrap();
        assert!(k.r_lambda.coeff(0).map_or(0.0, |c| c.norm()) < 1e-15);
    }

    #[test]
    fn r_vanishes_as_lambda_goes_to_zero() {
        let f = tuple(2, &["x0^2 + x1^2", "x0*x1"]);
        let zeta = pt(&[(1.0, 0.0), (0.5, -0.2)]);
        let mut last = f64::INFINITY;
        for lambda in [1e-2, 1e-4, 1e-6] {
            let r = eval_koszul(&f, &zeta, lambda).unwrap().r_lambda.max_abs();
            assert!(r < last);
            last = r;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn common_zero_is_rejected() {
        let f = tuple(3, &["x1", "x2"]);
        let zeta = pt(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(eval_koszul(&f, &zeta, 0.0), Err(KernelError::CommonZero(_))));
    }

    #[test]
    fn hefer_koszul_identity_and_antisymmetry() {
        let f = tuple(3, &["x0 - x1", "x2 + 2*x0"]);
        let z = pt(&[(1.0, 0.0), (0.2, 0.2), (0.1, -0.3)]);
        let zeta = pt(&[(0.3, 0.0), (1.0, 0.0), (0.5, 0.5)]);
        let id = eval_hefer_koszul(&f, HeferSign::ZMinusW, 2, 2, 3, &z, &zeta, &[0, 1]).unwrap();
        let a = crate::weights::eval_alpha(&z, &zeta);
        let lay = id.layout();
        assert!((id.coeff(lay.e(0) | lay.e(1)).unwrap() - a.coeff(0).unwrap()).norm() < 1e-15);
        let x = eval_hefer_koszul(&f, HeferSign::ZMinusW, 2, 0, 3, &z, &zeta, &[0, 1]).unwrap();
        let y = eval_hefer_koszul(&f, HeferSign::ZMinusW, 2, 0, 3, &z, &zeta, &[1, 0]).unwrap();
        assert!(x.add(&y).max_abs() < 1e-15);
        assert!(x.max_abs() > 1e-3);
        assert!(eval_hefer_koszul(&f, HeferSign::ZMinusW, 2, 0, 1, &z, &zeta, &[0, 1]).is_err());
    }

    #[test]
    fn single_contraction_wedges_h() {
        let f = tuple(2, &["x0*x1"]);
        let z = pt(&[(1.0, 0.0), (0.2, 0.2)]);
        let zeta = pt(&[(0.3, 0.0), (1.0, 0.0)]);
        let out = eval_hefer_koszul(&f, HeferSign::ZMinusW, 1, 0, 2, &z, &zeta, &[0]).unwrap();
        let h = crate::hefer::tau_substitute(&f.hefer(HeferSign::ZMinusW).unwrap()[0], &z, &zeta);
        assert_eq!(out.terms().len(), h.terms().len());
        for ((m1, c1), (m2, c2)) in out.terms().iter().zip(h.terms()) {
            assert_eq!(m1, m2);
            assert!((c1 - c2).norm() < 1e-15);
        }
    }

    /// `nabla_eta H^l_k = H^l_{k-1} delta_{f(zeta)} - delta_{f(z)} H^{l+1}_k`
    /// on every frame monomial.
    #[test]
    fn hefer_morphism_relation() {
        let f = tuple(3, &["x0^2 - x1*x2", "x1^2 + 3*x0*x2", "x2^2 - x0*x1"]);
        let d = 2;
        let kappa = 7;
        let z = [C64::new(0.4, 0.1), C64::new(1.0, 0.0), C64::new(-0.3, 0.6)];
        let zeta = [C64::new(1.0, 0.0), C64::new(0.2, -0.5), C64::new(0.7, 0.2)];
        let pair = Pair::<Jet>::new(&z, &zeta);
        let lay = Layout::new(3, 3);
        let ctx = TauContext::new(&pair, lay, kappa);
        let hs: Vec<FormValue<Jet>> =
            f.hefer(HeferSign::ZMinusW).unwrap().iter().map(|h| tau_star(h, &pair, &ctx)).collect();
        let fz = f.eval(&z);
        let fzeta = f.eval(&zeta);
        let pows = &ctx.alpha_pows;
        let monos: Vec<Vec<usize>> = vec![vec![0], vec![2], vec![0, 1], vec![1, 2], vec![0, 1, 2]];
        for frames in monos {
            let k = frames.len();
            let xi = frame_monomial::<Jet>(lay, &frames, d);
            for ell in 0..k {
                let lhs = nabla_eta(&hefer_koszul_apply(&xi, &hs, pows, d, k, ell, kappa).unwrap(), &pair);
                let contracted = delta_f(&xi, &fzeta, d, Weight::new(d as i32, 0));
                let first = hefer_koszul_apply(&contracted, &hs, pows, d, k - 1, ell, kappa).unwrap().values();
                let inner = hefer_koszul_apply(&xi, &hs, pows, d, k, ell + 1, kappa).unwrap();
                let second = delta_f(&inner, &fz, d, Weight::new(0, d as i32)).values();
                let rhs = first.sub(&second);
                assert!(lhs.distance(&rhs) < 1e-12, "k = {k}, l = {ell}");
                // Three projective (1,0)-forms on P^2 wedge to zero.
                if k - ell < 3 {
                    assert!(lhs.max_abs() > 1e-6, "k = {k}, l = {ell}");
                }
            }
        }
    }
}
