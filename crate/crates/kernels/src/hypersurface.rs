//! Forms attached to a hypersurface `X = {a = 0}` in `P^{n+1}`: the volume
//! form `Omega = delta_zeta d zeta`, the contraction `delta_A`, the structure
//! form `omega' = delta_A Omega` and `Da = da - kappa0 (zeta_bar . d zeta / |zeta|^2) a`.

use polydiv_core::RatPoly;

use crate::cpoly::CPoly;
use crate::error::KernelError;
use crate::form::{FormValue, Layout, Weight};
use crate::point::{ChartPoint, Pair};
use crate::scalar::{Coeff, C64};
use crate::weights::TWO_PI_I;

/// `|da| / |zeta|^(kappa0 - 1)` below this marks a singular point.
pub const SINGULAR_THRESHOLD: f64 = 1e-10;
/// `|a| / |zeta|^kappa0` above this means the point is off `X`.
pub const ON_X_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Hypersurface {
    a: RatPoly,
    value: CPoly,
    grad: Vec<CPoly>,
    kappa0: u32,
}

impl Hypersurface {
    pub fn new(a: &RatPoly) -> Result<Self, KernelError> {
        if !a.is_homogeneous() || a.is_zero() {
            return Err(KernelError::InvalidInput(format!("{a} is not a nonzero form")));
        }
        let kappa0 = a.total_degree().unwrap_or(0);
        if kappa0 == 0 {
            return Err(KernelError::InvalidInput("constant hypersurface equation".into()));
        }
        if a.ring().nvars() < 3 {
            return Err(KernelError::InvalidInput("hypersurfaces need n >= 1, i.e. at least 3 coordinates".into()));
        }
        let value = CPoly::new(a);
        let grad = value.gradient();
        Ok(Hypersurface { a: a.clone(), value, grad, kappa0 })
    }

    pub fn equation(&self) -> &RatPoly {
        &self.a
    }

    pub fn kappa0(&self) -> u32 {
        self.kappa0
    }

    /// `n + 2`.
    pub fn coords(&self) -> usize {
        self.grad.len()
    }

    pub fn eval(&self, zeta: &[C64]) -> C64 {
        self.value.eval(zeta)
    }

    pub fn gradient(&self, zeta: &[C64]) -> Vec<C64> {
        self.grad.iter().map(|p| p.eval(zeta)).collect()
    }

    /// Relative size of `a(zeta)`.
    pub fn residual(&self, zeta: &[C64]) -> f64 {
        let n: f64 = zeta.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        self.eval(zeta).norm() / n.powi(self.kappa0 as i32)
    }

    /// The vector `2 pi i / |da|^2 sum conj(d_j a) d/d zeta_j`.
    pub fn delta_a_vector<S: Coeff>(&self, zeta: &[C64], lay: Layout) -> Result<Vec<(u32, S)>, KernelError> {
        let g = self.gradient(zeta);
        let g2: f64 = g.iter().map(|c| c.norm_sqr()).sum();
        let n2: f64 = zeta.iter().map(|c| c.norm_sqr()).sum();
        let rel = g2.sqrt() / n2.sqrt().powi(self.kappa0 as i32 - 1);
        if rel < SINGULAR_THRESHOLD {
            return Err(KernelError::SingularPoint(rel));
        }
        Ok(g.iter().enumerate().map(|(j, c)| (lay.dz(j), S::constant(TWO_PI_I * c.conj() / g2))).collect())
    }

    /// Record change of `delta_A`.
    pub fn delta_a_shift(&self) -> Weight {
        Weight::new(1 - self.kappa0 as i32, -1)
    }

    pub fn delta_a<S: Coeff>(&self, xi: &FormValue<S>, zeta: &[C64]) -> Result<FormValue<S>, KernelError> {
        let v = self.delta_a_vector(zeta, xi.layout())?;
        Ok(xi.contract(&v, self.delta_a_shift()))
    }

    /// `Da` at `pair.zeta`.
    pub fn big_da<S: Coeff>(&self, pair: &Pair<S>, lay: Layout) -> FormValue<S> {
        let zeta = pair.zeta_values();
        let av = self.eval(&zeta);
        let g = self.gradient(&zeta);
        let n2 = pair.zeta_norm2();
        let k = C64::new(self.kappa0 as f64, 0.0);
        let terms = (0..zeta.len()).map(|j| {
            let corr = (pair.zeta_bar[j].clone() / n2.clone()).scale(k * av);
            (lay.dz(j), S::constant(g[j]) - corr)
        });
        FormValue::from_terms(lay, Weight::new(self.kappa0 as i32 - 1, 1), terms)
    }
}

/// `Omega = delta_zeta (d zeta_0 ^ ... ^ d zeta_N)`.
pub fn omega<S: Coeff>(zeta: &[C64], lay: Layout) -> FormValue<S> {
    let n = zeta.len();
    let vol = FormValue::monomial(lay, lay.hol_mask(), S::constant(C64::new(1.0, 0.0)), Weight::new(0, n as i32));
    let euler: Vec<(u32, S)> = zeta.iter().enumerate().map(|(j, c)| (lay.dz(j), S::constant(*c))).collect();
    vol.contract(&euler, Weight::new(1, -1))
}

/// `omega' = delta_A Omega` at a point of `X`.
pub fn eval_omega_prime(x: &Hypersurface, zeta: &ChartPoint) -> Result<FormValue, KernelError> {
    if zeta.coords().len() != x.coords() {
        return Err(KernelError::InvalidPoint("point and hypersurface in different spaces".into()));
    }
    let r = x.residual(zeta.coords());
    if r > ON_X_TOLERANCE {
        return Err(KernelError::InvalidPoint(format!("not on X: |a| = {r:e}")));
    }
    let lay = Layout::new(x.coords(), 0);
    x.delta_a(&omega::<C64>(zeta.coords(), lay), zeta.coords())
}

/// `Da ^ omega'` and `2 pi i (1 - kappa0 conj(da) . zeta_bar a / (|da|^2 |zeta|^2)) Omega`
/// at any smooth point of the level sets of `a`.
pub fn structure_form_sides(x: &Hypersurface, zeta: &ChartPoint) -> Result<(FormValue, FormValue), KernelError> {
    let lay = Layout::new(x.coords(), 0);
    let z = zeta.coords();
    let pair = Pair::<C64>::new(z, z);
    let om = omega::<C64>(z, lay);
    let lhs = x.big_da(&pair, lay).wedge(&x.delta_a(&om, z)?);
    let g = x.gradient(z);
    let g2: f64 = g.iter().map(|c| c.norm_sqr()).sum();
    let n2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let gz: C64 = g.iter().zip(z).map(|(a, b)| a.conj() * b.conj()).sum();
    let factor = C64::new(1.0, 0.0) - gz * x.eval(z) * (x.kappa0() as f64) / (g2 * n2);
    Ok((lhs, om.scale(TWO_PI_I * factor)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use polydiv_core::{parse_poly, Ring};

    fn conic() -> Hypersurface {
        let r = Ring::grevlex(["x0", "x1", "x2"]);
        Hypersurface::new(&parse_poly("x0*x2 - x1^2", &r).unwrap()).unwrap()
    }

    fn on_conic(t: C64) -> ChartPoint {
        ChartPoint::in_chart(vec![C64::new(1.0, 0.0), t, t * t], 0).unwrap()
    }

    #[test]
    fn structure_form_identity_on_and_off_x() {
        let x = conic();
        for (i, t) in [C64::new(0.3, -0.2), C64::new(1.7, 0.4), C64::new(-0.1, 2.0)].into_iter().enumerate() {
            let (l, r) = structure_form_sides(&x, &on_conic(t)).unwrap();
            assert!(l.distance(&r) < 1e-9);
            let om = omega::<C64>(on_conic(t).coords(), Layout::new(3, 0)).scale(TWO_PI_I);
            assert!(l.distance(&om) < 1e-9);
            let off = ChartPoint::new(vec![C64::new(1.0, 0.0), t, C64::new(i as f64, 1.0)]).unwrap();
            let (l, r) = structure_form_sides(&x, &off).unwrap();
            assert!(l.distance(&r) < 1e-9);
            assert!(r.distance(&omega::<C64>(off.coords(), Layout::new(3, 0)).scale(TWO_PI_I)) > 1e-3);
        }
    }

    /// On `[1 : t : t^2]` the residue of `dx ^ dy / (y - x^2)` is `dx`, so the
    /// pullback of `omega'` is `-2 pi i dt`.
    #[test]
    fn conic_pullback_matches_residue() {
        let x = conic();
        let chart = Layout::new(1, 0);
        for t in [C64::new(0.0, 0.0), C64::new(0.5, 0.5), C64::new(-3.0, 1.0)] {
            let w = eval_omega_prime(&x, &on_conic(t)).unwrap();
            let jac = vec![vec![C64::new(0.0, 0.0)], vec![C64::new(1.0, 0.0)], vec![t * 2.0]];
            let p = w.pullback(chart, &jac);
            assert!((p.coeff(chart.dz(0)).unwrap() + TWO_PI_I).norm() < 1e-12);
        }
    }

    #[test]
    fn point_off_x_is_rejected() {
        let x = conic();
        let p = ChartPoint::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!(eval_omega_prime(&x, &p).is_err());
    }

    #[test]
    fn degenerate_inputs() {
        let r = Ring::grevlex(["x0", "x1"]);
        assert!(Hypersurface::new(&parse_poly("x0", &r).unwrap()).is_err());
        let r3 = Ring::grevlex(["x0", "x1", "x2"]);
        let cone = Hypersurface::new(&parse_poly("x1^2 - x2^2", &r3).unwrap()).unwrap();
        let vertex = ChartPoint::in_chart(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)], 0).unwrap();
        assert!(matches!(eval_omega_prime(&cone, &vertex), Err(KernelError::SingularPoint(_))));
    }

    #[test]
    fn omega_prime_record() {
        let x = conic();
        let w = eval_omega_prime(&x, &on_conic(C64::new(0.2, 0.0))).unwrap();
        assert_eq!(w.weight(), Weight::new(0, 1));
    }
}
