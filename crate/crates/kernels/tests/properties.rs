use polydiv_core::poly::monomials_of_degree;
use polydiv_core::{parse_poly, rat, RatPoly, Ring};
use polydiv_kernels::cpoly::CPoly;
use polydiv_kernels::form::{FormValue, Layout, Weight};
use polydiv_kernels::hefer::{hefer_decompose, HeferSign};
use polydiv_kernels::hypersurface::{omega, structure_form_sides, Hypersurface};
use polydiv_kernels::point::Pair;
use polydiv_kernels::represent::{division_eval_hypersurface, represent_hypersurface, represent_pn, CurveParam};
use polydiv_kernels::weights::{alpha, b_form, delta_eta, gamma, TWO_PI_I};
use polydiv_kernels::{ChartPoint, QuadratureConfig, C64};
use proptest::prelude::*;

fn ring(n: usize) -> std::sync::Arc<Ring> {
    Ring::grevlex((0..n).map(|i| format!("x{i}")))
}

fn form_from(n: usize, d: u32, coeffs: &[i64]) -> RatPoly {
    let r = ring(n);
    let monos = monomials_of_degree(n, d);
    RatPoly::from_terms(&r, monos.into_iter().zip(coeffs.iter()).map(|(m, &c)| (m, rat(c))))
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (-1.0f64..1.0, -1.0f64..1.0)
}

fn chart_point(v: &[(f64, f64)]) -> Option<ChartPoint> {
    ChartPoint::new(v.iter().map(|&(a, b)| C64::new(a, b)).collect()).ok()
}

fn on_conic(t: (f64, f64)) -> ChartPoint {
    let t = C64::new(t.0, t.1);
    ChartPoint::new(vec![C64::new(1.0, 0.0), t, t * t]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn hefer_identity_is_exact(n in 1usize..=4, d in 0u32..=5, coeffs in prop::collection::vec(-5i64..=5, 60)) {
        let p = form_from(n, d, &coeffs);
        for sign in [HeferSign::WMinusZ, HeferSign::ZMinusW] {
            let h = hefer_decompose(&p, sign).unwrap();
            prop_assert!(h.verify());
            for c in h.coeffs() {
                prop_assert!(c.is_zero() || c.total_degree() == Some(d - 1));
            }
        }
    }

    #[test]
    fn b_contracts_to_one(n in 1usize..=3, z in prop::collection::vec(point(), 4), w in prop::collection::vec(point(), 4)) {
        let (Some(z), Some(zeta)) = (chart_point(&z[..=n]), chart_point(&w[..=n])) else { return Ok(()) };
        let pair = Pair::<C64>::new(z.coords(), zeta.coords());
        if let Ok(b) = b_form(&pair, Layout::new(n + 1, 0)) {
            let one = delta_eta(&b, &pair);
            prop_assert!((one.coeff(0).copied().unwrap_or_default() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn wedge_records_add(z in prop::collection::vec(point(), 3), w in prop::collection::vec(point(), 3), k in 0u32..4) {
        let (Some(z), Some(zeta)) = (chart_point(&z), chart_point(&w)) else { return Ok(()) };
        let pair = Pair::<C64>::new(z.coords(), zeta.coords());
        let lay = Layout::new(3, 0);
        let a = alpha(&pair, lay);
        let g = gamma(&pair, lay);
        let prod = a.pow(k).wedge(&g[0]).wedge(&g[2]);
        prop_assert_eq!(prod.weight(), Weight::new(-(k as i32), k as i32 + 2));
    }

    #[test]
    fn structure_form_identity_on_the_conic(t in point()) {
        let x = Hypersurface::new(&parse_poly("x0*x2 - x1^2", &ring(3)).unwrap()).unwrap();
        let zeta = on_conic(t);
        let (lhs, rhs) = structure_form_sides(&x, &zeta).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-9);
        let om: FormValue = omega(zeta.coords(), Layout::new(3, 0)).scale(TWO_PI_I);
        prop_assert!(lhs.distance(&om) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn reproduction_on_the_line(d in 0u32..=3, coeffs in prop::collection::vec(-3i64..=3, 4), z in prop::collection::vec(point(), 2)) {
        let phi = form_from(2, d, &coeffs);
        let Some(z) = chart_point(&z) else { return Ok(()) };
        let cfg = QuadratureConfig { tol: 1e-10, ..Default::default() };
        let got = represent_pn(&phi, &z, &cfg).unwrap();
        let want = CPoly::new(&phi).eval(z.coords());
        prop_assert!((got.value[0] - want).norm() <= 10.0 * got.error.max(1e-12) + 1e-9);
    }

    #[test]
    fn reproduction_on_the_conic(d in 0u32..=2, coeffs in prop::collection::vec(-3i64..=3, 6), t in point()) {
        let phi = form_from(3, d, &coeffs);
        let a = parse_poly("x0*x2 - x1^2", &ring(3)).unwrap();
        let z = on_conic(t);
        let cfg = QuadratureConfig { tol: 1e-10, ..Default::default() };
        let got = represent_hypersurface(&phi, &a, &z, &CurveParam::conic(), &cfg).unwrap();
        let want = CPoly::new(&phi).eval(z.coords());
        prop_assert!((got.value[0] - want).norm() < 1e-7 * want.norm().max(1.0));
    }

    #[test]
    fn division_consistency_on_the_conic(t in point(), rho in 2u32..=3) {
        let r = ring(3);
        let f = vec![parse_poly("x0 + x1", &r).unwrap(), parse_poly("x2 - x1", &r).unwrap()];
        let phi = parse_poly("x0", &r).unwrap().pow(rho);
        let a = parse_poly("x0*x2 - x1^2", &r).unwrap();
        let z = on_conic(t);
        let cfg = QuadratureConfig { tol: 1e-10, ..Default::default() };
        let q = division_eval_hypersurface(&f, &phi, &a, &z, rho, &CurveParam::conic(), &cfg).unwrap();
        let fz: Vec<C64> = f.iter().map(|p| CPoly::new(p).eval(z.coords())).collect();
        let want = CPoly::new(&phi).eval(z.coords());
        let lhs = fz[0] * q.value[0] + fz[1] * q.value[1];
        prop_assert!((lhs - want).norm() < 1e-7 * want.norm().max(1.0));
    }
}

/// `q` is holomorphic in `z`: `dq/dz_bar` vanishes by central differences
/// along the conic parameter.
#[test]
fn division_quotient_is_holomorphic() {
    let r = ring(3);
    let f = vec![parse_poly("x0 + x1", &r).unwrap(), parse_poly("x2 - x1", &r).unwrap()];
    let phi = parse_poly("x0^2 + x1*x2", &r).unwrap();
    let a = parse_poly("x0*x2 - x1^2", &r).unwrap();
    let cfg = QuadratureConfig { tol: 1e-11, ..Default::default() };
    let q = |t: C64| {
        let z = ChartPoint::in_chart(vec![C64::new(1.0, 0.0), t, t * t], 0).unwrap();
        division_eval_hypersurface(&f, &phi, &a, &z, 2, &CurveParam::conic(), &cfg).unwrap().value
    };
    let h = 1e-4;
    for t in [C64::new(0.3, 0.4), C64::new(-0.8, 0.1)] {
        let (xp, xm) = (q(t + h), q(t - h));
        let (yp, ym) = (q(t + C64::new(0.0, h)), q(t - C64::new(0.0, h)));
        for j in 0..2 {
            let dbar = ((xp[j] - xm[j]) + C64::i() * (yp[j] - ym[j])) / (4.0 * h);
            let d = ((xp[j] - xm[j]) - C64::i() * (yp[j] - ym[j])) / (4.0 * h);
            assert!(dbar.norm() < 1e-5 * d.norm().max(1.0), "j = {j}: {dbar}");
        }
    }
}

#[test]
fn reproduction_on_the_plane() {
    let phi = parse_poly("x0^2 - x1*x2 + 2*x2^2", &ring(3)).unwrap();
    let z = ChartPoint::new(vec![C64::new(0.2, 0.3), C64::new(1.0, 0.0), C64::new(-0.4, 0.1)]).unwrap();
    let cfg = QuadratureConfig { depth: 3, tol: 1e-6, ..Default::default() };
    let got = represent_pn(&phi, &z, &cfg).unwrap();
    let want = CPoly::new(&phi).eval(z.coords());
    assert!((got.value[0] - want).norm() <= 10.0 * got.error.max(1e-12) + 1e-9, "{:?} vs {want}", got);
}
