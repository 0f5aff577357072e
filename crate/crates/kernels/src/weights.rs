//! The weight `alpha`, the Bochner-Martinelli type forms `b` and `B`, and
//! the projective forms `gamma_j`, evaluated at a pair `(z, zeta)` of points
//! in homogeneous coordinates.

use std::f64::consts::PI;

use crate::error::KernelError;
use crate::form::{FormValue, Layout, Weight};
use crate::point::{ChartPoint, Pair};
use crate::scalar::{Coeff, Jet, C64};

pub const TWO_PI_I: C64 = C64::new(0.0, 2.0 * PI);

/// Record of `alpha`: `Hom(O_zeta(1), O_z(1))`.
pub const ALPHA_WEIGHT: Weight = Weight { zeta: -1, z: 1 };
/// Record of each `gamma_j`.
pub const GAMMA_WEIGHT: Weight = Weight { zeta: 0, z: 1 };

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `eta = 2 pi i sum z_i d/d zeta_i` as a contraction vector.
pub fn eta<S: Coeff>(pair: &Pair<S>, lay: Layout) -> Vec<(u32, S)> {
    pair.z.iter().enumerate().map(|(i, zi)| (lay.dz(i), S::constant(TWO_PI_I * zi))).collect()
}

pub fn delta_eta<S: Coeff>(form: &FormValue<S>, pair: &Pair<S>) -> FormValue<S> {
    form.contract(&eta(pair, form.layout()), Weight::ZERO)
}

/// `alpha = z . zeta_bar / |zeta|^2 - dbar(zeta_bar . d zeta / (2 pi i |zeta|^2))`.
pub fn alpha<S: Coeff>(pair: &Pair<S>, lay: Layout) -> FormValue<S> {
    let n2 = pair.zeta_norm2();
    let a00 = pair.z_dot_zeta_bar() / n2.clone();
    let n4 = n2.clone() * n2.clone();
    let k = c(1.0) / TWO_PI_I;
    let mut terms = vec![(0u32, a00)];
    for j in 0..pair.len() {
        for l in 0..pair.len() {
            let mut v = -(pair.zeta_bar[j].clone() * pair.zeta[l].clone()) / n4.clone();
            if j == l {
                v = v + S::constant(c(1.0)) / n2.clone();
            }
            terms.push((lay.dz(j) | lay.dzb(l), v.scale(k)));
        }
    }
    FormValue::from_terms(lay, ALPHA_WEIGHT, terms)
}

/// Powers `alpha^0, ..., alpha^max`.
pub fn alpha_powers<S: Coeff>(alpha: &FormValue<S>, max: u32) -> Vec<FormValue<S>> {
    let mut out = vec![FormValue::scalar(alpha.layout(), S::constant(c(1.0)), Weight::ZERO)];
    for k in 0..max as usize {
        let next = out[k].wedge(alpha);
        out.push(next);
    }
    out
}

/// The (1,0)-form `b` of minimal norm with `delta_eta b = 1`.
pub fn b_form<S: Coeff>(pair: &Pair<S>, lay: Layout) -> Result<FormValue<S>, KernelError> {
    let n2 = pair.zeta_norm2();
    let zb_dot_zeta: C64 = pair.z.iter().zip(pair.zeta_values()).map(|(z, w)| z.conj() * w).sum();
    let z2: f64 = pair.z.iter().map(|z| z.norm_sqr()).sum();
    let den = n2.scale(c(z2)) - pair.z_dot_zeta_bar().scale(zb_dot_zeta);
    if den.value().norm() <= 1e-13 * n2.value().norm() * z2 {
        return Err(KernelError::Pole);
    }
    let k = c(1.0) / TWO_PI_I;
    let terms = (0..pair.len()).map(|j| {
        let num = n2.scale(pair.z[j].conj()) - pair.zeta_bar[j].scale(zb_dot_zeta);
        (lay.dz(j), (num / den.clone()).scale(k))
    });
    Ok(FormValue::from_terms(lay, Weight::ZERO, terms))
}

/// `gamma_j = d zeta_j - (zeta_bar . d zeta / |zeta|^2) zeta_j` for every `j`.
pub fn gamma<S: Coeff>(pair: &Pair<S>, lay: Layout) -> Vec<FormValue<S>> {
    let n2 = pair.zeta_norm2();
    (0..pair.len())
        .map(|j| {
            let terms = (0..pair.len()).map(|k| {
                let mut v = -(pair.zeta_bar[k].clone() * pair.zeta[j].clone()) / n2.clone();
                if j == k {
                    v = v + S::constant(c(1.0));
                }
                (lay.dz(k), v)
            });
            FormValue::from_terms(lay, GAMMA_WEIGHT, terms)
        })
        .collect()
}

pub fn eval_alpha(z: &ChartPoint, zeta: &ChartPoint) -> FormValue {
    let pair = Pair::<C64>::new(z.coords(), zeta.coords());
    alpha(&pair, Layout::new(pair.len(), 0))
}

/// `b` and `B = b + b ^ dbar b + ... + b ^ (dbar b)^(N-1)`.
pub fn eval_b_big_b(z: &ChartPoint, zeta: &ChartPoint) -> Result<(FormValue, FormValue), KernelError> {
    let pair = Pair::<Jet>::new(z.coords(), zeta.coords());
    let lay = Layout::new(pair.len(), 0);
    let b = b_form(&pair, lay)?;
    let db = b.dbar();
    let bv = b.values();
    let mut big = FormValue::zero(lay, Weight::ZERO);
    let mut power = FormValue::scalar(lay, c(1.0), Weight::ZERO);
    for _ in 0..z.dim() {
        big = big.add(&bv.wedge(&power));
        power = power.wedge(&db);
    }
    Ok((bv, big))
}

pub fn eval_gamma(zeta: &ChartPoint) -> Vec<FormValue> {
    let pair = Pair::<C64>::new(zeta.coords(), zeta.coords());
    gamma(&pair, Layout::new(pair.len(), 0))
}
