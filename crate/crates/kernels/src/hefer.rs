//! Hefer decompositions of homogeneous polynomials and their substitution
//! `tau*` (`w -> alpha zeta`, `d w_j -> gamma_j`).
//!
//! For a homogeneous `P` the coefficient of `d w_j` is the divided difference
//!
//! ```text
//! h_j = ±(1/2 pi i) (P(z_0..z_{j-1}, w_j..w_N) - P(z_0..z_j, w_{j+1}..w_N)) / (w_j - z_j)
//! ```
//!
//! which telescopes to `sum_j 2 pi i (w_j - z_j) h_j = ±(P(w) - P(z))`.

use std::sync::Arc;

use num_traits::One;
use polydiv_core::{Monomial, Rat, RatPoly, Ring};

use crate::cpoly::{monomial_value, rat_to_f64};
use crate::error::KernelError;
use crate::form::{FormValue, Layout, Weight};
use crate::point::{ChartPoint, Pair};
use crate::scalar::{Coeff, C64};
use crate::weights::{alpha, alpha_powers, gamma, TWO_PI_I};

/// Which difference the contraction `delta_{w-z} h` reproduces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeferSign {
    /// `delta_{w-z} h = P(w) - P(z)`, used for the tuple `f`.
    WMinusZ,
    /// `delta_{w-z} h = P(z) - P(w)`, used for the hypersurface equation.
    ZMinusW,
}

/// One term `c w^beta z^delta` of a coefficient in floating point.
#[derive(Clone, Debug)]
struct WzTerm {
    w: Vec<u32>,
    z: Vec<u32>,
    c: f64,
}

#[derive(Clone, Debug)]
pub struct HeferData {
    source: RatPoly,
    wz_ring: Arc<Ring>,
    coeffs: Vec<RatPoly>,
    sign: HeferSign,
    numeric: Vec<Vec<WzTerm>>,
}

/// `C[w_0..w_N, z_0..z_N]`.
fn wz_ring(n: usize) -> Arc<Ring> {
    Ring::grevlex((0..n).map(|i| format!("w{i}")).chain((0..n).map(|i| format!("z{i}"))))
}

fn split(m: &Monomial, n: usize) -> (Vec<u32>, Vec<u32>) {
    let e = m.exponents();
    (e[..n].to_vec(), e[n..].to_vec())
}

fn compile(p: &RatPoly, n: usize) -> Vec<WzTerm> {
    p.terms()
        .iter()
        .map(|(m, c)| {
            let (w, z) = split(m, n);
            WzTerm { w, z, c: rat_to_f64(c) }
        })
        .collect()
}

pub fn hefer_decompose(p: &RatPoly, sign: HeferSign) -> Result<HeferData, KernelError> {
    if !p.is_homogeneous() {
        return Err(KernelError::InvalidInput(format!("{p} is not homogeneous")));
    }
    let n = p.ring().nvars();
    let ring = wz_ring(n);
    let factor = match sign {
        HeferSign::WMinusZ => Rat::one(),
        HeferSign::ZMinusW => -Rat::one(),
    };
    let mut coeffs = Vec::with_capacity(n);
    for j in 0..n {
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let e = m.exponents();
            if e[j] == 0 {
                continue;
            }
            // z_{<j} and w_{>j} are fixed; (w_j^e - z_j^e)/(w_j - z_j) expands.
            for i in 0..e[j] {
                let mut x = vec![0u32; 2 * n];
                for (k, &ek) in e.iter().enumerate() {
                    match k.cmp(&j) {
                        std::cmp::Ordering::Less => x[n + k] = ek,
                        std::cmp::Ordering::Greater => x[k] = ek,
                        std::cmp::Ordering::Equal => {
                            x[k] = i;
                            x[n + k] = e[j] - 1 - i;
                        }
                    }
                }
                terms.push((Monomial::from_exponents(x), c * &factor));
            }
        }
        coeffs.push(RatPoly::from_terms(&ring, terms));
    }
    let numeric = coeffs.iter().map(|h| compile(h, n)).collect();
    Ok(HeferData { source: p.clone(), wz_ring: ring, coeffs, sign, numeric })
}

impl HeferData {
    pub fn source(&self) -> &RatPoly {
        &self.source
    }

    pub fn sign(&self) -> HeferSign {
        self.sign
    }

    pub fn wz_ring(&self) -> &Arc<Ring> {
        &self.wz_ring
    }

    /// `2 pi i h_j`: the coefficient of `d w_j` without the `1/(2 pi i)`.
    pub fn coeffs(&self) -> &[RatPoly] {
        &self.coeffs
    }

    /// `P(w)` or `P(z)` inside `C[w, z]`.
    fn embed(&self, z_side: bool) -> RatPoly {
        let n = self.source.ring().nvars();
        let map: Vec<usize> = (0..n).map(|i| if z_side { n + i } else { i }).collect();
        self.source.change_ring(&self.wz_ring, &map)
    }

    /// The difference the contraction must reproduce.
    pub fn target(&self) -> RatPoly {
        let d = &self.embed(false) - &self.embed(true);
        match self.sign {
            HeferSign::WMinusZ => d,
            HeferSign::ZMinusW => -&d,
        }
    }

    /// `delta_{w-z} h = sum_j 2 pi i (w_j - z_j) h_j`, computed from the coefficients.
    pub fn contraction(&self) -> RatPoly {
        let n = self.source.ring().nvars();
        let mut out = RatPoly::zero(&self.wz_ring);
        for (j, h) in self.coeffs.iter().enumerate() {
            let diff = &RatPoly::var(&self.wz_ring, j) - &RatPoly::var(&self.wz_ring, n + j);
            out = &out + &(&diff * h);
        }
        out
    }

    /// Exact check of the decomposition identity.
    pub fn verify(&self) -> bool {
        self.contraction() == self.target()
    }
}

/// `c(z) alpha^p zeta^beta` summed over the terms of a polynomial in `(w, z)`
/// after `w -> alpha zeta`. The result has record `(0, deg)`.
fn substitute<S: Coeff>(terms: &[WzTerm], pair: &Pair<S>, alpha_pows: &[FormValue<S>], lay: Layout) -> FormValue<S> {
    let zeta = pair.zeta_values();
    let mut by_power: Vec<C64> = vec![C64::new(0.0, 0.0); alpha_pows.len()];
    let mut deg = None;
    for t in terms {
        let p: u32 = t.w.iter().sum();
        let total = p + t.z.iter().sum::<u32>();
        deg.get_or_insert(total);
        by_power[p as usize] += monomial_value(&t.w, &zeta) * monomial_value(&t.z, &pair.z) * t.c;
    }
    let Some(deg) = deg else {
        return FormValue::zero(lay, Weight::ZERO);
    };
    let mut out = FormValue::zero(lay, Weight::new(0, deg as i32));
    for (p, v) in by_power.into_iter().enumerate() {
        if v != C64::new(0.0, 0.0) {
            out = out.add(&alpha_pows[p].mul_coeff(&S::constant(v), Weight::new(p as i32, deg as i32 - p as i32)));
        }
    }
    out
}

/// Precomputed pointwise data shared by all substitutions at one pair.
pub struct TauContext<S> {
    pub lay: Layout,
    pub alpha_pows: Vec<FormValue<S>>,
    pub gamma: Vec<FormValue<S>>,
}

impl<S: Coeff> TauContext<S> {
    pub fn new(pair: &Pair<S>, lay: Layout, max_power: u32) -> Self {
        let a = alpha(pair, lay);
        TauContext { lay, alpha_pows: alpha_powers(&a, max_power), gamma: gamma(pair, lay) }
    }
}

/// `tau* h` for every coefficient of `h`, summed: `sum_j h_j(alpha zeta, z) gamma_j / (2 pi i)`.
/// The result has record `(0, deg P)`.
///
/// Since `nabla_eta gamma_j = 2 pi i (z_j - alpha zeta_j)`, substitution turns
/// the contraction with `w - z` into `nabla_eta` up to sign:
/// `nabla_eta tau* h = -tau*(delta_{w-z} h)`.
pub fn tau_star<S: Coeff>(h: &HeferData, pair: &Pair<S>, ctx: &TauContext<S>) -> FormValue<S> {
    let deg = h.source.total_degree().unwrap_or(0) as i32;
    let k = C64::new(1.0, 0.0) / TWO_PI_I;
    let mut out = FormValue::zero(ctx.lay, Weight::new(0, deg));
    for (j, terms) in h.numeric.iter().enumerate() {
        if terms.is_empty() {
            continue;
        }
        let c = substitute(terms, pair, &ctx.alpha_pows, ctx.lay);
        out = out.add(&c.wedge(&ctx.gamma[j]).scale(k));
    }
    out
}

/// `tau*` of a 0-form given as a polynomial in `(w, z)`.
pub fn tau_scalar<S: Coeff>(p: &RatPoly, pair: &Pair<S>, ctx: &TauContext<S>) -> FormValue<S> {
    let n = pair.len();
    substitute(&compile(p, n), pair, &ctx.alpha_pows, ctx.lay)
}

pub fn tau_substitute(h: &HeferData, z: &ChartPoint, zeta: &ChartPoint) -> FormValue {
    let pair = Pair::<C64>::new(z.coords(), zeta.coords());
    let deg = h.source.total_degree().unwrap_or(0);
    let ctx = TauContext::new(&pair, Layout::new(pair.len(), 0), deg);
    tau_star(h, &pair, &ctx)
}
