//! Floating-point images of exact polynomials for pointwise evaluation.

use num_traits::ToPrimitive;
use polydiv_core::RatPoly;

use crate::scalar::C64;

#[derive(Clone, Debug)]
pub struct CPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, C64)>,
}

pub(crate) fn rat_to_f64(c: &polydiv_core::Rat) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn monomial_value(exps: &[u32], x: &[C64]) -> C64 {
    exps.iter().zip(x).fold(C64::new(1.0, 0.0), |acc, (&e, &v)| if e == 0 { acc } else { acc * v.powu(e) })
}

impl CPoly {
    pub fn new(p: &RatPoly) -> Self {
        let terms = p.terms().iter().map(|(m, c)| (m.exponents().to_vec(), C64::new(rat_to_f64(c), 0.0))).collect();
        CPoly { nvars: p.ring().nvars(), terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms.iter().map(|(e, c)| c * monomial_value(e, x)).sum()
    }

    pub fn derivative(&self, var: usize) -> CPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (e2, c * e[var] as f64)
            })
            .collect();
        CPoly { nvars: self.nvars, terms }
    }

    pub fn gradient(&self) -> Vec<CPoly> {
        (0..self.nvars).map(|v| self.derivative(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use polydiv_core::{parse_poly, Ring};

    #[test]
    fn evaluates_and_differentiates() {
        let r = Ring::grevlex(["x", "y"]);
        let p = CPoly::new(&parse_poly("1/2*x^2*y - 3*y + 1", &r).unwrap());
        let pt = [C64::new(1.0, 1.0), C64::new(2.0, 0.0)];
        assert!((p.eval(&pt) - (C64::new(0.0, 2.0) - 5.0)).norm() < 1e-14);
        let dx = p.derivative(0);
        assert!((dx.eval(&pt) - C64::new(2.0, 2.0)).norm() < 1e-14);
    }
}
