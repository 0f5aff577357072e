//! Coefficient types for forms: plain complex values, and first-order jets
//! carrying the antiholomorphic derivatives `d/d(zeta_bar_k)` so that `dbar`
//! of an evaluated form is exact.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

/// Largest number of homogeneous coordinates a jet can differentiate in.
pub const MAX_COORDS: usize = 5;

pub trait Coeff:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + std::fmt::Debug
{
    fn constant(c: C64) -> Self;
    /// The function `zeta_bar_k`, taking the value `value` at the point.
    fn coordinate_bar(k: usize, value: C64) -> Self;
    /// An antiholomorphic function with the given value and gradient in `zeta_bar`.
    fn antiholomorphic(value: C64, grad: &[C64]) -> Self;
    fn value(&self) -> C64;
    fn is_zero(&self) -> bool;
    fn scale(&self, c: C64) -> Self;
    /// `self^p` for a real positive base.
    fn powf(&self, p: f64) -> Self;
}

impl Coeff for C64 {
    fn constant(c: C64) -> Self {
        c
    }

    fn coordinate_bar(_k: usize, value: C64) -> Self {
        value
    }

    fn antiholomorphic(value: C64, _grad: &[C64]) -> Self {
        value
    }

    fn value(&self) -> C64 {
        *self
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn scale(&self, c: C64) -> Self {
        self * c
    }

    fn powf(&self, p: f64) -> Self {
        C64::new(self.re.powf(p), 0.0)
    }
}

/// Value together with its gradient in `zeta_bar_0, ..., zeta_bar_N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: C64,
    pub d: [C64; MAX_COORDS],
}

impl Jet {
    pub fn new(v: C64, d: [C64; MAX_COORDS]) -> Self {
        Jet { v, d }
    }

    /// The coordinate function `zeta_bar_k` at the given value.
    pub fn zeta_bar(k: usize, value: C64) -> Self {
        let mut d = [C64::new(0.0, 0.0); MAX_COORDS];
        d[k] = C64::new(1.0, 0.0);
        Jet { v: value, d }
    }

    fn map2(self, o: Jet, v: C64, f: impl Fn(C64, C64) -> C64) -> Jet {
        let mut d = [C64::new(0.0, 0.0); MAX_COORDS];
        for k in 0..MAX_COORDS {
            d[k] = f(self.d[k], o.d[k]);
        }
        Jet { v, d }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        self.map2(o, self.v + o.v, |a, b| a + b)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self.map2(o, self.v - o.v, |a, b| a - b)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let (x, y) = (self.v, o.v);
        self.map2(o, x * y, |a, b| a * y + x * b)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let (x, y) = (self.v, o.v);
        let y2 = y * y;
        self.map2(o, x / y, |a, b| (a * y - x * b) / y2)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d: self.d.map(|c| -c) }
    }
}

impl Coeff for Jet {
    fn constant(c: C64) -> Self {
        Jet { v: c, d: [C64::new(0.0, 0.0); MAX_COORDS] }
    }

    fn coordinate_bar(k: usize, value: C64) -> Self {
        Jet::zeta_bar(k, value)
    }

    fn antiholomorphic(value: C64, grad: &[C64]) -> Self {
        let mut d = [C64::new(0.0, 0.0); MAX_COORDS];
        d[..grad.len()].copy_from_slice(grad);
        Jet { v: value, d }
    }

    fn value(&self) -> C64 {
        self.v
    }

    fn is_zero(&self) -> bool {
        Coeff::is_zero(&self.v) && self.d.iter().all(Coeff::is_zero)
    }

    fn scale(&self, c: C64) -> Self {
        Jet { v: self.v * c, d: self.d.map(|x| x * c) }
    }

    fn powf(&self, p: f64) -> Self {
        let x = self.v.re;
        let f = x.powf(p);
        let df = p * x.powf(p - 1.0);
        Jet { v: C64::new(f, 0.0), d: self.d.map(|c| c * df) }
    }
}
