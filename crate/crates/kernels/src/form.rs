//! Pointwise values of differential forms with coefficients in an exterior
//! algebra over `d zeta_j`, `d zeta_bar_j` and the Koszul frame `e_i`.
//!
//! All generators are odd. A term is stored as a bit mask of generators in
//! canonical order (holomorphic differentials, then antiholomorphic ones,
//! then frame elements) together with its coefficient.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::scalar::{Coeff, Jet, C64};

/// Generator indexing for a space with `coords` coordinates and `frames`
/// Koszul frame elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub coords: usize,
    pub frames: usize,
}

impl Layout {
    pub fn new(coords: usize, frames: usize) -> Self {
        assert!(2 * coords + frames <= 32, "too many generators");
        Layout { coords, frames }
    }

    pub fn dz(&self, j: usize) -> u32 {
        debug_assert!(j < self.coords);
        1 << j
    }

    pub fn dzb(&self, j: usize) -> u32 {
        debug_assert!(j < self.coords);
        1 << (self.coords + j)
    }

    pub fn e(&self, i: usize) -> u32 {
        debug_assert!(i < self.frames);
        1 << (2 * self.coords + i)
    }

    pub fn hol_mask(&self) -> u32 {
        (1 << self.coords) - 1
    }

    pub fn antihol_mask(&self) -> u32 {
        self.hol_mask() << self.coords
    }

    pub fn frame_mask(&self) -> u32 {
        ((1u32 << self.frames) - 1) << (2 * self.coords)
    }

    /// `(p, q, r)`: numbers of holomorphic, antiholomorphic and frame factors.
    pub fn degrees(&self, mask: u32) -> (u32, u32, u32) {
        (
            (mask & self.hol_mask()).count_ones(),
            (mask & self.antihol_mask()).count_ones(),
            (mask & self.frame_mask()).count_ones(),
        )
    }

    /// `d t_1 ^ ... ^ d t_n ^ d t_bar_1 ^ ... ^ d t_bar_n`.
    pub fn top(&self) -> u32 {
        self.hol_mask() | self.antihol_mask()
    }
}

/// Line bundle record `(k_zeta, k_z)`: a component with `p` holomorphic
/// differentials is homogeneous of degree `k_zeta + p` in `zeta` and
/// `k_z - p` in `z`. Each frame element counts as its own weight, supplied
/// where frames are introduced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Weight {
    pub zeta: i32,
    pub z: i32,
}

impl Weight {
    pub const ZERO: Weight = Weight { zeta: 0, z: 0 };

    pub fn new(zeta: i32, z: i32) -> Self {
        Weight { zeta, z }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight { zeta: self.zeta + o.zeta, z: self.z + o.z }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight { zeta: self.zeta - o.zeta, z: self.z - o.z }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O_zeta({}) x O_z({})", self.zeta, self.z)
    }
}

/// Sign of moving the generators of `b` past those of `a` into sorted order.
fn merge_sign(a: u32, b: u32) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

/// Sign of removing generator `bit` from the front of `mask`.
fn position_sign(mask: u32, bit: u32) -> bool {
    (mask & (bit - 1)).count_ones() % 2 == 1
}

#[derive(Clone, Debug)]
pub struct FormValue<S = C64> {
    layout: Layout,
    weight: Weight,
    terms: Vec<(u32, S)>,
}

impl<S: Coeff> FormValue<S> {
    pub fn zero(layout: Layout, weight: Weight) -> Self {
        FormValue { layout, weight, terms: Vec::new() }
    }

    pub fn scalar(layout: Layout, c: S, weight: Weight) -> Self {
        Self::monomial(layout, 0, c, weight)
    }

    pub fn monomial(layout: Layout, mask: u32, c: S, weight: Weight) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(mask, c)] };
        FormValue { layout, weight, terms }
    }

    /// Collects terms, merging repeated masks.
    pub fn from_terms(layout: Layout, weight: Weight, terms: impl IntoIterator<Item = (u32, S)>) -> Self {
        let mut v: Vec<(u32, S)> = terms.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(u32, S)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.clone() + c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        FormValue { layout, weight, terms: out }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn with_weight(mut self, weight: Weight) -> Self {
        self.weight = weight;
        self
    }

    pub fn terms(&self) -> &[(u32, S)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: u32) -> Option<&S> {
        self.terms.binary_search_by_key(&mask, |t| t.0).ok().map(|i| &self.terms[i].1)
    }

    fn check_compatible(&self, o: &Self) {
        assert_eq!(self.layout, o.layout, "forms on different layouts");
        assert!(
            self.weight == o.weight || self.is_zero() || o.is_zero(),
            "adding forms of weights {} and {}",
            self.weight,
            o.weight
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let weight = if self.is_zero() { o.weight } else { self.weight };
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let a = self.terms.get(i);
            let b = o.terms.get(j);
            match (a, b) {
                (Some((ma, ca)), Some((mb, cb))) if ma == mb => {
                    let c = ca.clone() + cb.clone();
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((ma, ca)), Some((mb, _))) if ma < mb => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                (Some(_), Some((mb, cb))) => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                (Some((ma, ca)), None) => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                (None, Some((mb, cb))) => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        FormValue { layout: self.layout, weight, terms: out }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, k: C64) -> Self {
        self.map_coeffs(|c| c.scale(k))
    }

    /// Multiplies by a 0-form coefficient carrying weight `w`.
    pub fn mul_coeff(&self, c: &S, w: Weight) -> Self {
        let mut out = self.map_coeffs(|x| x.clone() * c.clone());
        out.weight = self.weight + w;
        out
    }

    fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).filter(|(_, c)| !c.is_zero()).collect();
        FormValue { layout: self.layout, weight: self.weight, terms }
    }

    pub fn wedge(&self, o: &Self) -> Self {
        assert_eq!(self.layout, o.layout, "forms on different layouts");
        let mut out = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                out.push((ma | mb, if merge_sign(*ma, *mb) { -c } else { c }));
            }
        }
        Self::from_terms(self.layout, self.weight + o.weight, out)
    }

    /// `self^k` under the wedge product; `k = 0` gives 1.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::scalar(self.layout, S::constant(C64::new(1.0, 0.0)), Weight::ZERO);
        for _ in 0..k {
            out = out.wedge(self);
        }
        out
    }

    /// Interior multiplication by the vector `sum_g v_g * (generator g)^*`,
    /// acting as an odd derivation. The record moves by `shift`.
    pub fn contract(&self, vector: &[(u32, S)], shift: Weight) -> Self {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            for (bit, v) in vector {
                if m & bit == 0 {
                    continue;
                }
                let t = c.clone() * v.clone();
                out.push((m ^ bit, if position_sign(*m, *bit) { -t } else { t }));
            }
        }
        Self::from_terms(self.layout, self.weight + shift, out)
    }

    /// Keeps the terms whose mask satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(u32) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| keep(*m)).cloned().collect();
        FormValue { layout: self.layout, weight: self.weight, terms }
    }

    /// Component of bidegree `(p, q)` in the differentials.
    pub fn component(&self, p: u32, q: u32) -> Self {
        let lay = self.layout;
        self.filter(|m| {
            let (a, b, _) = lay.degrees(m);
            a == p && b == q
        })
    }

    pub fn values(&self) -> FormValue<C64> {
        FormValue::from_terms(self.layout, self.weight, self.terms.iter().map(|(m, c)| (*m, c.value())))
    }
}

impl FormValue<C64> {
    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference; records must agree.
    pub fn distance(&self, o: &Self) -> f64 {
        self.sub(o).max_abs()
    }

    /// Pullback along a holomorphic map with Jacobian `jac` (`jac[j][a]` is
    /// the coefficient of `d t_a` in `d zeta_j`). Frame elements are kept.
    pub fn pullback(&self, target: Layout, jac: &[Vec<C64>]) -> FormValue<C64> {
        assert_eq!(jac.len(), self.layout.coords);
        assert_eq!(target.frames, self.layout.frames);
        let src = self.layout;
        let image = |g: u32| -> FormValue<C64> {
            let bit = g.trailing_zeros() as usize;
            let one = |mask: u32, c: C64| (mask, c);
            let terms: Vec<(u32, C64)> = if bit < src.coords {
                (0..target.coords).map(|a| one(target.dz(a), jac[bit][a])).collect()
            } else if bit < 2 * src.coords {
                (0..target.coords).map(|a| one(target.dzb(a), jac[bit - src.coords][a].conj())).collect()
            } else {
                vec![one(target.e(bit - 2 * src.coords), C64::new(1.0, 0.0))]
            };
            FormValue::from_terms(target, Weight::ZERO, terms)
        };
        let mut out = FormValue::zero(target, self.weight);
        for (m, c) in &self.terms {
            let mut acc = FormValue::scalar(target, *c, Weight::ZERO);
            let mut rest = *m;
            while rest != 0 && !acc.is_zero() {
                let g = rest & rest.wrapping_neg();
                acc = acc.wedge(&image(g));
                rest &= rest - 1;
            }
            out = out.add(&acc.with_weight(self.weight));
        }
        out
    }
}

impl FormValue<Jet> {
    /// Exact `dbar` from the stored antiholomorphic gradients.
    pub fn dbar(&self) -> FormValue<C64> {
        let lay = self.layout;
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            for k in 0..lay.coords {
                let bit = lay.dzb(k);
                if m & bit != 0 || c.d[k] == C64::new(0.0, 0.0) {
                    continue;
                }
                let t = c.d[k];
                out.push((m | bit, if position_sign(*m, bit) { -t } else { t }));
            }
        }
        FormValue::from_terms(lay, self.weight, out)
    }
}

impl<S: Coeff> Neg for &FormValue<S> {
    type Output = FormValue<S>;
    fn neg(self) -> FormValue<S> {
        FormValue::neg(self)
    }
}
