//! Buchberger's algorithm with sugar pair selection and both Buchberger
//! criteria, plus multivariate normal forms.

use std::sync::Arc;

use crate::error::PolyError;
use crate::poly::{same_ring, Monomial, MonomialOrder, RatPoly, Ring};

/// Reduced, monic Gröbner basis of a polynomial ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    generators: Vec<RatPoly>,
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Computes the reduced Gröbner basis of `ideal` with respect to `order`.
///
/// The returned basis lives in `ring` re-ordered by `order`.
pub fn groebner_basis(ring: &Arc<Ring>, ideal: &[RatPoly], order: MonomialOrder) -> Result<GroebnerBasis, PolyError> {
    let gb_ring = if ring.order() == order { ring.clone() } else { ring.with_order(order) };
    let mut polys = Vec::with_capacity(ideal.len());
    for p in ideal {
        if p.ring().vars() != ring.vars() {
            return Err(PolyError::RingMismatch);
        }
        if !p.is_zero() {
            polys.push(p.with_ring_order(&gb_ring).make_monic());
        }
    }
    Ok(GroebnerBasis { generators: buchberger(&gb_ring, polys), ring: gb_ring })
}

fn reduce_full(p: &RatPoly, basis: &[RatPoly]) -> RatPoly {
    let ring = p.ring().clone();
    let mut rest = p.clone();
    let mut remainder = Vec::new();
    while let Some((m, c)) = rest.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        let divisor = basis.iter().find_map(|g| {
            let lm = g.leading_monomial()?;
            lm.quotient_of(&m).map(|q| (g, q))
        });
        match divisor {
            Some((g, q)) => {
                let factor = &c / g.leading_coeff().expect("nonzero basis element");
                rest = &rest - &g.mul_term(&q, &factor);
            }
            None => {
                remainder.push((m.clone(), c));
                rest = &rest - &RatPoly::monomial(&ring, m, remainder.last().unwrap().1.clone());
            }
        }
    }
    RatPoly::from_terms(&ring, remainder)
}

fn s_polynomial(f: &RatPoly, g: &RatPoly, lcm: &Monomial) -> RatPoly {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let a = fm.quotient_of(lcm).expect("lcm divisible");
    let b = gm.quotient_of(lcm).expect("lcm divisible");
    &f.mul_term(&a, &fc.recip()) - &g.mul_term(&b, &gc.recip())
}

struct State {
    basis: Vec<RatPoly>,
    sugar: Vec<u32>,
    pairs: Vec<Pair>,
    // done[i][j]: pair (i, j) already treated or discarded
    done: Vec<Vec<bool>>,
}

impl State {
    fn add(&mut self, p: RatPoly, s: u32) {
        let j = self.basis.len();
        let lm = p.leading_monomial().expect("nonzero").clone();
        for (i, g) in self.basis.iter().enumerate() {
            let gl = g.leading_monomial().expect("nonzero");
            let lcm = gl.lcm(&lm);
            let ps = (self.sugar[i] + lcm.degree() - gl.degree()).max(s + lcm.degree() - lm.degree());
            self.pairs.push(Pair { i, j, lcm, sugar: ps });
        }
        for row in self.done.iter_mut() {
            row.push(false);
        }
        self.done.push(vec![false; j + 1]);
        self.basis.push(p);
        self.sugar.push(s);
    }
}

fn buchberger(ring: &Arc<Ring>, input: Vec<RatPoly>) -> Vec<RatPoly> {
    let order = ring.order();
    let mut state = State { basis: Vec::new(), sugar: Vec::new(), pairs: Vec::new(), done: Vec::new() };

    for p in input {
        let r = reduce_full(&p, &state.basis);
        if !r.is_zero() {
            let s = p.total_degree().unwrap_or(0);
            state.add(r.make_monic(), s);
        }
    }

    while !state.pairs.is_empty() {
        let pairs = &state.pairs;
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                pairs[a]
                    .sugar
                    .cmp(&pairs[b].sugar)
                    .then_with(|| order.compare(&pairs[a].lcm, &pairs[b].lcm))
                    .then_with(|| (pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .expect("nonempty");
        let pair = state.pairs.swap_remove(best);
        let (i, j) = (pair.i, pair.j);
        state.done[i][j] = true;
        state.done[j][i] = true;

        let basis = &state.basis;
        let li = basis[i].leading_monomial().unwrap();
        let lj = basis[j].leading_monomial().unwrap();
        if li.is_coprime(lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&pair.lcm)
                && state.done[i][k]
                && state.done[j][k]
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], &pair.lcm);
        let r = reduce_full(&s, basis);
        if !r.is_zero() {
            state.add(r.make_monic(), pair.sugar);
        }
    }
    interreduce(state.basis)
}

fn interreduce(mut basis: Vec<RatPoly>) -> Vec<RatPoly> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<RatPoly> = Vec::new();
    basis.sort_by(|a, b| {
        let order = a.ring().order();
        order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });
    for p in basis {
        let lm = p.leading_monomial().unwrap();
        if !keep.iter().any(|g| g.leading_monomial().unwrap().divides(lm)) {
            keep.push(p);
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<RatPoly> = keep.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| g.clone()).collect();
        out.push(reduce_full(&keep[k], &others).make_monic());
    }
    out
}

impl GroebnerBasis {
    /// Basis of the zero ideal.
    pub fn zero_ideal(ring: &Arc<Ring>) -> Self {
        GroebnerBasis { ring: ring.clone(), generators: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    /// Generators sorted by increasing leading monomial.
    pub fn generators(&self) -> &[RatPoly] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant())
    }

    fn adopt(&self, p: &RatPoly) -> Result<RatPoly, PolyError> {
        if same_ring(p.ring(), &self.ring) {
            Ok(p.clone())
        } else if p.ring().vars() == self.ring.vars() {
            Ok(p.with_ring_order(&self.ring))
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    /// Fully reduced remainder of `p`; zero iff `p` lies in the ideal.
    pub fn normal_form(&self, p: &RatPoly) -> Result<RatPoly, PolyError> {
        Ok(reduce_full(&self.adopt(p)?, &self.generators))
    }

    pub fn contains(&self, p: &RatPoly) -> Result<bool, PolyError> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// True when every S-polynomial of a pair of generators reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let g = &self.generators;
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                let lcm = g[i].leading_monomial().unwrap().lcm(g[j].leading_monomial().unwrap());
                if !reduce_full(&s_polynomial(&g[i], &g[j], &lcm), g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the leading monomials contain a pure power of every variable,
    /// i.e. the quotient ring is finite dimensional.
    pub fn has_pure_power_of_every_variable(&self) -> bool {
        (0..self.ring.nvars()).all(|v| {
            self.generators.iter().any(|g| {
                let e = g.leading_monomial().unwrap().exponents();
                e[v] > 0 && e.iter().enumerate().all(|(k, &x)| k == v || x == 0)
            }) || self.is_unit()
        })
    }

    /// Standard monomials of the given degree (those outside the leading ideal).
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.generators.iter().any(|g| g.leading_monomial().unwrap().divides(m))
    }
}
