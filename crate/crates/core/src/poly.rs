//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`RatPoly`] lives in a [`Ring`], an ordered list of variable names together
//! with a monomial order. Terms are kept sorted in decreasing order with respect
//! to that monomial order, so the leading term is always the first one, and no
//! zero coefficient is ever stored.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PolyError;

/// Exact rational coefficient.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    #[default]
    GrevLex,
    /// Graded lexicographic.
    DegLex,
    /// Pure lexicographic.
    Lex,
}

impl MonomialOrder {
    pub fn compare(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegLex => a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)),
            MonomialOrder::GrevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Exponent vector. Its length equals the number of variables of the ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// All monomials of total degree `d` in `nvars` variables, in lexicographic
/// order with the first variable most significant.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Monomial>) {
        if slots == 1 {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(prefix, left - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(&mut Vec::with_capacity(nvars), d, nvars, &mut out);
    out
}

/// All monomials of total degree at most `d`, by increasing degree.
pub fn monomials_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(nvars, k)).collect()
}

/// Ordered variable list plus the monomial order used for leading terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    order: MonomialOrder,
}

impl Ring {
    pub fn new<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        order: MonomialOrder,
    ) -> Result<Arc<Ring>, PolyError> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Arc::new(Ring { vars, order }))
    }

    /// Graded reverse lexicographic ring; panics on duplicate names.
    pub fn grevlex<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Arc<Ring> {
        Ring::new(vars, MonomialOrder::GrevLex).expect("duplicate variable name")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring { vars: self.vars.clone(), order })
    }

    /// Ring with `name` prepended as variable 0.
    pub fn prepend(&self, name: &str) -> Result<Arc<Ring>, PolyError> {
        Ring::new(std::iter::once(name.to_string()).chain(self.vars.iter().cloned()), self.order)
    }

    /// Ring without variable 0.
    pub fn drop_first(&self) -> Result<Arc<Ring>, PolyError> {
        if self.vars.is_empty() {
            return Err(PolyError::NoHomogenizingVariable);
        }
        Ring::new(self.vars[1..].iter().cloned(), self.order)
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Total degree with the convention `deg 0 = -inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RatPoly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Rat)>,
}

impl PartialEq for RatPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for RatPoly {}

impl RatPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        RatPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Rat) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rat::one())
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1), Rat::one())
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        RatPoly { ring: ring.clone(), terms }
    }

    /// Collects terms, merging equal monomials and dropping zeros.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: HashMap<Monomial, Rat>) -> Self {
        let mut terms: Vec<(Monomial, Rat)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order();
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        RatPoly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Degree {
        self.terms.iter().map(|(m, _)| m.degree()).max().map_or(Degree::NegInf, Degree::Finite)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.degree().finite()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_ring(&self, other: &RatPoly) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    fn merge(&self, other: &RatPoly, negate_other: bool) -> RatPoly {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take = if i == self.terms.len() {
                Ordering::Less
            } else if j == other.terms.len() {
                Ordering::Greater
            } else {
                order.compare(&self.terms[i].0, &other.terms[j].0)
            };
            match take {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate_other { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        RatPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn checked_add(&self, other: &RatPoly) -> Result<RatPoly, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &RatPoly) -> Result<RatPoly, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &RatPoly) -> Result<RatPoly, PolyError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RatPoly::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Rat> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                *acc.entry(m.mul(n)).or_insert_with(Rat::zero) += c * d;
            }
        }
        Ok(RatPoly::from_map(&self.ring, acc))
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero(&self.ring);
        }
        RatPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    /// `c * m * self`; multiplication by a monomial preserves term order.
    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero(&self.ring);
        }
        RatPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        let mut acc = RatPoly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> RatPoly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[var];
            if e == 0 {
                return None;
            }
            let mut ex = m.exponents().to_vec();
            ex[var] -= 1;
            Some((Monomial(ex), c * rat(e as i64)))
        });
        RatPoly::from_terms(&self.ring, terms)
    }

    pub fn make_monic(&self) -> RatPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.ring.nvars());
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Re-expresses the polynomial in `ring`, sending variable `i` to `var_map[i]`.
    pub fn change_ring(&self, ring: &Arc<Ring>, var_map: &[usize]) -> RatPoly {
        assert_eq!(var_map.len(), self.ring.nvars());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut ex = vec![0; ring.nvars()];
            for (i, &e) in m.exponents().iter().enumerate() {
                ex[var_map[i]] += e;
            }
            (Monomial(ex), c.clone())
        });
        RatPoly::from_terms(ring, terms)
    }

    /// Same terms, re-sorted for a ring that differs only in its monomial order.
    pub fn with_ring_order(&self, ring: &Arc<Ring>) -> RatPoly {
        assert_eq!(ring.vars(), self.ring.vars());
        RatPoly::from_terms(ring, self.terms.iter().cloned())
    }

    /// `z0^rho * P(z'/z0)` in `ring`, whose variable 0 is the homogenizing variable
    /// and whose remaining variables match this polynomial's ring.
    pub fn homogenize_into(&self, ring: &Arc<Ring>, rho: u32) -> Result<RatPoly, PolyError> {
        if ring.nvars() != self.ring.nvars() + 1 {
            return Err(PolyError::RingMismatch);
        }
        if let Some(d) = self.total_degree() {
            if d > rho {
                return Err(PolyError::DegreeTooLow { target: rho, degree: d });
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut ex = Vec::with_capacity(ring.nvars());
            ex.push(rho - m.degree());
            ex.extend_from_slice(m.exponents());
            (Monomial(ex), c.clone())
        });
        Ok(RatPoly::from_terms(ring, terms))
    }

    /// Homogenizes to degree `rho`, prepending a new variable called `hom_var`.
    pub fn homogenize(&self, rho: u32, hom_var: &str) -> Result<RatPoly, PolyError> {
        let ring = self.ring.prepend(hom_var)?;
        self.homogenize_into(&ring, rho)
    }

    /// Sets variable 0 to one and drops it from the ring.
    pub fn dehomogenize(&self) -> Result<RatPoly, PolyError> {
        let ring = self.ring.drop_first()?;
        self.dehomogenize_into(&ring)
    }

    pub fn dehomogenize_into(&self, ring: &Arc<Ring>) -> Result<RatPoly, PolyError> {
        if !self.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        if ring.nvars() + 1 != self.ring.nvars() {
            return Err(PolyError::RingMismatch);
        }
        let terms = self.terms.iter().map(|(m, c)| (Monomial(m.exponents()[1..].to_vec()), c.clone()));
        Ok(RatPoly::from_terms(ring, terms))
    }

    /// Integer content-free multiple with positive leading coefficient; used for
    /// compact display of syzygies and for integer linear algebra.
    pub fn primitive_integer_part(&self) -> RatPoly {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for (_, c) in &self.terms {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&lcm / c.denom());
            g = g.gcd(&n);
        }
        let mut scale = Rat::new(lcm, g);
        if self.leading_coeff().is_some_and(|c| c.is_negative()) {
            scale = -scale;
        }
        self.scale(&scale)
    }
}

impl std::ops::Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl std::ops::Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self.checked_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl std::ops::Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        self.checked_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl std::ops::Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}
