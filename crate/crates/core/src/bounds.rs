//! Degree bounds for division certificates.
//!
//! With `mu = min(m, n)` and `c` the maximal codimension of distinguished
//! varieties at infinity, the general bound is
//!
//! ```text
//! rho = max(deg Phi + (mu + mu0) d^c deg X,  d min(m, n+1) + kappa0 - N)
//! ```
//!
//! and the smooth variant replaces the first argument by
//! `deg Phi + mu d^c deg X + mu'`. When `c = -inf` the product `d^c deg X`
//! is taken to be 0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BoundError, PolyError};
use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::poly::RatPoly;

/// Codimension exponent `c_inf`, possibly `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CInf {
    NegInf,
    Finite(u32),
}

impl fmt::Display for CInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CInf::NegInf => write!(f, "neg-inf"),
            CInf::Finite(c) => write!(f, "{c}"),
        }
    }
}

/// How `c_inf` is chosen: given explicitly, or `auto`, which uses `-inf`
/// when the zero set at infinity is empty and `mu` otherwise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CInfChoice {
    #[default]
    Auto,
    Fixed(CInf),
}

impl FromStr for CInfChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(CInfChoice::Auto),
            "neg-inf" | "-inf" => Ok(CInfChoice::Fixed(CInf::NegInf)),
            other => other
                .parse::<u32>()
                .map(|c| CInfChoice::Fixed(CInf::Finite(c)))
                .map_err(|_| format!("expected an integer, `neg-inf` or `auto`, got `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Maximal degree of the `F_j`.
    pub d: u32,
    /// Number of `F_j`.
    pub m: u32,
    /// Dimension of `V`.
    pub n: u32,
    /// Ambient dimension.
    pub big_n: u32,
    pub deg_x: u64,
    pub c_inf: CInf,
    pub mu0: u32,
    pub mu_prime: u32,
    /// Degree of `Phi`; use 0 for the zero polynomial.
    pub deg_phi: u32,
}

/// Which argument of the maximum attained the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `deg Phi + ... deg X`
    Growth,
    /// `d min(m, n+1) + kappa0 - N`
    Base,
    Tie,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Growth => "growth",
            Branch::Base => "base",
            Branch::Tie => "tie",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTag {
    General,
    Smooth,
    Jelonek,
    Base,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBound {
    pub rho: i64,
    pub branch: Branch,
    pub formula_tag: FormulaTag,
}

pub fn mu_of(m: u32, n: u32) -> u32 {
    m.min(n)
}

impl BoundParams {
    pub fn mu(&self) -> u32 {
        mu_of(self.m, self.n)
    }

    pub fn validate(&self) -> Result<(), BoundError> {
        let bad = |s: &str| Err(BoundError::InvalidParams(s.to_string()));
        if self.n < 1 || self.n > self.big_n {
            return bad("need 1 <= n <= N");
        }
        if self.m < 1 {
            return bad("need m >= 1");
        }
        if self.d < 1 {
            return bad("need d >= 1");
        }
        if self.deg_x < 1 {
            return bad("need deg X >= 1");
        }
        if let CInf::Finite(c) = self.c_inf {
            if c > self.mu() {
                return bad("need c_inf <= min(m, n)");
            }
        }
        Ok(())
    }

    /// `d^c deg X`, zero when `c = -inf`.
    fn growth_factor(&self) -> Result<i64, BoundError> {
        match self.c_inf {
            CInf::NegInf => Ok(0),
            CInf::Finite(c) => (self.d as i64)
                .checked_pow(c)
                .and_then(|p| p.checked_mul(i64::try_from(self.deg_x).ok()?))
                .ok_or_else(|| BoundError::InvalidParams("bound overflows".into())),
        }
    }

    /// `d min(m, n+1) + kappa0 - N`.
    pub fn base_degree(&self, kappa0: u32) -> i64 {
        self.d as i64 * self.m.min(self.n + 1) as i64 + kappa0 as i64 - self.big_n as i64
    }
}

fn combine(growth: i64, base: i64, tag: FormulaTag) -> DegreeBound {
    let branch = match growth.cmp(&base) {
        std::cmp::Ordering::Greater => Branch::Growth,
        std::cmp::Ordering::Less => Branch::Base,
        std::cmp::Ordering::Equal => Branch::Tie,
    };
    DegreeBound { rho: growth.max(base), branch, formula_tag: tag }
}

fn overflow() -> BoundError {
    BoundError::InvalidParams("bound overflows".into())
}

/// Bound for arbitrary reduced `V`.
pub fn rho_bound_general(p: &BoundParams, kappa0: u32) -> Result<DegreeBound, BoundError> {
    p.validate()?;
    let mult = (p.mu() as i64 + p.mu0 as i64).checked_mul(p.growth_factor()?).ok_or_else(overflow)?;
    let growth = (p.deg_phi as i64).checked_add(mult).ok_or_else(overflow)?;
    Ok(combine(growth, p.base_degree(kappa0), FormulaTag::General))
}

/// Bound for smooth `V`.
pub fn rho_bound_smooth(p: &BoundParams, kappa0: u32) -> Result<DegreeBound, BoundError> {
    p.validate()?;
    let mult = (p.mu() as i64).checked_mul(p.growth_factor()?).ok_or_else(overflow)?;
    let growth = (p.deg_phi as i64 + p.mu_prime as i64).checked_add(mult).ok_or_else(overflow)?;
    Ok(combine(growth, p.base_degree(kappa0), FormulaTag::Smooth))
}

/// Jelonek's Nullstellensatz bound `c_m d^mu deg X`, with `c_m = 1` when
/// `m <= n` and 2 otherwise.
pub fn jelonek_bound(d: u32, m: u32, n: u32, deg_x: u64) -> Result<i64, BoundError> {
    let cm: i64 = if m <= n { 1 } else { 2 };
    (d as i64)
        .checked_pow(mu_of(m, n))
        .and_then(|p| p.checked_mul(cm))
        .and_then(|p| p.checked_mul(i64::try_from(deg_x).ok()?))
        .ok_or_else(overflow)
}

/// Base degree with the regularity of `X` in place of `kappa0 - N`:
/// `d min(m, n+1) + reg X - min(m, n+1)`. Reported for comparison only.
pub fn regularity_base_degree(d: u32, m: u32, n: u32, reg: u32) -> i64 {
    let k = m.min(n + 1) as i64;
    d as i64 * k + reg as i64 - k
}

/// True when the `f_j`, the hyperplane `z_0 = 0` and `J_X` have no common
/// zero in projective space, i.e. `Z_f` does not meet `X` at infinity.
///
/// `f_list` and the generators of `j_x` live in a ring whose first variable
/// is the homogenizing one.
pub fn no_zeros_at_infinity(f_list: &[RatPoly], j_x: &GroebnerBasis) -> Result<bool, PolyError> {
    let ring = j_x.ring();
    let mut gens = Vec::with_capacity(f_list.len() + j_x.generators().len() + 1);
    for f in f_list {
        if !f.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        if f.ring().vars() != ring.vars() {
            return Err(PolyError::RingMismatch);
        }
        gens.push(f.with_ring_order(ring));
    }
    gens.push(RatPoly::var(ring, 0));
    gens.extend(j_x.generators().iter().cloned());
    let gb = groebner_basis(ring, &gens, ring.order())?;
    Ok(gb.has_pure_power_of_every_variable())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::Ring;

    fn params(d: u32, m: u32, n: u32, big_n: u32, deg_x: u64, c_inf: CInf, deg_phi: u32) -> BoundParams {
        BoundParams { d, m, n, big_n, deg_x, c_inf, mu0: 0, mu_prime: 0, deg_phi }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_of(2, 1), 1);
        assert_eq!(mu_of(3, 3), 3);
        assert_eq!(mu_of(1, 5), 1);
    }

    #[test]
    fn general_bound_examples() {
        let p = params(1, 2, 1, 1, 1, CInf::NegInf, 0);
        let b = rho_bound_general(&p, 0).unwrap();
        assert_eq!((b.rho, b.branch), (1, Branch::Base));

        let p = params(3, 2, 2, 3, 2, CInf::Finite(1), 2);
        let b = rho_bound_general(&p, 2).unwrap();
        assert_eq!((b.rho, b.branch), (14, Branch::Growth));

        let p = params(2, 3, 2, 2, 1, CInf::Finite(2), 0);
        assert!(rho_bound_general(&p, 0).is_ok());
        let p = params(2, 3, 2, 2, 1, CInf::Finite(3), 0);
        assert!(rho_bound_general(&p, 0).is_err());
    }

    #[test]
    fn smooth_bound_examples() {
        let mut p = params(1, 2, 1, 1, 1, CInf::NegInf, 0);
        assert_eq!(rho_bound_smooth(&p, 0).unwrap().rho, 1);
        p.mu_prime = 2;
        // growth branch is deg Phi + mu' = 2 when c_inf = -inf
        assert_eq!(rho_bound_smooth(&p, 0).unwrap().rho, 2);
        let mut q = params(3, 2, 2, 3, 2, CInf::Finite(1), 2);
        let before = rho_bound_smooth(&q, 2).unwrap().rho;
        q.mu_prime = 2;
        assert_eq!(rho_bound_smooth(&q, 2).unwrap().rho, before + 2);
    }

    #[test]
    fn jelonek_examples() {
        assert_eq!(jelonek_bound(2, 2, 2, 1).unwrap(), 4);
        assert_eq!(jelonek_bound(2, 3, 2, 1).unwrap(), 8);
        assert_eq!(jelonek_bound(1, 3, 2, 5).unwrap(), 10);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(rho_bound_general(&params(0, 1, 1, 1, 1, CInf::NegInf, 0), 0).is_err());
        assert!(rho_bound_general(&params(1, 0, 1, 1, 1, CInf::NegInf, 0), 0).is_err());
        assert!(rho_bound_general(&params(1, 1, 2, 1, 1, CInf::NegInf, 0), 0).is_err());
        assert!(rho_bound_general(&params(1, 1, 1, 1, 0, CInf::NegInf, 0), 0).is_err());
    }

    #[test]
    fn parses_c_inf_choice() {
        assert_eq!("auto".parse::<CInfChoice>(), Ok(CInfChoice::Auto));
        assert_eq!("neg-inf".parse::<CInfChoice>(), Ok(CInfChoice::Fixed(CInf::NegInf)));
        assert_eq!("2".parse::<CInfChoice>(), Ok(CInfChoice::Fixed(CInf::Finite(2))));
        assert!("x".parse::<CInfChoice>().is_err());
    }

    fn hom(vars: &[&str], polys: &[&str]) -> (Vec<RatPoly>, GroebnerBasis) {
        let r = Ring::grevlex(vars.iter().copied());
        let f = polys.iter().map(|t| parse_poly(t, &r).unwrap()).collect();
        let gb = groebner_basis(&r, &[], r.order()).unwrap();
        (f, gb)
    }

    #[test]
    fn zeros_at_infinity() {
        let (f, gb) = hom(&["z0", "z1"], &["z1", "z0 - z1"]);
        assert!(no_zeros_at_infinity(&f, &gb).unwrap());
        let (f, gb) = hom(&["z0", "z1"], &["z1"]);
        assert!(no_zeros_at_infinity(&f, &gb).unwrap());
        let (f, gb) = hom(&["z0", "z1", "z2"], &["z1*z2", "z1^2"]);
        assert!(!no_zeros_at_infinity(&f, &gb).unwrap());
        let (f, gb) = hom(&["z0", "z1"], &["z1 + z0^2"]);
        assert_eq!(no_zeros_at_infinity(&f, &gb), Err(PolyError::NotHomogeneous));
    }
}
