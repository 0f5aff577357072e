//! Division certificates `F_1 Q_1 + ... + F_m Q_m = Phi` on `V` with
//! `deg(F_j Q_j) <= rho`.
//!
//! For a fixed `rho` the coefficients of the `Q_j` enter linearly, and the
//! identity holds on `V` exactly when every coefficient of the normal form of
//! `sum F_j Q_j - Phi` vanishes. The resulting system is solved exactly.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    mu_of, no_zeros_at_infinity, rho_bound_general, rho_bound_smooth, BoundParams, CInf, CInfChoice, DegreeBound,
};
use crate::error::{DivisionError, PolyError};
use crate::groebner::GroebnerBasis;
use crate::linalg::solve;
use crate::poly::{monomials_up_to_degree, Monomial, Rat, RatPoly, Ring};
use crate::variety::{projective_closure, ProjectiveClosure};

/// Default cap on the number of unknown coefficients.
pub const DEFAULT_UNKNOWN_CAP: usize = 4000;

#[derive(Clone, Debug, PartialEq)]
pub struct DivisionProblem {
    pub ring: Arc<Ring>,
    /// Generators of `I(V)`; empty for `V = C^N`.
    pub v_gens: Vec<RatPoly>,
    pub f: Vec<RatPoly>,
    pub phi: RatPoly,
    pub rho: i64,
}

impl DivisionProblem {
    fn check(&self) -> Result<(), DivisionError> {
        if self.f.is_empty() {
            return Err(DivisionError::InvalidProblem("no divisors given".into()));
        }
        for p in self.v_gens.iter().chain(&self.f).chain(std::iter::once(&self.phi)) {
            if p.ring().vars() != self.ring.vars() {
                return Err(PolyError::RingMismatch.into());
            }
        }
        Ok(())
    }
}

/// Unknowns and equations of the ansatz at a fixed `rho`.
#[derive(Clone, Debug)]
pub struct DivisionSystem {
    /// `(j, m)`: the coefficient of `m` in `Q_j`.
    pub unknowns: Vec<(usize, Monomial)>,
    pub rows: Vec<Vec<Rat>>,
    pub rhs: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub q: Vec<RatPoly>,
    pub rho_used: i64,
    pub mu0: u32,
    /// Normal form of `sum F_j Q_j - Phi`; zero for a valid certificate.
    pub residual: RatPoly,
    pub bound_trace: Option<DegreeBound>,
    pub verified: bool,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    rho: i64,
    mu0: u32,
    #[serde(rename = "Q")]
    q: Vec<String>,
    verified: bool,
    branch: String,
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        let j = CertificateJson {
            rho: self.rho_used,
            mu0: self.mu0,
            q: self.q.iter().map(|p| p.to_string()).collect(),
            verified: self.verified,
            branch: self.bound_trace.map_or_else(|| "fixed".to_string(), |b| b.branch.to_string()),
        };
        serde_json::to_value(j).expect("serializable")
    }
}

/// Result of a solve at one `rho`. Infeasibility only means that no
/// certificate exists within this degree.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Found(Certificate),
    Infeasible { rho: i64 },
}

fn gb_of(p: &DivisionProblem) -> Result<GroebnerBasis, DivisionError> {
    Ok(crate::groebner::groebner_basis(&p.ring, &p.v_gens, p.ring.order())?)
}

/// Assembles the linear system for `p`. Unknowns are listed by increasing
/// monomial degree, so the solver prefers low-degree quotients.
pub fn build_division_system(
    p: &DivisionProblem,
    gb: &GroebnerBasis,
    cap: usize,
) -> Result<DivisionSystem, DivisionError> {
    p.check()?;
    let n = p.ring.nvars();
    let mut unknowns = Vec::new();
    for (j, f) in p.f.iter().enumerate() {
        let Some(df) = f.total_degree() else { continue };
        if p.rho < df as i64 {
            continue;
        }
        for m in monomials_up_to_degree(n, (p.rho - df as i64) as u32) {
            unknowns.push((j, m));
        }
    }
    if unknowns.len() > cap {
        return Err(DivisionError::TooManyUnknowns { unknowns: unknowns.len(), cap });
    }
    unknowns.sort_by(|a, b| a.1.degree().cmp(&b.1.degree()).then(a.0.cmp(&b.0)));

    let mut eq_index: HashMap<Monomial, usize> = HashMap::new();
    let mut columns: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(unknowns.len());
    let intern = |m: &Monomial, idx: &mut HashMap<Monomial, usize>| {
        let next = idx.len();
        *idx.entry(m.clone()).or_insert(next)
    };
    for (j, m) in &unknowns {
        let prod = p.f[*j].mul_term(m, &Rat::from_integer(1.into()));
        let nf = gb.normal_form(&prod)?;
        columns.push(nf.terms().iter().map(|(mm, c)| (intern(mm, &mut eq_index), c.clone())).collect());
    }
    let nf_phi = gb.normal_form(&p.phi)?;
    let phi_entries: Vec<(usize, Rat)> =
        nf_phi.terms().iter().map(|(mm, c)| (intern(mm, &mut eq_index), c.clone())).collect();

    let neq = eq_index.len();
    let mut rows = vec![vec![Rat::zero(); unknowns.len()]; neq];
    for (col, entries) in columns.into_iter().enumerate() {
        for (r, c) in entries {
            rows[r][col] = c;
        }
    }
    let mut rhs = vec![Rat::zero(); neq];
    for (r, c) in phi_entries {
        rhs[r] = c;
    }
    Ok(DivisionSystem { unknowns, rows, rhs })
}

/// Checks the identity modulo `I(V)` and the degree clause.
pub fn verify_certificate(c: &Certificate, p: &DivisionProblem) -> bool {
    let Ok(gb) = gb_of(p) else { return false };
    verify_with(c, p, &gb)
}

fn verify_with(c: &Certificate, p: &DivisionProblem, gb: &GroebnerBasis) -> bool {
    if c.q.len() != p.f.len() {
        return false;
    }
    let mut sum = RatPoly::zero(&p.ring);
    for (f, q) in p.f.iter().zip(&c.q) {
        if q.ring().vars() != p.ring.vars() {
            return false;
        }
        let prod = f * &q.with_ring_order(&p.ring);
        if let Some(d) = prod.total_degree() {
            if d as i64 > c.rho_used {
                return false;
            }
        }
        sum = &sum + &prod;
    }
    matches!(gb.normal_form(&(&sum - &p.phi)), Ok(r) if r.is_zero())
}

/// Solves the ansatz at `p.rho`.
pub fn solve_certificate(p: &DivisionProblem, cap: usize) -> Result<SolveOutcome, DivisionError> {
    let gb = gb_of(p)?;
    solve_with(p, &gb, cap, 0, None)
}

fn solve_with(
    p: &DivisionProblem,
    gb: &GroebnerBasis,
    cap: usize,
    mu0: u32,
    bound: Option<DegreeBound>,
) -> Result<SolveOutcome, DivisionError> {
    let sys = build_division_system(p, gb, cap)?;
    let Some(x) = solve(&sys.rows, &sys.rhs, sys.unknowns.len()) else {
        return Ok(SolveOutcome::Infeasible { rho: p.rho });
    };
    let mut terms: Vec<Vec<(Monomial, Rat)>> = vec![Vec::new(); p.f.len()];
    for ((j, m), v) in sys.unknowns.into_iter().zip(x) {
        if !v.is_zero() {
            terms[j].push((m, v));
        }
    }
    let q: Vec<RatPoly> = terms.into_iter().map(|t| RatPoly::from_terms(&p.ring, t)).collect();
    let mut sum = RatPoly::zero(&p.ring);
    for (f, qj) in p.f.iter().zip(&q) {
        sum = &sum + &(f * qj);
    }
    let residual = gb.normal_form(&(&sum - &p.phi))?.with_ring_order(&p.ring);
    let mut cert = Certificate { q, rho_used: p.rho, mu0, residual, bound_trace: bound, verified: false };
    cert.verified = verify_with(&cert, p, gb);
    if !cert.verified {
        return Err(DivisionError::VerificationFailed);
    }
    Ok(SolveOutcome::Found(cert))
}

/// Settings for [`certify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub mu0: u32,
    /// Largest `mu0` tried before giving up.
    pub mu0_cap: u32,
    pub mu_prime: u32,
    pub c_inf: CInfChoice,
    /// Use the smooth-variety bound instead of the general one.
    pub smooth: bool,
    pub unknown_cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            mu0: 0,
            mu0_cap: 4,
            mu_prime: 0,
            c_inf: CInfChoice::Auto,
            smooth: false,
            unknown_cap: DEFAULT_UNKNOWN_CAP,
        }
    }
}

/// Bound parameters derived from the data and the closure of `V`.
#[derive(Clone, Debug)]
pub struct BoundSetup {
    pub params: BoundParams,
    pub kappa0: u32,
    pub closure: ProjectiveClosure,
}

/// Computes `d, m, n, N, deg X, kappa0` and resolves `c_inf`.
pub fn bound_setup(
    ring: &Arc<Ring>,
    v_gens: &[RatPoly],
    f: &[RatPoly],
    phi: &RatPoly,
    opts: &CertifyOptions,
) -> Result<BoundSetup, DivisionError> {
    if f.is_empty() {
        return Err(DivisionError::InvalidProblem("no divisors given".into()));
    }
    let closure = projective_closure(ring, v_gens)?;
    let d = f.iter().filter_map(RatPoly::total_degree).max().unwrap_or(0).max(1);
    let m = f.len() as u32;
    let n = closure.dim();
    if n == 0 {
        return Err(DivisionError::InvalidProblem("V is zero dimensional".into()));
    }
    let c_inf = match opts.c_inf {
        CInfChoice::Fixed(c) => c,
        CInfChoice::Auto => {
            let hom: Vec<RatPoly> =
                f.iter().map(|fj| fj.homogenize_into(closure.proj_ring(), d)).collect::<Result<_, _>>()?;
            if no_zeros_at_infinity(&hom, closure.j_x())? {
                CInf::NegInf
            } else {
                CInf::Finite(mu_of(m, n))
            }
        }
    };
    let params = BoundParams {
        d,
        m,
        n,
        big_n: closure.ambient_dim(),
        deg_x: closure.degree(),
        c_inf,
        mu0: opts.mu0,
        mu_prime: opts.mu_prime,
        deg_phi: phi.total_degree().unwrap_or(0),
    };
    params.validate()?;
    Ok(BoundSetup { kappa0: closure.kappa0(), params, closure })
}

/// Finds a certificate at the degree bound, raising `mu0` by one while the
/// ansatz is infeasible, up to `opts.mu0_cap`.
pub fn certify(
    ring: &Arc<Ring>,
    v_gens: &[RatPoly],
    f: &[RatPoly],
    phi: &RatPoly,
    opts: &CertifyOptions,
) -> Result<Certificate, DivisionError> {
    let setup = bound_setup(ring, v_gens, f, phi, opts)?;
    let gb = crate::groebner::groebner_basis(ring, v_gens, ring.order())?;
    let mut params = setup.params.clone();
    let min_rho = f.iter().filter_map(RatPoly::total_degree).max().unwrap_or(0) as i64;
    let mut last_rho = 0;
    for mu0 in opts.mu0..=opts.mu0_cap.max(opts.mu0) {
        params.mu0 = mu0;
        let bound = if opts.smooth {
            rho_bound_smooth(&params, setup.kappa0)?
        } else {
            rho_bound_general(&params, setup.kappa0)?
        };
        // the ansatz needs room for every divisor
        let rho = bound.rho.max(min_rho);
        last_rho = rho;
        let problem =
            DivisionProblem { ring: ring.clone(), v_gens: v_gens.to_vec(), f: f.to_vec(), phi: phi.clone(), rho };
        match solve_with(&problem, &gb, opts.unknown_cap, mu0, Some(bound))? {
            SolveOutcome::Found(c) => return Ok(c),
            SolveOutcome::Infeasible { .. } => {
                if opts.smooth {
                    // mu0 does not enter the smooth bound
                    break;
                }
            }
        }
    }
    Err(DivisionError::EscalationExhausted { last_rho: last_rho.max(0) as u32, last_mu0: params.mu0 })
}

/// Nullstellensatz certificate `sum F_j Q_j = 1` on `V`.
pub fn nullstellensatz_certificate(
    ring: &Arc<Ring>,
    f: &[RatPoly],
    v_gens: &[RatPoly],
    opts: &CertifyOptions,
) -> Result<Certificate, DivisionError> {
    certify(ring, v_gens, f, &RatPoly::one(ring), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::jelonek_bound;
    use crate::parse::parse_poly;
    use crate::poly::ratio;

    fn polys(r: &Arc<Ring>, t: &[&str]) -> Vec<RatPoly> {
        t.iter().map(|s| parse_poly(s, r).unwrap()).collect()
    }

    fn problem(vars: &[&str], v: &[&str], f: &[&str], phi: &str, rho: i64) -> DivisionProblem {
        let r = Ring::grevlex(vars.iter().copied());
        DivisionProblem { v_gens: polys(&r, v), f: polys(&r, f), phi: parse_poly(phi, &r).unwrap(), rho, ring: r }
    }

    fn found(o: SolveOutcome) -> Certificate {
        match o {
            SolveOutcome::Found(c) => c,
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn system_shapes() {
        let p = problem(&["x"], &[], &["x"], "x", 1);
        let gb = gb_of(&p).unwrap();
        let sys = build_division_system(&p, &gb, 100).unwrap();
        assert_eq!(sys.unknowns.len(), 1);
        let c = found(solve_certificate(&p, 100).unwrap());
        assert_eq!(c.q[0], RatPoly::one(&p.ring));
    }

    #[test]
    fn partition_of_unity() {
        let p = problem(&["x"], &[], &["x", "1 - x"], "1", 1);
        let c = found(solve_certificate(&p, 100).unwrap());
        assert!(verify_certificate(&c, &p));
        assert_eq!(c.q, polys(&p.ring, &["1", "1"]));
    }

    #[test]
    fn infeasible_when_constant_unreachable() {
        for rho in 1..4 {
            let p = problem(&["x", "y"], &[], &["x", "y"], "1", rho);
            assert_eq!(solve_certificate(&p, 1000).unwrap(), SolveOutcome::Infeasible { rho });
        }
    }

    #[test]
    fn three_divisors_in_the_plane() {
        let p = problem(&["x", "y"], &[], &["x", "y", "1 - x*y"], "1", 2);
        let c = found(solve_certificate(&p, 100).unwrap());
        assert!(verify_certificate(&c, &p));
    }

    #[test]
    fn exact_multiple_on_twisted_cubic() {
        let p = problem(&["x", "y", "z"], &["y - x^2", "z - x^3"], &["x"], "x*y", 2);
        let c = found(solve_certificate(&p, 100).unwrap());
        assert!(verify_certificate(&c, &p));
        assert!(c.q[0].total_degree().unwrap() <= 1);
    }

    #[test]
    fn tampered_and_degree_violations_fail() {
        let p = problem(&["x"], &[], &["x", "1 - x"], "1", 1);
        let mut c = found(solve_certificate(&p, 100).unwrap());
        let good = c.clone();
        c.q = polys(&p.ring, &["1", "0"]);
        assert!(!verify_certificate(&c, &p));
        let mut low = good;
        low.rho_used = 0;
        assert!(!verify_certificate(&low, &p));
    }

    #[test]
    fn unknown_cap_is_enforced() {
        let p = problem(&["x", "y", "z"], &[], &["x"], "x", 12);
        assert!(matches!(solve_certificate(&p, 10), Err(DivisionError::TooManyUnknowns { cap: 10, .. })));
    }

    #[test]
    fn nullstellensatz_desk_cases() {
        let r = Ring::grevlex(["x"]);
        let opts = CertifyOptions::default();
        let c = nullstellensatz_certificate(&r, &polys(&r, &["x - 1", "x + 1"]), &[], &opts).unwrap();
        assert_eq!(c.q, vec![RatPoly::constant(&r, ratio(-1, 2)), RatPoly::constant(&r, ratio(1, 2))]);
        assert_eq!(c.rho_used, 1);

        let c = nullstellensatz_certificate(&r, &polys(&r, &["x^2", "1 - 2*x + x^2"]), &[], &opts).unwrap();
        assert!(c.rho_used <= jelonek_bound(2, 2, 1, 1).unwrap());
        assert!(c.verified);
        assert_eq!(c.to_json()["mu0"], 0);
    }
}
