//! Affine varieties `V` in `C^N` and their projective closures `X` in `P^N`.

use std::sync::Arc;

use crate::error::{PolyError, ResolutionError};
use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::poly::{MonomialOrder, RatPoly, Ring};
use crate::resolution::{minimal_free_resolution, Resolution};

/// Invariants of `V` read off from the resolution of its closure.
#[derive(Clone, Debug)]
pub struct ProjectiveClosure {
    affine_ring: Arc<Ring>,
    proj_ring: Arc<Ring>,
    affine_gb: GroebnerBasis,
    j_x: GroebnerBasis,
    resolution: Resolution,
    dim: u32,
    degree: u64,
}

/// Name for the homogenizing variable that does not clash with `ring`.
pub fn homogenizing_name(ring: &Ring) -> String {
    let mut name = String::from("z0");
    while ring.index_of(&name).is_some() {
        name.push('_');
    }
    name
}

/// Builds `X` from generators of `I(V)`. The generators of the closure ideal
/// are homogenizations of a graded Gröbner basis, which generate it.
pub fn projective_closure(ring: &Arc<Ring>, v_gens: &[RatPoly]) -> Result<ProjectiveClosure, ResolutionError> {
    let order = match ring.order() {
        MonomialOrder::Lex => MonomialOrder::GrevLex,
        o => o,
    };
    let affine_gb = groebner_basis(ring, v_gens, order)?;
    if affine_gb.is_unit() {
        return Err(ResolutionError::UnitIdeal);
    }
    let proj_ring =
        Ring::new(std::iter::once(homogenizing_name(ring)).chain(ring.vars().iter().cloned()), MonomialOrder::GrevLex)?;
    let hom: Vec<RatPoly> = affine_gb
        .generators()
        .iter()
        .map(|g| g.homogenize_into(&proj_ring, g.total_degree().unwrap_or(0)))
        .collect::<Result<_, PolyError>>()?;
    let j_x = groebner_basis(&proj_ring, &hom, MonomialOrder::GrevLex)?;
    let resolution = minimal_free_resolution(&proj_ring, &hom)?;
    let (dim, degree) = resolution
        .dimension_and_degree()
        .ok_or_else(|| ResolutionError::Malformed("closure has empty zero set".into()))?;
    Ok(ProjectiveClosure { affine_ring: ring.clone(), proj_ring, affine_gb, j_x, resolution, dim, degree })
}

impl ProjectiveClosure {
    pub fn affine_ring(&self) -> &Arc<Ring> {
        &self.affine_ring
    }

    /// `C[z_0, z_1, ..., z_N]` with the homogenizing variable first.
    pub fn proj_ring(&self) -> &Arc<Ring> {
        &self.proj_ring
    }

    /// Gröbner basis of `I(V)`.
    pub fn affine_gb(&self) -> &GroebnerBasis {
        &self.affine_gb
    }

    /// Gröbner basis of the homogeneous ideal `J_X`.
    pub fn j_x(&self) -> &GroebnerBasis {
        &self.j_x
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    /// `n = dim V`.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `deg X`.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Ambient dimension `N`.
    pub fn ambient_dim(&self) -> u32 {
        self.affine_ring.nvars() as u32
    }

    pub fn kappa0(&self) -> u32 {
        self.resolution.kappa0()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn closure(vars: &[&str], gens: &[&str]) -> ProjectiveClosure {
        let r = Ring::grevlex(vars.iter().copied());
        let g: Vec<RatPoly> = gens.iter().map(|t| parse_poly(t, &r).unwrap()).collect();
        projective_closure(&r, &g).unwrap()
    }

    #[test]
    fn affine_space() {
        let c = closure(&["x", "y"], &[]);
        assert_eq!((c.dim(), c.degree(), c.ambient_dim(), c.kappa0()), (2, 1, 2, 0));
        assert_eq!(c.proj_ring().vars()[0], "z0");
    }

    #[test]
    fn affine_twisted_cubic() {
        let c = closure(&["x", "y", "z"], &["y - x^2", "z - x^3"]);
        assert_eq!((c.dim(), c.degree(), c.ambient_dim()), (1, 3, 3));
        assert_eq!(c.resolution().shifts(), &[vec![2, 2, 2], vec![3, 3]]);
        assert_eq!(c.kappa0(), 3);
    }

    #[test]
    fn plane_conic() {
        let c = closure(&["x", "y"], &["x*y - 1"]);
        assert_eq!((c.dim(), c.degree(), c.kappa0()), (1, 2, 2));
    }

    #[test]
    fn avoids_name_clash() {
        let c = closure(&["z0", "x"], &[]);
        assert_eq!(c.proj_ring().vars()[0], "z0_");
    }

    #[test]
    fn empty_variety_is_rejected() {
        let r = Ring::grevlex(["x"]);
        let g = vec![parse_poly("x", &r).unwrap(), parse_poly("x - 1", &r).unwrap()];
        assert!(matches!(projective_closure(&r, &g), Err(ResolutionError::UnitIdeal)));
    }
}
