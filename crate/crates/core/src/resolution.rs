//! Minimal graded free resolutions of `S/J` for homogeneous ideals `J`.
//!
//! The resolution is built in two passes. Schreyer's construction turns a
//! Gröbner basis of each syzygy module into a Gröbner basis of the next one
//! under the induced module order, giving a (usually non-minimal) free
//! resolution. Unit entries are then split off one at a time until every
//! map has entries in the maximal ideal.
//!
//! Shift conventions: `shifts[k-1]` lists the degrees `d_k^i` of the basis
//! of the k-th free module, `maps[k-1]` is the matrix of `a_k` with
//! `r_{k-1}` rows and `r_k` columns, and the module in position zero is `S`
//! itself with shift 0.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ResolutionError;
use crate::groebner::groebner_basis;
use crate::parse::parse_poly;
use crate::poly::{Monomial, MonomialOrder, Rat, RatPoly, Ring};

type Vector = Vec<RatPoly>;

/// Basis element of a free module in the Schreyer tower.
#[derive(Clone, Debug)]
struct BasisElt {
    /// Monomial of `S` that a term `m e_i` is weighed by.
    weight: Monomial,
    /// Indices of the chain of lead components, lowest level first.
    path: Vec<usize>,
    degree: u32,
}

#[derive(Clone, Debug)]
struct Lead {
    mono: Monomial,
    comp: usize,
    coeff: Rat,
}

fn compare_terms(order: MonomialOrder, basis: &[BasisElt], a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
    let (ea, eb) = (&basis[a.1], &basis[b.1]);
    order.compare(&a.0.mul(&ea.weight), &b.0.mul(&eb.weight)).then_with(|| {
        for (x, y) in ea.path.iter().zip(&eb.path) {
            if x != y {
                // the smaller index is the larger term
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

fn lead(order: MonomialOrder, basis: &[BasisElt], v: &[RatPoly]) -> Option<Lead> {
    let mut best: Option<Lead> = None;
    for (c, p) in v.iter().enumerate() {
        let Some((m, coeff)) = p.leading_term() else { continue };
        let better = match &best {
            None => true,
            Some(b) => compare_terms(order, basis, (m, c), (&b.mono, b.comp)) == Ordering::Greater,
        };
        if better {
            best = Some(Lead { mono: m.clone(), comp: c, coeff: coeff.clone() });
        }
    }
    best
}

fn mul_term(v: &[RatPoly], m: &Monomial, c: &Rat) -> Vector {
    v.iter().map(|p| p.mul_term(m, c)).collect()
}

fn sub(a: &[RatPoly], b: &[RatPoly]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vector_degree(basis: &[BasisElt], v: &[RatPoly]) -> Option<u32> {
    v.iter().enumerate().find_map(|(c, p)| p.total_degree().map(|d| d + basis[c].degree))
}

/// Division of `v` by a Gröbner basis with known leads. Returns the quotients
/// or `None` when the remainder is nonzero.
fn divide(
    ring: &Arc<Ring>,
    order: MonomialOrder,
    basis: &[BasisElt],
    gens: &[Vector],
    leads: &[Lead],
    v: Vector,
) -> Option<Vec<RatPoly>> {
    let mut quot = vec![RatPoly::zero(ring); gens.len()];
    let mut rest = v;
    while let Some(l) = lead(order, basis, &rest) {
        let hit = leads
            .iter()
            .enumerate()
            .find_map(|(g, gl)| (gl.comp == l.comp).then(|| gl.mono.quotient_of(&l.mono)).flatten().map(|q| (g, q)));
        let (g, q) = hit?;
        let f = &l.coeff / &leads[g].coeff;
        quot[g] = &quot[g] + &RatPoly::monomial(ring, q.clone(), f.clone());
        rest = sub(&rest, &mul_term(&gens[g], &q, &f));
    }
    Some(quot)
}

/// Schreyer syzygies of a Gröbner basis `gens` of a submodule of the free
/// module described by `basis`. The result is a Gröbner basis of the syzygy
/// module under the order induced by `gens`.
fn schreyer_syzygies(
    ring: &Arc<Ring>,
    order: MonomialOrder,
    basis: &[BasisElt],
    gens: &[Vector],
    leads: &[Lead],
) -> Result<Vec<Vector>, ResolutionError> {
    let s = gens.len();
    let mut out = Vec::new();
    for i in 0..s {
        let mut cands: Vec<(usize, Monomial)> = ((i + 1)..s)
            .filter(|&j| leads[j].comp == leads[i].comp)
            .map(|j| {
                let lcm = leads[i].mono.lcm(&leads[j].mono);
                (j, leads[i].mono.quotient_of(&lcm).expect("divides lcm"))
            })
            .collect();
        // keep only minimal lead monomials; they generate the same lead module
        let all = cands.clone();
        cands.retain(|(j, q)| !all.iter().any(|(k, r)| k != j && r.divides(q) && (r != q || k < j)));
        for (j, qi) in cands {
            let lcm = leads[i].mono.mul(&qi);
            let qj = leads[j].mono.quotient_of(&lcm).expect("divides lcm");
            let ci = Rat::one() / &leads[i].coeff;
            let cj = Rat::one() / &leads[j].coeff;
            let spair = sub(&mul_term(&gens[i], &qi, &ci), &mul_term(&gens[j], &qj, &cj));
            let quot = divide(ring, order, basis, gens, leads, spair)
                .ok_or_else(|| ResolutionError::Malformed("S-pair did not reduce to zero".into()))?;
            let mut syz: Vector = quot.into_iter().map(|q| -&q).collect();
            syz[i] = &syz[i] + &RatPoly::monomial(ring, qi, ci);
            syz[j] = &syz[j] - &RatPoly::monomial(ring, qj, cj);
            let scale = leads[i].coeff.clone();
            out.push(syz.iter().map(|p| p.scale(&scale)).collect());
        }
    }
    Ok(out)
}

/// Orders generators so that, within one lead component, lead monomials
/// decrease lexicographically. This keeps the Schreyer tower finite.
fn sort_for_termination(gens: Vec<Vector>, leads: Vec<Lead>) -> (Vec<Vector>, Vec<Lead>) {
    let mut idx: Vec<usize> = (0..gens.len()).collect();
    idx.sort_by(|&a, &b| {
        leads[a].comp.cmp(&leads[b].comp).then_with(|| leads[b].mono.exponents().cmp(leads[a].mono.exponents()))
    });
    let mut g2 = Vec::with_capacity(gens.len());
    let mut l2 = Vec::with_capacity(gens.len());
    for i in idx {
        g2.push(gens[i].clone());
        l2.push(leads[i].clone());
    }
    (g2, l2)
}

/// Graded free resolution `0 <- S/J <- S <- F_1 <- ... <- F_M <- 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolution {
    ring: Arc<Ring>,
    shifts: Vec<Vec<u32>>,
    maps: Vec<Vec<Vec<RatPoly>>>,
}

/// Regularity data. `castelnuovo_mumford` is `max(d_k^i - k) + 1`, the
/// regularity of the ideal; `one_plus_kappa0` is `1 + max d_k^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularity {
    pub castelnuovo_mumford: u32,
    pub one_plus_kappa0: u32,
    /// Set when the resolution is trivial (`M = 0`) and both values are 0.
    pub trivial: bool,
}

#[derive(Serialize, Deserialize)]
struct ResolutionJson {
    shifts: Vec<Vec<u32>>,
    maps: Vec<Vec<Vec<String>>>,
}

/// Computes the minimal graded free resolution of `S/J` where `J` is
/// generated by the homogeneous polynomials `ideal` in `ring`.
pub fn minimal_free_resolution(ring: &Arc<Ring>, ideal: &[RatPoly]) -> Result<Resolution, ResolutionError> {
    for (i, p) in ideal.iter().enumerate() {
        if p.ring().vars() != ring.vars() {
            return Err(crate::error::PolyError::RingMismatch.into());
        }
        if !p.is_homogeneous() {
            return Err(ResolutionError::NonHomogeneous(i));
        }
    }
    let order = ring.order();
    let gb = groebner_basis(ring, ideal, order)?;
    if gb.is_unit() {
        return Err(ResolutionError::UnitIdeal);
    }
    let ring = gb.ring().clone();
    if gb.generators().is_empty() {
        return Ok(Resolution { ring, shifts: Vec::new(), maps: Vec::new() });
    }

    let mut basis = vec![BasisElt { weight: Monomial::one(ring.nvars()), path: Vec::new(), degree: 0 }];
    let mut gens: Vec<Vector> = gb.generators().iter().map(|g| vec![g.clone()]).collect();
    let mut leads: Vec<Lead> = gens.iter().map(|g| lead(order, &basis, g).expect("nonzero")).collect();
    (gens, leads) = sort_for_termination(gens, leads);

    let mut shifts = Vec::new();
    let mut maps = Vec::new();
    let max_levels = ring.nvars() + 2;
    loop {
        if shifts.len() > max_levels {
            return Err(ResolutionError::Malformed("Schreyer tower did not terminate".into()));
        }
        let next: Vec<BasisElt> = leads
            .iter()
            .zip(&gens)
            .enumerate()
            .map(|(i, (l, g))| {
                let mut path = basis[l.comp].path.clone();
                path.push(i);
                BasisElt {
                    weight: l.mono.mul(&basis[l.comp].weight),
                    path,
                    degree: vector_degree(&basis, g).expect("nonzero generator"),
                }
            })
            .collect();
        let rows = basis.len();
        maps.push((0..rows).map(|r| gens.iter().map(|g| g[r].clone()).collect()).collect::<Vec<Vec<_>>>());
        shifts.push(next.iter().map(|b| b.degree).collect::<Vec<_>>());

        let syz = schreyer_syzygies(&ring, order, &basis, &gens, &leads)?;
        if syz.is_empty() {
            break;
        }
        let syz_leads: Vec<Lead> = syz.iter().map(|v| lead(order, &next, v).expect("nonzero syzygy")).collect();
        (gens, leads) = sort_for_termination(syz, syz_leads);
        basis = next;
    }

    let mut res = Resolution { ring, shifts, maps };
    res.minimize()?;
    res.sort_by_degree();
    Ok(res)
}

fn as_nonzero_constant(p: &RatPoly) -> Option<Rat> {
    (p.is_constant() && !p.is_zero()).then(|| p.leading_coeff().unwrap().clone())
}

impl Resolution {
    fn find_unit(&self) -> Option<(usize, usize, usize)> {
        for (k, a) in self.maps.iter().enumerate() {
            for (r, row) in a.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    if as_nonzero_constant(e).is_some() {
                        return Some((k, r, c));
                    }
                }
            }
        }
        None
    }

    /// Splits off trivial summands `S(-d) <- S(-d)` until no map has a
    /// nonzero constant entry.
    fn minimize(&mut self) -> Result<(), ResolutionError> {
        while let Some((k, r, c)) = self.find_unit() {
            if k == 0 {
                return Err(ResolutionError::UnitIdeal);
            }
            let u = as_nonzero_constant(&self.maps[k][r][c]).unwrap();
            let ncols = self.maps[k][0].len();
            let pivot_col: Vec<RatPoly> = self.maps[k].iter().map(|row| row[c].clone()).collect();
            for cc in 0..ncols {
                if cc == c || self.maps[k][r][cc].is_zero() {
                    continue;
                }
                let f = self.maps[k][r][cc].scale(&(Rat::one() / &u));
                for (row, pc) in self.maps[k].iter_mut().zip(&pivot_col) {
                    row[cc] = &row[cc] - &(&f * pc);
                }
            }
            // drop row r and column c of a_k
            self.maps[k].remove(r);
            for row in self.maps[k].iter_mut() {
                row.remove(c);
            }
            // drop column r of a_{k-1} and row c of a_{k+1}
            for row in self.maps[k - 1].iter_mut() {
                row.remove(r);
            }
            if k + 1 < self.maps.len() {
                self.maps[k + 1].remove(c);
            }
            self.shifts[k].remove(c);
            self.shifts[k - 1].remove(r);
        }
        while self.shifts.last().is_some_and(|s| s.is_empty()) {
            self.shifts.pop();
            self.maps.pop();
        }
        Ok(())
    }

    fn sort_by_degree(&mut self) {
        for k in 0..self.shifts.len() {
            let mut idx: Vec<usize> = (0..self.shifts[k].len()).collect();
            idx.sort_by_key(|&i| self.shifts[k][i]);
            self.shifts[k] = idx.iter().map(|&i| self.shifts[k][i]).collect();
            for row in self.maps[k].iter_mut() {
                *row = idx.iter().map(|&i| row[i].clone()).collect();
            }
            if k + 1 < self.maps.len() {
                let rows = std::mem::take(&mut self.maps[k + 1]);
                self.maps[k + 1] = idx.iter().map(|&i| rows[i].clone()).collect();
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Length `M` of the resolution.
    pub fn length(&self) -> usize {
        self.shifts.len()
    }

    /// `shifts()[k-1]` is `d_k`.
    pub fn shifts(&self) -> &[Vec<u32>] {
        &self.shifts
    }

    /// `maps()[k-1]` is the matrix of `a_k`, as rows.
    pub fn maps(&self) -> &[Vec<Vec<RatPoly>>] {
        &self.maps
    }

    /// Ranks `r_0 = 1, r_1, ..., r_M`.
    pub fn ranks(&self) -> Vec<usize> {
        std::iter::once(1).chain(self.shifts.iter().map(Vec::len)).collect()
    }

    /// Largest shift over all `k <= M`, with `d_0 = 0` included.
    pub fn kappa0(&self) -> u32 {
        self.shifts.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn regularity(&self) -> Regularity {
        if self.shifts.is_empty() {
            return Regularity { castelnuovo_mumford: 0, one_plus_kappa0: 0, trivial: true };
        }
        let cm = self
            .shifts
            .iter()
            .enumerate()
            .flat_map(|(k, d)| d.iter().map(move |&x| x as i64 - (k as i64 + 1)))
            .max()
            .unwrap();
        Regularity { castelnuovo_mumford: (cm + 1) as u32, one_plus_kappa0: 1 + self.kappa0(), trivial: false }
    }

    /// Whether `M <= N` where `N + 1` is the number of variables.
    pub fn length_within_ambient(&self) -> bool {
        self.length() < self.ring.nvars()
    }

    /// Graded Betti numbers `beta_{k,j}` keyed by `(k, j)`, including `beta_{0,0} = 1`.
    pub fn betti_numbers(&self) -> BTreeMap<(usize, u32), usize> {
        let mut out = BTreeMap::new();
        out.insert((0, 0), 1);
        for (k, d) in self.shifts.iter().enumerate() {
            for &x in d {
                *out.entry((k + 1, x)).or_insert(0) += 1;
            }
        }
        out
    }

    /// `a_k a_{k+1} = 0` for every consecutive pair.
    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            a.iter().all(|row| {
                (0..b[0].len()).all(|j| {
                    let mut acc = RatPoly::zero(&self.ring);
                    for (x, brow) in row.iter().zip(b) {
                        acc = &acc + &(x * &brow[j]);
                    }
                    acc.is_zero()
                })
            })
        })
    }

    /// Every nonzero entry of `a_k` at `(i, j)` is homogeneous of degree
    /// `d_k^j - d_{k-1}^i`.
    pub fn degrees_consistent(&self) -> bool {
        let d0 = vec![0u32];
        self.maps.iter().enumerate().all(|(k, a)| {
            let prev = if k == 0 { &d0 } else { &self.shifts[k - 1] };
            a.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, e)| {
                    e.is_zero()
                        || (e.is_homogeneous()
                            && e.total_degree().map(|x| x as i64) == Some(self.shifts[k][j] as i64 - prev[i] as i64))
                })
            })
        })
    }

    /// No map has a nonzero constant entry.
    pub fn is_minimal(&self) -> bool {
        self.find_unit().is_none()
    }

    /// Hilbert polynomial of `S/J` as coefficients in `t`, lowest degree first.
    pub fn hilbert_polynomial(&self) -> Vec<Rat> {
        let big_n = self.ring.nvars() - 1;
        let mut total = vec![Rat::zero(); big_n + 1];
        let mut add = |shift: u32, sign: i64| {
            // binom(t - shift + N, N) = prod_{i=1}^{N} (t - shift + i) / i
            let mut p = vec![Rat::one()];
            for i in 1..=big_n {
                let c = Rat::from_integer((i as i64 - shift as i64).into());
                let mut q = vec![Rat::zero(); p.len() + 1];
                for (e, a) in p.iter().enumerate() {
                    q[e + 1] += a;
                    q[e] += a * &c;
                }
                let inv = Rat::new(1.into(), (i as i64).into());
                p = q.into_iter().map(|x| x * &inv).collect();
            }
            for (e, a) in p.into_iter().enumerate() {
                total[e] += a * Rat::from_integer(sign.into());
            }
        };
        add(0, 1);
        for (k, d) in self.shifts.iter().enumerate() {
            let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
            for &x in d {
                add(x, sign);
            }
        }
        while total.len() > 1 && total.last().unwrap().is_zero() {
            total.pop();
        }
        total
    }

    /// Dimension and degree of the projective variety `V(J)`, read off from
    /// the Hilbert polynomial. `None` when the zero set is empty.
    pub fn dimension_and_degree(&self) -> Option<(u32, u64)> {
        let hp = self.hilbert_polynomial();
        if hp.len() == 1 && hp[0].is_zero() {
            return None;
        }
        let n = hp.len() - 1;
        let mut lead = hp[n].clone();
        for i in 1..=n {
            lead *= Rat::from_integer((i as i64).into());
        }
        let deg: u64 = lead.to_integer().try_into().ok()?;
        Some((n as u32, deg))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = ResolutionJson {
            shifts: self.shifts.clone(),
            maps: self
                .maps
                .iter()
                .map(|a| a.iter().map(|row| row.iter().map(|e| e.to_string()).collect()).collect())
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    /// Reads a resolution written by [`Resolution::to_json`].
    pub fn from_json(value: &serde_json::Value, ring: &Arc<Ring>) -> Result<Resolution, ResolutionError> {
        let j: ResolutionJson =
            serde_json::from_value(value.clone()).map_err(|e| ResolutionError::Malformed(e.to_string()))?;
        if j.shifts.len() != j.maps.len() {
            return Err(ResolutionError::Malformed("shifts and maps differ in length".into()));
        }
        let mut maps = Vec::with_capacity(j.maps.len());
        for (k, a) in j.maps.iter().enumerate() {
            let rows = if k == 0 { 1 } else { j.shifts[k - 1].len() };
            if a.len() != rows || a.iter().any(|r| r.len() != j.shifts[k].len()) {
                return Err(ResolutionError::Malformed(format!("map {} has the wrong shape", k + 1)));
            }
            let mut m = Vec::with_capacity(rows);
            for row in a {
                m.push(row.iter().map(|t| parse_poly(t, ring)).collect::<Result<Vec<_>, _>>()?);
            }
            maps.push(m);
        }
        Ok(Resolution { ring: ring.clone(), shifts: j.shifts, maps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn resolve(vars: &[&str], gens: &[&str]) -> Resolution {
        let r = Ring::grevlex(vars.iter().copied());
        let g: Vec<RatPoly> = gens.iter().map(|t| parse_poly(t, &r).unwrap()).collect();
        minimal_free_resolution(&r, &g).unwrap()
    }

    fn check(res: &Resolution) {
        assert!(res.is_complex());
        assert!(res.degrees_consistent());
        assert!(res.is_minimal());
    }

    #[test]
    fn principal_ideal() {
        let res = resolve(&["z0", "z1"], &["z0"]);
        check(&res);
        assert_eq!(res.shifts(), &[vec![1]]);
        assert_eq!(res.kappa0(), 1);
        assert_eq!(res.regularity().castelnuovo_mumford, 1);
    }

    #[test]
    fn koszul_on_two_variables() {
        let res = resolve(&["z0", "z1"], &["z0", "z1"]);
        check(&res);
        assert_eq!(res.shifts(), &[vec![1, 1], vec![2]]);
        assert_eq!(res.kappa0(), 2);
        assert_eq!(res.regularity().castelnuovo_mumford, 1);
    }

    #[test]
    fn twisted_cubic() {
        let res = resolve(&["x", "y", "z", "w"], &["x*z - y^2", "x*w - y*z", "y*w - z^2"]);
        check(&res);
        assert_eq!(res.shifts(), &[vec![2, 2, 2], vec![3, 3]]);
        assert_eq!(res.kappa0(), 3);
        let reg = res.regularity();
        assert_eq!(reg.castelnuovo_mumford, 2);
        assert_eq!(reg.one_plus_kappa0, 4);
        assert_eq!(res.dimension_and_degree(), Some((1, 3)));
    }

    #[test]
    fn empty_ideal_is_projective_space() {
        let res = resolve(&["z0", "z1", "z2"], &[]);
        assert_eq!(res.length(), 0);
        assert_eq!(res.kappa0(), 0);
        assert!(res.regularity().trivial);
        assert_eq!(res.dimension_and_degree(), Some((2, 1)));
    }

    #[test]
    fn redundant_generators_are_split_off() {
        let res = resolve(&["x", "y", "z"], &["x", "y", "x + y", "x*z"]);
        check(&res);
        assert_eq!(res.shifts(), &[vec![1, 1], vec![2]]);
    }

    #[test]
    fn hilbert_polynomial_of_plane_conic() {
        let res = resolve(&["z0", "z1", "z2"], &["z0*z2 - z1^2"]);
        // 2t + 1
        assert_eq!(res.hilbert_polynomial(), vec![rat(1), rat(2)]);
        assert_eq!(res.dimension_and_degree(), Some((1, 2)));
    }

    #[test]
    fn complete_intersection_of_quadrics() {
        let res = resolve(&["x", "y", "z", "w"], &["x*y - z*w", "x^2 + y^2 - z^2 - w^2"]);
        check(&res);
        assert_eq!(res.shifts(), &[vec![2, 2], vec![4]]);
        assert_eq!(res.dimension_and_degree(), Some((1, 4)));
    }

    #[test]
    fn rejects_non_homogeneous() {
        let r = Ring::grevlex(["x", "y"]);
        let g = vec![parse_poly("x^2 - y", &r).unwrap()];
        assert_eq!(minimal_free_resolution(&r, &g), Err(ResolutionError::NonHomogeneous(0)));
    }

    #[test]
    fn rejects_unit_ideal() {
        let r = Ring::grevlex(["x", "y"]);
        let g = vec![parse_poly("3", &r).unwrap()];
        assert_eq!(minimal_free_resolution(&r, &g), Err(ResolutionError::UnitIdeal));
    }

    #[test]
    fn json_round_trip() {
        let res = resolve(&["x", "y", "z", "w"], &["x*z - y^2", "x*w - y*z", "y*w - z^2"]);
        let v = res.to_json();
        let back = Resolution::from_json(&v, res.ring()).unwrap();
        assert_eq!(back, res);
        assert!(Resolution::from_json(&serde_json::json!({"shifts": [[1]], "maps": []}), res.ring()).is_err());
    }
}
