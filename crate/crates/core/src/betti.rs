//! Graded Betti numbers of `S/J` computed independently of any resolution,
//! as dimensions of Koszul homology: `beta_{k,j} = dim H_k(x; S/J)_j`.
//!
//! Each graded piece of `S/J` is spanned by the standard monomials of a
//! Gröbner basis, so every Koszul differential becomes a rational matrix and
//! homology dimensions follow from ranks. Used to cross-check resolutions.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::groebner::GroebnerBasis;
use crate::linalg::rank;
use crate::poly::{monomials_of_degree, Monomial, Rat, RatPoly};

/// Standard-monomial basis of `(S/J)_t` with an index lookup.
struct Piece {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn piece(gb: &GroebnerBasis, t: u32) -> Piece {
    let basis: Vec<Monomial> =
        monomials_of_degree(gb.ring().nvars(), t).into_iter().filter(|m| gb.is_standard(m)).collect();
    let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    Piece { basis, index }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Matrix of the Koszul differential `K_k -> K_{k-1}` in internal degree `j`,
/// as rows indexed by the target basis.
fn differential(gb: &GroebnerBasis, pieces: &mut HashMap<u32, Piece>, k: usize, j: u32) -> (Vec<Vec<Rat>>, usize) {
    let n = gb.ring().nvars();
    let src_t = j - k as u32;
    let dst_t = src_t + 1;
    for t in [src_t, dst_t] {
        pieces.entry(t).or_insert_with(|| piece(gb, t));
    }
    let src_sets = subsets(n, k);
    let dst_sets = subsets(n, k - 1);
    let dst_index: HashMap<&Vec<usize>, usize> = dst_sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let (src, dst) = (&pieces[&src_t], &pieces[&dst_t]);
    let ncols = src_sets.len() * src.basis.len();
    let nrows = dst_sets.len() * dst.basis.len();
    let mut rows = vec![vec![Rat::zero(); ncols]; nrows];
    let ring = gb.ring();
    for (si, set) in src_sets.iter().enumerate() {
        for (mi, m) in src.basis.iter().enumerate() {
            let col = si * src.basis.len() + mi;
            for (pos, &v) in set.iter().enumerate() {
                let sign = if pos % 2 == 0 { Rat::one() } else { -Rat::one() };
                let mut rest = set.clone();
                rest.remove(pos);
                let block = dst_index[&rest];
                let prod = RatPoly::monomial(ring, m.mul(&Monomial::var(n, v, 1)), Rat::one());
                let nf = gb.normal_form(&prod).expect("same ring");
                for (mm, c) in nf.terms() {
                    let row = block * dst.basis.len() + dst.index[mm];
                    rows[row][col] += c * &sign;
                }
            }
        }
    }
    (rows, ncols)
}

/// Graded Betti numbers `beta_{k,j}` of `S/J` for internal degrees `j <= max_degree`.
/// Only nonzero entries are returned.
pub fn koszul_betti_numbers(gb: &GroebnerBasis, max_degree: u32) -> BTreeMap<(usize, u32), usize> {
    let n = gb.ring().nvars();
    let mut pieces: HashMap<u32, Piece> = HashMap::new();
    let mut ranks: HashMap<(usize, u32), usize> = HashMap::new();
    let mut out = BTreeMap::new();
    for j in 0..=max_degree {
        for k in 1..=n.min(j as usize) {
            let (m, ncols) = differential(gb, &mut pieces, k, j);
            ranks.insert((k, j), if m.is_empty() { 0 } else { rank(&m, ncols) });
        }
        for k in 0..=n.min(j as usize) {
            let t = j - k as u32;
            let dim_piece = pieces.entry(t).or_insert_with(|| piece(gb, t)).basis.len();
            let dim = subsets(n, k).len() * dim_piece;
            let r_out = if k == 0 { 0 } else { ranks[&(k, j)] };
            let r_in = ranks.get(&(k + 1, j)).copied().unwrap_or(0);
            let h = dim - r_out - r_in;
            if h > 0 {
                out.insert((k, j), h);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::groebner_basis;
    use crate::parse::parse_poly;
    use crate::poly::{MonomialOrder, Ring};

    fn betti(vars: &[&str], gens: &[&str], max: u32) -> BTreeMap<(usize, u32), usize> {
        let r = Ring::grevlex(vars.iter().copied());
        let g: Vec<RatPoly> = gens.iter().map(|t| parse_poly(t, &r).unwrap()).collect();
        koszul_betti_numbers(&groebner_basis(&r, &g, MonomialOrder::GrevLex).unwrap(), max)
    }

    #[test]
    fn koszul_complex_of_two_variables() {
        let b = betti(&["x", "y"], &["x", "y"], 5);
        assert_eq!(b, BTreeMap::from([((0, 0), 1), ((1, 1), 2), ((2, 2), 1)]));
    }

    #[test]
    fn twisted_cubic_table() {
        let b = betti(&["x", "y", "z", "w"], &["x*z - y^2", "x*w - y*z", "y*w - z^2"], 6);
        assert_eq!(b, BTreeMap::from([((0, 0), 1), ((1, 2), 3), ((2, 3), 2)]));
    }

    #[test]
    fn zero_ideal() {
        let b = betti(&["x", "y", "z"], &[], 4);
        assert_eq!(b, BTreeMap::from([((0, 0), 1)]));
    }
}
