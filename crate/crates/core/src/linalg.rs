//! Exact linear algebra over the rationals.
//!
//! Rows are cleared of denominators and reduced to echelon form with
//! Bareiss' fraction-free elimination, so every intermediate entry is an
//! integer minor of the input and the division at each step is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Rat;

/// Echelon form of an integer matrix together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect()
}

/// Bareiss elimination with row pivoting. Rows past the rank are dropped.
pub fn bareiss(mut a: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col..ncols {
                let v = &piv * &row[j] - &f * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            // entries left of the pivot column are already zero
        }
        prev = piv;
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    let a = rows.iter().map(|r| integer_row(r)).collect();
    bareiss(a, ncols).pivots.len()
}

/// Solves `A x = b`. Free unknowns are set to zero, so unknowns placed in
/// early columns are preferred in the returned solution.
pub fn solve(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    assert_eq!(a.len(), b.len());
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            integer_row(&full)
        })
        .collect();
    let ech = bareiss(aug, ncols + 1);
    if ech.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots).rev() {
        let mut acc = Rat::from_integer(row[ncols].clone());
        for j in pc + 1..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= Rat::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[pc] = acc / Rat::from_integer(row[pc].clone());
    }
    Some(x)
}

/// Basis of the right kernel of a rational matrix.
pub fn kernel(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let a = rows.iter().map(|r| integer_row(r)).collect();
    let ech = bareiss(a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![Rat::zero(); ncols];
            x[fc] = Rat::one();
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots).rev() {
                let mut acc = Rat::zero();
                for j in pc + 1..ncols {
                    if !row[j].is_zero() && !x[j].is_zero() {
                        acc -= Rat::from_integer(row[j].clone()) * &x[j];
                    }
                }
                x[pc] = acc / Rat::from_integer(row[pc].clone());
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn rank_of_singular_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]]), 2), 0);
    }

    #[test]
    fn solves_with_rationals() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[rat(1), rat(2)], 2).unwrap();
        assert_eq!(x, vec![ratio(1, 5), ratio(3, 5)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[rat(1), rat(3)], 2).is_none());
    }

    #[test]
    fn free_unknowns_are_zero() {
        let a = m(&[&[1, 1, 1]]);
        assert_eq!(solve(&a, &[rat(4)], 3).unwrap(), vec![rat(4), rat(0), rat(0)]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = vec![vec![rat(1), ratio(1, 2), rat(0), rat(2)], vec![rat(0), rat(1), rat(1), rat(-1)]];
        let ker = kernel(&a, 4);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &a {
                let s: Rat = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn bareiss_entries_stay_integral_minors() {
        // determinant of a 3x3 integer matrix appears as the last pivot
        let a = vec![
            vec![BigInt::from(2), BigInt::from(3), BigInt::from(1)],
            vec![BigInt::from(4), BigInt::from(1), BigInt::from(5)],
            vec![BigInt::from(7), BigInt::from(2), BigInt::from(6)],
        ];
        let e = bareiss(a, 3);
        assert_eq!(e.rows[2][2], BigInt::from(2 * (6 - 10) - 3 * (24 - 35) + (8 - 7)));
    }
}
