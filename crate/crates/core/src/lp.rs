//! Exact rational linear algebra and a small two-phase simplex for
//! feasibility certificates.
//!
//! The simplex runs over `BigRational` with Bland's rule, so it terminates
//! and the certificates it produces are exact. It is used to certify the
//! pairwise-intersection condition of fans (separating functionals) and to
//! find strictly positive functionals on cones.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::IntVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
    Le,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Rel,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn from_int(coeffs: &IntVector, rel: Rel, rhs: i64) -> Self {
        Constraint {
            coeffs: coeffs
                .0
                .iter()
                .map(|c| BigRational::from(c.clone()))
                .collect(),
            rel,
            rhs: BigRational::from(BigInt::from(rhs)),
        }
    }
}

/// Find any rational point satisfying the constraints (variables are free,
/// i.e. unbounded in sign), or None if the system is infeasible.
pub fn find_feasible(num_vars: usize, constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); num_vars]);
    }
    // Standard form: x = p - n with p, n >= 0, one slack per inequality,
    // one artificial per row, rhs made nonnegative.
    let num_slacks = constraints.iter().filter(|c| c.rel != Rel::Eq).count();
    let n_total = 2 * num_vars + num_slacks + m;
    let art_offset = 2 * num_vars + num_slacks;

    let mut a = vec![vec![BigRational::zero(); n_total]; m];
    let mut b = vec![BigRational::zero(); m];
    let mut slack_idx = 2 * num_vars;
    for (r, c) in constraints.iter().enumerate() {
        assert_eq!(c.coeffs.len(), num_vars, "constraint arity mismatch");
        let flip = c.rhs.is_negative();
        let sgn = if flip {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        for (j, coef) in c.coeffs.iter().enumerate() {
            a[r][2 * j] = &sgn * coef;
            a[r][2 * j + 1] = -&a[r][2 * j];
        }
        match c.rel {
            Rel::Eq => {}
            Rel::Ge => {
                // a.x - s = rhs (or flipped)
                a[r][slack_idx] = if flip { BigRational::one() } else { -BigRational::one() };
                slack_idx += 1;
            }
            Rel::Le => {
                a[r][slack_idx] = if flip { -BigRational::one() } else { BigRational::one() };
                slack_idx += 1;
            }
        }
        b[r] = &sgn * &c.rhs;
        a[r][art_offset + r] = BigRational::one();
    }

    let mut basis: Vec<usize> = (0..m).map(|r| art_offset + r).collect();

    // Phase 1: minimize the sum of artificials.
    let cost = |j: usize| -> BigRational {
        if j >= art_offset {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    };

    loop {
        // Reduced costs r_j = c_j - c_B . column_j (tableau kept canonical).
        let mut entering = None;
        'cols: for j in 0..n_total {
            if basis.contains(&j) {
                continue;
            }
            let mut red = cost(j);
            for r in 0..m {
                if !a[r][j].is_zero() && !cost(basis[r]).is_zero() {
                    red -= cost(basis[r]) * &a[r][j];
                }
            }
            if red.is_negative() {
                entering = Some(j);
                break 'cols; // Bland: first improving column
            }
        }
        let Some(j) = entering else { break };

        // Ratio test, Bland tie-break on basis variable index.
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            if a[r][j].is_positive() {
                let ratio = &b[r] / &a[r][j];
                match &leave {
                    Some((lr, best)) => {
                        if &ratio < best || (&ratio == best && basis[r] < basis[*lr]) {
                            leave = Some((r, ratio));
                        }
                    }
                    None => leave = Some((r, ratio)),
                }
            }
        }
        let Some((r, _)) = leave else {
            // Phase-1 objective is bounded below by zero, so this cannot
            // happen on well-formed input.
            return None;
        };

        // Pivot on (r, j).
        let piv = a[r][j].clone();
        for e in a[r].iter_mut() {
            *e /= &piv;
        }
        b[r] /= &piv;
        for i in 0..m {
            if i == r || a[i][j].is_zero() {
                continue;
            }
            let f = a[i][j].clone();
            for jj in 0..n_total {
                let delta = &f * &a[r][jj];
                a[i][jj] -= delta;
            }
            let delta = &f * &b[r];
            b[i] -= delta;
        }
        basis[r] = j;
    }

    let infeasibility: BigRational = (0..m)
        .filter(|&r| basis[r] >= art_offset)
        .map(|r| b[r].clone())
        .sum();
    if !infeasibility.is_zero() {
        return None;
    }

    let mut x = vec![BigRational::zero(); num_vars];
    for r in 0..m {
        let j = basis[r];
        if j < 2 * num_vars {
            if j % 2 == 0 {
                x[j / 2] += &b[r];
            } else {
                x[j / 2] -= &b[r];
            }
        }
    }
    Some(x)
}

/// Rational functional with prescribed sign pattern on lattice vectors:
/// >= 1 on `ge`, <= -1 on `le`, = 0 on `eq`.
pub fn sign_separating_functional(
    rank: usize,
    ge: &[IntVector],
    le: &[IntVector],
    eq: &[IntVector],
) -> Option<Vec<BigRational>> {
    let mut cs = Vec::new();
    for v in ge {
        cs.push(Constraint::from_int(v, Rel::Ge, 1));
    }
    for v in le {
        cs.push(Constraint::from_int(v, Rel::Le, -1));
    }
    for v in eq {
        cs.push(Constraint::from_int(v, Rel::Eq, 0));
    }
    find_feasible(rank, &cs)
}

/// Scale a rational vector by the lcm of denominators, returning the
/// primitive integer vector with the same direction.
pub fn clear_denominators(v: &[BigRational]) -> IntVector {
    let mut lcm = BigInt::one();
    for e in v {
        lcm = lcm.lcm(e.denom());
    }
    let mut w = IntVector(
        v.iter()
            .map(|e| e.numer() * (&lcm / e.denom()))
            .collect(),
    );
    let content = w.content();
    if !content.is_zero() && !content.is_one() {
        w = IntVector(w.0.iter().map(|e| e / &content).collect());
    }
    w
}

/// Gaussian elimination solve over the rationals; inconsistency yields None
/// and free variables are fixed to zero.
pub fn solve_rational_system(
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = a.first().map_or(0, |r| r.len());
    let mut mat: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let piv = mat[row][col].clone();
        for e in mat[row].iter_mut() {
            *e /= &piv;
        }
        for i in 0..m {
            if i != row && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for jj in 0..=n {
                    let delta = &f * &mat[row][jj];
                    mat[i][jj] -= delta;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == m {
            break;
        }
    }
    for i in row..m {
        if !mat[i][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, c) in pivots {
        x[c] = mat[r][n].clone();
    }
    Some(x)
}

/// Rank of a rational matrix given as rows.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut mat: Vec<Vec<BigRational>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, p);
        let piv = mat[rank][col].clone();
        for e in mat[rank].iter_mut() {
            *e /= &piv;
        }
        for i in 0..m {
            if i != rank && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for jj in 0..n {
                    let delta = &f * &mat[rank][jj];
                    mat[i][jj] -= delta;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}
