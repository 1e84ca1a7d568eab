//! Exact integer linear algebra: vectors, matrices, Smith normal form,
//! integer linear solving and quotient-lattice projections.
//!
//! Everything is arbitrary precision. The Smith normal form drives the
//! unimodularity checks on cones, the construction of quotient lattices for
//! star fans, and the invariant-factor normalization of abelian groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::{Error, Result};

/// A point of the lattice N (or its dual M) in fixed coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| e.is_zero())
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |acc, e| acc.gcd(e))
    }

    /// Nonzero with entry gcd one.
    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        assert_eq!(self.len(), other.len(), "dot of unequal lengths");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.len(), other.len());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.len(), other.len());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * c).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &e) in row.iter().enumerate() {
                *m.at_mut(i, j) = BigInt::from(e);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[IntVector], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for i in 0..rows {
                *m.at_mut(i, j) = col.0[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self.at(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        IntVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v.0[j]).sum())
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[i] += c * row[k]
    fn add_row_multiple(&mut self, i: usize, k: usize, c: &BigInt) {
        for j in 0..self.cols {
            let delta = c * self.at(k, j);
            *self.at_mut(i, j) += delta;
        }
    }

    /// col[j] += c * col[k]
    fn add_col_multiple(&mut self, j: usize, k: usize, c: &BigInt) {
        for i in 0..self.rows {
            let delta = c * self.at(i, k);
            *self.at_mut(i, j) += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                let pivot_row = (k + 1..n).find(|&i| !m.at(i, k).is_zero());
                match pivot_row {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    *m.at_mut(i, j) = q;
                }
                *m.at_mut(i, k) = BigInt::zero();
            }
            prev = m.at(k, k).clone();
        }
        sign * m.at(n - 1, n - 1).clone()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// U * A * V = D with U, V unimodular and D diagonal, nonnegative, each
/// invariant factor dividing the next.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of D up to min(rows, cols).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .filter(|f| !f.is_zero())
            .count()
    }
}

/// Pivot rule: smallest nonzero absolute value in the trailing submatrix,
/// ties broken by lowest (row, col). Fixed for deterministic output.
fn find_pivot(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..m.rows() {
        for j in k..m.cols() {
            let e = m.at(i, j);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            match &best {
                Some((cur, _, _)) if *cur <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form over the integers by elementary row and column
/// operations, tracking the unimodular transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&d, k) else {
            break;
        };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);

        // Clear row and column k; re-pivot whenever a remainder undercuts
        // the current pivot. Terminates because |pivot| strictly decreases.
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if !d.at(i, k).is_zero() {
                    let q = -(d.at(i, k) / d.at(k, k));
                    d.add_row_multiple(i, k, &q);
                    u.add_row_multiple(i, k, &q);
                    if !d.at(i, k).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !d.at(k, j).is_zero() {
                    let q = -(d.at(k, j) / d.at(k, k));
                    d.add_col_multiple(j, k, &q);
                    v.add_col_multiple(j, k, &q);
                    if !d.at(k, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let (pi, pj) = find_pivot(&d, k).expect("pivot cannot vanish");
                d.swap_rows(k, pi);
                u.swap_rows(k, pi);
                d.swap_cols(k, pj);
                v.swap_cols(k, pj);
                continue;
            }

            // Pivot must divide every remaining entry so the diagonal forms
            // a divisibility chain.
            let mut offender = None;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(d.at(i, j) % d.at(k, k)).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }

        if d.at(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }

    SmithDecomposition { u, d, v }
}

/// Solve A x = b exactly over the integers. Absence of a solution is a
/// value, not an error. When the kernel is nontrivial the free coordinates
/// are fixed to zero, making the output deterministic.
pub fn solve_integer_system(a: &IntMatrix, b: &IntVector) -> Option<IntVector> {
    assert_eq!(a.rows(), b.len(), "solve shape mismatch");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let n = a.cols();
    let mut y = IntVector::zeros(n);
    for i in 0..a.rows() {
        let di = if i < n {
            snf.d.at(i, i).clone()
        } else {
            BigInt::zero()
        };
        if di.is_zero() {
            if !c.0[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.0[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y.0[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Projection N -> N / saturated span of the generators, as a surjective
/// integer matrix whose kernel is exactly the integer span. The generators
/// must extend to a lattice basis (all Smith invariant factors one), which
/// holds for the rays of a unimodular cone.
pub fn quotient_projection(span_generators: &[IntVector], ambient_rank: usize) -> Result<IntMatrix> {
    let k = span_generators.len();
    for g in span_generators {
        if g.len() != ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "generator length {} in ambient rank {}",
                g.len(),
                ambient_rank
            )));
        }
    }
    if k == 0 {
        return Ok(IntMatrix::identity(ambient_rank));
    }
    let g = IntMatrix::from_columns(span_generators, ambient_rank);
    let snf = smith_normal_form(&g);
    let factors = snf.invariant_factors();
    if factors.len() < k || factors.iter().take(k).any(|f| !f.is_one()) {
        return Err(Error::NotPrimitiveExtendable(format!(
            "invariant factors {:?}",
            factors.iter().map(|f| f.to_string()).collect::<Vec<_>>()
        )));
    }
    // U*G has the identity in its top k rows; the remaining rows of U
    // annihilate the generators and map onto the quotient lattice.
    let mut p = IntMatrix::zeros(ambient_rank - k, ambient_rank);
    for i in k..ambient_rank {
        for j in 0..ambient_rank {
            *p.at_mut(i - k, j) = snf.u.at(i, j).clone();
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.d, "U*A*V != D");
        assert_eq!(snf.u.det().abs(), BigInt::one(), "U not unimodular");
        assert_eq!(snf.v.det().abs(), BigInt::one(), "V not unimodular");
        let f = snf.invariant_factors();
        for w in f.windows(2) {
            if !w[1].is_zero() || w[0].is_zero() {
                assert!(
                    w[0].is_zero() && w[1].is_zero() || (&w[1] % &w[0]).is_zero(),
                    "divisibility chain broken: {:?}",
                    f
                );
            }
        }
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d.at(i, j).is_zero(), "D not diagonal");
                }
            }
        }
        snf
    }

    #[test]
    fn snf_divisibility_normalization() {
        // Hand row/column reduction: diag(2,3) ~ diag(1,6).
        let a = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let snf = check_snf(&a);
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(3);
        let snf = check_snf(&a);
        assert_eq!(snf.d, IntMatrix::identity(3));
    }

    #[test]
    fn snf_zero() {
        let a = IntMatrix::from_rows(vec![vec![0]]);
        let snf = check_snf(&a);
        assert_eq!(snf.d, IntMatrix::from_rows(vec![vec![0]]));
    }

    #[test]
    fn snf_random_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let rows = rng.random_range(1..=4);
            let cols = rng.random_range(1..=4);
            let mut a = IntMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    *a.at_mut(i, j) = BigInt::from(rng.random_range(-9i64..=9));
                }
            }
            check_snf(&a);
        }
    }

    #[test]
    fn solve_identity() {
        let a = IntMatrix::identity(2);
        let b = IntVector::from_i64(&[3, 5]);
        assert_eq!(solve_integer_system(&a, &b), Some(b));
    }

    #[test]
    fn solve_parity_obstruction() {
        let a = IntMatrix::from_rows(vec![vec![2]]);
        let b = IntVector::from_i64(&[1]);
        assert_eq!(solve_integer_system(&a, &b), None);
    }

    #[test]
    fn solve_back_substitution() {
        // Oracle: x1 = 1 from the second row, then x0 = 2 - 1 = 1.
        let a = IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]);
        let b = IntVector::from_i64(&[2, 1]);
        assert_eq!(
            solve_integer_system(&a, &b),
            Some(IntVector::from_i64(&[1, 1]))
        );
    }

    #[test]
    fn solve_only_exact_solutions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..80 {
            let rows = rng.random_range(1..=3);
            let cols = rng.random_range(1..=3);
            let mut a = IntMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    *a.at_mut(i, j) = BigInt::from(rng.random_range(-4i64..=4));
                }
            }
            let b = IntVector(
                (0..rows)
                    .map(|_| BigInt::from(rng.random_range(-6i64..=6)))
                    .collect(),
            );
            if let Some(x) = solve_integer_system(&a, &b) {
                assert_eq!(a.mul_vec(&x), b, "claimed solution does not solve");
            }
        }
    }

    #[test]
    fn projection_of_axis() {
        let p = quotient_projection(&[IntVector::from_i64(&[1, 0])], 2).unwrap();
        assert_eq!(p.rows(), 1);
        assert!(p.mul_vec(&IntVector::from_i64(&[1, 0])).is_zero());
        // Surjectivity: invariant factors of P are all one.
        let snf = smith_normal_form(&p);
        assert!(snf.invariant_factors().iter().all(|f| f.is_one()));
    }

    #[test]
    fn projection_of_nothing_is_identity() {
        let p = quotient_projection(&[], 2).unwrap();
        assert!(p.is_identity());
    }

    #[test]
    fn projection_of_diagonal() {
        let p = quotient_projection(&[IntVector::from_i64(&[1, 1])], 2).unwrap();
        assert!(p.mul_vec(&IntVector::from_i64(&[1, 1])).is_zero());
        assert!(!p.mul_vec(&IntVector::from_i64(&[1, 0])).is_zero());
        let snf = smith_normal_form(&p);
        assert!(snf.invariant_factors().iter().all(|f| f.is_one()));
    }

    #[test]
    fn projection_rejects_non_extendable() {
        assert!(quotient_projection(&[IntVector::from_i64(&[2, 0])], 2).is_err());
        assert!(quotient_projection(
            &[IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[1, 0])],
            2
        )
        .is_err());
    }

    #[test]
    fn projection_kernel_is_span() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // {e1} and random unimodular images of it.
        for _ in 0..30 {
            let g = IntVector(vec![
                BigInt::from(rng.random_range(-3i64..=3)),
                BigInt::from(rng.random_range(-3i64..=3)),
                BigInt::from(rng.random_range(-3i64..=3)),
            ]);
            if !g.is_primitive() {
                continue;
            }
            let p = quotient_projection(std::slice::from_ref(&g), 3).unwrap();
            assert!(p.mul_vec(&g).is_zero());
            for k in -3i64..=3 {
                assert!(p.mul_vec(&g.scale(&BigInt::from(k))).is_zero());
            }
        }
    }
}
