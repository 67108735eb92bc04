//! Dense matrices over [`PiScalar`] with fraction-free row reduction.
//!
//! `Q[pi, 1/pi]` is an integral domain but not a field. Pivots that are
//! single `pi`-monomials are units and get normalized to 1; any other pivot
//! is eliminated by cross multiplication and divided out exactly at the end
//! when possible. Rank and span questions are answered exactly either way.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::PiScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<PiScalar>,
}

/// Row echelon form with the pivot column of every nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![PiScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, PiScalar::one());
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<PiScalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<PiScalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
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

    pub fn get(&self, i: usize, j: usize) -> &PiScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PiScalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<PiScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[PiScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(PiScalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols as u32, other.rows as u32));
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * m.cols + j;
                        m.data[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[PiScalar]) -> Result<Vec<PiScalar>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(self.cols as u32, v.len() as u32));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = PiScalar::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(self.rows as u32, other.rows as u32));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Row reduction restricted to the first `limit` columns for pivot
    /// search; later columns are carried along (augmented systems).
    fn echelon_limited(&self, limit: usize) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(m.cols) {
            if r == m.rows {
                break;
            }
            // prefer unit pivots, then the shortest entry
            let Some(p) = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| {
                    let x = m.get(i, c);
                    (x.as_monomial().is_none(), x.num_terms(), i)
                })
            else {
                continue;
            };
            m.swap_rows(r, p);
            let pivot = m.get(r, c).clone();
            if pivot.as_monomial().is_some() {
                for j in c..m.cols {
                    let x = m.get(r, j).div_monomial(&pivot).expect("unit pivot");
                    m.set(r, j, x);
                }
            }
            let pivot = m.get(r, c).clone();
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let a = m.get(i, c).clone();
                for j in 0..m.cols {
                    let pr = m.get(r, j);
                    let x = if pivot.is_one() {
                        if pr.is_zero() {
                            continue;
                        }
                        m.get(i, j) - &(&a * pr)
                    } else {
                        &(&pivot * m.get(i, j)) - &(&a * pr)
                    };
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        // clear leftover non-unit pivots where the whole row is divisible
        for (row, &c) in pivots.iter().enumerate() {
            let p = m.get(row, c).clone();
            if p.is_one() {
                continue;
            }
            let divided: Result<Vec<PiScalar>> =
                m.row(row).iter().map(|x| x.div_exact(&p)).collect();
            if let Ok(xs) = divided {
                for (j, x) in xs.into_iter().enumerate() {
                    m.set(row, j, x);
                }
            }
        }
        Echelon { matrix: m, pivots }
    }

    pub fn echelon(&self) -> Echelon {
        self.echelon_limited(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<PiScalar>> {
        let Echelon { matrix: m, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let pivot_vals: Vec<PiScalar> =
            pivots.iter().enumerate().map(|(r, &c)| m.get(r, c).clone()).collect();
        let all: PiScalar = pivot_vals.iter().fold(PiScalar::one(), |acc, p| &acc * p);
        free.iter()
            .map(|&f| {
                let mut x = vec![PiScalar::zero(); self.cols];
                x[f] = all.clone();
                for (r, &c) in pivots.iter().enumerate() {
                    let a = m.get(r, f);
                    if a.is_zero() {
                        continue;
                    }
                    let others = pivot_vals
                        .iter()
                        .enumerate()
                        .filter(|(r2, _)| *r2 != r)
                        .fold(PiScalar::one(), |acc, (_, p)| &acc * p);
                    x[c] = -(a * &others);
                }
                x
            })
            .collect()
    }

    /// One solution of `self * x = b`, with every free variable set to zero.
    pub fn solve(&self, b: &[PiScalar]) -> Result<Vec<PiScalar>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(self.rows as u32, b.len() as u32));
        }
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]))?;
        let Echelon { matrix: m, pivots } = aug.echelon_limited(self.cols);
        for i in pivots.len()..m.rows {
            if !m.get(i, self.cols).is_zero() {
                return Err(Error::Inconsistent);
            }
        }
        let mut x = vec![PiScalar::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = m.get(r, self.cols).div_exact(m.get(r, c))?;
        }
        Ok(x)
    }

    /// Whether `v` lies in the column span.
    pub fn spans(&self, v: &[PiScalar]) -> bool {
        match self.solve(v) {
            Ok(_) => true,
            Err(Error::Inconsistent) => false,
            // solvable over Q(pi) even when a quotient leaves Q[pi, 1/pi]
            Err(_) => true,
        }
    }

    /// Dimension of the intersection of the column spans.
    pub fn intersection_dim(&self, other: &Matrix) -> Result<usize> {
        Ok(self.rank() + other.rank() - self.hstack(other)?.rank())
    }

    /// Whether both matrices have the same column span.
    pub fn same_span(&self, other: &Matrix) -> Result<bool> {
        let r = self.hstack(other)?.rank();
        Ok(r == self.rank() && r == other.rank())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| PiScalar::from_int(x)).collect()).collect(),
        )
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).unwrap().iter().all(PiScalar::is_zero));
    }

    #[test]
    fn non_unit_pivots() {
        let p1 = PiScalar::pi() + PiScalar::one();
        let a = Matrix::from_rows(vec![
            vec![p1.clone(), PiScalar::from_int(1)],
            vec![PiScalar::from_int(1), PiScalar::pi() - PiScalar::one()],
        ]);
        // det = pi^2 - 1 - 1 != 0
        assert_eq!(a.rank(), 2);
        let b = Matrix::from_rows(vec![
            vec![p1.clone(), &p1 * &p1],
            vec![PiScalar::from_int(2), &p1 * &PiScalar::from_int(2)],
        ]);
        assert_eq!(b.rank(), 1);
        let ns = b.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(b.mul_vec(&ns[0]).unwrap().iter().all(PiScalar::is_zero));
    }

    #[test]
    fn solve_and_span() {
        let a = m(&[&[1, 0], &[0, 2], &[1, 2]]);
        let b: Vec<PiScalar> = [3, 4, 7].iter().map(|&x| PiScalar::from_int(x)).collect();
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        let bad: Vec<PiScalar> = [3, 4, 0].iter().map(|&x| PiScalar::from_int(x)).collect();
        assert!(matches!(a.solve(&bad), Err(Error::Inconsistent)));
        assert!(!a.spans(&bad));
        let c = m(&[&[1], &[2], &[3]]);
        assert_eq!(a.intersection_dim(&c).unwrap(), 1);
    }

    fn arb_matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec((-2i64..=2, -1i32..=1), r * c).prop_map(move |xs| {
            let mut mm = Matrix::zeros(r, c);
            for (idx, (v, p)) in xs.into_iter().enumerate() {
                mm.set(idx / c, idx % c, PiScalar::from_int(v).shift(p));
            }
            mm
        })
    }

    proptest! {
        #[test]
        fn nullspace_is_kernel(a in arb_matrix(3, 4)) {
            let ns = a.nullspace();
            prop_assert_eq!(ns.len() + a.rank(), 4);
            for v in &ns {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(PiScalar::is_zero));
            }
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn solve_recovers_image(a in arb_matrix(4, 3), x in prop::collection::vec(-3i64..=3, 3)) {
            let x: Vec<PiScalar> = x.into_iter().map(PiScalar::from_int).collect();
            let b = a.mul_vec(&x).unwrap();
            let y = a.solve(&b).unwrap();
            prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
        }
    }
}
