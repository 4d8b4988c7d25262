//! Exact dense linear algebra over a [`Field`]: rank, reduced row echelon
//! form, and canonical nullspace bases.
//!
//! The forward pass eliminates fraction-free (cross-multiplied rows, then
//! divided by their rational content) so coefficient growth stays polynomial;
//! the back pass normalizes pivots to 1. The nullspace basis is itself put in
//! reduced echelon form, so it is canonical for a given matrix.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::MatrixShape {
                rows,
                cols,
                want: rows * cols,
                got: entries.len(),
            });
        }
        if !entries.iter().all(|s| field.contains(s)) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::MatrixShape {
                rows: nrows,
                cols: ncols,
                want: nrows * ncols,
                got: rows.iter().map(Vec::len).sum(),
            });
        }
        Matrix::new(field, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    fn to_row_vecs(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.cols).map(<[_]>::to_vec).collect()
    }

    pub fn rank(&self) -> usize {
        let mut work = self.to_row_vecs();
        forward_eliminate(self.field, &mut work).len()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut work = self.to_row_vecs();
        let pivots = forward_eliminate(self.field, &mut work);
        back_substitute(self.field, &mut work, &pivots);
        let m = Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: work.into_iter().flatten().collect(),
        };
        (m, pivots.into_iter().map(|(_, c)| c).collect())
    }

    /// Canonical basis of the right nullspace: the rows of the returned list,
    /// viewed as a matrix, are in reduced echelon form (leftmost pivots,
    /// pivot entries 1). Empty when the matrix has full column rank.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        for free_col in 0..self.cols {
            if pivot_set[free_col].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free_col] = f.one();
            for (col, row) in pivot_set.iter().enumerate() {
                if let Some(row) = row {
                    v[col] = f.neg(r.at(*row, free_col));
                }
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        // Canonicalize the basis itself.
        let pivots = forward_eliminate(f, &mut basis);
        back_substitute(f, &mut basis, &pivots);
        basis.truncate(pivots.len());
        basis
    }
}

/// Forward elimination in place. Returns (row, col) pivot positions in order.
/// Row order below each pivot is reduced fraction-free: the updated row is
/// `pivot*row - factor*pivot_row`, then divided by its content.
fn forward_eliminate(field: Field, work: &mut [Vec<Scalar>]) -> Vec<(usize, usize)> {
    let rows = work.len();
    let cols = work.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        if next_row == rows {
            break;
        }
        let Some(pivot_row) = (next_row..rows).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(next_row, pivot_row);
        divide_by_content(field, &mut work[next_row]);
        let pivot = work[next_row][col].clone();
        for r in next_row + 1..rows {
            if work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for c in col..cols {
                let scaled = field.mul(&pivot, &work[r][c]);
                let correction = field.mul(&factor, &work[next_row][c]);
                work[r][c] = field.sub(&scaled, &correction);
            }
            divide_by_content(field, &mut work[r]);
        }
        pivots.push((next_row, col));
        next_row += 1;
    }
    pivots
}

/// Scales pivots to 1 and clears entries above them.
fn back_substitute(field: Field, work: &mut [Vec<Scalar>], pivots: &[(usize, usize)]) {
    let cols = work.first().map_or(0, Vec::len);
    for &(prow, pcol) in pivots.iter().rev() {
        let inv = field
            .inv(&work[prow][pcol])
            .expect("pivot entries are nonzero");
        for c in pcol..cols {
            work[prow][c] = field.mul(&inv, &work[prow][c]);
        }
        for r in 0..prow {
            if work[r][pcol].is_zero() {
                continue;
            }
            let factor = work[r][pcol].clone();
            for c in pcol..cols {
                let correction = field.mul(&factor, &work[prow][c]);
                work[r][c] = field.sub(&work[r][c], &correction);
            }
        }
    }
}

/// Divides a row by the gcd of its rational components (and clears
/// denominators), keeping entries primitive. No-op over prime fields.
fn divide_by_content(field: Field, row: &mut [Scalar]) {
    if matches!(field.descriptor(), FieldDescriptor::Prime { .. }) {
        return;
    }
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for s in row.iter() {
        for part in s.rational_parts() {
            if part.is_zero() {
                continue;
            }
            num_gcd = num_gcd.gcd(&part.numer().abs());
            den_lcm = den_lcm.lcm(part.denom());
        }
    }
    if num_gcd.is_zero() {
        return; // zero row
    }
    let factor = BigRational::new(den_lcm, num_gcd);
    if factor.is_one() {
        return;
    }
    let factor = match field.descriptor() {
        FieldDescriptor::Rational => Scalar::Rational(factor),
        FieldDescriptor::Quadratic { d } => Scalar::Quadratic {
            d,
            re: factor,
            rt: BigRational::zero(),
        },
        FieldDescriptor::Prime { .. } => unreachable!(),
    };
    for s in row.iter_mut() {
        *s = field.mul(s, &factor);
    }
}
