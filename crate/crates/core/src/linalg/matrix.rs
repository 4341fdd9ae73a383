//! Dense matrices over a [`FieldSpec`] with exact elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{pow_mod, FieldSpec, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>, // row-major
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        debug_assert!(data.iter().all(|s| s.field() == field));
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix::new(field, rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    /// Column vector.
    pub fn column_vector(field: FieldSpec, v: &[Scalar]) -> Self {
        Matrix::new(field, v.len(), 1, v.to_vec())
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix::new(
            self.field,
            self.rows,
            self.cols,
            self.data.iter().map(|v| v * s).collect(),
        )
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        Matrix::new(
            self.field,
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        Matrix::new(
            self.field,
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        )
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: &Scalar, other: &Matrix) {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add_scaled");
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = &*a + &(s * b);
            }
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in mul: {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        match self.field {
            FieldSpec::Prime { p } => {
                let a = to_residues(&self.data);
                let b = to_residues(&other.data);
                let (n, k, m) = (self.rows, self.cols, other.cols);
                let mut out = vec![0u64; n * m];
                for i in 0..n {
                    for l in 0..k {
                        let x = a[i * k + l];
                        if x == 0 {
                            continue;
                        }
                        let brow = &b[l * m..(l + 1) * m];
                        let orow = &mut out[i * m..(i + 1) * m];
                        for (o, &y) in orow.iter_mut().zip(brow) {
                            *o = (*o + x * y) % p;
                        }
                    }
                }
                Matrix::new(
                    self.field,
                    n,
                    m,
                    out.into_iter().map(|v| Scalar::Fp { v, p }).collect(),
                )
            }
            FieldSpec::Rational => {
                let mut out = Matrix::zeros(self.field, self.rows, other.cols);
                for i in 0..self.rows {
                    for l in 0..self.cols {
                        let x = &self[(i, l)];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..other.cols {
                            let y = &other[(l, j)];
                            if !y.is_zero() {
                                out[(i, j)] = &out[(i, j)] + &(x * y);
                            }
                        }
                    }
                }
                out
            }
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.mul(&Matrix::column_vector(self.field, v)).data
    }

    /// Side-by-side concatenation; all parts share the row count.
    pub fn hstack(field: FieldSpec, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }

    /// Stacked concatenation; all parts share the column count.
    pub fn vstack(field: FieldSpec, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            out.set_block(off, 0, m);
            off += m.rows;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form. Pivots are taken column by column, using
    /// the first row with a nonzero entry, so the result is deterministic.
    pub fn rref(&self) -> Rref {
        let (data, pivots) = match self.field {
            FieldSpec::Prime { p } => {
                let mut d = to_residues(&self.data);
                let piv = eliminate(&ModP(p), &mut d, self.rows, self.cols);
                (d.into_iter().map(|v| Scalar::Fp { v, p }).collect(), piv)
            }
            FieldSpec::Rational => {
                let mut d: Vec<BigRational> = self
                    .data
                    .iter()
                    .map(|s| match s {
                        Scalar::Q(q) => q.clone(),
                        Scalar::Fp { .. } => unreachable!("prime scalar in rational matrix"),
                    })
                    .collect();
                let piv = eliminate(&Rat, &mut d, self.rows, self.cols);
                (d.into_iter().map(Scalar::Q).collect(), piv)
            }
        };
        Rref {
            matrix: Matrix::new(self.field, self.rows, self.cols, data),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns spanning the right kernel, one per free column, in the
    /// standard echelon normalization (free variable = 1, others free = 0).
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (jj, &f) in free.iter().enumerate() {
            k[(f, jj)] = self.field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                k[(pc, jj)] = -&r[(row, f)];
            }
        }
        k
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side has length {} but matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = Matrix::hstack(
            self.field,
            self.rows,
            &[self, &Matrix::column_vector(self.field, b)],
        );
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return self.field.zero();
            };
            if pr != c {
                for j in 0..n {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(c, j)].clone();
                    m[(c, j)] = tmp;
                }
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = &det * &pivot;
            let inv = pivot.inv();
            for r in c + 1..n {
                let f = &m[(r, c)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = &m[(r, j)] - &(&f * &m[(c, j)]);
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Matrix::hstack(self.field, n, &[self, &Matrix::identity(self.field, n)]);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
            if i + 1 < self.rows {
                f.write_str(", ")?;
            }
        }
        f.write_str("]")
    }
}

fn to_residues(data: &[Scalar]) -> Vec<u64> {
    data.iter()
        .map(|s| s.residue().expect("rational scalar in prime matrix"))
        .collect()
}

trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn zero(&self) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// a - f * b
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct ModP(u64);

impl Arith for ModP {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn zero(&self) -> u64 {
        0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        (a + self.0 - f * b % self.0) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        pow_mod(*a, self.0 - 2, self.0)
    }
}

struct Rat;

impl Arith for Rat {
    type E = BigRational;
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, a: &BigRational, f: &BigRational, b: &BigRational) -> BigRational {
        a - f * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        BigRational::one() / a
    }
}

fn eliminate<A: Arith>(ar: &A, d: &mut [A::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !ar.is_zero(&d[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                d.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = ar.inv(&d[r * cols + c]);
        for j in c..cols {
            let v = ar.mul(&d[r * cols + j], &inv);
            d[r * cols + j] = v;
        }
        let pivot_row: Vec<A::E> = d[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = d[i * cols + c].clone();
            if ar.is_zero(&f) {
                continue;
            }
            for j in c..cols {
                if ar.is_zero(&pivot_row[j]) {
                    continue;
                }
                let v = ar.sub_mul(&d[i * cols + j], &f, &pivot_row[j]);
                d[i * cols + j] = v;
            }
            d[i * cols + c] = ar.zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}
