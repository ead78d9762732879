//! Dense exact matrices and Gaussian elimination over Q and F_p.

use std::fmt;

use crate::error::EngineError;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for x in &row {
                assert_eq!(x.field(), field, "entry field mismatch");
            }
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            field,
            data,
        }
    }

    pub fn from_int_rows(field: Field, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&n| Scalar::from_int(field, n)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_slice(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.field, other.field);
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&Scalar::one(self.field).neg()))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.mul(s);
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut r = self.row(i);
            r.extend(other.row(i));
            rows.push(r);
        }
        Matrix::from_rows(self.field, rows)
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut m = self.clone();
        m.rows += other.rows;
        m.data.extend(other.data.iter().cloned());
        m
    }

    /// Reduced row-echelon form with rank and pivot columns.
    pub fn rref(&self) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..m.cols {
            if lead >= m.rows {
                break;
            }
            let Some(pivot_row) = (lead..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, pivot_row);
            let inv = m.get(lead, col).inv().expect("pivot nonzero");
            m.scale_row(lead, &inv);
            for r in 0..m.rows {
                if r != lead && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).neg();
                    m.add_scaled_row(lead, r, &factor);
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots.len(), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(r, j).mul(s);
            self.set(r, j, v);
        }
    }

    /// row[to] += s * row[from]
    fn add_scaled_row(&mut self, from: usize, to: usize, s: &Scalar) {
        for j in 0..self.cols {
            if self.get(from, j).is_zero() {
                continue;
            }
            let v = self.get(to, j).add(&self.get(from, j).mul(s));
            self.set(to, j, v);
        }
    }

    /// Columns form a basis of { x : self * x = 0 }.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, rank, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, Scalar::one(self.field));
            for (prow, &pc) in pivots.iter().enumerate().take(rank) {
                out.set(pc, k, r.get(prow, fc).neg());
            }
        }
        out
    }

    /// Rows form a basis of { v : v * self = 0 }.
    pub fn left_kernel_basis(&self) -> Matrix {
        self.transpose().kernel_basis().transpose()
    }

    /// Some x with self * x = b, or None when inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>, EngineError> {
        if self.rows != b.rows {
            return Err(EngineError::DimensionMismatch(format!(
                "solve: {} equations vs rhs with {} rows",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b);
        let (r, _, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None); // pivot in the rhs block: inconsistent
        }
        let mut x = Matrix::zero(self.field, self.cols, b.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(prow, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn invert(&self) -> Result<Option<Matrix>, EngineError> {
        if self.rows != self.cols {
            return Err(EngineError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let aug = self.hstack(&Matrix::identity(self.field, self.rows));
        let (r, _, pivots) = aug.rref();
        // invertible iff the pivots are exactly the columns of the left block
        if pivots.len() < self.rows || pivots.iter().take(self.rows).any(|&c| c >= self.rows) {
            return Ok(None);
        }
        let mut inv = Matrix::zero(self.field, self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                inv.set(i, j, r.get(i, self.rows + j).clone());
            }
        }
        Ok(Some(inv))
    }

    /// tr(a * b) without forming the product.
    pub fn trace_of_product(a: &Matrix, b: &Matrix) -> Scalar {
        assert_eq!(a.cols, b.rows);
        assert_eq!(a.rows, b.cols);
        let mut t = Scalar::zero(a.field);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if x.is_zero() {
                    continue;
                }
                let y = b.get(k, i);
                if !y.is_zero() {
                    t = t.add(&x.mul(y));
                }
            }
        }
        t
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = Scalar::zero(self.field);
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        t
    }

    /// Block-diagonal assembly.
    pub fn block_diag(field: Field, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained reduced row-echelon span, used for spinning
/// submodules and assembling quotient bases.
#[derive(Debug, Clone)]
pub struct RowSpan {
    field: Field,
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(field: Field, cols: usize) -> Self {
        RowSpan {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce v against the span; the residue is zero iff v is in the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for j in 0..self.cols {
                if !row[j].is_zero() {
                    v[j] = v[j].sub(&c.mul(&row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().unwrap();
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        // back-reduce existing rows against the new pivot
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for j in 0..self.cols {
                    if !v[j].is_zero() {
                        row[j] = row[j].sub(&c.mul(&v[j]));
                    }
                }
            }
        }
        let pos = self.pivots.iter().position(|&q| q > p).unwrap_or(self.rows.len());
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        true
    }

    pub fn basis_matrix(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::zero(self.field, 0, self.cols);
        }
        Matrix::from_rows(self.field, self.rows.clone())
    }
}

/// Precomputed elimination of a fixed independent row basis, answering
/// "express v as a combination of the basis rows" in O(k * n) per query.
#[derive(Debug, Clone)]
pub struct RowSolver {
    basis_rows: usize,
    rref: Matrix,
    pivots: Vec<usize>,
    transform: Matrix, // rref = transform * basis
}

impl RowSolver {
    pub fn new(basis: &Matrix) -> Self {
        let aug = basis.hstack(&Matrix::identity(basis.field(), basis.rows()));
        let (r, rank, pivots_aug) = aug.rref();
        assert_eq!(rank, basis.rows(), "RowSolver needs independent rows");
        let pivots: Vec<usize> = pivots_aug.into_iter().filter(|&c| c < basis.cols()).collect();
        assert_eq!(pivots.len(), basis.rows());
        let mut rref = Matrix::zero(basis.field(), basis.rows(), basis.cols());
        let mut transform = Matrix::zero(basis.field(), basis.rows(), basis.rows());
        for i in 0..basis.rows() {
            for j in 0..basis.cols() {
                rref.set(i, j, r.get(i, j).clone());
            }
            for j in 0..basis.rows() {
                transform.set(i, j, r.get(i, basis.cols() + j).clone());
            }
        }
        RowSolver {
            basis_rows: basis.rows(),
            rref,
            pivots,
            transform,
        }
    }

    /// Coefficients x with x * basis = v, or None when v is outside the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let field = self.rref.field();
        let mut v = v.to_vec();
        let mut coeffs = vec![Scalar::zero(field); self.basis_rows];
        for (row, &p) in (0..self.basis_rows).zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for j in 0..self.rref.cols() {
                if !self.rref.get(row, j).is_zero() {
                    v[j] = v[j].sub(&c.mul(self.rref.get(row, j)));
                }
            }
            coeffs[row] = c;
        }
        if v.iter().any(|x| !x.is_zero()) {
            return None;
        }
        // coeffs expresses v in rref rows; convert to the original basis
        let mut out = vec![Scalar::zero(field); self.basis_rows];
        for i in 0..self.basis_rows {
            if coeffs[i].is_zero() {
                continue;
            }
            for j in 0..self.basis_rows {
                let t = self.transform.get(i, j);
                if !t.is_zero() {
                    out[j] = out[j].add(&coeffs[i].mul(t));
                }
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Q
    }

    #[test]
    fn rref_identity() {
        let m = Matrix::identity(q(), 2);
        let (r, rank, pivots) = m.rref();
        assert_eq!(rank, 2);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r, m);
    }

    #[test]
    fn rref_zero_matrix() {
        let m = Matrix::zero(q(), 3, 4);
        let (_, rank, pivots) = m.rref();
        assert_eq!(rank, 0);
        assert!(pivots.is_empty());
    }

    #[test]
    fn rref_dependent_rows() {
        let m = Matrix::from_int_rows(q(), &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_dimensions() {
        assert_eq!(Matrix::identity(q(), 3).kernel_basis().cols(), 0);
        assert_eq!(Matrix::zero(q(), 4, 4).kernel_basis().cols(), 4);
        let m = Matrix::from_int_rows(q(), &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.get(0, 0), &k.get(1, 0).neg());
    }

    #[test]
    fn solve_cases() {
        let id = Matrix::identity(q(), 2);
        let b = Matrix::from_int_rows(q(), &[&[3], &[5]]);
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);

        let m = Matrix::from_int_rows(q(), &[&[1, 0], &[0, 0]]);
        let b = Matrix::from_int_rows(q(), &[&[0], &[1]]);
        assert!(m.solve(&b).unwrap().is_none());

        let m = Matrix::from_int_rows(q(), &[&[2]]);
        let b = Matrix::from_int_rows(q(), &[&[1]]);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(x.get(0, 0), &Scalar::from_ratio(q(), 1, 2).unwrap());
    }

    #[test]
    fn invert_cases() {
        let id = Matrix::identity(q(), 3);
        assert_eq!(id.invert().unwrap().unwrap(), id);
        let zero = Matrix::from_int_rows(q(), &[&[0]]);
        assert!(zero.invert().unwrap().is_none());
        let m = Matrix::from_int_rows(q(), &[&[1, 1], &[0, 1]]);
        let expected = Matrix::from_int_rows(q(), &[&[1, -1], &[0, 1]]);
        assert_eq!(m.invert().unwrap().unwrap(), expected);
        let rect = Matrix::zero(q(), 2, 3);
        assert!(rect.invert().is_err());
    }

    #[test]
    fn rank_transpose_and_nullity() {
        let m = Matrix::from_int_rows(q(), &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(m.rank(), m.transpose().rank());
        assert_eq!(m.kernel_basis().cols() + m.rank(), m.cols());
    }

    #[test]
    fn row_span_spin() {
        let mut span = RowSpan::new(q(), 3);
        assert!(span.insert(&Matrix::from_int_rows(q(), &[&[1, 2, 3]]).row(0)));
        assert!(span.insert(&Matrix::from_int_rows(q(), &[&[0, 1, 1]]).row(0)));
        assert!(!span.insert(&Matrix::from_int_rows(q(), &[&[1, 3, 4]]).row(0)));
        assert_eq!(span.dim(), 2);
    }

    #[test]
    fn row_solver_coordinates() {
        let basis = Matrix::from_int_rows(q(), &[&[1, 1, 0], &[0, 2, 1]]);
        let solver = RowSolver::new(&basis);
        let v = Matrix::from_int_rows(q(), &[&[2, 4, 1]]).row(0);
        let x = solver.coordinates(&v).unwrap();
        // x * basis = v
        let xm = Matrix::from_rows(q(), vec![x]);
        assert_eq!(xm.mul(&basis).row(0), v);
        let outside = Matrix::from_int_rows(q(), &[&[0, 0, 5]]).row(0);
        // (0,0,5) = 5*(0,2,1) - 10*(0,1,0)... not in span of the two rows
        assert!(solver.coordinates(&outside).is_none());
    }

    #[test]
    fn fp_elimination() {
        let f = Field::Fp(5);
        let m = Matrix::from_int_rows(f, &[&[2, 1], &[1, 1]]);
        let inv = m.invert().unwrap().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
        // det = 5 = 0 in F_5
        let singular = Matrix::from_int_rows(f, &[&[2, 1], &[1, 3]]);
        assert!(singular.invert().unwrap().is_none());
    }
}
