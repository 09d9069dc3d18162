use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Poly;

/// A dense rows x cols matrix over a single field. The 0 x 0 matrix is legal
/// and behaves as the identity object for direct sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Solution set of A x = b: an optional particular solution together with a
/// basis of the kernel of A (as column vectors).
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub particular: Option<Matrix>,
    pub kernel: Vec<Matrix>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn scalar_matrix(c: &Scalar, n: usize) -> Matrix {
        let mut m = Matrix::zeros(c.field(), n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for e in row {
                assert!(e.field() == field, "matrix entry from a different field");
                entries.push(e);
            }
        }
        Matrix { field: field.clone(), rows: r, cols: c, entries }
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_i64(field, v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Column vector with a single 1 in position i.
    pub fn unit_column(field: &Field, n: usize, i: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, 1);
        m.set(i, 0, Scalar::one(field));
        m
    }

    pub fn from_columns(field: &Field, rows: usize, cols: &[Matrix]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!((c.rows, c.cols), (rows, 1), "from_columns wants column vectors");
            for i in 0..rows {
                m.set(i, j, c.get(i, 0).clone());
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn size(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert!(v.field() == &self.field, "matrix entry from a different field");
        self.entries[i * self.cols + j] = v;
    }

    fn same_field(&self, other: &Matrix) {
        assert!(self.field == other.field, "matrix arithmetic across different fields");
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.same_field(other);
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
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

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mul(c)).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Result<Scalar> {
        let n = self.size()?;
        let mut t = Scalar::zero(&self.field);
        for i in 0..n {
            t = t.add(self.get(i, i));
        }
        Ok(t)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(&self.field, self.rows)
    }

    /// True for lambda * I, including the zero matrix and the void matrix.
    pub fn is_scalar_matrix(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        if self.rows == 0 {
            return true;
        }
        let lambda = self.get(0, 0).clone();
        *self == Matrix::scalar_matrix(&lambda, self.rows)
    }

    pub fn is_square_zero(&self) -> bool {
        self.is_square() && self.mul(self).is_zero_matrix()
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square() && self.mul(self) == *self
    }

    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        self.same_field(other);
        let mut out = Matrix::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn direct_sum_all(field: &Field, blocks: &[Matrix]) -> Matrix {
        let mut acc = Matrix::zeros(field, 0, 0);
        for b in blocks {
            acc = acc.direct_sum(b);
        }
        acc
    }

    /// Copy of the block with rows r0..r1 and columns c0..c1 (half-open).
    pub fn block(&self, r0: usize, c0: usize, r1: usize, c1: usize) -> Matrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        Matrix::from_fn(&self.field, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.block(0, j, self.rows, j + 1)
    }

    /// The companion matrix C(p) of a monic polynomial: ones on the
    /// subdiagonal and last column (a_0, ..., a_{n-1}) where
    /// p = t^n - sum a_k t^k. C(1) is the 0 x 0 matrix.
    pub fn companion(p: &Poly) -> Result<Matrix> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial("companion matrix"));
        }
        if !p.is_monic() {
            return Err(Error::NotMonic);
        }
        let field = p.field();
        let n = p.degree().unwrap();
        let mut m = Matrix::zeros(field, n, n);
        for i in 1..n {
            m.set(i, i - 1, Scalar::one(field));
        }
        for i in 0..n {
            m.set(i, n - 1, p.coeff(i).neg());
        }
        Ok(m)
    }

    /// Good cyclic: every subdiagonal entry is 1 and everything below the
    /// subdiagonal is 0. Entries on or above the diagonal are arbitrary.
    pub fn is_good_cyclic(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                let want_one = i == j + 1;
                let e = self.get(i, j);
                if want_one && !e.is_one() {
                    return false;
                }
                if !want_one && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Characteristic polynomials of the leading principal minors of a good
    /// cyclic matrix: chain[k] is the char poly of the leading k x k block,
    /// chain[0] = 1, computed by the Hessenberg recurrence
    /// chi_k = (t - m_{k,k}) chi_{k-1} - sum_{i<k} m_{i,k} chi_{i-1}.
    pub fn good_cyclic_minor_chain(&self) -> Result<Vec<Poly>> {
        if !self.is_good_cyclic() {
            return Err(Error::NotGoodCyclic);
        }
        let f = &self.field;
        let n = self.rows;
        let mut chain = Vec::with_capacity(n + 1);
        chain.push(Poly::one(f));
        for k in 1..=n {
            let t_minus = Poly::from_coeffs(f, vec![self.get(k - 1, k - 1).neg(), Scalar::one(f)]);
            let mut chi = t_minus.mul(&chain[k - 1]);
            for i in 1..k {
                let c = self.get(i - 1, k - 1);
                if c.is_zero() {
                    continue;
                }
                chi = chi.sub(&chain[i - 1].mul_scalar(c));
            }
            chain.push(chi);
        }
        Ok(chain)
    }

    /// det(tI - A), monic of degree n. Good cyclic matrices use the minor
    /// chain recurrence; everything else goes through fraction-free Bareiss
    /// elimination directly over F[t] (exact divisions, any field).
    pub fn char_poly(&self) -> Result<Poly> {
        let n = self.size()?;
        let f = &self.field;
        if n == 0 {
            return Ok(Poly::one(f));
        }
        if self.is_good_cyclic() {
            return Ok(self.good_cyclic_minor_chain()?.pop().unwrap());
        }
        let mut m: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let a = self.get(i, j).neg();
                        if i == j {
                            Poly::from_coeffs(f, vec![a, Scalar::one(f)])
                        } else {
                            Poly::constant(a)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut negate = false;
        let mut prev = Poly::one(f);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let swap = (k + 1..n)
                    .find(|&l| !m[l][k].is_zero())
                    .ok_or_else(|| Error::Defect("tI - A became singular during elimination".into()))?;
                m.swap(k, swap);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                    let (q, r) = num.div_rem(&prev)?;
                    if !r.is_zero() {
                        return Err(Error::Defect("inexact division in Bareiss elimination".into()));
                    }
                    m[i][j] = q;
                }
                m[i][k] = Poly::zero(f);
            }
            prev = m[k][k].clone();
        }
        let mut chi = m[n - 1][n - 1].clone();
        if negate {
            chi = chi.neg();
        }
        if chi.degree() != Some(n) || !chi.is_monic() {
            return Err(Error::Defect("characteristic polynomial is not monic of degree n".into()));
        }
        Ok(chi)
    }

    pub fn det(&self) -> Result<Scalar> {
        let n = self.size()?;
        let f = &self.field;
        let mut m = self.clone();
        let mut det = Scalar::one(f);
        for k in 0..n {
            let pivot = (k..n).find(|&i| !m.get(i, k).is_zero());
            let Some(p) = pivot else {
                return Ok(Scalar::zero(f));
            };
            if p != k {
                for j in 0..n {
                    let a = m.get(k, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(k, j, b);
                    m.set(p, j, a);
                }
                det = det.neg();
            }
            let pv = m.get(k, k).clone();
            det = det.mul(&pv);
            let pv_inv = pv.inv()?;
            for i in k + 1..n {
                let factor = m.get(i, k).mul(&pv_inv);
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = m.get(i, j).sub(&factor.mul(m.get(k, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn rank(&self) -> usize {
        let (_, pivots) = rref(self.to_row_vecs());
        pivots.len()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.size()?;
        let f = &self.field;
        let mut aug = self.to_row_vecs();
        for (i, row) in aug.iter_mut().enumerate() {
            for j in 0..n {
                row.push(if i == j { Scalar::one(f) } else { Scalar::zero(f) });
            }
        }
        let (red, pivots) = rref(aug);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Singular);
        }
        let mut out = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, red[i][n + j].clone());
            }
        }
        Ok(out)
    }

    /// Indices of a set of columns forming a basis of the column space.
    pub fn column_basis(&self) -> Vec<usize> {
        let (_, pivots) = rref(self.to_row_vecs());
        pivots
    }

    /// Basis of the kernel (columns v with A v = 0).
    pub fn kernel_basis(&self) -> Vec<Matrix> {
        let zero = Matrix::zeros(&self.field, self.rows, 1);
        linear_solve(self, &zero).expect("shapes agree").kernel
    }

    fn to_row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form; returns the reduced rows and pivot columns.
fn rref(mut rows: Vec<Vec<Scalar>>) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for j in c..ncols {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..nrows {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            for j in c..ncols {
                let v = rows[i][j].sub(&factor.mul(&rows[r][j]));
                rows[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (rows, pivots)
}

/// Solve A x = b for a single right-hand column, returning a particular
/// solution (when consistent) and a kernel basis of A.
pub fn linear_solve(a: &Matrix, b: &Matrix) -> Result<LinearSolution> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if b.cols() != 1 || b.rows() != a.rows() {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side {}x{} against a {}x{} system",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let f = a.field();
    let n = a.cols();
    let mut aug = a.to_row_vecs();
    for (i, row) in aug.iter_mut().enumerate() {
        row.push(b.get(i, 0).clone());
    }
    if aug.is_empty() {
        // 0 x n system: every x solves it
        let kernel = (0..n).map(|j| Matrix::unit_column(f, n, j)).collect();
        return Ok(LinearSolution { particular: Some(Matrix::zeros(f, n, 1)), kernel });
    }
    let (red, pivots) = rref(aug);
    let consistent = pivots.iter().all(|&c| c < n);
    let mut kernel = Vec::new();
    for j in 0..n {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = Matrix::zeros(f, n, 1);
        v.set(j, 0, Scalar::one(f));
        for (row, &pc) in pivots.iter().enumerate() {
            if pc < n {
                v.set(pc, 0, red[row][j].neg());
            }
        }
        kernel.push(v);
    }
    let particular = if consistent {
        let mut x = Matrix::zeros(f, n, 1);
        for (row, &pc) in pivots.iter().enumerate() {
            x.set(pc, 0, red[row][n].clone());
        }
        Some(x)
    } else {
        None
    };
    Ok(LinearSolution { particular, kernel })
}
