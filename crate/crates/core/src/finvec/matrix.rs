use std::fmt;

use super::field::Field;

/// Dense matrix over a prime field, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    /// Entries are reduced mod `q`. Panics if `data` has the wrong length.
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        let data = data.into_iter().map(|x| field.reduce(x as u32)).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds from row lists; `None` if rows are ragged.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u8>]) -> Option<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Matrix::new(field, rows.len(), cols, rows.concat()))
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn column(field: Field, v: &[u8]) -> Self {
        Matrix::new(field, v.len(), 1, v.to_vec())
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

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = self.field.reduce(v as u32);
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Panics on a shape mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        assert_eq!(self.field, rhs.field, "matrix product field");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, rhs.get(k, j)));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        self.mul(&Matrix::column(self.field, v)).data
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape");
        let f = self.field;
        Matrix {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, k: u8) -> Matrix {
        let f = self.field;
        Matrix {
            data: self.data.iter().map(|&a| f.mul(a, k)).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    /// Rows `start..start+len`.
    pub fn row_block(&self, start: usize, len: usize) -> Matrix {
        Matrix {
            field: self.field,
            rows: len,
            cols: self.cols,
            data: self.data[start * self.cols..(start + len) * self.cols].to_vec(),
        }
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack rows");
        let mut data = Vec::with_capacity(self.data.len() + rhs.data.len());
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + rhs.cols,
            data,
        }
    }

    pub fn vstack(blocks: &[Matrix], field: Field, cols: usize) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack cols");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c));
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of `{x : self·x = 0}`; one basis vector per free
    /// column, in column order.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (pr, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, f.neg(r.get(pr, fc)));
            }
        }
        basis
    }

    /// Some `X` with `self·X = rhs`, or `None` when inconsistent. Free
    /// variables are set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve rows");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (pr, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(pr, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols || self.rank() != self.rows {
            return None;
        }
        self.solve(&Matrix::identity(self.field, self.rows))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Every `rows × cols` matrix, in lexicographic order of row-major data.
    pub fn all(field: Field, rows: usize, cols: usize) -> AllMatrices {
        AllMatrices {
            field,
            rows,
            cols,
            next: Some(vec![0; rows * cols]),
        }
    }

    /// `q^(rows·cols)`, saturating.
    pub fn count(field: Field, rows: usize, cols: usize) -> u128 {
        (field.q() as u128).saturating_pow((rows * cols) as u32)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

pub struct AllMatrices {
    field: Field,
    rows: usize,
    cols: usize,
    next: Option<Vec<u8>>,
}

impl Iterator for AllMatrices {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let q = self.field.q();
        let mut i = succ.len();
        let mut carried_out = true;
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < q {
                carried_out = false;
                break;
            }
            succ[i] = 0;
        }
        if !carried_out {
            self.next = Some(succ);
        }
        Some(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: cur,
        })
    }
}

/// Every vector of `F_q^n`, lexicographically.
pub fn all_vectors(field: Field, n: usize) -> impl Iterator<Item = Vec<u8>> {
    Matrix::all(field, n, 1).map(|m| m.data)
}
