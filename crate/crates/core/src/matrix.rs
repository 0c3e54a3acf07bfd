//! Dense matrices with exact entries.
//!
//! Matrices act on column vectors; a vector is a plain `Vec<F::Elem>`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            data: vec![field.zero(); rows * cols],
            field: field.clone(),
            rows,
            cols,
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers. Panics on ragged input.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("ragged matrix literal")
    }

    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &F {
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

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(l, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product. Panics on a length mismatch.
    pub fn apply(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Result<Matrix<F>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut result = Self::identity(&self.field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn block_diag(&self, other: &Matrix<F>) -> Matrix<F> {
        let mut out = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row echelon form. Pivot choice: leftmost column first, then
    /// the first row (at or below the current one) with a nonzero entry.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
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
        self.rref().rank()
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column, in the order
    /// of the free columns.
    pub fn kernel_vectors(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let Rref { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(reduced.get(row, free));
                }
                v
            })
            .collect()
    }

    /// Some solution of `self·x = b`, with every free variable set to zero,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let f = &self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let Rref { reduced, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let Rref { reduced, pivots } = aug.rref();
        if (0..n).any(|i| pivots.get(i) != Some(&i)) {
            return None;
        }
        let mut inv = Self::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, reduced.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// `P·L·D·U` with a random permutation `P`, unit triangular `L`, `U` and
    /// a nonzero diagonal `D`. Every invertible matrix has this form, and
    /// over ℚ the inverse keeps small denominators.
    pub fn random_invertible<R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Matrix<F> {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut p = Self::zeros(field, n, n);
        let mut l = Self::identity(field, n);
        let mut d = Self::zeros(field, n, n);
        let mut u = Self::identity(field, n);
        for i in 0..n {
            p.set(i, perm[i], field.one());
            let diag = loop {
                let c = field.random_elem(rng);
                if !field.is_zero(&c) {
                    break c;
                }
            };
            d.set(i, i, diag);
            for j in 0..i {
                if rng.gen_bool(0.3) {
                    l.set(i, j, field.random_elem(rng));
                }
                if rng.gen_bool(0.3) {
                    u.set(j, i, field.random_elem(rng));
                }
            }
        }
        [l, d, u]
            .iter()
            .try_fold(p, |acc, m| acc.mul(m))
            .expect("square factors")
    }

    pub fn random<R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Matrix<F> {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, field.random_elem(rng));
            }
        }
        m
    }

    /// Text form: one line per row, entries separated by single spaces.
    /// Rows of a zero-column matrix are empty lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.format_elem(x)).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses rows from `(line_number, text)` pairs.
    pub fn parse_rows<'a>(
        field: &F,
        cols: usize,
        lines: impl IntoIterator<Item = (usize, &'a str)>,
    ) -> Result<Matrix<F>> {
        let mut rows = Vec::new();
        for (lineno, text) in lines {
            let row = text
                .split_whitespace()
                .map(|tok| field.parse_elem(tok).map_err(|e| Error::parse(lineno, e)))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != cols {
                return Err(Error::parse(
                    lineno,
                    format!("expected {cols} entries, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        Matrix::from_rows(field, cols, rows)
    }

    /// Parses a whole matrix in text form; the column count is taken from
    /// the first row.
    pub fn parse(field: &F, text: &str) -> Result<Matrix<F>> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let cols = lines.first().map_or(0, |(_, l)| l.split_whitespace().count());
        Self::parse_rows(field, cols, lines)
    }
}

/// Helpers for vectors stored as `Vec<F::Elem>`.
pub mod vector {
    use crate::field::Field;

    pub fn zero<F: Field>(f: &F, n: usize) -> Vec<F::Elem> {
        vec![f.zero(); n]
    }

    pub fn unit<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
        let mut v = zero(f, n);
        v[i] = f.one();
        v
    }

    pub fn is_zero<F: Field>(f: &F, x: &[F::Elem]) -> bool {
        x.iter().all(|v| f.is_zero(v))
    }

    pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }

    pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
    }

    pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().map(|x| f.mul(c, x)).collect()
    }

    /// Σ coeffs[i]·vectors[i]; `n` is the common length.
    pub fn combine<F: Field>(
        f: &F,
        n: usize,
        coeffs: &[F::Elem],
        vectors: &[Vec<F::Elem>],
    ) -> Vec<F::Elem> {
        let mut out = zero(f, n);
        for (c, v) in coeffs.iter().zip(vectors) {
            if f.is_zero(c) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o = f.add(o, &f.mul(c, x));
            }
        }
        out
    }

    pub fn concat<F: Field>(a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().chain(b).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn rref_examples() {
        let q = Rationals;
        let z = Matrix::from_i64(&q, &[&[0]]);
        let r = z.rref();
        assert_eq!(r.reduced, z);
        assert!(r.pivots.is_empty());

        let id = Matrix::<Rationals>::identity(&q, 2);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1]);

        let m = Matrix::from_i64(&q, &[&[2, 4], &[1, 2]]);
        let r = m.rref();
        assert_eq!(r.reduced, Matrix::from_i64(&q, &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn solve_and_inverse() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(&f, &[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, 2));
        let b = vec![1, 0];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);

        let singular = Matrix::from_i64(&f, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[1, 0]).is_none());
        assert!(Matrix::<PrimeField>::zeros(&f, 0, 0).inverse().is_some());
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let q = Rationals;
        let m = Matrix::from_i64(&q, &[&[1, 1, 0]]);
        let x = m.solve(&[q.from_i64(3)]).unwrap();
        assert_eq!(x, vec![q.from_i64(3), q.zero(), q.zero()]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let q = Rationals;
        let m = Matrix::from_i64(&q, &[&[1, 2, 3], &[2, 4, 6]]);
        let ker = m.kernel_vectors();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(vector::is_zero(&q, &m.apply(v)));
        }
    }

    #[test]
    fn text_round_trip() {
        let q = Rationals;
        let m = Matrix::from_rows(
            &q,
            2,
            vec![
                vec![q.parse_elem("1/2").unwrap(), q.from_i64(-3)],
                vec![q.zero(), q.one()],
            ],
        )
        .unwrap();
        let text = m.to_text();
        assert_eq!(text, "1/2 -3\n0 1\n");
        assert_eq!(Matrix::parse(&q, &text).unwrap(), m);
    }

    #[test]
    fn pow_and_block_diag() {
        let q = Rationals;
        let j = Matrix::from_i64(&q, &[&[0, 1], &[0, 0]]);
        assert!(j.pow(2).unwrap().is_zero());
        assert_eq!(j.pow(0).unwrap(), Matrix::identity(&q, 2));
        let b = j.block_diag(&Matrix::from_i64(&q, &[&[5]]));
        assert_eq!(b.rows(), 3);
        assert_eq!(*b.get(2, 2), q.from_i64(5));
    }
}
