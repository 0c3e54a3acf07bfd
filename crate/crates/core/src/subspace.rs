//! Subspaces of `F^d` held as RREF row bases.
//!
//! The stored basis is canonical, so two subspaces are equal exactly when
//! their representations are equal.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{vector, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix<F>) -> Self {
        let r = m.rref();
        let rank = r.rank();
        let mut rows = r.reduced.row_vecs();
        rows.truncate(rank);
        Subspace {
            ambient: m.cols(),
            basis: Matrix::from_rows(m.field(), m.cols(), rows).expect("row lengths agree"),
            pivots: r.pivots,
        }
    }

    pub fn span(field: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Self {
        let m = Matrix::from_rows(field, ambient, vectors.to_vec()).expect("vector length mismatch");
        Self::row_space(&m)
    }

    /// `{x : m·x = 0}`.
    pub fn kernel_of(m: &Matrix<F>) -> Self {
        Self::span(m.field(), m.cols(), &m.kernel_vectors())
    }

    /// Column space of `m`.
    pub fn image_of(m: &Matrix<F>) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn vectors(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vecs()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of F^{} and F^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Coordinates of `x` in the stored basis, or `None` when `x` is outside.
    pub fn coordinates(&self, x: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(x.len(), self.ambient, "vector length mismatch");
        let f = self.field();
        let coords: Vec<F::Elem> = self.pivots.iter().map(|&p| x[p].clone()).collect();
        let rebuilt = vector::combine(f, self.ambient, &coords, &self.vectors());
        (rebuilt == x).then_some(coords)
    }

    pub fn contains(&self, x: &[F::Elem]) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vectors().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let f = self.field();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f, self.ambient));
        }
        // c·[A; B] = 0 gives c_A·A = −c_B·B ∈ A ∩ B.
        let stacked = self.basis.vstack(&other.basis)?;
        let relations = stacked.transpose().kernel_vectors();
        let a_rows = self.vectors();
        let vectors: Vec<_> = relations
            .iter()
            .map(|c| vector::combine(f, self.ambient, &c[..self.dim()], &a_rows))
            .collect();
        Ok(Self::span(f, self.ambient, &vectors))
    }

    /// dim A − dim B for B ⊆ A.
    pub fn quotient_dim(&self, sub: &Self) -> Result<usize> {
        self.check_ambient(sub)?;
        if !sub.is_subspace_of(self) {
            return Err(Error::NotContained);
        }
        Ok(self.dim() - sub.dim())
    }

    /// `{w : w·a = 0 for every a in self}`.
    pub fn annihilator(&self) -> Self {
        if self.is_zero() {
            return Self::full(self.field(), self.ambient);
        }
        Self::kernel_of(&self.basis)
    }

    /// Image `m(self)`.
    pub fn image(&self, m: &Matrix<F>) -> Self {
        assert_eq!(m.cols(), self.ambient, "map domain mismatch");
        let images: Vec<_> = self.vectors().iter().map(|v| m.apply(v)).collect();
        Self::span(self.field(), m.rows(), &images)
    }

    /// Preimage `m⁻¹(self)`.
    pub fn preimage(&self, m: &Matrix<F>) -> Self {
        assert_eq!(m.rows(), self.ambient, "map codomain mismatch");
        let ann = self.annihilator();
        if ann.is_zero() {
            return Self::full(self.field(), m.cols());
        }
        let w = ann.basis.mul(m).expect("shapes agree");
        Self::kernel_of(&w)
    }

    /// `self × other` inside `F^{a+b}`.
    pub fn product(&self, other: &Self) -> Self {
        let f = self.field();
        let n = self.ambient + other.ambient;
        let mut vs: Vec<Vec<F::Elem>> = self
            .vectors()
            .into_iter()
            .map(|v| vector::concat::<F>(&v, &vector::zero(f, other.ambient)))
            .collect();
        vs.extend(
            other
                .vectors()
                .into_iter()
                .map(|v| vector::concat::<F>(&vector::zero(f, self.ambient), &v)),
        );
        Self::span(f, n, &vs)
    }

    /// Projection onto coordinates `start..start+len`.
    pub fn project(&self, start: usize, len: usize) -> Self {
        let vs: Vec<_> = self
            .vectors()
            .into_iter()
            .map(|v| v[start..start + len].to_vec())
            .collect();
        Self::span(self.field(), len, &vs)
    }

    /// Swaps the coordinate blocks `0..split` and `split..ambient`.
    pub fn swap_blocks(&self, split: usize) -> Self {
        let vs: Vec<_> = self
            .vectors()
            .into_iter()
            .map(|v| vector::concat::<F>(&v[split..], &v[..split]))
            .collect();
        Self::span(self.field(), self.ambient, &vs)
    }

    pub fn with_vector(&self, x: &[F::Elem]) -> Self {
        let mut vs = self.vectors();
        vs.push(x.to_vec());
        Self::span(self.field(), self.ambient, &vs)
    }

    /// A point of `(x + self) ∩ target`, or `None` when the two do not meet.
    ///
    /// The solve runs with `target` coordinates first, so the coefficients
    /// along `self` are free variables and stay zero whenever possible; when
    /// `x ∈ target` already, the answer is `x`.
    pub fn coset_meet(&self, x: &[F::Elem], target: &Self) -> Option<Vec<F::Elem>> {
        self.coset_meet_via(x, target, None)
    }

    /// Like [`coset_meet`](Self::coset_meet) but tests `map(x + a) ∈ target`
    /// and returns the chosen `x + a`.
    pub fn coset_meet_via(
        &self,
        x: &[F::Elem],
        target: &Self,
        map: Option<&Matrix<F>>,
    ) -> Option<Vec<F::Elem>> {
        let f = self.field();
        let dirs = self.vectors();
        let (image_x, image_dirs) = match map {
            Some(m) => (m.apply(x), dirs.iter().map(|d| m.apply(d)).collect::<Vec<_>>()),
            None => (x.to_vec(), dirs.clone()),
        };
        let rows = target.ambient;
        // W·w − D·a = image_x
        let mut columns: Vec<Vec<F::Elem>> = target.vectors();
        columns.extend(image_dirs.iter().map(|d| d.iter().map(|v| f.neg(v)).collect()));
        let system = Matrix::from_columns(f, rows, &columns);
        let sol = system.solve(&image_x)?;
        let a = &sol[target.dim()..];
        let shift = vector::combine(f, self.ambient, a, &dirs);
        Some(vector::add(f, x, &shift))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(v: i64) -> num_rational::BigRational {
        Rationals.from_i64(v)
    }

    #[test]
    fn kernel_examples() {
        let f = Rationals;
        assert!(Subspace::kernel_of(&Matrix::from_i64(&f, &[&[1]])).is_zero());
        assert!(Subspace::kernel_of(&Matrix::from_i64(&f, &[&[0]])).is_full());
        let k = Subspace::kernel_of(&Matrix::from_i64(&f, &[&[1, 2]]));
        assert_eq!(k.dim(), 1);
        // span{(−2, 1)} in RREF is (1, −1/2)
        assert_eq!(
            k.vectors(),
            vec![vec![q(1), f.parse_elem("-1/2").unwrap()]]
        );
        assert!(k.contains(&[q(-2), q(1)]));
    }

    #[test]
    fn lattice_examples() {
        let f = Rationals;
        let x_axis = Subspace::span(&f, 2, &[vec![q(1), q(0)]]);
        let y_axis = Subspace::span(&f, 2, &[vec![q(0), q(3)]]);
        assert_eq!(x_axis.intersect(&x_axis).unwrap(), x_axis);
        assert!(x_axis.intersect(&y_axis).unwrap().is_zero());
        assert!(x_axis.sum(&y_axis).unwrap().is_full());
        let plane = Subspace::full(&f, 2);
        assert_eq!(plane.quotient_dim(&x_axis).unwrap(), 1);
        assert_eq!(x_axis.quotient_dim(&y_axis), Err(Error::NotContained));
        let other = Subspace::zero(&f, 3);
        assert!(x_axis.intersect(&other).is_err());
    }

    #[test]
    fn image_and_preimage() {
        let f = PrimeField::new(3).unwrap();
        let m = Matrix::from_i64(&f, &[&[1, 1, 0], &[0, 0, 0]]);
        let full = Subspace::full(&f, 3);
        let img = full.image(&m);
        assert_eq!(img, Subspace::span(&f, 2, &[vec![1, 0]]));
        let pre = Subspace::zero(&f, 2).preimage(&m);
        assert_eq!(pre, Subspace::kernel_of(&m));
        assert!(Subspace::full(&f, 2).preimage(&m).is_full());
    }

    #[test]
    fn coset_meet_prefers_x_itself() {
        let f = PrimeField::new(2).unwrap();
        let a = Subspace::span(&f, 2, &[vec![1, 1]]);
        let x = vec![1, 0];
        assert_eq!(a.coset_meet(&x, &Subspace::full(&f, 2)), Some(x.clone()));
        // x + a lands on the y axis
        let y_axis = Subspace::span(&f, 2, &[vec![0, 1]]);
        assert_eq!(a.coset_meet(&x, &y_axis), Some(vec![0, 1]));
        let zero = Subspace::zero(&f, 2);
        assert_eq!(a.coset_meet(&x, &zero), None);
    }

    #[test]
    fn product_projection_and_swap() {
        let f = Rationals;
        let a = Subspace::span(&f, 1, &[vec![q(1)]]);
        let b = Subspace::zero(&f, 2);
        let p = a.product(&b);
        assert_eq!(p.dim(), 1);
        assert_eq!(p.project(0, 1), a);
        assert!(p.project(1, 2).is_zero());
        let s = p.swap_blocks(1);
        assert_eq!(s.vectors(), vec![vec![q(0), q(0), q(1)]]);
    }
}
