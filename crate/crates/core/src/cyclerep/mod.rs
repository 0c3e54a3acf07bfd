//! n-cycles of linear maps, with a symbolic saturated part.

mod fitting;
mod io;
mod morphism;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::card::Card;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{vector, Matrix};

pub use fitting::{fitting_split, regular_iso, FittingSplit};
pub use io::AnyCycleRep;
pub use morphism::MorphismFamily;

/// Maps `M_k: F^{d_k} → F^{d_{k+1}}` for `k ∈ ℤ/n`, plus a multiset of
/// infinite Jordan cycle-cells keyed by base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRep<F: Field> {
    field: F,
    dims: Vec<usize>,
    maps: Vec<Matrix<F>>,
    saturated: BTreeMap<usize, Card>,
}

impl<F: Field> CycleRep<F> {
    pub fn new(
        field: &F,
        dims: Vec<usize>,
        maps: Vec<Matrix<F>>,
        saturated: BTreeMap<usize, Card>,
    ) -> Result<Self> {
        let n = dims.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("a cycle needs n ≥ 1".into()));
        }
        if maps.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} maps for a {n}-cycle",
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let (r, c) = (dims[(k + 1) % n], dims[k]);
            if m.rows() != r || m.cols() != c {
                return Err(Error::DimensionMismatch(format!(
                    "map {k} is {}x{}, expected {r}x{c}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != field {
                return Err(Error::FieldMismatch(
                    m.field().spec().to_string(),
                    field.spec().to_string(),
                ));
            }
        }
        if let Some(&b) = saturated.keys().find(|&&b| b >= n) {
            return Err(Error::DimensionMismatch(format!(
                "saturated base {b} outside Z/{n}"
            )));
        }
        let saturated = saturated.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(CycleRep {
            field: field.clone(),
            dims,
            maps,
            saturated,
        })
    }

    /// Matrix-only representation.
    pub fn from_maps(field: &F, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self> {
        Self::new(field, dims, maps, BTreeMap::new())
    }

    /// All spaces zero.
    pub fn zero(field: &F, n: usize) -> Self {
        Self::with_dims_zero_maps(field, vec![0; n])
    }

    pub fn with_dims_zero_maps(field: &F, dims: Vec<usize>) -> Self {
        let n = dims.len();
        let maps = (0..n)
            .map(|k| Matrix::zeros(field, dims[(k + 1) % n], dims[k]))
            .collect();
        Self::from_maps(field, dims, maps).expect("shapes agree")
    }

    /// Only saturated cells, no matrix data.
    pub fn pure_cells(field: &F, n: usize, saturated: BTreeMap<usize, Card>) -> Result<Self> {
        let zero = Self::zero(field, n);
        Self::new(field, zero.dims, zero.maps, saturated)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.dims.len()
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, k: usize) -> usize {
        self.dims[k % self.n()]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn map(&self, k: usize) -> &Matrix<F> {
        &self.maps[k % self.n()]
    }
    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }
    pub fn saturated(&self) -> &BTreeMap<usize, Card> {
        &self.saturated
    }
    pub fn has_saturated(&self) -> bool {
        !self.saturated.is_empty()
    }

    /// Same maps, saturated part dropped.
    pub fn matrix_part(&self) -> Self {
        CycleRep {
            saturated: BTreeMap::new(),
            ..self.clone()
        }
    }

    pub fn with_saturated(&self, saturated: BTreeMap<usize, Card>) -> Result<Self> {
        Self::new(&self.field, self.dims.clone(), self.maps.clone(), saturated)
    }

    pub(crate) fn require_no_saturated(&self, op: &'static str) -> Result<()> {
        if self.has_saturated() {
            Err(Error::SaturatedUnsupported(op))
        } else {
            Ok(())
        }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field.spec() != other.field.spec() {
            return Err(Error::FieldMismatch(
                self.field.spec().to_string(),
                other.field.spec().to_string(),
            ));
        }
        if self.n() != other.n() {
            return Err(Error::CycleLengthMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    /// `(πu)_k = M_{k+n−1}···M_{k+1}·M_k`.
    pub fn compose_cycle(&self, k: usize) -> Matrix<F> {
        let n = self.n();
        let mut acc = Matrix::identity(&self.field, self.dim(k));
        for i in 0..n {
            acc = self.map(k + i).mul(&acc).expect("shapes agree");
        }
        acc
    }

    pub fn is_locally_nilpotent(&self) -> bool {
        let d0 = self.dims[0];
        self.compose_cycle(0).pow(d0).expect("square").is_zero()
    }

    /// Least `i` with `M_{k+i−1}···M_k x = 0`.
    pub fn local_nilindex(&self, k: usize, x: &[F::Elem]) -> Result<usize> {
        if !self.is_locally_nilpotent() {
            return Err(Error::NotLocallyNilpotent);
        }
        let mut v = x.to_vec();
        let mut i = 0;
        while !vector::is_zero(&self.field, &v) {
            v = self.map(k + i).apply(&v);
            i += 1;
        }
        Ok(i)
    }

    /// Every map square and invertible.
    pub fn is_regular(&self) -> bool {
        self.maps.iter().all(|m| m.is_invertible())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.block_diag(b)).collect();
        let mut saturated = self.saturated.clone();
        for (&b, &c) in &other.saturated {
            let e = saturated.entry(b).or_insert(Card::ZERO);
            *e = *e + c;
        }
        Self::new(&self.field, dims, maps, saturated)
    }

    /// Re-indexes so that new vertex `k` is old vertex `k − l`.
    pub fn shift(&self, l: usize) -> Self {
        let n = self.n();
        let l = l % n;
        let src = |k: usize| (k + n - l) % n;
        CycleRep {
            field: self.field.clone(),
            dims: (0..n).map(|k| self.dims[src(k)]).collect(),
            maps: (0..n).map(|k| self.maps[src(k)].clone()).collect(),
            saturated: self.saturated.iter().map(|(&b, &c)| ((b + l) % n, c)).collect(),
        }
    }

    /// `v_k = P_{k+1}·M_k·P_k⁻¹` for seeded random invertible `P_k`. The
    /// saturated part is carried over unchanged.
    pub fn random_basis_change(&self, seed: u64) -> (Self, MorphismFamily<F>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.n();
        let ps: Vec<Matrix<F>> = self
            .dims
            .iter()
            .map(|&d| Matrix::random_invertible(&self.field, d, &mut rng))
            .collect();
        let maps = (0..n)
            .map(|k| {
                let inv = ps[k].inverse().expect("invertible");
                ps[(k + 1) % n]
                    .mul(&self.maps[k])
                    .and_then(|m| m.mul(&inv))
                    .expect("shapes agree")
            })
            .collect();
        let v = CycleRep {
            field: self.field.clone(),
            dims: self.dims.clone(),
            maps,
            saturated: self.saturated.clone(),
        };
        let family = MorphismFamily::new(ps, self.saturated.clone());
        (v, family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    pub(crate) fn rep_a<F: Field>(f: &F) -> CycleRep<F> {
        CycleRep::from_maps(
            f,
            vec![1, 1],
            vec![Matrix::from_i64(f, &[&[1]]), Matrix::from_i64(f, &[&[0]])],
        )
        .unwrap()
    }

    #[test]
    fn compose_examples() {
        let q = Rationals;
        assert_eq!(rep_a(&q).compose_cycle(0), Matrix::from_i64(&q, &[&[0]]));
        let single = CycleRep::from_maps(&q, vec![1], vec![Matrix::from_i64(&q, &[&[5]])]).unwrap();
        assert_eq!(single.compose_cycle(0), Matrix::from_i64(&q, &[&[5]]));
        let id = Matrix::identity(&q, 2);
        let three = CycleRep::from_maps(&q, vec![2, 2, 2], vec![id.clone(), id.clone(), id.clone()]).unwrap();
        assert_eq!(three.compose_cycle(1), id);
    }

    #[test]
    fn nilpotency_examples() {
        let q = Rationals;
        let a = rep_a(&q);
        assert!(a.is_locally_nilpotent());
        assert_eq!(a.local_nilindex(0, &[q.one()]).unwrap(), 2);
        assert_eq!(a.local_nilindex(0, &[q.zero()]).unwrap(), 0);
        let id = CycleRep::from_maps(&q, vec![1], vec![Matrix::identity(&q, 1)]).unwrap();
        assert!(!id.is_locally_nilpotent());
        assert_eq!(id.local_nilindex(0, &[q.one()]), Err(Error::NotLocallyNilpotent));
    }

    #[test]
    fn sum_and_shift() {
        let f = PrimeField::new(2).unwrap();
        let a = rep_a(&f);
        let zero = CycleRep::zero(&f, 2);
        assert_eq!(a.direct_sum(&zero).unwrap(), a);
        assert_eq!(a.shift(0), a);
        let b = a.shift(1);
        assert_eq!(b.map(0), &Matrix::from_i64(&f, &[&[0]]));
        assert_eq!(b.map(1), &Matrix::from_i64(&f, &[&[1]]));
        let cells = CycleRep::pure_cells(&f, 2, BTreeMap::from([(0, Card::Finite(1))])).unwrap();
        assert_eq!(cells.shift(1).saturated(), &BTreeMap::from([(1, Card::Finite(1))]));
        assert!(a.direct_sum(&CycleRep::zero(&f, 3)).is_err());
    }

    #[test]
    fn basis_change_is_deterministic_and_verified() {
        let f = PrimeField::new(3).unwrap();
        let a = rep_a(&f).direct_sum(&rep_a(&f).shift(1)).unwrap();
        let (v1, p1) = a.random_basis_change(9);
        let (v2, _) = a.random_basis_change(9);
        assert_eq!(v1, v2);
        p1.verify_iso(&a, &v1).unwrap();
        let zero = CycleRep::zero(&f, 2);
        let (z, _) = zero.random_basis_change(1);
        assert_eq!(z, zero);
    }
}
