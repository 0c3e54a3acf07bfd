use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{vector, Matrix};
use crate::poly::invariant_factors;
use crate::subspace::Subspace;

use super::{CycleRep, MorphismFamily};

/// `u ≅ nil ⊕ reg`, with `witness: u → nil ⊕ reg`.
#[derive(Clone, Debug)]
pub struct FittingSplit<F: Field> {
    pub nil: CycleRep<F>,
    pub reg: CycleRep<F>,
    pub witness: MorphismFamily<F>,
}

/// Splits `U_k = Ker P_k ⊕ Im P_k` with `P_k = ((πu)_k)^{d_k}`.
pub fn fitting_split<F: Field>(u: &CycleRep<F>) -> Result<FittingSplit<F>> {
    u.require_no_saturated("fitting_split")?;
    let f = u.field();
    let n = u.n();
    let mut nil_spaces = Vec::with_capacity(n);
    let mut reg_spaces = Vec::with_capacity(n);
    for k in 0..n {
        let p = u.compose_cycle(k).pow(u.dim(k))?;
        nil_spaces.push(Subspace::kernel_of(&p));
        reg_spaces.push(Subspace::image_of(&p));
    }
    let restrict = |spaces: &[Subspace<F>]| -> Result<Vec<Matrix<F>>> {
        (0..n)
            .map(|k| {
                let src = &spaces[k];
                let dst = &spaces[(k + 1) % n];
                let cols: Vec<_> = src
                    .vectors()
                    .iter()
                    .map(|b| {
                        dst.coordinates(&u.map(k).apply(b))
                            .ok_or_else(|| Error::DimensionMismatch("Fitting summand not invariant".into()))
                    })
                    .collect::<Result<_>>()?;
                Ok(Matrix::from_columns(f, dst.dim(), &cols))
            })
            .collect()
    };
    let nil = CycleRep::from_maps(f, nil_spaces.iter().map(Subspace::dim).collect(), restrict(&nil_spaces)?)?;
    let reg = CycleRep::from_maps(f, reg_spaces.iter().map(Subspace::dim).collect(), restrict(&reg_spaces)?)?;
    let phis = (0..n)
        .map(|k| {
            let mut cols = nil_spaces[k].vectors();
            cols.extend(reg_spaces[k].vectors());
            Matrix::from_columns(f, u.dim(k), &cols)
                .inverse()
                .ok_or_else(|| Error::DimensionMismatch("Fitting summands are not complementary".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FittingSplit {
        nil,
        reg,
        witness: MorphismFamily::new(phis, Default::default()),
    })
}

/// An isomorphism between regular cycles, or `None` when `(πu)_0` and
/// `(πv)_0` are not similar.
pub fn regular_iso<F: Field>(u: &CycleRep<F>, v: &CycleRep<F>) -> Result<Option<MorphismFamily<F>>> {
    u.check_compatible(v)?;
    u.require_no_saturated("regular_iso")?;
    v.require_no_saturated("regular_iso")?;
    if !u.is_regular() || !v.is_regular() {
        return Err(Error::NotRegular);
    }
    if u.dims() != v.dims() {
        return Ok(None);
    }
    let a = u.compose_cycle(0);
    let b = v.compose_cycle(0);
    if invariant_factors(&a)? != invariant_factors(&b)? {
        return Ok(None);
    }
    let h = similarity_witness(&a, &b);
    let mut phis = vec![h];
    for k in 0..u.n() - 1 {
        let inv = u.map(k).inverse().expect("regular");
        let next = v.map(k).mul(&phis[k])?.mul(&inv)?;
        phis.push(next);
    }
    let family = MorphismFamily::new(phis, Default::default());
    debug_assert!(family.verify_iso(u, v).is_ok());
    Ok(Some(family))
}

/// Invertible `h` with `h·a = b·h`, for similar `a` and `b`. The solution
/// space of the linear system is sampled with a fixed seed until an
/// invertible element turns up.
fn similarity_witness<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let f = a.field();
    let d = a.rows();
    if d == 0 {
        return Matrix::zeros(f, 0, 0);
    }
    // Unknown h_{ij} sits at index i·d + j; row (r, c) encodes (h·a − b·h)_{rc}.
    let mut system = Matrix::zeros(f, d * d, d * d);
    for r in 0..d {
        for c in 0..d {
            let row = r * d + c;
            for l in 0..d {
                let idx = r * d + l;
                let v = f.add(system.get(row, idx), a.get(l, c));
                system.set(row, idx, v);
                let idx = l * d + c;
                let v = f.sub(system.get(row, idx), b.get(r, l));
                system.set(row, idx, v);
            }
        }
    }
    let basis = system.kernel_vectors();
    let to_matrix = |v: &[F::Elem]| {
        Matrix::from_rows(f, d, v.chunks(d).map(|c| c.to_vec()).collect()).expect("square")
    };
    if let Some(h) = basis.iter().map(|v| to_matrix(v)).find(|h| h.is_invertible()) {
        return h;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    loop {
        let coeffs: Vec<_> = basis.iter().map(|_| f.random_elem(&mut rng)).collect();
        let h = to_matrix(&vector::combine(f, d * d, &coeffs, &basis));
        if h.is_invertible() {
            return h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn fitting_examples() {
        let q = Rationals;
        let diag = Matrix::from_i64(&q, &[&[0, 0], &[0, 2]]);
        let u = CycleRep::from_maps(&q, vec![2], vec![diag]).unwrap();
        let s = fitting_split(&u).unwrap();
        assert_eq!(s.nil.dims(), &[1]);
        assert!(s.nil.map(0).is_zero());
        assert_eq!(s.reg.map(0), &Matrix::from_i64(&q, &[&[2]]));
        s.witness.verify_iso(&u, &s.nil.direct_sum(&s.reg).unwrap()).unwrap();

        let one = Matrix::identity(&q, 1);
        let regular = CycleRep::from_maps(&q, vec![1, 1], vec![one.clone(), one]).unwrap();
        let s = fitting_split(&regular).unwrap();
        assert_eq!(s.nil.dims(), &[0, 0]);
        assert_eq!(s.reg, regular);
    }

    #[test]
    fn regular_iso_examples() {
        let q = Rationals;
        let m = |v: i64| Matrix::from_i64(&q, &[&[v]]);
        let u = CycleRep::from_maps(&q, vec![1, 1], vec![m(2), m(1)]).unwrap();
        let v = CycleRep::from_maps(&q, vec![1, 1], vec![m(1), m(2)]).unwrap();
        regular_iso(&u, &v).unwrap().unwrap().verify_iso(&u, &v).unwrap();
        regular_iso(&u, &u).unwrap().unwrap().verify_iso(&u, &u).unwrap();

        let two = CycleRep::from_maps(&q, vec![1], vec![m(2)]).unwrap();
        let three = CycleRep::from_maps(&q, vec![1], vec![m(3)]).unwrap();
        assert!(regular_iso(&two, &three).unwrap().is_none());
        let nil = CycleRep::from_maps(&q, vec![1], vec![m(0)]).unwrap();
        assert_eq!(regular_iso(&nil, &nil).unwrap_err(), Error::NotRegular);
    }
}
