//! Univariate polynomials over a field and invariant factors via the Smith
//! normal form of `tI − M`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &F) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `t − c`.
    pub fn linear(field: &F, c: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(c), field.one()])
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == Some(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).unwrap_or(&z),
                    other.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        Self::new(f, c)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, c)
    }

    /// Quotient and remainder. Panics when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dl = d.lead().expect("division by the zero polynomial");
        let inv = f.inv(dl).expect("nonzero lead");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(&r[i + dd], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(&r[i + j], &f.mul(&c, dc));
            }
            q[i] = c;
        }
        (Self::new(f, q), Self::new(f, r))
    }

    pub fn monic(&self) -> Self {
        let f = &self.field;
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = f.inv(l).expect("nonzero lead");
                Self::new(f, self.coeffs.iter().map(|c| f.mul(c, &inv)).collect())
            }
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mut s = f.format_elem(c);
            let negative = s.starts_with('-');
            if negative {
                s.remove(0);
            }
            if first {
                if negative {
                    write!(out, "-")?;
                }
            } else {
                write!(out, "{}", if negative { "-" } else { "+" })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if i == 0 {
                write!(out, "{s}")?;
            } else if s == "1" {
                write!(out, "{mono}")?;
            } else {
                write!(out, "{s}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Non-unit invariant factors of `tI − m`, monic, each dividing the next.
/// Two square matrices are similar exactly when these lists agree.
pub fn invariant_factors<F: Field>(m: &Matrix<F>) -> Result<Vec<Poly<F>>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let f = m.field();
    let n = m.rows();
    let mut a: Vec<Vec<Poly<F>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = f.neg(m.get(i, j));
                    let mut p = Poly::constant(f, c);
                    if i == j {
                        p = p.add(&Poly::new(f, vec![f.zero(), f.one()]));
                    }
                    p
                })
                .collect()
        })
        .collect();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        if !smith_step(&mut a, t) {
            break;
        }
        diag.push(a[t][t].monic());
    }
    Ok(diag.into_iter().filter(|p| !p.is_unit()).collect())
}

/// Clears row and column `t` around a pivot that divides the whole trailing
/// block. Returns false when the trailing block is zero.
fn smith_step<F: Field>(a: &mut [Vec<Poly<F>>], t: usize) -> bool {
    let n = a.len();
    loop {
        let Some((pi, pj)) = (t..n)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].degree())
        else {
            return false;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..n {
            let (q, r) = a[i][t].div_rem(&a[t][t]);
            if !q.is_zero() {
                for j in t..n {
                    let v = a[i][j].sub(&q.mul(&a[t][j]));
                    a[i][j] = v;
                }
            }
            clean &= r.is_zero();
        }
        for j in t + 1..n {
            let (q, r) = a[t][j].div_rem(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut().skip(t) {
                    let v = row[j].sub(&q.mul(&row[t]));
                    row[j] = v;
                }
            }
            clean &= r.is_zero();
        }
        if !clean {
            continue;
        }
        let bad = (t + 1..n)
            .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].div_rem(&a[t][t]).1.is_zero());
        match bad {
            None => return true,
            Some((i, _)) => {
                for j in t..n {
                    let v = a[t][j].add(&a[i][j]);
                    a[t][j] = v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn invariant_factor_examples() {
        let q = Rationals;
        let id = invariant_factors(&Matrix::identity(&q, 2)).unwrap();
        let t_minus_1 = Poly::linear(&q, &q.one());
        assert_eq!(id, vec![t_minus_1.clone(), t_minus_1.clone()]);

        let companion = Matrix::from_i64(&q, &[&[0, -1], &[1, 0]]);
        let cf = invariant_factors(&companion).unwrap();
        assert_eq!(cf.len(), 1);
        assert_eq!(cf[0].to_string(), "t^2+1");

        let jordan = Matrix::from_i64(&q, &[&[1, 1], &[0, 1]]);
        assert_eq!(
            invariant_factors(&jordan).unwrap(),
            vec![t_minus_1.mul(&t_minus_1)]
        );
        assert!(invariant_factors(&Matrix::zeros(&q, 1, 2)).is_err());
        assert!(invariant_factors(&Matrix::zeros(&q, 0, 0)).unwrap().is_empty());
    }

    #[test]
    fn divisibility_chain_and_product() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(&f, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let fs = invariant_factors(&m).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].to_string(), "t+3");
        assert_eq!(fs[1].degree(), Some(2));
        assert!(fs[1].div_rem(&fs[0]).1.is_zero());
    }

    #[test]
    fn display() {
        let q = Rationals;
        let p = Poly::new(&q, vec![q.from_i64(-3), q.from_i64(0), q.from_i64(2)]);
        assert_eq!(p.to_string(), "2*t^2-3");
        assert_eq!(Poly::linear(&q, &q.one()).to_string(), "t-1");
    }
}
