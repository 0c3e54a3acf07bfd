use std::collections::BTreeMap;

use crate::card::Card;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

use super::CycleRep;

/// Per-vertex matrices `φ_k: U_k → V_k`. Saturated cells are matched base
/// by base; `saturated_match` records the multiplicities that were paired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFamily<F: Field> {
    phis: Vec<Matrix<F>>,
    saturated_match: BTreeMap<usize, Card>,
}

impl<F: Field> MorphismFamily<F> {
    pub fn new(phis: Vec<Matrix<F>>, saturated_match: BTreeMap<usize, Card>) -> Self {
        MorphismFamily {
            phis,
            saturated_match,
        }
    }

    pub fn identity(u: &CycleRep<F>) -> Self {
        let phis = u.dims().iter().map(|&d| Matrix::identity(u.field(), d)).collect();
        Self::new(phis, u.saturated().clone())
    }

    pub fn phis(&self) -> &[Matrix<F>] {
        &self.phis
    }

    pub fn phi(&self, k: usize) -> &Matrix<F> {
        &self.phis[k % self.phis.len()]
    }

    pub fn saturated_match(&self) -> &BTreeMap<usize, Card> {
        &self.saturated_match
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        let phis = self
            .phis
            .iter()
            .zip(&other.phis)
            .map(|(a, b)| b.mul(a))
            .collect::<Result<_>>()?;
        Ok(Self::new(phis, self.saturated_match.clone()))
    }

    /// Componentwise inverse, `None` when some `φ_k` is singular.
    pub fn inverse(&self) -> Option<Self> {
        let phis = self.phis.iter().map(|p| p.inverse()).collect::<Option<_>>()?;
        Some(Self::new(phis, self.saturated_match.clone()))
    }

    /// Block-diagonal family on direct sums.
    pub fn block_diag(&self, other: &Self) -> Self {
        let phis = self.phis.iter().zip(&other.phis).map(|(a, b)| a.block_diag(b)).collect();
        let mut sat = self.saturated_match.clone();
        for (&b, &c) in &other.saturated_match {
            let e = sat.entry(b).or_insert(Card::ZERO);
            *e = *e + c;
        }
        Self::new(phis, sat)
    }

    /// Checks shapes and `φ_{k+1}·M_k = M'_k·φ_k` by exact equality.
    pub fn verify_morphism(&self, u: &CycleRep<F>, v: &CycleRep<F>) -> Result<()> {
        u.check_compatible(v)?;
        let n = u.n();
        if self.phis.len() != n {
            return Err(Error::InvalidMorphism(format!(
                "{} matrices for a {n}-cycle",
                self.phis.len()
            )));
        }
        for k in 0..n {
            let p = &self.phis[k];
            if p.rows() != v.dim(k) || p.cols() != u.dim(k) {
                return Err(Error::InvalidMorphism(format!(
                    "phi {k} is {}x{}, expected {}x{}",
                    p.rows(),
                    p.cols(),
                    v.dim(k),
                    u.dim(k)
                )));
            }
        }
        for k in 0..n {
            let lhs = self.phi(k + 1).mul(u.map(k))?;
            let rhs = v.map(k).mul(self.phi(k))?;
            if lhs != rhs {
                return Err(Error::InvalidMorphism(format!(
                    "square at vertex {k} does not commute"
                )));
            }
        }
        Ok(())
    }

    /// A morphism whose matrices are all invertible and whose saturated
    /// multisets agree.
    pub fn verify_iso(&self, u: &CycleRep<F>, v: &CycleRep<F>) -> Result<()> {
        self.verify_morphism(u, v)?;
        if let Some(k) = self.phis.iter().position(|p| !p.is_invertible()) {
            return Err(Error::InvalidMorphism(format!("phi {k} is not invertible")));
        }
        if u.saturated() != v.saturated() {
            return Err(Error::InvalidMorphism(
                "saturated multisets differ".to_string(),
            ));
        }
        Ok(())
    }

    /// Certificate text: `morphism v1`, then `phi <k>` and the rows of `φ_k`.
    pub fn to_text(&self) -> String {
        let mut s = String::from("morphism v1\n");
        for (k, p) in self.phis.iter().enumerate() {
            s.push_str(&format!("phi {k}\n"));
            if p.cols() > 0 {
                s.push_str(&p.to_text());
            }
        }
        s
    }

    /// Parses a certificate; shapes come from the source and target dims.
    pub fn parse(field: &F, text: &str, source: &CycleRep<F>, target: &CycleRep<F>) -> Result<Self> {
        let lines = crate::text::content_lines(text);
        let mut it = lines.iter().peekable();
        match it.next() {
            Some((_, "morphism v1")) => {}
            Some((l, other)) => return Err(Error::parse(*l, format!("expected `morphism v1`, found `{other}`"))),
            None => return Err(Error::parse(1, "empty certificate")),
        }
        let n = source.n();
        let mut phis: Vec<Option<Matrix<F>>> = vec![None; n];
        while let Some((l, line)) = it.next() {
            let k = line
                .strip_prefix("phi ")
                .and_then(|s| s.trim().parse::<usize>().ok())
                .filter(|&k| k < n)
                .ok_or_else(|| Error::parse(*l, format!("expected `phi <k>` with k < {n}")))?;
            if phis[k].is_some() {
                return Err(Error::parse(*l, format!("duplicate phi {k}")));
            }
            let (rows, cols) = (target.dim(k), source.dim(k));
            let count = if cols == 0 { 0 } else { rows };
            let mut body = Vec::with_capacity(count);
            for _ in 0..count {
                let (rl, row) = it
                    .next()
                    .ok_or_else(|| Error::parse(*l, format!("phi {k} needs {rows} rows")))?;
                body.push((*rl, *row));
            }
            let m = if cols == 0 {
                Matrix::zeros(field, rows, 0)
            } else {
                Matrix::parse_rows(field, cols, body)?
            };
            phis[k] = Some(m);
        }
        let phis = phis
            .into_iter()
            .enumerate()
            .map(|(k, p)| {
                p.ok_or_else(|| Error::parse(lines.last().map_or(1, |l| l.0), format!("missing phi {k}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(phis, source.saturated().clone()))
    }
}
