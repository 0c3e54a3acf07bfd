//! Realization of finite invariant tables, decomposition into canonical
//! cells, the isomorphism decision and adapted bases.

use std::collections::BTreeMap;
use std::fmt;

use crate::card::Card;
use crate::cyclerep::{fitting_split, regular_iso, CycleRep, MorphismFamily};
use crate::error::{Error, Result};
use crate::extension::build_isomorphism;
use crate::field::Field;
use crate::filtration::{kaplansky_invariants, InvariantTable};
use crate::matrix::{vector, Matrix};
use crate::ordinal::Ordinal;
use crate::poly::invariant_factors;
use crate::terminal::TerminalRep;
use crate::text::content_lines;

/// Canonical cells `(base, size) ↦ count` and infinite cells `base ↦ card`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMultiset {
    n: usize,
    finite: BTreeMap<(usize, usize), u64>,
    infinite: BTreeMap<usize, Card>,
}

impl CellMultiset {
    pub fn new(n: usize) -> Self {
        CellMultiset {
            n,
            finite: BTreeMap::new(),
            infinite: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn finite(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.finite
    }

    pub fn infinite(&self) -> &BTreeMap<usize, Card> {
        &self.infinite
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.infinite.is_empty()
    }

    /// Adds `count` copies of the cell of base `base` and size `size ≥ 1`.
    pub fn add(&mut self, base: usize, size: usize, count: u64) {
        assert!(size >= 1, "cells have size at least 1");
        if count > 0 {
            *self.finite.entry((base % self.n, size)).or_default() += count;
        }
    }

    pub fn add_infinite(&mut self, base: usize, c: Card) {
        if !c.is_zero() {
            let e = self.infinite.entry(base % self.n).or_insert(Card::ZERO);
            *e = *e + c;
        }
    }

    /// Entry `κ_{k,α} = c` becomes `c` cells of base `k − α` and size `α + 1`.
    pub fn from_table(n: usize, t: &InvariantTable) -> Result<Self> {
        let mut cells = Self::new(n);
        for ((k, a), c) in t.finite_entries() {
            if *k >= n {
                return Err(Error::DimensionMismatch(format!("vertex {k} outside Z/{n}")));
            }
            let alpha = a
                .as_finite()
                .ok_or_else(|| Error::UnsupportedTransfinite(format!("κ_{{{k},{a}}}")))?;
            let count = c
                .finite()
                .ok_or_else(|| Error::Unrepresentable(format!("κ_{{{k},{a}}} = {c}")))?;
            let alpha = alpha as usize;
            cells.add((k + n - alpha % n) % n, alpha + 1, count);
        }
        for (&k, &c) in t.infinite_entries() {
            if k >= n {
                return Err(Error::DimensionMismatch(format!("vertex {k} outside Z/{n}")));
            }
            cells.add_infinite(k, c);
        }
        Ok(cells)
    }

    pub fn to_table(&self) -> InvariantTable {
        let mut t = InvariantTable::new();
        for (&(b, s), &c) in &self.finite {
            let k = (b + s - 1) % self.n;
            let a = Ordinal::from(s - 1);
            let cur = t.get(k, &a);
            t.set_finite(k, a, cur + Card::Finite(c));
        }
        for (&b, &c) in &self.infinite {
            t.set_infinite(b, c);
        }
        t
    }

    /// The pointed sum of all finite cells, each repeated by its count.
    pub fn terminal(&self) -> TerminalRep {
        let parts: Vec<TerminalRep> = self
            .finite
            .iter()
            .flat_map(|(&(b, s), &c)| (0..c).map(move |_| (b, s)))
            .map(|(b, s)| TerminalRep::canonical_cell(self.n, b, s))
            .collect();
        if parts.is_empty() {
            TerminalRep::trivial(self.n)
        } else {
            TerminalRep::pointed_sum(&parts).expect("same n")
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("cells v1\nn {}\n", self.n);
        for ((b, size), c) in &self.finite {
            s.push_str(&format!("cell {b} {size} {c}\n"));
        }
        for (b, c) in &self.infinite {
            s.push_str(&format!("infcell {b} {c}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines = content_lines(text);
        let last = lines.last().map_or(1, |l| l.0);
        let mut it = lines.into_iter();
        match it.next() {
            Some((_, "cells v1")) => {}
            Some((l, other)) => return Err(Error::parse(l, format!("expected `cells v1`, found `{other}`"))),
            None => return Err(Error::parse(1, "empty file")),
        }
        let (l, line) = it.next().ok_or_else(|| Error::parse(last, "missing n"))?;
        let n: usize = line
            .strip_prefix("n ")
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(l, format!("expected `n <int ≥ 1>`, found `{line}`")))?;
        let mut cells = Self::new(n);
        for (l, line) in it {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<u64> {
                toks.get(i)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(l, format!("bad number in `{line}`")))
            };
            match toks.first().copied() {
                Some("cell") if toks.len() == 4 => {
                    let (b, s, c) = (num(1)? as usize, num(2)? as usize, num(3)?);
                    if b >= n || s == 0 || c == 0 {
                        return Err(Error::parse(l, format!("bad cell `{line}`")));
                    }
                    cells.add(b, s, c);
                }
                Some("infcell") if toks.len() == 3 => {
                    let b = num(1)? as usize;
                    let c: Card = toks[2].parse().map_err(|e: String| Error::parse(l, e))?;
                    if b >= n || c.is_zero() {
                        return Err(Error::parse(l, format!("bad cell `{line}`")));
                    }
                    cells.add_infinite(b, c);
                }
                _ => return Err(Error::parse(l, format!("unexpected line `{line}`"))),
            }
        }
        Ok(cells)
    }
}

impl fmt::Display for CellMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The realization of a cell multiset: linear realization of the pointed
/// sum of its cells, with the infinite cells as saturated part.
pub fn realize_cells<F: Field>(field: &F, cells: &CellMultiset) -> Result<CycleRep<F>> {
    let u = cells.terminal().linear_realization(field)?;
    u.with_saturated(cells.infinite.clone())
}

/// A cycle whose invariant table is `m`.
pub fn realize_finite<F: Field>(field: &F, n: usize, m: &InvariantTable) -> Result<CycleRep<F>> {
    realize_cells(field, &CellMultiset::from_table(n, m)?)
}

#[derive(Clone, Debug)]
pub struct Decomposition<F: Field> {
    pub cells: CellMultiset,
    pub realization: CycleRep<F>,
    /// `u → realization`.
    pub morphism: MorphismFamily<F>,
}

pub fn decompose<F: Field>(u: &CycleRep<F>) -> Result<Decomposition<F>> {
    let table = kaplansky_invariants(u)?;
    let cells = CellMultiset::from_table(u.n(), &table)?;
    let realization = realize_cells(u.field(), &cells)?;
    let morphism = build_isomorphism(u, &realization)?.expect("a realization has the same invariants");
    Ok(Decomposition {
        cells,
        realization,
        morphism,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<F: Field> {
    /// Certificate `u → v`.
    Isomorphic(MorphismFamily<F>),
    /// The first invariant that differs.
    NotIsomorphic(String),
}

impl<F: Field> Verdict<F> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, Verdict::Isomorphic(_))
    }
}

fn factors_text<F: Field>(u: &CycleRep<F>) -> Result<String> {
    let fs = invariant_factors(&u.compose_cycle(0))?;
    let parts: Vec<String> = fs.iter().map(|p| p.to_string()).collect();
    Ok(format!("[{}]", parts.join(", ")))
}

/// Decides `u ≅ v`. Locally nilpotent inputs are compared by their tables;
/// otherwise both are split into nilpotent and regular parts first.
pub fn decide_isomorphic<F: Field>(u: &CycleRep<F>, v: &CycleRep<F>) -> Result<Verdict<F>> {
    u.check_compatible(v)?;
    if u.is_locally_nilpotent() && v.is_locally_nilpotent() {
        let (tu, tv) = (kaplansky_invariants(u)?, kaplansky_invariants(v)?);
        if let Some(d) = tu.first_difference(&tv) {
            return Ok(Verdict::NotIsomorphic(d.to_string()));
        }
        let phi = build_isomorphism(u, v)?.expect("equal tables");
        return Ok(Verdict::Isomorphic(phi));
    }
    let (su, sv) = (fitting_split(u)?, fitting_split(v)?);
    let (tu, tv) = (kaplansky_invariants(&su.nil)?, kaplansky_invariants(&sv.nil)?);
    if let Some(d) = tu.first_difference(&tv) {
        return Ok(Verdict::NotIsomorphic(format!("nilpotent parts: {d}")));
    }
    if su.reg.dims() != sv.reg.dims() {
        return Ok(Verdict::NotIsomorphic(format!(
            "regular parts have dims {:?} vs {:?}",
            su.reg.dims(),
            sv.reg.dims()
        )));
    }
    let Some(phi_reg) = regular_iso(&su.reg, &sv.reg)? else {
        return Ok(Verdict::NotIsomorphic(format!(
            "regular parts differ: invariant factors {} vs {}",
            factors_text(&su.reg)?,
            factors_text(&sv.reg)?
        )));
    };
    let phi_nil = build_isomorphism(&su.nil, &sv.nil)?.expect("equal tables");
    let back = sv.witness.inverse().expect("split witnesses are invertible");
    let phi = su.witness.then(&phi_nil.block_diag(&phi_reg))?.then(&back)?;
    let phi = MorphismFamily::new(phi.phis().to_vec(), Default::default());
    phi.verify_iso(u, v)?;
    Ok(Verdict::Isomorphic(phi))
}

/// Per-vertex named vectors mapped by `M_k` to a named vector or to zero.
/// Infinite cells are kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedBasis<F: Field> {
    field: F,
    vectors: Vec<Vec<(String, Vec<F::Elem>)>>,
    succ: Vec<Vec<Option<usize>>>,
    symbolic: BTreeMap<usize, Card>,
}

impl<F: Field> AdaptedBasis<F> {
    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self, k: usize) -> &[(String, Vec<F::Elem>)] {
        &self.vectors[k]
    }

    /// Index at vertex `k+1` of the successor of vector `i` at `k`.
    pub fn successor(&self, k: usize, i: usize) -> Option<usize> {
        self.succ[k][i]
    }

    pub fn symbolic(&self) -> &BTreeMap<usize, Card> {
        &self.symbolic
    }

    /// Checks independence, spanning and `M_k b = succ(b)` (or 0) for every
    /// vector, and that the symbolic cells match the saturated part.
    pub fn validate(&self, u: &CycleRep<F>) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidAdaptedBasis(m));
        if self.n() != u.n() {
            return bad(format!("{} vertices for a {}-cycle", self.n(), u.n()));
        }
        for k in 0..u.n() {
            let vs = &self.vectors[k];
            if vs.len() != u.dim(k) || vs.iter().any(|(_, v)| v.len() != u.dim(k)) {
                return bad(format!("vertex {k} needs {} vectors of length {}", u.dim(k), u.dim(k)));
            }
            let cols: Vec<_> = vs.iter().map(|(_, v)| v.clone()).collect();
            if !Matrix::from_columns(&self.field, u.dim(k), &cols).is_invertible() {
                return bad(format!("vectors at vertex {k} are not a basis"));
            }
            let next = (k + 1) % u.n();
            for (i, (name, v)) in vs.iter().enumerate() {
                let image = u.map(k).apply(v);
                let expected = match self.succ[k][i] {
                    Some(j) => self.vectors[next]
                        .get(j)
                        .map(|(_, w)| w.clone())
                        .ok_or_else(|| Error::InvalidAdaptedBasis(format!("successor of {name} out of range")))?,
                    None => vector::zero(&self.field, u.dim(next)),
                };
                if image != expected {
                    return bad(format!("M_{k} {name} is not its successor"));
                }
            }
        }
        if &self.symbolic != u.saturated() {
            return bad("symbolic cells differ from the saturated part".into());
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let f = &self.field;
        let mut s = format!("adapted-basis v1\nn {}\n", self.n());
        for (k, vs) in self.vectors.iter().enumerate() {
            for (name, v) in vs {
                let coords: Vec<String> = v.iter().map(|a| f.format_elem(a)).collect();
                s.push_str(&format!("basis {k} {name} : {}\n", coords.join(" ")));
            }
        }
        for (k, vs) in self.vectors.iter().enumerate() {
            let next = (k + 1) % self.n();
            for (i, (name, _)) in vs.iter().enumerate() {
                let target = self.succ[k][i].map_or("ZERO", |j| self.vectors[next][j].0.as_str());
                s.push_str(&format!("succ {name} -> {target}\n"));
            }
        }
        for (b, c) in &self.symbolic {
            s.push_str(&format!("symbolic {b} {c} e_0 <- e_1 <- e_2 <- ...\n"));
        }
        s
    }

    pub fn parse(field: &F, text: &str) -> Result<Self> {
        let lines = content_lines(text);
        let last = lines.last().map_or(1, |l| l.0);
        let mut it = lines.into_iter();
        match it.next() {
            Some((_, "adapted-basis v1")) => {}
            Some((l, other)) => {
                return Err(Error::parse(l, format!("expected `adapted-basis v1`, found `{other}`")))
            }
            None => return Err(Error::parse(1, "empty file")),
        }
        let (l, line) = it.next().ok_or_else(|| Error::parse(last, "missing n"))?;
        let n: usize = line
            .strip_prefix("n ")
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(l, format!("expected `n <int ≥ 1>`, found `{line}`")))?;
        let mut vectors: Vec<Vec<(String, Vec<F::Elem>)>> = vec![Vec::new(); n];
        let mut where_is: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        let mut succ: Vec<Vec<Option<usize>>> = Vec::new();
        let mut symbolic = BTreeMap::new();
        for (l, line) in it {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.first().copied() {
                Some("basis") if toks.len() >= 4 && toks[3] == ":" => {
                    if !succ.is_empty() {
                        return Err(Error::parse(l, "basis lines must precede succ lines"));
                    }
                    let k: usize = toks[1]
                        .parse()
                        .ok()
                        .filter(|&k| k < n)
                        .ok_or_else(|| Error::parse(l, format!("bad vertex `{}`", toks[1])))?;
                    let coords = toks[4..]
                        .iter()
                        .map(|t| field.parse_elem(t).map_err(|e| Error::parse(l, e)))
                        .collect::<Result<Vec<_>>>()?;
                    let name = toks[2].to_string();
                    if where_is.insert(name.clone(), (k, vectors[k].len())).is_some() {
                        return Err(Error::parse(l, format!("duplicate name {name}")));
                    }
                    vectors[k].push((name, coords));
                }
                Some("succ") if toks.len() == 4 && toks[2] == "->" => {
                    if succ.is_empty() {
                        succ = vectors.iter().map(|vs| vec![None; vs.len()]).collect();
                    }
                    let &(k, i) = where_is
                        .get(toks[1])
                        .ok_or_else(|| Error::parse(l, format!("unknown vector {}", toks[1])))?;
                    succ[k][i] = match toks[3] {
                        "ZERO" => None,
                        t => {
                            let &(k2, j) = where_is
                                .get(t)
                                .ok_or_else(|| Error::parse(l, format!("unknown vector {t}")))?;
                            if k2 != (k + 1) % n {
                                return Err(Error::parse(l, format!("{t} is not at vertex {}", (k + 1) % n)));
                            }
                            Some(j)
                        }
                    };
                }
                Some("symbolic") if toks.len() >= 3 => {
                    let b: usize = toks[1]
                        .parse()
                        .ok()
                        .filter(|&b| b < n)
                        .ok_or_else(|| Error::parse(l, format!("bad base `{}`", toks[1])))?;
                    let c: Card = toks[2].parse().map_err(|e: String| Error::parse(l, e))?;
                    symbolic.insert(b, c);
                }
                _ => return Err(Error::parse(l, format!("unexpected line `{line}`"))),
            }
        }
        if succ.is_empty() {
            succ = vectors.iter().map(|vs| vec![None; vs.len()]).collect();
        }
        Ok(AdaptedBasis {
            field: field.clone(),
            vectors,
            succ,
            symbolic,
        })
    }
}

/// An adapted basis pulled back from the standard basis of the cell
/// realization. Vector `i` of vertex `k` is named `x<k>_<i>`.
pub fn adapted_basis<F: Field>(u: &CycleRep<F>) -> Result<AdaptedBasis<F>> {
    let dec = decompose(u)?;
    let f = u.field();
    let r = &dec.realization;
    let n = u.n();
    let mut vectors = Vec::with_capacity(n);
    let mut succ = Vec::with_capacity(n);
    for k in 0..n {
        let inv = dec.morphism.phi(k).inverse().expect("isomorphism");
        vectors.push(
            (0..u.dim(k))
                .map(|i| (format!("x{k}_{i}"), inv.column(i)))
                .collect::<Vec<_>>(),
        );
        let m = r.map(k);
        succ.push(
            (0..u.dim(k))
                .map(|i| (0..m.rows()).find(|&j| !f.is_zero(m.get(j, i))))
                .collect::<Vec<_>>(),
        );
    }
    let basis = AdaptedBasis {
        field: f.clone(),
        vectors,
        succ,
        symbolic: u.saturated().clone(),
    };
    basis.validate(u)?;
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn rep_a<F: Field>(f: &F) -> CycleRep<F> {
        CycleRep::from_maps(
            f,
            vec![1, 1],
            vec![Matrix::from_i64(f, &[&[1]]), Matrix::from_i64(f, &[&[0]])],
        )
        .unwrap()
    }

    fn table(entries: &[(usize, u64, u64)]) -> InvariantTable {
        let mut t = InvariantTable::new();
        for &(k, a, c) in entries {
            t.set_finite(k, Ordinal::finite(a), Card::Finite(c));
        }
        t
    }

    #[test]
    fn realize_examples() {
        let f = PrimeField::new(2).unwrap();
        let u = realize_finite(&f, 2, &table(&[(1, 1, 1)])).unwrap();
        assert_eq!(u, rep_a(&f));
        assert_eq!(realize_finite(&f, 2, &InvariantTable::new()).unwrap(), CycleRep::zero(&f, 2));
        let z = realize_finite(&f, 1, &table(&[(0, 0, 3)])).unwrap();
        assert_eq!(z.dims(), &[3]);
        assert!(z.map(0).is_zero());

        let mut t = InvariantTable::new();
        t.set_finite(0, "w".parse().unwrap(), Card::Finite(1));
        assert!(matches!(realize_finite(&f, 2, &t), Err(Error::UnsupportedTransfinite(_))));
        let mut t = InvariantTable::new();
        t.set_finite(0, Ordinal::finite(1), Card::Aleph0);
        assert!(matches!(realize_finite(&f, 2, &t), Err(Error::Unrepresentable(_))));
    }

    #[test]
    fn decompose_examples() {
        let f = PrimeField::new(2).unwrap();
        let a = rep_a(&f);
        let d = decompose(&a).unwrap();
        assert_eq!(d.cells.finite(), &BTreeMap::from([((0, 2), 1)]));
        d.morphism.verify_iso(&a, &d.realization).unwrap();
        assert!(decompose(&CycleRep::zero(&f, 2)).unwrap().cells.is_empty());
        let ab = a.direct_sum(&a.shift(1)).unwrap();
        assert_eq!(
            decompose(&ab).unwrap().cells.finite(),
            &BTreeMap::from([((0, 2), 1), ((1, 2), 1)])
        );
        let text = d.cells.to_text();
        assert_eq!(CellMultiset::parse(&text).unwrap(), d.cells);
    }

    #[test]
    fn decide_examples() {
        let f = PrimeField::new(2).unwrap();
        let a = rep_a(&f);
        assert_eq!(
            decide_isomorphic(&a, &a.shift(1)).unwrap(),
            Verdict::NotIsomorphic("κ_{1,1} differs: 1 vs 0".into())
        );
        let (v, _) = a.direct_sum(&a).unwrap().random_basis_change(4);
        let Verdict::Isomorphic(phi) = decide_isomorphic(&a.direct_sum(&a).unwrap(), &v).unwrap() else {
            panic!("expected an isomorphism");
        };
        phi.verify_iso(&a.direct_sum(&a).unwrap(), &v).unwrap();

        let q = Rationals;
        let diag = |x: i64| CycleRep::from_maps(&q, vec![2], vec![Matrix::from_i64(&q, &[&[0, 0], &[0, x]])]).unwrap();
        let verdict = decide_isomorphic(&diag(1), &diag(2)).unwrap();
        assert!(!verdict.is_isomorphic());
        let (w, _) = diag(2).random_basis_change(7);
        let Verdict::Isomorphic(phi) = decide_isomorphic(&diag(2), &w).unwrap() else {
            panic!("expected an isomorphism");
        };
        phi.verify_iso(&diag(2), &w).unwrap();
    }

    #[test]
    fn adapted_basis_examples() {
        let f = PrimeField::new(2).unwrap();
        let a = rep_a(&f);
        let b = adapted_basis(&a).unwrap();
        assert_eq!(b.vectors(0).len(), 1);
        assert_eq!(b.successor(0, 0), Some(0));
        assert_eq!(b.successor(1, 0), None);
        let text = b.to_text();
        assert_eq!(AdaptedBasis::parse(&f, &text).unwrap(), b);
        assert_eq!(adapted_basis(&CycleRep::zero(&f, 2)).unwrap().vectors(0).len(), 0);

        let q = Rationals;
        let u = realize_finite(&q, 2, &table(&[(0, 1, 1), (1, 2, 1)])).unwrap();
        let (v, _) = u.random_basis_change(11);
        adapted_basis(&v).unwrap().validate(&v).unwrap();
        let sat = v.with_saturated(BTreeMap::from([(1, Card::Aleph0)])).unwrap();
        let bs = adapted_basis(&sat).unwrap();
        assert!(bs.to_text().contains("symbolic 1 aleph0"));
    }
}
