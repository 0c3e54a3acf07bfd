//! The chains `U_{k,α}`, heights and cyclic Kaplansky invariants.
//!
//! For matrix data the chain is indexed by natural numbers: every step that
//! changes something drops the total dimension, so it stabilizes after at
//! most `Σ d_k + 1` steps.

use std::collections::BTreeMap;
use std::fmt;

use crate::card::Card;
use crate::cyclerep::CycleRep;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ordinal::{Ordinal, OrdinalOrInfinity};
use crate::subspace::Subspace;

/// The chain of a matrix-only cycle. Each vertex stores the levels
/// `U_{k,0} ⊇ … ⊇ U_{k,L}`; level `L` is the stable core `U_{k,∞}`.
#[derive(Clone, Debug)]
pub struct Filtration<F: Field> {
    rep: CycleRep<F>,
    levels: Vec<Vec<Subspace<F>>>,
    annihilators: Vec<Vec<Subspace<F>>>,
    kernels: Vec<Subspace<F>>,
    length: usize,
}

impl<F: Field> Filtration<F> {
    pub fn new(u: &CycleRep<F>) -> Result<Self> {
        u.require_no_saturated("chain")?;
        let f = u.field();
        let n = u.n();
        let mut levels: Vec<Vec<Subspace<F>>> =
            (0..n).map(|k| vec![Subspace::full(f, u.dim(k))]).collect();
        let mut alpha = 0;
        loop {
            let next: Vec<Subspace<F>> = (0..n)
                .map(|k| {
                    let prev = (k + n - 1) % n;
                    levels[prev][alpha].image(u.map(prev))
                })
                .collect();
            if next.iter().enumerate().all(|(k, s)| *s == levels[k][alpha]) {
                break;
            }
            for (k, s) in next.into_iter().enumerate() {
                levels[k].push(s);
            }
            alpha += 1;
        }
        let kernels = (0..n).map(|k| Subspace::kernel_of(u.map(k))).collect();
        let annihilators = levels
            .iter()
            .map(|chain| chain.iter().map(Subspace::annihilator).collect())
            .collect();
        Ok(Filtration {
            rep: u.clone(),
            levels,
            annihilators,
            kernels,
            length: alpha,
        })
    }

    pub fn rep(&self) -> &CycleRep<F> {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    /// The least `L` at which no vertex changes any more.
    pub fn length(&self) -> usize {
        self.length
    }

    /// `U_{k,α}`, with `α ≥ L` giving the stable core.
    pub fn level(&self, k: usize, alpha: usize) -> &Subspace<F> {
        let chain = &self.levels[k % self.n()];
        &chain[alpha.min(self.length)]
    }

    /// Linear forms cutting out `U_{k,α}`.
    pub(crate) fn level_annihilator(&self, k: usize, alpha: usize) -> &Subspace<F> {
        &self.annihilators[k % self.n()][alpha.min(self.length)]
    }

    pub fn levels(&self, k: usize) -> &[Subspace<F>] {
        &self.levels[k % self.n()]
    }

    pub fn core(&self, k: usize) -> &Subspace<F> {
        self.level(k, self.length)
    }

    pub fn kernel(&self, k: usize) -> &Subspace<F> {
        &self.kernels[k % self.n()]
    }

    /// Height as a level index; `None` stands for ∞.
    pub fn height_index(&self, k: usize, x: &[F::Elem]) -> Option<usize> {
        let chain = self.levels(k);
        if chain[self.length].contains(x) {
            return None;
        }
        // Levels are nested, so membership is monotone in α.
        let mut lo = 0;
        let mut hi = self.length;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if chain[mid].contains(x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }

    pub fn height(&self, k: usize, x: &[F::Elem]) -> OrdinalOrInfinity {
        match self.height_index(k, x) {
            Some(a) => OrdinalOrInfinity::finite(a),
            None => OrdinalOrInfinity::Infinity,
        }
    }

    /// `κ_{k,α} = dim(Ker M_k ∩ U_{k,α}) − dim(Ker M_k ∩ U_{k,α+1})`.
    pub fn kappa(&self, k: usize, alpha: usize) -> usize {
        let ker = self.kernel(k);
        let a = ker.intersect(self.level(k, alpha)).expect("same ambient");
        let b = ker.intersect(self.level(k, alpha + 1)).expect("same ambient");
        a.quotient_dim(&b).expect("nested")
    }

    /// Finite part of the invariant table.
    pub fn table(&self) -> InvariantTable {
        let mut t = InvariantTable::default();
        for k in 0..self.n() {
            for alpha in 0..self.length {
                t.set_finite(k, Ordinal::from(alpha), Card::from(self.kappa(k, alpha)));
            }
        }
        t
    }
}

/// Cyclic Kaplansky invariants: `κ_{k,α}` on a finite support and `κ_{k,∞}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantTable {
    finite: BTreeMap<(usize, Ordinal), Card>,
    infinite: BTreeMap<usize, Card>,
}

impl InvariantTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Zero values are dropped.
    pub fn set_finite(&mut self, k: usize, alpha: Ordinal, c: Card) {
        if c.is_zero() {
            self.finite.remove(&(k, alpha));
        } else {
            self.finite.insert((k, alpha), c);
        }
    }

    pub fn set_infinite(&mut self, k: usize, c: Card) {
        if c.is_zero() {
            self.infinite.remove(&k);
        } else {
            self.infinite.insert(k, c);
        }
    }

    pub fn get(&self, k: usize, alpha: &Ordinal) -> Card {
        self.finite.get(&(k, alpha.clone())).copied().unwrap_or(Card::ZERO)
    }

    pub fn get_infinite(&self, k: usize) -> Card {
        self.infinite.get(&k).copied().unwrap_or(Card::ZERO)
    }

    pub fn finite_entries(&self) -> &BTreeMap<(usize, Ordinal), Card> {
        &self.finite
    }

    pub fn infinite_entries(&self) -> &BTreeMap<usize, Card> {
        &self.infinite
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.infinite.is_empty()
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for ((k, a), &c) in &other.finite {
            let cur = t.get(*k, a);
            t.set_finite(*k, a.clone(), cur + c);
        }
        for (&k, &c) in &other.infinite {
            let cur = t.get_infinite(k);
            t.set_infinite(k, cur + c);
        }
        t
    }

    /// The first disagreement, scanning this table's entries in text order
    /// and then the other table's.
    pub fn first_difference(&self, other: &Self) -> Option<TableDifference> {
        let finite_keys = self.finite.keys().chain(other.finite.keys());
        for (k, a) in finite_keys {
            let (l, r) = (self.get(*k, a), other.get(*k, a));
            if l != r {
                return Some(TableDifference {
                    k: *k,
                    alpha: OrdinalOrInfinity::Ordinal(a.clone()),
                    left: l,
                    right: r,
                });
            }
        }
        let mut infinite_keys = self.infinite.keys().chain(other.infinite.keys());
        infinite_keys.find_map(|&k| {
            let (l, r) = (self.get_infinite(k), other.get_infinite(k));
            (l != r).then_some(TableDifference {
                k,
                alpha: OrdinalOrInfinity::Infinity,
                left: l,
                right: r,
            })
        })
    }

    /// Lines `kappa <k> <ordinal> <card>`, sorted, `inf` rows per vertex
    /// after the finite rows of that vertex.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<(usize, OrdinalOrInfinity, Card)> = self
            .finite
            .iter()
            .map(|((k, a), &c)| (*k, OrdinalOrInfinity::Ordinal(a.clone()), c))
            .chain(self.infinite.iter().map(|(&k, &c)| (k, OrdinalOrInfinity::Infinity, c)))
            .collect();
        rows.sort();
        rows.iter().map(|(k, a, c)| format!("kappa {k} {a} {c}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Self::default();
        for (l, line) in crate::text::content_lines(text) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [kw, k, a, c] = toks.as_slice() else {
                return Err(Error::parse(l, format!("expected `kappa <k> <ordinal> <card>`, found `{line}`")));
            };
            if *kw != "kappa" {
                return Err(Error::parse(l, format!("unexpected directive `{kw}`")));
            }
            let k: usize = k.parse().map_err(|_| Error::parse(l, format!("bad vertex `{k}`")))?;
            let c: Card = c.parse().map_err(|e: String| Error::parse(l, e))?;
            match a.parse::<OrdinalOrInfinity>().map_err(|e| Error::parse(l, e))? {
                OrdinalOrInfinity::Ordinal(a) => t.set_finite(k, a, c),
                OrdinalOrInfinity::Infinity => t.set_infinite(k, c),
            }
        }
        Ok(t)
    }
}

impl fmt::Display for InvariantTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDifference {
    pub k: usize,
    pub alpha: OrdinalOrInfinity,
    pub left: Card,
    pub right: Card,
}

impl fmt::Display for TableDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "κ_{{{},{}}} differs: {} vs {}",
            self.k, self.alpha, self.left, self.right
        )
    }
}

pub fn chain<F: Field>(u: &CycleRep<F>) -> Result<Filtration<F>> {
    Filtration::new(u)
}

pub fn height<F: Field>(u: &CycleRep<F>, k: usize, x: &[F::Elem]) -> Result<OrdinalOrInfinity> {
    Ok(Filtration::new(&u.matrix_part())?.height(k, x))
}

/// Full table: matrix part from the chain, `κ_{k,∞}` from the saturated
/// multiset.
pub fn kaplansky_invariants<F: Field>(u: &CycleRep<F>) -> Result<InvariantTable> {
    if !u.is_locally_nilpotent() {
        return Err(Error::NotLocallyNilpotent);
    }
    let mut t = Filtration::new(&u.matrix_part())?.table();
    for (&k, &c) in u.saturated() {
        t.set_infinite(k, c);
    }
    Ok(t)
}

/// Matrix core zero everywhere and no saturated cells.
pub fn is_reduced<F: Field>(u: &CycleRep<F>) -> bool {
    if u.has_saturated() {
        return false;
    }
    let filt = Filtration::new(u).expect("matrix part");
    (0..u.n()).all(|k| filt.core(k).is_zero())
}

/// Every map of the matrix part surjective, i.e. `U_{k,∞} = U_k`. For a
/// nilpotent cycle this means the matrix dims are all zero.
pub fn is_saturated<F: Field>(u: &CycleRep<F>) -> bool {
    (0..u.n()).all(|k| u.map(k).rank() == u.dim(k + 1))
}

/// `(saturated cells alone, matrix part alone)`.
pub fn saturated_reduced_split<F: Field>(u: &CycleRep<F>) -> Result<(CycleRep<F>, CycleRep<F>)> {
    if !u.is_locally_nilpotent() {
        return Err(Error::NotLocallyNilpotent);
    }
    let red = u.matrix_part();
    assert!(is_reduced(&red), "nilpotent matrix part with a nonzero core");
    let sat = CycleRep::pure_cells(u.field(), u.n(), u.saturated().clone())?;
    Ok((sat, red))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::matrix::Matrix;

    fn rep_a<F: Field>(f: &F) -> CycleRep<F> {
        CycleRep::from_maps(
            f,
            vec![1, 1],
            vec![Matrix::from_i64(f, &[&[1]]), Matrix::from_i64(f, &[&[0]])],
        )
        .unwrap()
    }

    #[test]
    fn chain_examples() {
        let q = Rationals;
        let c = chain(&rep_a(&q)).unwrap();
        assert_eq!(c.length(), 2);
        let dims = |k| c.levels(k).iter().map(Subspace::dim).collect::<Vec<_>>();
        assert_eq!(dims(0), vec![1, 0, 0]);
        assert_eq!(dims(1), vec![1, 1, 0]);
        assert!(c.core(0).is_zero() && c.core(1).is_zero());

        let z = chain(&CycleRep::zero(&q, 2)).unwrap();
        assert_eq!(z.length(), 0);

        let one = Matrix::identity(&q, 1);
        let reg = CycleRep::from_maps(&q, vec![1, 1], vec![one.clone(), one]).unwrap();
        let r = chain(&reg).unwrap();
        assert_eq!(r.length(), 0);
        assert!(r.core(0).is_full() && r.core(1).is_full());
    }

    #[test]
    fn height_examples() {
        let q = Rationals;
        let u = rep_a(&q);
        assert_eq!(height(&u, 0, &[q.zero()]).unwrap(), OrdinalOrInfinity::Infinity);
        assert_eq!(height(&u, 1, &[q.from_i64(3)]).unwrap(), OrdinalOrInfinity::finite(1));
        assert_eq!(height(&u, 0, &[q.one()]).unwrap(), OrdinalOrInfinity::finite(0));
    }

    #[test]
    fn invariant_examples() {
        let f = PrimeField::new(2).unwrap();
        let a = kaplansky_invariants(&rep_a(&f)).unwrap();
        assert_eq!(a.to_text(), "kappa 1 1 1\n");
        let b = kaplansky_invariants(&rep_a(&f).shift(1)).unwrap();
        assert_eq!(b.to_text(), "kappa 0 1 1\n");
        let cells = CycleRep::pure_cells(&f, 2, BTreeMap::from([(0, Card::Finite(2))])).unwrap();
        assert_eq!(kaplansky_invariants(&cells).unwrap().to_text(), "kappa 0 inf 2\n");
        assert_eq!(
            a.first_difference(&b).unwrap().to_string(),
            "κ_{1,1} differs: 1 vs 0"
        );
        assert_eq!(InvariantTable::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn reduced_and_saturated() {
        let f = PrimeField::new(2).unwrap();
        let a = rep_a(&f);
        assert!(is_reduced(&a) && !is_saturated(&a));
        let cells = CycleRep::pure_cells(&f, 2, BTreeMap::from([(0, Card::Finite(1))])).unwrap();
        assert!(!is_reduced(&cells) && is_saturated(&cells));
        let z = CycleRep::zero(&f, 2);
        assert!(is_reduced(&z) && is_saturated(&z));

        let mixed = a
            .with_saturated(BTreeMap::from([(1, Card::Finite(1))]))
            .unwrap();
        let (sat, red) = saturated_reduced_split(&mixed).unwrap();
        assert_eq!(sat.saturated(), &BTreeMap::from([(1, Card::Finite(1))]));
        assert_eq!(red, a);
    }
}
