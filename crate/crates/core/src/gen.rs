//! Seeded generators for cells, tables and representations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::card::Card;
use crate::classify::{realize_cells, CellMultiset};
use crate::cyclerep::CycleRep;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::InvariantTable;
use crate::ordinal::Ordinal;
use crate::terminal::TerminalRep;

/// Total dimension of the realization of `cells`.
pub fn cells_dim(cells: &CellMultiset) -> usize {
    cells.finite().iter().map(|(&(_, s), &c)| s * c as usize).sum()
}

/// Random cells of size at most `max_size` with total dimension at most
/// `max_dim`.
pub fn random_cells<R: Rng + ?Sized>(rng: &mut R, n: usize, max_size: usize, max_dim: usize) -> CellMultiset {
    let mut cells = CellMultiset::new(n);
    let mut budget = max_dim;
    let count = rng.gen_range(0..=max_dim.max(1));
    for _ in 0..count {
        if budget == 0 {
            break;
        }
        let size = rng.gen_range(1..=max_size.min(budget).max(1));
        let base = rng.gen_range(0..n);
        cells.add(base, size, 1);
        budget -= size;
    }
    cells
}

/// A random finite table with entries `κ_{k,α}`, `α ≤ max_ord`, values
/// in `1..=max_card`.
pub fn random_table<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_ord: u64,
    max_card: u64,
    max_entries: usize,
) -> InvariantTable {
    let mut t = InvariantTable::new();
    for _ in 0..rng.gen_range(0..=max_entries) {
        let k = rng.gen_range(0..n);
        let a = rng.gen_range(0..=max_ord);
        t.set_finite(k, Ordinal::finite(a), Card::Finite(rng.gen_range(1..=max_card)));
    }
    t
}

/// A different cell multiset. Splitting a cell `(b, s)` into `(b, s−1)` and
/// `(b+s−1, 1)`, or merging `(b, s)` with `(b+s, t)`, keeps the dimension
/// at each vertex; a fresh cell is added only when neither applies.
pub fn perturb_cells<R: Rng + ?Sized>(rng: &mut R, cells: &CellMultiset) -> CellMultiset {
    let n = cells.n();
    let keys: Vec<(usize, usize)> = cells.finite().keys().copied().collect();
    let mut moves: Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)> = Vec::new();
    for &(b, s) in &keys {
        if s >= 2 {
            moves.push((vec![(b, s)], vec![(b, s - 1), ((b + s - 1) % n, 1)]));
        }
        for &(b2, t) in &keys {
            let distinct = (b2, t) != (b, s) || cells.finite()[&(b, s)] >= 2;
            if b2 == (b + s) % n && distinct {
                moves.push((vec![(b, s), (b2, t)], vec![(b, s + t)]));
            }
        }
    }
    let mut out = CellMultiset::new(n);
    let removed: Vec<(usize, usize)>;
    let added: Vec<(usize, usize)>;
    match moves.choose(rng) {
        Some((r, a)) => {
            removed = r.clone();
            added = a.clone();
        }
        None => {
            removed = Vec::new();
            added = vec![(rng.gen_range(0..n), 1)];
        }
    }
    for (&(b, s), &c) in cells.finite() {
        let drop = removed.iter().filter(|&&x| x == (b, s)).count() as u64;
        out.add(b, s, c - drop);
    }
    for (b, s) in added {
        out.add(b, s, 1);
    }
    for (&b, &c) in cells.infinite() {
        out.add_infinite(b, c);
    }
    out
}

/// Parses `base:size[xcount],...`, e.g. `0:2,1:3x2`.
pub fn parse_cells_spec(n: usize, spec: &str) -> Result<CellMultiset> {
    let bad = |part: &str| Error::parse(1, format!("bad cell `{part}`, expected base:size[xcount]"));
    let mut cells = CellMultiset::new(n);
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (b, rest) = part.split_once(':').ok_or_else(|| bad(part))?;
        let (s, c) = rest.split_once('x').unwrap_or((rest, "1"));
        let b: usize = b.parse().map_err(|_| bad(part))?;
        let s: usize = s.parse().map_err(|_| bad(part))?;
        let c: u64 = c.parse().map_err(|_| bad(part))?;
        if b >= n || s == 0 {
            return Err(bad(part));
        }
        cells.add(b, s, c);
    }
    Ok(cells)
}

/// The realization of `cells` after a seeded change of basis.
pub fn generate<F: Field>(field: &F, cells: &CellMultiset, seed: u64) -> Result<CycleRep<F>> {
    Ok(realize_cells(field, cells)?.random_basis_change(seed).0)
}

/// A random locally nilpotent cycle of total dimension at most `max_dim`.
pub fn random_nilpotent<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, n: usize, max_dim: usize) -> CycleRep<F> {
    let cells = random_cells(rng, n, max_dim.max(1), max_dim);
    let seed = rng.gen();
    generate(field, &cells, seed).expect("finite cells realize")
}

/// A pointed sum of random canonical cells; the trivial cycle when no cell
/// is drawn.
pub fn random_pointed_sum<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cells: usize, max_size: usize) -> TerminalRep {
    let parts: Vec<TerminalRep> = (0..rng.gen_range(0..=max_cells))
        .map(|_| TerminalRep::canonical_cell(n, rng.gen_range(0..n), rng.gen_range(0..=max_size)))
        .collect();
    if parts.is_empty() {
        TerminalRep::trivial(n)
    } else {
        TerminalRep::pointed_sum(&parts).expect("same n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spec_parsing() {
        let c = parse_cells_spec(2, "0:2,1:3x2").unwrap();
        assert_eq!(c.finite().get(&(1, 3)), Some(&2));
        assert_eq!(cells_dim(&c), 8);
        assert!(parse_cells_spec(2, "2:1").is_err());
        assert!(parse_cells_spec(2, "0:0").is_err());
    }

    #[test]
    fn perturbation_changes_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let c = random_cells(&mut rng, 3, 4, 8);
            let p = perturb_cells(&mut rng, &c);
            assert_ne!(c, p);
            assert!(cells_dim(&p) >= cells_dim(&c));
            if c.finite().keys().any(|&(_, s)| s >= 2) {
                assert_eq!(cells_dim(&c), cells_dim(&p));
            }
        }
    }
}
