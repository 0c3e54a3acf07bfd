//! Pointed-set cycles: chains, discrete Kaplansky numbers, augmentation,
//! pointed sums, canonical cells and the linear realization.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::card::Card;
use crate::cyclerep::CycleRep;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::InvariantTable;
use crate::matrix::Matrix;
use crate::ordinal::Ordinal;
use crate::text::content_lines;

/// Finite pointed sets `X_k` with maps `f_k: X_k → X_{k+1}`. Elements are
/// stored by index; `names[k][i]` is the identifier of element `i` of `X_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalRep {
    names: Vec<Vec<String>>,
    base: Vec<usize>,
    maps: Vec<Vec<usize>>,
}

/// A failed terminality condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `X_{k,∞}` contains more than the basepoint.
    CoreNotBase { k: usize, extra: String },
    /// The orbit of `elem` under `f^n` never reaches the basepoint.
    OrbitMissesBase { k: usize, elem: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CoreNotBase { k, extra } => {
                write!(f, "(i) fails at vertex {k}: {extra} lies in the stable core")
            }
            Violation::OrbitMissesBase { k, elem } => {
                write!(f, "(iii) fails at vertex {k}: the orbit of {elem} never reaches the base")
            }
        }
    }
}

/// Discrete Kaplansky numbers `n_{k,α}`, zero entries omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscreteTable {
    entries: BTreeMap<(usize, usize), u64>,
}

impl DiscreteTable {
    pub fn get(&self, k: usize, alpha: usize) -> u64 {
        self.entries.get(&(k, alpha)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, k: usize, alpha: usize, c: u64) {
        if c == 0 {
            self.entries.remove(&(k, alpha));
        } else {
            self.entries.insert((k, alpha), c);
        }
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for (&(k, a), &c) in &other.entries {
            t.set(k, a, t.get(k, a) + c);
        }
        t
    }

    pub fn to_invariant_table(&self) -> InvariantTable {
        let mut t = InvariantTable::new();
        for (&(k, a), &c) in &self.entries {
            t.set_finite(k, Ordinal::from(a), Card::Finite(c));
        }
        t
    }
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.contains(char::is_whitespace) || name.contains("->") || name.contains('#') {
        return Err(Error::InvalidTerminal(format!("bad element name `{name}`")));
    }
    Ok(())
}

impl TerminalRep {
    /// Checks the structure of a pointed-set cycle: names unique, map
    /// targets in range, basepoints sent to basepoints.
    pub fn new(names: Vec<Vec<String>>, base: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidTerminal("a cycle needs n ≥ 1".into()));
        }
        if base.len() != n || maps.len() != n {
            return Err(Error::InvalidTerminal("per-vertex data has the wrong length".into()));
        }
        for k in 0..n {
            let mut seen = HashSet::new();
            for name in &names[k] {
                check_name(name)?;
                if !seen.insert(name) {
                    return Err(Error::InvalidTerminal(format!("duplicate element {name} at vertex {k}")));
                }
            }
            if base[k] >= names[k].len() {
                return Err(Error::InvalidTerminal(format!("vertex {k} has no basepoint")));
            }
            if maps[k].len() != names[k].len() {
                return Err(Error::InvalidTerminal(format!("map {k} is not defined everywhere")));
            }
            let next = (k + 1) % n;
            if maps[k].iter().any(|&t| t >= names[next].len()) {
                return Err(Error::InvalidTerminal(format!("map {k} leaves X_{next}")));
            }
            if maps[k][base[k]] != base[next] {
                return Err(Error::InvalidTerminal(format!("map {k} does not fix the basepoint")));
            }
        }
        Ok(TerminalRep { names, base, maps })
    }

    /// Singletons `{o}` at every vertex.
    pub fn trivial(n: usize) -> Self {
        TerminalRep {
            names: vec![vec!["o".to_string()]; n],
            base: vec![0; n],
            maps: vec![vec![0]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self, k: usize) -> &[String] {
        &self.names[k % self.n()]
    }

    pub fn base(&self, k: usize) -> usize {
        self.base[k % self.n()]
    }

    pub fn base_name(&self, k: usize) -> &str {
        &self.elements(k)[self.base(k)]
    }

    /// `f_k(i)` as an index of `X_{k+1}`.
    pub fn apply(&self, k: usize, i: usize) -> usize {
        self.maps[k % self.n()][i]
    }

    /// Names of `X_k ∖ {o_k}` in list order.
    pub fn basis_names(&self, k: usize) -> Vec<&str> {
        let b = self.base(k);
        self.elements(k)
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != b)
            .map(|(_, s)| s.as_str())
            .collect()
    }

    pub fn size(&self) -> usize {
        self.names.iter().map(|x| x.len() - 1).sum()
    }

    /// Membership vectors of `X_{k,0} ⊇ X_{k,1} ⊇ … ⊇ X_{k,L}` with `L` the
    /// length.
    pub fn chain(&self) -> Vec<Vec<Vec<bool>>> {
        let n = self.n();
        let mut levels: Vec<Vec<Vec<bool>>> =
            (0..n).map(|k| vec![vec![true; self.names[k].len()]]).collect();
        loop {
            let alpha = levels[0].len() - 1;
            let next: Vec<Vec<bool>> = (0..n)
                .map(|k| {
                    let prev = (k + n - 1) % n;
                    let mut s = vec![false; self.names[k].len()];
                    for (i, &inside) in levels[prev][alpha].iter().enumerate() {
                        if inside {
                            s[self.maps[prev][i]] = true;
                        }
                    }
                    s
                })
                .collect();
            if next.iter().enumerate().all(|(k, s)| *s == levels[k][alpha]) {
                return levels;
            }
            for (k, s) in next.into_iter().enumerate() {
                levels[k].push(s);
            }
        }
    }

    pub fn length(&self) -> usize {
        self.chain()[0].len() - 1
    }

    /// Heights per vertex and element, `None` for the stable core.
    pub fn heights(&self) -> Vec<Vec<Option<usize>>> {
        let chain = self.chain();
        chain
            .iter()
            .map(|levels| {
                let l = levels.len() - 1;
                (0..levels[0].len())
                    .map(|i| {
                        if levels[l][i] {
                            None
                        } else {
                            Some((0..l).rev().find(|&a| levels[a][i]).expect("level 0 is everything"))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Violations of the terminality conditions (i) and (iii).
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.n();
        let mut out = Vec::new();
        let chain = self.chain();
        for k in 0..n {
            let core = chain[k].last().expect("nonempty chain");
            for (i, &inside) in core.iter().enumerate() {
                if inside && i != self.base[k] {
                    out.push(Violation::CoreNotBase {
                        k,
                        extra: self.names[k][i].clone(),
                    });
                }
            }
        }
        for k in 0..n {
            for start in 0..self.names[k].len() {
                let mut x = start;
                let mut reached = x == self.base[k];
                for _ in 0..self.names[k].len() {
                    if reached {
                        break;
                    }
                    for j in 0..n {
                        x = self.maps[(k + j) % n][x];
                    }
                    reached = x == self.base[k];
                }
                if !reached {
                    out.push(Violation::OrbitMissesBase {
                        k,
                        elem: self.names[k][start].clone(),
                    });
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidTerminal(v.to_string())),
        }
    }

    /// `n_{k,α}` from the two-term count: elements of height `α` whose image
    /// jumps past `α+1`, plus the surplus of height-`α` preimages of each
    /// height-`(α+1)` element.
    pub fn discrete_numbers(&self) -> Result<DiscreteTable> {
        self.check()?;
        let n = self.n();
        let h = self.heights();
        let above = |hy: Option<usize>, a: usize| hy.map_or(true, |b| b > a + 1);
        let mut t = DiscreteTable::default();
        for k in 0..n {
            let next = (k + 1) % n;
            let mut jumps: BTreeMap<usize, u64> = BTreeMap::new();
            let mut preimages: HashMap<(usize, usize), u64> = HashMap::new();
            for (i, &hx) in h[k].iter().enumerate() {
                let Some(a) = hx else { continue };
                let y = self.maps[k][i];
                if above(h[next][y], a) {
                    *jumps.entry(a).or_default() += 1;
                } else if h[next][y] == Some(a + 1) {
                    *preimages.entry((a, y)).or_default() += 1;
                }
            }
            let mut counts = jumps;
            for ((a, _), c) in preimages {
                *counts.entry(a).or_default() += c - 1;
            }
            for (a, c) in counts {
                t.set(k, a, c);
            }
        }
        Ok(t)
    }

    /// `f^{+l}`: a fresh basepoint at vertex `l`.
    pub fn augment(&self, l: usize) -> Result<Self> {
        self.check()?;
        let n = self.n();
        let l = l % n;
        let prev = (l + n - 1) % n;
        let len = self.length();
        let fast = len >= 1 && self.discrete_numbers()?.get(prev, len - 1) > 0;
        if !fast {
            let chain = self.chain();
            for alpha in 0..len {
                let ok = chain[prev][alpha].iter().enumerate().any(|(i, &inside)| {
                    inside && i != self.base[prev] && self.maps[prev][i] == self.base[l]
                });
                if !ok {
                    return Err(Error::PropertyAViolated { l, alpha });
                }
            }
        }
        let mut fresh = format!("g{len}");
        let mut suffix = 1;
        while self.names[l].contains(&fresh) {
            fresh = format!("g{len}_{suffix}");
            suffix += 1;
        }
        let mut g = self.clone();
        let gamma = g.names[l].len();
        g.names[l].push(fresh);
        let old_prev_base = g.base[prev];
        g.base[l] = gamma;
        g.maps[prev][old_prev_base] = gamma;
        let next_base = g.base[(l + 1) % n];
        g.maps[l].push(next_base);
        debug_assert!(g.validate().is_empty());
        Ok(g)
    }

    /// `f^{(k,i)}`: the trivial cycle augmented at `k, k+1, …, k+i−1`.
    pub fn canonical_cell(n: usize, k: usize, i: usize) -> Self {
        (0..i).fold(Self::trivial(n), |f, j| {
            f.augment(k + j).expect("canonical cells satisfy the augmentation condition")
        })
    }

    /// Disjoint union with basepoints identified. Element `x` of summand `i`
    /// is renamed `<i>.<x>`; the common basepoint is `o`.
    pub fn pointed_sum(parts: &[TerminalRep]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptySum)?;
        let n = first.n();
        if let Some(p) = parts.iter().find(|p| p.n() != n) {
            return Err(Error::CycleLengthMismatch(n, p.n()));
        }
        let mut names = vec![vec!["o".to_string()]; n];
        let mut index: Vec<Vec<Vec<usize>>> = vec![Vec::new(); parts.len()];
        for (pi, p) in parts.iter().enumerate() {
            for k in 0..n {
                let idx = (0..p.names[k].len())
                    .map(|i| {
                        if i == p.base[k] {
                            0
                        } else {
                            names[k].push(format!("{pi}.{}", p.names[k][i]));
                            names[k].len() - 1
                        }
                    })
                    .collect();
                index[pi].push(idx);
            }
        }
        let mut maps: Vec<Vec<usize>> = names.iter().map(|x| vec![0; x.len()]).collect();
        for (pi, p) in parts.iter().enumerate() {
            for k in 0..n {
                let next = (k + 1) % n;
                for i in 0..p.names[k].len() {
                    maps[k][index[pi][k][i]] = index[pi][next][p.maps[k][i]];
                }
            }
        }
        Self::new(names, vec![0; n], maps)
    }

    /// `U_k = F^{(X_k ∖ {o_k})}`, `e_x ↦ e_{f_k(x)}` with `e_o = 0`.
    pub fn linear_realization<F: Field>(&self, field: &F) -> Result<CycleRep<F>> {
        self.check()?;
        let n = self.n();
        let coord = |k: usize, i: usize| -> Option<usize> {
            let b = self.base[k];
            (i != b).then(|| if i < b { i } else { i - 1 })
        };
        let dims: Vec<usize> = self.names.iter().map(|x| x.len() - 1).collect();
        let maps = (0..n)
            .map(|k| {
                let next = (k + 1) % n;
                let mut m = Matrix::zeros(field, dims[next], dims[k]);
                for i in 0..self.names[k].len() {
                    if let (Some(c), Some(r)) = (coord(k, i), coord(next, self.maps[k][i])) {
                        m.set(r, c, field.one());
                    }
                }
                m
            })
            .collect();
        CycleRep::from_maps(field, dims, maps)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("terminal v1\nn {}\n", self.n());
        for k in 0..self.n() {
            s.push_str(&format!(
                "vertex {k} base {} elems {}\n",
                self.base_name(k),
                self.names[k].join(" ")
            ));
        }
        for k in 0..self.n() {
            let next = (k + 1) % self.n();
            let parts: Vec<String> = self.names[k]
                .iter()
                .zip(&self.maps[k])
                .map(|(x, &y)| format!("{x}->{}", self.names[next][y]))
                .collect();
            s.push_str(&format!("map {k}: {}\n", parts.join(" ")));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines = content_lines(text);
        let last = lines.last().map_or(1, |l| l.0);
        let mut it = lines.into_iter();
        match it.next() {
            Some((_, "terminal v1")) => {}
            Some((l, other)) => return Err(Error::parse(l, format!("expected `terminal v1`, found `{other}`"))),
            None => return Err(Error::parse(1, "empty file")),
        }
        let (l, line) = it.next().ok_or_else(|| Error::parse(last, "missing n"))?;
        let n: usize = line
            .strip_prefix("n ")
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(l, format!("expected `n <int ≥ 1>`, found `{line}`")))?;
        let mut names: Vec<Option<(Vec<String>, usize)>> = vec![None; n];
        let mut maps: Vec<Option<Vec<usize>>> = vec![None; n];
        let vertex_of = |l: usize, tok: Option<&str>| -> Result<usize> {
            tok.and_then(|t| t.trim_end_matches(':').parse().ok())
                .filter(|&k: &usize| k < n)
                .ok_or_else(|| Error::parse(l, format!("expected a vertex below {n}")))
        };
        for (l, line) in it {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.first().copied() {
                Some("vertex") => {
                    let k = vertex_of(l, toks.get(1).copied())?;
                    if toks.get(2) != Some(&"base") || toks.get(4) != Some(&"elems") {
                        return Err(Error::parse(l, "expected `vertex <k> base <id> elems <id>...`"));
                    }
                    let elems: Vec<String> = toks[5..].iter().map(|s| s.to_string()).collect();
                    let b = elems
                        .iter()
                        .position(|e| e == toks[3])
                        .ok_or_else(|| Error::parse(l, format!("base {} is not among the elements", toks[3])))?;
                    if names[k].replace((elems, b)).is_some() {
                        return Err(Error::parse(l, format!("duplicate vertex {k}")));
                    }
                }
                Some("map") => {
                    let k = vertex_of(l, toks.get(1).copied())?;
                    if !toks[1].ends_with(':') {
                        return Err(Error::parse(l, "expected `map <k>: <id>-><id> ...`"));
                    }
                    let (Some((src, _)), Some((dst, _))) = (&names[k], &names[(k + 1) % n]) else {
                        return Err(Error::parse(l, format!("map {k} precedes its vertices")));
                    };
                    let mut m = vec![usize::MAX; src.len()];
                    for pair in &toks[2..] {
                        let (a, b) = pair
                            .split_once("->")
                            .ok_or_else(|| Error::parse(l, format!("expected <id>-><id>, found `{pair}`")))?;
                        let i = src
                            .iter()
                            .position(|e| e == a)
                            .ok_or_else(|| Error::parse(l, format!("unknown element {a}")))?;
                        let j = dst
                            .iter()
                            .position(|e| e == b)
                            .ok_or_else(|| Error::parse(l, format!("unknown element {b}")))?;
                        if m[i] != usize::MAX {
                            return Err(Error::parse(l, format!("{a} is mapped twice")));
                        }
                        m[i] = j;
                    }
                    if let Some(i) = m.iter().position(|&j| j == usize::MAX) {
                        return Err(Error::parse(l, format!("{} has no image", src[i])));
                    }
                    if maps[k].replace(m).is_some() {
                        return Err(Error::parse(l, format!("duplicate map {k}")));
                    }
                }
                _ => return Err(Error::parse(l, format!("unexpected line `{line}`"))),
            }
        }
        let mut all_names = Vec::with_capacity(n);
        let mut bases = Vec::with_capacity(n);
        for (k, v) in names.into_iter().enumerate() {
            let (e, b) = v.ok_or_else(|| Error::parse(last, format!("missing vertex {k}")))?;
            all_names.push(e);
            bases.push(b);
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(k, m)| m.ok_or_else(|| Error::parse(last, format!("missing map {k}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(all_names, bases, maps)
    }
}
