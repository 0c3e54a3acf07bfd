//! Supports over `ℤ/n × ordinals`: deficiency, admissibility and the
//! supremum.
//!
//! A support is a finite set of points plus a finite set of ladders; the
//! ladder `(k, δ)` stands for the rungs `(k, δ[m])`, `m ∈ ℕ`, of the
//! canonical fundamental sequence of `δ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::card::Card;
use crate::error::{Error, Result};
use crate::filtration::InvariantTable;
use crate::ordinal::{Ordinal, OrdinalOrInfinity};
use crate::text::content_lines;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    n: usize,
    points: BTreeSet<(usize, Ordinal)>,
    ladders: BTreeSet<(usize, Ordinal)>,
}

impl SupportSet {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a cycle needs n ≥ 1");
        SupportSet {
            n,
            points: BTreeSet::new(),
            ladders: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &BTreeSet<(usize, Ordinal)> {
        &self.points
    }

    pub fn ladders(&self) -> &BTreeSet<(usize, Ordinal)> {
        &self.ladders
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.ladders.is_empty()
    }

    pub fn add_point(&mut self, k: usize, alpha: Ordinal) {
        self.points.insert((k % self.n, alpha));
    }

    pub fn add_ladder(&mut self, k: usize, delta: Ordinal) -> Result<()> {
        if !delta.is_limit() {
            return Err(Error::NotLimit(delta.to_string()));
        }
        self.ladders.insert((k % self.n, delta));
        Ok(())
    }

    /// The support of the finite part of a table.
    pub fn from_table(n: usize, t: &InvariantTable) -> Self {
        let mut s = Self::new(n);
        for (k, a) in t.finite_entries().keys() {
            s.add_point(*k, a.clone());
        }
        s
    }

    /// Points followed by rungs `0..=m_max` of every ladder.
    fn elements(&self, m_max: u64) -> Vec<(usize, Ordinal)> {
        let mut out: Vec<_> = self.points.iter().cloned().collect();
        for (k, delta) in &self.ladders {
            for m in 0..=m_max {
                out.push((*k, delta.fundamental_sequence(m).expect("ladders are limits")));
            }
        }
        out
    }
}

/// Whether `(k, δ)` lies in the deficiency of `d`, i.e. `D_k` is bounded
/// below `δ`.
///
/// Finitely many points are never cofinal in a limit. A ladder at `δ' < δ`
/// is bounded by `δ'`, and a ladder at `δ' > δ` has only finitely many rungs
/// below `δ` since its rungs increase to `δ'`. So only a ladder at exactly
/// `δ` makes `D_k` cofinal.
pub fn deficiency_member(d: &SupportSet, k: usize, delta: &Ordinal) -> Result<bool> {
    if !delta.is_limit() {
        return Err(Error::NotLimit(delta.to_string()));
    }
    Ok(!d.ladders.contains(&(k % d.n, delta.clone())))
}

/// A witness that `D` is not admissible: `(k, δ)` is deficient while
/// `(k+1+l, δ+l) ∈ D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub deficient: (usize, Ordinal),
    pub l: u64,
    pub element: (usize, Ordinal),
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({},{}), {}, ({},{}))",
            self.deficient.0, self.deficient.1, self.l, self.element.0, self.element.1
        )
    }
}

/// `Ok(())` when admissible, otherwise the first violating triple.
///
/// Rungs are checked up to `M = n + #points + #ladders + t + 2`, `t` the
/// largest finite tail in `D`. Beyond that no new violation can appear:
/// a ladder at `γ + ω` has rungs `γ + m`, whose vertices `k − 1 − m` repeat
/// with period `n`; any other ladder has limit rungs, pairwise distinct,
/// of which at most `#ladders` can sit exactly on a ladder of `D`.
pub fn is_admissible(d: &SupportSet) -> std::result::Result<(), Counterexample> {
    let n = d.n;
    let max_tail = d
        .points
        .iter()
        .chain(&d.ladders)
        .map(|(_, a)| a.finite_tail())
        .max()
        .unwrap_or(0);
    let m_max = (n + d.points.len() + d.ladders.len()) as u64 + max_tail + 2;
    for (k1, alpha) in d.elements(m_max) {
        if alpha.is_finite() {
            continue;
        }
        let (delta, l) = alpha.limit_split().expect("infinite");
        let k = (k1 + 2 * n - 1 - (l % n as u64) as usize) % n;
        if deficiency_member(d, k, &delta).expect("limit") {
            return Err(Counterexample {
                deficient: (k, delta),
                l,
                element: (k1, alpha),
            });
        }
    }
    Ok(())
}

/// The projection of a support on the ordinals: point ordinals plus the
/// limits of ladders, each ladder standing for its rungs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CombinedSupport {
    pub points: BTreeSet<Ordinal>,
    pub ladders: BTreeSet<Ordinal>,
}

/// `(CSup(D), Ubd(D))`, with `Ubd(∅) = 0`.
pub fn csup_ubd(d: &SupportSet) -> (CombinedSupport, Ordinal) {
    let cs = CombinedSupport {
        points: d.points.iter().map(|(_, a)| a.clone()).collect(),
        ladders: d.ladders.iter().map(|(_, a)| a.clone()).collect(),
    };
    let ubd = cs
        .points
        .iter()
        .chain(&cs.ladders)
        .max()
        .cloned()
        .unwrap_or_else(Ordinal::zero);
    (cs, ubd)
}

/// A support with multiplicities, read from a `support v1` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleFamily {
    support: SupportSet,
    points: BTreeMap<(usize, Ordinal), Card>,
    ladders: BTreeMap<(usize, Ordinal), Card>,
    infinite: BTreeMap<usize, Card>,
}

impl AdmissibleFamily {
    pub fn new(n: usize) -> Self {
        AdmissibleFamily {
            support: SupportSet::new(n),
            points: BTreeMap::new(),
            ladders: BTreeMap::new(),
            infinite: BTreeMap::new(),
        }
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn infinite(&self) -> &BTreeMap<usize, Card> {
        &self.infinite
    }

    pub fn from_table(n: usize, t: &InvariantTable) -> Self {
        let mut fam = Self::new(n);
        for ((k, a), &c) in t.finite_entries() {
            fam.support.add_point(*k, a.clone());
            fam.points.insert((*k, a.clone()), c);
        }
        fam.infinite = t.infinite_entries().clone();
        fam
    }

    /// The table of a family without ladders.
    pub fn to_table(&self) -> Result<InvariantTable> {
        if let Some((k, d)) = self.support.ladders.iter().next() {
            return Err(Error::UnsupportedTransfinite(format!("ladder ({k}, {d})")));
        }
        let mut t = InvariantTable::new();
        for ((k, a), &c) in &self.points {
            t.set_finite(*k, a.clone(), c);
        }
        for (&k, &c) in &self.infinite {
            t.set_infinite(k, c);
        }
        Ok(t)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("support v1\nn {}\n", self.support.n);
        for ((k, a), c) in &self.points {
            s.push_str(&format!("point {k} {a} {c}\n"));
        }
        for ((k, a), c) in &self.ladders {
            s.push_str(&format!("ladder {k} {a} {c}\n"));
        }
        for (k, c) in &self.infinite {
            s.push_str(&format!("inf {k} {c}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines = content_lines(text);
        let last = lines.last().map_or(1, |l| l.0);
        let mut it = lines.into_iter();
        match it.next() {
            Some((_, "support v1")) => {}
            Some((l, other)) => return Err(Error::parse(l, format!("expected `support v1`, found `{other}`"))),
            None => return Err(Error::parse(1, "empty file")),
        }
        let (l, line) = it.next().ok_or_else(|| Error::parse(last, "missing n"))?;
        let n: usize = line
            .strip_prefix("n ")
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(l, format!("expected `n <int ≥ 1>`, found `{line}`")))?;
        let mut fam = Self::new(n);
        for (l, line) in it {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let vertex = |t: Option<&&str>| -> Result<usize> {
                t.and_then(|t| t.parse().ok())
                    .filter(|&k: &usize| k < n)
                    .ok_or_else(|| Error::parse(l, format!("expected a vertex below {n}")))
            };
            let card = |t: Option<&&str>| -> Result<Card> {
                let c = match t {
                    None => Card::Finite(1),
                    Some(t) => t.parse().map_err(|e: String| Error::parse(l, e))?,
                };
                if c.is_zero() {
                    return Err(Error::parse(l, "multiplicities must be positive"));
                }
                Ok(c)
            };
            let ordinal = |t: Option<&&str>| -> Result<Ordinal> {
                let t = t.ok_or_else(|| Error::parse(l, "missing ordinal"))?;
                match t.parse::<OrdinalOrInfinity>().map_err(|e| Error::parse(l, e))? {
                    OrdinalOrInfinity::Ordinal(a) => Ok(a),
                    OrdinalOrInfinity::Infinity => Err(Error::parse(l, "use `inf <k> <card>` for κ_∞")),
                }
            };
            match toks.first().copied() {
                Some("point") if toks.len() <= 4 => {
                    let (k, a, c) = (vertex(toks.get(1))?, ordinal(toks.get(2))?, card(toks.get(3))?);
                    if fam.points.insert((k, a.clone()), c).is_some() {
                        return Err(Error::parse(l, format!("duplicate point ({k}, {a})")));
                    }
                    fam.support.add_point(k, a);
                }
                Some("ladder") if toks.len() <= 4 => {
                    let (k, a, c) = (vertex(toks.get(1))?, ordinal(toks.get(2))?, card(toks.get(3))?);
                    fam.support
                        .add_ladder(k, a.clone())
                        .map_err(|e| Error::parse(l, e.to_string()))?;
                    if fam.ladders.insert((k, a.clone()), c).is_some() {
                        return Err(Error::parse(l, format!("duplicate ladder ({k}, {a})")));
                    }
                }
                Some("inf") if toks.len() == 3 => {
                    let (k, c) = (vertex(toks.get(1))?, card(toks.get(2))?);
                    if fam.infinite.insert(k, c).is_some() {
                        return Err(Error::parse(l, format!("duplicate inf entry for vertex {k}")));
                    }
                }
                _ => return Err(Error::parse(l, format!("unexpected line `{line}`"))),
            }
        }
        Ok(fam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn deficiency_examples() {
        let n = 3;
        let mut d = SupportSet::new(n);
        d.add_point(0, ord("w"));
        assert!(deficiency_member(&d, n - 1, &ord("w")).unwrap());
        let mut l = SupportSet::new(n);
        l.add_ladder(0, ord("w")).unwrap();
        assert!(!deficiency_member(&l, 0, &ord("w")).unwrap());
        assert!(deficiency_member(&l, 0, &ord("w*2")).unwrap());
        assert_eq!(deficiency_member(&l, 0, &ord("3")), Err(Error::NotLimit("3".into())));
    }

    #[test]
    fn admissibility_examples() {
        for n in 1..=3 {
            let mut d = SupportSet::new(n);
            d.add_point(0, ord("w"));
            let c = is_admissible(&d).unwrap_err();
            assert_eq!(c.deficient, (n - 1, ord("w")));
            assert_eq!(c.l, 0);
            assert_eq!(c.element, (0, ord("w")));
            d.add_ladder(n - 1, ord("w")).unwrap();
            assert_eq!(is_admissible(&d), Ok(()));
        }
        let mut f = SupportSet::new(2);
        f.add_point(0, ord("3"));
        f.add_point(1, ord("0"));
        assert_eq!(is_admissible(&f), Ok(()));
        assert_eq!(is_admissible(&SupportSet::new(2)), Ok(()));
    }

    #[test]
    fn ladder_rungs_are_checked() {
        // rungs w+m of the ladder at w*2 need (k−1−m, w) cofinal for every m
        let mut d = SupportSet::new(2);
        d.add_ladder(0, ord("w*2")).unwrap();
        let c = is_admissible(&d).unwrap_err();
        assert_eq!(c.element, (0, ord("w")));
        d.add_ladder(1, ord("w")).unwrap();
        let c = is_admissible(&d).unwrap_err();
        assert_eq!(c.element, (0, ord("w+1")));
        d.add_ladder(0, ord("w")).unwrap();
        assert_eq!(is_admissible(&d), Ok(()));
    }

    #[test]
    fn supremum_examples() {
        let (_, u) = csup_ubd(&SupportSet::new(2));
        assert_eq!(u, Ordinal::zero());
        let mut d = SupportSet::new(2);
        d.add_point(0, ord("3"));
        d.add_point(1, ord("7"));
        assert_eq!(csup_ubd(&d).1, ord("7"));
        let mut d = SupportSet::new(2);
        d.add_ladder(0, ord("w^2")).unwrap();
        d.add_point(1, ord("w"));
        let (cs, u) = csup_ubd(&d);
        assert_eq!(u, ord("w^2"));
        assert!(cs.ladders.contains(&ord("w^2")));
    }

    #[test]
    fn family_text() {
        let text = "support v1\nn 2\npoint 0 w 1\npoint 1 3 aleph0\nladder 1 w^2 2\ninf 0 5\n";
        let fam = AdmissibleFamily::parse(text).unwrap();
        assert_eq!(fam.to_text(), text);
        assert!(matches!(fam.to_table(), Err(Error::UnsupportedTransfinite(_))));
        assert!(matches!(
            AdmissibleFamily::parse("support v1\nn 2\nladder 0 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        let short = AdmissibleFamily::parse("support v1\nn 1\npoint 0 2\n").unwrap();
        assert_eq!(short.to_table().unwrap().to_text(), "kappa 0 2 1\n");
    }
}
