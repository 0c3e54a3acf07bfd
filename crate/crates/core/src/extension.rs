//! Coherent graphs inside `u × v` and the extension steps that grow them
//! into the graph of an isomorphism.
//!
//! A graph is stored per vertex as a subspace `Γ_k` of `F^{d_k} × F^{d'_k}`.
//! Heights are level indices of the two chains, `None` standing for ∞.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::cyclerep::{CycleRep, MorphismFamily};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{kaplansky_invariants, Filtration};
use crate::matrix::{vector, Matrix};
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::subspace::Subspace;

static LIMIT_BRANCH_HITS: AtomicUsize = AtomicUsize::new(0);

/// How many times the limit-ordinal case of the simple extension was reached.
pub fn limit_branch_hits() -> usize {
    LIMIT_BRANCH_HITS.load(Ordering::Relaxed)
}

fn height_key(h: Option<usize>) -> usize {
    h.unwrap_or(usize::MAX)
}

fn height_text(h: Option<usize>) -> String {
    h.map_or_else(|| "inf".to_string(), |a| a.to_string())
}

/// A point of `x + a` of maximal height in `filt` at vertex `k`. Candidate
/// heights are tried from the core downwards and the first meeting point is
/// kept.
pub fn adapted_representative<F: Field>(
    filt: &Filtration<F>,
    k: usize,
    x: &[F::Elem],
    a: &Subspace<F>,
) -> Vec<F::Elem> {
    (0..=filt.length())
        .rev()
        .find_map(|h| a.coset_meet(x, filt.level(k, h)))
        .expect("level 0 is the whole space")
}

/// `h(x) = max h(x + a)`.
pub fn is_adapted<F: Field>(filt: &Filtration<F>, k: usize, x: &[F::Elem], a: &Subspace<F>) -> bool {
    let best = adapted_representative(filt, k, x, a);
    height_key(filt.height_index(k, x)) == height_key(filt.height_index(k, &best))
}

/// `x + y ∈ V_{k,α}` solved inside `V_{k,α}`: some `y ∈ V_{k,α}` with
/// `m·y = z`.
fn lift<F: Field>(filt: &Filtration<F>, k: usize, alpha: usize, z: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let level = filt.level(k, alpha);
    let basis = level.vectors();
    let m = filt.rep().map(k);
    let images: Vec<_> = basis.iter().map(|b| m.apply(b)).collect();
    let f = filt.rep().field();
    let c = Matrix::from_columns(f, m.rows(), &images).solve(z)?;
    Some(vector::combine(f, level.ambient(), &c, &basis))
}

#[derive(Clone, Debug)]
pub struct CoherentGraph<'a, F: Field> {
    u: &'a Filtration<F>,
    v: &'a Filtration<F>,
    /// `Γ_k` with coordinates `U_k × V_k`, or `V_k × U_k` when `flipped`.
    stored: Vec<Subspace<F>>,
    flipped: bool,
    a: Vec<Subspace<F>>,
    b: Vec<Subspace<F>>,
}

impl<'a, F: Field> CoherentGraph<'a, F> {
    pub fn empty(u: &'a Filtration<F>, v: &'a Filtration<F>) -> Result<Self> {
        u.rep().check_compatible(v.rep())?;
        let f = u.rep().field();
        let n = u.n();
        let stored = (0..n)
            .map(|k| Subspace::zero(f, u.rep().dim(k) + v.rep().dim(k)))
            .collect();
        Ok(CoherentGraph {
            u,
            v,
            stored,
            flipped: false,
            a: (0..n).map(|k| Subspace::zero(f, u.rep().dim(k))).collect(),
            b: (0..n).map(|k| Subspace::zero(f, v.rep().dim(k))).collect(),
        })
    }

    pub fn source(&self) -> &'a Filtration<F> {
        self.u
    }

    pub fn target(&self) -> &'a Filtration<F> {
        self.v
    }

    fn n(&self) -> usize {
        self.stored.len()
    }

    /// `Γ_k` inside `U_k × V_k`.
    pub fn gamma(&self, k: usize) -> Subspace<F> {
        let g = &self.stored[k % self.n()];
        if self.flipped {
            g.swap_blocks(self.d2(k))
        } else {
            g.clone()
        }
    }

    fn d(&self, k: usize) -> usize {
        self.u.rep().dim(k)
    }

    fn d2(&self, k: usize) -> usize {
        self.v.rep().dim(k)
    }

    /// `(x, y)` in stored coordinates.
    fn pack(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        if self.flipped {
            vector::concat::<F>(y, x)
        } else {
            vector::concat::<F>(x, y)
        }
    }

    fn unpack<'r>(&self, k: usize, r: &'r [F::Elem]) -> (&'r [F::Elem], &'r [F::Elem]) {
        if self.flipped {
            let (y, x) = r.split_at(self.d2(k));
            (x, y)
        } else {
            r.split_at(self.d(k))
        }
    }

    fn contains_pair(&self, k: usize, x: &[F::Elem], y: &[F::Elem]) -> bool {
        self.stored[k % self.n()].contains(&self.pack(x, y))
    }

    /// First projection `A_k`.
    pub fn pi1(&self, k: usize) -> Subspace<F> {
        self.a[k % self.n()].clone()
    }

    /// Second projection `B_k`.
    pub fn pi2(&self, k: usize) -> Subspace<F> {
        self.b[k % self.n()].clone()
    }

    /// Some `y` with `(x, y) ∈ Γ_k`.
    pub fn partner(&self, k: usize, x: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = self.u.rep().field();
        let rows = self.stored[k % self.n()].vectors();
        let (lefts, rights): (Vec<_>, Vec<_>) = rows
            .iter()
            .map(|r| {
                let (a, b) = self.unpack(k, r);
                (a.to_vec(), b.to_vec())
            })
            .unzip();
        let c = Matrix::from_columns(f, self.d(k), &lefts).solve(x)?;
        Some(vector::combine(f, self.d2(k), &c, &rights))
    }

    /// The graph of `v × u` obtained by swapping coordinates.
    pub fn transpose(self) -> CoherentGraph<'a, F> {
        CoherentGraph {
            u: self.v,
            v: self.u,
            stored: self.stored,
            flipped: !self.flipped,
            a: self.b,
            b: self.a,
        }
    }

    /// Checks that `Γ` is a subrepresentation, that paired vectors have
    /// equal heights and that the cached projections are current.
    pub fn validate(&self) -> Result<()> {
        for k in 0..self.n() {
            self.validate_vertex(k)?;
        }
        Ok(())
    }

    fn validate_vertex(&self, k: usize) -> Result<()> {
        let k = k % self.n();
        let (d, d2) = (self.d(k), self.d2(k));
        let (m, m2) = (self.u.rep().map(k), self.v.rep().map(k));
        let g = &self.stored[k];
        let mut lefts = Vec::new();
        let mut rights = Vec::new();
        for r in g.vectors() {
            let (x, y) = self.unpack(k, &r);
            if !self.contains_pair(k + 1, &m.apply(x), &m2.apply(y)) {
                return Err(Error::IncoherentGraph(format!(
                    "image of a pair at vertex {k} leaves the graph"
                )));
            }
            lefts.push(x.to_vec());
            rights.push(y.to_vec());
        }
        let f = self.u.rep().field();
        if Subspace::span(f, d, &lefts) != self.a[k] || Subspace::span(f, d2, &rights) != self.b[k] {
            return Err(Error::IncoherentGraph(format!("stale projections at vertex {k}")));
        }
        if lefts.is_empty() {
            return Ok(());
        }
        // Inside Γ_k, in coordinates over its basis: the pairs with x ∈ U_{k,α}
        // must be the pairs with y ∈ V_{k,α}.
        let x = Matrix::from_rows(f, d, lefts)?;
        let y = Matrix::from_rows(f, d2, rights)?;
        let constraints = |m: &Matrix<F>, ann: &Subspace<F>| -> Result<Subspace<F>> {
            Ok(Subspace::row_space(&m.mul(&ann.basis().transpose())?.transpose()))
        };
        for alpha in 0..=self.u.length().max(self.v.length()) {
            let left = constraints(&x, self.u.level_annihilator(k, alpha))?;
            let right = constraints(&y, self.v.level_annihilator(k, alpha))?;
            if left != right {
                return Err(Error::IncoherentGraph(format!(
                    "heights disagree at vertex {k}, level {alpha}"
                )));
            }
        }
        Ok(())
    }

    /// `Γ +_k (x, y)`.
    pub fn super_elementary_extend(self, k: usize, x: &[F::Elem], y: &[F::Elem]) -> Result<Self> {
        let k = k % self.n();
        if self.contains_pair(k, x, y) {
            return Err(Error::AlreadyPresent(k));
        }
        let (hx, hy) = (self.u.height_index(k, x), self.v.height_index(k, y));
        if height_key(hx) != height_key(hy) {
            return Err(Error::HeightMismatch {
                left: height_text(hx),
                right: height_text(hy),
            });
        }
        if !is_adapted(self.u, k, x, &self.a[k]) {
            return Err(Error::NotAdapted { side: "source", k });
        }
        if !is_adapted(self.v, k, y, &self.b[k]) {
            return Err(Error::NotAdapted { side: "target", k });
        }
        if !self.contains_pair(k + 1, &self.u.rep().map(k).apply(x), &self.v.rep().map(k).apply(y)) {
            return Err(Error::ImageNotInGraph(k));
        }
        let mut g = self;
        let pair = g.pack(x, y);
        g.stored[k] = g.stored[k].with_vector(&pair);
        g.a[k] = g.a[k].with_vector(x);
        g.b[k] = g.b[k].with_vector(y);
        debug_assert!(g.validate_vertex(k).is_ok());
        debug_assert!(g.validate_vertex(k + g.n() - 1).is_ok());
        Ok(g)
    }

    /// Pairs a kernel vector `x`, adapted to `A_k`, with a kernel vector of
    /// the target of the same height.
    pub fn extend_kernel_vector(self, k: usize, x: &[F::Elem]) -> Result<Self> {
        let k = k % self.n();
        if self.a[k].contains(x) {
            return Ok(self);
        }
        if !vector::is_zero(self.u.rep().field(), &self.u.rep().map(k).apply(x)) {
            return Err(Error::NotInKernel(k));
        }
        let h = self.u.height_index(k, x);
        let alpha = h.unwrap_or(self.u.length());
        let v = self.v;
        let m2 = v.rep().map(k);
        let b_next = self.b[(k + 1) % self.n()].intersect(v.level(k + 1, alpha + 2))?;
        let tail = self.b[k]
            .intersect(v.level(k, alpha))?
            .intersect(&b_next.preimage(m2))?;
        let obstruction = v.level(k, alpha + 1).sum(&tail)?;
        let candidates = v.kernel(k).intersect(v.level(k, alpha))?;
        let y = candidates
            .vectors()
            .into_iter()
            .find(|c| !obstruction.contains(c))
            .ok_or(Error::NoWitness {
                k,
                height: height_text(h),
            })?;
        self.super_elementary_extend(k, x, &y)
    }

    /// Extends `Γ` so that its first projection catches `x`, assuming it
    /// already catches `M_k x`.
    pub fn simple_extend(self, k: usize, x: &[F::Elem]) -> Result<Self> {
        let k = k % self.n();
        let a = &self.a[k];
        if a.contains(x) {
            return Ok(self);
        }
        let u = self.u;
        let m = u.rep().map(k);
        if !self.a[(k + 1) % self.n()].contains(&m.apply(x)) {
            return Err(Error::ImageNotInGraph(k));
        }
        // (H1): x is adapted to A_k.
        let mut x = adapted_representative(u, k, x, a);
        let beta = u.height_index(k, &x);
        // (H2): M_k x is adapted to M_k(A_k ∩ U_{k,β}).
        let a_beta = a.intersect(u.level(k, beta.unwrap_or(u.length())))?;
        if let Some(best) = (0..=u.length())
            .rev()
            .find_map(|h| a_beta.coset_meet_via(&x, u.level(k + 1, h), Some(m)))
        {
            x = best;
        }
        let mx = m.apply(&x);
        let Some(alpha) = u.height_index(k + 1, &mx) else {
            return self.extend_kernel_vector(k, &x);
        };
        let pred = match Ordinal::from(alpha).classify() {
            OrdinalKind::Successor(_) => alpha - 1,
            OrdinalKind::Limit => {
                LIMIT_BRANCH_HITS.fetch_add(1, Ordering::Relaxed);
                return Err(Error::LimitOrdinalUnreachable(k));
            }
            OrdinalKind::Zero => unreachable!("an image has height at least 1"),
        };
        let z = self.partner(k + 1, &mx).expect("M_k x is caught");
        let no_lift = || Error::NoWitness {
            k,
            height: pred.to_string(),
        };
        let y = lift(self.v, k, pred, &z).ok_or_else(no_lift)?;
        if beta == Some(pred) {
            return self.super_elementary_extend(k, &x, &y);
        }
        let x1 = lift(u, k, pred, &mx).expect("M_k x lies in U_{k+1,α}");
        let f = u.rep().field();
        let g = self.super_elementary_extend(k, &x1, &y)?;
        g.extend_kernel_vector(k, &vector::sub(f, &x, &x1))
    }

    /// Extends `Γ` so that its first projection catches `x`, catching the
    /// iterates of `x` first.
    pub fn finite_extend(self, k: usize, x: &[F::Elem]) -> Result<Self> {
        if (0..self.n()).any(|k| !self.u.core(k).is_zero()) {
            return Err(Error::NotLocallyNilpotent);
        }
        let k = k % self.n();
        self.finite_extend_inner(k, x)
    }

    fn finite_extend_inner(self, k: usize, x: &[F::Elem]) -> Result<Self> {
        if self.a[k].contains(x) {
            return Ok(self);
        }
        let mx = self.u.rep().map(k).apply(x);
        let next = (k + 1) % self.n();
        self.finite_extend_inner(next, &mx)?.simple_extend(k, x)
    }

    /// Reads `φ_k` off a graph whose first projection is everything.
    pub fn to_family(&self) -> Option<MorphismFamily<F>> {
        let f = self.u.rep().field();
        let phis = (0..self.n())
            .map(|k| {
                let cols = (0..self.d(k))
                    .map(|i| self.partner(k, &vector::unit(f, self.d(k), i)))
                    .collect::<Option<Vec<_>>>()?;
                Some(Matrix::from_columns(f, self.d2(k), &cols))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(MorphismFamily::new(phis, Default::default()))
    }
}

/// An isomorphism `u → v` of locally nilpotent cycles, or `None` when their
/// invariant tables differ.
pub fn build_isomorphism<F: Field>(u: &CycleRep<F>, v: &CycleRep<F>) -> Result<Option<MorphismFamily<F>>> {
    u.check_compatible(v)?;
    let (tu, tv) = (kaplansky_invariants(u)?, kaplansky_invariants(v)?);
    if tu != tv {
        return Ok(None);
    }
    let (mu, mv) = (u.matrix_part(), v.matrix_part());
    let (fu, fv) = (Filtration::new(&mu)?, Filtration::new(&mv)?);
    let f = u.field();
    let mut g = CoherentGraph::empty(&fu, &fv)?;
    for k in 0..u.n() {
        for i in 0..u.dim(k).max(v.dim(k)) {
            if i < u.dim(k) {
                g = g
                    .finite_extend(k, &vector::unit(f, u.dim(k), i))
                    .expect("equal invariant tables");
            }
            if i < v.dim(k) {
                g = g
                    .transpose()
                    .finite_extend(k, &vector::unit(f, v.dim(k), i))
                    .expect("equal invariant tables")
                    .transpose();
            }
        }
    }
    debug_assert!(g.validate().is_ok());
    let phis = g.to_family().expect("first projection is everything");
    let family = MorphismFamily::new(phis.phis().to_vec(), u.saturated().clone());
    family
        .verify_iso(u, v)
        .expect("a coherent graph with full projections is an isomorphism");
    Ok(Some(family))
}
