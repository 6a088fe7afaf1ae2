//! Restrained actions in canonical form.
//!
//! `G_{n,d}` acts on `k[[x]]` by `(σ, a)(x) = ζ^a x / (1 − θ(σ) x)`; a group
//! element acts on a series `f` by substitution, `g(f) = f(g(x))`, so the
//! Möbius matrices satisfy `Mat(gh) ∝ Mat(h) · Mat(g)`.

use alloc::{collections::BTreeMap, collections::BTreeSet, format, vec, vec::Vec};

use crate::algebra::Algebra;
use crate::arith::{gaussian_binomial, SplitMix64};
use crate::bounds::{rhz_genus, BranchKind, CoverSpec};
use crate::error::{Error, Result};
use crate::ff::{make_tower, Fe, FieldTower};
use crate::gnd::{GroupElement, GroupSpec};
use crate::linpoly::{fq_rank, kernel, LinearizedPoly, Subspace};
use crate::poly::UniPoly;
use crate::series::{mobius_apply, MobiusMap, SeriesRing, TruncSeries};

/// Groups up to this order get the homomorphism check on every pair.
pub const EXHAUSTIVE_PAIRS: u64 = 200;
/// Pairs sampled above [`EXHAUSTIVE_PAIRS`].
pub const SAMPLED_PAIRS: usize = 2000;
/// Largest subspace count [`classify_all`] will enumerate.
pub const MAX_SUBSPACES: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct RestrainedAction {
    spec: GroupSpec,
    theta: Vec<Fe>,
    precision: i64,
}

impl RestrainedAction {
    /// `theta[i] = θ(e_i)`; the images must be `F_q`-independent.
    pub fn new(spec: GroupSpec, theta: Vec<Fe>, precision: i64) -> Result<RestrainedAction> {
        if theta.len() != spec.d() {
            return Err(Error::InvalidInput(format!("θ needs {} basis images, got {}", spec.d(), theta.len())));
        }
        if theta.iter().any(|x| x.index() as u64 >= spec.tower().size()) {
            return Err(Error::InvalidInput("θ image outside the working field".into()));
        }
        if fq_rank(spec.tower(), &theta) != theta.len() {
            return Err(Error::ThetaNotInjective);
        }
        if precision < 3 {
            return Err(Error::InvalidInput(format!("precision {precision} is below 3")));
        }
        Ok(RestrainedAction { spec, theta, precision })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }
    pub fn tower(&self) -> &FieldTower {
        self.spec.tower()
    }
    pub fn theta(&self) -> &[Fe] {
        &self.theta
    }
    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// `θ(σ) = Σ σ_i θ(e_i)`.
    pub fn theta_of(&self, sigma: &[Fe]) -> Fe {
        let t = self.tower();
        sigma.iter().zip(&self.theta).fold(Fe::ZERO, |acc, (&s, &th)| t.add(acc, t.mul(s, th)))
    }

    /// The image `θ(H)`.
    pub fn image(&self) -> Subspace {
        Subspace::new(self.tower(), self.theta.clone()).expect("θ is injective")
    }

    /// `[[ζ^a, 0], [−θ(σ), 1]]`.
    pub fn mobius(&self, g: &GroupElement) -> MobiusMap {
        let t = self.tower();
        MobiusMap { a: self.spec.zeta_pow(g.a as i64), b: Fe::ZERO, c: t.neg(self.theta_of(&g.sigma)), e: Fe::ONE }
    }

    /// `g(x)` to the working precision.
    pub fn series(&self, g: &GroupElement) -> Result<TruncSeries> {
        self.series_in(&SeriesRing::new(self.tower(), self.precision), g)
    }

    fn series_in(&self, ring: &SeriesRing<'_>, g: &GroupElement) -> Result<TruncSeries> {
        mobius_apply(ring, &self.mobius(g), &ring.x())
    }

    /// `g(x)` for every group element, in index order.
    pub fn series_table(&self) -> Result<Vec<(GroupElement, TruncSeries)>> {
        self.spec.elements()?.into_iter().map(|g| Ok((g.clone(), self.series(&g)?))).collect()
    }

    fn homomorphic_on(&self, g: &GroupElement, h: &GroupElement) -> bool {
        let t = self.tower();
        let gh = self.mobius(&self.spec.mul(g, h));
        gh.equivalent(t, &self.mobius(h).compose(t, &self.mobius(g)))
    }

    /// `Mat(gh) ∝ Mat(h)·Mat(g)` on every pair for small groups, on
    /// [`SAMPLED_PAIRS`] pseudo-random pairs otherwise.
    pub fn check_homomorphism(&self, seed: u64) -> Result<bool> {
        if self.spec.order() <= EXHAUSTIVE_PAIRS {
            let els = self.spec.elements()?;
            return Ok(els.iter().all(|g| els.iter().all(|h| self.homomorphic_on(g, h))));
        }
        let mut rng = SplitMix64::new(seed);
        let order = self.spec.order();
        Ok((0..SAMPLED_PAIRS).all(|_| {
            let g = self.spec.element_at(rng.below(order));
            let h = self.spec.element_at(rng.below(order));
            self.homomorphic_on(&g, &h)
        }))
    }
}

/// The canonical action of `G_{n,d}` with the given `θ`, after checking the
/// homomorphism property.
pub fn canonical_action(spec: GroupSpec, theta: Vec<Fe>, precision: i64) -> Result<RestrainedAction> {
    let act = RestrainedAction::new(spec, theta, precision)?;
    if !act.check_homomorphism(0)? {
        return Err(Error::VerificationFailed("g ↦ Möbius map is not a homomorphism".into()));
    }
    Ok(act)
}

/// `v(g(x) − x)` for each element, `None` when the difference vanishes to
/// the working precision.
fn shift_valuations(act: &RestrainedAction, elements: &[GroupElement]) -> Result<Vec<Option<i64>>> {
    let ring = SeriesRing::new(act.tower(), act.precision);
    let x = ring.x();
    elements
        .iter()
        .filter(|g| !act.spec.is_identity(g))
        .map(|g| {
            let diff = ring.sub(&act.series_in(&ring, g)?, &x);
            Ok(if diff.is_zero() { None } else { Some(diff.residual_valuation()) })
        })
        .collect()
}

fn filtration_from(vals: &[Option<i64>], precision: i64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for i in -1i64.. {
        let mut count = 1u64;
        for v in vals {
            match *v {
                Some(v) if v > i => count += 1,
                Some(_) => {}
                None if i < precision - 1 => count += 1,
                None => return Err(Error::PrecisionLoss(format!("G_{i} is not determined at precision {precision}"))),
            }
        }
        out.push(count);
        if count == 1 {
            break;
        }
    }
    Ok(out)
}

/// `[|G_{-1}|, |G_0|, |G_1|, …]` with `G_i = {g : v(g(x) − x) > i}`, ending at
/// the first trivial group.
pub fn ramification_filtration(act: &RestrainedAction) -> Result<Vec<u64>> {
    let els = act.spec.elements()?;
    filtration_from(&shift_valuations(act, &els)?, act.precision)
}

/// The lower-numbering filtration of the subgroup formed by `elements`.
pub fn subgroup_filtration(act: &RestrainedAction, elements: &[GroupElement]) -> Result<Vec<u64>> {
    let mut set: BTreeSet<GroupElement> = elements.iter().cloned().collect();
    set.insert(act.spec.identity());
    let els: Vec<GroupElement> = set.into_iter().collect();
    let closed = els.iter().all(|g| els.iter().all(|h| els.binary_search(&act.spec.mul(g, h)).is_ok()));
    if !closed {
        return Err(Error::InvalidInput("elements do not form a subgroup".into()));
    }
    filtration_from(&shift_valuations(act, &els)?, act.precision)
}

/// Reads `θ(σ)` off the `x²` coefficient of `σ(x)` for the entries of `H`
/// and returns `θ(e_1), …, θ(e_d)`.
pub fn theta_extract(spec: &GroupSpec, table: &[(GroupElement, TruncSeries)]) -> Result<Vec<Fe>> {
    let t = spec.tower();
    let mut theta: BTreeMap<Vec<Fe>, Fe> = BTreeMap::new();
    for (g, s) in table {
        if g.a != 0 {
            continue;
        }
        if s.terms().any(|(k, _)| k < 1) || s.coeff(1) != Fe::ONE {
            return Err(Error::NotNormalized);
        }
        if s.prec() < 3 {
            return Err(Error::PrecisionLoss("the x² coefficient is not known".into()));
        }
        theta.insert(g.sigma.clone(), s.coeff(2));
    }
    let basis = (0..spec.d())
        .map(|i| {
            theta
                .get(&spec.basis_translation(i).sigma)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("no series for the basis translation e_{i}")))
        })
        .collect::<Result<Vec<Fe>>>()?;

    let add = |u: &[Fe], v: &[Fe]| -> Vec<Fe> { u.iter().zip(v).map(|(&x, &y)| t.add(x, y)).collect() };
    for (s1, &t1) in &theta {
        for (s2, &t2) in &theta {
            if let Some(&t12) = theta.get(&add(s1, s2)) {
                if t12 != t.add(t1, t2) {
                    return Err(Error::VerificationFailed("θ is not additive".into()));
                }
            }
        }
        let zs: Vec<Fe> = s1.iter().map(|&x| t.mul(spec.zeta(), x)).collect();
        if let Some(&tz) = theta.get(&zs) {
            if tz != t.mul(spec.zeta(), t1) {
                return Err(Error::VerificationFailed("θ(ζσ) ≠ ζ θ(σ)".into()));
            }
        }
    }
    Ok(basis)
}

/// Canonical representative of a subspace modulo `F_{q^m}^×`: the
/// lexicographically least sorted element list among its scalar multiples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaInvariant {
    pub elements: Vec<Fe>,
}

fn scaled_sorted(t: &FieldTower, elems: &[Fe], c: Fe) -> Vec<Fe> {
    let mut v: Vec<Fe> = elems.iter().map(|&x| t.mul(c, x)).collect();
    v.sort_unstable();
    v
}

fn omega_of_elements(t: &FieldTower, elems: &[Fe]) -> OmegaInvariant {
    let best = t.elements().skip(1).map(|c| scaled_sorted(t, elems, c)).min().expect("F_{q^m}^× is nonempty");
    OmegaInvariant { elements: best }
}

pub fn omega_invariant(t: &FieldTower, theta: &[Fe]) -> Result<OmegaInvariant> {
    if fq_rank(t, theta) != theta.len() {
        return Err(Error::ThetaNotInjective);
    }
    let v = Subspace::new(t, theta.to_vec())?;
    Ok(omega_of_elements(t, &v.elements(t)))
}

pub fn is_isomorphic(a: &RestrainedAction, b: &RestrainedAction) -> Result<bool> {
    if !a.spec.same_type(&b.spec) {
        return Err(Error::TypeMismatch(format!(
            "(n, d) = ({}, {}) vs ({}, {})",
            a.spec.n(),
            a.spec.d(),
            b.spec.n(),
            b.spec.d()
        )));
    }
    Ok(omega_invariant(a.tower(), &a.theta)? == omega_invariant(b.tower(), &b.theta)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub subspace_count: u128,
    /// One canonical representative per class, sorted.
    pub classes: Vec<OmegaInvariant>,
}

/// Every `d`-dimensional `F_q`-subspace of `F_{q^m}`, in reduced echelon
/// form with respect to the `F_q`-coordinates.
pub fn enumerate_subspaces(t: &FieldTower, d: usize) -> Vec<Vec<Fe>> {
    let m = t.m() as usize;
    let q = t.q();
    let mut out = Vec::new();
    if d > m {
        return out;
    }
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // free slots: (row, column) with column > pivot of the row, not a pivot
        let free: Vec<(usize, usize)> =
            (0..d).flat_map(|r| ((pivots[r] + 1)..m).filter(|c| !pivots.contains(c)).map(move |c| (r, c))).collect();
        let total = q.pow(free.len() as u32);
        for idx in 0..total {
            let mut rows = vec![vec![Fe::ZERO; m]; d];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = Fe::ONE;
            }
            let mut k = idx;
            for &(r, c) in &free {
                rows[r][c] = t.element(k % q).expect("below q");
                k /= q;
            }
            out.push(rows.iter().map(|row| t.from_fq_coords(row)).collect());
        }
        // next d-subset of 0..m in lexicographic order
        let Some(i) = (0..d).rev().find(|&i| pivots[i] < m - d + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..d {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out
}

/// Isomorphism classes of restrained extensions of type `(·, d)` over
/// `F_{q^m}`, `q = p^s`: the `d`-dimensional subspaces modulo scaling.
pub fn classify_all(p: u64, s: u32, d: u32, m: u32) -> Result<Classification> {
    let t = make_tower(p, s, m, None)?;
    let count = gaussian_binomial(m, d, t.q());
    if count > MAX_SUBSPACES {
        return Err(Error::TooLarge(format!("{count} subspaces")));
    }
    let subspaces = enumerate_subspaces(&t, d as usize);
    if subspaces.len() as u128 != count {
        return Err(Error::VerificationFailed(format!("enumerated {} subspaces, expected {count}", subspaces.len())));
    }
    let mut seen: BTreeSet<Vec<Fe>> = BTreeSet::new();
    let mut classes = Vec::new();
    for basis in subspaces {
        let elems = Subspace::new(&t, basis)?.sorted_elements(&t);
        if seen.contains(&elems) {
            continue;
        }
        let orbit: BTreeSet<Vec<Fe>> = t.elements().skip(1).map(|c| scaled_sorted(&t, &elems, c)).collect();
        classes.push(OmegaInvariant { elements: orbit.first().expect("nonempty orbit").clone() });
        seen.extend(orbit);
    }
    classes.sort();
    Ok(Classification { subspace_count: count, classes })
}

/// `Q(x) = x^{nq^d} − y (Σ_{i=0}^{d} a_i x^{q^d − q^i})^n` with `a_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolynomial {
    pub n: u64,
    pub q: u64,
    pub a: Vec<Fe>,
    /// `coeffs[k] = (c, e)`: the coefficient of `x^k` is `c + e·y`.
    pub coeffs: Vec<(Fe, Fe)>,
}

impl QPolynomial {
    pub fn d(&self) -> usize {
        self.a.len()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Monic in `x`, every lower coefficient divisible by `y`, and the
    /// constant term a unit times `y`.
    pub fn is_eisenstein(&self) -> bool {
        let top = self.degree();
        self.coeffs[top] == (Fe::ONE, Fe::ZERO)
            && self.coeffs[..top].iter().all(|&(c, _)| c.is_zero())
            && !self.coeffs[0].1.is_zero()
    }

    /// `x^{nq^d} P*(x^{-1})^n` equals the `y`-part of `−Q`, computed through
    /// sparse Laurent powers of `P*(x^{-1})`.
    pub fn check_laurent_identity(&self, t: &FieldTower) -> bool {
        let mut base: BTreeMap<i64, Fe> = BTreeMap::new();
        base.insert(-1, Fe::ONE);
        for (i, &a) in self.a.iter().enumerate() {
            if !a.is_zero() {
                base.insert(-(self.q.pow(i as u32 + 1) as i64), a);
            }
        }
        let mut acc: BTreeMap<i64, Fe> = BTreeMap::new();
        acc.insert(0, Fe::ONE);
        for _ in 0..self.n {
            let mut next: BTreeMap<i64, Fe> = BTreeMap::new();
            for (&i, &x) in &acc {
                for (&j, &y) in &base {
                    let e = next.entry(i + j).or_insert(Fe::ZERO);
                    *e = t.add(*e, t.mul(x, y));
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
        let shift = self.degree() as i64;
        let lhs: BTreeMap<i64, Fe> = acc.into_iter().map(|(k, c)| (k + shift, c)).collect();
        let rhs: BTreeMap<i64, Fe> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, (_, e))| !e.is_zero())
            .map(|(k, &(_, e))| (k as i64, t.neg(e)))
            .collect();
        lhs == rhs
    }
}

pub fn build_q(t: &FieldTower, n: u64, a: &[Fe]) -> Result<QPolynomial> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if a.last().is_some_and(|x| x.is_zero()) {
        return Err(Error::Degenerate("a_d = 0".into()));
    }
    let q = t.q();
    let d = a.len() as u32;
    let qd = q.pow(d) as usize;
    let mut inner = vec![Fe::ZERO; qd];
    inner[qd - 1] = Fe::ONE;
    for (i, &ai) in a.iter().enumerate() {
        inner[qd - q.pow(i as u32 + 1) as usize] = ai;
    }
    let power = UniPoly::new(t, inner).pow(t, n);
    let deg = n as usize * qd;
    let mut coeffs: Vec<(Fe, Fe)> = (0..=deg).map(|k| (Fe::ZERO, t.neg(power.coeff(t, k)))).collect();
    coeffs[deg].0 = Fe::ONE;
    Ok(QPolynomial { n, q, a: a.to_vec(), coeffs })
}

/// `y = P*(a)(x^{-1})^{-n}` is fixed by every group element to the action's
/// precision. `θ(H)` must be the root space of `P*(a)`.
pub fn verify_q_invariance(act: &RestrainedAction, a: &[Fe], n: u64) -> Result<bool> {
    let t = act.tower();
    if n != act.spec.n() || a.len() != act.spec.d() {
        return Err(Error::TypeMismatch(format!(
            "Q of type ({n}, {}) for a group of type ({}, {})",
            a.len(),
            act.spec.n(),
            act.spec.d()
        )));
    }
    let pstar = LinearizedPoly::star(t, a);
    let roots = match kernel(t, &pstar) {
        Ok(v) => v,
        Err(Error::RootsNotRational { .. }) | Err(Error::Degenerate(_)) => return Err(Error::SubspaceMismatch),
        Err(e) => return Err(e),
    };
    if !roots.same_as(t, &act.image()) {
        return Err(Error::SubspaceMismatch);
    }
    let target = act.precision;
    let ring = SeriesRing::new(t, target + 8);
    let lifted = ring.lift_linearized(&pstar);
    let y_of = |xs: &TruncSeries| -> Result<TruncSeries> {
        ring.inverse(&ring.pow(&lifted.eval(&ring, &ring.inverse(xs)?), n))
    };
    let y = y_of(&ring.x())?;
    let mut elements = act.spec.generators();
    if act.spec.order() <= EXHAUSTIVE_PAIRS {
        elements = act.spec.elements()?;
    }
    for g in &elements {
        let diff = ring.sub(&y_of(&act.series_in(&ring, g)?)?, &y);
        let r = diff.residual_valuation();
        if r >= target {
            continue;
        }
        if !diff.is_zero() {
            return Ok(false);
        }
        return Err(Error::PrecisionLoss(format!("g(y) − y known only to x^{}", diff.prec())));
    }
    Ok(true)
}

/// Genus of the cover of `P¹` branched tamely (index `n`) over one point and
/// with full inertia `G_{n,d}` over another.
pub fn katz_gabber_genus(n: u64, d: u32, q: u64) -> Result<u64> {
    let order = crate::arith::checked_pow(q, d)
        .and_then(|h| h.checked_mul(n))
        .ok_or_else(|| Error::TooLarge(format!("n q^d for n={n}, q={q}, d={d}")))?;
    rhz_genus(&CoverSpec {
        base_genus: 0,
        group_order: order,
        branch_points: vec![BranchKind::Tame { e: n }, BranchKind::Restrained { n, d, q }],
    })
}
