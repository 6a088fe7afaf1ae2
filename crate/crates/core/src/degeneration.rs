//! A one-parameter family of restrained actions of type `(n, d)`, `d ≥ 2`,
//! degenerating at `t = 0`.
//!
//! The generic member is `P*(s)(t^{q−1}x^{−q} − x^{−1})^n = y^{−1}`. In the
//! second chart it reads `P*(s)(x̃^{−1})^n = y^{−1}` together with
//! `x̃ (w^q − w) = t`, where `w = W/Z`; the charts are related by `x = t/w`.
//!
//! Coordinates used below: `x` on the generic member, `z = 1/w = Z/W` near the
//! ramified point `w = ∞` of the second chart.
//!
//! At `t = 0` the complement `V'` of `V'' = F_q` is taken to be the one whose
//! elements specialize to `0`, so every `σ = σ' + σ''` acts on the vertical
//! component by `w ↦ ζ^{−a}(w − σ'')`.

use alloc::{format, sync::Arc, vec, vec::Vec};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::ff::{make_tower, Fe, FieldTower};
use crate::gnd::{GroupElement, GroupSpec};
use crate::linpoly::{kernel, LinearizedPoly, Subspace};
use crate::multipoly::MultiRing;
use crate::restrained::{canonical_action, ramification_filtration, verify_q_invariance, RestrainedAction};
use crate::series::{mobius_apply, MobiusMap, SeriesRing, TruncSeries};

/// Largest field the constructor widens to.
pub const MAX_WIDENED_FIELD: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct Family {
    spec: GroupSpec,
    s: Vec<Fe>,
    precision: i64,
    kernel: Subspace,
    widened: u32,
}

/// `G_{n,d}` over `F_{q^{mk}}` with the embedding of the old top field.
fn widen(spec: &GroupSpec, k: u32) -> Result<(GroupSpec, crate::ff::Embedding)> {
    let t = spec.tower();
    let size = crate::arith::checked_pow(t.q(), t.m() * k).unwrap_or(u64::MAX);
    if size > MAX_WIDENED_FIELD {
        return Err(Error::TooLarge(format!("widening F_{{q^{}}} by {k}", t.m())));
    }
    let big = make_tower(t.p() as u64, t.s(), t.m() * k, Some(spec.n()))?;
    let emb = t.embedding_into(&big)?;
    Ok((GroupSpec::new(Arc::new(big), spec.d())?, emb))
}

impl Family {
    /// `s = (s_1, …, s_{d−1})` with `s_{d−1} ≠ 0`. The field is widened until
    /// the root space of `P*(s)` is rational.
    pub fn new(spec: GroupSpec, s: Vec<Fe>, precision: i64) -> Result<Family> {
        let d = spec.d();
        if d < 2 {
            return Err(Error::InvalidInput(format!("degeneration needs d ≥ 2, got {d}")));
        }
        if s.len() != d - 1 {
            return Err(Error::InvalidInput(format!("expected {} parameters s_i, got {}", d - 1, s.len())));
        }
        if s[d - 2].is_zero() {
            return Err(Error::Degenerate("s_{d−1} = 0".into()));
        }
        let mut last = None;
        for k in 1.. {
            let (sp, s_k) = if k == 1 {
                (spec.clone(), s.clone())
            } else {
                match widen(&spec, k) {
                    Ok((sp, emb)) => {
                        let s_k = s.iter().map(|&x| emb.apply(sp.tower(), x)).collect();
                        (sp, s_k)
                    }
                    Err(Error::TooLarge(_)) => break,
                    Err(e) => return Err(e),
                }
            };
            match kernel(sp.tower(), &LinearizedPoly::star(sp.tower(), &s_k)) {
                Ok(kernel) => return Ok(Family { spec: sp, s: s_k, precision, kernel, widened: k }),
                Err(e @ Error::RootsNotRational { .. }) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }
    pub fn tower(&self) -> &FieldTower {
        self.spec.tower()
    }
    pub fn s(&self) -> &[Fe] {
        &self.s
    }
    pub fn precision(&self) -> i64 {
        self.precision
    }
    /// Root space of `P*(s)`, of dimension `d − 1`.
    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }
    /// Factor by which the field given to [`Family::new`] was enlarged.
    pub fn widened(&self) -> u32 {
        self.widened
    }
}

/// `η(w) = t^{−1}(w^q − w)`.
pub fn eta(tower: &FieldTower, t: Fe, w: Fe) -> Result<Fe> {
    tower.div(tower.sub(tower.frobenius_q(w, 1), w), t)
}

/// `V = V'' ⊕ V'` with `V'' = F_q` and `η: V' → ker P*(s)` bijective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaSplit {
    pub t: Fe,
    /// `u_1, …, u_{d−1}`, a basis of the root space of `P*(s)`.
    pub kernel_basis: Vec<Fe>,
    /// `θ̃(e_i)` for `i < d`: the least root of `w^q − w = t u_i`.
    pub v_prime: Vec<Fe>,
    /// `V`, spanned by `v_prime` and `1`.
    pub v: Subspace,
}

impl EtaSplit {
    /// `θ̃(e_1), …, θ̃(e_d)`, the last one being `1`.
    pub fn theta_tilde(&self) -> Vec<Fe> {
        let mut th = self.v_prime.clone();
        th.push(Fe::ONE);
        th
    }
}

fn eta_split_in(tower: &FieldTower, t: Fe, kernel: &Subspace) -> Result<EtaSplit> {
    if t.is_zero() {
        return Err(Error::InvalidInput("t must be nonzero".into()));
    }
    let basis = kernel.basis().to_vec();
    let mut v_prime = Vec::with_capacity(basis.len());
    for (i, &u) in basis.iter().enumerate() {
        let tu = tower.mul(t, u);
        let root = tower.elements().find(|&w| tower.sub(tower.frobenius_q(w, 1), w) == tu);
        match root {
            Some(w) => v_prime.push(w),
            None => return Err(Error::RootsNotRational { found: i, expected: basis.len() }),
        }
    }
    let mut span = v_prime.clone();
    span.push(Fe::ONE);
    let v = Subspace::new(tower, span).map_err(|_| Error::VerificationFailed("V'' ⊕ V' is not direct".into()))?;

    if !eta(tower, t, Fe::ONE)?.is_zero() {
        return Err(Error::VerificationFailed("η(1) ≠ 0".into()));
    }
    // η maps V' bijectively onto the root space
    let vp = Subspace::new(tower, v_prime.clone())?;
    let mut images: Vec<Fe> = vp.elements(tower).into_iter().map(|w| eta(tower, t, w)).collect::<Result<_>>()?;
    images.sort_unstable();
    if images != kernel.sorted_elements(tower) {
        return Err(Error::VerificationFailed("η(V') differs from the root space".into()));
    }
    // V is all of η^{−1}(root space)
    let mut full = 0u64;
    for w in tower.elements() {
        if kernel.contains(tower, eta(tower, t, w)?) {
            full += 1;
        }
    }
    if full != v.elements(tower).len() as u64 {
        return Err(Error::VerificationFailed(format!("η^{{−1}}(ker P*) has {full} elements")));
    }
    Ok(EtaSplit { t, kernel_basis: basis, v_prime, v })
}

/// The η-splitting over the family's own field.
pub fn eta_split(family: &Family, t: Fe) -> Result<EtaSplit> {
    eta_split_in(family.tower(), t, &family.kernel)
}

/// The member at a given `t ≠ 0`, over a field large enough for `V`.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub t: Fe,
    pub s: Vec<Fe>,
    pub split: EtaSplit,
    /// `P*(s) ∘ P*(−t^{q−1})`.
    pub composed: LinearizedPoly<Fe>,
    /// Canonical action with `θ = t^{−1} θ̃`.
    pub action: RestrainedAction,
    /// Field enlargement relative to the family's field.
    pub widened: u32,
}

impl Specialization {
    pub fn spec(&self) -> &GroupSpec {
        self.action.spec()
    }
    pub fn tower(&self) -> &FieldTower {
        self.action.tower()
    }
}

pub fn specialize(family: &Family, t: Fe) -> Result<Specialization> {
    if t.is_zero() {
        return Err(Error::InvalidInput("t must be nonzero".into()));
    }
    let mut last = None;
    for k in 1.. {
        let (spec, t_k, s_k, kern) = if k == 1 {
            (family.spec.clone(), t, family.s.clone(), family.kernel.clone())
        } else {
            match widen(&family.spec, k) {
                Ok((sp, emb)) => {
                    let big = sp.tower();
                    let s_k: Vec<Fe> = family.s.iter().map(|&x| emb.apply(big, x)).collect();
                    let basis = family.kernel.basis().iter().map(|&x| emb.apply(big, x)).collect();
                    let kern = Subspace::new(big, basis)?;
                    let t_k = emb.apply(big, t);
                    (sp, t_k, s_k, kern)
                }
                Err(Error::TooLarge(_)) => break,
                Err(e) => return Err(e),
            }
        };
        let tower = spec.tower();
        let split = match eta_split_in(tower, t_k, &kern) {
            Ok(sp) => sp,
            Err(e @ Error::RootsNotRational { .. }) => {
                last = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let t_inv = tower.inv(t_k)?;
        let theta: Vec<Fe> = split.theta_tilde().iter().map(|&w| tower.mul(t_inv, w)).collect();
        let q = tower.q();
        let minus_tq1 = tower.neg(tower.pow(t_k, q - 1));
        let composed = LinearizedPoly::star(tower, &s_k).compose(tower, &LinearizedPoly::star(tower, &[minus_tq1]));
        let n = spec.n();
        let action = canonical_action(spec, theta, family.precision)?;
        let tower = action.tower();
        if !kernel(tower, &composed)?.same_as(tower, &action.image()) {
            return Err(Error::VerificationFailed("θ(H) is not the root space of the composed polynomial".into()));
        }
        if !verify_q_invariance(&action, &composed.coeffs()[1..], n)? {
            return Err(Error::VerificationFailed("y is not invariant".into()));
        }
        return Ok(Specialization { t: t_k, s: s_k, split, composed, action, widened: k * family.widened });
    }
    Err(last.unwrap_or(Error::RootsNotRational { found: 0, expected: family.spec.d() - 1 }))
}

/// Working precision for chart computations of a specialization.
fn chart_ring(sp: &Specialization) -> SeriesRing<'_> {
    let nqd = sp.spec().order() as i64;
    SeriesRing::new(sp.tower(), sp.action.precision() + 2 * nqd + 8)
}

/// `φ`: pulls a function of `x` back to the `z`-chart through `x = t z`.
pub fn birational_phi(ring: &SeriesRing<'_>, t: Fe, f: &TruncSeries) -> Result<TruncSeries> {
    ring.compose(f, &ring.monomial(t, 1))
}

/// `φ^{−1}` on the `z`-chart: `z = t^{−1} x`.
pub fn birational_phi_inverse(ring: &SeriesRing<'_>, t: Fe, f: &TruncSeries) -> Result<TruncSeries> {
    let tinv = ring.tower().inv(t)?;
    ring.compose(f, &ring.monomial(tinv, 1))
}

/// Candidate image of `x̃^{−1}` under `φ^{−1}`: `t^c x^{−q} − x^{−1}`.
pub fn phi_inverse_xtilde_inv(ring: &SeriesRing<'_>, t: Fe, c: u64) -> TruncSeries {
    let tw = ring.tower();
    let q = tw.q() as i64;
    ring.sub(&ring.monomial(tw.pow(t, c), -q), &ring.monomial(Fe::ONE, -1))
}

/// `x̃^{−1} = η(w) = t^{−1}(z^{−q} − z^{−1})` in the `z`-chart.
fn xtilde_inv_z(ring: &SeriesRing<'_>, t: Fe) -> Result<TruncSeries> {
    let tw = ring.tower();
    let tinv = tw.inv(t)?;
    let q = tw.q() as i64;
    Ok(ring.sub(&ring.monomial(tinv, -q), &ring.monomial(tinv, -1)))
}

/// `P*(s)(f)^n`.
fn y_inverse(ring: &SeriesRing<'_>, s: &[Fe], n: u64, f: &TruncSeries) -> TruncSeries {
    let p = ring.lift_linearized(&LinearizedPoly::star(ring.tower(), s));
    ring.pow(&p.eval(ring, f), n)
}

fn residual(ring: &SeriesRing<'_>, a: &TruncSeries, b: &TruncSeries) -> i64 {
    ring.sub(a, b).residual_valuation()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartCheck {
    /// Exponent `c` in `φ^{−1}(x̃^{−1}) = t^c x^{−q} − x^{−1}`.
    pub exponent: u64,
    /// `φ(φ^{−1}(x̃^{−1})) − x̃^{−1}` in the `z`-chart.
    pub forward_residual: i64,
    /// `φ^{−1}` applied to the second-chart equation, minus the first-chart one.
    pub backward_residual: i64,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    /// `φ` carries the first-chart equation to the second-chart one.
    pub relation_residual: i64,
    pub candidates: Vec<ChartCheck>,
    /// The verified exponent, `q − 1` preferred when both verify.
    pub exponent: u64,
}

/// Tries `c ∈ {q − 1, q}` for the exponent of `t` in `φ^{−1}`.
pub fn check_phi_roundtrip(sp: &Specialization) -> Result<PhiReport> {
    let ring = chart_ring(sp);
    let tw = sp.tower();
    let (t, n, q) = (sp.t, sp.spec().n(), tw.q());
    let target = sp.action.precision();

    let xt_inv = xtilde_inv_z(&ring, t)?;
    let y_first = y_inverse(&ring, &sp.s, n, &phi_inverse_xtilde_inv(&ring, t, q - 1));
    let y_second = y_inverse(&ring, &sp.s, n, &xt_inv);
    let relation_residual = residual(&ring, &birational_phi(&ring, t, &y_first)?, &y_second);

    let mut candidates = Vec::new();
    for c in [q - 1, q] {
        let image = phi_inverse_xtilde_inv(&ring, t, c);
        let forward_residual = residual(&ring, &birational_phi(&ring, t, &image)?, &xt_inv);
        let backward_residual = residual(&ring, &y_inverse(&ring, &sp.s, n, &image), &y_first);
        let verified = forward_residual >= target && backward_residual >= target;
        candidates.push(ChartCheck { exponent: c, forward_residual, backward_residual, verified });
    }
    let exponent = candidates.iter().find(|c| c.verified).ok_or(Error::RoundtripFailed)?.exponent;
    Ok(PhiReport { relation_residual, candidates, exponent })
}

/// The action of `(σ, a)` on `w` at parameter `t` (with `θ̃` from the split):
/// `w ↦ ζ^{−a}(w − θ̃(σ))`.
fn w_map(spec: &GroupSpec, theta_tilde: &[Fe], g: &GroupElement) -> MobiusMap {
    let t = spec.tower();
    let zi = spec.zeta_pow(-(g.a as i64));
    let th = g.sigma.iter().zip(theta_tilde).fold(Fe::ZERO, |acc, (&s, &v)| t.add(acc, t.mul(s, v)));
    MobiusMap { a: zi, b: t.neg(t.mul(zi, th)), c: Fe::ZERO, e: Fe::ONE }
}

/// The same map in `z = 1/w`.
fn z_map(t: &FieldTower, w: &MobiusMap) -> MobiusMap {
    let swap = MobiusMap { a: Fe::ZERO, b: Fe::ONE, c: Fe::ONE, e: Fe::ZERO };
    swap.compose(t, &w.compose(t, &swap))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivarianceEntry {
    pub element: GroupElement,
    /// `φ(g(x)) − t·g(z)`.
    pub coordinate_residual: i64,
    /// `x̃(g(z)) − ζ^a x̃ / (1 − η(θ̃(σ)) x̃)`.
    pub xtilde_residual: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivarianceReport {
    pub entries: Vec<EquivarianceEntry>,
    /// `γ` acts by `w ↦ ζ^{−1} w`.
    pub gamma_scales_w: bool,
}

/// Compares the two charts' actions through `φ` for the identity and the
/// generators.
pub fn equivariance_check(sp: &Specialization) -> Result<EquivarianceReport> {
    let ring = chart_ring(sp);
    let tw = sp.tower();
    let spec = sp.spec();
    let t = sp.t;
    let target = sp.action.precision();
    let theta_tilde = sp.split.theta_tilde();
    let z = ring.x();
    let xt = ring.inverse(&xtilde_inv_z(&ring, t)?)?;

    let mut elements = vec![spec.identity()];
    elements.extend(spec.generators());
    let mut entries = Vec::new();
    for g in elements {
        let gx = mobius_apply(&ring, &sp.action.mobius(&g), &ring.x())?;
        let lhs = birational_phi(&ring, t, &gx)?;
        let gz = mobius_apply(&ring, &z_map(tw, &w_map(spec, &theta_tilde, &g)), &z)?;
        let coordinate_residual = residual(&ring, &lhs, &ring.scale(t, &gz));

        let th = g.sigma.iter().zip(&theta_tilde).fold(Fe::ZERO, |acc, (&s, &v)| tw.add(acc, tw.mul(s, v)));
        let eta_th = eta(tw, t, th)?;
        let formula = MobiusMap { a: spec.zeta_pow(g.a as i64), b: Fe::ZERO, c: tw.neg(eta_th), e: Fe::ONE };
        let xtilde_residual = residual(&ring, &ring.compose(&xt, &gz)?, &mobius_apply(&ring, &formula, &xt)?);
        if coordinate_residual < target || xtilde_residual < target {
            return Err(Error::EquivarianceFailed(format!(
                "{g:?}: residuals {coordinate_residual}, {xtilde_residual} below {target}"
            )));
        }
        entries.push(EquivarianceEntry { element: g, coordinate_residual, xtilde_residual });
    }
    let gm = w_map(spec, &theta_tilde, &spec.gamma());
    let scaled = MobiusMap { a: spec.zeta_pow(-1), b: Fe::ZERO, c: Fe::ZERO, e: Fe::ONE };
    Ok(EquivarianceReport { entries, gamma_scales_w: gm.equivalent(tw, &scaled) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// `x̃ = 0`, a projective line with coordinate `w`.
    Vertical,
    /// `w = c`, a copy of the restrained extension `P*(s)(x̃^{−1})^n = y^{−1}`.
    Horizontal { c: Fe },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    /// `(n, d)` read off the ramification filtration of the component's action.
    pub restrained_type: Option<(u64, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaReport {
    /// `n · q^{d−1}`.
    pub claimed_order: u64,
    /// `n · q^d / p`.
    pub alternative_order: u64,
    /// Elements fixing the vertical component pointwise.
    pub vertical_pointwise: u64,
    /// Stabilizer of the point `w = 0`.
    pub point_zero_stabilizer: u64,
    /// Size of the `H''`-orbit of `w = 0`.
    pub h_double_orbit: u64,
    /// `w = ∞` is fixed by every element.
    pub infinity_fixed: bool,
    /// No other point of `P¹(F_{q^m})` is fixed by every element.
    pub only_infinity_fixed: bool,
    /// Only the identity fixes a horizontal component pointwise.
    pub horizontal_inertia_trivial: bool,
}

impl InertiaReport {
    pub fn matches_claim(&self) -> bool {
        self.vertical_pointwise == self.claimed_order
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub components: Vec<Component>,
    /// Values of `W/Z` where the vertical component meets the horizontal ones.
    pub intersections: Vec<Fe>,
    /// Every intersection is an ordinary double point of `x̃ (w^q − w)`.
    pub normal_crossings: bool,
    /// Filtration of the horizontal branch action.
    pub branch_filtration: Vec<u64>,
    pub branch_q_invariant: bool,
    pub inertia: InertiaReport,
}

/// The `t = 0` action on the `(w, x̃)` chart: `w ↦ ζ^{−a}(w − σ'')` and
/// `x̃ ↦ ζ^a x̃ / (1 − u(σ') x̃)`.
fn zero_fiber_maps(spec: &GroupSpec, kernel_basis: &[Fe], g: &GroupElement) -> (MobiusMap, MobiusMap) {
    let t = spec.tower();
    let d = spec.d();
    let mut theta_tilde = vec![Fe::ZERO; d];
    theta_tilde[d - 1] = Fe::ONE;
    let w = w_map(spec, &theta_tilde, g);
    let u = g.sigma[..d - 1].iter().zip(kernel_basis).fold(Fe::ZERO, |acc, (&s, &v)| t.add(acc, t.mul(s, v)));
    let x = MobiusMap { a: spec.zeta_pow(g.a as i64), b: Fe::ZERO, c: t.neg(u), e: Fe::ONE };
    (w, x)
}

pub fn fiber_at_zero(family: &Family) -> Result<FiberReport> {
    let spec = family.spec();
    let tw = family.tower();
    let (d, n, q) = (spec.d(), spec.n(), tw.q());

    // F(x̃, w) = x̃ (w^q − w) in F_{q^m}[x̃, w]
    let r = MultiRing::new(tw, 2);
    let (xv, wv) = (r.var(0), r.var(1));
    let f = r.mul(&xv, &r.sub(&r.pow(&wv, q), &wv));
    let roots: Vec<Fe> = tw.elements().filter(|&c| tw.frobenius_q(c, 1) == c).collect();
    let mut product = xv.clone();
    for &c in &roots {
        product = r.mul(&product, &r.sub(&wv, &r.scalar(c)));
    }
    if product != f {
        return Err(Error::VerificationFailed("components do not multiply to the fiber equation".into()));
    }

    let (fx, fw) = (r.derivative(&f, 0), r.derivative(&f, 1));
    let (fxx, fxw, fww) = (r.derivative(&fx, 0), r.derivative(&fx, 1), r.derivative(&fw, 1));
    let normal_crossings = roots.iter().all(|&c| {
        let pt = [Fe::ZERO, c];
        let singular = [&f, &fx, &fw].iter().all(|g| r.eval(g, &pt).is_zero());
        let hess = tw.sub(tw.mul(r.eval(&fxx, &pt), r.eval(&fww, &pt)), tw.pow(r.eval(&fxw, &pt), 2));
        singular && !hess.is_zero()
    });

    let branch_spec = GroupSpec::new(spec.tower_arc().clone(), d - 1)?;
    let kb = family.kernel.basis().to_vec();
    let branch = canonical_action(branch_spec, kb.clone(), family.precision)?;
    let branch_filtration = ramification_filtration(&branch)?;
    let branch_type = match branch_filtration.as_slice() {
        [_, g0, g1, ..] if *g1 > 0 && g0 % g1 == 0 => {
            let dd = (0..).find(|&k| q.checked_pow(k).is_none_or(|v| v >= *g1)).unwrap();
            (q.pow(dd) == *g1).then_some((g0 / g1, dd as usize))
        }
        _ => None,
    };
    let branch_q_invariant = verify_q_invariance(&branch, &family.s, n)?;

    let mut components = vec![Component { kind: ComponentKind::Vertical, restrained_type: None }];
    components.extend(
        roots.iter().map(|&c| Component { kind: ComponentKind::Horizontal { c }, restrained_type: branch_type }),
    );

    let inertia = inertia_report(family)?;
    Ok(FiberReport {
        components,
        intersections: roots,
        normal_crossings,
        branch_filtration,
        branch_q_invariant,
        inertia,
    })
}

pub fn inertia_report(family: &Family) -> Result<InertiaReport> {
    let spec = family.spec();
    let tw = family.tower();
    let (d, n, q) = (spec.d(), spec.n(), tw.q());
    let kb = family.kernel.basis();
    let els = spec.elements()?;
    let maps: Vec<(MobiusMap, MobiusMap)> = els.iter().map(|g| zero_fiber_maps(spec, kb, g)).collect();

    let vertical_pointwise = maps.iter().filter(|(w, _)| w.is_identity(tw)).count() as u64;
    let point_zero_stabilizer =
        maps.iter().filter(|(w, _)| w.apply_point(tw, Some(Fe::ZERO)) == Some(Fe::ZERO)).count() as u64;
    let mut orbit: Vec<Option<Fe>> = tw
        .base_elements()
        .map(|c| {
            let mut sigma = vec![Fe::ZERO; d];
            sigma[d - 1] = c;
            zero_fiber_maps(spec, kb, &GroupElement { sigma, a: 0 }).0.apply_point(tw, Some(Fe::ZERO))
        })
        .collect();
    orbit.sort();
    orbit.dedup();
    let infinity_fixed = maps.iter().all(|(w, _)| w.apply_point(tw, None).is_none());
    let gens: Vec<MobiusMap> = spec.generators().iter().map(|g| zero_fiber_maps(spec, kb, g).0).collect();
    let only_infinity_fixed = !tw.elements().any(|x| gens.iter().all(|m| m.apply_point(tw, Some(x)) == Some(x)));
    let horizontal_inertia_trivial = tw
        .base_elements()
        .all(|c| maps.iter().filter(|(w, x)| w.apply_point(tw, Some(c)) == Some(c) && x.is_identity(tw)).count() == 1);

    let hd = q.pow(d as u32);
    Ok(InertiaReport {
        claimed_order: n * q.pow(d as u32 - 1),
        alternative_order: n * hd / tw.p() as u64,
        vertical_pointwise,
        point_zero_stabilizer,
        h_double_orbit: orbit.len() as u64,
        infinity_fixed,
        only_infinity_fixed,
        horizontal_inertia_trivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(p: u64, s: u32, m: u32, n: u64, params: Vec<Fe>) -> Family {
        let spec = GroupSpec::new(Arc::new(make_tower(p, s, m, Some(n)).unwrap()), params.len() + 1).unwrap();
        Family::new(spec, params, 24).unwrap()
    }

    #[test]
    fn f16_example() {
        let fam = family(2, 1, 4, 1, vec![Fe::ONE]);
        let sp = specialize(&fam, Fe::ONE).unwrap();
        let tw = sp.tower();
        // (X + X²) ∘ (X + X²) = X + X⁴
        assert_eq!(sp.composed.coeffs(), &[Fe::ONE, Fe::ZERO, Fe::ONE]);
        assert_eq!(kernel(tw, &sp.composed).unwrap().dim(), 2);
        assert_eq!(sp.split.v.dim(), 2);
        assert!(eta(tw, sp.t, Fe::ONE).unwrap().is_zero());
    }

    #[test]
    fn phi_exponent() {
        let fam = family(2, 1, 4, 1, vec![Fe::ONE]);
        let tw = fam.tower();
        let t = tw.element(6).unwrap();
        let sp = specialize(&fam, t).unwrap();
        let rep = check_phi_roundtrip(&sp).unwrap();
        assert_eq!(rep.exponent, 1);
        assert!(rep.relation_residual >= 24);
        assert!(!rep.candidates[1].verified);
        let one = specialize(&fam, Fe::ONE).unwrap();
        assert!(check_phi_roundtrip(&one).unwrap().candidates.iter().all(|c| c.verified));
    }

    #[test]
    fn equivariance() {
        let fam = family(2, 2, 2, 3, vec![Fe::ONE]);
        let tw = fam.tower().clone();
        for k in [1u64, 2, 7] {
            let sp = specialize(&fam, tw.element(k).unwrap()).unwrap();
            let rep = equivariance_check(&sp).unwrap();
            assert!(rep.gamma_scales_w);
            // the marked translation fixes x̃ but moves w
            let last = rep.entries.last().unwrap();
            assert_eq!(last.element, sp.spec().basis_translation(1));
            let m = w_map(sp.spec(), &sp.split.theta_tilde(), &last.element);
            assert_eq!(m.apply_point(sp.tower(), Some(Fe::ZERO)), Some(sp.tower().neg(Fe::ONE)));
            assert!(eta(sp.tower(), sp.t, sp.split.theta_tilde()[1]).unwrap().is_zero());
        }
    }

    #[test]
    fn zero_fiber() {
        let fam = family(2, 1, 4, 1, vec![Fe::ONE]);
        let rep = fiber_at_zero(&fam).unwrap();
        assert_eq!(rep.components.len(), 3);
        assert_eq!(rep.intersections, vec![Fe::ZERO, Fe::ONE]);
        assert!(rep.normal_crossings);
        assert_eq!(rep.components[1].restrained_type, Some((1, 1)));
        assert_eq!(rep.branch_filtration, vec![2, 2, 2, 1]);
        assert!(rep.branch_q_invariant);
        let inr = rep.inertia;
        assert!(inr.matches_claim());
        assert_eq!(inr.h_double_orbit, 2);
        assert!(inr.infinity_fixed && inr.only_infinity_fixed && inr.horizontal_inertia_trivial);

        let fam = family(2, 2, 2, 3, vec![Fe::ONE]);
        let inr = inertia_report(&fam).unwrap();
        assert_eq!(inr.claimed_order, 12);
        assert_eq!(inr.point_zero_stabilizer, 12);
        assert_eq!(inr.vertical_pointwise, 4);
    }
}
