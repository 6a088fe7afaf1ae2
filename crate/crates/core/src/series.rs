//! Truncated Laurent series over `F_{q^m}`, Möbius maps of a local coordinate,
//! and the Hensel lifts that produce canonical coordinates.
//!
//! Precision is absolute and pessimistic: a series `f + O(x^N)` carries `N`,
//! and every operation records the largest `N` it can guarantee.

use alloc::{format, vec, vec::Vec};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::ff::{Fe, FieldTower};
use crate::linpoly::LinearizedPoly;

/// Results with fewer significant coefficients are refused.
pub const MIN_SIGNIFICANT: i64 = 4;

/// `Σ_{k ≥ val} c_k x^k + O(x^prec)`.
///
/// `coeffs[0]` is `c_val ≠ 0`; the zero series has no coefficients and `val = prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    val: i64,
    prec: i64,
    coeffs: Vec<Fe>,
}

impl TruncSeries {
    /// `Σ_k coeffs[k] x^{start+k} + O(x^prec)`; terms at or beyond `prec` are dropped.
    pub fn from_coeffs(start: i64, mut coeffs: Vec<Fe>, prec: i64) -> Self {
        coeffs.truncate((prec - start).max(0) as usize);
        let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
            return Self::zero(prec);
        };
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        coeffs.drain(..first);
        TruncSeries { val: start + first as i64, prec, coeffs }
    }

    pub fn zero(prec: i64) -> Self {
        TruncSeries { val: prec, prec, coeffs: Vec::new() }
    }

    /// `c x^k + O(x^prec)`.
    pub fn monomial(c: Fe, k: i64, prec: i64) -> Self {
        Self::from_coeffs(k, vec![c], prec)
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Zero to the tracked precision.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Result<i64> {
        if self.is_zero() {
            Err(Error::ZeroSeries)
        } else {
            Ok(self.val)
        }
    }

    /// Valuation, or the precision for the zero series: a guaranteed lower
    /// bound on the true valuation.
    pub fn residual_valuation(&self) -> i64 {
        self.val
    }

    /// Number of known coefficients from the leading one on.
    pub fn significant(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.prec - self.val
        }
    }

    pub fn coeff(&self, k: i64) -> Fe {
        if k < self.val {
            return Fe::ZERO;
        }
        self.coeffs.get((k - self.val) as usize).copied().unwrap_or(Fe::ZERO)
    }

    /// Nonzero terms `(exponent, coefficient)`, increasing.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fe)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, &c)| (self.val + k as i64, c))
    }

    /// Dense coefficients `c_start, …, c_{prec−1}`.
    pub fn dense_from(&self, start: i64) -> Vec<Fe> {
        (start..self.prec).map(|k| self.coeff(k)).collect()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::from_coeffs(self.val, self.coeffs.clone(), prec)
    }

    /// `x^k · self`.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries { val: self.val + k, prec: self.prec + k, coeffs: self.coeffs.clone() }
    }

    fn start(&self) -> i64 {
        self.val
    }
}

/// Refuses results that kept fewer than [`MIN_SIGNIFICANT`] coefficients.
pub fn ensure_significant(f: &TruncSeries, what: &str) -> Result<()> {
    if !f.is_zero() && f.significant() < MIN_SIGNIFICANT {
        return Err(Error::PrecisionLoss(format!("{what}: {} significant coefficients", f.significant())));
    }
    Ok(())
}

/// Series arithmetic over a tower with every precision clamped to `cap`.
#[derive(Clone, Copy, Debug)]
pub struct SeriesRing<'a> {
    tower: &'a FieldTower,
    cap: i64,
}

impl<'a> SeriesRing<'a> {
    pub fn new(tower: &'a FieldTower, cap: i64) -> Self {
        SeriesRing { tower, cap }
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    /// The coordinate `x + O(x^cap)`.
    pub fn x(&self) -> TruncSeries {
        TruncSeries::monomial(Fe::ONE, 1, self.cap)
    }

    pub fn monomial(&self, c: Fe, k: i64) -> TruncSeries {
        TruncSeries::monomial(c, k, self.cap)
    }

    fn clamp(&self, f: TruncSeries) -> TruncSeries {
        if f.prec > self.cap {
            f.truncate(self.cap)
        } else {
            f
        }
    }

    /// `f^{-1}` for nonzero `f`; precision `prec − 2·val`.
    pub fn inverse(&self, f: &TruncSeries) -> Result<TruncSeries> {
        let v = f.valuation()?;
        let t = self.tower;
        let r = (f.prec - v) as usize;
        let c0inv = t.inv(f.coeffs[0])?;
        let nz: Vec<(usize, Fe)> =
            f.coeffs.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).map(|(k, &c)| (k, c)).collect();
        let mut b = vec![Fe::ZERO; r];
        b[0] = c0inv;
        for k in 1..r {
            let mut acc = Fe::ZERO;
            for &(j, c) in &nz {
                if j > k {
                    break;
                }
                acc = t.add(acc, t.mul(c, b[k - j]));
            }
            b[k] = t.neg(t.mul(c0inv, acc));
        }
        Ok(self.clamp(TruncSeries::from_coeffs(-v, b, f.prec - 2 * v)))
    }

    pub fn div(&self, f: &TruncSeries, g: &TruncSeries) -> Result<TruncSeries> {
        Ok(self.mul(f, &self.inverse(g)?))
    }

    /// `f(g)` for `g` of positive valuation; negative powers of `g` are taken through `g^{-1}`.
    pub fn compose(&self, f: &TruncSeries, g: &TruncSeries) -> Result<TruncSeries> {
        let vg = g.valuation()?;
        if vg < 1 {
            return Err(Error::InvalidInput("inner series must have positive valuation".into()));
        }
        if f.is_zero() {
            return Ok(self.clamp(TruncSeries::zero(f.prec.saturating_mul(vg))));
        }
        let vf = f.val;
        // f = x^vf · f0 with f0 a unit known mod x^(prec − vf); terms of f0
        // beyond kmax only reach x^cap after the final multiplication by g^vf
        let rel = f.prec - vf;
        let kmax = rel.min((self.cap / vg + 1).saturating_sub(vf).max(1));
        let mut acc = self.zero();
        for k in (0..kmax).rev() {
            acc = self.add(&self.mul(&acc, g), &self.scalar(f.coeff(vf + k)));
        }
        acc = acc.truncate(kmax.saturating_mul(vg));
        let gv = if vf >= 0 { self.pow(g, vf as u64) } else { self.pow(&self.inverse(g)?, (-vf) as u64) };
        Ok(self.mul(&acc, &gv))
    }

    pub fn lift_linearized(&self, p: &LinearizedPoly<Fe>) -> LinearizedPoly<TruncSeries> {
        LinearizedPoly::new(self, p.coeffs().iter().map(|&c| self.scalar(c)).collect())
    }
}

impl Algebra for SeriesRing<'_> {
    type Elem = TruncSeries;

    fn tower(&self) -> &FieldTower {
        self.tower
    }
    fn zero(&self) -> TruncSeries {
        TruncSeries::zero(self.cap)
    }
    fn one(&self) -> TruncSeries {
        self.scalar(Fe::ONE)
    }
    fn is_zero(&self, a: &TruncSeries) -> bool {
        a.is_zero()
    }
    fn scalar(&self, c: Fe) -> TruncSeries {
        TruncSeries::monomial(c, 0, self.cap)
    }
    fn add(&self, f: &TruncSeries, g: &TruncSeries) -> TruncSeries {
        let t = self.tower;
        let prec = f.prec.min(g.prec).min(self.cap);
        let lo = f.start().min(g.start()).min(prec);
        let v = (lo..prec).map(|k| t.add(f.coeff(k), g.coeff(k))).collect();
        TruncSeries::from_coeffs(lo, v, prec)
    }
    fn neg(&self, f: &TruncSeries) -> TruncSeries {
        TruncSeries { val: f.val, prec: f.prec, coeffs: f.coeffs.iter().map(|&c| self.tower.neg(c)).collect() }
    }
    fn mul(&self, f: &TruncSeries, g: &TruncSeries) -> TruncSeries {
        let t = self.tower;
        let prec = (f.val.saturating_add(g.prec)).min(g.val.saturating_add(f.prec)).min(self.cap);
        let val = f.val.saturating_add(g.val);
        if f.is_zero() || g.is_zero() || val >= prec {
            return TruncSeries::zero(prec);
        }
        let len = (prec - val) as usize;
        let mut out = vec![Fe::ZERO; len];
        let gnz: Vec<(usize, Fe)> =
            g.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, &c)| (k, c)).collect();
        for (i, &a) in f.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &gnz {
                if i + j >= len {
                    break;
                }
                out[i + j] = t.add(out[i + j], t.mul(a, b));
            }
        }
        TruncSeries::from_coeffs(val, out, prec)
    }
    fn frobenius(&self, f: &TruncSeries, e: u32) -> TruncSeries {
        let t = self.tower;
        let k = (t.p() as i64).pow(e);
        let prec = f.prec.saturating_mul(k).min(self.cap);
        if f.is_zero() {
            return TruncSeries::zero(prec);
        }
        let val = f.val * k;
        if val >= prec {
            return TruncSeries::zero(prec);
        }
        let mut out = vec![Fe::ZERO; (prec - val) as usize];
        for (i, &c) in f.coeffs.iter().enumerate() {
            let idx = i * k as usize;
            if idx >= out.len() {
                break;
            }
            out[idx] = t.frobenius(c, e);
        }
        TruncSeries::from_coeffs(val, out, prec)
    }
}

/// `x ↦ (a x + b)/(c x + e)` with `ae − bc ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MobiusMap {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub e: Fe,
}

impl MobiusMap {
    pub fn new(t: &FieldTower, a: Fe, b: Fe, c: Fe, e: Fe) -> Result<Self> {
        let m = MobiusMap { a, b, c, e };
        if m.det(t).is_zero() {
            return Err(Error::InvalidInput("singular Möbius map".into()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MobiusMap { a: Fe::ONE, b: Fe::ZERO, c: Fe::ZERO, e: Fe::ONE }
    }

    pub fn det(&self, t: &FieldTower) -> Fe {
        t.sub(t.mul(self.a, self.e), t.mul(self.b, self.c))
    }

    /// `self ∘ other`, the matrix product `self · other`.
    pub fn compose(&self, t: &FieldTower, o: &MobiusMap) -> MobiusMap {
        let f = |x: Fe, y: Fe, z: Fe, w: Fe| t.add(t.mul(x, y), t.mul(z, w));
        MobiusMap {
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.e),
            c: f(self.c, o.a, self.e, o.c),
            e: f(self.c, o.b, self.e, o.e),
        }
    }

    /// Equal as maps, i.e. proportional matrices.
    pub fn equivalent(&self, t: &FieldTower, o: &MobiusMap) -> bool {
        let x = [self.a, self.b, self.c, self.e];
        let y = [o.a, o.b, o.c, o.e];
        (0..4).all(|i| (0..4).all(|j| t.mul(x[i], y[j]) == t.mul(x[j], y[i])))
    }

    pub fn is_identity(&self, t: &FieldTower) -> bool {
        self.equivalent(t, &MobiusMap::identity())
    }

    /// Action on `P^1(F_{q^m})`, `None` standing for `∞`.
    pub fn apply_point(&self, t: &FieldTower, x: Option<Fe>) -> Option<Fe> {
        let (num, den) = match x {
            Some(x) => (t.add(t.mul(self.a, x), self.b), t.add(t.mul(self.c, x), self.e)),
            None => (self.a, self.c),
        };
        t.div(num, den).ok()
    }
}

/// `(a f + b)(c f + e)^{-1}`; the denominator must be a unit.
pub fn mobius_apply(ring: &SeriesRing<'_>, m: &MobiusMap, f: &TruncSeries) -> Result<TruncSeries> {
    let num = ring.add(&ring.scale(m.a, f), &ring.scalar(m.b));
    let den = ring.add(&ring.scale(m.c, f), &ring.scalar(m.e));
    if den.is_zero() || den.val != 0 {
        return Err(Error::NonUnitDenominator);
    }
    let out = ring.mul(&num, &ring.inverse(&den)?);
    ensure_significant(&out, "Möbius image")?;
    Ok(out)
}

/// A Hensel lift with the residual valuation after each iteration
/// (`residuals[0]` is the starting residual).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselLift {
    pub value: TruncSeries,
    pub residuals: Vec<i64>,
}

impl HenselLift {
    /// Residual at step `k` is at least `2^k`.
    pub fn converges_quadratically(&self) -> bool {
        self.residuals.iter().enumerate().all(|(k, &r)| k >= 62 || r >= 1i64 << k)
    }
}

const MAX_ITERATIONS: usize = 64;

/// `β ∈ 1 + 𝔪²` with `β^n = α`, by Newton iteration at the precision of `α`.
pub fn nth_root_hensel(ring: &SeriesRing<'_>, alpha: &TruncSeries, n: u64) -> Result<HenselLift> {
    let t = ring.tower();
    let p = t.p() as u64;
    if n == 0 || n.is_multiple_of(p) {
        return Err(Error::BadOrder { n, p });
    }
    let one = ring.one();
    if ring.sub(alpha, &one).residual_valuation() < 2 {
        return Err(Error::BadResidue("α ∉ 1 + 𝔪²".into()));
    }
    let local = SeriesRing::new(t, alpha.prec.min(ring.cap));
    let mut beta = local.one();
    let mut residuals = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let r = local.sub(&local.pow(&beta, n), alpha);
        residuals.push(r.residual_valuation());
        if r.is_zero() {
            ensure_significant(&beta, "n-th root")?;
            return Ok(HenselLift { value: beta, residuals });
        }
        // β ← β − r / (n β^{n−1})
        let deriv = local.scale(t.from_int((n % p) as i64), &local.pow(&beta, n - 1));
        let step = local.mul(&r, &local.inverse(&deriv)?);
        beta = local.sub(&beta, &step);
    }
    Err(Error::PrecisionLoss("Newton iteration did not settle".into()))
}

/// The unique `u ∈ 𝔪` with `P*(u) = v`, by successive substitution
/// `u ← v − Σ_{i≥1} a_i u^{q^i}`. `pstar` must have `a_0 = 1`.
pub fn solve_linearized_hensel(
    ring: &SeriesRing<'_>,
    pstar: &LinearizedPoly<Fe>,
    v: &TruncSeries,
) -> Result<HenselLift> {
    if pstar.coeffs()[0] != Fe::ONE {
        return Err(Error::InvalidInput("P* must have a_0 = 1".into()));
    }
    if v.is_zero() {
        return Ok(HenselLift { value: v.clone(), residuals: vec![v.prec] });
    }
    if v.val < 1 {
        return Err(Error::BadResidue("v ∉ 𝔪".into()));
    }
    let local = SeriesRing::new(ring.tower(), v.prec.min(ring.cap));
    let lp = local.lift_linearized(pstar);
    let tail = LinearizedPoly::new(&local, {
        let mut c = lp.coeffs().to_vec();
        c[0] = local.zero();
        c
    });
    let mut u = v.clone();
    let mut residuals = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let r = local.sub(&lp.eval(&local, &u), v);
        residuals.push(r.residual_valuation());
        if r.is_zero() {
            return Ok(HenselLift { value: u, residuals });
        }
        u = local.sub(v, &tail.eval(&local, &u));
    }
    Err(Error::PrecisionLoss("substitution did not settle".into()))
}

/// Output of [`henselian_canonical_x`]; every series is in the variable `x̂`.
#[derive(Clone, Debug)]
pub struct HenselCanonical {
    pub x: TruncSeries,
    pub y: TruncSeries,
    pub beta: HenselLift,
    pub u: HenselLift,
    /// Residual valuation of `y · P*(x^{-1})^n − 1`.
    pub identity_residual: i64,
    /// Residual valuation of `g(x) − M_g(x)` for each supplied `M_g`.
    pub equivariance_residuals: Vec<i64>,
}

/// From canonical data `P*(x̂^{-1})^n = ŷ^{-1}` and `y = ŷ·α(ŷ)` with
/// `α ∈ 1 + 𝔪²`, constructs `x` with `P*(x^{-1})^n = y^{-1}` via
/// `ẑ = P*(x̂^{-1})^{-1}`, `β^n = α`, `z = ẑβ`, `v = ẑ^{-1} − z^{-1}`,
/// `P*(u) = v`, `x = x̂/(1 − x̂u)`.
///
/// `alpha` is a power series in `ŷ`; `action` lists Möbius maps `M_g` acting on
/// `x̂`, and for each the residual of `x(M_g(x̂)) − M_g(x)` is reported.
pub fn henselian_canonical_x(
    tower: &FieldTower,
    pstar: &LinearizedPoly<Fe>,
    n: u64,
    alpha: &TruncSeries,
    precision: i64,
    action: &[MobiusMap],
) -> Result<HenselCanonical> {
    let ring = SeriesRing::new(tower, precision);
    let lp = ring.lift_linearized(pstar);
    let xh = ring.x();
    let xh_inv = ring.monomial(Fe::ONE, -1);
    let zh_inv = lp.eval(&ring, &xh_inv);
    let zh = ring.inverse(&zh_inv)?;
    let yh = ring.pow(&zh, n);

    let beta = nth_root_hensel(&ring, alpha, n)?;
    let z = ring.mul(&zh, &ring.compose(&beta.value, &yh)?);
    let v = ring.sub(&zh_inv, &ring.inverse(&z)?);
    let u = solve_linearized_hensel(&ring, pstar, &v)?;
    let x_inv = ring.sub(&xh_inv, &u.value);
    let x = ring.inverse(&x_inv)?;
    ensure_significant(&x, "canonical coordinate")?;
    let y = ring.mul(&yh, &ring.compose(alpha, &yh)?);

    let lhs = ring.pow(&lp.eval(&ring, &x_inv), n);
    let identity_residual = ring.sub(&ring.mul(&lhs, &y), &ring.one()).residual_valuation();

    let mut equivariance_residuals = Vec::with_capacity(action.len());
    for m in action {
        let moved = ring.compose(&x, &mobius_apply(&ring, m, &xh)?)?;
        let expected = mobius_apply(&ring, m, &x)?;
        equivariance_residuals.push(ring.sub(&moved, &expected).residual_valuation());
    }
    Ok(HenselCanonical { x, y, beta, u, identity_residual, equivariance_residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_tower;

    #[test]
    fn geometric_series() {
        let t = make_tower(2, 1, 2, None).unwrap();
        let r = SeriesRing::new(&t, 10);
        let theta = Fe::raw(2);
        let f = r.sub(&r.one(), &r.scale(theta, &r.x()));
        let g = r.inverse(&f).unwrap();
        for k in 0..10 {
            assert_eq!(g.coeff(k), t.pow(theta, k as u64));
        }
        assert_eq!(g.prec(), 10);
    }

    #[test]
    fn valuations() {
        let t = make_tower(3, 1, 1, None).unwrap();
        let r = SeriesRing::new(&t, 20);
        let f = r.add(&r.monomial(Fe::ONE, 2), &r.monomial(Fe::ONE, 3));
        assert_eq!(f.valuation().unwrap(), 2);
        assert_eq!(r.zero().valuation(), Err(Error::ZeroSeries));
        let x = r.x();
        let prod = r.mul(&x, &r.inverse(&x).unwrap());
        assert_eq!(prod.coeff(0), Fe::ONE);
        assert_eq!(prod.terms().count(), 1);
    }

    #[test]
    fn mobius_images() {
        let t = make_tower(2, 1, 1, None).unwrap();
        let r = SeriesRing::new(&t, 12);
        let sigma = MobiusMap::new(&t, Fe::ONE, Fe::ZERO, Fe::ONE, Fe::ONE).unwrap();
        let img = mobius_apply(&r, &sigma, &r.x()).unwrap();
        for k in 1..12 {
            assert_eq!(img.coeff(k), Fe::ONE);
        }
        assert_eq!(mobius_apply(&r, &MobiusMap::identity(), &r.x()).unwrap(), r.x());
        let bad = MobiusMap::new(&t, Fe::ZERO, Fe::ONE, Fe::ONE, Fe::ZERO).unwrap();
        assert_eq!(mobius_apply(&r, &bad, &r.x()), Err(Error::NonUnitDenominator));
    }

    #[test]
    fn square_root_in_char_3() {
        let t = make_tower(3, 1, 1, None).unwrap();
        let r = SeriesRing::new(&t, 6);
        let alpha = r.add(&r.one(), &r.monomial(Fe::ONE, 2));
        let lift = nth_root_hensel(&r, &alpha, 2).unwrap();
        let expect = TruncSeries::from_coeffs(0, vec![Fe::ONE, Fe::ZERO, t.from_int(2), Fe::ZERO, Fe::ONE], 6);
        assert_eq!(lift.value, expect);
        assert!(lift.converges_quadratically());
        assert_eq!(nth_root_hensel(&r, &alpha, 3).unwrap_err().kind(), "BadOrder");
        let bad = r.add(&r.one(), &r.x());
        assert_eq!(nth_root_hensel(&r, &bad, 2).unwrap_err().kind(), "BadResidue");
    }

    #[test]
    fn artin_schreier_solution() {
        let t = make_tower(2, 1, 1, None).unwrap();
        let r = SeriesRing::new(&t, 16);
        let p = LinearizedPoly::star(&t, &[Fe::ONE]);
        let lift = solve_linearized_hensel(&r, &p, &r.x()).unwrap();
        let nonzero: Vec<i64> = lift.value.terms().map(|(k, _)| k).collect();
        assert_eq!(nonzero, vec![1, 2, 4, 8]);
        assert!(lift.converges_quadratically());
        assert!(solve_linearized_hensel(&r, &p, &r.zero()).unwrap().value.is_zero());
        assert_eq!(solve_linearized_hensel(&r, &p, &r.one()).unwrap_err().kind(), "BadResidue");
    }

    #[test]
    fn trivial_alpha_gives_the_hatted_coordinate() {
        let t = make_tower(2, 1, 1, None).unwrap();
        let p = LinearizedPoly::star(&t, &[Fe::ONE]);
        let alpha = TruncSeries::monomial(Fe::ONE, 0, 40);
        let out = henselian_canonical_x(&t, &p, 1, &alpha, 40, &[]).unwrap();
        assert_eq!(out.x.terms().collect::<Vec<_>>(), vec![(1, Fe::ONE)]);
        assert!(out.x.prec() >= 36);
    }
}
