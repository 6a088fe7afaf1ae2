//! Acceptance criteria 1–9 as deterministic checks. Criterion 10 compares two
//! `selftest` runs and lives with the binary tests.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use restrained_algebra::arith::{gaussian_binomial, multiplicative_order, prime_power};
use restrained_algebra::bounds::{
    f_tilde, f_tilde_crossover, nakajima_bound, nodal_bound, rhz_genus, stichtenoth_bound, BranchKind, CoverSpec,
    FTildeTerm,
};
use restrained_algebra::degeneration::{
    check_phi_roundtrip, equivariance_check, fiber_at_zero, specialize, ComponentKind, Family,
};
use restrained_algebra::ff::make_tower;
use restrained_algebra::gnd::GroupSpec;
use restrained_algebra::invariants::{
    base_tower, dickson_invariants, extension_degrees, gl_action, minimal_polynomial_s, verify_composition_relation,
};
use restrained_algebra::linpoly::{fq_rank, from_subspace, kernel, LinearizedPoly, Subspace};
use restrained_algebra::matrix::enumerate_gl;
use restrained_algebra::multipoly::MultiRing;
use restrained_algebra::poly::UniPoly;
use restrained_algebra::restrained::{
    canonical_action, classify_all, enumerate_subspaces, ramification_filtration, verify_q_invariance,
};
use restrained_algebra::series::{henselian_canonical_x, mobius_apply, MobiusMap, SeriesRing, TruncSeries};
use restrained_algebra::{Algebra, Fe, FieldTower, Result};

/// Residual valuation demanded of the Hensel canonical form.
pub const HENSEL_RESIDUAL: i64 = 24;
/// Working precision for the Hensel canonical form.
pub const HENSEL_PRECISION: i64 = 40;
/// Random `t` per degeneration family.
pub const DEGENERATION_SAMPLES: usize = 20;
/// Random `θ` per type for the canonical action.
pub const THETAS_PER_TYPE: usize = 5;
/// Random types for Q-invariance.
pub const Q_SAMPLES: usize = 20;
/// Random specializations of the minimal polynomial of `S`.
pub const MINPOLY_SAMPLES: usize = 50;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeSpec {
    pub p: u64,
    pub s: u32,
    pub n: u64,
    pub d: usize,
}

impl TypeSpec {
    pub fn q(&self) -> u64 {
        self.p.pow(self.s)
    }
    pub fn order(&self) -> u64 {
        self.n * self.q().pow(self.d as u32)
    }
    /// `G_{n,d}` over `F_{q^m}`.
    pub fn group(&self, m: u32) -> Result<GroupSpec> {
        GroupSpec::new(Arc::new(make_tower(self.p, self.s, m, Some(self.n))?), self.d)
    }
}

/// All `(p, s, n, d)` with `d ≥ 1`, `F_q` containing a primitive `n`-th root of
/// unity but no smaller field doing so, and `n q^d ≤ limit`.
pub fn restrained_types(limit: u64) -> Vec<TypeSpec> {
    let mut out = Vec::new();
    for q in 2..=limit {
        let Some((p, s)) = prime_power(q) else { continue };
        for n in 1..=limit / q {
            let ord = if n == 1 { Some(1) } else { multiplicative_order(p, n) };
            if ord != Some(s as u64) {
                continue;
            }
            let mut d = 1;
            while n * q.pow(d as u32) <= limit {
                out.push(TypeSpec { p, s, n, d });
                d += 1;
            }
        }
    }
    out
}

fn random_theta(t: &FieldTower, d: usize, rng: &mut ChaCha8Rng) -> Vec<Fe> {
    loop {
        let theta: Vec<Fe> = (0..d).map(|_| t.element(rng.gen_range(0..t.size())).expect("index below size")).collect();
        if fq_rank(t, &theta) == d {
            return theta;
        }
    }
}

fn check(id: u8, name: &'static str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { id, name, passed, detail },
        Err(e) => Check { id, name, passed: false, detail: format!("error: {e}") },
    }
}

pub fn subspace_bijection() -> Check {
    check(1, "subspace-polynomial bijection", subspace_bijection_inner())
}

fn subspace_bijection_inner() -> Result<(bool, String)> {
    let mut total = 0u64;
    let mut failures = 0u64;
    let mut planes_f16 = 0u64;
    for m in 1..=4u32 {
        let t = make_tower(2, 1, m, None)?;
        for d in 0..=m as usize {
            let spaces = if d == 0 { vec![Vec::new()] } else { enumerate_subspaces(&t, d) };
            let mut polys = BTreeSet::new();
            for basis in spaces {
                let v = Subspace::new(&t, basis)?;
                let p = from_subspace(&t, &v);
                // oracle: the product of X − v over the subspace
                let mut prod = UniPoly::one(&t);
                for x in v.elements(&t) {
                    prod = prod.mul_linear(&t, &x);
                }
                let ok = p.expand(&t) == prod && kernel(&t, &p)?.same_as(&t, &v) && p.height() == d;
                failures += u64::from(!ok);
                polys.insert(p.coeffs().to_vec());
                total += 1;
            }
            if polys.len() as u128 != gaussian_binomial(m, d as u32, 2) {
                failures += 1;
            }
            if m == 4 && d == 2 {
                planes_f16 = polys.len() as u64;
            }
        }
    }
    Ok((
        failures == 0 && planes_f16 == 35,
        format!("{total} subspaces, {planes_f16} planes of F_16, {failures} failures"),
    ))
}

pub fn dickson() -> Check {
    check(2, "Dickson invariants", dickson_inner())
}

fn dickson_inner() -> Result<(bool, String)> {
    let mut fixed = true;
    let mut parts = Vec::new();
    for &(q, d) in &[(2u64, 2usize), (3, 1), (2, 3)] {
        let t = base_tower(q)?;
        let ts = dickson_invariants(q, d)?;
        let gl = enumerate_gl(&t, d)?;
        fixed &= ts.iter().all(|f| gl.iter().all(|g| gl_action(&t, f, g) == *f));
        parts.push(format!("(q={q}, d={d}): {} invariants under {} matrices", ts.len(), gl.len()));
    }
    let t = base_tower(2)?;
    let r = MultiRing::new(&t, 2);
    let mono = |a, b| r.term(Fe::ONE, vec![a, b]);
    let t0 = r.add(&mono(2, 1), &mono(1, 2));
    let t1 = r.add(&r.add(&mono(2, 0), &mono(1, 1)), &mono(0, 2));
    let ts = dickson_invariants(2, 2)?;
    let literal = ts == vec![t0, t1];
    parts.push(format!("q=2 d=2 literal match: {literal}"));
    Ok((fixed && literal, parts.join("; ")))
}

pub fn ring_relations(seed: u64) -> Check {
    check(3, "ring relations", ring_relations_inner(seed))
}

fn ring_relations_inner(seed: u64) -> Result<(bool, String)> {
    let mut ok = true;
    for &(q, d) in &[(2u64, 2usize), (2, 3), (3, 2), (3, 3), (4, 2)] {
        ok &= verify_composition_relation(q, d).is_ok();
    }
    let mp = minimal_polynomial_s(2, 2)?;
    let vanished = mp.check_specializations(4, MINPOLY_SAMPLES, seed)?;
    let degrees = extension_degrees(2, 2);
    let passed = ok && vanished == MINPOLY_SAMPLES && degrees == (3, 2);
    Ok((
        passed,
        format!("composition relation {ok}; {vanished}/{MINPOLY_SAMPLES} specializations vanish; degrees {degrees:?}"),
    ))
}

pub fn canonical(seed: u64) -> Check {
    check(4, "canonical action", canonical_inner(seed))
}

fn canonical_inner(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types = restrained_types(200);
    let mut bad = Vec::new();
    let mut actions = 0;
    for ty in &types {
        let spec = ty.group(ty.d as u32)?;
        let precision = 4 * ty.order() as i64;
        for _ in 0..THETAS_PER_TYPE {
            let theta = random_theta(spec.tower(), ty.d, &mut rng);
            let act = canonical_action(spec.clone(), theta, precision)?;
            let hom = act.check_homomorphism(seed)?;
            let filt = ramification_filtration(&act)?;
            let want = vec![ty.order(), ty.order(), spec.h_order(), 1];
            if !hom || filt != want {
                bad.push(format!("(p={}, s={}, n={}, d={}): {filt:?}", ty.p, ty.s, ty.n, ty.d));
            }
            actions += 1;
        }
    }
    Ok((bad.is_empty(), format!("{} types, {actions} actions, failures: {bad:?}", types.len())))
}

pub fn q_invariance(seed: u64) -> Check {
    check(5, "Q-invariance", q_invariance_inner(seed))
}

fn q_invariance_inner(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5));
    let types = restrained_types(64);
    let mut held = 0;
    for _ in 0..Q_SAMPLES {
        let ty = types[rng.gen_range(0..types.len())];
        // leave room above the minimal field
        let m = ty.d as u32 + u32::from(ty.q().pow(ty.d as u32 + 1) <= 1 << 12);
        let spec = ty.group(m)?;
        let theta = random_theta(spec.tower(), ty.d, &mut rng);
        let v = Subspace::new(spec.tower(), theta.clone())?;
        let a = from_subspace(spec.tower(), &v).normalized(spec.tower())?;
        let act = canonical_action(spec, theta, 4 * ty.order() as i64)?;
        held += usize::from(verify_q_invariance(&act, &a, ty.n)?);
    }

    // y = x²/(1+x) against σ(x) = x/(1+x) over F_2
    let t = make_tower(2, 1, 1, None)?;
    let ring = SeriesRing::new(&t, 40);
    let x = ring.x();
    let y = ring.mul(&ring.monomial(Fe::ONE, 2), &ring.inverse(&ring.add(&ring.one(), &x))?);
    let sigma = MobiusMap::new(&t, Fe::ONE, Fe::ZERO, Fe::ONE, Fe::ONE)?;
    let moved = ring.compose(&y, &mobius_apply(&ring, &sigma, &x)?)?;
    let fixed = ring.sub(&moved, &y).residual_valuation();
    let p = LinearizedPoly::star(&t, &[Fe::ONE]);
    let from_p = ring.inverse(&ring.lift_linearized(&p).eval(&ring, &ring.monomial(Fe::ONE, -1)))?;
    let closed_form = ring.sub(&from_p, &y).residual_valuation();
    let passed = held == Q_SAMPLES && fixed >= 38 && closed_form >= 38;
    Ok((passed, format!("{held}/{Q_SAMPLES} random types; x²/(1+x): invariance residual {fixed}, closed form residual {closed_form}")))
}

pub fn classification() -> Check {
    check(6, "classification", classification_inner())
}

fn classification_inner() -> Result<(bool, String)> {
    let c3 = classify_all(2, 1, 2, 3)?.classes.len();
    let c4 = classify_all(2, 1, 2, 4)?.classes.len();
    let mut lines = Vec::new();
    let mut one = true;
    for &(p, s, m) in &[
        (2u64, 1u32, 1u32),
        (2, 1, 2),
        (2, 1, 3),
        (2, 1, 4),
        (2, 1, 5),
        (2, 1, 6),
        (3, 1, 1),
        (3, 1, 2),
        (3, 1, 3),
        (2, 2, 2),
        (5, 1, 2),
    ] {
        let k = classify_all(p, s, 1, m)?.classes.len();
        one &= k == 1;
        lines.push(format!("({p},{s},{m}):{k}"));
    }
    Ok((c3 == 1 && c4 == 3 && one, format!("d=2 m=3: {c3}; d=2 m=4: {c4}; d=1: {}", lines.join(" "))))
}

/// Outcome of one degeneration family.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DegenerationOutcome {
    pub q: u64,
    pub n: u64,
    pub samples: usize,
    pub restrained: usize,
    pub phi_roundtrip: usize,
    pub equivariant: usize,
    pub components: usize,
    pub intersections_rational: bool,
    pub horizontal_types: Vec<Option<(u64, usize)>>,
    pub vertical_pointwise: u64,
    pub claimed_pointwise: u64,
    pub errors: Vec<String>,
}

impl DegenerationOutcome {
    pub fn passed(&self) -> bool {
        let s = self.samples;
        self.errors.is_empty()
            && self.restrained == s
            && self.phi_roundtrip == s
            && self.equivariant == s
            && self.components as u64 == 1 + self.q
            && self.intersections_rational
            && self.horizontal_types.iter().all(|&ty| ty == Some((self.n, 1)))
            && self.vertical_pointwise == self.claimed_pointwise
    }
}

/// One family over `F_{q^m}` with `d = 2`. Over `F_2` the only `n` is `1`, so
/// `n = 3` runs with `q = 4`.
pub fn degeneration_family(p: u64, s: u32, m: u32, n: u64, seed: u64) -> Result<DegenerationOutcome> {
    let spec = GroupSpec::new(Arc::new(make_tower(p, s, m, Some(n))?), 2)?;
    let q = spec.q();
    let precision = 4 * spec.order() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s1 = spec.tower().element(rng.gen_range(1..spec.tower().size()))?;
    let family = Family::new(spec, vec![s1], precision)?;
    let tw = family.tower();
    let mut out = DegenerationOutcome {
        q,
        n,
        samples: DEGENERATION_SAMPLES,
        restrained: 0,
        phi_roundtrip: 0,
        equivariant: 0,
        components: 0,
        intersections_rational: false,
        horizontal_types: Vec::new(),
        vertical_pointwise: 0,
        claimed_pointwise: n * q,
        errors: Vec::new(),
    };
    for _ in 0..DEGENERATION_SAMPLES {
        let t = tw.element(rng.gen_range(1..tw.size()))?;
        let sp = match specialize(&family, t) {
            Ok(sp) => sp,
            Err(e) => {
                out.errors.push(format!("t={}: {e}", t.index()));
                continue;
            }
        };
        let order = sp.spec().order();
        let filt = ramification_filtration(&sp.action)?;
        if sp.spec().n() == n && sp.spec().d() == 2 && filt == vec![order, order, q * q, 1] {
            out.restrained += 1;
        }
        let phi = check_phi_roundtrip(&sp)?;
        if phi.relation_residual >= precision && phi.candidates.iter().any(|c| c.verified && c.exponent == phi.exponent)
        {
            out.phi_roundtrip += 1;
        }
        match equivariance_check(&sp) {
            Ok(rep)
                if rep.entries.iter().all(|e| e.coordinate_residual >= precision && e.xtilde_residual >= precision) =>
            {
                out.equivariant += 1
            }
            Ok(_) => {}
            Err(e) => out.errors.push(format!("t={}: {e}", t.index())),
        }
    }
    let fiber = fiber_at_zero(&family)?;
    out.components = fiber.components.len();
    out.intersections_rational =
        fiber.intersections.len() as u64 == q && fiber.intersections.iter().all(|&c| tw.frobenius_q(c, 1) == c);
    out.horizontal_types = fiber
        .components
        .iter()
        .filter(|c| matches!(c.kind, ComponentKind::Horizontal { .. }))
        .map(|c| c.restrained_type)
        .collect();
    out.vertical_pointwise = fiber.inertia.vertical_pointwise;
    Ok(out)
}

pub fn degeneration(seed: u64) -> Check {
    check(7, "degeneration", degeneration_inner(seed))
}

fn degeneration_inner(seed: u64) -> Result<(bool, String)> {
    let mut passed = true;
    let mut parts = Vec::new();
    for &(p, s, m, n) in &[(2u64, 1u32, 2u32, 1u64), (2, 2, 2, 3)] {
        let o = degeneration_family(p, s, m, n, seed.wrapping_add(n))?;
        passed &= o.passed();
        parts.push(format!(
            "q={} n={}: restrained {}/{s}, phi {}/{s}, equivariant {}/{s}, {} components, intersections in F_q {}, horizontal {:?}, vertical pointwise stabilizer {} (expected {}){}",
            o.q,
            o.n,
            o.restrained,
            o.phi_roundtrip,
            o.equivariant,
            o.components,
            o.intersections_rational,
            o.horizontal_types,
            o.vertical_pointwise,
            o.claimed_pointwise,
            if o.errors.is_empty() { String::new() } else { format!(", errors {:?}", o.errors) },
            s = o.samples,
        ));
    }
    Ok((passed, parts.join("; ")))
}

pub fn hensel() -> Check {
    check(8, "Hensel canonical form", hensel_inner())
}

fn hensel_inner() -> Result<(bool, String)> {
    let t = make_tower(2, 1, 1, Some(1))?;
    let p = LinearizedPoly::star(&t, &[Fe::ONE]);
    let alpha = TruncSeries::from_coeffs(0, vec![Fe::ONE, Fe::ZERO, Fe::ONE], HENSEL_PRECISION);
    let zeta = t.zeta().expect("n = 1 tower");
    let gamma = MobiusMap::new(&t, zeta, Fe::ZERO, Fe::ZERO, Fe::ONE)?;
    let theta = kernel(&t, &p)?.basis()[0];
    let sigma = MobiusMap::new(&t, Fe::ONE, Fe::ZERO, t.neg(theta), Fe::ONE)?;
    let out = henselian_canonical_x(&t, &p, 1, &alpha, HENSEL_PRECISION, &[gamma, sigma])?;
    let eq = &out.equivariance_residuals;
    let passed = out.identity_residual >= HENSEL_RESIDUAL
        && eq.len() == 2
        && eq.iter().all(|&r| r >= HENSEL_RESIDUAL)
        && out.beta.converges_quadratically()
        && out.u.converges_quadratically();
    Ok((passed, format!("identity residual {}, equivariance residuals {eq:?}", out.identity_residual)))
}

pub fn bounds() -> Check {
    check(9, "bounds", bounds_inner())
}

fn bounds_inner() -> Result<(bool, String)> {
    let (n2, n3) = (nakajima_bound(2)?, nakajima_bound(3)?);
    let st3 = stichtenoth_bound(3)?;
    let hurwitz_regime = (2..=100u64)
        .all(|g| f_tilde(g).is_ok_and(|f| f.term == FTildeTerm::Hurwitz && f.bound.value == 84 * (g as u128 - 1)));
    let g_star = f_tilde_crossover();
    let crossover_ok = g_star == f_tilde_crossover()
        && f_tilde(g_star)?.term == FTildeTerm::Second
        && f_tilde(g_star - 1)?.term == FTildeTerm::Hurwitz;
    let mut kg = 0;
    let mut kg_ok = true;
    for ty in restrained_types(64) {
        let q = ty.q();
        let cover = CoverSpec {
            base_genus: 0,
            group_order: ty.order(),
            branch_points: vec![BranchKind::Restrained { n: ty.n, d: ty.d as u32, q }, BranchKind::Tame { e: ty.n }],
        };
        kg_ok &= rhz_genus(&cover)? == 0;
        kg += 1;
    }
    let nodal = (2..=50u64).all(|g| nodal_bound(g, 3 * g - 3).is_ok_and(|b| b == 72 * (g as u128 - 1)));
    let passed =
        n2 == 168 && n3 == 504 && st3.value == 6048 && st3.exact && hurwitz_regime && crossover_ok && kg_ok && nodal;
    Ok((
        passed,
        format!(
            "nakajima(2)={n2} nakajima(3)={n3} stichtenoth(3)={} exact={}; f̃ = 84(g−1) on 2..=100: {hurwitz_regime}; g*={g_star}; {kg} Katz–Gabber covers of genus 0: {kg_ok}; nodal bound at δ=3g−3: {nodal}",
            st3.value, st3.exact
        ),
    ))
}

/// Criteria 1–9 in order.
pub fn all(seed: u64) -> Vec<Check> {
    vec![
        subspace_bijection(),
        dickson(),
        ring_relations(seed),
        canonical(seed),
        q_invariance(seed),
        classification(),
        degeneration(seed),
        hensel(),
        bounds(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_types() {
        let types = restrained_types(12);
        let has = |p, s, n, d| types.contains(&TypeSpec { p, s, n, d });
        assert!(has(2, 1, 1, 3));
        assert!(has(2, 2, 3, 1));
        assert!(has(3, 1, 2, 1));
        assert!(has(11, 1, 1, 1));
        assert!(!has(2, 1, 3, 1));
        assert!(has(3, 1, 1, 2));
        assert!(types.iter().all(|t| t.order() <= 12));
    }
}
