use std::sync::Arc;

use serde_json::{json, Value};

use restrained_algebra::arith::prime_power;
use restrained_algebra::bounds::{
    bound_report, component_bound, f_tilde_crossover, is_immobile, nakajima_bound, nodal_bound, rhz_genus, BoundReport,
    CoverSpec, ImmobilityDescriptor,
};
use restrained_algebra::degeneration::{
    check_phi_roundtrip, equivariance_check, fiber_at_zero, specialize, ComponentKind, Family,
};
use restrained_algebra::ff::make_tower;
use restrained_algebra::gnd::GroupSpec;
use restrained_algebra::invariants::{base_tower, dickson_invariants};
use restrained_algebra::restrained::{canonical_action, classify_all, omega_invariant, ramification_filtration};
use restrained_algebra::{Error, Fe, FieldTower, Result};

use crate::checks;
use crate::format::{self, num, CoverJson, CurveJson};

/// Largest group whose element table is printed.
pub const MAX_TABLE: u64 = 10_000;

fn split_q(q: u64) -> Result<(u64, u32)> {
    prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))
}

fn packed(t: &FieldTower, k: u64) -> Result<Fe> {
    t.element(k)
}

pub fn dickson(q: u64, d: usize) -> Result<Value> {
    let t = base_tower(q)?;
    let ts = dickson_invariants(q, d)?;
    Ok(json!({
        "q": q,
        "d": d,
        "invariants": ts.iter().map(|f| format::multipoly(&t, f)).collect::<Vec<_>>(),
    }))
}

pub fn classify(p: u64, s: u32, d: u32, m: u32) -> Result<Value> {
    let c = classify_all(p, s, d, m)?;
    let t = make_tower(p, s, m, None)?;
    Ok(json!({
        "p": p,
        "s": s,
        "d": d,
        "m": m,
        "subspaces": num(c.subspace_count),
        "classes": c.classes.len(),
        "representatives": c.classes.iter().map(|w| format::elements(&t, &w.elements)).collect::<Vec<_>>(),
    }))
}

pub struct CanonicalArgs {
    pub n: u64,
    pub p: u64,
    pub s: u32,
    pub d: usize,
    pub m: Option<u32>,
    /// Packed indices of `θ(e_1), …, θ(e_d)`; defaults to `1, Y, …, Y^{d−1}`.
    pub theta: Option<Vec<u64>>,
    pub precision: Option<i64>,
    pub series: bool,
}

pub fn canonical_form(a: &CanonicalArgs) -> Result<Value> {
    let m = a.m.unwrap_or(a.d.max(1) as u32);
    let spec = GroupSpec::new(Arc::new(make_tower(a.p, a.s, m, Some(a.n))?), a.d)?;
    if spec.order() > MAX_TABLE {
        return Err(Error::TooLarge(format!("|G| = {} exceeds {MAX_TABLE}", spec.order())));
    }
    let t = spec.tower();
    let theta: Vec<Fe> = match &a.theta {
        Some(ks) => ks.iter().map(|&k| packed(t, k)).collect::<Result<_>>()?,
        None => (0..a.d as u32).map(|i| packed(t, t.q().pow(i))).collect::<Result<_>>()?,
    };
    let precision = a.precision.unwrap_or(4 * spec.order() as i64);
    let act = canonical_action(spec.clone(), theta.clone(), precision)?;
    let mut table = Vec::new();
    for g in spec.elements()? {
        let mut row = json!({ "element": format::group_element(t, &g), "mobius": format::mobius(t, &act.mobius(&g)) });
        if a.series {
            row["series"] = format::series(t, &act.series(&g)?);
        }
        table.push(row);
    }
    Ok(json!({
        "tower": format::tower(t),
        "n": spec.n(),
        "d": spec.d(),
        "q": spec.q(),
        "order": spec.order(),
        "precision": precision,
        "theta": format::elements(t, &theta),
        "omega": format::elements(t, &omega_invariant(t, &theta)?.elements),
        "filtration": ramification_filtration(&act)?,
        "elements": table,
    }))
}

pub struct DegenerateArgs {
    pub q: u64,
    pub n: u64,
    pub d: usize,
    pub m: u32,
    /// Packed indices of `s_1, …, s_{d−1}` in `F_{q^m}`.
    pub s: Vec<u64>,
    pub t: Option<u64>,
    pub fiber_zero: bool,
    pub precision: Option<i64>,
}

pub fn degenerate(a: &DegenerateArgs) -> Result<Value> {
    let (p, s) = split_q(a.q)?;
    let spec = GroupSpec::new(Arc::new(make_tower(p, s, a.m, Some(a.n))?), a.d)?;
    let base = spec.tower();
    let sv: Vec<Fe> = a.s.iter().map(|&k| packed(base, k)).collect::<Result<_>>()?;
    let precision = a.precision.unwrap_or(4 * spec.order() as i64);
    let family = Family::new(spec.clone(), sv, precision)?;
    let tw = family.tower();
    if a.fiber_zero {
        let f = fiber_at_zero(&family)?;
        let components: Vec<Value> = f
            .components
            .iter()
            .map(|c| {
                let (kind, at) = match c.kind {
                    ComponentKind::Vertical => ("vertical", Value::Null),
                    ComponentKind::Horizontal { c } => ("horizontal", format::element(tw, c)),
                };
                json!({ "kind": kind, "w": at, "type": c.restrained_type })
            })
            .collect();
        let i = &f.inertia;
        return Ok(json!({
            "tower": format::tower(tw),
            "widened": family.widened(),
            "kernel": format::subspace(tw, family.kernel()),
            "components": components,
            "intersections": format::elements(tw, &f.intersections),
            "normal_crossings": f.normal_crossings,
            "branch_filtration": f.branch_filtration,
            "branch_q_invariant": f.branch_q_invariant,
            "inertia": {
                "claimed_order": i.claimed_order,
                "alternative_order": i.alternative_order,
                "vertical_pointwise": i.vertical_pointwise,
                "point_zero_stabilizer": i.point_zero_stabilizer,
                "h_double_orbit": i.h_double_orbit,
                "infinity_fixed": i.infinity_fixed,
                "only_infinity_fixed": i.only_infinity_fixed,
                "horizontal_inertia_trivial": i.horizontal_inertia_trivial,
                "matches_claim": i.matches_claim(),
            },
        }));
    }
    let Some(tk) = a.t else {
        return Err(Error::InvalidInput("either --t or --fiber-zero is required".into()));
    };
    // t is read in the family's field, which contains F_{q^m}
    let t = base.embedding_into(tw)?.apply(tw, packed(base, tk)?);
    let sp = specialize(&family, t)?;
    let st = sp.tower();
    let phi = check_phi_roundtrip(&sp)?;
    let eq = equivariance_check(&sp)?;
    Ok(json!({
        "tower": format::tower(st),
        "widened": sp.widened,
        "t": format::element(st, sp.t),
        "s": format::elements(st, &sp.s),
        "theta": format::elements(st, sp.action.theta()),
        "v_prime": format::elements(st, &sp.split.v_prime),
        "composed": format::linpoly(st, &sp.composed),
        "filtration": ramification_filtration(&sp.action)?,
        "phi": {
            "exponent": phi.exponent,
            "relation_residual": phi.relation_residual,
            "candidates": phi.candidates.iter().map(|c| json!({
                "exponent": c.exponent,
                "forward_residual": c.forward_residual,
                "backward_residual": c.backward_residual,
                "verified": c.verified,
            })).collect::<Vec<_>>(),
        },
        "equivariance": {
            "gamma_scales_w": eq.gamma_scales_w,
            "entries": eq.entries.iter().map(|e| json!({
                "element": format::group_element(st, &e.element),
                "coordinate_residual": e.coordinate_residual,
                "xtilde_residual": e.xtilde_residual,
            })).collect::<Vec<_>>(),
        },
    }))
}

fn report_json(r: &BoundReport) -> Value {
    json!({
        "genus": r.genus,
        "hurwitz": num(r.hurwitz),
        "nakajima": num(r.nakajima),
        "stichtenoth": format::int_bound(&r.stichtenoth),
        "f_tilde": {
            "term": format::f_tilde_term(r.f_tilde.term),
            "value": num(r.f_tilde.bound.value),
            "exact": r.f_tilde.bound.exact,
        },
    })
}

pub struct BoundsArgs {
    pub g: u64,
    pub table: Option<u64>,
    pub delta: Option<u64>,
    pub g_tilde: Option<u64>,
}

pub fn bounds(a: &BoundsArgs) -> Result<Value> {
    let mut out = report_json(&bound_report(a.g)?);
    out["crossover"] = json!(f_tilde_crossover());
    if let Some(delta) = a.delta {
        out["nodal_bound"] = num(nodal_bound(a.g, delta)?);
    }
    if let Some(gt) = a.g_tilde {
        let f = |g: u64| nakajima_bound(g).unwrap_or(u128::MAX);
        out["component_bound"] = json!({ "g_tilde": gt, "f": "nakajima", "value": num(component_bound(a.g, gt, f)?) });
    }
    if let Some(max) = a.table {
        let rows = (2..=max).map(|g| bound_report(g).map(|r| report_json(&r))).collect::<Result<Vec<_>>>()?;
        out["table"] = Value::Array(rows);
    }
    Ok(out)
}

pub fn rhz(cover: &CoverJson) -> Result<Value> {
    let g = rhz_genus(&CoverSpec::from(cover))?;
    Ok(json!({ "genus": g }))
}

pub fn immobile(curve: &CurveJson) -> Result<Value> {
    let r = is_immobile(&ImmobilityDescriptor::from(curve))?;
    Ok(json!({ "immobile": r.immobile, "conditions": r.conditions, "third_index": r.third_index }))
}

/// The report and whether every criterion passed.
pub fn selftest(seed: u64) -> (Value, bool) {
    let results = checks::all(seed);
    let passed = results.iter().filter(|c| c.passed).count();
    let failed = results.len() - passed;
    let report = json!({
        "seed": seed,
        "criteria": results,
        "passed": passed,
        "failed": failed,
    });
    (report, failed == 0)
}
