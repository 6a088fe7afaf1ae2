//! JSON shapes. Field elements are coefficient arrays over `F_p`, constant
//! term first; integers that may exceed `2^53` are written as decimal strings.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use restrained_algebra::bounds::{BranchKind, CoverSpec, FTildeTerm, ImmobilityDescriptor, IntBound, WildPoint};
use restrained_algebra::gnd::GroupElement;
use restrained_algebra::linpoly::{LinearizedPoly, Subspace};
use restrained_algebra::multipoly::MultiPoly;
use restrained_algebra::series::{MobiusMap, TruncSeries};
use restrained_algebra::{Fe, FieldTower};

const SAFE_INTEGER: u128 = 1 << 53;

pub fn num(v: u128) -> Value {
    if v < SAFE_INTEGER {
        json!(v as u64)
    } else {
        json!(v.to_string())
    }
}

pub fn element(t: &FieldTower, x: Fe) -> Value {
    json!(t.coords(x))
}

pub fn elements(t: &FieldTower, xs: &[Fe]) -> Value {
    Value::Array(xs.iter().map(|&x| element(t, x)).collect())
}

pub fn tower(t: &FieldTower) -> Value {
    let base = restrained_algebra::ff::make_tower(t.p() as u64, t.s(), 1, None).expect("F_q of an existing tower");
    json!({
        "p": t.p(),
        "s": t.s(),
        "m": t.m(),
        "n": t.n(),
        "mid_poly": t.mid_poly(),
        "top_poly": t.top_poly().iter().map(|&c| element(&base, c)).collect::<Vec<_>>(),
    })
}

pub fn linpoly(t: &FieldTower, p: &LinearizedPoly<Fe>) -> Value {
    json!({ "q": t.q(), "coeffs": elements(t, p.coeffs()) })
}

pub fn subspace(t: &FieldTower, v: &Subspace) -> Value {
    json!({ "basis": elements(t, v.basis()) })
}

pub fn multipoly(t: &FieldTower, f: &MultiPoly) -> Value {
    Value::Array(f.terms().map(|(m, &c)| json!({ "exp": m.exps(), "coeff": element(t, c) })).collect())
}

pub fn group_element(t: &FieldTower, g: &GroupElement) -> Value {
    json!({ "sigma": elements(t, &g.sigma), "a": g.a })
}

pub fn mobius(t: &FieldTower, m: &MobiusMap) -> Value {
    json!({ "a": element(t, m.a), "b": element(t, m.b), "c": element(t, m.c), "e": element(t, m.e) })
}

pub fn series(t: &FieldTower, f: &TruncSeries) -> Value {
    let v = f.residual_valuation();
    let coeffs: Vec<Value> = (v..f.prec()).map(|k| element(t, f.coeff(k))).collect();
    json!({ "valuation": v, "precision": f.prec(), "coeffs": coeffs })
}

pub fn int_bound(b: &IntBound) -> Value {
    json!({ "value": num(b.value), "exact": b.exact })
}

pub fn f_tilde_term(term: FTildeTerm) -> &'static str {
    match term {
        FTildeTerm::Hurwitz => "84(g-1)",
        FTildeTerm::Second => "2sqrt(g)(sqrt(g)-1)^2",
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BranchJson {
    Tame { e: u64 },
    Restrained { n: u64, d: u32, q: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub base_genus: u64,
    pub group_order: u64,
    pub branch_points: Vec<BranchJson>,
}

impl From<&CoverJson> for CoverSpec {
    fn from(c: &CoverJson) -> Self {
        CoverSpec {
            base_genus: c.base_genus,
            group_order: c.group_order,
            branch_points: c
                .branch_points
                .iter()
                .map(|b| match *b {
                    BranchJson::Tame { e } => BranchKind::Tame { e },
                    BranchJson::Restrained { n, d, q } => BranchKind::Restrained { n, d, q },
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WildPointJson {
    pub n_x: u64,
    pub s_x: u32,
    pub t_x: u32,
}

/// Every field is optional so that incomplete descriptors reach the domain
/// check instead of failing to parse.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CurveJson {
    pub p: Option<u64>,
    pub restrained: Option<bool>,
    pub quotient_genus: Option<u64>,
    pub branch_indices: Option<Vec<u64>>,
    pub wild_points: Option<Vec<WildPointJson>>,
}

impl From<&CurveJson> for ImmobilityDescriptor {
    fn from(c: &CurveJson) -> Self {
        ImmobilityDescriptor {
            p: c.p,
            restrained: c.restrained,
            quotient_genus: c.quotient_genus,
            branch_indices: c.branch_indices.clone(),
            wild_points: c
                .wild_points
                .as_ref()
                .map(|w| w.iter().map(|w| WildPoint { n_x: w.n_x, s_x: w.s_x, t_x: w.t_x }).collect()),
        }
    }
}
