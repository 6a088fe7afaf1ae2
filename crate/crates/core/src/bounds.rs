//! Riemann–Hurwitz–Zeuthen genus, automorphism bounds and the immobility
//! predicate.
//!
//! Everything is integer arithmetic; square roots are compared by squaring.

use alloc::{format, vec::Vec};

use crate::arith::{gcd, is_square, isqrt, isqrt_ceil, prime_power};
use crate::error::{Error, Result};

/// Ramification above one branch point of the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchKind {
    /// Tame, cyclic inertia of order `e`.
    Tame { e: u64 },
    /// Inertia `G_{n,d}` over `F_q`, with `G_0 = G_x`, `G_1 = H`, `G_2 = 0`.
    Restrained { n: u64, d: u32, q: u64 },
}

impl BranchKind {
    /// `|G_x|`.
    pub fn inertia_order(&self) -> Result<u64> {
        match *self {
            BranchKind::Tame { e } => Ok(e),
            BranchKind::Restrained { n, d, q } => crate::arith::checked_pow(q, d)
                .and_then(|h| h.checked_mul(n))
                .ok_or_else(|| Error::TooLarge(format!("n q^d for n={n}, q={q}, d={d}"))),
        }
    }

    /// Different exponent `d_x`.
    pub fn different_exponent(&self) -> Result<u64> {
        match *self {
            BranchKind::Tame { e } => Ok(e - 1),
            BranchKind::Restrained { q, d, .. } => {
                let g0 = self.inertia_order()?;
                Ok((g0 - 1) + (q.pow(d) - 1))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    pub base_genus: u64,
    pub group_order: u64,
    pub branch_points: Vec<BranchKind>,
}

impl CoverSpec {
    fn validate(&self) -> Result<()> {
        if self.group_order == 0 {
            return Err(Error::InvalidInput("group order must be positive".into()));
        }
        for b in &self.branch_points {
            match *b {
                BranchKind::Tame { e: 0 } => {
                    return Err(Error::InvalidInput("ramification index 0".into()));
                }
                BranchKind::Restrained { n, q, .. } => {
                    let (p, _) =
                        prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
                    if n == 0 || gcd(n, p) != 1 {
                        return Err(Error::NotCoprime { n, p });
                    }
                }
                _ => {}
            }
            let gx = b.inertia_order()?;
            if !self.group_order.is_multiple_of(gx) {
                return Err(Error::InvalidInput(format!("inertia order {gx} does not divide {}", self.group_order)));
            }
        }
        Ok(())
    }
}

/// `g_X` from `2g_X − 2 = |G|(2g_Y − 2) + Σ (|G|/|G_x|) d_x`.
pub fn rhz_genus(cover: &CoverSpec) -> Result<u64> {
    cover.validate()?;
    let order = cover.group_order as i128;
    let mut total = order * (2 * cover.base_genus as i128 - 2);
    for b in &cover.branch_points {
        let points = order / b.inertia_order()? as i128;
        total += points * b.different_exponent()? as i128;
    }
    if total % 2 != 0 || total < -2 {
        return Err(Error::NonIntegralGenus(total));
    }
    Ok(((total + 2) / 2) as u64)
}

fn check_genus(g: u64) -> Result<u128> {
    if g < 2 {
        return Err(Error::BadGenus(g));
    }
    Ok(g as u128)
}

/// `84(g − 1)`.
pub fn hurwitz_bound(g: u64) -> Result<u128> {
    Ok(84 * (check_genus(g)? - 1))
}

/// `84 g (g − 1)`.
pub fn nakajima_bound(g: u64) -> Result<u128> {
    let g = check_genus(g)?;
    Ok(84 * g * (g - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntBound {
    pub value: u128,
    /// `false` when an irrational term was rounded up.
    pub exact: bool,
}

/// `16g⁴ + 56g³ + 32g² + 4g + 4√(1+8g)(4g³ + 4g² + g)`, rounded up when
/// `1 + 8g` is not a square.
pub fn stichtenoth_bound(g: u64) -> Result<IntBound> {
    let g = check_genus(g)?;
    let poly = 16 * g.pow(4) + 56 * g.pow(3) + 32 * g * g + 4 * g;
    let k = 4 * g.pow(3) + 4 * g * g + g;
    let disc = 1 + 8 * g;
    if is_square(disc) {
        Ok(IntBound { value: poly + 4 * k * isqrt(disc), exact: true })
    } else {
        Ok(IntBound { value: poly + isqrt_ceil(16 * k * k * disc), exact: false })
    }
}

/// Which term of `f̃(g) = max{84(g−1), 2√g(√g−1)²}` is larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FTildeTerm {
    Hurwitz,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FTilde {
    pub term: FTildeTerm,
    /// The maximum, rounded up if it is irrational.
    pub bound: IntBound,
}

/// `2√g(√g−1)² = (2g+2)√g − 4g` exceeds `84(g−1)` iff `(2g+2)²g > (88g−84)²`.
fn second_term_dominates(g: u128) -> bool {
    (2 * g + 2).pow(2) * g > (88 * g - 84).pow(2)
}

pub fn f_tilde(g: u64) -> Result<FTilde> {
    let g = check_genus(g)?;
    if !second_term_dominates(g) {
        return Ok(FTilde { term: FTildeTerm::Hurwitz, bound: IntBound { value: 84 * (g - 1), exact: true } });
    }
    let sq = (2 * g + 2).pow(2) * g;
    let exact = is_square(g as u128);
    let value = if exact { (2 * g + 2) * isqrt(g) - 4 * g } else { isqrt_ceil(sq) - 4 * g };
    Ok(FTilde { term: FTildeTerm::Second, bound: IntBound { value, exact } })
}

/// Least `g ≥ 2` where the second term of `f̃` is strictly larger.
pub fn f_tilde_crossover() -> u64 {
    (2u64..).find(|&g| second_term_dominates(g as u128)).expect("the second term grows like g^{3/2}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub genus: u64,
    pub hurwitz: u128,
    pub nakajima: u128,
    pub stichtenoth: IntBound,
    pub f_tilde: FTilde,
}

pub fn bound_report(g: u64) -> Result<BoundReport> {
    Ok(BoundReport {
        genus: g,
        hurwitz: hurwitz_bound(g)?,
        nakajima: nakajima_bound(g)?,
        stichtenoth: stichtenoth_bound(g)?,
        f_tilde: f_tilde(g)?,
    })
}

/// Local data at a wildly ramified point: `n_x`, and `p^{s_x}`, `p^{t_x}`
/// the orders of the `p`-part of inertia and of `G_1`'s field of definition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WildPoint {
    pub n_x: u64,
    pub s_x: u32,
    pub t_x: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImmobilityDescriptor {
    pub p: Option<u64>,
    pub restrained: Option<bool>,
    pub quotient_genus: Option<u64>,
    /// Ramification index over each branch point of the quotient.
    pub branch_indices: Option<Vec<u64>>,
    pub wild_points: Option<Vec<WildPoint>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImmobilityReport {
    pub immobile: bool,
    /// Conditions (i)–(v) in order.
    pub conditions: [bool; 5],
    /// Third index of a `(2, 2, ·)` profile.
    pub third_index: Option<u64>,
}

pub fn is_immobile(desc: &ImmobilityDescriptor) -> Result<ImmobilityReport> {
    let missing = |what: &str| Error::IncompleteDescriptor(what.into());
    let p = desc.p.ok_or_else(|| missing("p"))?;
    let restrained = desc.restrained.ok_or_else(|| missing("restrained flag"))?;
    let gy = desc.quotient_genus.ok_or_else(|| missing("quotient genus"))?;
    let idx = desc.branch_indices.as_ref().ok_or_else(|| missing("branch profile"))?;
    let wild = desc.wild_points.as_ref().ok_or_else(|| missing("wild point data"))?;

    let mut third_index = None;
    let profile = match idx.len() {
        2 => true,
        3 if p != 2 => {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            let twos = sorted.iter().filter(|&&e| e == 2).count();
            if twos >= 2 {
                let pos = idx.iter().position(|&e| e == 2).unwrap();
                let pos2 = idx.iter().skip(pos + 1).position(|&e| e == 2).unwrap() + pos + 1;
                third_index = (0..3).find(|&i| i != pos && i != pos2).map(|i| idx[i]);
            }
            twos >= 2
        }
        _ => false,
    };
    let conditions =
        [restrained, gy == 0, profile, wild.iter().any(|w| w.n_x != 1), wild.iter().all(|w| w.s_x == w.t_x)];
    Ok(ImmobilityReport { immobile: conditions.iter().all(|&c| c), conditions, third_index })
}

/// Bound from `δ` nodes: `min(24δ, 72(g−1))`, using `δ ≤ 3g − 3`.
pub fn nodal_bound(g: u64, delta: u64) -> Result<u128> {
    let g = check_genus(g)?;
    let delta = delta as u128;
    if delta < 1 || delta > 3 * g - 3 {
        return Err(Error::HypothesisViolated(format!("need 1 ≤ δ ≤ 3g − 3, got δ = {delta}")));
    }
    Ok((24 * delta).min(72 * (g - 1)))
}

/// Bound through components of genus `g̃`: `⌊(g−1) f(g̃)/(g̃−1)⌋`, after checking that `f(h)/(h−1)` is
/// nondecreasing on `[g̃, g]`.
pub fn component_bound(g: u64, g_tilde: u64, f: impl Fn(u64) -> u128) -> Result<u128> {
    let gt = check_genus(g_tilde)?;
    if g < g_tilde {
        return Err(Error::HypothesisViolated(format!("g = {g} < g̃ = {g_tilde}")));
    }
    let mut prev = f(g_tilde);
    for h in g_tilde..g {
        let next = f(h + 1);
        // f(h+1)/h ≥ f(h)/(h−1)
        if next * (h as u128 - 1) < prev * h as u128 {
            return Err(Error::HypothesisViolated(format!("f(g)/(g−1) decreases at g = {h}")));
        }
        prev = next;
    }
    Ok((g as u128 - 1) * f(g_tilde) / (gt - 1))
}

/// `g − 1 = n_{g̃}(g̃ − 1) − n_0 + δ` for a nodal curve whose components have
/// genus `g̃` (`n_tilde` of them) or `0` (`n_0` of them).
pub fn nodal_genus_check(n_tilde: u64, g_tilde: u64, n_0: u64, delta: u64) -> Result<u64> {
    if n_0 > delta {
        return Err(Error::Inconsistent(format!("{n_0} rational components but only {delta} nodes")));
    }
    let g = n_tilde as i128 * (g_tilde as i128 - 1) - n_0 as i128 + delta as i128 + 1;
    u64::try_from(g).map_err(|_| Error::Inconsistent(format!("negative genus {g}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn katz_gabber_and_classical() {
        let kg = CoverSpec {
            base_genus: 0,
            group_order: 12,
            branch_points: alloc::vec![BranchKind::Tame { e: 3 }, BranchKind::Restrained { n: 3, d: 1, q: 4 }],
        };
        assert_eq!(rhz_genus(&kg), Ok(0));
        let hyper =
            CoverSpec { base_genus: 0, group_order: 2, branch_points: alloc::vec![BranchKind::Tame { e: 2 }; 4] };
        assert_eq!(rhz_genus(&hyper), Ok(1));
        let odd = CoverSpec { base_genus: 0, group_order: 2, branch_points: alloc::vec![BranchKind::Tame { e: 2 }; 3] };
        assert_eq!(rhz_genus(&odd), Err(Error::NonIntegralGenus(-1)));
    }

    #[test]
    fn bound_values() {
        assert_eq!(nakajima_bound(2), Ok(168));
        assert_eq!(nakajima_bound(3), Ok(504));
        assert_eq!(stichtenoth_bound(3), Ok(IntBound { value: 6048, exact: true }));
        assert!(!stichtenoth_bound(2).unwrap().exact);
        assert_eq!(f_tilde(2).unwrap().bound.value, 84);
        assert_eq!(f_tilde(4).unwrap().bound.value, 252);
        assert_eq!(nakajima_bound(1), Err(Error::BadGenus(1)));
    }

    #[test]
    fn nodal_and_component_bounds() {
        assert_eq!(nodal_bound(5, 12), Ok(288));
        let f = |g: u64| nakajima_bound(g).unwrap();
        assert_eq!(component_bound(10, 2, f), Ok(1512));
        assert_eq!(component_bound(7, 7, f), Ok(f(7)));
        assert_eq!(nodal_genus_check(2, 3, 1, 3), Ok(7));
        assert_eq!(nodal_genus_check(1, 5, 0, 0), Ok(5));
        assert!(matches!(nodal_genus_check(1, 5, 2, 1), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn immobility() {
        let mut desc = ImmobilityDescriptor {
            p: Some(2),
            restrained: Some(true),
            quotient_genus: Some(0),
            branch_indices: Some(alloc::vec![3, 12]),
            wild_points: Some(alloc::vec![WildPoint { n_x: 3, s_x: 2, t_x: 2 }]),
        };
        assert!(is_immobile(&desc).unwrap().immobile);
        desc.wild_points = Some(alloc::vec![WildPoint { n_x: 3, s_x: 1, t_x: 2 }]);
        assert!(!is_immobile(&desc).unwrap().immobile);
        desc.wild_points = Some(alloc::vec![WildPoint { n_x: 3, s_x: 2, t_x: 2 }]);
        desc.quotient_genus = Some(1);
        assert!(!is_immobile(&desc).unwrap().immobile);
        desc.quotient_genus = Some(0);
        desc.p = Some(3);
        desc.branch_indices = Some(alloc::vec![2, 9, 2]);
        let r = is_immobile(&desc).unwrap();
        assert!(r.immobile);
        assert_eq!(r.third_index, Some(9));
        desc.restrained = None;
        assert!(matches!(is_immobile(&desc), Err(Error::IncompleteDescriptor(_))));
    }
}
