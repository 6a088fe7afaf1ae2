//! The groups `G_{n,d} = F_q^d ⋊ Z/n`, with `Z/n` acting through `ζ`.
//!
//! `(σ, a)·(τ, b) = (σ + ζ^a τ, a + b)`.

use alloc::{collections::BTreeSet, format, sync::Arc, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::ff::{Fe, FieldTower};
use crate::matrix::{GlMatrix, Matrix};

/// Largest group order handled by full enumeration.
pub const MAX_ENUMERATION: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub sigma: Vec<Fe>,
    pub a: u64,
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    tower: Arc<FieldTower>,
    d: usize,
    n: u64,
    zeta: Fe,
}

impl GroupSpec {
    /// `G_{n,d}` over a tower carrying a primitive `n`-th root of unity.
    /// `d = 0` gives the tame cyclic group `Z/n`.
    pub fn new(tower: Arc<FieldTower>, d: usize) -> Result<GroupSpec> {
        let (Some(n), Some(zeta)) = (tower.n(), tower.zeta()) else {
            return Err(Error::InvalidInput("the tower has no root of unity attached".into()));
        };
        Ok(GroupSpec { tower, d, n, zeta })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }
    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.tower.q()
    }
    pub fn zeta(&self) -> Fe {
        self.zeta
    }
    /// `|H| = q^d`.
    pub fn h_order(&self) -> u64 {
        self.q().saturating_pow(self.d as u32)
    }
    /// `n · q^d`.
    pub fn order(&self) -> u64 {
        self.n.saturating_mul(self.h_order())
    }

    /// Same `(p, s, n, d)` on the same field.
    pub fn same_type(&self, other: &GroupSpec) -> bool {
        self.d == other.d && self.n == other.n && self.tower.same_field(&other.tower)
    }

    pub fn zeta_pow(&self, a: i64) -> Fe {
        self.tower.pow(self.zeta, a.rem_euclid(self.n as i64) as u64)
    }

    pub fn element(&self, sigma: Vec<Fe>, a: u64) -> Result<GroupElement> {
        if sigma.len() != self.d || sigma.iter().any(|&x| !self.tower.is_base(x)) {
            return Err(Error::InvalidInput(format!("σ must be {} elements of F_{}", self.d, self.q())));
        }
        Ok(GroupElement { sigma, a: a % self.n })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { sigma: vec![Fe::ZERO; self.d], a: 0 }
    }

    /// `γ = (0, 1)`.
    pub fn gamma(&self) -> GroupElement {
        GroupElement { sigma: vec![Fe::ZERO; self.d], a: 1 % self.n }
    }

    /// `(e_i, 0)`.
    pub fn basis_translation(&self, i: usize) -> GroupElement {
        let mut sigma = vec![Fe::ZERO; self.d];
        sigma[i] = Fe::ONE;
        GroupElement { sigma, a: 0 }
    }

    /// `γ` together with the `d` basis translations.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut g = vec![self.gamma()];
        g.extend((0..self.d).map(|i| self.basis_translation(i)));
        g
    }

    fn scale_vec(&self, c: Fe, v: &[Fe]) -> Vec<Fe> {
        v.iter().map(|&x| self.tower.mul(c, x)).collect()
    }

    fn add_vec(&self, u: &[Fe], v: &[Fe]) -> Vec<Fe> {
        u.iter().zip(v).map(|(&x, &y)| self.tower.add(x, y)).collect()
    }

    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let twisted = self.scale_vec(self.zeta_pow(g.a as i64), &h.sigma);
        GroupElement { sigma: self.add_vec(&g.sigma, &twisted), a: (g.a + h.a) % self.n }
    }

    /// `(σ, a)^{-1} = (−ζ^{−a} σ, −a)`.
    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        let c = self.tower.neg(self.zeta_pow(-(g.a as i64)));
        GroupElement { sigma: self.scale_vec(c, &g.sigma), a: (self.n - g.a) % self.n }
    }

    pub fn pow(&self, g: &GroupElement, mut k: u64) -> GroupElement {
        let mut acc = self.identity();
        let mut b = g.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        acc
    }

    pub fn conjugate(&self, by: &GroupElement, g: &GroupElement) -> GroupElement {
        self.mul(&self.mul(by, g), &self.inv(by))
    }

    pub fn order_of(&self, g: &GroupElement) -> u64 {
        let id = self.identity();
        let mut x = g.clone();
        let mut k = 1;
        while x != id {
            x = self.mul(&x, g);
            k += 1;
        }
        k
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        g.a == 0 && g.sigma.iter().all(|x| x.is_zero())
    }

    /// `a · q^d + Σ σ_i q^i`.
    pub fn index_of(&self, g: &GroupElement) -> u64 {
        let q = self.q();
        g.sigma.iter().rev().fold(0, |acc, x| acc * q + x.index() as u64) + g.a * self.h_order()
    }

    pub fn element_at(&self, idx: u64) -> GroupElement {
        let q = self.q();
        let mut k = idx % self.h_order();
        let sigma = (0..self.d)
            .map(|_| {
                let v = Fe::raw((k % q) as u32);
                k /= q;
                v
            })
            .collect();
        GroupElement { sigma, a: idx / self.h_order() }
    }

    fn guard(&self, limit: u64) -> Result<()> {
        if self.order() > limit {
            return Err(Error::TooLarge(format!("|G| = {} exceeds {limit}", self.order())));
        }
        Ok(())
    }

    /// All elements in index order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        self.guard(MAX_ENUMERATION)?;
        Ok((0..self.order()).map(|i| self.element_at(i)).collect())
    }

    /// Elements of `H = F_q^d`, in index order.
    pub fn h_elements(&self) -> Result<Vec<GroupElement>> {
        self.guard(MAX_ENUMERATION)?;
        Ok((0..self.h_order()).map(|i| self.element_at(i)).collect())
    }

    /// The class of `g` in `G/H ≅ Z/n`.
    pub fn quotient_class(&self, g: &GroupElement) -> u64 {
        g.a
    }
}

/// The `p`-Sylow subgroup `H = F_q^d × {0}`.
///
/// For groups of order at most 500 uniqueness is checked: the elements of
/// `p`-power order are counted and must be exactly the `q^d` elements of `H`.
pub fn sylow_p(spec: &GroupSpec) -> Result<Vec<GroupElement>> {
    spec.guard(100_000)?;
    let h = spec.h_elements()?;
    if spec.order() <= 500 {
        let p = spec.tower().p() as u64;
        let is_p_power = |mut k: u64| {
            while k.is_multiple_of(p) {
                k /= p;
            }
            k == 1
        };
        let p_elems: Vec<GroupElement> =
            spec.elements()?.into_iter().filter(|g| is_p_power(spec.order_of(g))).collect();
        if p_elems.len() as u64 != spec.h_order() || p_elems.iter().any(|g| g.a != 0) {
            return Err(Error::VerificationFailed("p-elements do not form H".into()));
        }
    }
    Ok(h)
}

/// A complement `T ≅ Z/n` of `H`, with the generator lying over `1 ∈ Z/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPart {
    pub generator: GroupElement,
    /// Sorted by index.
    pub elements: Vec<GroupElement>,
}

/// All cyclic subgroups generated by elements of order `n`; there are `q^d` of them.
pub fn torus_parts(spec: &GroupSpec) -> Result<Vec<TorusPart>> {
    if spec.n() < 2 {
        return Err(Error::InvalidInput("torus parts need n > 1".into()));
    }
    spec.guard(10_000)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in spec.elements()? {
        if g.a != 1 || spec.order_of(&g) != spec.n() {
            continue;
        }
        let mut elems: Vec<GroupElement> = (0..spec.n()).map(|k| spec.pow(&g, k)).collect();
        elems.sort_by_key(|x| spec.index_of(x));
        let key: Vec<u64> = elems.iter().map(|x| spec.index_of(x)).collect();
        if seen.insert(key) {
            out.push(TorusPart { generator: g, elements: elems });
        }
    }
    if out.len() as u64 != spec.h_order() {
        return Err(Error::VerificationFailed(format!("{} torus parts, expected q^d", out.len())));
    }
    Ok(out)
}

/// `σ ∈ H` with `σ T σ^{-1} = T'`.
///
/// With `γ_i = (τ_i, 1)` the generators, `σ = (1 − ζ)^{-1} (τ' − τ)`.
pub fn conjugating_element(spec: &GroupSpec, t0: &TorusPart, t1: &TorusPart) -> Result<GroupElement> {
    let t = spec.tower();
    let sigma = if spec.n() == 1 {
        vec![Fe::ZERO; spec.d()]
    } else {
        let c = t.inv(t.sub(Fe::ONE, spec.zeta()))?;
        t1.generator.sigma.iter().zip(&t0.generator.sigma).map(|(&a, &b)| t.mul(c, t.sub(a, b))).collect()
    };
    let g = GroupElement { sigma, a: 0 };
    let mut image: Vec<GroupElement> = t0.elements.iter().map(|x| spec.conjugate(&g, x)).collect();
    image.sort_by_key(|x| spec.index_of(x));
    if image != t1.elements {
        return Err(Error::NotConjugate);
    }
    Ok(g)
}

/// `(σ, a) ↦ (hσ, a)` for `h ∈ GL_d(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    matrix: GlMatrix,
}

impl Automorphism {
    pub fn apply(&self, spec: &GroupSpec, g: &GroupElement) -> GroupElement {
        GroupElement { sigma: self.matrix.matrix().apply(spec.tower(), &g.sigma), a: g.a }
    }

    pub fn matrix(&self) -> &GlMatrix {
        &self.matrix
    }
}

/// Extends an automorphism of `H` to `G`; checked on all pairs when `|G| ≤ 500`.
pub fn extend_automorphism(spec: &GroupSpec, h: &Matrix) -> Result<Automorphism> {
    if h.rows() != spec.d() {
        return Err(Error::NotLinear);
    }
    let auto = Automorphism { matrix: GlMatrix::new(spec.tower(), h.clone())? };
    if spec.order() <= 500 {
        let all = spec.elements()?;
        for g in &all {
            for k in &all {
                let lhs = auto.apply(spec, &spec.mul(g, k));
                let rhs = spec.mul(&auto.apply(spec, g), &auto.apply(spec, k));
                if lhs != rhs {
                    return Err(Error::VerificationFailed("extension is not a homomorphism".into()));
                }
            }
        }
    }
    Ok(auto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_tower;

    fn spec(p: u64, s: u32, n: u64, d: usize) -> GroupSpec {
        GroupSpec::new(Arc::new(make_tower(p, s, 1, Some(n)).unwrap()), d).unwrap()
    }

    #[test]
    fn group_axioms_small() {
        for g in [spec(2, 2, 3, 1), spec(3, 1, 2, 2), spec(2, 1, 1, 2)] {
            let all = g.elements().unwrap();
            let id = g.identity();
            for x in &all {
                assert_eq!(g.mul(x, &g.inv(x)), id);
                for y in &all {
                    for z in all.iter().step_by(3) {
                        assert_eq!(g.mul(&g.mul(x, y), z), g.mul(x, &g.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn sylow_and_tori() {
        let g = spec(2, 2, 3, 1);
        assert_eq!(sylow_p(&g).unwrap().len(), 4);
        let tori = torus_parts(&g).unwrap();
        assert_eq!(tori.len(), 4);
        for a in &tori {
            for b in &tori {
                conjugating_element(&g, a, b).unwrap();
            }
        }
        let g = spec(5, 1, 4, 1);
        assert_eq!(torus_parts(&g).unwrap().len(), 5);
    }

    #[test]
    fn h_is_normal_with_cyclic_quotient() {
        let g = spec(3, 1, 2, 2);
        let h = sylow_p(&g).unwrap();
        for x in g.elements().unwrap() {
            for y in &h {
                assert_eq!(g.conjugate(&x, y).a, 0);
            }
        }
        let gamma = g.gamma();
        assert_eq!(g.quotient_class(&g.pow(&gamma, 2)), 0);
        assert_eq!(g.order_of(&gamma), 2);
    }

    #[test]
    fn automorphisms() {
        let g = spec(3, 1, 2, 2);
        let t = g.tower();
        let h = Matrix::from_rows(&[vec![Fe::ONE, Fe::ONE], vec![Fe::ZERO, t.from_int(2)]]).unwrap();
        extend_automorphism(&g, &h).unwrap();
        let sing = Matrix::from_rows(&[vec![Fe::ONE, Fe::ONE], vec![Fe::ONE, Fe::ONE]]).unwrap();
        assert_eq!(extend_automorphism(&g, &sing), Err(Error::NotLinear));
    }

    #[test]
    fn index_roundtrip() {
        let g = spec(2, 2, 3, 2);
        for i in 0..g.order() {
            assert_eq!(g.index_of(&g.element_at(i)), i);
        }
    }
}
