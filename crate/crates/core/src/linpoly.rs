//! Linearized polynomials `Σ a_i X^{q^i}` and their root subspaces.
//!
//! The coefficient ring is any [`Algebra`], so the same composition and
//! subspace-to-polynomial code runs over the field, over symbolic polynomial
//! rings and over truncated series.

use alloc::{format, vec, vec::Vec};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::ff::{Fe, FieldTower};
use crate::matrix::Matrix;
use crate::poly::UniPoly;

/// `Σ_{i=0}^{d} a_i X^{q^i}`. `coeffs[i] = a_i`; trailing zeros are trimmed,
/// the zero polynomial is stored as `[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + core::fmt::Debug> LinearizedPoly<E> {
    pub fn new<A: Algebra<Elem = E>>(alg: &A, mut coeffs: Vec<E>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| alg.is_zero(c)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(alg.zero());
        }
        LinearizedPoly { coeffs }
    }

    /// The identity `X`.
    pub fn identity<A: Algebra<Elem = E>>(alg: &A) -> Self {
        LinearizedPoly { coeffs: vec![alg.one()] }
    }

    /// `P*(a) = X + a_1 X^q + … + a_d X^{q^d}`.
    pub fn star<A: Algebra<Elem = E>>(alg: &A, a: &[E]) -> Self {
        let mut coeffs = vec![alg.one()];
        coeffs.extend_from_slice(a);
        Self::new(alg, coeffs)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn height(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff<A: Algebra<Elem = E>>(&self, alg: &A, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| alg.zero())
    }

    pub fn is_zero<A: Algebra<Elem = E>>(&self, alg: &A) -> bool {
        self.coeffs.iter().all(|c| alg.is_zero(c))
    }

    /// `a_0 ≠ 0` and `a_d ≠ 0`: the polynomial is separable with `q^d` roots
    /// over a large enough field.
    pub fn is_nondegenerate<A: Algebra<Elem = E>>(&self, alg: &A) -> bool {
        !alg.is_zero(&self.coeffs[0]) && !alg.is_zero(&self.coeffs[self.height()])
    }

    pub fn eval<A: Algebra<Elem = E>>(&self, alg: &A, x: &E) -> E {
        let mut acc = alg.zero();
        let mut xp = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = alg.frobenius_q(&xp, 1);
            }
            if !alg.is_zero(a) {
                acc = alg.add(&acc, &alg.mul(a, &xp));
            }
        }
        acc
    }

    /// `self ∘ other`: the coefficient of `X^{q^k}` is `Σ_{i+j=k} a_i b_j^{q^i}`.
    pub fn compose<A: Algebra<Elem = E>>(&self, alg: &A, other: &Self) -> Self {
        let mut out = vec![alg.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        let mut twisted = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|b| alg.frobenius_q(b, 1)).collect();
            }
            if alg.is_zero(a) {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                out[i + j] = alg.add(&out[i + j], &alg.mul(a, b));
            }
        }
        Self::new(alg, out)
    }

    pub fn add<A: Algebra<Elem = E>>(&self, alg: &A, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(alg, (0..n).map(|i| alg.add(&self.coeff(alg, i), &other.coeff(alg, i))).collect())
    }

    pub fn sub<A: Algebra<Elem = E>>(&self, alg: &A, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(alg, (0..n).map(|i| alg.sub(&self.coeff(alg, i), &other.coeff(alg, i))).collect())
    }

    pub fn equal<A: Algebra<Elem = E>>(&self, alg: &A, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| alg.equal(&self.coeff(alg, i), &other.coeff(alg, i)))
    }

    /// Ordinary dense form, `coeffs[q^i] = a_i`.
    pub fn expand<A: Algebra<Elem = E>>(&self, alg: &A) -> UniPoly<E> {
        let q = alg.tower().q() as usize;
        let deg = q.pow(self.height() as u32);
        let mut v = vec![alg.zero(); deg + 1];
        let mut e = 1usize;
        for a in &self.coeffs {
            v[e] = a.clone();
            e *= q;
        }
        UniPoly::new(alg, v)
    }
}

/// Monic linearized polynomial whose roots are the `F_q`-span of `basis`,
/// built one vector at a time: `P_i = (X^q − P_{i−1}(v_i)^{q−1} X) ∘ P_{i−1}`.
///
/// Requires `basis` to be `F_q`-independent; dependent input yields a polynomial
/// with a repeated factor.
pub fn from_basis<A: Algebra>(alg: &A, basis: &[A::Elem]) -> LinearizedPoly<A::Elem> {
    let q = alg.tower().q();
    let mut p = LinearizedPoly::identity(alg);
    for v in basis {
        let c = p.eval(alg, v);
        let step = LinearizedPoly::new(alg, vec![alg.neg(&alg.pow(&c, q - 1)), alg.one()]);
        p = step.compose(alg, &p);
    }
    p
}

/// Rank over `F_q` of elements of `F_{q^m}`.
pub fn fq_rank(t: &FieldTower, elems: &[Fe]) -> usize {
    if elems.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Fe>> = elems.iter().map(|&x| t.fq_coords(x)).collect();
    Matrix::from_rows(&rows).expect("rectangular").rank(t)
}

/// An `F_q`-subspace of `F_{q^m}` given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Vec<Fe>,
}

impl Subspace {
    pub fn new(t: &FieldTower, basis: Vec<Fe>) -> Result<Subspace> {
        if basis.iter().any(|&x| x.index() as u64 >= t.size()) {
            return Err(Error::InvalidInput("element outside the field".into()));
        }
        if fq_rank(t, &basis) != basis.len() {
            return Err(Error::NotASubspace(format!("{} vectors are F_q-dependent", basis.len())));
        }
        Ok(Subspace { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Fe] {
        &self.basis
    }

    /// All `q^d` elements. The `k`-th element has `F_q`-coordinates given by the
    /// base-`q` digits of `k`, first basis vector least significant.
    pub fn elements(&self, t: &FieldTower) -> Vec<Fe> {
        let q = t.q();
        let total = q.pow(self.basis.len() as u32);
        (0..total)
            .map(|mut k| {
                let mut acc = Fe::ZERO;
                for &b in &self.basis {
                    let c = Fe::raw((k % q) as u32);
                    k /= q;
                    acc = t.add(acc, t.mul(c, b));
                }
                acc
            })
            .collect()
    }

    pub fn sorted_elements(&self, t: &FieldTower) -> Vec<Fe> {
        let mut v = self.elements(t);
        v.sort_unstable();
        v
    }

    pub fn contains(&self, t: &FieldTower, x: Fe) -> bool {
        let mut v = self.basis.clone();
        v.push(x);
        fq_rank(t, &v) == self.basis.len()
    }

    pub fn is_contained_in(&self, t: &FieldTower, other: &Subspace) -> bool {
        self.basis.iter().all(|&x| other.contains(t, x))
    }

    pub fn same_as(&self, t: &FieldTower, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_contained_in(t, other)
    }
}

/// The monic `P_V(X) = ∏_{v ∈ V} (X − v)`, as a linearized polynomial.
pub fn from_subspace(t: &FieldTower, v: &Subspace) -> LinearizedPoly<Fe> {
    from_basis(t, v.basis())
}

/// Root subspace of a nondegenerate `P`, found by exhaustive search.
pub fn kernel(t: &FieldTower, p: &LinearizedPoly<Fe>) -> Result<Subspace> {
    if !p.is_nondegenerate(t) {
        return Err(Error::Degenerate("a_0 = 0 or a_d = 0".into()));
    }
    let expected = t.q().checked_pow(p.height() as u32).unwrap_or(u64::MAX);
    let roots: Vec<Fe> = t.elements().filter(|x| p.eval(t, x).is_zero()).collect();
    if (roots.len() as u64) < expected {
        return Err(Error::RootsNotRational { found: roots.len(), expected: expected as usize });
    }
    Ok(Subspace { basis: greedy_basis(t, &roots, &[]) })
}

/// Extends `start` greedily by elements of `pool` (in the given order) that
/// are independent of what has been chosen so far. Returns only the new vectors.
fn greedy_basis(t: &FieldTower, pool: &[Fe], start: &[Fe]) -> Vec<Fe> {
    let mut cur = start.to_vec();
    let mut chosen = Vec::new();
    for &x in pool {
        if x.is_zero() {
            continue;
        }
        cur.push(x);
        if fq_rank(t, &cur) == cur.len() {
            chosen.push(x);
        } else {
            cur.pop();
        }
    }
    chosen
}

/// For `V' ⊆ V`, returns `(P_{V'}, P'')` with `P_V = P'' ∘ P_{V'}` and
/// `P''` the subspace polynomial of `P_{V'}(W)`, where `W` is the complement
/// picked greedily in enumeration order.
pub fn decompose_flag(
    t: &FieldTower,
    small: &Subspace,
    big: &Subspace,
) -> Result<(LinearizedPoly<Fe>, LinearizedPoly<Fe>)> {
    if !small.is_contained_in(t, big) {
        return Err(Error::NotASubspace("V' is not contained in V".into()));
    }
    let p_small = from_subspace(t, small);
    let complement = greedy_basis(t, &big.sorted_elements(t), small.basis());
    let images: Vec<Fe> = complement.iter().map(|w| p_small.eval(t, w)).collect();
    let p_quot = from_basis(t, &images);
    if p_quot.compose(t, &p_small) != from_subspace(t, big) {
        return Err(Error::VerificationFailed("P_V ≠ P'' ∘ P_V'".into()));
    }
    Ok((p_small, p_quot))
}

impl LinearizedPoly<Fe> {
    /// `(a_1/a_0, …, a_d/a_0)`, the normalized form `P*`.
    pub fn normalized(&self, t: &FieldTower) -> Result<Vec<Fe>> {
        let a0 = self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Degenerate("a_0 = 0".into()));
        }
        let inv = t.inv(a0)?;
        Ok(self.coeffs[1..].iter().map(|&c| t.mul(c, inv)).collect())
    }

    pub fn monic(&self, t: &FieldTower) -> Result<Self> {
        let lead = self.coeffs[self.height()];
        let inv = t.inv(lead)?;
        Ok(LinearizedPoly { coeffs: self.coeffs.iter().map(|&c| t.mul(c, inv)).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_tower;

    fn product_oracle(t: &FieldTower, v: &Subspace) -> UniPoly<Fe> {
        let mut f = UniPoly::one(t);
        for x in v.elements(t) {
            f = f.mul_linear(t, &x);
        }
        f
    }

    #[test]
    fn subspace_polynomial_is_the_product() {
        for &(p, s, m) in &[(2, 1, 4), (3, 1, 3), (2, 2, 2)] {
            let t = make_tower(p, s, m, None).unwrap();
            let elems: Vec<Fe> = t.elements().skip(1).collect();
            for d in 1..=2 {
                let basis = greedy_basis(&t, &elems[3..], &[]);
                let v = Subspace::new(&t, basis[..d].to_vec()).unwrap();
                let lp = from_subspace(&t, &v);
                assert_eq!(lp.height(), d);
                assert_eq!(lp.expand(&t), product_oracle(&t, &v));
            }
        }
    }

    #[test]
    fn kernel_roundtrip() {
        let t = make_tower(2, 1, 4, None).unwrap();
        let v = Subspace::new(&t, vec![Fe::raw(3), Fe::raw(6), Fe::raw(9)]).unwrap();
        let p = from_subspace(&t, &v);
        let k = kernel(&t, &p).unwrap();
        assert!(k.same_as(&t, &v));
        assert_eq!(from_subspace(&t, &k), p);
    }

    #[test]
    fn kernel_rejects_irrational_roots() {
        // X + X^2 over F_2 has roots {0, 1}; X + X^2 + X^4 needs F_8
        let t = make_tower(2, 1, 2, None).unwrap();
        let p = LinearizedPoly::star(&t, &[Fe::ONE, Fe::ONE]);
        assert!(matches!(kernel(&t, &p), Err(Error::RootsNotRational { .. })));
        let t8 = make_tower(2, 1, 3, None).unwrap();
        assert_eq!(kernel(&t8, &p).unwrap().dim(), 2);
        let deg = LinearizedPoly::new(&t, vec![Fe::ZERO, Fe::ONE]);
        assert!(matches!(kernel(&t, &deg), Err(Error::Degenerate(_))));
    }

    #[test]
    fn flag_decomposition() {
        let t = make_tower(3, 1, 3, None).unwrap();
        let big = Subspace::new(&t, vec![Fe::raw(1), Fe::raw(3), Fe::raw(9)]).unwrap();
        let small = Subspace::new(&t, vec![Fe::raw(4)]).unwrap();
        let (ps, pq) = decompose_flag(&t, &small, &big).unwrap();
        assert_eq!(ps.height() + pq.height(), 3);
        let outside = Subspace::new(&t, vec![Fe::raw(2)]).unwrap();
        let v2 = Subspace::new(&t, vec![Fe::raw(3), Fe::raw(9)]).unwrap();
        assert!(matches!(decompose_flag(&t, &outside, &v2), Err(Error::NotASubspace(_))));
    }

    #[test]
    fn dependent_basis_rejected() {
        let t = make_tower(2, 1, 3, None).unwrap();
        assert!(Subspace::new(&t, vec![Fe::raw(3), Fe::raw(5), Fe::raw(6)]).is_err());
    }
}
