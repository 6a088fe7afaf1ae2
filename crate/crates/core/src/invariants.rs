//! Dickson and parabolic invariants of `GL_d(F_q)` acting on `F_q[U_1, …, U_d]`,
//! and the relations between consecutive invariant rings.

use alloc::{format, vec, vec::Vec};

use crate::algebra::Algebra;
use crate::arith::{self, SplitMix64};
use crate::error::{Error, Result};
use crate::ff::{make_tower, Fe, FieldTower};
use crate::linpoly::{from_basis, LinearizedPoly};
use crate::matrix::{enumerate_gl, GlMatrix};
use crate::multipoly::{Frac, FracRing, MultiPoly, MultiRing};
use crate::poly::UniPoly;

/// Largest `q^d` for which the symbolic products are attempted.
pub const MAX_EXPANSION: u64 = 64;

/// `F_q` as a tower with `m = 1`.
pub fn base_tower(q: u64) -> Result<FieldTower> {
    let (p, s) = arith::prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
    make_tower(p, s, 1, None)
}

fn check_size(q: u64, d: usize) -> Result<()> {
    match arith::checked_pow(q, d as u32) {
        Some(v) if v <= MAX_EXPANSION => Ok(()),
        _ => Err(Error::TooLarge(format!("q^d = {q}^{d} exceeds {MAX_EXPANSION}"))),
    }
}

/// The generic subspace `Ṽ = F_q U_1 ⊕ … ⊕ F_q U_d` inside `F_q[U]`.
fn generic_span(t: &FieldTower, r: &MultiRing<'_>) -> Vec<MultiPoly> {
    let d = r.nvars();
    let q = t.q();
    (0..q.pow(d as u32))
        .map(|mut k| {
            let mut v = r.zero();
            for i in 0..d {
                let c = t.element(k % q).expect("digit below q");
                k /= q;
                v = r.add(&v, &r.scale(c, &r.var(i)));
            }
            v
        })
        .collect()
}

/// `[T_0, …, T_{d−1}]` with `∏_{v ∈ Ṽ} (X − v) = X^{q^d} + Σ T_i X^{q^i}`,
/// obtained by expanding the product literally.
pub fn dickson_invariants(q: u64, d: usize) -> Result<Vec<MultiPoly>> {
    check_size(q, d)?;
    let t = base_tower(q)?;
    let r = MultiRing::new(&t, d);
    let mut prod = UniPoly::one(&r);
    for v in generic_span(&t, &r) {
        prod = prod.mul_linear(&r, &v);
    }
    let mut out = Vec::with_capacity(d);
    let mut k = 1usize;
    for (e, c) in prod.coeffs().iter().enumerate() {
        if e == k {
            if out.len() < d {
                out.push(c.clone());
            }
            k *= q as usize;
        } else if !c.is_zero() {
            return Err(Error::VerificationFailed(format!("nonzero coefficient at X^{e}")));
        }
    }
    Ok(out)
}

/// `U_j ↦ Σ_i a_{ji} U_i`.
pub fn gl_action(t: &FieldTower, f: &MultiPoly, g: &GlMatrix) -> MultiPoly {
    MultiRing::new(t, g.dim()).linear_action(f, g.matrix())
}

/// Elements of `GL_d(F_q)` stabilizing the standard flag of block sizes `partition`.
pub fn parabolic_subgroup(t: &FieldTower, partition: &[usize]) -> Result<Vec<GlMatrix>> {
    let d: usize = partition.iter().sum();
    let mut block = Vec::with_capacity(d);
    for (b, &f) in partition.iter().enumerate() {
        block.extend(core::iter::repeat_n(b, f));
    }
    Ok(enumerate_gl(t, d)?
        .into_iter()
        .filter(|g| (0..d).all(|j| (0..d).all(|i| block[i] <= block[j] || g.matrix().get(j, i).is_zero())))
        .collect())
}

/// Generators `S^j_1, …, S^j_{f_j}` of the invariants of the standard parabolic.
#[derive(Clone, Debug)]
pub struct ParabolicInvariants {
    pub q: u64,
    pub partition: Vec<usize>,
    /// `blocks[j][k]` is `S^{j+1}_{k+1}`, a rational function in `U_1, …, U_d`.
    pub blocks: Vec<Vec<Frac>>,
}

/// Parabolic invariants along the standard flag.
///
/// With `M_i` the monic subspace polynomial of `⟨U_1, …, U_{d_i}⟩` and `W_i` its
/// linear coefficient, block `i` consists of the normalized coefficients of the
/// subspace polynomial of `M_{i−1}(⟨U_{d_{i−1}+1}, …, U_{d_i}⟩)` rescaled by
/// `W_{i−1}`. The product of the resulting stars is checked against the
/// normalized full product before returning.
pub fn parabolic_invariants(q: u64, partition: &[usize]) -> Result<ParabolicInvariants> {
    if partition.is_empty() || partition.contains(&0) {
        return Err(Error::InvalidInput("partition parts must be positive".into()));
    }
    let d: usize = partition.iter().sum();
    check_size(q, d)?;
    let t = base_tower(q)?;
    let r = MultiRing::new(&t, d);
    let fr = FracRing::new(r);

    let mut m_prev = LinearizedPoly::identity(&r);
    let mut w_prev = r.one();
    let mut start = 0;
    let mut blocks: Vec<Vec<Frac>> = Vec::new();
    for &f in partition {
        let images: Vec<MultiPoly> = (start..start + f).map(|j| m_prev.eval(&r, &r.var(j))).collect();
        let step = from_basis(&r, &images);
        let m0 = step.coeff(&r, 0);
        let block: Vec<Frac> = (1..=f)
            .map(|k| {
                let scale = r.pow(&w_prev, q.pow(k as u32) - 1);
                fr.frac(r.mul(&step.coeff(&r, k), &scale), m0.clone()).expect("m_0 ≠ 0 for independent U")
            })
            .collect();
        blocks.push(block);
        w_prev = r.mul(&m0, &w_prev);
        m_prev = step.compose(&r, &m_prev);
        start += f;
    }

    // P*(S^e) ∘ … ∘ P*(S^1) against M_e / W_e
    let mut comp = LinearizedPoly::identity(&fr);
    for block in &blocks {
        comp = LinearizedPoly::star(&fr, block).compose(&fr, &comp);
    }
    let full: Vec<Frac> = m_prev.coeffs().iter().map(|c| fr.frac(c.clone(), w_prev.clone()).expect("W ≠ 0")).collect();
    if !comp.equal(&fr, &LinearizedPoly::new(&fr, full)) {
        return Err(Error::VerificationFailed("composition of parabolic stars".into()));
    }
    Ok(ParabolicInvariants { q, partition: partition.to_vec(), blocks })
}

impl ParabolicInvariants {
    /// Checks `g·S = S` for every generator and every `g` in `group`.
    pub fn check_invariance(&self, t: &FieldTower, group: &[GlMatrix]) -> bool {
        let d: usize = self.partition.iter().sum();
        let r = MultiRing::new(t, d);
        let fr = FracRing::new(r);
        self.blocks.iter().flatten().all(|s| group.iter().all(|g| fr.equal(&fr.linear_action(s, g.matrix()), s)))
    }
}

/// `S^{(q^d−1)/(q−1)} + Σ_{i=0}^{d−1} (−1)^{d−i} T_{d−i}^{q^i} S^{(q^i−1)/(q−1)}`
/// as a polynomial in `S` whose coefficients live in `F_q[T_1, …, T_d]`
/// (variable `i` is `T_{i+1}`).
#[derive(Clone, Debug)]
pub struct MinimalPolynomial {
    pub q: u64,
    pub d: usize,
    pub coeffs: UniPoly<MultiPoly>,
}

/// The minimal polynomial of `S` over `F_q(T_1, …, T_d)`, verified by substituting
/// `P*(S) ∘ P*(T'_1, …, T'_{d−1}) = P*(T_1, …, T_d)`.
pub fn minimal_polynomial_s(q: u64, d: usize) -> Result<MinimalPolynomial> {
    if d < 2 {
        return Err(Error::InvalidInput("d must be at least 2".into()));
    }
    let t = base_tower(q)?;
    let rt = MultiRing::new(&t, d);
    let deg = (q.pow(d as u32) - 1) / (q - 1);
    let mut coeffs = vec![rt.zero(); deg as usize + 1];
    coeffs[deg as usize] = rt.one();
    for i in 0..d {
        let e = (q.pow(i as u32) - 1) / (q - 1);
        let sign = if (d - i).is_multiple_of(2) { Fe::ONE } else { t.from_int(-1) };
        let c = rt.scale(sign, &rt.frobenius_q(&rt.var(d - i - 1), i as u32));
        coeffs[e as usize] = rt.add(&coeffs[e as usize], &c);
    }
    let mp = MinimalPolynomial { q, d, coeffs: UniPoly::new(&rt, coeffs) };

    let rs = MultiRing::new(&t, d);
    let images = relation_images(&rs, d);
    let mut acc = rs.zero();
    let s = rs.var(0);
    for (k, c) in mp.coeffs.coeffs().iter().enumerate() {
        let ck = rt.substitute(c, &rs, &images);
        acc = rs.add(&acc, &rs.mul(&ck, &rs.pow(&s, k as u64)));
    }
    if !acc.is_zero() {
        return Err(Error::VerificationFailed("minimal polynomial does not vanish at S".into()));
    }
    Ok(mp)
}

/// In `F_q[S, T'_1, …, T'_{d−1}]`: the `T_i` forced by `P*(S) ∘ P*(T') = P*(T)`,
/// namely `T_1 = S + T'_1`, `T_i = T'_i + S T'^q_{i−1}`, `T_d = S T'^q_{d−1}`.
fn relation_images(rs: &MultiRing<'_>, d: usize) -> Vec<MultiPoly> {
    let s = rs.var(0);
    let tp = |i: usize| if i == 0 || i >= d { rs.zero() } else { rs.var(i) };
    (1..=d)
        .map(|i| {
            let first = if i == 1 { s.clone() } else { rs.mul(&s, &rs.frobenius_q(&tp(i - 1), 1)) };
            rs.add(&tp(i), &first)
        })
        .collect()
}

/// Symbolic check of the coefficientwise composition relation.
pub fn verify_composition_relation(q: u64, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidInput("d must be at least 2".into()));
    }
    let t = base_tower(q)?;
    let rs = MultiRing::new(&t, d);
    let tprime: Vec<MultiPoly> = (1..d).map(|i| rs.var(i)).collect();
    let lhs = LinearizedPoly::star(&rs, &[rs.var(0)]).compose(&rs, &LinearizedPoly::star(&rs, &tprime));
    let rhs = LinearizedPoly::star(&rs, &relation_images(&rs, d));
    if lhs != rhs {
        return Err(Error::VerificationFailed("P*(S) ∘ P*(T') coefficients".into()));
    }
    Ok(())
}

impl MinimalPolynomial {
    /// Evaluates at random `S, T'` over `F_{q^m}` with `T` given by the composition
    /// relation; returns the number of specializations at which it vanished.
    pub fn check_specializations(&self, m: u32, samples: usize, seed: u64) -> Result<usize> {
        let (p, s) = arith::prime_power(self.q).expect("q is a prime power");
        let big = make_tower(p, s, m, None)?;
        let rt = MultiRing::new(&big, self.d);
        let mut rng = SplitMix64::new(seed);
        let mut ok = 0;
        for _ in 0..samples {
            let sv = big.element(rng.below(big.size()))?;
            let tp: Vec<Fe> = (0..self.d - 1).map(|_| big.element(rng.below(big.size()))).collect::<Result<_>>()?;
            let comp = LinearizedPoly::star(&big, &[sv]).compose(&big, &LinearizedPoly::star(&big, &tp));
            let tv: Vec<Fe> = (1..=self.d).map(|i| comp.coeff(&big, i)).collect();
            let coeffs: Vec<Fe> = self.coeffs.coeffs().iter().map(|c| rt.eval(c, &tv)).collect();
            if UniPoly::new(&big, coeffs).eval(&big, &sv).is_zero() {
                ok += 1;
            }
        }
        Ok(ok)
    }
}

/// `(Π_{i=1}^{d} (q^i−1)/(q−1), q^{d(d−1)/2} (q−1)^d)`: the number of complete
/// flags and the order of the Borel subgroup.
pub fn extension_degrees(q: u64, d: u32) -> (u128, u128) {
    let q = q as u128;
    let flags = (1..=d).map(|i| (q.pow(i) - 1) / (q - 1)).product();
    let borel = q.pow(d * (d.saturating_sub(1)) / 2) * (q - 1).pow(d);
    (flags, borel)
}

/// Each polynomial is homogeneous for the given per-variable weights.
pub fn check_grading(polys: &[MultiPoly], weights: &[i64]) -> bool {
    polys.iter().all(|f| {
        let mut w = f.terms().map(|(m, _)| m.exps().iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum::<i64>());
        match w.next() {
            None => true,
            Some(first) => w.all(|x| x == first),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(r: &MultiRing<'_>, exps: &[u32]) -> MultiPoly {
        r.term(Fe::ONE, exps.to_vec())
    }

    #[test]
    fn dickson_q2_d2() {
        let t = base_tower(2).unwrap();
        let r = MultiRing::new(&t, 2);
        let inv = dickson_invariants(2, 2).unwrap();
        assert_eq!(inv[0], r.add(&u(&r, &[2, 1]), &u(&r, &[1, 2])));
        assert_eq!(inv[1], r.add(&r.add(&u(&r, &[2, 0]), &u(&r, &[1, 1])), &u(&r, &[0, 2])));
    }

    #[test]
    fn dickson_q3_d1_is_the_raw_coefficient() {
        let t = base_tower(3).unwrap();
        let r = MultiRing::new(&t, 1);
        // X(X − U)(X − 2U) = X^3 − U^2 X
        assert_eq!(dickson_invariants(3, 1).unwrap()[0], r.term(t.from_int(-1), vec![2]));
    }

    #[test]
    fn dickson_matches_linearized_route() {
        for &(q, d) in &[(2, 1), (2, 2), (3, 1), (2, 3), (3, 2), (4, 2)] {
            let t = base_tower(q).unwrap();
            let r = MultiRing::new(&t, d);
            let vars: Vec<MultiPoly> = (0..d).map(|i| r.var(i)).collect();
            let lp = from_basis(&r, &vars);
            assert_eq!(&lp.coeffs()[..d], dickson_invariants(q, d).unwrap().as_slice(), "q={q} d={d}");
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(dickson_invariants(2, 7), Err(Error::TooLarge(_))));
    }

    #[test]
    fn parabolic_single_block_is_normalized_dickson() {
        let (q, d) = (2, 2);
        let t = base_tower(q).unwrap();
        let fr = FracRing::new(MultiRing::new(&t, d));
        let inv = dickson_invariants(q, d).unwrap();
        let par = parabolic_invariants(q, &[d]).unwrap();
        for k in 1..d {
            let expect = fr.frac(inv[k].clone(), inv[0].clone()).unwrap();
            assert!(fr.equal(&par.blocks[0][k - 1], &expect));
        }
        let expect_top = fr.frac(fr.base().one(), inv[0].clone()).unwrap();
        assert!(fr.equal(&par.blocks[0][d - 1], &expect_top));
    }

    #[test]
    fn parabolic_d1_q2_is_inverse_of_u() {
        let t = base_tower(2).unwrap();
        let r = MultiRing::new(&t, 1);
        let fr = FracRing::new(r);
        let par = parabolic_invariants(2, &[1]).unwrap();
        assert!(fr.equal(&par.blocks[0][0], &fr.frac(r.one(), r.var(0)).unwrap()));
    }

    #[test]
    fn parabolic_invariance_over_whole_parabolic() {
        for (q, part) in [(2u64, vec![1, 1]), (2, vec![2]), (3, vec![1, 1]), (2, vec![1, 2]), (2, vec![2, 1])] {
            let t = base_tower(q).unwrap();
            let inv = parabolic_invariants(q, &part).unwrap();
            let group = parabolic_subgroup(&t, &part).unwrap();
            assert!(inv.check_invariance(&t, &group), "q={q} {part:?}");
        }
    }

    #[test]
    fn minimal_polynomials() {
        let t = base_tower(2).unwrap();
        let rt = MultiRing::new(&t, 2);
        let mp = minimal_polynomial_s(2, 2).unwrap();
        let c = mp.coeffs.coeffs();
        assert_eq!(c.len(), 4);
        assert_eq!(c[0], rt.var(1));
        assert_eq!(c[1], rt.pow(&rt.var(0), 2));
        assert!(c[2].is_zero());
        assert_eq!(c[3], rt.one());
        for &(q, d) in &[(3, 2), (2, 3), (4, 2)] {
            let mp = minimal_polynomial_s(q, d).unwrap();
            assert_eq!(mp.coeffs.degree(), Some(((q.pow(d as u32) - 1) / (q - 1)) as usize));
            assert_eq!(mp.check_specializations(3, 50, 7).unwrap(), 50);
        }
    }

    #[test]
    fn composition_relation() {
        for &(q, d) in &[(2, 2), (2, 3), (3, 2), (3, 3)] {
            verify_composition_relation(q, d).unwrap();
        }
    }

    #[test]
    fn degrees() {
        assert_eq!(extension_degrees(2, 2), (3, 2));
        assert_eq!(extension_degrees(2, 1), (1, 1));
        assert_eq!(extension_degrees(3, 2), (4, 12));
    }

    #[test]
    fn grading() {
        let t = base_tower(2).unwrap();
        let r = MultiRing::new(&t, 2);
        let inv = dickson_invariants(2, 2).unwrap();
        assert!(check_grading(&inv, &[-1, -1]));
        assert!(check_grading(&[r.one()], &[-1, -1]));
        let bad = r.add(&r.var(0), &r.mul(&r.var(0), &r.var(1)));
        assert!(!check_grading(&[bad], &[-1, -1]));
    }
}
