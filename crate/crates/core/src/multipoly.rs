//! Sparse multivariate polynomials over `F_{q^m}` and their fractions.

use alloc::{collections::BTreeMap, vec, vec::Vec};
use core::cmp::Ordering;

use crate::algebra::Algebra;
use crate::ff::{Fe, FieldTower};
use crate::matrix::Matrix;

/// Exponent vector, ordered graded-lexicographically (variable 0 heaviest).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }
    pub fn exps(&self) -> &[u32] {
        &self.0
    }
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `Σ c_m · m` with nonzero coefficients only.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Fe>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in decreasing grlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Fe)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Constant term when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Fe> {
        match self.terms.len() {
            0 => Some(Fe::ZERO),
            1 => {
                let (m, &c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then_some(c)
            }
            _ => None,
        }
    }

    fn insert(&mut self, t: &FieldTower, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = t.add(*v, c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }
}

/// Polynomial ring `F_{q^m}[U_1, …, U_k]`.
#[derive(Clone, Copy, Debug)]
pub struct MultiRing<'a> {
    tower: &'a FieldTower,
    nvars: usize,
}

impl<'a> MultiRing<'a> {
    pub fn new(tower: &'a FieldTower, nvars: usize) -> Self {
        MultiRing { tower, nvars }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        let mut e = vec![0; self.nvars];
        e[i] = 1;
        self.term(Fe::ONE, e)
    }

    pub fn term(&self, c: Fe, exps: Vec<u32>) -> MultiPoly {
        assert_eq!(exps.len(), self.nvars, "monomial arity");
        let mut p = MultiPoly::zero();
        p.insert(self.tower, Monomial(exps), c);
        p
    }

    pub fn eval(&self, f: &MultiPoly, point: &[Fe]) -> Fe {
        let t = self.tower;
        f.terms.iter().fold(Fe::ZERO, |acc, (m, &c)| {
            let v = m.0.iter().zip(point).fold(c, |v, (&e, &x)| t.mul(v, t.pow(x, e as u64)));
            t.add(acc, v)
        })
    }

    /// `f(images_0, …, images_{k−1})` computed in `target`.
    pub fn substitute<'b>(&self, f: &MultiPoly, target: &MultiRing<'b>, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let mut powers: Vec<BTreeMap<u32, MultiPoly>> = vec![BTreeMap::new(); self.nvars];
        let mut out = MultiPoly::zero();
        for (m, &c) in &f.terms {
            let mut term = target.scalar(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers[i].entry(e).or_insert_with(|| target.pow(&images[i], e as u64)).clone();
                term = target.mul(&term, &pw);
            }
            out = target.add(&out, &term);
        }
        out
    }

    /// Formal partial derivative in `U_i`.
    pub fn derivative(&self, f: &MultiPoly, i: usize) -> MultiPoly {
        let t = self.tower;
        let mut out = MultiPoly::zero();
        for (m, &c) in &f.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.insert(t, Monomial(exps), t.mul(t.from_int(e as i64), c));
        }
        out
    }

    /// Linear change of variables `U_j ↦ Σ_i g_{ji} U_i`.
    pub fn linear_action(&self, f: &MultiPoly, g: &Matrix) -> MultiPoly {
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|j| {
                let mut img = MultiPoly::zero();
                for i in 0..self.nvars {
                    let mut e = vec![0; self.nvars];
                    e[i] = 1;
                    img.insert(self.tower, Monomial(e), g.get(j, i));
                }
                img
            })
            .collect();
        self.substitute(f, self, &images)
    }
}

impl Algebra for MultiRing<'_> {
    type Elem = MultiPoly;

    fn tower(&self) -> &FieldTower {
        self.tower
    }
    fn zero(&self) -> MultiPoly {
        MultiPoly::zero()
    }
    fn one(&self) -> MultiPoly {
        self.scalar(Fe::ONE)
    }
    fn is_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }
    fn equal(&self, a: &MultiPoly, b: &MultiPoly) -> bool {
        a == b
    }
    fn scalar(&self, c: Fe) -> MultiPoly {
        self.term(c, vec![0; self.nvars])
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let (big, small) = if a.terms.len() >= b.terms.len() { (a, b) } else { (b, a) };
        let mut out = big.clone();
        for (m, &c) in &small.terms {
            out.insert(self.tower, m.clone(), c);
        }
        out
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        MultiPoly { terms: a.terms.iter().map(|(m, &c)| (m.clone(), self.tower.neg(c))).collect() }
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, &ca) in &a.terms {
            for (mb, &cb) in &b.terms {
                out.insert(self.tower, ma.mul(mb), self.tower.mul(ca, cb));
            }
        }
        out
    }
    fn frobenius(&self, a: &MultiPoly, e: u32) -> MultiPoly {
        // additive in characteristic p: (Σ c m)^(p^e) = Σ c^(p^e) m^(p^e)
        let k = self.tower.p().pow(e);
        MultiPoly {
            terms: a
                .terms
                .iter()
                .map(|(m, &c)| (Monomial(m.0.iter().map(|&x| x * k).collect()), self.tower.frobenius(c, e)))
                .collect(),
        }
    }
}

/// `num / den` with `den ≠ 0`; no cancellation is attempted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

/// Field of fractions of a [`MultiRing`], equality by cross-multiplication.
#[derive(Clone, Copy, Debug)]
pub struct FracRing<'a> {
    base: MultiRing<'a>,
}

impl<'a> FracRing<'a> {
    pub fn new(base: MultiRing<'a>) -> Self {
        FracRing { base }
    }

    pub fn base(&self) -> &MultiRing<'a> {
        &self.base
    }

    pub fn from_poly(&self, p: MultiPoly) -> Frac {
        Frac { num: p, den: self.base.one() }
    }

    /// `num / den`, `None` if `den = 0`.
    pub fn frac(&self, num: MultiPoly, den: MultiPoly) -> Option<Frac> {
        (!den.is_zero()).then_some(Frac { num, den })
    }

    pub fn inv(&self, a: &Frac) -> Option<Frac> {
        self.frac(a.den.clone(), a.num.clone())
    }

    pub fn linear_action(&self, f: &Frac, g: &Matrix) -> Frac {
        Frac { num: self.base.linear_action(&f.num, g), den: self.base.linear_action(&f.den, g) }
    }

    pub fn eval(&self, f: &Frac, point: &[Fe]) -> Option<Fe> {
        let t = self.base.tower;
        t.div(self.base.eval(&f.num, point), self.base.eval(&f.den, point)).ok()
    }
}

impl Algebra for FracRing<'_> {
    type Elem = Frac;

    fn tower(&self) -> &FieldTower {
        self.base.tower
    }
    fn zero(&self) -> Frac {
        self.from_poly(MultiPoly::zero())
    }
    fn one(&self) -> Frac {
        self.from_poly(self.base.one())
    }
    fn is_zero(&self, a: &Frac) -> bool {
        a.num.is_zero()
    }
    fn equal(&self, a: &Frac, b: &Frac) -> bool {
        self.base.mul(&a.num, &b.den) == self.base.mul(&b.num, &a.den)
    }
    fn scalar(&self, c: Fe) -> Frac {
        self.from_poly(self.base.scalar(c))
    }
    fn add(&self, a: &Frac, b: &Frac) -> Frac {
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            return Frac { num: self.base.add(&a.num, &b.num), den: a.den.clone() };
        }
        let r = &self.base;
        Frac { num: r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den)), den: r.mul(&a.den, &b.den) }
    }
    fn neg(&self, a: &Frac) -> Frac {
        Frac { num: self.base.neg(&a.num), den: a.den.clone() }
    }
    fn mul(&self, a: &Frac, b: &Frac) -> Frac {
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        let r = &self.base;
        let one = r.one();
        let den = if a.den == one {
            b.den.clone()
        } else if b.den == one {
            a.den.clone()
        } else {
            r.mul(&a.den, &b.den)
        };
        Frac { num: r.mul(&a.num, &b.num), den }
    }
    fn frobenius(&self, a: &Frac, e: u32) -> Frac {
        Frac { num: self.base.frobenius(&a.num, e), den: self.base.frobenius(&a.den, e) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_tower;

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a > b && c > a);
    }

    #[test]
    fn frobenius_matches_pow() {
        let t = make_tower(3, 1, 2, None).unwrap();
        let r = MultiRing::new(&t, 2);
        let f = r.add(&r.add(&r.var(0), &r.scale(Fe::raw(5), &r.var(1))), &r.one());
        assert_eq!(r.frobenius(&f, 1), r.pow(&f, 3));
        assert_eq!(r.frobenius_q(&f, 2), r.pow(&f, 9));
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let t = make_tower(2, 1, 3, None).unwrap();
        let r = MultiRing::new(&t, 2);
        let f = r.add(&r.mul(&r.var(0), &r.var(1)), &r.pow(&r.var(1), 3));
        let g = r.add(&r.var(0), &r.scalar(Fe::raw(6)));
        for x in t.elements() {
            for y in t.elements() {
                let pt = [x, y];
                assert_eq!(r.eval(&r.mul(&f, &g), &pt), t.mul(r.eval(&f, &pt), r.eval(&g, &pt)));
            }
        }
    }

    #[test]
    fn fractions_compare_by_cross_multiplication() {
        let t = make_tower(2, 1, 1, None).unwrap();
        let r = MultiRing::new(&t, 1);
        let fr = FracRing::new(r);
        let x = r.var(0);
        let a = fr.frac(r.mul(&x, &x), x.clone()).unwrap();
        assert!(fr.equal(&a, &fr.from_poly(x)));
    }
}
