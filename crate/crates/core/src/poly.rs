//! Dense univariate polynomials over an [`Algebra`], constant term first.

use alloc::{vec, vec::Vec};

use crate::algebra::Algebra;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + core::fmt::Debug> UniPoly<E> {
    pub fn new<A: Algebra<Elem = E>>(alg: &A, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| alg.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one<A: Algebra<Elem = E>>(alg: &A) -> Self {
        UniPoly { coeffs: vec![alg.one()] }
    }

    /// `c · X^k`.
    pub fn monomial<A: Algebra<Elem = E>>(alg: &A, c: E, k: usize) -> Self {
        let mut v = vec![alg.zero(); k];
        v.push(c);
        Self::new(alg, v)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff<A: Algebra<Elem = E>>(&self, alg: &A, k: usize) -> E {
        self.coeffs.get(k).cloned().unwrap_or_else(|| alg.zero())
    }

    pub fn add<A: Algebra<Elem = E>>(&self, alg: &A, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|k| alg.add(&self.coeff(alg, k), &other.coeff(alg, k))).collect();
        Self::new(alg, v)
    }

    pub fn sub<A: Algebra<Elem = E>>(&self, alg: &A, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|k| alg.sub(&self.coeff(alg, k), &other.coeff(alg, k))).collect();
        Self::new(alg, v)
    }

    pub fn scale<A: Algebra<Elem = E>>(&self, alg: &A, c: &E) -> Self {
        Self::new(alg, self.coeffs.iter().map(|x| alg.mul(c, x)).collect())
    }

    pub fn mul<A: Algebra<Elem = E>>(&self, alg: &A, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![alg.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if alg.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = alg.add(&v[i + j], &alg.mul(a, b));
            }
        }
        Self::new(alg, v)
    }

    /// `self · (X − r)`.
    pub fn mul_linear<A: Algebra<Elem = E>>(&self, alg: &A, r: &E) -> Self {
        let mut v = vec![alg.zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            v[i + 1] = alg.add(&v[i + 1], a);
            v[i] = alg.sub(&v[i], &alg.mul(a, r));
        }
        Self::new(alg, v)
    }

    pub fn pow<A: Algebra<Elem = E>>(&self, alg: &A, mut e: u64) -> Self {
        let mut acc = Self::one(alg);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(alg, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(alg, &base);
            }
        }
        acc
    }

    pub fn eval<A: Algebra<Elem = E>>(&self, alg: &A, x: &E) -> E {
        let mut acc = alg.zero();
        for c in self.coeffs.iter().rev() {
            acc = alg.add(&alg.mul(&acc, x), c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{make_tower, Fe};

    #[test]
    fn product_of_linears_vanishes_on_roots() {
        let t = make_tower(3, 1, 2, None).unwrap();
        let roots: Vec<Fe> = t.elements().take(5).collect();
        let mut f = UniPoly::one(&t);
        for r in &roots {
            f = f.mul_linear(&t, r);
        }
        assert_eq!(f.degree(), Some(5));
        for x in t.elements() {
            assert_eq!(f.eval(&t, &x).is_zero(), roots.contains(&x));
        }
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let t = make_tower(2, 1, 3, None).unwrap();
        let f = UniPoly::new(&t, vec![Fe::ONE, t.element(3).unwrap(), Fe::ONE]);
        let mut g = UniPoly::one(&t);
        for _ in 0..5 {
            g = g.mul(&t, &f);
        }
        assert_eq!(f.pow(&t, 5), g);
    }
}
