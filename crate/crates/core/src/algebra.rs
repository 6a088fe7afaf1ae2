//! Commutative `F_{q^m}`-algebras of characteristic `p`.
//!
//! Linearized polynomials only need `+`, `·` and the `q`-Frobenius of their
//! coefficient ring, so the same code evaluates and composes them over the
//! field itself, over polynomial and fraction rings (symbolic identities) and
//! over truncated series (Hensel lifts).

use core::fmt::Debug;

use crate::ff::{Fe, FieldTower};

pub trait Algebra {
    type Elem: Clone + Debug;

    fn tower(&self) -> &FieldTower;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Embedding of the tower's top field.
    fn scalar(&self, c: Fe) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Semantic equality (fractions compare by cross-multiplication).
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn scale(&self, c: Fe, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.scalar(c), a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^(p^e)`.
    fn frobenius(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let p = self.tower().p() as u64;
        let mut x = a.clone();
        for _ in 0..e {
            x = self.pow(&x, p);
        }
        x
    }

    /// `a^(q^i)`.
    fn frobenius_q(&self, a: &Self::Elem, i: u32) -> Self::Elem {
        self.frobenius(a, self.tower().s() * i)
    }
}

impl Algebra for FieldTower {
    type Elem = Fe;

    fn tower(&self) -> &FieldTower {
        self
    }
    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    fn one(&self) -> Fe {
        Fe::ONE
    }
    fn is_zero(&self, a: &Fe) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        FieldTower::add(self, *a, *b)
    }
    fn neg(&self, a: &Fe) -> Fe {
        FieldTower::neg(self, *a)
    }
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        FieldTower::sub(self, *a, *b)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        FieldTower::mul(self, *a, *b)
    }
    fn scalar(&self, c: Fe) -> Fe {
        c
    }
    fn equal(&self, a: &Fe, b: &Fe) -> bool {
        a == b
    }
    fn pow(&self, a: &Fe, e: u64) -> Fe {
        FieldTower::pow(self, *a, e)
    }
    fn frobenius(&self, a: &Fe, e: u32) -> Fe {
        FieldTower::frobenius(self, *a, e)
    }
}
