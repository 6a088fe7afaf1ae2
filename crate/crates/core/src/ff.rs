//! Finite-field towers `F_p ⊆ F_q ⊆ F_{q^m}`.
//!
//! `F_q = F_p[X]/(mid_poly)` and `F_{q^m} = F_q[Y]/(top_poly)`, each modulus
//! being the lexicographically smallest monic irreducible polynomial when
//! coefficients are read constant term first.
//!
//! An element `Σ_j b_j Y^j` with `b_j = Σ_i c_{ij} X^i` is packed as the
//! integer `Σ_{i,j} c_{ij} p^{i + s·j}`. Hence `F_q` is exactly the set of
//! packed values below `q`, and "enumeration order" is integer order.

use alloc::{format, vec, vec::Vec};

use crate::arith;
use crate::error::{Error, Result};

/// Upper bound on `q^m`; larger towers are refused with [`Error::TooLarge`].
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Packed field element. Only meaningful together with its [`FieldTower`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub(crate) const fn raw(i: u32) -> Fe {
        Fe(i)
    }
}

/// Log/exp tables for one level of the tower, with digit-wise addition.
#[derive(Clone, Debug)]
struct Tables {
    p: u32,
    digits: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Tables {
    fn add(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    fn neg(&self, mut a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            place *= p;
            a /= p;
        }
        out
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let ord = self.size - 1;
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % ord as u64;
        self.exp[l as usize]
    }

    fn prime(p: u32) -> Tables {
        if p == 2 {
            return Tables { p, digits: 1, size: 2, exp: vec![1], log: vec![0, 0] };
        }
        let factors = arith::prime_factors((p - 1) as u64);
        let g = (2..p)
            .find(|&g| factors.iter().all(|&r| arith::pow_mod(g as u64, (p as u64 - 1) / r, p as u64) != 1))
            .expect("primitive root exists");
        Self::from_generator(p, 1, p, |x| (x as u64 * g as u64 % p as u64) as u32)
    }

    fn from_generator(p: u32, digits: u32, size: u32, step: impl Fn(u32) -> u32) -> Tables {
        let mut exp = Vec::with_capacity(size as usize - 1);
        let mut log = vec![0u32; size as usize];
        let mut x = 1u32;
        for k in 0..size - 1 {
            exp.push(x);
            log[x as usize] = k;
            x = step(x);
        }
        Tables { p, digits, size, exp, log }
    }

    /// Tables of `base[Y]/(modulus)`, `modulus` monic of degree `k`.
    fn extension(base: &Tables, modulus: &[u32]) -> Tables {
        let k = modulus.len() - 1;
        let bsize = base.size;
        let size = bsize.pow(k as u32);
        let slow = |a: u32, b: u32| -> u32 {
            let av = to_digits(a, bsize, k);
            let bv = to_digits(b, bsize, k);
            from_digits(&poly_mulmod(base, &av, &bv, modulus), bsize)
        };
        let n = (size - 1) as u64;
        let factors = arith::prime_factors(n);
        let slow_pow = |g: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            let mut b = g;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow(acc, b);
                }
                b = slow(b, b);
                e >>= 1;
            }
            acc
        };
        let g =
            (1..size).find(|&g| factors.iter().all(|&r| slow_pow(g, n / r) != 1)).expect("primitive element exists");
        Self::from_generator(base.p, base.digits * k as u32, size, |x| slow(x, g))
    }
}

fn to_digits(mut a: u32, base: u32, len: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    for d in v.iter_mut() {
        *d = a % base;
        a /= base;
    }
    v
}

fn from_digits(d: &[u32], base: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * base + x)
}

/// `a·b mod modulus` over `base`; `modulus` monic.
fn poly_mulmod(base: &Tables, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = base.add(prod[i + j], base.mul(x, y));
            }
        }
    }
    poly_rem(base, &mut prod, modulus);
    prod.truncate(modulus.len() - 1);
    prod
}

/// Reduces `f` in place modulo the monic `g`; the low `deg g` slots hold the remainder.
fn poly_rem(base: &Tables, f: &mut [u32], g: &[u32]) {
    let k = g.len() - 1;
    for top in (k..f.len()).rev() {
        let c = f[top];
        if c == 0 {
            continue;
        }
        let nc = base.neg(c);
        for (i, &gi) in g.iter().enumerate() {
            if gi != 0 {
                let idx = top - k + i;
                f[idx] = base.add(f[idx], base.mul(nc, gi));
            }
        }
    }
}

/// Monic `f` (coefficients constant first) has no monic factor of degree `1..=deg/2`.
fn is_irreducible(base: &Tables, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    for k in 1..=deg / 2 {
        let count = base.size.pow(k as u32);
        for idx in 0..count {
            let mut g = to_digits(idx, base.size, k);
            g.push(1);
            let mut r = f.to_vec();
            poly_rem(base, &mut r, &g);
            if r[..k].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `k`, constant term compared first.
fn smallest_irreducible(base: &Tables, k: usize) -> Vec<u32> {
    let total = base.size.pow(k as u32);
    for idx in 0..total {
        // c_0 is the most significant digit of idx
        let mut f: Vec<u32> = (0..k).map(|i| idx / base.size.pow((k - 1 - i) as u32) % base.size).collect();
        f.push(1);
        if is_irreducible(base, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u32,
    s: u32,
    m: u32,
    q: u32,
    mid_poly: Vec<u32>,
    top_poly: Vec<Fe>,
    n: Option<u32>,
    zeta: Option<Fe>,
    t: Tables,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.s == other.s
            && self.m == other.m
            && self.mid_poly == other.mid_poly
            && self.top_poly == other.top_poly
            && self.n == other.n
    }
}

impl Eq for FieldTower {}

/// Builds `F_p ⊆ F_q ⊆ F_{q^m}`, `q = p^s`, optionally with a primitive `n`-th
/// root of unity `ζ ∈ F_q` (which requires `ord_n(p) = s`).
pub fn make_tower(p: u64, s: u32, m: u32, n: Option<u64>) -> Result<FieldTower> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 || m == 0 {
        return Err(Error::InvalidInput(format!("s = {s} and m = {m} must be positive")));
    }
    arith::checked_pow(p, s.saturating_mul(m)).filter(|&v| v <= MAX_FIELD_SIZE).ok_or_else(|| {
        Error::TooLarge(format!("F_{{{p}^{}}} exceeds {MAX_FIELD_SIZE} elements", s as u64 * m as u64))
    })?;
    if let Some(n) = n {
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        if arith::gcd(n, p) != 1 {
            return Err(Error::NotCoprime { n, p });
        }
        let order = arith::multiplicative_order(p, n).expect("coprime");
        if order != s as u64 {
            return Err(Error::OrderMismatch { p, n, order, s });
        }
    }
    let p32 = p as u32;
    let fp = Tables::prime(p32);
    let mid_poly = smallest_irreducible(&fp, s as usize);
    let fq = Tables::extension(&fp, &mid_poly);
    let top_raw = smallest_irreducible(&fq, m as usize);
    let top = Tables::extension(&fq, &top_raw);
    let mut tower = FieldTower {
        p: p32,
        s,
        m,
        q: fq.size,
        mid_poly,
        top_poly: top_raw.into_iter().map(Fe).collect(),
        n: None,
        zeta: None,
        t: top,
    };
    if let Some(n) = n {
        let zeta =
            (1..tower.q).map(Fe).find(|&x| tower.order(x) == n).ok_or(Error::NoSuchRoot { n, q: tower.q as u64 })?;
        tower.n = Some(n as u32);
        tower.zeta = Some(zeta);
    }
    Ok(tower)
}

impl FieldTower {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// `q = p^s`.
    pub fn q(&self) -> u64 {
        self.q as u64
    }
    /// `q^m`.
    pub fn size(&self) -> u64 {
        self.t.size as u64
    }
    /// Monic modulus of `F_q` over `F_p`, coefficients constant term first.
    pub fn mid_poly(&self) -> &[u32] {
        &self.mid_poly
    }
    /// Monic modulus of `F_{q^m}` over `F_q`, coefficients constant term first.
    pub fn top_poly(&self) -> &[Fe] {
        &self.top_poly
    }
    pub fn n(&self) -> Option<u64> {
        self.n.map(|n| n as u64)
    }
    pub fn zeta(&self) -> Option<Fe> {
        self.zeta
    }

    /// Same field with the same moduli (the attached `n` is ignored).
    pub fn same_field(&self, other: &FieldTower) -> bool {
        self.p == other.p
            && self.s == other.s
            && self.m == other.m
            && self.mid_poly == other.mid_poly
            && self.top_poly == other.top_poly
    }

    /// Element with the given packed index.
    pub fn element(&self, index: u64) -> Result<Fe> {
        if index < self.size() {
            Ok(Fe(index as u32))
        } else {
            Err(Error::InvalidInput(format!("{index} is not an element of a field of size {}", self.size())))
        }
    }

    /// Element from its `s·m` base-`p` coordinates.
    pub fn from_coords(&self, coords: &[u32]) -> Result<Fe> {
        if coords.len() > self.t.digits as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidInput("coordinates out of range".into()));
        }
        Ok(Fe(from_digits(coords, self.p)))
    }

    pub fn coords(&self, x: Fe) -> Vec<u32> {
        to_digits(x.0, self.p, self.t.digits as usize)
    }

    /// The `F_q`-coordinates `b_0, …, b_{m-1}` of `x = Σ b_j Y^j`.
    pub fn fq_coords(&self, x: Fe) -> Vec<Fe> {
        to_digits(x.0, self.q, self.m as usize).into_iter().map(Fe).collect()
    }

    pub fn from_fq_coords(&self, b: &[Fe]) -> Fe {
        Fe(from_digits(&b.iter().map(|x| x.0).collect::<Vec<_>>(), self.q))
    }

    /// All elements of `F_{q^m}` in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.t.size).map(Fe)
    }

    /// All elements of `F_q` in enumeration order.
    pub fn base_elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q).map(Fe)
    }

    pub fn is_base(&self, x: Fe) -> bool {
        x.0 < self.q
    }

    /// `k · 1`.
    pub fn from_int(&self, k: i64) -> Fe {
        Fe(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.t.add(a.0, b.0))
    }
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.t.neg(a.0))
    }
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.t.add(a.0, self.t.neg(b.0)))
    }
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.t.mul(a.0, b.0))
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ord = self.t.size - 1;
        let l = self.t.log[a.0 as usize];
        Ok(Fe(self.t.exp[((ord - l) % ord) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let ord = (self.t.size - 1) as u64;
        let l = self.t.log[a.0 as usize] as u128 * (e % ord) as u128 % ord as u128;
        Fe(self.t.exp[l as usize])
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, a: Fe, e: u32) -> Fe {
        if a.is_zero() {
            return a;
        }
        let ord = (self.t.size - 1) as u64;
        let k = arith::pow_mod(self.p as u64, e as u64, ord);
        let l = self.t.log[a.0 as usize] as u128 * k as u128 % ord as u128;
        Fe(self.t.exp[l as usize])
    }

    /// `a^(q^i)`.
    pub fn frobenius_q(&self, a: Fe, i: u32) -> Fe {
        self.frobenius(a, self.s * i)
    }

    /// Multiplicative order; `0` for zero.
    pub fn order(&self, a: Fe) -> u64 {
        if a.is_zero() {
            return 0;
        }
        let ord = (self.t.size - 1) as u64;
        ord / arith::gcd(self.t.log[a.0 as usize] as u64, ord)
    }

    /// An embedding of `self` into `big`, sending `Y` to the first root of
    /// `top_poly` in enumeration order. Requires a common `F_q` and `m | m'`.
    pub fn embedding_into(&self, big: &FieldTower) -> Result<Embedding> {
        if self.p != big.p || self.s != big.s || self.mid_poly != big.mid_poly || !big.m.is_multiple_of(self.m) {
            return Err(Error::InvalidInput("target tower does not contain this one".into()));
        }
        let root = big
            .elements()
            .find(|&x| {
                let mut acc = Fe::ZERO;
                for &c in self.top_poly.iter().rev() {
                    acc = big.add(big.mul(acc, x), c);
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::VerificationFailed("no root of the defining polynomial".into()))?;
        let images = (0..self.m).map(|j| big.pow(root, j as u64)).collect();
        Ok(Embedding { images, q: self.q })
    }
}

/// Field embedding `F_{q^m} → F_{q^{m'}}` fixing `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    images: Vec<Fe>,
    q: u32,
}

impl Embedding {
    pub fn apply(&self, big: &FieldTower, x: Fe) -> Fe {
        to_digits(x.0, self.q, self.images.len())
            .into_iter()
            .zip(&self.images)
            .fold(Fe::ZERO, |acc, (b, &y)| big.add(acc, big.mul(Fe(b), y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent multiplication: schoolbook over F_q via coordinates.
    fn naive_mul(t: &FieldTower, a: Fe, b: Fe) -> Fe {
        let p = t.p;
        let s = t.s as usize;
        let m = t.m as usize;
        let fq_mul = |x: u32, y: u32| -> u32 {
            let xd = to_digits(x, p, s);
            let yd = to_digits(y, p, s);
            let mut prod = vec![0u32; 2 * s];
            for i in 0..s {
                for j in 0..s {
                    prod[i + j] = (prod[i + j] + xd[i] * yd[j]) % p;
                }
            }
            for top in (s..2 * s).rev() {
                let c = prod[top];
                for i in 0..=s {
                    let idx = top - s + i;
                    prod[idx] = (prod[idx] + (p - c) * t.mid_poly[i]) % p;
                }
            }
            from_digits(&prod[..s], p)
        };
        let fq_add = |x: u32, y: u32| -> u32 {
            let xd = to_digits(x, p, s);
            let yd = to_digits(y, p, s);
            from_digits(&xd.iter().zip(&yd).map(|(a, b)| (a + b) % p).collect::<Vec<_>>(), p)
        };
        let q = t.q;
        let ad = to_digits(a.0, q, m);
        let bd = to_digits(b.0, q, m);
        let mut prod = vec![0u32; 2 * m];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = fq_add(prod[i + j], fq_mul(ad[i], bd[j]));
            }
        }
        for top in (m..2 * m).rev() {
            let c = prod[top];
            let negc = from_digits(&to_digits(c, p, s).iter().map(|d| (p - d) % p).collect::<Vec<_>>(), p);
            for i in 0..=m {
                let idx = top - m + i;
                prod[idx] = fq_add(prod[idx], fq_mul(negc, t.top_poly[i].0));
            }
        }
        Fe(from_digits(&prod[..m], q))
    }

    #[test]
    fn f4_with_cube_root() {
        let t = make_tower(2, 2, 1, Some(3)).unwrap();
        assert_eq!(t.mid_poly(), &[1, 1, 1]);
        assert_eq!(t.zeta(), Some(Fe(2)));
        assert_eq!(t.mul(Fe(2), Fe(2)), Fe(3));
    }

    #[test]
    fn moduli_are_smallest() {
        // F_9: X^2 + 1 is irreducible mod 3 and beats X^2 + X + 2 in constant-first order
        let t = make_tower(3, 2, 1, None).unwrap();
        assert_eq!(t.mid_poly(), &[1, 0, 1]);
        // F_8 over F_2: 1 + X^2 + X^3 precedes 1 + X + X^3 when c_1 is compared first
        let t = make_tower(2, 1, 3, None).unwrap();
        assert_eq!(t.mid_poly(), &[0, 1]);
        assert_eq!(t.top_poly(), &[Fe(1), Fe(0), Fe(1), Fe(1)]);
    }

    #[test]
    fn errors_in_order() {
        assert_eq!(make_tower(4, 1, 1, None).unwrap_err().kind(), "NotPrime");
        assert_eq!(make_tower(2, 1, 1, Some(4)).unwrap_err().kind(), "NotCoprime");
        assert_eq!(make_tower(2, 1, 1, Some(3)).unwrap_err().kind(), "OrderMismatch");
        assert_eq!(make_tower(2, 1, 30, None).unwrap_err().kind(), "TooLarge");
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        for &(p, s, m) in &[(2, 1, 4), (2, 2, 2), (3, 1, 3), (3, 2, 1), (5, 1, 2), (2, 3, 2), (7, 1, 2)] {
            let t = make_tower(p, s, m, None).unwrap();
            for a in t.elements() {
                for b in t.elements().step_by(3) {
                    assert_eq!(t.mul(a, b), naive_mul(&t, a, b), "{p} {s} {m}: {a:?}*{b:?}");
                }
            }
        }
    }

    #[test]
    fn base_field_closed_and_frobenius_fixes_it() {
        let t = make_tower(3, 2, 2, None).unwrap();
        for a in t.base_elements() {
            assert_eq!(t.frobenius_q(a, 1), a);
            for b in t.base_elements() {
                assert!(t.is_base(t.mul(a, b)));
                assert!(t.is_base(t.add(a, b)));
            }
        }
        let fixed = t.elements().filter(|&a| t.frobenius_q(a, 1) == a).count();
        assert_eq!(fixed as u64, t.q());
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = make_tower(2, 1, 2, None).unwrap();
        let big = make_tower(2, 1, 4, None).unwrap();
        let e = small.embedding_into(&big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e.apply(&big, small.mul(a, b)), big.mul(e.apply(&big, a), e.apply(&big, b)));
                assert_eq!(e.apply(&big, small.add(a, b)), big.add(e.apply(&big, a), e.apply(&big, b)));
            }
        }
    }
}
