//! Finite fields `F_{p^a}` with an explicit irreducible modulus.
//!
//! Elements are stored as their rank in the power basis: the coefficient
//! vector `(c_0, ..., c_{a-1})` of `c_0 + c_1 t + ... + c_{a-1} t^{a-1}` maps
//! to the integer `c_0 + c_1 p + ... + c_{a-1} p^{a-1}`. Multiplication goes
//! through discrete log tables built once at construction.

mod extension;
pub(crate) mod fp_poly;

pub use extension::ExtensionCtx;

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use fp_poly::FpPoly;

/// Largest field order handled (tables are `O(q)`).
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: usize },
    #[error("field order {0} exceeds the supported limit {MAX_FIELD_ORDER}")]
    FieldTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("value does not lie in the base field")]
    NotInBaseField,
}

/// An element of some [`Field`], identified by its power-basis rank.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Wraps a raw rank. Use [`Field::elem`] for a checked conversion.
    pub const fn from_index(index: u32) -> Self {
        Elem(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Checked field operation, see [`Field::arith`].
#[derive(Clone, Debug)]
pub enum Arith {
    Add(Elem, Elem),
    Sub(Elem, Elem),
    Mul(Elem, Elem),
    Neg(Elem),
    Inv(Elem),
    Pow(Elem, BigUint),
}

/// The field `F_q`, `q = p^a`, presented as `F_p[t] / (modulus)`.
#[derive(Clone)]
pub struct Field {
    p: u32,
    a: usize,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    // exp has length 2(q-1) so log sums never need a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.a == other.a && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^a`, or fails if `q` is not a prime power.
pub fn prime_power(q: u64) -> Result<(u64, usize), GfError> {
    if q < 2 {
        return Err(GfError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut a = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        a += 1;
    }
    if rest != 1 {
        return Err(GfError::NotPrimePower(q));
    }
    Ok((p, a))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Builds `F_{p^a}`. Without an explicit modulus the lexicographically
    /// smallest monic irreducible is used, comparing `c_0` first.
    pub fn new(p: u64, a: usize, modulus: Option<Vec<u64>>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if a == 0 {
            return Err(GfError::ZeroDegree);
        }
        let order = (p as u128).checked_pow(a as u32).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(GfError::FieldTooLarge(order.min(u64::MAX as u128) as u64));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != a + 1 || m[a] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(GfError::BadModulus { expected: a });
                }
                if !fp_poly::is_irreducible(&m, p) {
                    return Err(GfError::ReducibleModulus { p });
                }
                m
            }
            None => smallest_irreducible(p, a),
        };
        Ok(Self::build(p, a, modulus))
    }

    /// Builds `F_q` from its order.
    pub fn with_order(q: u64, modulus: Option<Vec<u64>>) -> Result<Field, GfError> {
        let (p, a) = prime_power(q)?;
        Field::new(p, a, modulus)
    }

    fn build(p: u64, a: usize, modulus: FpPoly) -> Field {
        let q = p.pow(a as u32);
        let pow_p: Vec<u32> = (0..=a).map(|i| p.pow(i as u32) as u32).collect();
        let mut field = Field {
            p: p as u32,
            a,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            pow_p,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .map(|i| Elem(i as u32))
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| field.slow_pow(g, order / r) != Elem::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = Elem::ONE;
        for i in 0..order {
            exp.push(cur.0);
            log[cur.0 as usize] = i as u32;
            cur = field.slow_mul(cur, generator);
        }
        for i in 0..order as usize {
            exp.push(exp[i]);
        }
        field.exp = exp;
        field.log = log;
        field
    }

    fn to_poly(&self, x: Elem) -> FpPoly {
        let mut out: FpPoly = self.coeffs(x).into_iter().map(u64::from).collect();
        fp_poly::trim(&mut out);
        out
    }

    fn elem_of_poly(&self, f: &FpPoly) -> Elem {
        Elem(
            f.iter()
                .enumerate()
                .map(|(i, &c)| c as u32 * self.pow_p[i])
                .sum(),
        )
    }

    fn modulus_poly(&self) -> FpPoly {
        self.modulus.iter().map(|&c| c as u64).collect()
    }

    fn slow_mul(&self, x: Elem, y: Elem) -> Elem {
        let p = self.p as u64;
        let prod = fp_poly::mul_mod(&self.to_poly(x), &self.to_poly(y), &self.modulus_poly(), p);
        self.elem_of_poly(&prod)
    }

    fn slow_pow(&self, x: Elem, e: u64) -> Elem {
        let p = self.p as u64;
        let r = fp_poly::pow_poly_mod(&self.to_poly(x), e, &self.modulus_poly(), p);
        self.elem_of_poly(&r)
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> usize {
        self.a
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Modulus coefficients, low degree first (monic, length `a + 1`).
    pub fn modulus(&self) -> Vec<u64> {
        self.modulus.iter().map(|&c| c as u64).collect()
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The class of `t` in `F_p[t]/(modulus)`.
    pub fn generator(&self) -> Elem {
        self.elem_of_poly(&fp_poly::rem(&vec![0, 1], &self.modulus_poly(), self.p as u64))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    /// Checked conversion from a coefficient vector of length `a`.
    pub fn elem(&self, coeffs: &[u32]) -> Result<Elem, GfError> {
        if coeffs.len() != self.a || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::FieldMismatch);
        }
        Ok(Elem(
            coeffs
                .iter()
                .zip(&self.pow_p)
                .map(|(&c, &w)| c * w)
                .sum(),
        ))
    }

    /// Power-basis coordinates of `x`, length `a`.
    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.a)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    /// Evaluates a polynomial with prime-field integer coefficients
    /// (low degree first) at `x`.
    pub fn eval_fp_poly(&self, coeffs: &[u64], x: Elem) -> Elem {
        coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| {
            self.add(self.mul(acc, x), self.from_int((c % self.p as u64) as i64))
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if self.p == 2 {
            return Elem(x.0 ^ y.0);
        }
        if self.a == 1 {
            let s = x.0 + y.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0;
        for &w in &self.pow_p[..self.a] {
            let s = a % self.p + b % self.p;
            out += if s >= self.p { s - self.p } else { s } * w;
            a /= self.p;
            b /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        if self.p == 2 {
            return x;
        }
        let mut a = x.0;
        let mut out = 0;
        for &w in &self.pow_p[..self.a] {
            let c = a % self.p;
            out += if c == 0 { 0 } else { self.p - c } * w;
            a /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 || y.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[x.0 as usize] + self.log[y.0 as usize]) as usize])
    }

    pub fn inv(&self, x: Elem) -> Result<Elem, GfError> {
        if x.0 == 0 {
            return Err(GfError::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[x.0 as usize];
        Ok(Elem(self.exp[((order - l) % order) as usize]))
    }

    /// `x^e` with the convention `0^0 = 1`.
    #[inline]
    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if x.0 == 0 {
            return Elem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[x.0 as usize] as u64 * (e % order) % order;
        Elem(self.exp[l as usize])
    }

    pub fn pow_big(&self, x: Elem, e: &BigUint) -> Elem {
        let order = BigUint::from(self.q - 1);
        let reduced = (e % &order).to_u64().unwrap();
        if e == &BigUint::from(0u32) {
            return Elem::ONE;
        }
        if x.0 == 0 {
            return Elem::ZERO;
        }
        // e > 0 and e ≡ 0 (mod q-1) gives 1, which pow(x, 0) also returns
        self.pow(x, reduced)
    }

    /// Checked arithmetic: operands must belong to this field.
    pub fn arith(&self, op: Arith) -> Result<Elem, GfError> {
        let check = |x: Elem| {
            if self.contains(x) {
                Ok(x)
            } else {
                Err(GfError::FieldMismatch)
            }
        };
        match op {
            Arith::Add(x, y) => Ok(self.add(check(x)?, check(y)?)),
            Arith::Sub(x, y) => Ok(self.sub(check(x)?, check(y)?)),
            Arith::Mul(x, y) => Ok(self.mul(check(x)?, check(y)?)),
            Arith::Neg(x) => Ok(self.neg(check(x)?)),
            Arith::Inv(x) => self.inv(check(x)?),
            Arith::Pow(x, e) => Ok(self.pow_big(check(x)?, &e)),
        }
    }
}

fn smallest_irreducible(p: u64, a: usize) -> FpPoly {
    // counter over (c_0, ..., c_{a-1}) with c_0 most significant
    let mut digits = vec![0u64; a];
    loop {
        let mut candidate = digits.clone();
        candidate.push(1);
        if fp_poly::is_irreducible(&candidate, p) {
            return candidate;
        }
        let mut i = a;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "an irreducible polynomial of every degree exists");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_modulus_f4() {
        let f = Field::new(2, 2, None).unwrap();
        assert_eq!(f.modulus(), vec![1, 1, 1]);
    }

    #[test]
    fn prime_field_uses_x_modulus() {
        let f = Field::new(19, 1, None).unwrap();
        assert_eq!(f.modulus(), vec![0, 1]);
        assert_eq!(f.order(), 19);
        assert_eq!(f.mul(Elem(7), Elem(11)), Elem(1));
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(
            Field::new(2, 2, Some(vec![1, 0, 1])).unwrap_err(),
            GfError::ReducibleModulus { p: 2 }
        );
        assert_eq!(Field::new(15, 1, None).unwrap_err(), GfError::NotPrime(15));
        assert!(matches!(
            Field::new(3, 2, Some(vec![1, 0, 2])),
            Err(GfError::BadModulus { .. })
        ));
    }

    #[test]
    fn f4_alpha_squared() {
        let f = Field::new(2, 2, None).unwrap();
        let alpha = f.generator();
        assert_eq!(f.coeffs(alpha), vec![0, 1]);
        assert_eq!(f.coeffs(f.mul(alpha, alpha)), vec![1, 1]);
    }

    #[test]
    fn inverse_in_f19() {
        let f = Field::new(19, 1, None).unwrap();
        assert_eq!(f.inv(Elem(7)).unwrap(), Elem(11));
        assert_eq!(f.inv(Elem::ZERO), Err(GfError::DivisionByZero));
        assert_eq!(f.arith(Arith::Inv(Elem(0))), Err(GfError::DivisionByZero));
    }

    #[test]
    fn fermat_little_theorem() {
        for q in [2u64, 3, 4, 5, 8, 9, 16, 25, 27, 49] {
            let f = Field::with_order(q, None).unwrap();
            for x in f.nonzero_elements() {
                assert_eq!(f.pow(x, q - 1), Elem::ONE);
                assert_eq!(f.pow_big(x, &BigUint::from(q - 1)), Elem::ONE);
                assert_eq!(f.pow(x, q), x);
            }
        }
    }

    #[test]
    fn field_mismatch_detected() {
        let f = Field::new(3, 1, None).unwrap();
        assert_eq!(f.arith(Arith::Add(Elem(1), Elem(5))), Err(GfError::FieldMismatch));
        assert_eq!(f.elem(&[1, 2]), Err(GfError::FieldMismatch));
        assert_eq!(f.elem(&[3]), Err(GfError::FieldMismatch));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(27).unwrap(), (3, 3));
        assert_eq!(prime_power(19).unwrap(), (19, 1));
        assert!(prime_power(12).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::with_order(q, None).unwrap();
            let els: Vec<Elem> = f.elements().collect();
            for &x in &els {
                assert_eq!(f.add(x, f.neg(x)), Elem::ZERO);
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
                }
                for &y in &els {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    assert_eq!(f.mul(x, y), f.slow_mul(x, y));
                    for &z in &els {
                        assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                    }
                }
            }
        }
    }
}
