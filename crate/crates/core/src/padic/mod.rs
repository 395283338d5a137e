//! Truncated arithmetic in the unramified extension `Z_{q^n}`, Teichmüller
//! lifts, the power sums `S_k(f)`, the invariant `U(f)`, character sums and
//! multinomial divisibility.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{is_prime, Elem, ExtensionCtx, Field, GfError};
use crate::poly::{PolyError, PolyMap};

/// Largest domain summed over by [`power_sum`] and [`u_invariant`].
pub const SUM_LIMIT: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("domain of size {size} exceeds the power-sum limit {SUM_LIMIT}")]
    DomainTooLarge { size: u128 },
    #[error("p^{precision} does not fit in 62 bits")]
    PrecisionTooLarge { precision: u32 },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parts sum to {sum}, expected {expected}")]
    PartsSumMismatch { sum: u128, expected: u128 },
    #[error("parts must be positive")]
    ZeroPart,
    #[error("map field does not match the extension base field")]
    ContextMismatch,
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `v_p(n)` for `n > 0`.
pub fn valuation_u64(p: u64, mut n: u64) -> u32 {
    debug_assert!(n > 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `(Z/p^N)[X] / (M)` where `M` is the field modulus read as integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicCtx {
    p: u64,
    precision: u32,
    pn: u64,
    // lower coefficients of the monic modulus
    modulus: Vec<u64>,
    residue_order: u64,
}

/// Coefficients in `[0, p^N)` in the power basis of the lifted modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicElement {
    coeffs: Vec<u64>,
}

impl PadicElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Least `v_p` of the coefficients; `None` for zero.
    pub fn valuation(&self, p: u64) -> Option<u32> {
        self.coeffs
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| valuation_u64(p, c))
            .min()
    }
}

impl PadicCtx {
    /// Context lifting `field` to precision `p^precision`.
    pub fn new(field: &Field, precision: u32) -> Result<PadicCtx, PadicError> {
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        let p = field.characteristic();
        let pn = p
            .checked_pow(precision)
            .filter(|&v| v < 1 << 62)
            .ok_or(PadicError::PrecisionTooLarge { precision })?;
        let mut modulus = field.modulus();
        modulus.pop();
        Ok(PadicCtx {
            p,
            precision,
            pn,
            modulus,
            residue_order: field.order(),
        })
    }

    pub fn for_extension(ext: &ExtensionCtx, precision: u32) -> Result<PadicCtx, PadicError> {
        PadicCtx::new(ext.top(), precision)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^N`.
    pub fn modulus_power(&self) -> u64 {
        self.pn
    }

    pub fn degree(&self) -> usize {
        self.modulus.len()
    }

    /// The monic lifted modulus, constant term first.
    pub fn modulus(&self) -> Vec<u64> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    pub fn zero(&self) -> PadicElement {
        PadicElement {
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> PadicElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> PadicElement {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(self.pn as i64) as u64;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> PadicElement {
        let mut e = self.zero();
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = c % self.pn;
        }
        e
    }

    /// The lift of `x` with digits in `[0, p)`.
    pub fn trivial_lift(&self, field: &Field, x: Elem) -> PadicElement {
        let digits: Vec<u64> = field.coeffs(x).into_iter().map(u64::from).collect();
        self.from_coeffs(&digits)
    }

    /// Reduction mod `p`.
    pub fn reduce(&self, field: &Field, x: &PadicElement) -> Result<Elem, GfError> {
        let digits: Vec<u32> = x.coeffs.iter().map(|&c| (c % self.p) as u32).collect();
        field.elem(&digits)
    }

    pub fn add(&self, x: &PadicElement, y: &PadicElement) -> PadicElement {
        PadicElement {
            coeffs: x
                .coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(&a, &b)| (a + b) % self.pn)
                .collect(),
        }
    }

    pub fn neg(&self, x: &PadicElement) -> PadicElement {
        PadicElement {
            coeffs: x.coeffs.iter().map(|&a| (self.pn - a) % self.pn).collect(),
        }
    }

    pub fn sub(&self, x: &PadicElement, y: &PadicElement) -> PadicElement {
        self.add(x, &self.neg(y))
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.pn as u128) as u64
    }

    pub fn mul(&self, x: &PadicElement, y: &PadicElement) -> PadicElement {
        let d = self.degree();
        if d == 1 {
            return PadicElement {
                coeffs: vec![self.mulmod(x.coeffs[0], y.coeffs[0])],
            };
        }
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.mulmod(a, b)) % self.pn;
            }
        }
        // X^d = -Σ m_j X^j
        for i in (d..2 * d - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus.iter().enumerate() {
                let k = i - d + j;
                prod[k] = (prod[k] + self.mulmod(c, (self.pn - m) % self.pn)) % self.pn;
            }
        }
        prod.truncate(d);
        PadicElement { coeffs: prod }
    }

    pub fn pow(&self, x: &PadicElement, mut e: u64) -> PadicElement {
        let mut result = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// Drops precision to `p^precision`.
    pub fn truncate(&self, x: &PadicElement, precision: u32) -> PadicElement {
        let pn = self.p.pow(precision.min(self.precision));
        PadicElement {
            coeffs: x.coeffs.iter().map(|&c| c % pn).collect(),
        }
    }
}

/// Teichmüller representative of `x`, an element of the field `ctx` lifts.
///
/// Starting from any lift, each `y ← y^Q` gains one digit of agreement with
/// the unique `(Q-1)`-th root of unity (or zero) reducing to `x`.
pub fn teichmuller_lift(ctx: &PadicCtx, field: &Field, x: Elem) -> PadicElement {
    let mut y = ctx.trivial_lift(field, x);
    for _ in 1..ctx.precision {
        y = ctx.pow(&y, ctx.residue_order);
    }
    y
}

/// Values `g̃(x)` of the lifted combination `g = Σ f_i e_i` at every tuple of
/// Teichmüller points of `F_q`.
fn lifted_values(
    f: &PolyMap,
    ext: &ExtensionCtx,
    ctx: &PadicCtx,
) -> Result<Vec<PadicElement>, PadicError> {
    if **ext.base() != **f.field() || ext.degree() != f.nvars() {
        return Err(PadicError::ContextMismatch);
    }
    let size = f.domain_size();
    if size > SUM_LIMIT as u128 {
        return Err(PadicError::DomainTooLarge { size });
    }
    let g = f.combine(ext)?;
    let top = ext.top();
    let q = ext.base().order();
    let n = f.nvars();
    let points: Vec<PadicElement> = ext
        .base()
        .elements()
        .map(|x| teichmuller_lift(ctx, top, ext.embed(x)))
        .collect();
    let terms: Vec<(PadicElement, Vec<u32>)> = g
        .terms()
        .map(|(e, c)| (teichmuller_lift(ctx, top, c), e.entries().to_vec()))
        .collect();
    let max_exp = terms
        .iter()
        .flat_map(|(_, e)| e.iter().copied())
        .max()
        .unwrap_or(0) as usize;
    // powers[x][d] = point_x^d
    let powers: Vec<Vec<PadicElement>> = points
        .iter()
        .map(|pt| {
            let mut row = vec![ctx.one()];
            for d in 1..=max_exp {
                row.push(ctx.mul(&row[d - 1], pt));
            }
            row
        })
        .collect();
    Ok((0..size as u64)
        .into_par_iter()
        .map(|rank| {
            let point: Vec<usize> = (0..n)
                .map(|i| (rank / q.pow(i as u32) % q) as usize)
                .collect();
            terms.iter().fold(ctx.zero(), |acc, (c, exps)| {
                let m = exps
                    .iter()
                    .zip(&point)
                    .filter(|(&d, _)| d > 0)
                    .fold(c.clone(), |m, (&d, &x)| ctx.mul(&m, &powers[x][d as usize]));
                ctx.add(&acc, &m)
            })
        })
        .collect())
}

/// `S_k(f) = Σ_{x ∈ L_q^n} g̃(x)^k` modulo `p^{v_p(k)+1}`, the precision that
/// decides `S_k ≡ 0 (mod pk)`.
///
/// Any lift of the coefficients gives the same class: `y ≡ y' (mod p)`
/// implies `y^k ≡ y'^k (mod p^{v_p(k)+1})`.
pub fn power_sum(f: &PolyMap, ext: &ExtensionCtx, k: u64) -> Result<PadicElement, PadicError> {
    if k == 0 {
        return Err(PadicError::ZeroPower);
    }
    let p = ext.base().characteristic();
    let ctx = PadicCtx::for_extension(ext, valuation_u64(p, k) + 1)?;
    let values = lifted_values(f, ext, &ctx)?;
    Ok(values
        .par_iter()
        .map(|y| ctx.pow(y, k))
        .reduce(|| ctx.zero(), |a, b| ctx.add(&a, &b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct USearchResult {
    /// `None` when every `S_k` with `k <= cap` vanishes mod `pk`.
    pub u: Option<u64>,
    pub cap: u64,
    /// `v_p(S_u)`, which is below `v_p(pu)`.
    pub nonzero_sum_valuation: Option<u32>,
}

/// Least `k <= cap` with `S_k(f) ≢ 0 (mod pk)`.
pub fn u_invariant(f: &PolyMap, ext: &ExtensionCtx, cap: u64) -> Result<USearchResult, PadicError> {
    let p = ext.base().characteristic();
    let max_precision = (1..=cap.max(1)).map(|k| valuation_u64(p, k)).max().unwrap_or(0) + 1;
    let ctx = PadicCtx::for_extension(ext, max_precision)?;
    let values = lifted_values(f, ext, &ctx)?;
    let mut powers = values.clone();
    for k in 1..=cap {
        if k > 1 {
            powers
                .par_iter_mut()
                .zip(&values)
                .for_each(|(acc, y)| *acc = ctx.mul(acc, y));
        }
        let total = powers.iter().fold(ctx.zero(), |a, b| ctx.add(&a, b));
        let sum = ctx.truncate(&total, valuation_u64(p, k) + 1);
        if !sum.is_zero() {
            return Ok(USearchResult {
                u: Some(k),
                cap,
                nonzero_sum_valuation: sum.valuation(p),
            });
        }
    }
    Ok(USearchResult {
        u: None,
        cap,
        nonzero_sum_valuation: None,
    })
}

/// `Σ_{x ∈ L_q} x^k` as an integer, with `0^0 = 1`.
pub fn char_sum(q: u64, k: u64) -> Result<u64, PadicError> {
    let field = Field::with_order(q, None)?;
    let ctx = PadicCtx::new(&field, field.degree() as u32 + 1)?;
    let total = field
        .elements()
        .map(|x| ctx.pow(&teichmuller_lift(&ctx, &field, x), k))
        .fold(ctx.zero(), |a, b| ctx.add(&a, &b));
    debug_assert!(total.coeffs[1..].iter().all(|&c| c == 0));
    Ok(total.coeffs[0])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultinomialCheck {
    /// `e - min_i v_p(a_i)`.
    pub t: u32,
    pub multinomial: BigUint,
    pub valuation: u32,
    pub holds: bool,
}

fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Checks `p^t | (p^e)! / Π a_i!` where `p^{e-t}` exactly divides every part.
pub fn multinomial_valuation_check(
    p: u64,
    e: u32,
    parts: &[u64],
) -> Result<MultinomialCheck, PadicError> {
    if !is_prime(p) {
        return Err(PadicError::NotPrime(p));
    }
    if parts.contains(&0) {
        return Err(PadicError::ZeroPart);
    }
    let expected = (p as u128).pow(e);
    let sum: u128 = parts.iter().map(|&a| a as u128).sum();
    if sum != expected {
        return Err(PadicError::PartsSumMismatch { sum, expected });
    }
    let min_v = parts.iter().map(|&a| valuation_u64(p, a)).min().unwrap_or(e);
    let t = e - min_v;
    let multinomial = parts
        .iter()
        .fold(factorial(expected as u64), |acc, &a| acc / factorial(a));
    let mut valuation = 0;
    let mut rest = multinomial.clone();
    let big_p = BigUint::from(p);
    while !rest.is_zero() && (&rest % &big_p).is_zero() {
        rest /= &big_p;
        valuation += 1;
    }
    Ok(MultinomialCheck {
        t,
        multinomial,
        valuation,
        holds: valuation >= t,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::poly::parse_map;

    fn field(q: u64) -> Arc<Field> {
        Arc::new(Field::with_order(q, None).unwrap())
    }

    fn setup(q: u64, text: &str) -> (PolyMap, ExtensionCtx) {
        let f = field(q);
        let m = parse_map(text, f.clone()).unwrap();
        let ext = ExtensionCtx::new(f, m.nvars()).unwrap();
        (m, ext)
    }

    #[test]
    fn lift_of_two_mod_nine() {
        let f3 = field(3);
        let ctx = PadicCtx::new(&f3, 2).unwrap();
        assert_eq!(teichmuller_lift(&ctx, &f3, f3.from_int(2)).coeffs(), &[8]);
    }

    #[test]
    fn fixed_points() {
        for q in [2u64, 4, 5, 9] {
            let f = field(q);
            let ctx = PadicCtx::new(&f, 3).unwrap();
            assert_eq!(teichmuller_lift(&ctx, &f, Elem::ZERO), ctx.zero());
            assert_eq!(teichmuller_lift(&ctx, &f, Elem::ONE), ctx.one());
        }
    }

    #[test]
    fn lift_in_f4_is_cube_root_of_unity() {
        let f4 = field(4);
        let ctx = PadicCtx::new(&f4, 4).unwrap();
        let w = teichmuller_lift(&ctx, &f4, f4.generator());
        assert_eq!(ctx.pow(&w, 3), ctx.one());
        assert_ne!(w, ctx.one());
        assert_eq!(ctx.reduce(&f4, &w).unwrap(), f4.generator());
    }

    #[test]
    fn ring_matches_field_mod_p() {
        let f9 = field(9);
        let ctx = PadicCtx::new(&f9, 1).unwrap();
        for x in f9.elements() {
            for y in f9.elements() {
                let prod = ctx.mul(&ctx.trivial_lift(&f9, x), &ctx.trivial_lift(&f9, y));
                assert_eq!(ctx.reduce(&f9, &prod).unwrap(), f9.mul(x, y));
            }
        }
    }

    #[test]
    fn power_sum_examples() {
        let (sq, ext) = setup(3, "vars:1; f1 = x1^2");
        assert_eq!(power_sum(&sq, &ext, 1).unwrap().coeffs(), &[2]);
        let (id, ext) = setup(3, "vars:1; f1 = x1");
        assert_eq!(power_sum(&id, &ext, 1).unwrap().coeffs(), &[0]);
        assert_eq!(power_sum(&id, &ext, 2).unwrap().coeffs(), &[2]);
        assert_eq!(power_sum(&id, &ext, 0), Err(PadicError::ZeroPower));
    }

    #[test]
    fn u_examples() {
        let (sq, ext) = setup(3, "vars:1; f1 = x1^2");
        assert_eq!(u_invariant(&sq, &ext, 2).unwrap().u, Some(1));
        let (id, ext) = setup(3, "vars:1; f1 = x1");
        let r = u_invariant(&id, &ext, 2).unwrap();
        assert_eq!(r.u, Some(2));
        assert_eq!(r.nonzero_sum_valuation, Some(0));
        let (zc, ext) = setup(19, "vars:1; f1 = x1^7 + x1");
        let u = u_invariant(&zc, &ext, 18).unwrap().u.unwrap();
        assert!(u >= 6);
    }

    #[test]
    fn u_not_found_below_cap() {
        let (id, ext) = setup(5, "vars:1; f1 = x1");
        assert_eq!(
            u_invariant(&id, &ext, 3).unwrap(),
            USearchResult { u: None, cap: 3, nonzero_sum_valuation: None }
        );
    }

    #[test]
    fn char_sum_examples() {
        assert_eq!(char_sum(5, 3).unwrap(), 0);
        assert_eq!(char_sum(5, 4).unwrap(), 4);
        assert_eq!(char_sum(5, 0).unwrap(), 5);
        assert_eq!(char_sum(4, 3).unwrap(), 3);
    }

    #[test]
    fn multinomial_examples() {
        let c = multinomial_valuation_check(2, 2, &[2, 2]).unwrap();
        assert_eq!((c.t, c.multinomial.clone(), c.valuation, c.holds), (1, 6u32.into(), 1, true));
        let c = multinomial_valuation_check(3, 2, &[3, 3, 3]).unwrap();
        assert_eq!((c.t, c.multinomial.clone(), c.valuation, c.holds), (1, 1680u32.into(), 1, true));
        let c = multinomial_valuation_check(2, 1, &[1, 1]).unwrap();
        assert_eq!((c.t, c.multinomial.clone(), c.valuation, c.holds), (1, 2u32.into(), 1, true));
        assert_eq!(
            multinomial_valuation_check(2, 2, &[1, 2]),
            Err(PadicError::PartsSumMismatch { sum: 3, expected: 4 })
        );
        assert_eq!(multinomial_valuation_check(2, 1, &[2, 0]), Err(PadicError::ZeroPart));
    }
}
