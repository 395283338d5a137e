//! Exhaustive image computation. Ground truth for every bound.

use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{Elem, ExtensionCtx, Field};
use crate::poly::{PolyMap, SparsePoly};

/// Largest domain enumerated.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

const CHUNK: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValueSetError {
    #[error("domain of size {size} exceeds the enumeration limit {ENUMERATION_LIMIT}")]
    DomainTooLarge { size: u128 },
    #[error("polynomial does not match the extension context")]
    ContextMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValueSetResult {
    pub cardinality: u64,
    pub is_permutation: bool,
    pub missed_count: u64,
}

impl ValueSetResult {
    fn from_bits(bits: &Bitset, domain: u64) -> Self {
        let cardinality = bits.count();
        ValueSetResult {
            cardinality,
            is_permutation: cardinality == domain,
            missed_count: domain - cardinality,
        }
    }
}

#[derive(Clone)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(bits: u64) -> Self {
        Bitset(vec![0; bits.div_ceil(64) as usize])
    }

    #[inline]
    fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn union(mut self, other: Bitset) -> Bitset {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a |= b;
        }
        self
    }

    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.count_ones() as u64).sum()
    }
}

fn check_domain(q: u64, n: usize) -> Result<u64, ValueSetError> {
    let size = (q as u128).pow(n as u32);
    if size > ENUMERATION_LIMIT as u128 {
        return Err(ValueSetError::DomainTooLarge { size });
    }
    Ok(size as u64)
}

/// Compiled form of a polynomial for fast repeated evaluation.
struct Compiled {
    terms: Vec<(Elem, Vec<u32>)>,
}

impl Compiled {
    fn new(poly: &SparsePoly, coeff: impl Fn(Elem) -> Elem) -> Self {
        Compiled {
            terms: poly
                .terms()
                .map(|(e, c)| (coeff(c), e.entries().to_vec()))
                .collect(),
        }
    }

    #[inline]
    fn eval(&self, field: &Field, point: &[Elem]) -> Elem {
        let mut acc = Elem::ZERO;
        for (c, exps) in &self.terms {
            let mut m = *c;
            for (&d, &x) in exps.iter().zip(point) {
                if d > 0 {
                    m = field.mul(m, field.pow(x, d as u64));
                }
            }
            acc = field.add(acc, m);
        }
        acc
    }
}

/// Visits every point of `F_q^n` in mixed-radix order, in parallel chunks,
/// and ORs together the ranks returned by `rank_of`.
fn enumerate_image<F>(q: u64, n: usize, domain: u64, image_size: u64, rank_of: F) -> Bitset
where
    F: Fn(&[Elem]) -> u64 + Sync,
{
    let chunks = domain.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .fold(
            || Bitset::new(image_size),
            |mut bits, chunk| {
                let start = chunk * CHUNK;
                let end = (start + CHUNK).min(domain);
                let mut point: Vec<Elem> = (0..n)
                    .map(|i| Elem::from_index((start / q.pow(i as u32) % q) as u32))
                    .collect();
                for _ in start..end {
                    bits.set(rank_of(&point));
                    for x in point.iter_mut() {
                        let next = x.index() + 1;
                        if (next as u64) < q {
                            *x = Elem::from_index(next);
                            break;
                        }
                        *x = Elem::ZERO;
                    }
                }
                bits
            },
        )
        .reduce(|| Bitset::new(image_size), Bitset::union)
}

/// `|Im f|` by evaluating `f` at all `q^n` points.
pub fn value_set(f: &PolyMap) -> Result<ValueSetResult, ValueSetError> {
    let field = f.field();
    let q = field.order();
    let n = f.nvars();
    let domain = check_domain(q, n)?;
    let comps: Vec<Compiled> = f.components().iter().map(|c| Compiled::new(c, |c| c)).collect();
    let bits = enumerate_image(q, n, domain, domain, |point| {
        comps
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * q + c.eval(field, point).index() as u64)
    });
    Ok(ValueSetResult::from_bits(&bits, domain))
}

/// Image size of `g: F_q^n -> F_{q^n}` where `g` has coefficients in the top
/// field of `ctx` and variables ranging over the embedded base field.
pub fn value_set_of_univariate(
    g: &SparsePoly,
    ctx: &ExtensionCtx,
) -> Result<ValueSetResult, ValueSetError> {
    let n = ctx.degree();
    if g.nvars() != n {
        return Err(ValueSetError::ContextMismatch);
    }
    let q = ctx.base().order();
    let domain = check_domain(q, n)?;
    let top = ctx.top();
    let compiled = Compiled::new(g, |c| c);
    let bits = enumerate_image(q, n, domain, top.order(), |point| {
        let lifted: Vec<Elem> = point.iter().map(|&x| ctx.embed(x)).collect();
        compiled.eval(top, &lifted).index() as u64
    });
    Ok(ValueSetResult::from_bits(&bits, domain))
}

/// Multiplicity of every value of `f`, indexed by the rank `Σ v_i q^i`.
pub fn value_counts(f: &PolyMap) -> Result<Vec<u64>, ValueSetError> {
    let field = f.field();
    let q = field.order();
    let n = f.nvars();
    let domain = check_domain(q, n)?;
    let mut counts = vec![0u64; domain as usize];
    let mut point = vec![Elem::ZERO; n];
    for _ in 0..domain {
        let v = f.eval(&point).expect("point lies in the domain");
        let rank = v.iter().rev().fold(0u64, |acc, x| acc * q + x.index() as u64);
        counts[rank as usize] += 1;
        for x in point.iter_mut() {
            let next = x.index() + 1;
            if (next as u64) < q {
                *x = Elem::from_index(next);
                break;
            }
            *x = Elem::ZERO;
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::poly::parse_map;

    fn field(q: u64) -> Arc<Field> {
        Arc::new(Field::with_order(q, None).unwrap())
    }

    #[test]
    fn zan_cao_value_set() {
        let m = parse_map("vars:1; f1 = x1^7 + x1", field(19)).unwrap();
        let r = value_set(&m).unwrap();
        assert_eq!(r.cardinality, 13);
        assert!(!r.is_permutation);
        assert_eq!(r.missed_count, 6);
    }

    #[test]
    fn identity_is_permutation() {
        let r = value_set(&PolyMap::identity(field(3), 2)).unwrap();
        assert_eq!(r.cardinality, 9);
        assert!(r.is_permutation);
    }

    #[test]
    fn square_over_f3() {
        let m = parse_map("vars:1; f1 = x1^2", field(3)).unwrap();
        assert_eq!(value_set(&m).unwrap().cardinality, 2);
    }

    #[test]
    fn combined_forms_agree_on_examples() {
        let f2 = field(2);
        let ctx = ExtensionCtx::new(f2.clone(), 2).unwrap();
        let id = PolyMap::identity(f2.clone(), 2);
        assert_eq!(value_set_of_univariate(&id.combine(&ctx).unwrap(), &ctx).unwrap().cardinality, 4);
        let m = parse_map("vars:2; f1 = x1; f2 = x1*x2", f2).unwrap();
        assert_eq!(value_set_of_univariate(&m.combine(&ctx).unwrap(), &ctx).unwrap().cardinality, 3);

        let f19 = field(19);
        let ctx = ExtensionCtx::new(f19.clone(), 1).unwrap();
        let zc = parse_map("vars:1; f1 = x1^7 + x1", f19).unwrap();
        assert_eq!(value_set_of_univariate(&zc.combine(&ctx).unwrap(), &ctx).unwrap().cardinality, 13);
    }

    #[test]
    fn domain_limit() {
        let m = PolyMap::identity(field(16), 7);
        assert!(matches!(value_set(&m), Err(ValueSetError::DomainTooLarge { .. })));
    }

    #[test]
    fn counts_sum_to_domain() {
        let m = parse_map("vars:2; f1 = x1^2 + x2; f2 = x1*x2", field(5)).unwrap();
        let counts = value_counts(&m).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), 25);
        let support = counts.iter().filter(|&&c| c > 0).count() as u64;
        assert_eq!(support, value_set(&m).unwrap().cardinality);
    }

    #[test]
    fn chunked_enumeration_covers_large_domains() {
        // 13^4 spans several chunks; the identity must hit every rank
        let r = value_set(&PolyMap::identity(field(13), 4)).unwrap();
        assert_eq!(r.cardinality, 13u64.pow(4));
    }
}
