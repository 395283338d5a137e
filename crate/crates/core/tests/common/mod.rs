#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use valueset_core::gf::{Elem, Field};
use valueset_core::poly::{DegreeMatrix, ExponentVector, PolyMap, SparsePoly};

pub fn field(q: u64) -> Arc<Field> {
    Arc::new(Field::with_order(q, None).unwrap())
}

/// Random sparse map; every component gets 1..=max_terms terms.
pub fn random_map(rng: &mut impl Rng, field: &Arc<Field>, n: usize, max_terms: usize, max_deg: u32) -> PolyMap {
    let q = field.order() as u32;
    let components = (0..n)
        .map(|_| {
            let terms = rng.gen_range(1..=max_terms);
            SparsePoly::from_terms(
                field,
                n,
                (0..terms).map(|_| {
                    let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_deg)).collect();
                    (ExponentVector::new(e), Elem::from_index(rng.gen_range(1..q)))
                }),
            )
        })
        .collect();
    PolyMap::new(field.clone(), components).unwrap()
}

/// Random map using every variable and of positive degree.
pub fn random_full_map(rng: &mut impl Rng, field: &Arc<Field>, n: usize, max_terms: usize, max_deg: u32) -> PolyMap {
    loop {
        let m = random_map(rng, field, n, max_terms, max_deg);
        if m.unused_variables().is_empty() && m.degree().is_ok() {
            return m;
        }
    }
}

/// Random degree matrix with distinct nonzero columns covering every row.
pub fn random_matrix(rng: &mut impl Rng, n: usize, m: usize, max_entry: u32) -> DegreeMatrix {
    loop {
        let mut cols: Vec<ExponentVector> = Vec::new();
        while cols.len() < m {
            let c = ExponentVector::new((0..n).map(|_| rng.gen_range(0..=max_entry)).collect());
            if !c.is_zero() && !cols.contains(&c) {
                cols.push(c);
            }
        }
        let d = DegreeMatrix::new(n, cols);
        if d.uncovered().is_empty() {
            return d;
        }
    }
}
