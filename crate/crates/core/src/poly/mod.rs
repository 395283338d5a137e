//! Sparse multivariate polynomials over a [`Field`] and square polynomial
//! maps `F_q^n -> F_q^n`.

mod parse;
mod render;

pub use parse::parse_map;
pub use render::{render_map, render_poly};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Elem, ExtensionCtx, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown variable `{name}` at line {line}, column {col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("map has {vars} variables but {components} components")]
    ComponentCountMismatch { vars: usize, components: usize },
    #[error("operands do not belong to the map's field or arity")]
    FieldMismatch,
    #[error("map is constant")]
    ConstantMap,
}

/// Exponent vector `(d_1, ..., d_n)` of a monomial.
///
/// Ordered graded-lexicographically: total degree first, then `x1`'s
/// exponent, then `x2`'s, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// `x_i` as an exponent vector (`i` zero-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    /// Number of nonzero entries.
    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|&&d| d != 0).count()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&d| d > 0)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> ExponentVector {
        ExponentVector(self.0.iter().map(|&a| a * k).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// `Σ a_j X^{D_j}` with nonzero coefficients and distinct exponents.
///
/// The polynomial does not own its field; every arithmetic method takes the
/// field the coefficients live in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Elem>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Elem) -> Self {
        let mut p = SparsePoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(ExponentVector::zero(nvars), c);
        }
        p
    }

    pub fn monomial(exponents: ExponentVector, c: Elem) -> Self {
        let mut p = SparsePoly::zero(exponents.len());
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// The variable `x_i`, zero-based.
    pub fn variable(nvars: usize, i: usize) -> Self {
        SparsePoly::monomial(ExponentVector::unit(nvars, i), Elem::ONE)
    }

    pub fn from_terms(
        field: &Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (ExponentVector, Elem)>,
    ) -> Self {
        let mut p = SparsePoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(field, e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, Elem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Elem {
        self.terms.get(e).copied().unwrap_or(Elem::ZERO)
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::total_degree).max()
    }

    pub fn add_term(&mut self, field: &Field, e: ExponentVector, c: Elem) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let sum = field.add(self.coefficient(&e), c);
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn add(&self, field: &Field, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(field, e.clone(), c);
        }
        out
    }

    pub fn scale(&self, field: &Field, c: Elem) -> SparsePoly {
        SparsePoly::from_terms(
            field,
            self.nvars,
            self.terms().map(|(e, a)| (e.clone(), field.mul(a, c))),
        )
    }

    pub fn mul(&self, field: &Field, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(field, e1.add(e2), field.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, field: &Field, k: u32) -> SparsePoly {
        let mut out = SparsePoly::constant(self.nvars, Elem::ONE);
        for _ in 0..k {
            out = out.mul(field, self);
        }
        out
    }

    pub fn map_coeffs(&self, field: &Field, f: impl Fn(Elem) -> Elem) -> SparsePoly {
        SparsePoly::from_terms(field, self.nvars, self.terms().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn eval(&self, field: &Field, point: &[Elem]) -> Elem {
        self.terms().fold(Elem::ZERO, |acc, (e, c)| {
            let m = e
                .entries()
                .iter()
                .zip(point)
                .fold(c, |m, (&d, &x)| field.mul(m, field.pow(x, d as u64)));
            field.add(acc, m)
        })
    }
}

/// A square map `f = (f_1, ..., f_n)` on `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    field: Arc<Field>,
    nvars: usize,
    components: Vec<SparsePoly>,
}

impl PolyMap {
    pub fn new(field: Arc<Field>, components: Vec<SparsePoly>) -> Result<PolyMap, PolyError> {
        let nvars = components.first().map_or(0, SparsePoly::nvars);
        if components.iter().any(|c| c.nvars() != nvars) || nvars != components.len() || nvars == 0 {
            return Err(PolyError::ComponentCountMismatch {
                vars: nvars,
                components: components.len(),
            });
        }
        Ok(PolyMap {
            field,
            nvars,
            components,
        })
    }

    /// The identity map on `F_q^n`.
    pub fn identity(field: Arc<Field>, n: usize) -> PolyMap {
        let components = (0..n).map(|i| SparsePoly::variable(n, i)).collect();
        PolyMap::new(field, components).unwrap()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[SparsePoly] {
        &self.components
    }

    /// `q^n`, the size of the domain.
    pub fn domain_size(&self) -> u128 {
        (self.field.order() as u128).pow(self.nvars as u32)
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Vec<Elem>, PolyError> {
        if point.len() != self.nvars || point.iter().any(|&x| !self.field.contains(x)) {
            return Err(PolyError::FieldMismatch);
        }
        Ok(self
            .components
            .iter()
            .map(|c| c.eval(&self.field, point))
            .collect())
    }

    /// `max_i deg f_i`.
    pub fn degree(&self) -> Result<u32, PolyError> {
        match self.components.iter().filter_map(SparsePoly::total_degree).max() {
            Some(d) if d > 0 => Ok(d),
            _ => Err(PolyError::ConstantMap),
        }
    }

    /// Distinct nonconstant exponent vectors of all components, in order of
    /// first appearance (components in order, terms in descending
    /// graded-lex order).
    pub fn degree_matrix(&self) -> Result<DegreeMatrix, PolyError> {
        let mut columns: Vec<ExponentVector> = Vec::new();
        for c in &self.components {
            for (e, _) in c.terms().rev() {
                if !e.is_zero() && !columns.contains(e) {
                    columns.push(e.clone());
                }
            }
        }
        if columns.is_empty() {
            return Err(PolyError::ConstantMap);
        }
        Ok(DegreeMatrix {
            nvars: self.nvars,
            columns,
        })
    }

    /// Zero-based indices of variables occurring in no term.
    pub fn unused_variables(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| {
                self.components
                    .iter()
                    .all(|c| c.support().all(|e| e.entries()[i] == 0))
            })
            .collect()
    }

    /// `g = f_1 e_1 + ... + f_n e_n` with coefficients in `F_{q^n}`.
    pub fn combine(&self, ctx: &ExtensionCtx) -> Result<SparsePoly, PolyError> {
        if **ctx.base() != *self.field || ctx.degree() != self.nvars {
            return Err(PolyError::FieldMismatch);
        }
        let top = ctx.top();
        let mut g = SparsePoly::zero(self.nvars);
        for (comp, &e) in self.components.iter().zip(ctx.basis()) {
            for (exp, c) in comp.terms() {
                g.add_term(top, exp.clone(), top.mul(ctx.embed(c), e));
            }
        }
        Ok(g)
    }
}

/// The `n × m` matrix of distinct exponent vectors of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMatrix {
    nvars: usize,
    columns: Vec<ExponentVector>,
}

impl DegreeMatrix {
    pub fn new(nvars: usize, columns: Vec<ExponentVector>) -> Self {
        debug_assert!(columns.iter().all(|c| c.len() == nvars));
        DegreeMatrix { nvars, columns }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn columns(&self) -> &[ExponentVector] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Largest column sum.
    pub fn max_degree(&self) -> u32 {
        self.columns.iter().map(ExponentVector::total_degree).max().unwrap_or(0)
    }

    /// Zero-based coordinates that no column touches.
    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.columns.iter().all(|c| c.entries()[i] == 0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Arc<Field> {
        Arc::new(Field::with_order(q, None).unwrap())
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn fig1_map_degree_and_matrix() {
        let m = parse_map("vars:2; f1 = x1 + x1^3*x2; f2 = x2", f(5)).unwrap();
        assert_eq!(m.degree().unwrap(), 4);
        let d = m.degree_matrix().unwrap();
        assert_eq!(d.columns(), &[ev(&[3, 1]), ev(&[1, 0]), ev(&[0, 1])]);
        assert!(m.unused_variables().is_empty());
    }

    #[test]
    fn zan_cao_degree_and_eval() {
        let field = f(19);
        let m = parse_map("vars:1; f1 = x1^7 + x1", field.clone()).unwrap();
        assert_eq!(m.degree().unwrap(), 7);
        assert_eq!(m.degree_matrix().unwrap().columns(), &[ev(&[7]), ev(&[1])]);
        assert_eq!(m.eval(&[field.from_int(2)]).unwrap(), vec![field.from_int(16)]);
    }

    #[test]
    fn eval_fig1_point() {
        let field = f(5);
        let m = parse_map("vars:2; f1 = x1 + x1^3*x2; f2 = x2", field.clone()).unwrap();
        let one = field.one();
        assert_eq!(m.eval(&[one, one]).unwrap(), vec![field.from_int(2), one]);
        assert_eq!(m.eval(&[Elem::ZERO, Elem::ZERO]).unwrap(), vec![Elem::ZERO; 2]);
        assert_eq!(m.eval(&[one]), Err(PolyError::FieldMismatch));
        assert_eq!(m.eval(&[one, Elem::from_index(9)]), Err(PolyError::FieldMismatch));
    }

    #[test]
    fn identity_degree() {
        let m = PolyMap::identity(f(3), 2);
        assert_eq!(m.degree().unwrap(), 1);
        assert_eq!(m.degree_matrix().unwrap().columns(), &[ev(&[1, 0]), ev(&[0, 1])]);
    }

    #[test]
    fn constant_map_errors() {
        let m = parse_map("vars:2; f1 = 3; f2 = 0", f(5)).unwrap();
        assert_eq!(m.degree(), Err(PolyError::ConstantMap));
        assert_eq!(m.degree_matrix(), Err(PolyError::ConstantMap));
        assert_eq!(m.unused_variables(), vec![0, 1]);
    }

    #[test]
    fn unused_variable_detection() {
        let m = parse_map("vars:2; f1 = x1; f2 = x1^2", f(3)).unwrap();
        assert_eq!(m.unused_variables(), vec![1]);
    }

    #[test]
    fn combine_identity_over_f2() {
        let field = f(2);
        let ctx = ExtensionCtx::new(field.clone(), 2).unwrap();
        let g = PolyMap::identity(field, 2).combine(&ctx).unwrap();
        let alpha = ctx.top().generator();
        assert_eq!(g.coefficient(&ev(&[1, 0])), Elem::ONE);
        assert_eq!(g.coefficient(&ev(&[0, 1])), alpha);
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn combine_shared_support() {
        let field = f(2);
        let ctx = ExtensionCtx::new(field.clone(), 2).unwrap();
        let m = parse_map("vars:2; f1 = x1 + x2; f2 = x1 + x2", field).unwrap();
        let g = m.combine(&ctx).unwrap();
        let top = ctx.top();
        let one_plus_alpha = top.add(Elem::ONE, top.generator());
        assert_eq!(g.coefficient(&ev(&[1, 0])), one_plus_alpha);
        assert_eq!(g.coefficient(&ev(&[0, 1])), one_plus_alpha);
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn combine_rejects_wrong_context() {
        let ctx = ExtensionCtx::new(f(3), 2).unwrap();
        assert_eq!(
            PolyMap::identity(f(2), 2).combine(&ctx),
            Err(PolyError::FieldMismatch)
        );
        assert_eq!(
            PolyMap::identity(f(3), 3).combine(&ctx),
            Err(PolyError::FieldMismatch)
        );
    }

    #[test]
    fn grlex_order() {
        let mut v = vec![ev(&[0, 2]), ev(&[1, 1]), ev(&[2, 0]), ev(&[3, 0]), ev(&[0, 0])];
        v.sort();
        assert_eq!(v, vec![ev(&[0, 0]), ev(&[0, 2]), ev(&[1, 1]), ev(&[2, 0]), ev(&[3, 0])]);
    }

    #[test]
    fn arithmetic_cancels() {
        let field = f(3);
        let x = SparsePoly::variable(1, 0);
        let s = x.add(&field, &x.scale(&field, field.from_int(2)));
        assert!(s.is_zero());
        let sq = x.add(&field, &SparsePoly::constant(1, Elem::ONE)).pow(&field, 3);
        // (x+1)^3 = x^3 + 1 in characteristic 3
        assert_eq!(sq.len(), 2);
    }
}
