use std::sync::Arc;

use super::{fp_poly, Elem, Field, GfError};

/// `F_{q^n}` over `F_q`, realised as a single degree `a·n` extension of
/// `F_p` together with an embedding of `F_q` and an `F_q`-basis.
#[derive(Clone, Debug)]
pub struct ExtensionCtx {
    base: Arc<Field>,
    top: Arc<Field>,
    n: usize,
    root: Elem,
    embed: Vec<Elem>,
    restrict: Vec<u32>,
    basis: Vec<Elem>,
    // inverse of the F_p-matrix whose column j*a + i holds t^i·e_j
    coord_inverse: Vec<Vec<u64>>,
}

const NOT_IN_BASE: u32 = u32::MAX;

impl ExtensionCtx {
    pub fn new(base: Arc<Field>, n: usize) -> Result<ExtensionCtx, GfError> {
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        let p = base.characteristic();
        let a = base.degree();
        let top = Arc::new(Field::new(p, a * n, None)?);

        let base_modulus = base.modulus();
        let root = top
            .elements()
            .find(|&x| top.eval_fp_poly(&base_modulus, x).is_zero())
            .expect("the base modulus splits in the top field");
        let root_powers: Vec<Elem> = (0..a).map(|i| top.pow(root, i as u64)).collect();
        let embed: Vec<Elem> = base
            .elements()
            .map(|c| {
                base.coeffs(c)
                    .iter()
                    .zip(&root_powers)
                    .fold(Elem::ZERO, |acc, (&ci, &r)| {
                        top.add(acc, top.mul(top.from_int(ci as i64), r))
                    })
            })
            .collect();
        let mut restrict = vec![NOT_IN_BASE; top.order() as usize];
        for (i, e) in embed.iter().enumerate() {
            restrict[e.index() as usize] = i as u32;
        }

        let power_basis = |beta: Elem| -> Vec<Elem> {
            (0..n).map(|j| top.pow(beta, j as u64)).collect::<Vec<_>>()
        };
        let mut candidates = std::iter::once(top.generator()).chain(
            top.nonzero_elements()
                .filter(|&x| is_primitive(&top, x)),
        );
        let (basis, coord_inverse) = loop {
            let beta = candidates.next().expect("a primitive element generates F_{q^n}");
            let basis = power_basis(beta);
            if let Some(inv) = coordinate_inverse(&top, &root_powers, &basis) {
                break (basis, inv);
            }
        };

        Ok(ExtensionCtx {
            base,
            top,
            n,
            root,
            embed,
            restrict,
            basis,
            coord_inverse,
        })
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn top(&self) -> &Arc<Field> {
        &self.top
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Image of the base field's generator `t` in the top field.
    pub fn embedded_generator(&self) -> Elem {
        self.root
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn embed(&self, x: Elem) -> Elem {
        self.embed[x.index() as usize]
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn restrict(&self, y: Elem) -> Option<Elem> {
        match self.restrict.get(y.index() as usize) {
            Some(&i) if i != NOT_IN_BASE => Some(Elem::from_index(i)),
            _ => None,
        }
    }

    /// `Σ x_j e_j` for base-field coordinates `x`.
    pub fn from_coords(&self, coords: &[Elem]) -> Elem {
        coords
            .iter()
            .zip(&self.basis)
            .fold(Elem::ZERO, |acc, (&x, &e)| {
                self.top.add(acc, self.top.mul(self.embed(x), e))
            })
    }

    /// Coordinates of `y` in the basis `e_1, ..., e_n`.
    pub fn coords(&self, y: Elem) -> Vec<Elem> {
        let p = self.top.characteristic();
        let a = self.base.degree();
        let digits = self.top.coeffs(y);
        let c: Vec<u32> = self
            .coord_inverse
            .iter()
            .map(|row| {
                (row.iter()
                    .zip(&digits)
                    .map(|(&m, &d)| m * d as u64 % p)
                    .sum::<u64>()
                    % p) as u32
            })
            .collect();
        (0..self.n)
            .map(|j| self.base.elem(&c[j * a..(j + 1) * a]).unwrap())
            .collect()
    }

    /// Field norm `x^{(q^n - 1)/(q - 1)}`, returned as a base element.
    pub fn norm_value(&self, x: Elem) -> Result<Elem, GfError> {
        let q = self.base.order();
        let big_q = self.top.order();
        let y = self.top.pow(x, (big_q - 1) / (q - 1));
        self.restrict(y).ok_or(GfError::NotInBaseField)
    }

    /// `x^{q^i}`.
    pub fn frobenius(&self, x: Elem, i: usize) -> Elem {
        let q = self.base.order();
        (0..i).fold(x, |acc, _| self.top.pow(acc, q))
    }
}

fn is_primitive(field: &Field, x: Elem) -> bool {
    let order = field.order() - 1;
    let mut n = order;
    let mut d = 2;
    let mut factors = Vec::new();
    while d * d <= n {
        if n.is_multiple_of(d) {
            factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors.iter().all(|&r| field.pow(x, order / r) != Elem::ONE)
}

fn coordinate_inverse(top: &Field, root_powers: &[Elem], basis: &[Elem]) -> Option<Vec<Vec<u64>>> {
    let p = top.characteristic();
    let dim = top.degree();
    // columns: t^i e_j in F_p coordinates
    let mut columns = Vec::with_capacity(dim);
    for &e in basis {
        for &r in root_powers {
            columns.push(top.coeffs(top.mul(r, e)));
        }
    }
    let mut m: Vec<Vec<u64>> = (0..dim)
        .map(|row| {
            let mut v: Vec<u64> = columns.iter().map(|c| c[row] as u64).collect();
            v.extend((0..dim).map(|k| u64::from(k == row)));
            v
        })
        .collect();
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| m[r][col] != 0)?;
        m.swap(col, pivot);
        let inv = fp_poly::inv_mod(m[col][col], p);
        for v in m[col].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..dim {
            if r != col && m[r][col] != 0 {
                let factor = m[r][col];
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                    *v = (*v + p * p - factor * pv) % p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[dim..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u64, n: usize) -> ExtensionCtx {
        ExtensionCtx::new(Arc::new(Field::with_order(q, None).unwrap()), n).unwrap()
    }

    #[test]
    fn f4_over_f2_basis() {
        let c = ctx(2, 2);
        assert_eq!(c.top().order(), 4);
        assert_eq!(c.basis(), &[Elem::ONE, c.top().generator()]);
    }

    #[test]
    fn degree_one_is_identity() {
        let c = ctx(5, 1);
        assert_eq!(c.basis(), &[Elem::ONE]);
        for x in c.base().elements() {
            assert_eq!(c.embed(x), x);
        }
    }

    #[test]
    fn prime_subfield_maps_to_constants() {
        let c = ctx(3, 2);
        assert_eq!(c.top().order(), 9);
        assert_eq!(c.embed(Elem::from_index(2)), c.top().from_int(2));
    }

    #[test]
    fn norm_examples() {
        let c = ctx(2, 2);
        let alpha = c.top().generator();
        assert_eq!(c.norm_value(alpha).unwrap(), Elem::ONE);
        assert_eq!(c.norm_value(Elem::ZERO).unwrap(), Elem::ZERO);
        assert_eq!(c.norm_value(Elem::ONE).unwrap(), Elem::ONE);
    }

    #[test]
    fn embedding_is_injective_homomorphism() {
        for (q, n) in [(2, 2), (2, 3), (3, 2), (4, 2), (2, 4), (5, 2), (9, 2), (16, 1), (4, 3)] {
            let c = ctx(q, n);
            let (b, t) = (c.base(), c.top());
            let mut seen = std::collections::HashSet::new();
            for x in b.elements() {
                assert!(seen.insert(c.embed(x)));
                for y in b.elements() {
                    assert_eq!(c.embed(b.mul(x, y)), t.mul(c.embed(x), c.embed(y)));
                    assert_eq!(c.embed(b.add(x, y)), t.add(c.embed(x), c.embed(y)));
                }
            }
            for k in 0..b.characteristic() as i64 {
                assert_eq!(c.embed(b.from_int(k)), t.from_int(k));
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        for (q, n) in [(2, 3), (3, 2), (4, 2), (5, 3), (8, 2)] {
            let c = ctx(q, n);
            for y in c.top().elements() {
                assert_eq!(c.from_coords(&c.coords(y)), y);
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_and_lands_in_base() {
        for (q, n) in [(2, 2), (2, 3), (2, 6), (3, 2), (3, 3), (4, 2), (4, 3), (8, 2), (7, 2)] {
            let c = ctx(q, n);
            let t = c.top();
            for x in t.elements() {
                let nx = c.norm_value(x).unwrap();
                assert_eq!(nx.is_zero(), x.is_zero());
                for y in t.elements() {
                    let lhs = c.norm_value(t.mul(x, y)).unwrap();
                    assert_eq!(lhs, c.base().mul(nx, c.norm_value(y).unwrap()));
                }
            }
        }
    }
}
