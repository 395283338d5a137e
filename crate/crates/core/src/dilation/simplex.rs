//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimises `cost · x` over columns `< allowed`. Returns false when
    /// unbounded.
    fn optimise(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() {
                        reduced -= &cost[self.basis[i]] * &row[j];
                    }
                }
                reduced.is_negative()
            });
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, j);
        }
    }
}

/// Minimises `c · x` subject to `A x = b`, `x >= 0`.
pub fn minimize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpSolution {
    let m = a.len();
    let nvars = c.len();
    let width = nvars + m;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<BigRational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        r.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        r.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(r);
    }
    let mut t = Tableau {
        rows,
        basis: (nvars..width).collect(),
        width,
    };

    let phase1: Vec<BigRational> = (0..width)
        .map(|j| if j < nvars { BigRational::zero() } else { BigRational::one() })
        .collect();
    t.optimise(&phase1, width);
    let infeasibility: BigRational = (0..m)
        .filter(|&i| t.basis[i] >= nvars)
        .map(|i| t.rhs(i).clone())
        .sum();
    if infeasibility.is_positive() {
        return LpSolution::Infeasible;
    }

    // drive remaining (zero-valued) artificials out of the basis
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= nvars {
            match (0..nvars).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut phase2 = c.to_vec();
    phase2.extend((0..m).map(|_| BigRational::zero()));
    if !t.optimise(&phase2, nvars) {
        return LpSolution::Unbounded;
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (i, &j) in t.basis.iter().enumerate() {
        x[j] = t.rhs(i).clone();
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpSolution::Optimal { value, x }
}
