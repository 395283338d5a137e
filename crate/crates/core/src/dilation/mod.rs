//! Newton polytope dilation factors.
//!
//! * `μ_f`, the least `k` such that `kΔ(f)` holds a lattice point with all
//!   coordinates `>= 1`, computed as `min_W LP(W)` where `LP(W)` minimises
//!   `Σα_j` subject to `Σ α_j D_j = W`, `α >= 0`.
//! * `ω_f`, the least `Σ k_j` with `k_j ∈ {0..q-1}` and `Σ k_j D_j` a
//!   positive multiple of `q-1` in every coordinate.
//! * `γ`, the smallest number of vectors from a set whose sum is strictly
//!   positive.

mod simplex;

pub use simplex::{minimize, LpSolution};

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::poly::{DegreeMatrix, ExponentVector, PolyError, PolyMap};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Largest residue/positivity state space (times column count) searched.
pub const STATE_LIMIT: usize = 1 << 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DilationError {
    #[error("variables {0:?} (zero-based) occur in no term")]
    UnusedVariables(Vec<usize>),
    #[error("coordinate {0} (zero-based) is zero in every vector")]
    UncoverableCoordinate(usize),
    #[error("search space of {0} states exceeds the limit")]
    StateSpaceTooLarge(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Convex hull of the degree-matrix columns and the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolytope {
    nvars: usize,
    generators: Vec<ExponentVector>,
}

impl NewtonPolytope {
    pub fn new(matrix: &DegreeMatrix) -> Self {
        let mut generators = vec![ExponentVector::zero(matrix.nvars())];
        generators.extend(matrix.columns().iter().cloned());
        NewtonPolytope {
            nvars: matrix.nvars(),
            generators,
        }
    }

    pub fn of_map(f: &PolyMap) -> Result<Self, PolyError> {
        Ok(NewtonPolytope::new(&f.degree_matrix()?))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Generators including the origin (first).
    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }

    /// Least `k` with `point ∈ kΔ`, or `None` if no dilation contains it.
    pub fn dilation_to_reach(&self, point: &ExponentVector) -> Option<Rational> {
        let matrix = DegreeMatrix::new(self.nvars, self.generators[1..].to_vec());
        match lp_min_combination(&matrix, point) {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Infeasible => None,
        }
    }

    /// Whether `point ∈ kΔ`.
    pub fn dilate_contains(&self, k: &Rational, point: &ExponentVector) -> bool {
        if point.is_zero() {
            return true;
        }
        self.dilation_to_reach(point).is_some_and(|v| &v <= k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, alpha: Vec<Rational> },
    Infeasible,
}

/// `min Σα_j` subject to `Σ α_j D_j = target`, `α >= 0`, exactly.
pub fn lp_min_combination(matrix: &DegreeMatrix, target: &ExponentVector) -> LpOutcome {
    let n = matrix.nvars();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            matrix
                .columns()
                .iter()
                .map(|c| Rational::from_integer(c.entries()[i].into()))
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = target
        .entries()
        .iter()
        .map(|&w| Rational::from_integer(w.into()))
        .collect();
    let cost = vec![Rational::one(); matrix.len()];
    match minimize(&rows, &rhs, &cost) {
        LpSolution::Optimal { value, x } => LpOutcome::Optimal { value, alpha: x },
        LpSolution::Infeasible => LpOutcome::Infeasible,
        LpSolution::Unbounded => unreachable!("costs are nonnegative"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuResult {
    pub mu: Rational,
    pub witness_target: ExponentVector,
    pub witness_coeffs: Vec<Rational>,
}

impl MuResult {
    /// Replays the witness against `matrix`.
    pub fn verify(&self, matrix: &DegreeMatrix) -> bool {
        let sum: Rational = self.witness_coeffs.iter().sum();
        let nonneg = self.witness_coeffs.iter().all(|a| a >= &Rational::zero());
        let reaches = (0..matrix.nvars()).all(|i| {
            let coord: Rational = matrix
                .columns()
                .iter()
                .zip(&self.witness_coeffs)
                .map(|(c, a)| a * Rational::from_integer(c.entries()[i].into()))
                .sum();
            coord == Rational::from_integer(self.witness_target.entries()[i].into())
        });
        nonneg && sum == self.mu && reaches && self.witness_target.is_strictly_positive()
    }
}

fn compositions(total: u32, parts: usize, max_part: u32, out: &mut Vec<Vec<u32>>) {
    fn rec(rest: u32, parts: usize, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            if (1..=max_part).contains(&rest) {
                cur.push(rest);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let hi = max_part.min(rest.saturating_sub(parts as u32 - 1));
        for v in 1..=hi {
            cur.push(v);
            rec(rest - v, parts - 1, max_part, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, max_part, &mut Vec::with_capacity(parts), out);
}

/// `μ` of a degree matrix whose columns cover every coordinate.
///
/// Targets are scanned in layers of equal coordinate sum `s`; since
/// `Σ_i W_i <= d·Σ_j α_j`, a layer with `s/d >= μ_best` cannot improve the
/// optimum and the scan stops. Ties go to the smaller layer, then to the
/// lexicographically smaller target.
pub fn mu_of_matrix(matrix: &DegreeMatrix) -> Result<MuResult, DilationError> {
    if let Some(&i) = matrix.uncovered().first() {
        return Err(DilationError::UncoverableCoordinate(i));
    }
    let n = matrix.nvars();
    let d = matrix.max_degree();
    let bound = n as u32 * d;
    let mut best: Option<MuResult> = None;
    for s in n as u32..=n as u32 * bound {
        if let Some(b) = &best {
            if Rational::from_integer(s.into()) >= &b.mu * Rational::from_integer(d.into()) {
                break;
            }
        }
        let mut targets = Vec::new();
        compositions(s, n, bound, &mut targets);
        let layer_best = targets
            .into_par_iter()
            .filter_map(|w| {
                let target = ExponentVector::new(w);
                match lp_min_combination(matrix, &target) {
                    LpOutcome::Optimal { value, alpha } => Some(MuResult {
                        mu: value,
                        witness_target: target,
                        witness_coeffs: alpha,
                    }),
                    LpOutcome::Infeasible => None,
                }
            })
            .min_by(|a, b| {
                a.mu.cmp(&b.mu)
                    .then_with(|| a.witness_target.entries().cmp(b.witness_target.entries()))
            });
        if let Some(cand) = layer_best {
            if best.as_ref().is_none_or(|b| cand.mu < b.mu) {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("covering columns give a feasible target"))
}

/// Minimal dilation factor `μ_f`.
pub fn mu(f: &PolyMap) -> Result<MuResult, DilationError> {
    let unused = f.unused_variables();
    if !unused.is_empty() {
        return Err(DilationError::UnusedVariables(unused));
    }
    mu_of_matrix(&f.degree_matrix()?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaResult {
    pub omega: u64,
    pub witness_k: Vec<u64>,
}

impl OmegaResult {
    /// Replays the witness: multiplicities in `[0, q-1]` summing to `omega`
    /// whose combination is a positive multiple of `q-1` everywhere.
    pub fn verify(&self, matrix: &DegreeMatrix, q: u64) -> bool {
        let m = q - 1;
        let in_range = self.witness_k.iter().all(|&k| k <= m);
        let sums = self.witness_k.iter().sum::<u64>() == self.omega;
        let hits = (0..matrix.nvars()).all(|i| {
            let coord: u64 = matrix
                .columns()
                .iter()
                .zip(&self.witness_k)
                .map(|(c, &k)| c.entries()[i] as u64 * k)
                .sum();
            coord > 0 && coord.is_multiple_of(m)
        });
        in_range && sums && hits
    }
}

/// States are pairs (residues mod q-1, positivity mask), packed as
/// `residue_rank · 2^n + mask`.
struct StateGraph {
    size: usize,
    goal: usize,
    // transitions[j][s]: state after adding one copy of column j
    transitions: Vec<Vec<u32>>,
}

impl StateGraph {
    fn new(matrix: &DegreeMatrix, q: u64) -> Result<Self, DilationError> {
        let n = matrix.nvars();
        let modulus = (q - 1) as usize;
        let masks = 1usize << n;
        let residues = modulus
            .checked_pow(n as u32)
            .filter(|r| r.saturating_mul(masks) <= STATE_LIMIT)
            .ok_or(DilationError::StateSpaceTooLarge(usize::MAX))?;
        let size = residues * masks;
        if size.saturating_mul(matrix.len().max(1)) > STATE_LIMIT {
            return Err(DilationError::StateSpaceTooLarge(size * matrix.len()));
        }
        let transitions = matrix
            .columns()
            .iter()
            .map(|col| {
                let delta: Vec<usize> = col.entries().iter().map(|&d| d as usize % modulus).collect();
                let mask: usize = col
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(i, _)| 1 << i)
                    .sum();
                (0..size)
                    .map(|s| {
                        let (mut rank, bits) = (s / masks, s % masks);
                        let mut next_rank = 0;
                        let mut weight = 1;
                        for &dl in &delta {
                            let r = rank % modulus;
                            rank /= modulus;
                            next_rank += (r + dl) % modulus * weight;
                            weight *= modulus;
                        }
                        (next_rank * masks + (bits | mask)) as u32
                    })
                    .collect()
            })
            .collect();
        Ok(StateGraph {
            size,
            goal: masks - 1,
            transitions,
        })
    }

    /// Unit-cost breadth-first search from the zero state.
    fn bfs_distance(&self) -> Option<u64> {
        let mut dist = vec![u32::MAX; self.size];
        let mut queue = VecDeque::new();
        dist[0] = 0;
        queue.push_back(0usize);
        while let Some(s) = queue.pop_front() {
            if s == self.goal && dist[s] > 0 {
                return Some(dist[s] as u64);
            }
            for t in &self.transitions {
                let next = t[s] as usize;
                if dist[next] == u32::MAX {
                    dist[next] = dist[s] + 1;
                    if next == self.goal {
                        return Some(dist[next] as u64);
                    }
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// Lexicographically smallest multiplicity vector of minimal weight, with
    /// each multiplicity in `[0, cap]`. `suffix[j][s]` is the least cost to
    /// reach the goal from `s` using columns `j..`.
    fn lex_min_witness(&self, cap: u64, total: u64) -> Vec<u64> {
        const INF: u32 = u32::MAX;
        let m = self.transitions.len();
        let mut suffix = vec![vec![INF; self.size]; m + 1];
        suffix[m][self.goal] = 0;
        for j in (0..m).rev() {
            let (head, tail) = suffix.split_at_mut(j + 1);
            let (cur, next) = (&mut head[j], &tail[0]);
            for (s, slot) in cur.iter_mut().enumerate() {
                let mut state = s;
                for t in 0..=cap as u32 {
                    if next[state] != INF {
                        *slot = (*slot).min(next[state] + t);
                    }
                    state = self.transitions[j][state] as usize;
                }
            }
        }
        debug_assert_eq!(suffix[0][0] as u64, total);
        let mut state = 0usize;
        let mut remaining = total as u32;
        let mut witness = Vec::with_capacity(m);
        for j in 0..m {
            let mut s = state;
            let chosen = (0..=cap as u32)
                .find(|&t| {
                    let ok = suffix[j + 1][s] != INF && suffix[j + 1][s] + t == remaining;
                    if !ok {
                        s = self.transitions[j][s] as usize;
                    }
                    ok
                })
                .expect("suffix table is consistent");
            witness.push(chosen as u64);
            remaining -= chosen;
            state = s;
        }
        witness
    }
}

/// `ω` of a degree matrix over `F_q`.
///
/// The search ignores the cap `k_j <= q-1`: a multiplicity `k >= q` can be
/// lowered by `q-1` without changing residues or positivity, so the capped
/// and uncapped minima agree.
pub fn omega_of_matrix(matrix: &DegreeMatrix, q: u64) -> Result<OmegaResult, DilationError> {
    if let Some(&i) = matrix.uncovered().first() {
        return Err(DilationError::UncoverableCoordinate(i));
    }
    let graph = StateGraph::new(matrix, q)?;
    let omega = graph
        .bfs_distance()
        .expect("covering columns reach the goal state");
    let witness_k = graph.lex_min_witness(q - 1, omega);
    Ok(OmegaResult { omega, witness_k })
}

/// Integral dilation factor `ω_f`.
pub fn omega(f: &PolyMap) -> Result<OmegaResult, DilationError> {
    let unused = f.unused_variables();
    if !unused.is_empty() {
        return Err(DilationError::UnusedVariables(unused));
    }
    omega_of_matrix(&f.degree_matrix()?, f.field().order())
}

/// Size of the smallest subset of `vectors` with a strictly positive sum.
pub fn gamma(vectors: &[ExponentVector]) -> Result<usize, DilationError> {
    let n = vectors.first().map_or(0, ExponentVector::len);
    if let Some(i) = (0..n).find(|&i| vectors.iter().all(|v| v.entries()[i] == 0)) {
        return Err(DilationError::UncoverableCoordinate(i));
    }
    let masks: Vec<u64> = vectors
        .iter()
        .map(|v| {
            v.entries()
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(i, _)| 1u64 << i)
                .sum()
        })
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    fn covers(masks: &[u64], start: usize, left: usize, acc: u64, full: u64) -> bool {
        if acc == full {
            return true;
        }
        if left == 0 {
            return false;
        }
        (start..masks.len()).any(|i| covers(masks, i + 1, left - 1, acc | masks[i], full))
    }

    Ok((1..=n.max(1))
        .find(|&size| covers(&masks, 0, size, 0, full))
        .expect("a cover of size at most n exists"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub omega: u64,
    pub mu_times_qminus1: Rational,
    pub n_qminus1_over_d: Rational,
    pub holds: bool,
    /// `deg f >= n`.
    pub degree_at_least_n: bool,
}

/// Evaluates `ω_f >= μ_f(q-1) >= n(q-1)/d` exactly.
pub fn chain_check(f: &PolyMap) -> Result<ChainReport, DilationError> {
    let om = omega(f)?;
    let mu = mu(f)?;
    let q1 = Rational::from_integer((f.field().order() - 1).into());
    let n = f.nvars() as u64;
    let d = f.degree()? as u64;
    let mu_times_qminus1 = &mu.mu * &q1;
    let n_qminus1_over_d = Rational::new((n * (f.field().order() - 1)).into(), d.into());
    let holds = Rational::from_integer(om.omega.into()) >= mu_times_qminus1
        && mu_times_qminus1 >= n_qminus1_over_d;
    Ok(ChainReport {
        omega: om.omega,
        mu_times_qminus1,
        n_qminus1_over_d,
        holds,
        degree_at_least_n: d >= n,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gf::Field;
    use crate::poly::parse_map;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn matrix(cols: &[&[u32]]) -> DegreeMatrix {
        DegreeMatrix::new(cols[0].len(), cols.iter().map(|c| ev(c)).collect())
    }

    fn map(q: u64, text: &str) -> PolyMap {
        parse_map(text, Arc::new(Field::with_order(q, None).unwrap())).unwrap()
    }

    #[test]
    fn lp_single_column_matches() {
        let d = matrix(&[&[7], &[1]]);
        assert_eq!(
            lp_min_combination(&d, &ev(&[7])),
            LpOutcome::Optimal { value: rational(1, 1), alpha: vec![rational(1, 1), rational(0, 1)] }
        );
        // (1/7)·(7) beats (1)·(1)
        assert_eq!(
            lp_min_combination(&d, &ev(&[1])),
            LpOutcome::Optimal { value: rational(1, 7), alpha: vec![rational(1, 7), rational(0, 1)] }
        );
    }

    #[test]
    fn lp_fig1_h_target() {
        let d = matrix(&[&[4, 0], &[0, 4]]);
        assert_eq!(
            lp_min_combination(&d, &ev(&[1, 1])),
            LpOutcome::Optimal { value: rational(1, 2), alpha: vec![rational(1, 4), rational(1, 4)] }
        );
    }

    #[test]
    fn lp_infeasible_target() {
        let d = matrix(&[&[1, 0], &[3, 1]]);
        assert_eq!(lp_min_combination(&d, &ev(&[1, 2])), LpOutcome::Infeasible);
    }

    #[test]
    fn mu_fig1() {
        let f = mu_of_matrix(&matrix(&[&[1, 0], &[3, 1]])).unwrap();
        assert_eq!(f.mu, rational(1, 1));
        assert_eq!(f.witness_target, ev(&[3, 1]));
        let h = mu_of_matrix(&matrix(&[&[4, 0], &[0, 4]])).unwrap();
        assert_eq!(h.mu, rational(1, 2));
        assert_eq!(h.witness_target, ev(&[1, 1]));
    }

    #[test]
    fn mu_univariate_is_reciprocal_degree() {
        let m = map(19, "vars:1; f1 = x1^7 + x1");
        let r = mu(&m).unwrap();
        assert_eq!(r.mu, rational(1, 7));
        assert!(r.verify(&m.degree_matrix().unwrap()));
    }

    #[test]
    fn omega_zan_cao() {
        let m = map(19, "vars:1; f1 = x1^7 + x1");
        let r = omega(&m).unwrap();
        assert_eq!(r, OmegaResult { omega: 6, witness_k: vec![2, 4] });
        assert!(r.verify(&m.degree_matrix().unwrap(), 19));
    }

    #[test]
    fn omega_fig1_h_over_f5() {
        let r = omega_of_matrix(&matrix(&[&[4, 0], &[0, 4]]), 5).unwrap();
        assert_eq!(r, OmegaResult { omega: 2, witness_k: vec![1, 1] });
    }

    #[test]
    fn omega_norm_shape() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for a in 1..4 {
                let r = omega_of_matrix(&matrix(&[&[1, 0], &[a, 1]]), q).unwrap();
                assert_eq!(r, OmegaResult { omega: q - 1, witness_k: vec![0, q - 1] });
            }
        }
    }

    #[test]
    fn q2_omega_is_gamma() {
        let d = matrix(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1], &[1, 1, 0]]);
        assert_eq!(omega_of_matrix(&d, 2).unwrap().omega as usize, gamma(d.columns()).unwrap());
    }

    #[test]
    fn unused_variables_rejected() {
        let m = map(3, "vars:2; f1 = x1; f2 = x1^2");
        assert_eq!(mu(&m), Err(DilationError::UnusedVariables(vec![1])));
        assert_eq!(omega(&m), Err(DilationError::UnusedVariables(vec![1])));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&[ev(&[3, 1])]).unwrap(), 1);
        assert_eq!(gamma(&[ev(&[2, 0]), ev(&[0, 2])]).unwrap(), 2);
        assert_eq!(gamma(&[ev(&[1, 0]), ev(&[5, 1])]).unwrap(), 1);
        assert_eq!(
            gamma(&[ev(&[1, 0]), ev(&[2, 0])]),
            Err(DilationError::UncoverableCoordinate(1))
        );
    }

    #[test]
    fn chain_examples() {
        let zc = chain_check(&map(19, "vars:1; f1 = x1^7 + x1")).unwrap();
        assert_eq!(zc.omega, 6);
        assert_eq!(zc.mu_times_qminus1, rational(18, 7));
        assert_eq!(zc.n_qminus1_over_d, rational(18, 7));
        assert!(zc.holds);

        let h = chain_check(&map(5, "vars:2; f1 = x1^4 + x2^4; f2 = x1^4 + x2^4")).unwrap();
        assert_eq!(h.omega, 2);
        assert_eq!(h.mu_times_qminus1, rational(2, 1));
        assert_eq!(h.n_qminus1_over_d, rational(2, 1));
        assert!(h.holds);

        // identity over F_3^2: ω = 4, μ(q-1) = 4, n(q-1)/d = 4
        let id = chain_check(&PolyMap::identity(Arc::new(Field::with_order(3, None).unwrap()), 2)).unwrap();
        assert_eq!(id.omega, 4);
        assert_eq!(id.mu_times_qminus1, rational(4, 1));
        assert_eq!(id.n_qminus1_over_d, rational(4, 1));
        assert!(id.holds);
        assert!(!id.degree_at_least_n);
    }

    #[test]
    fn polytope_membership() {
        let poly = NewtonPolytope::new(&matrix(&[&[1, 0], &[3, 1]]));
        assert_eq!(poly.generators().len(), 3);
        assert!(poly.dilate_contains(&rational(1, 1), &ev(&[3, 1])));
        assert!(!poly.dilate_contains(&rational(1, 2), &ev(&[1, 1])));
        let h = NewtonPolytope::new(&matrix(&[&[4, 0], &[0, 4]]));
        assert!(h.dilate_contains(&rational(1, 2), &ev(&[1, 1])));
    }
}
