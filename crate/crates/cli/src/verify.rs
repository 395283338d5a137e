//! Checks every bound against brute-force value sets on seeded or exhaustive
//! corpora.

use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use valueset_core::dilation::{chain_check, mu, omega, Rational};
use valueset_core::gf::{Elem, ExtensionCtx, Field};
use valueset_core::padic::{u_invariant, SUM_LIMIT};
use valueset_core::poly::{render_map, ExponentVector, PolyMap, SparsePoly};
use valueset_core::valueset::value_set;

use crate::report::bound_checks;
use crate::CliError;

/// Largest exhaustive corpus accepted.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 20;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub qs: Vec<u64>,
    pub ns: Vec<usize>,
    pub count: usize,
    pub seed: u64,
    pub exhaustive: bool,
    /// Degree bound per variable (random) or total degree (exhaustive);
    /// defaults to `q` and 2.
    pub max_degree: Option<u32>,
    pub max_terms: usize,
    pub check_u: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            qs: vec![3],
            ns: vec![2],
            count: 50,
            seed: 7,
            exhaustive: false,
            max_degree: None,
            max_terms: 3,
            check_u: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub q: u64,
    pub n: usize,
    pub detail: String,
    /// The map in the input grammar, with a `# q=` header.
    pub map: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub maps_tested: usize,
    /// Exhaustive candidates skipped for an unused variable or constant
    /// components only.
    pub skipped_unused_variables: usize,
    pub permutations: usize,
    /// Maps with `deg f < n`, where the chain is only reported.
    pub chain_degree_below_n: usize,
    pub u_checked: usize,
    pub violations: Vec<Violation>,
}

impl VerifySummary {
    fn merge(&mut self, o: MapOutcome) {
        self.maps_tested += 1;
        self.permutations += o.is_permutation as usize;
        self.chain_degree_below_n += o.degree_below_n as usize;
        self.u_checked += o.u_checked as usize;
        self.violations.extend(o.violations);
    }
}

#[derive(Clone, Debug, Default)]
pub struct MapOutcome {
    pub is_permutation: bool,
    pub degree_below_n: bool,
    pub u_checked: bool,
    pub violations: Vec<Violation>,
}

pub fn serialize_map(f: &PolyMap) -> String {
    format!("# q={}\n{}", f.field().order(), render_map(f))
}

/// Runs every check on one map. The map must use all its variables.
pub fn check_map(f: &PolyMap, check_u: bool) -> Result<MapOutcome, CliError> {
    let q = f.field().order();
    let n = f.nvars();
    let mut violations = Vec::new();
    let mut flag = |check: &str, detail: String| {
        violations.push(Violation {
            check: check.into(),
            q,
            n,
            detail,
            map: serialize_map(f),
        })
    };

    let d = f.degree()?;
    let matrix = f.degree_matrix()?;
    let mu_res = mu(f)?;
    let om = omega(f)?;
    let chain = chain_check(f)?;
    let vs = value_set(f)?;

    if !mu_res.verify(&matrix) {
        flag("mu_witness", format!("{mu_res:?}"));
    }
    if !om.verify(&matrix, q) {
        flag("omega_witness", format!("{om:?}"));
    }
    if mu_res.mu > Rational::from_integer((n as u64).into()) {
        flag("mu_at_most_n", format!("mu = {}", mu_res.mu));
    }
    if om.omega > n as u64 * (q - 1) {
        flag("omega_at_most_n_qminus1", format!("omega = {}", om.omega));
    }
    if !chain.holds {
        flag(
            "chain",
            format!(
                "omega = {}, mu(q-1) = {}, n(q-1)/d = {}",
                chain.omega, chain.mu_times_qminus1, chain.n_qminus1_over_d
            ),
        );
    }

    let big_q = (q as u128).pow(n as u32) as u64;
    let mut u = None;
    let mut u_checked = false;
    if check_u {
        if big_q as u128 > SUM_LIMIT as u128 {
            return Err(CliError::Envelope(format!("U(f) needs q^n <= {SUM_LIMIT}, got {big_q}")));
        }
        let ext = ExtensionCtx::new(f.field().clone(), n)?;
        let r = u_invariant(f, &ext, big_q - 1)?;
        match (r.u, vs.is_permutation, vs.cardinality) {
            (None, _, 1) => {}
            (None, _, _) => flag("u_found", "U(f) not found below q^n".into()),
            (Some(u), true, _) if u != big_q - 1 => {
                flag("u_permutation", format!("U = {u}, expected {}", big_q - 1))
            }
            (Some(u), _, _) if u < om.omega => flag("u_at_least_omega", format!("U = {u} < omega = {}", om.omega)),
            _ => {}
        }
        u = r.u;
        u_checked = true;
    }

    for c in bound_checks(q, n, d, &mu_res.mu, om.omega, u, Some(&vs)) {
        if !c.satisfied {
            flag(
                &c.name,
                format!("|V_f| = {} exceeds {}/{}", vs.cardinality, c.bound.num, c.bound.den),
            );
        }
    }

    Ok(MapOutcome {
        is_permutation: vs.is_permutation,
        degree_below_n: !chain.degree_at_least_n,
        u_checked,
        violations,
    })
}

/// Sparse random map with `1..=max_terms` terms per component, exponents in
/// `[0, max_degree]` and nonzero coefficients.
pub fn random_sparse_map(
    rng: &mut impl Rng,
    field: &Arc<Field>,
    n: usize,
    max_terms: usize,
    max_degree: u32,
) -> PolyMap {
    let q = field.order() as u32;
    let components = (0..n)
        .map(|_| {
            let terms = rng.gen_range(1..=max_terms.max(1));
            SparsePoly::from_terms(
                field,
                n,
                (0..terms).map(|_| {
                    let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_degree)).collect();
                    (ExponentVector::new(e), Elem::from_index(rng.gen_range(1..q)))
                }),
            )
        })
        .collect();
    PolyMap::new(field.clone(), components).expect("n components in n variables")
}

/// Exponent vectors of total degree `<= max_degree`, in graded order.
fn monomials(n: usize, max_degree: u32) -> Vec<ExponentVector> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if cur.len() == n {
            out.push(ExponentVector::new(cur.clone()));
            return;
        }
        for d in 0..=left {
            cur.push(d);
            rec(n, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Every map whose components have total degree `<= max_degree`.
pub fn all_maps(field: &Arc<Field>, n: usize, max_degree: u32) -> Result<Vec<PolyMap>, CliError> {
    let monos = monomials(n, max_degree);
    let q = field.order() as u128;
    let per_component = q
        .checked_pow(monos.len() as u32)
        .ok_or_else(|| CliError::Envelope("exhaustive corpus too large".into()))?;
    let total = per_component
        .checked_pow(n as u32)
        .filter(|&t| t <= EXHAUSTIVE_LIMIT)
        .ok_or_else(|| CliError::Envelope(format!("exhaustive corpus exceeds {EXHAUSTIVE_LIMIT} maps")))?;
    let component = |mut idx: u128| {
        SparsePoly::from_terms(
            field,
            n,
            monos.iter().map(|e| {
                let c = (idx % q) as u32;
                idx /= q;
                (e.clone(), Elem::from_index(c))
            }),
        )
    };
    Ok((0..total)
        .map(|mut idx| {
            let comps = (0..n)
                .map(|_| {
                    let c = component(idx % per_component);
                    idx /= per_component;
                    c
                })
                .collect();
            PolyMap::new(field.clone(), comps).expect("n components in n variables")
        })
        .collect())
}

fn usable(f: &PolyMap) -> bool {
    f.unused_variables().is_empty() && f.degree().is_ok()
}

/// The maps a verification run checks.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub maps: Vec<PolyMap>,
    /// Exhaustive candidates dropped for leaving a variable unused or being
    /// constant polynomials.
    pub skipped: usize,
}

pub fn corpus(opts: &VerifyOptions) -> Result<Corpus, CliError> {
    if opts.qs.is_empty() || opts.ns.is_empty() {
        return Err(CliError::BadParams("need at least one q and one n".into()));
    }
    let fields = opts
        .qs
        .iter()
        .map(|&q| Field::with_order(q, None).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::BadParams(e.to_string()))?;

    if opts.exhaustive {
        let max_degree = opts.max_degree.unwrap_or(2);
        let mut maps = Vec::new();
        let mut skipped = 0;
        for field in &fields {
            for &n in &opts.ns {
                for f in all_maps(field, n, max_degree)? {
                    if usable(&f) {
                        maps.push(f);
                    } else {
                        skipped += 1;
                    }
                }
            }
        }
        return Ok(Corpus { maps, skipped });
    }

    let shapes: Vec<(&Arc<Field>, usize)> = fields
        .iter()
        .flat_map(|f| opts.ns.iter().map(move |&n| (f, n)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let maps = (0..opts.count)
        .map(|i| {
            let (field, n) = shapes[i % shapes.len()];
            let max_degree = opts
                .max_degree
                .unwrap_or_else(|| field.order().to_u32().unwrap_or(u32::MAX));
            loop {
                let f = random_sparse_map(&mut rng, field, n, opts.max_terms, max_degree);
                if usable(&f) {
                    break f;
                }
            }
        })
        .collect();
    Ok(Corpus { maps, skipped: 0 })
}

pub fn verify(opts: &VerifyOptions) -> Result<VerifySummary, CliError> {
    let corpus = corpus(opts)?;
    let mut summary = VerifySummary {
        skipped_unused_variables: corpus.skipped,
        ..Default::default()
    };
    for f in &corpus.maps {
        summary.merge(check_map(f, opts.check_u)?);
    }
    Ok(summary)
}
