//! The `invariants` report.

use num_traits::ToPrimitive;
use serde::Serialize;
use valueset_core::dilation::{chain_check, mu, omega, Rational};
use valueset_core::gf::ExtensionCtx;
use valueset_core::padic::{u_invariant, SUM_LIMIT};
use valueset_core::poly::PolyMap;
use valueset_core::valueset::{value_set, ValueSetResult, ENUMERATION_LIMIT};

use crate::CliError;

pub const SCHEMA: &str = "1";

/// A rational as `{"num": .., "den": ..}`, never as a float.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalJson {
    pub num: i128,
    pub den: i128,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson {
            num: r.numer().to_i128().expect("numerator fits in i128"),
            den: r.denom().to_i128().expect("denominator fits in i128"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub name: String,
    /// Upper bound on `|V_f|` for non-permutations.
    pub bound: RationalJson,
    /// False for permutations or when the value set was not computed.
    pub applicable: bool,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerChain {
    pub n_qminus1_over_d: RationalJson,
    pub mu_times_qminus1: RationalJson,
    pub omega: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub schema: &'static str,
    pub q: u64,
    pub n: usize,
    pub degree: u32,
    pub mu: RationalJson,
    pub mu_witness_target: Vec<u32>,
    pub omega: u64,
    pub omega_witness: Vec<u64>,
    pub lower_chain: LowerChain,
    pub value_set_size: Option<u64>,
    pub is_permutation: Option<bool>,
    pub u: Option<u64>,
    pub theorem_checks: Vec<TheoremCheck>,
    pub notices: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub value_set: bool,
    pub u: bool,
    pub u_cap: Option<u64>,
    /// Skip over-envelope heavy steps with a notice instead of failing.
    pub skip_heavy: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            value_set: true,
            u: false,
            u_cap: None,
            skip_heavy: false,
        }
    }
}

fn int(v: u128) -> Rational {
    Rational::from_integer(v.into())
}

/// `q^n - x`, for `x` a rational.
fn gap(q: u64, n: usize, x: &Rational) -> Rational {
    int((q as u128).pow(n as u32)) - x
}

/// Named upper bounds on `|V_f|`, checked against `vs` when given.
pub fn bound_checks(
    q: u64,
    n: usize,
    degree: u32,
    mu: &Rational,
    omega: u64,
    u: Option<u64>,
    vs: Option<&ValueSetResult>,
) -> Vec<TheoremCheck> {
    let q1 = int((q - 1) as u128);
    let mu_q1 = mu * &q1;
    let mut bounds = vec![
        (
            "degree_bound",
            gap(q, n, &(int(n as u128) * &q1 / int(degree as u128))),
        ),
        ("min_mu_bound", gap(q, n, &mu_q1.clone().min(int(q as u128)))),
        ("mu_bound", gap(q, n, &mu_q1)),
        ("omega_bound", gap(q, n, &int(omega as u128))),
    ];
    if let Some(u) = u {
        bounds.push(("u_bound", gap(q, n, &int(u as u128))));
    }
    bounds
        .into_iter()
        .map(|(name, bound)| {
            let mut applicable = vs.is_some_and(|v| !v.is_permutation);
            // constant functions have U = q^n; the U bound needs |V_f| > 1
            if name == "u_bound" {
                applicable &= vs.is_some_and(|v| v.cardinality > 1);
            }
            let satisfied = !applicable || int(vs.unwrap().cardinality as u128) <= bound;
            TheoremCheck {
                name: name.to_string(),
                bound: RationalJson::from(&bound),
                applicable,
                satisfied,
            }
        })
        .collect()
}

pub fn invariant_report(f: &PolyMap, opts: &ReportOptions) -> Result<InvariantReport, CliError> {
    let unused = f.unused_variables();
    if !unused.is_empty() {
        return Err(CliError::UnusedVariables(unused));
    }
    let q = f.field().order();
    let n = f.nvars();
    let degree = f.degree()?;
    let mu_res = mu(f)?;
    let om = omega(f)?;
    let chain = chain_check(f)?;
    let mut notices = vec!["degree_bound is evaluated as q^n - n(q-1)/d".to_string()];
    if !chain.degree_at_least_n {
        notices.push(format!("deg f = {degree} < n = {n}; chain reported for the record"));
    }

    let domain = f.domain_size();
    let vs = if !opts.value_set {
        notices.push("value set not requested".into());
        None
    } else if domain > ENUMERATION_LIMIT as u128 {
        if !opts.skip_heavy {
            return Err(CliError::Envelope(format!(
                "value set needs {domain} evaluations (limit {ENUMERATION_LIMIT}); pass --skip-heavy or --no-value-set"
            )));
        }
        notices.push(format!("value set skipped: domain {domain} exceeds {ENUMERATION_LIMIT}"));
        None
    } else {
        Some(value_set(f)?)
    };

    let u = if !opts.u {
        None
    } else if domain > SUM_LIMIT as u128 {
        if !opts.skip_heavy {
            return Err(CliError::Envelope(format!(
                "U(f) sums over {domain} points (limit {SUM_LIMIT}); pass --skip-heavy"
            )));
        }
        notices.push(format!("U(f) skipped: domain {domain} exceeds {SUM_LIMIT}"));
        None
    } else {
        let ext = ExtensionCtx::new(f.field().clone(), n)?;
        let cap = opts.u_cap.unwrap_or(domain as u64 - 1);
        let r = u_invariant(f, &ext, cap)?;
        if r.u.is_none() {
            notices.push(format!("U(f) not found below cap {cap}"));
        }
        r.u
    };

    let theorem_checks = bound_checks(q, n, degree, &mu_res.mu, om.omega, u, vs.as_ref());
    Ok(InvariantReport {
        schema: SCHEMA,
        q,
        n,
        degree,
        mu: RationalJson::from(&mu_res.mu),
        mu_witness_target: mu_res.witness_target.entries().to_vec(),
        omega: om.omega,
        omega_witness: om.witness_k,
        lower_chain: LowerChain {
            n_qminus1_over_d: RationalJson::from(&chain.n_qminus1_over_d),
            mu_times_qminus1: RationalJson::from(&chain.mu_times_qminus1),
            omega: chain.omega,
            holds: chain.holds,
        },
        value_set_size: vs.map(|v| v.cardinality),
        is_permutation: vs.map(|v| v.is_permutation),
        u,
        theorem_checks,
        notices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::load_map;

    #[test]
    fn zan_cao_report() {
        let m = load_map("vars:1\nf1 = x1^7 + x1\n", Some(19), None).unwrap();
        let r = invariant_report(&m, &ReportOptions { u: true, ..Default::default() }).unwrap();
        assert_eq!(r.omega, 6);
        assert_eq!(r.omega_witness, vec![2, 4]);
        assert_eq!(r.value_set_size, Some(13));
        assert_eq!(r.mu, RationalJson { num: 1, den: 7 });
        assert!(r.theorem_checks.iter().all(|c| c.applicable && c.satisfied));
        let omega_bound = r.theorem_checks.iter().find(|c| c.name == "omega_bound").unwrap();
        assert_eq!(omega_bound.bound, RationalJson { num: 13, den: 1 });
    }

    #[test]
    fn json_key_order_is_fixed() {
        let m = load_map("vars:2\nf1 = x1\nf2 = x2\n", Some(3), None).unwrap();
        let r = invariant_report(&m, &ReportOptions::default()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"schema":"1","q":3,"n":2,"degree":1,"mu":{"num":2,"den":1}"#));
        assert!(json.contains(r#""is_permutation":true"#));
        assert!(r.theorem_checks.iter().all(|c| !c.applicable && c.satisfied));
    }

    #[test]
    fn unused_variables_reported() {
        let m = load_map("vars:2\nf1 = x1\nf2 = x1^2\n", Some(3), None).unwrap();
        let e = invariant_report(&m, &ReportOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn envelope_enforced() {
        let m = load_map("vars:7\nf1 = x1\nf2 = x2\nf3 = x3\nf4 = x4\nf5 = x5\nf6 = x6\nf7 = x7*x1\n", Some(16), None)
            .unwrap();
        let e = invariant_report(&m, &ReportOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
