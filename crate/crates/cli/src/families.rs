//! Generators for the sharp example families.

use std::sync::Arc;

use valueset_core::gf::{ExtensionCtx, Field};
use valueset_core::poly::{ExponentVector, PolyMap, SparsePoly};

use crate::verify::serialize_map;
use crate::CliError;

fn field(q: u64) -> Result<Arc<Field>, CliError> {
    Field::with_order(q, None)
        .map(Arc::new)
        .map_err(|e| CliError::BadParams(e.to_string()))
}

/// `f(x) = x^q + x^{q-1} = (x+1)x^{q-1}` over `F_{q^k}`.
pub fn cusick_muller(q: u64, k: u32) -> Result<PolyMap, CliError> {
    if k == 0 {
        return Err(CliError::BadParams("k must be at least 1".into()));
    }
    let order = q
        .checked_pow(k)
        .ok_or_else(|| CliError::BadParams("q^k overflows".into()))?;
    // q itself must be a prime power for F_q ⊂ F_{q^k} to make sense
    field(q)?;
    let f = field(order)?;
    let exps = [q as u32, q as u32 - 1];
    let poly = SparsePoly::from_terms(
        &f,
        1,
        exps.iter().map(|&e| (ExponentVector::new(vec![e]), f.one())),
    );
    Ok(PolyMap::new(f, vec![poly])?)
}

/// `q^k - ⌈(q^k - 1)/q⌉`, the image size of [`cusick_muller`].
pub fn cusick_muller_expected(q: u64, k: u32) -> u64 {
    let order = q.pow(k);
    order - (order - 1).div_ceil(q)
}

/// The norm `F_{q^m} -> F_q` as a polynomial in the coordinates of
/// `x = Σ x_j e_j`: the product of the Frobenius conjugates
/// `Σ_j x_j e_j^{q^i}`, `i < m`, whose coefficients lie in `F_q`.
pub fn norm_polynomial(ext: &ExtensionCtx) -> Result<SparsePoly, CliError> {
    let m = ext.degree();
    let top = ext.top();
    let mut product = SparsePoly::constant(m, top.one());
    for i in 0..m {
        let conjugate = SparsePoly::from_terms(
            top,
            m,
            ext.basis()
                .iter()
                .enumerate()
                .map(|(j, &e)| (ExponentVector::unit(m, j), ext.frobenius(e, i))),
        );
        product = product.mul(top, &conjugate);
    }
    let base = ext.base();
    let mut descended = SparsePoly::zero(m);
    for (e, c) in product.terms() {
        let c = ext
            .restrict(c)
            .ok_or_else(|| CliError::BadParams("norm coefficient outside the base field".into()))?;
        descended.add_term(base, e.clone(), c);
    }
    Ok(descended)
}

/// `h = (x_1, ..., x_{n-1}, N(x_1, ..., x_{n-1})^a x_n)` over `F_q`.
pub fn norm_map(q: u64, n: usize, a: u32) -> Result<PolyMap, CliError> {
    if n < 2 || a < 1 {
        return Err(CliError::BadParams("norm-map needs n >= 2 and a >= 1".into()));
    }
    let f = field(q)?;
    let ext = ExtensionCtx::new(f.clone(), n - 1).map_err(|e| CliError::BadParams(e.to_string()))?;
    let norm = norm_polynomial(&ext)?.pow(&f, a);
    let mut last = SparsePoly::zero(n);
    for (e, c) in norm.terms() {
        let mut entries = e.entries().to_vec();
        entries.push(1);
        last.add_term(&f, ExponentVector::new(entries), c);
    }
    let mut comps: Vec<SparsePoly> = (0..n - 1).map(|i| SparsePoly::variable(n, i)).collect();
    comps.push(last);
    Ok(PolyMap::new(f, comps)?)
}

/// `f(x) = x^7 + a x` over `F_19`.
pub fn zan_cao(a: u64) -> Result<PolyMap, CliError> {
    if a >= 19 {
        return Err(CliError::BadParams("a must lie in [0, 19)".into()));
    }
    let f = field(19)?;
    let poly = SparsePoly::from_terms(
        &f,
        1,
        [
            (ExponentVector::new(vec![7]), f.one()),
            (ExponentVector::new(vec![1]), f.from_int(a as i64)),
        ],
    );
    Ok(PolyMap::new(f, vec![poly])?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    CusickMuller,
    NormMap,
    ZanCao,
}

impl std::str::FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cusick-muller" => Ok(Family::CusickMuller),
            "norm-map" => Ok(Family::NormMap),
            "zan-cao" => Ok(Family::ZanCao),
            other => Err(CliError::BadParams(format!("unknown example `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FamilyParams {
    pub q: Option<u64>,
    pub n: Option<usize>,
    pub a: Option<u64>,
    pub k: Option<u32>,
}

/// Map file text for a family, headed by `# q=<q>`.
pub fn example_text(family: Family, p: FamilyParams) -> Result<String, CliError> {
    let map = match family {
        Family::CusickMuller => cusick_muller(p.q.unwrap_or(2), p.k.unwrap_or(2))?,
        Family::NormMap => {
            let a = u32::try_from(p.a.unwrap_or(1)).map_err(|_| CliError::BadParams("a too large".into()))?;
            norm_map(p.q.unwrap_or(3), p.n.unwrap_or(2), a)?
        }
        Family::ZanCao => zan_cao(p.a.unwrap_or(1))?,
    };
    Ok(serialize_map(&map))
}

#[cfg(test)]
mod tests {
    use valueset_core::gf::Elem;
    use valueset_core::poly::render_poly;

    use super::*;

    #[test]
    fn cusick_muller_f4() {
        let text = example_text(Family::CusickMuller, FamilyParams { q: Some(2), k: Some(2), ..Default::default() })
            .unwrap();
        assert_eq!(text, "# q=4\nvars:1\nf1 = x1^2 + x1\n");
        assert_eq!(cusick_muller_expected(2, 2), 2);
        assert_eq!(cusick_muller_expected(3, 2), 6);
    }

    #[test]
    fn norm_over_f4() {
        let m = norm_map(2, 3, 1).unwrap();
        assert_eq!(render_poly(m.field(), &m.components()[2]), "x1^2*x3 + x1*x2*x3 + x2^2*x3");
        let h = norm_map(3, 2, 2).unwrap();
        assert_eq!(render_poly(h.field(), &h.components()[1]), "x1^2*x2");
    }

    #[test]
    fn norm_has_pure_powers_and_only_trivial_zero() {
        for (q, m) in [(2u64, 2usize), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (7, 2), (8, 2)] {
            let f = field(q).unwrap();
            let ext = ExtensionCtx::new(f.clone(), m).unwrap();
            let norm = norm_polynomial(&ext).unwrap();
            for i in 0..m {
                let pure = ExponentVector::unit(m, i).scale(m as u32);
                assert!(!norm.coefficient(&pure).is_zero(), "q={q} m={m} x{}", i + 1);
            }
            let total = q.pow(m as u32);
            assert!(total <= 64);
            for rank in 1..total {
                let point: Vec<Elem> = (0..m)
                    .map(|i| Elem::from_index((rank / q.pow(i as u32) % q) as u32))
                    .collect();
                assert!(!norm.eval(&f, &point).is_zero(), "q={q} m={m} point={point:?}");
            }
        }
    }

    #[test]
    fn norm_agrees_with_field_norm() {
        let f = field(3).unwrap();
        let ext = ExtensionCtx::new(f.clone(), 2).unwrap();
        let norm = norm_polynomial(&ext).unwrap();
        for x1 in f.elements() {
            for x2 in f.elements() {
                let y = ext.from_coords(&[x1, x2]);
                assert_eq!(norm.eval(&f, &[x1, x2]), ext.norm_value(y).unwrap());
            }
        }
    }

    #[test]
    fn zan_cao_text() {
        let text = example_text(Family::ZanCao, FamilyParams { a: Some(1), ..Default::default() }).unwrap();
        assert_eq!(text, "# q=19\nvars:1\nf1 = x1^7 + x1\n");
        let text = example_text(Family::ZanCao, FamilyParams { a: Some(0), ..Default::default() }).unwrap();
        assert_eq!(text, "# q=19\nvars:1\nf1 = x1^7\n");
    }

    #[test]
    fn bad_params() {
        assert!(norm_map(3, 1, 1).is_err());
        assert!(zan_cao(19).is_err());
        assert!("frobenius".parse::<Family>().is_err());
        assert!(cusick_muller(6, 2).is_err());
    }
}
