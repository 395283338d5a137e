use std::fmt::Write;

use super::{ExponentVector, PolyMap, SparsePoly};
use crate::gf::{Elem, Field};

fn render_coeff(field: &Field, c: Elem) -> String {
    let digits = field.coeffs(c);
    if digits.iter().skip(1).all(|&d| d == 0) {
        return digits[0].to_string();
    }
    let mut parts = Vec::new();
    for (i, &d) in digits.iter().enumerate().rev() {
        if d == 0 {
            continue;
        }
        let part = match (i, d) {
            (0, d) => d.to_string(),
            (1, 1) => "t".to_string(),
            (1, d) => format!("{d}*t"),
            (i, 1) => format!("t^{i}"),
            (i, d) => format!("{d}*t^{i}"),
        };
        parts.push(part);
    }
    format!("({})", parts.join(" + "))
}

fn render_monomial(e: &ExponentVector) -> String {
    e.entries()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(i, &d)| {
            if d == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{d}", i + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Renders a polynomial with terms in descending graded-lex order.
pub fn render_poly(field: &Field, poly: &SparsePoly) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    poly.terms()
        .rev()
        .map(|(e, c)| {
            if e.is_zero() {
                render_coeff(field, c)
            } else if c == Elem::ONE {
                render_monomial(e)
            } else {
                format!("{}*{}", render_coeff(field, c), render_monomial(e))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Inverse of [`parse_map`](super::parse_map).
pub fn render_map(map: &PolyMap) -> String {
    let mut out = format!("vars:{}\n", map.nvars());
    for (i, c) in map.components().iter().enumerate() {
        writeln!(out, "f{} = {}", i + 1, render_poly(map.field(), c)).unwrap();
    }
    out
}
