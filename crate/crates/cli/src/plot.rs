//! SVG rendering of a two-variable Newton polytope, its contraction by
//! `n/d`, and the positive lattice points around them.

use std::fmt::Write;

use num_traits::ToPrimitive;
use valueset_core::dilation::{mu, NewtonPolytope, Rational};
use valueset_core::poly::{ExponentVector, PolyMap};

use crate::CliError;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotData {
    /// Hull vertices, counter-clockwise from the origin.
    pub hull: Vec<(i64, i64)>,
    /// `n/d`.
    pub contraction: Rational,
    /// Points of `ℕ²` (entries >= 1) inside `Δ(f)`.
    pub lattice_in_hull: Vec<(u32, u32)>,
    /// Points of `ℕ²` inside `(n/d)Δ(f)`.
    pub lattice_in_contraction: Vec<(u32, u32)>,
    pub mu: Rational,
    pub witness: (u32, u32),
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull by the monotone chain, without collinear vertices.
pub fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn plot_data(f: &PolyMap) -> Result<PlotData, CliError> {
    if f.nvars() != 2 {
        return Err(CliError::NotTwoDimensional(f.nvars()));
    }
    let polytope = NewtonPolytope::of_map(f)?;
    let points: Vec<(i64, i64)> = polytope
        .generators()
        .iter()
        .map(|e| (e.entries()[0] as i64, e.entries()[1] as i64))
        .collect();
    let hull = convex_hull(&points);
    let d = f.degree()?;
    let contraction = Rational::new(2.into(), d.into());
    let max_x = points.iter().map(|p| p.0).max().unwrap_or(0) as u32;
    let max_y = points.iter().map(|p| p.1).max().unwrap_or(0) as u32;
    let one = Rational::from_integer(1.into());
    let mut lattice_in_hull = Vec::new();
    let mut lattice_in_contraction = Vec::new();
    for x in 1..=max_x {
        for y in 1..=max_y {
            let pt = ExponentVector::new(vec![x, y]);
            if polytope.dilate_contains(&one, &pt) {
                lattice_in_hull.push((x, y));
            }
            if polytope.dilate_contains(&contraction, &pt) {
                lattice_in_contraction.push((x, y));
            }
        }
    }
    let m = mu(f)?;
    let w = m.witness_target.entries();
    Ok(PlotData {
        hull,
        contraction,
        lattice_in_hull,
        lattice_in_contraction,
        mu: m.mu,
        witness: (w[0], w[1]),
    })
}

fn ratio_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn render_svg(data: &PlotData) -> String {
    let extent = data
        .hull
        .iter()
        .flat_map(|&(x, y)| [x, y])
        .chain([data.witness.0 as i64, data.witness.1 as i64, 1])
        .max()
        .unwrap_or(1) as f64;
    let unit = (SIZE - 2.0 * MARGIN) / extent;
    let sx = |x: f64| MARGIN + x * unit;
    let sy = |y: f64| SIZE - MARGIN - y * unit;
    let c = data.contraction.to_f64().unwrap_or(1.0);

    let mut svg = String::new();
    writeln!(
        svg,
        r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"##
    )
    .unwrap();
    writeln!(svg, r##"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"##).unwrap();
    writeln!(
        svg,
        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black"/>"##,
        sx(0.0),
        sy(0.0),
        sx(extent),
        sy(0.0)
    )
    .unwrap();
    writeln!(
        svg,
        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black"/>"##,
        sx(0.0),
        sy(0.0),
        sx(0.0),
        sy(extent)
    )
    .unwrap();

    let polygon = |scale: f64| {
        data.hull
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", sx(x as f64 * scale), sy(y as f64 * scale)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(
        svg,
        r##"<polygon id="hull" points="{}" fill="#cfe2f3" fill-opacity="0.6" stroke="#1f4e79" stroke-width="2"/>"##,
        polygon(1.0)
    )
    .unwrap();
    writeln!(
        svg,
        r##"<polygon id="contraction" points="{}" fill="none" stroke="#7f6000" stroke-width="2" stroke-dasharray="6,4"/>"##,
        polygon(c)
    )
    .unwrap();

    let top = extent as u32;
    for x in 1..=top {
        for y in 1..=top {
            let fill = if data.lattice_in_contraction.contains(&(x, y)) {
                "#7f6000"
            } else if data.lattice_in_hull.contains(&(x, y)) {
                "#1f4e79"
            } else {
                "#999999"
            };
            writeln!(
                svg,
                r##"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{fill}"/>"##,
                sx(x as f64),
                sy(y as f64)
            )
            .unwrap();
        }
    }
    let (wx, wy) = data.witness;
    writeln!(
        svg,
        r##"<circle id="witness" cx="{:.3}" cy="{:.3}" r="6" fill="none" stroke="#c00000" stroke-width="2"/>"##,
        sx(wx as f64),
        sy(wy as f64)
    )
    .unwrap();
    writeln!(
        svg,
        r##"<text x="{:.3}" y="{:.3}" font-family="monospace" font-size="12">mu = {}, witness ({wx},{wy}), contraction {}</text>"##,
        MARGIN,
        MARGIN / 2.0,
        ratio_str(&data.mu),
        ratio_str(&data.contraction)
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

pub fn plot(f: &PolyMap) -> Result<String, CliError> {
    Ok(render_svg(&plot_data(f)?))
}
