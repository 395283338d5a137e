//! Dense polynomials over a prime field, stored low-degree-first.
//!
//! Only what field construction needs: reduction, modular products and
//! powers, and gcd for the irreducibility test.

pub(crate) type FpPoly = Vec<u64>;

pub(crate) fn trim(f: &mut FpPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub(crate) fn degree(f: &FpPoly) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub(crate) fn inv_mod(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Remainder of `f` modulo `m`; `m` must be nonzero.
pub(crate) fn rem(f: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    let dm = degree(m).expect("division by zero polynomial");
    let lead_inv = inv_mod(m[dm], p);
    let mut r = f.clone();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let factor = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate().take(dm + 1) {
            let sub = factor * mc % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn mul_mod(f: &FpPoly, g: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    rem(&mul(f, g, p), m, p)
}

pub(crate) fn pow_poly_mod(f: &FpPoly, mut exp: u64, m: &FpPoly, p: u64) -> FpPoly {
    let mut acc: FpPoly = rem(&vec![1], m, p);
    let mut base = rem(f, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn sub(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let len = f.len().max(g.len());
    let mut out: FpPoly = (0..len)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            (a + p - b) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn gcd(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let mut a = f.clone();
    let mut b = g.clone();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: a polynomial of degree `a` over F_p is irreducible iff it
/// shares no factor with `x^{p^i} - x` for `1 <= i <= a/2`.
pub(crate) fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let Some(deg) = degree(f) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let x: FpPoly = vec![0, 1];
    let mut frob = rem(&x, f, p);
    for _ in 1..=deg / 2 {
        frob = pow_poly_mod(&frob, p, f, p);
        let g = gcd(&sub(&frob, &x, p), f, p);
        if degree(&g).is_some_and(|d| d > 0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_quadratics_over_f2() {
        assert!(is_irreducible(&vec![1, 1, 1], 2));
        assert!(!is_irreducible(&vec![1, 0, 1], 2));
        assert!(!is_irreducible(&vec![0, 1, 1], 2));
    }

    #[test]
    fn quartic_without_roots_can_be_reducible() {
        // (x^2+x+1)^2 = x^4+x^2+1 has no roots in F_2
        assert!(!is_irreducible(&vec![1, 0, 1, 0, 1], 2));
        assert!(is_irreducible(&vec![1, 1, 0, 0, 1], 2));
    }

    #[test]
    fn rem_and_gcd() {
        // x^2 - 1 = (x-1)(x+1) over F_5
        let f = vec![4, 0, 1];
        let g = vec![4, 1];
        assert!(rem(&f, &g, 5).is_empty());
        assert_eq!(degree(&gcd(&f, &g, 5)), Some(1));
    }
}
