//! Value sets of polynomial maps over finite fields and the lower-bound
//! invariants attached to them: Newton polytope dilation factors `μ_f`,
//! `ω_f`, and the p-adic invariant `U(f)`.

pub mod dilation;
pub mod gf;
pub mod padic;
pub mod poly;
pub mod valueset;
