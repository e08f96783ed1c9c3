//! Exact invariants, exponential sums, and least-zero search for integer cubic forms.
//!
//! The crate is organised around one central object, [`forms::CubicForm`]: a
//! homogeneous degree-3 polynomial with integer coefficients, stored as the
//! symmetric integer tensor `t_ijk = 6·c_ijk`. On top of it sit four toolkits:
//!
//! * [`forms`] — parsing, height, the matrix `M(x)`, rank censuses over boxes,
//!   bilinear forms `B_i(h;w)`, and the determinantal-divisor invariant `Δ(C)`.
//! * [`expsums`] — exact value distributions of `C mod q`, complete exponential
//!   sums `S(a,q)`, `A(q)` through Ramanujan sums, local solution counts
//!   `ρ(p^k)`, truncated singular series, and box-restricted generating sums.
//! * [`exponents`] — the exponent-constraint system behind the headline
//!   `Λ_n(C) ≤ c·M^{e₂(n)+ε}` bound, evaluated exactly in the quadratic field
//!   `Q(√(3n(3n−35)))`, with an audit of the published decimal constants.
//! * [`search`] — desk-scale exact computation of the least-zero radius
//!   `Λ_n(C)` by shell enumeration or meet-in-the-middle on diagonal forms.
//!
//! All arithmetic that feeds an identity or a table is exact (integers,
//! rationals, quadratic irrationals); floating point appears only as a
//! presentation layer with configurable precision (50 significant digits by
//! default).

pub mod cli;
mod decimal;
mod error;
pub mod exponents;
pub mod expsums;
pub mod forms;
pub mod hp;
pub mod search;

pub use error::{Error, Result};
