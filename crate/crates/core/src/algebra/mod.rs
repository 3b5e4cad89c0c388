//! Exact arithmetic substrate: rationals, polynomials, rational generating
//! functions and cyclotomic numbers.

pub mod cyclo;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use cyclo::{cyclo_to_rational, cyclotomic_polynomial, CycloNum};
pub use poly::{binomial, Poly};
pub use ratfunc::{rf_expand, rf_reduce, RationalGenFunction};
pub use rational::{format_rational, parse_rational, q, qf, Rational};
