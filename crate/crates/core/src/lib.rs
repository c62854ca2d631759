//! Exact symbolic toolkit for deciding whether a multivariate polynomial
//! matrix with quasi weakly linear determinantal divisor is equivalent to its
//! Smith normal form.
//!
//! The pipeline: compute the minors of every order, their gcds `d_k`, the
//! reduced minors, and test whether each ideal `J_k` generated by the reduced
//! k-th order minors is the unit ideal (reduced Gröbner basis `{1}`). When
//! the gcd of the maximal-order minors factors as
//! `(x1 - f1(x2..xn))^p * (x2 - f2(x3..xn))^q`, equivalence to the Smith form
//! holds iff every `J_k` is the unit ideal, and the Smith diagonal is built
//! from the exponent differences of the `d_k` chain.
//!
//! All arithmetic is exact over the rationals. Everything is immutable after
//! construction and safe to share across threads.

pub mod context;
pub mod groebner;
pub mod io;
pub mod matrix;
pub mod monomial;
pub mod poly;
pub mod rational;
pub mod report;
pub mod smith;

pub use context::VariableContext;
pub use groebner::{GroebnerBasis, Ideal};
pub use matrix::{MinorReport, PolyMatrix};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use rational::Rational;
pub use smith::{FactorizationWitness, QwlShape, SmithDecision, Verdict};
