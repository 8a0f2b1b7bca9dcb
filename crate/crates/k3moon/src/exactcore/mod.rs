//! Exact arithmetic: rationals, cyclotomic fields, polynomials, q-series and integer lattices.

pub mod coeff;
pub mod cyclotomic;
pub mod lattice;
pub mod poly;
pub mod rational;
pub mod series;

pub use coeff::Coeff;
pub use cyclotomic::Cyclotomic;
pub use lattice::{AbelianQuotient, IntegerLattice, Membership};
pub use poly::{Poly, RationalFunction};
pub use rational::{fmt_q, parse_q, q, qi, Q};
pub use series::{qexp, Key, Series};
