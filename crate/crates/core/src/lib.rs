//! Exact algebra for a `q`-deformed formal group law: rational functions in
//! `s = q^(1/2)`, truncated power series, Mobius actions, `q`-combinatorics,
//! lambda-ring operations and the Hodge/sl2 comparison for products of
//! projective spaces.

pub mod fgl;
pub mod lambda;
pub mod mobius;
pub mod multi;
pub mod poly;
pub mod qcomb;
pub mod report;
pub mod scalar;
pub mod series;
pub mod varieties;
