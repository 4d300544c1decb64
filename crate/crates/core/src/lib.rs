//! Exact arithmetic for quantum cluster algebras: Cartan data and Weyl group
//! actions, quantum tori over `Z[v^{±1}]`, seed mutation, the initial seeds
//! attached to reduced words, and a verification suite.
//!
//! Indices are 0-based in the API and 1-based in every JSON document.

#![allow(clippy::needless_range_loop)]

pub mod cartan;
pub mod laurent;
pub mod qcoeff;
pub mod torus;
pub mod cluster;
pub mod gls;
pub mod classical;
pub mod verify;
pub mod serial;
