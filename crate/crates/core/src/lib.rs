//! Exact and numerical tools for representations of polynomials over
//! `F_q[t]` as sums of three cubes: finite fields, cubic character sums,
//! local densities at finite places and at infinity, and global counts.

pub mod archdens;
pub mod charsums;
pub mod error;
pub mod gf;
pub mod global;
pub mod group;
pub mod limits;
pub mod localdens;
pub mod polyring;
pub mod report;
pub mod selftest;

pub use error::{Error, Result};
