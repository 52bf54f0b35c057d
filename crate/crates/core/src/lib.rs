//! Bratteli-Vershik systems, irrational rotations and their return-times data.

// Reals cache approximations in a `OnceLock`; hashing only looks at the normal form.
#![allow(clippy::mutable_key_type)]

pub mod catalog;
pub mod diagram;
pub mod invariants;
pub mod io;
pub mod matrix;
pub mod ordering;
pub mod real;
pub mod rotation;
pub mod vershik;
