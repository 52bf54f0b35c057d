//! Irrational rotations `x -> x + gamma mod 1`: interval unions on the circle,
//! return sets, Sturmian words, and the algebra generated by rotated segments.

pub mod algebra;
pub mod interval;
pub mod qtree;
pub mod returns;

pub use crate::real::{compare, order, CertifiedReal, Comparison, RealError};
pub use algebra::{
    atom_refinement, density_set, generate_algebra, AlgebraError, AtomSplit, ReturnAlgebraSpec,
};
pub use interval::{CircleIntervalSet, IntervalError};
pub use qtree::{qtree_reals, BinaryPath, QTreeError};
pub use returns::{
    return_set, return_set_from, scan_returns, sturmian_word, syndetic_gap, window_density,
    ReturnError,
};
