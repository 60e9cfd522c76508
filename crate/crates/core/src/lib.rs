//! State-sum invariants of oriented singular piecewise-linear 4-manifolds
//! built from finite spherical prefusion 2-category data.
//!
//! The crate is organized along the pipeline that evaluates the invariant:
//!
//! * [`scalar`]: exact cyclotomic arithmetic, the value field of everything else.
//! * [`tensor`]: small dense tensors over that field, with simplex-named axes.
//! * [`simplicial`]: complexes, orderings, orientations, links, bistellar moves.
//! * [`category`]: fusion 2-category presentations, generators, and validators.
//! * [`statesum`]: state enumeration and the state-sum evaluation itself.

pub mod category;
pub mod scalar;
pub mod simplicial;
pub mod statesum;
pub mod tensor;
