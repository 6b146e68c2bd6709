//! Geometric (Berry) phase factors of real-Hamiltonian families.
//!
//! The crate is layered bottom-up:
//!
//! * [`numerics`]: dense symmetric eigensolver, determinants, orbital overlaps.
//! * [`twolevel`]: the planar `σ·R` model, gauge phases, the real-state
//!   "magnetic field" and the complex monopole check.
//! * [`lattice`]: periodic square lattice, breathing-mode distortions and
//!   loops in distortion-parameter space.
//! * [`meanfield`]: Hartree-Fock decoupled Holstein-Hubbard model and its
//!   self-consistent ground state.
//! * [`berry`]: many-body overlap products around distortion loops.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod berry;
pub mod error;
pub mod lattice;
pub mod meanfield;
pub mod numerics;
pub mod twolevel;

pub use error::{Error, Result};
