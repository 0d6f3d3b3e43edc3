//! Orthogonal gate networks for the discrete sine transform.
//!
//! The DST-I of size `2^k − 1` is factored recursively, through the DST-III,
//! into a network of 2×2 orthogonal gates (F̂, Ĝ and rotations) plus mode
//! relabellings. The same network, with every gate replaced by its
//! second quantization, is an exact fermionic circuit that diagonalizes
//! free fermions hopping on an open chain.
//!
//! * [`reference`]: dense transform matrices and the Slater-determinant
//!   second quantization used as oracles.
//! * [`planner`]: the gate IR and the recursive plan builders.
//! * [`exec`]: O(n log n) single-particle execution.
//! * [`fock`]: statevector simulation on 2ⁿ occupation amplitudes.
//! * [`physics`]: the open-chain hopping Hamiltonian.
//! * [`document`] and [`cli`]: the plan file format and command line.

pub mod cli;
pub mod document;
pub mod error;
pub mod exec;
pub mod fock;
pub mod gate;
pub mod physics;
pub mod planner;
pub mod reference;

pub use error::{Error, Result};
pub use gate::{Gate, GateKind, Mat2, Permutation};
pub use planner::{plan_dft, plan_dst1, plan_dst3, Plan, PlanKind};
