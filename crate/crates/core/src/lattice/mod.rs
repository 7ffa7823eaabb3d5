//! Exact lattice, cone and polyhedron toolkit.

mod cone;
mod polyhedron;
mod rational;
mod snf;

pub use cone::{cone_dual, cone_from_generators, cone_linear_part, Cone};
pub use polyhedron::{minkowski_sum, normal_quasifan, quasifan_refine, support_min, Polyhedron, QuasiFan};
pub use rational::*;
pub use snf::{
    complete_primitive, integer_kernel, lattice_member, mat_mul, mat_vec, smith, unimodular_inverse, IntMatrix,
    Snf, Sublattice,
};
