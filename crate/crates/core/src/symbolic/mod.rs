//! Exact symbolic algebra in `Q(t)[M]`.

mod derivation;
mod graded;
mod poly;
mod ratfunc;

pub use derivation::{
    commutator_vanishes, derivation_apply, horizontal_lnd, nilpotent_on_probes, probes, vertical_lnd, Derivation,
    FiniteColoring, Witness,
};
pub use graded::GradedElement;
pub use poly::Poly;
pub use ratfunc::RatFunc;

use crate::divisors::CurvePoint;

/// Order of vanishing of `f` at `z`; `None` for `f = 0`.
pub fn ord_at(f: &RatFunc, z: &CurvePoint) -> Option<i64> {
    f.ord_at(z)
}
