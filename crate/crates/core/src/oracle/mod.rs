//! Independent reference computations used to check the solver.

mod direct;
mod manufactured;
mod reference;

pub use direct::{compressed_solve, direct_big_domain_solve, probe_difference, EquivalenceCase, EquivalenceResult};
pub use manufactured::{CaseId, ManufacturedCase};
pub use reference::{reference_integral, reference_integral_with, QuadratureOrder, ReferenceRegion};
