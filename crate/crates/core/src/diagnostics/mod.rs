//! Energies, field norms and the property checks run on recorded traces.

mod checks;
mod energy;

pub use checks::{
    check_apriori_structure, check_energy_identity, check_finite_speed, check_time_growth, scattered_front_time,
    AprioriReport, BoundQuantities, DataNorms, FiniteSpeedViolation, TimeGrowthReport,
};
pub use energy::{compute_energy, field_norms, Energy, EnergyRecorder, EnergySample, EnergyTrace, FieldNorms};
