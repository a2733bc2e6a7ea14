//! The boundary action: its quasi-invariant measure, Radon-Nikodym
//! cocycle, ratio set, and finite pieces of the orbit equivalence.

pub mod measure;
pub mod pairing;
pub mod spectrum;

pub use measure::{cylinder_measure, radon_nikodym, BoundaryMeasure};
pub use pairing::{full_group_pairing, verify_pairing, PairingTable, Triple};
pub use spectrum::{
    delta_spectrum, ratio_set_classification, DeltaSpectrum, DeltaWitness, RatioSetReport,
    SpectrumOptions,
};
