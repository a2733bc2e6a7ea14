//! Cuntz-Krieger data of the boundary action: the transition matrix, its
//! K-theory, and the generator cylinders as exact set algebra.

pub mod cylinder;
pub mod ktheory;
pub mod matrix;
pub mod partition;
pub mod snf;

pub use cylinder::{pi_cylinder, CylinderSet};
pub use ktheory::{k_groups, k_groups_of_matrix, IdentityOrder, KInvariant};
pub use matrix::{admissibility, ck_matrix, AdmissibilityReport, ZeroOneMatrix};
pub use partition::{verify_ck_partition, PartitionReport};
pub use snf::{smith_normal_form, IntMatrix, Snf};
