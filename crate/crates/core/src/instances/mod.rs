pub mod label_cover;
pub mod lhp;
pub mod ncp;
pub mod sis;
pub mod ssat;

pub use label_cover::{
    validate_label_cover, Edge, EdgeSpec, LabelCoverInstance, LabelCoverSpec, Labeling,
    ValidationReport,
};
pub use lhp::{Delta, Group, Inequality, LhpAssignment, LhpSystem, Sense};
pub use ncp::{hamming_weight, is_prime, next_prime_above, NcpInstance};
pub use sis::{l1_norm, ColumnTag, RowTag, SisInstance};
pub use ssat::{LcProvenance, SsatInstance, Test};
