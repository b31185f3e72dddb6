//! Structure theory of split sl(n, R).

pub mod algebra;
pub mod chamber;
pub mod parabolic;
pub mod roots;

pub use algebra::{build_split_sl, BasisKind, LieAlgebraData};
pub use chamber::{
    chamber_classify, epsilon_decompose, norm_constants, ChamberVector, Classification,
    EpsDecomposition, NormConstants,
};
pub use parabolic::{parabolic_from_subset, ParabolicData};
pub use roots::{restricted_root_system, RestrictedRootSystem, Root};
