//! Numerics on the modular surface SL(2,Z)\H: reduction, invariant height, incomplete
//! Eisenstein series, horocycle averages, decay fits, and unipotent lattice counts.

pub mod counting;
pub mod eisenstein;
pub mod fit;
pub mod horocycle;
pub mod quad;
pub mod reduction;

pub use counting::{unipotent_lattice_count, LatticeCount};
pub use eisenstein::{Bump, TestFunction};
pub use fit::{fit_decay, DecayFit, DecaySample, FitResult};
pub use horocycle::{
    fundamental_domain_integral, height_average, height_csv, height_l1, horo_csv,
    horocycle_average, quadrature_points, HeightRow, HoroExperiment, HoroRow, Weight,
    DEFAULT_POINTS_PER_SCALE, MIN_POINTS_PER_SCALE,
};
pub use reduction::{apply_word, invariant_height, mobius, reduce_point, Generator, SurfacePoint};
