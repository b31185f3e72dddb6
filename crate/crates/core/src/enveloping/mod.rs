//! Exact arithmetic in the universal enveloping algebra of split sl(n).

pub mod center;
pub mod certificate;
pub mod hpoly;
pub mod pbw;

pub use center::{center_basis, delta_shift, harish_chandra, hc_project, CenterBasis};
pub use certificate::{
    continuity_spotcheck, hpoly_coefficients, lie_identity_certificate,
    lie_identity_certificate_with, verify_certificate, CertificateJson, ContinuityReport,
    HPolyData, LieIdentityCertificate,
};
pub use hpoly::HPoly;
pub use pbw::{pbw_multiply, Limits, PbwAlgebra, PbwElement};
