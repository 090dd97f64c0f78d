//! Exact factored polynomials in linear forms, the determinantal certificate
//! of gracefulness and the associated determinant identity.

mod certificate;
mod determinant;
mod poly;

pub use certificate::{
    certificate_polynomial, certify_graceful, graceful_value, minimal_lcm, restricted_lcm,
    stabilizer_equal, stabilizer_polynomial, CertificateReport, StabilizerReport,
};
pub use determinant::{det_v_check, determinant, v_matrix, DeterminantCheck};
pub use poly::{
    difference, edge_pair_forms, edge_vandermonde, edge_vandermonde_from, full_product,
    lcm_factored, vertex_vandermonde, FactoredPolynomial, LinearForm,
};
