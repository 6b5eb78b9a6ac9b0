//! Special functions on the imaginary axis and the α parametrisation
//! `α = θ2^4/θ3^4`, `u = F(1-α) / (2 F(α))`.

pub mod hyper;
pub mod modular;
pub mod relation;
pub mod theta;

pub use hyper::{alpha_point, f_elliptic_quad, f_hyper, u_from_alpha, AlphaPoint};
pub use modular::{
    combination_at, delta_at, delta_from_alpha, eisenstein_at, lambert_weight11, CombinationSpec, EisensteinRoute,
};
pub use relation::{discovered_polynomial, find_alpha_polynomial, AlphaPolynomial, RelationSearch};
pub use theta::{alpha_from_u, theta_quotient_product, theta_triple, ThetaTriple};
