//! The 20-DOF element: geometry, generating functions, degrees of freedom and
//! dual bases.
//!
//! The local space is the second-order first-family Nédélec space (full linear
//! vector fields plus homogeneous quadratics orthogonal to `x`). Its degrees of
//! freedom are two tangential moments per edge and two scaled tangential curl
//! moments per face; see [`functionals`].

mod basis;
mod explicit;
mod functionals;
mod geometry;
mod nedelec;
mod raw;

pub use basis::{
    dof_vandermonde, dual_basis, pairing_matrix, BasisSet, LocalFunction, Mat20, Vandermonde, Vec20, SINGULAR_TOL,
};
pub use explicit::{explicit_basis, explicit_coefficients, face_curl_integral};
pub use functionals::{
    apply_edge_dof, apply_face_dof, DofFunctional, DofKind, EdgeMoment, FunctionalSet, Target, VectorField,
    EDGE_DOF_DEGREE, FACE_DOF_DEGREE,
};
pub use geometry::{tet_geometry, TetGeometry};
pub use nedelec::NedelecInterpolant;
pub use raw::{edge_slot, eval_raw, face_slot, raw_curl_gradients, triple_in_raw, BasisEval, NUM_DOFS};
