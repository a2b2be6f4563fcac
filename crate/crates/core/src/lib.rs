//! A 20-DOF nonconforming tetrahedral element for the fourth-order curl problem
//!
//! ```text
//! α (∇×)⁴u + β (∇×)²u + γ u = f   in Ω,
//! u × n = 0,  ∇×u = 0               on ∂Ω,
//! ```
//!
//! together with the full pipeline around it: tetrahedral meshes (generated or
//! read from Gmsh MSH 2.2), simplex quadrature, the element itself (geometry,
//! degrees of freedom, explicit and Vandermonde-inverted dual bases), global
//! DOF numbering, sparse assembly, a Jacobi-preconditioned CG solver, and a
//! manufactured-solution harness that measures interpolation, consistency and
//! discretization errors.
//!
//! Element loops run on rayon when the `parallel` feature is enabled (the
//! default); see [`exec::Execution`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod dofmap;
pub mod element;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod mesh;
pub mod mms;
pub mod quadrature;
pub mod solver;
pub mod sparse;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::Vec3;
