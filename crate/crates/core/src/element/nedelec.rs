use super::basis::{dof_vandermonde, Mat20, Vec20};
use super::functionals::{FunctionalSet, VectorField};
use super::TetGeometry;
use crate::Result;

/// The local second-order Nédélec interpolant `r_K`: matches all edge moments
/// and the tangential face moments `∫_f (u×n)·q` of a field.
#[derive(Debug, Clone)]
pub struct NedelecInterpolant {
    functionals: FunctionalSet,
    inverse: Mat20,
}

impl NedelecInterpolant {
    pub fn new(geom: &TetGeometry, global_ids: &[usize; 4]) -> Result<Self> {
        let functionals = FunctionalSet::nedelec_global_fine(geom, global_ids);
        let inverse = dof_vandermonde(geom, &functionals)?.inverse()?;
        Ok(Self { functionals, inverse })
    }

    /// Raw coefficients of `r_K u`.
    pub fn raw_coefficients(&self, geom: &TetGeometry, field: &(impl VectorField + ?Sized)) -> Vec20 {
        let dofs = Vec20::from(self.functionals.apply(geom, field));
        self.inverse * dofs
    }
}
