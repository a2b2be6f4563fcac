use crate::assembly::FeSpace;
use crate::element::{FunctionalSet, LocalFunction, NedelecInterpolant, Vec20, VectorField, NUM_DOFS};
use crate::exec::Execution;
use crate::Result;

/// DOF values of one element in global orientation and local slot order.
pub type LocalDofs = [f64; NUM_DOFS];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolant {
    /// Element-wise standard Nédélec interpolant `r_h`. Not continuous in the
    /// face DOFs.
    Nedelec,
    /// `u_I`: shared edge DOFs, face DOFs averaged over the incident elements.
    Averaged,
}

/// `r_K u` on every element, as DOF values of the element basis.
pub fn nedelec_local_dofs(
    space: &FeSpace,
    field: &(dyn VectorField + Sync),
    exec: Execution,
) -> Result<Vec<LocalDofs>> {
    exec.try_map(space.num_tets(), |t| {
        let basis = space.basis(t);
        let geom = basis.geometry();
        let ids = &space.mesh().tets()[t];
        let raw = NedelecInterpolant::new(geom, ids)?.raw_coefficients(geom, field);
        let rk = LocalFunction { geometry: geom, raw };
        Ok(FunctionalSet::global(geom, ids).apply(geom, &rk))
    })
}

/// `u_I` as a full global vector (boundary DOFs included).
pub fn averaged_interpolant(space: &FeSpace, field: &(dyn VectorField + Sync), exec: Execution) -> Result<Vec<f64>> {
    let local = nedelec_local_dofs(space, field, exec)?;
    Ok(average_local_dofs(space, &local))
}

/// Edge DOFs are taken from any incident element; face DOFs are averaged over
/// the one or two incident elements.
pub fn average_local_dofs(space: &FeSpace, local: &[LocalDofs]) -> Vec<f64> {
    let map = space.dofmap();
    let mut sum = vec![0.0; map.num_dofs()];
    let mut count = vec![0u32; map.num_dofs()];
    for (t, dofs) in local.iter().enumerate() {
        for (&g, &v) in map.element(t).ids.iter().zip(dofs) {
            sum[g] += v;
            count[g] += 1;
        }
    }
    sum.iter()
        .zip(&count)
        .map(|(&s, &c)| if c == 0 { 0.0 } else { s / f64::from(c) })
        .collect()
}

/// Interpolate as per-element DOF values.
pub fn interpolate(
    space: &FeSpace,
    field: &(dyn VectorField + Sync),
    kind: Interpolant,
    exec: Execution,
) -> Result<Vec<LocalDofs>> {
    match kind {
        Interpolant::Nedelec => nedelec_local_dofs(space, field, exec),
        Interpolant::Averaged => {
            let full = averaged_interpolant(space, field, exec)?;
            Ok(localize(space, &full))
        }
    }
}

/// Per-element DOF values of a full global vector.
pub fn localize(space: &FeSpace, full: &[f64]) -> Vec<LocalDofs> {
    (0..space.num_tets()).map(|t| space.dofmap().gather(t, full)).collect()
}

/// Raw coefficients of the local function with DOF values `dofs` on element `t`.
pub fn local_raw(space: &FeSpace, t: usize, dofs: &LocalDofs) -> Vec20 {
    space.basis(t).coefficients() * Vec20::from(*dofs)
}
