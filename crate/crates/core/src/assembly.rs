//! Finite element space and assembly of the reduced linear system
//!
//! ```text
//! a_h(u, v) = Σ_K α (∇(∇×u), ∇(∇×v))_K + β (∇×u, ∇×v)_K + γ (u, v)_K
//! ```
//!
//! over the free DOFs, with load `(f, v)`.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::dofmap::{build_dofmap, DofMap};
use crate::element::{dual_basis, explicit_basis, tet_geometry, BasisSet, FunctionalSet, Mat20, Vec20, NUM_DOFS};
use crate::exec::Execution;
use crate::geometry::Vec3;
use crate::mesh::{build_topology, Mesh, Topology};
use crate::quadrature::rule_tet;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Quadrature degree for the load vector.
pub const LOAD_DEGREE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { alpha, beta, gamma })
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
        }
    }
}

/// How element bases are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisPath {
    /// Vandermonde inversion against the globally oriented functionals.
    #[default]
    Vandermonde,
    /// Closed-form canonical basis followed by the orientation transform.
    Explicit,
}

/// Mesh, topology, DOF map and one dual basis per element.
#[derive(Debug, Clone)]
pub struct FeSpace {
    mesh: Mesh,
    topology: Topology,
    dofmap: DofMap,
    bases: Vec<BasisSet>,
}

impl FeSpace {
    pub fn new(mesh: Mesh, exec: Execution) -> Result<Self> {
        Self::with_basis(mesh, BasisPath::default(), exec)
    }

    pub fn with_basis(mesh: Mesh, path: BasisPath, exec: Execution) -> Result<Self> {
        let topology = build_topology(&mesh)?;
        let dofmap = build_dofmap(&mesh, &topology);
        let bases = exec.try_map(mesh.num_tets(), |t| {
            let geom = tet_geometry(mesh.tet_vertices(t))?;
            match path {
                BasisPath::Vandermonde => {
                    let functionals = FunctionalSet::global(&geom, &mesh.tets()[t]);
                    dual_basis(&geom, &functionals)
                }
                BasisPath::Explicit => {
                    let local = explicit_basis(&geom);
                    let t = dofmap.element(t).transform.matrix();
                    Ok(BasisSet::from_coefficients(geom, local.coefficients() * t))
                }
            }
        })?;
        Ok(Self {
            mesh,
            topology,
            dofmap,
            bases,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn dofmap(&self) -> &DofMap {
        &self.dofmap
    }

    pub fn basis(&self, tet: usize) -> &BasisSet {
        &self.bases[tet]
    }

    pub fn bases(&self) -> &[BasisSet] {
        &self.bases
    }

    pub fn num_tets(&self) -> usize {
        self.bases.len()
    }
}

/// The three local bilinear forms.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBlocks {
    pub grad_curl: Mat20,
    pub curl_curl: Mat20,
    pub mass: Mat20,
}

impl LocalBlocks {
    pub fn combine(&self, params: &ModelParams) -> Mat20 {
        self.grad_curl * params.alpha + self.curl_curl * params.beta + self.mass * params.gamma
    }
}

fn frobenius(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    a.component_mul(b).sum()
}

pub fn local_blocks(basis: &BasisSet) -> LocalBlocks {
    let geom = basis.geometry();
    let vol = geom.volume;
    let g = basis.grad_curl();
    let mut grad_curl = Mat20::zeros();
    for a in 0..NUM_DOFS {
        for b in a..NUM_DOFS {
            let v = vol * frobenius(&g[a], &g[b]);
            grad_curl[(a, b)] = v;
            grad_curl[(b, a)] = v;
        }
    }
    let mut curl_curl = Mat20::zeros();
    let mut mass = Mat20::zeros();
    let rule = rule_tet(4).expect("tet rule");
    for (bary, w) in rule.iter() {
        let e = basis.eval(bary);
        let w = w * vol;
        for a in 0..NUM_DOFS {
            for b in a..NUM_DOFS {
                curl_curl[(a, b)] += w * e.curl[a].dot(&e.curl[b]);
                mass[(a, b)] += w * e.value[a].dot(&e.value[b]);
            }
        }
    }
    for a in 0..NUM_DOFS {
        for b in 0..a {
            curl_curl[(a, b)] = curl_curl[(b, a)];
            mass[(a, b)] = mass[(b, a)];
        }
    }
    LocalBlocks {
        grad_curl,
        curl_curl,
        mass,
    }
}

/// `(f, b_a)_K` by quadrature of the given degree.
pub fn local_load(basis: &BasisSet, f: &(dyn Fn(&Vec3) -> Vec3 + Sync), degree: usize) -> Result<Vec20> {
    let geom = basis.geometry();
    let rule = rule_tet(degree)?;
    let mut load = Vec20::zeros();
    for (bary, w) in rule.iter() {
        let fx = f(&geom.point(bary));
        let e = basis.eval(bary);
        for a in 0..NUM_DOFS {
            load[a] += w * geom.volume * fx.dot(&e.value[a]);
        }
    }
    Ok(load)
}

/// Local matrix and load vector of one element.
pub fn local_system(
    basis: &BasisSet,
    params: &ModelParams,
    f: &(dyn Fn(&Vec3) -> Vec3 + Sync),
) -> Result<(Mat20, Vec20)> {
    Ok((local_blocks(basis).combine(params), local_load(basis, f, LOAD_DEGREE)?))
}

/// Reduced symmetric system over the free DOFs.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Global DOF id of each unknown.
    pub free: Vec<usize>,
}

impl LinearSystem {
    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }
}

/// The three bilinear forms assembled separately over the free DOFs.
#[derive(Debug, Clone)]
pub struct AssembledBlocks {
    pub grad_curl: CsrMatrix,
    pub curl_curl: CsrMatrix,
    pub mass: CsrMatrix,
}

impl AssembledBlocks {
    /// `α G + β C + γ M`.
    pub fn combine(&self, params: &ModelParams) -> Result<CsrMatrix> {
        let terms = [
            (&self.grad_curl, params.alpha),
            (&self.curl_curl, params.beta),
            (&self.mass, params.gamma),
        ];
        let mut triplets = Vec::new();
        for (m, s) in terms {
            for r in 0..m.nrows() {
                let (cols, vals) = m.row(r);
                triplets.extend(cols.iter().zip(vals).map(|(&c, &v)| (r, c, s * v)));
            }
        }
        CsrMatrix::from_triplets(self.mass.nrows(), self.mass.ncols(), triplets)
    }
}

fn scatter(space: &FeSpace, locals: &[Mat20]) -> Result<CsrMatrix> {
    let map = space.dofmap();
    let mut triplets = Vec::with_capacity(locals.len() * NUM_DOFS * NUM_DOFS);
    for (t, local) in locals.iter().enumerate() {
        let rows = map.element(t).ids.map(|g| map.free_index(g));
        for (a, ra) in rows.iter().enumerate() {
            let Some(ra) = *ra else { continue };
            for (b, rb) in rows.iter().enumerate() {
                if let Some(rb) = *rb {
                    triplets.push((ra, rb, local[(a, b)]));
                }
            }
        }
    }
    let n = map.num_free();
    CsrMatrix::from_triplets(n, n, triplets)
}

pub fn assemble_blocks(space: &FeSpace, exec: Execution) -> Result<AssembledBlocks> {
    let locals = exec.map(space.num_tets(), |t| local_blocks(space.basis(t)));
    let pick = |which: fn(&LocalBlocks) -> Mat20| locals.iter().map(which).collect::<Vec<_>>();
    Ok(AssembledBlocks {
        grad_curl: scatter(space, &pick(|l| l.grad_curl))?,
        curl_curl: scatter(space, &pick(|l| l.curl_curl))?,
        mass: scatter(space, &pick(|l| l.mass))?,
    })
}

pub fn assemble_matrix(space: &FeSpace, params: &ModelParams, exec: Execution) -> Result<CsrMatrix> {
    let locals = exec.map(space.num_tets(), |t| local_blocks(space.basis(t)).combine(params));
    scatter(space, &locals)
}

/// Reduced load vector `(f, b_i)` for the free DOFs.
pub fn assemble_load(
    space: &FeSpace,
    f: &(dyn Fn(&Vec3) -> Vec3 + Sync),
    degree: usize,
    exec: Execution,
) -> Result<Vec<f64>> {
    let locals = exec.try_map(space.num_tets(), |t| local_load(space.basis(t), f, degree))?;
    let map = space.dofmap();
    let mut rhs = vec![0.0; map.num_free()];
    for (t, local) in locals.iter().enumerate() {
        for (a, &g) in map.element(t).ids.iter().enumerate() {
            if let Some(i) = map.free_index(g) {
                rhs[i] += local[a];
            }
        }
    }
    Ok(rhs)
}

pub fn assemble(
    space: &FeSpace,
    params: &ModelParams,
    f: &(dyn Fn(&Vec3) -> Vec3 + Sync),
    exec: Execution,
) -> Result<LinearSystem> {
    Ok(LinearSystem {
        matrix: assemble_matrix(space, params, exec)?,
        rhs: assemble_load(space, f, LOAD_DEGREE, exec)?,
        free: space.dofmap().free_dofs().to_vec(),
    })
}
