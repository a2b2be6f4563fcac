//! Global DOF numbering and orientation.
//!
//! Global edge `e` carries DOFs `2e` (first moment) and `2e + 1` (second
//! moment); global face `f` carries `2E + 2f` and `2E + 2f + 1`. Edges are
//! directed from the lower to the higher global vertex id. A face with sorted
//! vertices `g0 < g1 < g2` uses `q¹ = a_g0 − a_g1`, `q² = a_g0 − a_g2` and the
//! unit normal along `(a_g1 − a_g0) × (a_g2 − a_g0)`.

use nalgebra::Matrix2;

use crate::element::{edge_slot, face_slot, Mat20, NUM_DOFS};
use crate::mesh::{Mesh, Topology, LOCAL_EDGES, LOCAL_FACES};

/// Maps global functionals to the canonical local ones of an element:
/// `M_local = T M_global`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientationTransform {
    /// `±1` per local edge, applied to the first moment only.
    pub edge_signs: [f64; 6],
    /// Change of face frame per local face.
    pub face_blocks: [Matrix2<f64>; 4],
}

impl OrientationTransform {
    pub fn identity() -> Self {
        Self {
            edge_signs: [1.0; 6],
            face_blocks: [Matrix2::identity(); 4],
        }
    }

    /// The full block-diagonal 20×20 matrix.
    pub fn matrix(&self) -> Mat20 {
        let mut t = Mat20::zeros();
        for e in 0..6 {
            t[(edge_slot(e, 0), edge_slot(e, 0))] = self.edge_signs[e];
            t[(edge_slot(e, 1), edge_slot(e, 1))] = 1.0;
        }
        for l in 0..4 {
            for r in 0..2 {
                for c in 0..2 {
                    t[(face_slot(l, r), face_slot(l, c))] = self.face_blocks[l][(r, c)];
                }
            }
        }
        t
    }

    /// Combinatorial transform for a positively oriented tet with the given
    /// global vertex ids.
    pub fn for_tet(global_ids: &[usize; 4]) -> Self {
        let mut edge_signs = [1.0; 6];
        for (s, &[i, j]) in edge_signs.iter_mut().zip(&LOCAL_EDGES) {
            if global_ids[i] > global_ids[j] {
                *s = -1.0;
            }
        }
        // Outward normal of face l is OUTWARD_SIGN[l] times the unit normal of
        // its ascending local vertex order.
        const OUTWARD_SIGN: [f64; 4] = [1.0, -1.0, 1.0, -1.0];
        let face_blocks = std::array::from_fn(|l| {
            let local = LOCAL_FACES[l];
            let mut sorted = local;
            sorted.sort_by_key(|&v| global_ids[v]);
            let coord = |v: usize| -> [f64; 2] {
                if v == sorted[1] {
                    [1.0, 0.0]
                } else if v == sorted[2] {
                    [0.0, 1.0]
                } else {
                    [0.0, 0.0]
                }
            };
            let sigma = OUTWARD_SIGN[l] * permutation_sign(&local, &sorted);
            let [i, j, k] = local;
            let mut r = Matrix2::zeros();
            for (row, y) in [j, k].into_iter().enumerate() {
                let (cy, ci) = (coord(y), coord(i));
                r[(row, 0)] = sigma * (cy[0] - ci[0]);
                r[(row, 1)] = sigma * (cy[1] - ci[1]);
            }
            r
        });
        Self {
            edge_signs,
            face_blocks,
        }
    }
}

fn permutation_sign(from: &[usize; 3], to: &[usize; 3]) -> f64 {
    let pos = |v: usize| from.iter().position(|&x| x == v).unwrap();
    let p = [pos(to[0]), pos(to[1]), pos(to[2])];
    let mut inversions = 0;
    for a in 0..3 {
        for b in a + 1..3 {
            if p[a] > p[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Global ids and orientation of one element's 20 DOFs, in local slot order
/// (12 edge DOFs, then 8 face DOFs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementDofs {
    pub ids: [usize; NUM_DOFS],
    pub transform: OrientationTransform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    num_edges: usize,
    num_faces: usize,
    elements: Vec<ElementDofs>,
    constrained: Vec<bool>,
    free: Vec<usize>,
    free_index: Vec<Option<usize>>,
}

impl DofMap {
    pub fn num_dofs(&self) -> usize {
        2 * (self.num_edges + self.num_faces)
    }

    pub fn num_free(&self) -> usize {
        self.free.len()
    }

    pub fn edge_dofs(&self, edge: usize) -> [usize; 2] {
        [2 * edge, 2 * edge + 1]
    }

    pub fn face_dofs(&self, face: usize) -> [usize; 2] {
        let base = 2 * self.num_edges + 2 * face;
        [base, base + 1]
    }

    pub fn element(&self, tet: usize) -> &ElementDofs {
        &self.elements[tet]
    }

    pub fn elements(&self) -> &[ElementDofs] {
        &self.elements
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.constrained[dof]
    }

    /// Global ids of the free DOFs, ascending.
    pub fn free_dofs(&self) -> &[usize] {
        &self.free
    }

    /// Position of a global DOF among the free ones.
    pub fn free_index(&self, dof: usize) -> Option<usize> {
        self.free_index[dof]
    }

    /// Scatter a reduced vector into a full one, constrained entries zero.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.num_dofs()];
        for (&g, &v) in self.free.iter().zip(reduced) {
            full[g] = v;
        }
        full
    }

    /// Gather the free entries of a full vector.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&g| full[g]).collect()
    }

    /// Local coefficients of element `tet` from a full global vector.
    pub fn gather(&self, tet: usize, full: &[f64]) -> [f64; NUM_DOFS] {
        self.elements[tet].ids.map(|g| full[g])
    }
}

pub fn build_dofmap(mesh: &Mesh, topology: &Topology) -> DofMap {
    let num_edges = topology.num_edges();
    let num_faces = topology.num_faces();
    let elements: Vec<ElementDofs> = mesh
        .tets()
        .iter()
        .enumerate()
        .map(|(t, tet)| {
            let mut ids = [0; NUM_DOFS];
            for (e, &ge) in topology.tet_edges[t].iter().enumerate() {
                ids[edge_slot(e, 0)] = 2 * ge;
                ids[edge_slot(e, 1)] = 2 * ge + 1;
            }
            for (l, &gf) in topology.tet_faces[t].iter().enumerate() {
                ids[face_slot(l, 0)] = 2 * num_edges + 2 * gf;
                ids[face_slot(l, 1)] = 2 * num_edges + 2 * gf + 1;
            }
            ElementDofs {
                ids,
                transform: OrientationTransform::for_tet(tet),
            }
        })
        .collect();

    let mask = boundary_flags(topology);
    let mut free = Vec::new();
    let mut free_index = vec![None; mask.len()];
    for (g, &c) in mask.iter().enumerate() {
        if !c {
            free_index[g] = Some(free.len());
            free.push(g);
        }
    }
    DofMap {
        num_edges,
        num_faces,
        elements,
        constrained: mask,
        free,
        free_index,
    }
}

fn boundary_flags(topology: &Topology) -> Vec<bool> {
    let mut mask = Vec::with_capacity(2 * (topology.num_edges() + topology.num_faces()));
    for &b in topology.boundary_edges.iter().chain(&topology.boundary_faces) {
        mask.push(b);
        mask.push(b);
    }
    mask
}

/// Constrained DOFs: everything carried by a boundary edge or face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMask {
    pub constrained: Vec<bool>,
    pub constrained_edge_dofs: usize,
    pub constrained_face_dofs: usize,
}

impl BoundaryMask {
    pub fn num_free(&self) -> usize {
        self.constrained.iter().filter(|&&c| !c).count()
    }
}

pub fn boundary_mask(topology: &Topology, dofmap: &DofMap) -> BoundaryMask {
    let constrained = boundary_flags(topology);
    debug_assert_eq!(constrained, dofmap.constrained);
    BoundaryMask {
        constrained,
        constrained_edge_dofs: 2 * topology.num_boundary_edges(),
        constrained_face_dofs: 2 * topology.num_boundary_faces(),
    }
}

pub fn element_dofs(dofmap: &DofMap, tet: usize) -> &ElementDofs {
    dofmap.element(tet)
}
