use std::collections::HashMap;

use super::Mesh;
use crate::{Error, Result};

/// Local edges of a tetrahedron as pairs of local vertex indices.
pub const LOCAL_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Local face `l` is the face opposite local vertex `l`, listed with ascending
/// local indices.
pub const LOCAL_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// Edge and face tables of a mesh. Entity keys are sorted global vertex ids
/// and entities are numbered lexicographically by key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<[usize; 3]>,
    /// Global edge id of each local edge (ordered as [`LOCAL_EDGES`]).
    pub tet_edges: Vec<[usize; 6]>,
    /// Global face id of each local face (ordered as [`LOCAL_FACES`]).
    pub tet_faces: Vec<[usize; 4]>,
    /// `(tet, local face)` pairs adjacent to each face; one or two entries.
    pub face_tets: Vec<Vec<(usize, usize)>>,
    pub boundary_edges: Vec<bool>,
    pub boundary_faces: Vec<bool>,
}

impl Topology {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.boundary_edges.iter().filter(|&&b| b).count()
    }

    pub fn num_boundary_faces(&self) -> usize {
        self.boundary_faces.iter().filter(|&&b| b).count()
    }

    /// Interior faces as `(face, [(tet, local face); 2])`.
    pub fn interior_faces(&self) -> impl Iterator<Item = (usize, [(usize, usize); 2])> + '_ {
        self.face_tets
            .iter()
            .enumerate()
            .filter(|(_, adj)| adj.len() == 2)
            .map(|(f, adj)| (f, [adj[0], adj[1]]))
    }
}

fn sorted2(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn sorted3(mut k: [usize; 3]) -> [usize; 3] {
    k.sort_unstable();
    k
}

pub fn build_topology(mesh: &Mesh) -> Result<Topology> {
    let tets = mesh.tets();

    let mut edges: Vec<[usize; 2]> = tets
        .iter()
        .flat_map(|t| LOCAL_EDGES.map(|[a, b]| sorted2(t[a], t[b])))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let mut faces: Vec<[usize; 3]> = tets
        .iter()
        .flat_map(|t| LOCAL_FACES.map(|f| sorted3(f.map(|i| t[i]))))
        .collect();
    faces.sort_unstable();
    faces.dedup();

    let edge_id: HashMap<[usize; 2], usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let face_id: HashMap<[usize; 3], usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();

    let tet_edges: Vec<[usize; 6]> = tets
        .iter()
        .map(|t| LOCAL_EDGES.map(|[a, b]| edge_id[&sorted2(t[a], t[b])]))
        .collect();
    let tet_faces: Vec<[usize; 4]> = tets
        .iter()
        .map(|t| LOCAL_FACES.map(|f| face_id[&sorted3(f.map(|i| t[i]))]))
        .collect();

    let mut face_tets = vec![Vec::with_capacity(2); faces.len()];
    for (t, tf) in tet_faces.iter().enumerate() {
        for (l, &f) in tf.iter().enumerate() {
            face_tets[f].push((t, l));
        }
    }
    if let Some((f, adj)) = face_tets.iter().enumerate().find(|(_, a)| a.len() > 2) {
        return Err(Error::NonManifold {
            face: faces[f],
            count: adj.len(),
        });
    }

    let boundary_faces: Vec<bool> = face_tets.iter().map(|a| a.len() == 1).collect();
    let mut boundary_edges = vec![false; edges.len()];
    for (f, face) in faces.iter().enumerate() {
        if boundary_faces[f] {
            for [a, b] in [[0, 1], [0, 2], [1, 2]] {
                boundary_edges[edge_id[&[face[a], face[b]]]] = true;
            }
        }
    }

    Ok(Topology {
        edges,
        faces,
        tet_edges,
        tet_faces,
        face_tets,
        boundary_edges,
        boundary_faces,
    })
}
