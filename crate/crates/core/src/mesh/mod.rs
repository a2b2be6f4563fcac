//! Tetrahedral meshes: storage, generation on the unit cube, Gmsh I/O,
//! entity tables and size statistics.

mod msh;
mod stats;
mod topology;

pub use msh::{parse_msh, write_msh, ParsedMsh};
pub use stats::{mesh_stats, MeshStats};
pub use topology::{build_topology, Topology, LOCAL_EDGES, LOCAL_FACES};

use std::collections::HashSet;

use crate::geometry::{signed_volume, tet_diameter, Vec3};
use crate::{Error, Result};

/// Relative volume threshold below which a tetrahedron counts as degenerate:
/// `|K| < DEGENERATE_RATIO · diam(K)³`.
pub const DEGENERATE_RATIO: f64 = 1e-14;

/// A conforming tetrahedral mesh with positively oriented cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Vec3>,
    tets: Vec<[usize; 4]>,
}

impl Mesh {
    /// Validate and build a mesh. Tets must be positively oriented, reference
    /// existing vertices and be pairwise distinct.
    pub fn new(vertices: Vec<Vec3>, tets: Vec<[usize; 4]>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(tets.len());
        for (t, tet) in tets.iter().enumerate() {
            if let Some(&bad) = tet.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidArgument(format!(
                    "tet {t} references vertex {bad}, mesh has {}",
                    vertices.len()
                )));
            }
            let v = tet.map(|i| vertices[i]);
            let vol = signed_volume(&v[0], &v[1], &v[2], &v[3]);
            let threshold = DEGENERATE_RATIO * tet_diameter(&v).powi(3);
            if vol.abs() < threshold || !(threshold > 0.0) {
                return Err(Error::DegenerateTet {
                    tet: t,
                    volume: vol,
                    threshold,
                });
            }
            if vol < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "tet {t} is negatively oriented (volume {vol:e})"
                )));
            }
            let mut key = *tet;
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(Error::InvalidArgument(format!("tet {t} duplicates {key:?}")));
            }
        }
        Ok(Self { vertices, tets })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    /// Coordinates of the four vertices of tet `t`, in stored order.
    pub fn tet_vertices(&self, t: usize) -> [Vec3; 4] {
        self.tets[t].map(|i| self.vertices[i])
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        let v = self.tet_vertices(t);
        signed_volume(&v[0], &v[1], &v[2], &v[3])
    }
}

/// Unit cube split into `n³` subcubes, each cut into 6 Kuhn tetrahedra around
/// the `(0,0,0) → (1,1,1)` diagonal.
pub fn generate_box_mesh(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidArgument("box mesh needs n >= 1".into()));
    }
    let m = n + 1;
    let h = 1.0 / n as f64;
    let id = |i: usize, j: usize, k: usize| i + m * (j + m * k);

    let mut vertices = Vec::with_capacity(m * m * m);
    for k in 0..m {
        for j in 0..m {
            for i in 0..m {
                vertices.push(Vec3::new(i as f64 * h, j as f64 * h, k as f64 * h));
            }
        }
    }

    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for perm in PERMS {
                    let mut corner = [i, j, k];
                    let mut tet = [id(i, j, k), 0, 0, 0];
                    for (step, &axis) in perm.iter().enumerate() {
                        corner[axis] += 1;
                        tet[step + 1] = id(corner[0], corner[1], corner[2]);
                    }
                    let v = tet.map(|x| vertices[x]);
                    if signed_volume(&v[0], &v[1], &v[2], &v[3]) < 0.0 {
                        tet.swap(2, 3);
                    }
                    tets.push(tet);
                }
            }
        }
    }
    Mesh::new(vertices, tets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_counts() {
        let m1 = generate_box_mesh(1).unwrap();
        assert_eq!((m1.num_vertices(), m1.num_tets()), (8, 6));
        let m2 = generate_box_mesh(2).unwrap();
        assert_eq!((m2.num_vertices(), m2.num_tets()), (27, 48));
    }

    #[test]
    fn box_volumes_partition_unit_cube() {
        let m = generate_box_mesh(4).unwrap();
        let total: f64 = (0..m.num_tets()).map(|t| m.tet_volume(t)).sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!((0..m.num_tets()).all(|t| m.tet_volume(t) > 0.0));
    }

    #[test]
    fn zero_n_rejected() {
        assert!(generate_box_mesh(0).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let v = vec![
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 1.0, 0.0),
        ];
        assert!(Mesh::new(v.clone(), vec![[0, 1, 2, 9]]).is_err());
        assert!(Mesh::new(v.clone(), vec![[0, 2, 1, 3]]).is_err());
        assert!(Mesh::new(v.clone(), vec![[0, 1, 2, 3], [1, 0, 3, 2]]).is_err());
        assert!(matches!(
            Mesh::new(v, vec![[0, 1, 4, 2]]),
            Err(Error::DegenerateTet { .. })
        ));
    }
}
