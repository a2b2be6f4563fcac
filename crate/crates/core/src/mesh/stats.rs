use serde::Serialize;

use super::{Mesh, Topology};
use crate::geometry::{tet_diameter, tet_inradius};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshStats {
    pub h_max: f64,
    pub h_min: f64,
    /// Max over tets of longest edge / inradius (≈ 4.899 for a regular tet).
    pub shape_regularity: f64,
    pub vertices: usize,
    pub tets: usize,
    pub edges: usize,
    pub faces: usize,
    pub boundary_edges: usize,
    pub boundary_faces: usize,
}

pub fn mesh_stats(mesh: &Mesh, topology: &Topology) -> MeshStats {
    let mut h_max: f64 = 0.0;
    let mut h_min = f64::INFINITY;
    let mut reg: f64 = 0.0;
    for t in 0..mesh.num_tets() {
        let v = mesh.tet_vertices(t);
        let d = tet_diameter(&v);
        h_max = h_max.max(d);
        h_min = h_min.min(d);
        reg = reg.max(d / tet_inradius(&v));
    }
    if mesh.num_tets() == 0 {
        h_min = 0.0;
    }
    MeshStats {
        h_max,
        h_min,
        shape_regularity: reg,
        vertices: mesh.num_vertices(),
        tets: mesh.num_tets(),
        edges: topology.num_edges(),
        faces: topology.num_faces(),
        boundary_edges: topology.num_boundary_edges(),
        boundary_faces: topology.num_boundary_faces(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;
    use crate::mesh::{build_topology, generate_box_mesh};

    fn stats(n: usize) -> MeshStats {
        let m = generate_box_mesh(n).unwrap();
        let t = build_topology(&m).unwrap();
        mesh_stats(&m, &t)
    }

    #[test]
    fn box_h_max() {
        assert!((stats(2).h_max - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((stats(4).h_max - 3f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn shape_regularity_is_scale_invariant() {
        let (a, b) = (stats(1), stats(2));
        assert!((a.shape_regularity - b.shape_regularity).abs() < 1e-12);
        assert!(a.h_min <= a.h_max);
    }

    #[test]
    fn regular_tet_ratio() {
        // regular tet with unit edges: inradius = 1/√24
        let s3 = 3f64.sqrt();
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.5, s3 / 2.0, 0.0),
            Vec3::new(0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()),
        ];
        let m = Mesh::new(v, vec![[0, 1, 2, 3]]).unwrap();
        let t = build_topology(&m).unwrap();
        let s = mesh_stats(&m, &t);
        assert!((s.shape_regularity - 24f64.sqrt()).abs() < 1e-12);
        // Kuhn tets are less regular than the regular tet
        assert!(stats(1).shape_regularity > s.shape_regularity);
    }
}
