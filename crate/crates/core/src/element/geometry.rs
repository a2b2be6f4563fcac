use nalgebra::Matrix3;

use crate::geometry::{signed_volume, tet_diameter, triangle_area, Vec3};
use crate::mesh::{DEGENERATE_RATIO, LOCAL_EDGES, LOCAL_FACES};
use crate::{Error, Result};

/// Per-tetrahedron geometric data. Local edge and face numbering follows
/// [`LOCAL_EDGES`] and [`LOCAL_FACES`].
#[derive(Debug, Clone, PartialEq)]
pub struct TetGeometry {
    pub vertices: [Vec3; 4],
    /// Constant gradients of the barycentric coordinates.
    pub grad_lambda: [Vec3; 4],
    /// Unsigned volume.
    pub volume: f64,
    pub face_areas: [f64; 4],
    /// Distance from vertex `l` to the plane of face `l`.
    pub heights: [f64; 4],
    pub edge_lengths: [f64; 6],
    /// Unit tangents from the first to the second local vertex of each edge.
    pub edge_tangents: [Vec3; 6],
    /// `[a_i - a_j, a_i - a_k]` for face `l = (i, j, k)`.
    pub face_tangents: [[Vec3; 2]; 4],
    pub outward_normals: [Vec3; 4],
}

impl TetGeometry {
    pub fn new(vertices: [Vec3; 4]) -> Result<Self> {
        let [a0, a1, a2, a3] = vertices;
        let signed = signed_volume(&a0, &a1, &a2, &a3);
        let threshold = DEGENERATE_RATIO * tet_diameter(&vertices).powi(3);
        if !(signed.abs() >= threshold) || threshold == 0.0 {
            return Err(Error::DegenerateTet {
                tet: 0,
                volume: signed,
                threshold,
            });
        }
        // rows of J⁻¹ are ∇λ₁..₃ where J = [a1-a0 | a2-a0 | a3-a0]
        let jac = Matrix3::from_columns(&[a1 - a0, a2 - a0, a3 - a0]);
        let inv = jac.try_inverse().ok_or(Error::DegenerateTet {
            tet: 0,
            volume: signed,
            threshold,
        })?;
        let g1: Vec3 = inv.row(0).transpose();
        let g2: Vec3 = inv.row(1).transpose();
        let g3: Vec3 = inv.row(2).transpose();
        let grad_lambda = [-(g1 + g2 + g3), g1, g2, g3];

        let face_areas = LOCAL_FACES.map(|[i, j, k]| triangle_area(&vertices[i], &vertices[j], &vertices[k]));
        let volume = signed.abs();
        let heights = face_areas.map(|a| 3.0 * volume / a);
        let edge_lengths = LOCAL_EDGES.map(|[i, j]| (vertices[j] - vertices[i]).norm());
        let edge_tangents = LOCAL_EDGES.map(|[i, j]| (vertices[j] - vertices[i]).normalize());
        let face_tangents = LOCAL_FACES.map(|[i, j, k]| [vertices[i] - vertices[j], vertices[i] - vertices[k]]);
        let outward_normals = grad_lambda.map(|g| -g.normalize());

        Ok(Self {
            vertices,
            grad_lambda,
            volume,
            face_areas,
            heights,
            edge_lengths,
            edge_tangents,
            face_tangents,
            outward_normals,
        })
    }

    pub fn barycentric(&self, x: &Vec3) -> [f64; 4] {
        let d = x - self.vertices[0];
        let l1 = self.grad_lambda[1].dot(&d);
        let l2 = self.grad_lambda[2].dot(&d);
        let l3 = self.grad_lambda[3].dot(&d);
        [1.0 - l1 - l2 - l3, l1, l2, l3]
    }

    pub fn point(&self, bary: &[f64; 4]) -> Vec3 {
        crate::geometry::from_barycentric(&self.vertices, bary)
    }

    pub fn diameter(&self) -> f64 {
        self.edge_lengths.iter().copied().fold(0.0, f64::max)
    }

    pub fn face_vertices(&self, l: usize) -> [Vec3; 3] {
        LOCAL_FACES[l].map(|i| self.vertices[i])
    }
}

/// Convenience wrapper for [`TetGeometry::new`].
pub fn tet_geometry(vertices: [Vec3; 4]) -> Result<TetGeometry> {
    TetGeometry::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::random_tet;
    use rand::SeedableRng;

    fn reference() -> TetGeometry {
        TetGeometry::new([
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn reference_tet_values() {
        let g = reference();
        assert_eq!(g.grad_lambda[0], Vec3::new(-1.0, -1.0, -1.0));
        assert!((g.volume - 1.0 / 6.0).abs() < 1e-16);
        assert!((g.face_areas[3] - 0.5).abs() < 1e-16);
        assert!((g.heights[3] - 1.0).abs() < 1e-15);
        assert!((g.outward_normals[3] - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-16);
    }

    #[test]
    fn geometric_identities_on_random_tets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let v = random_tet(&mut rng, 20.0);
            let g = TetGeometry::new(v).unwrap();
            let scale = g.grad_lambda.iter().map(|x| x.norm()).fold(0.0, f64::max);
            let sum: Vec3 = g.grad_lambda.iter().sum();
            assert!(sum.norm() < 1e-13 * scale);
            for l in 0..4 {
                // independent height: point-to-plane distance
                let [i, j, k] = LOCAL_FACES[l];
                let n = (v[j] - v[i]).cross(&(v[k] - v[i])).normalize();
                let dist = n.dot(&(v[l] - v[i])).abs();
                assert!((g.grad_lambda[l].norm() * dist - 1.0).abs() < 1e-12);
                assert!((g.heights[l] - dist).abs() < 1e-12 * dist);
                // outward: points away from the opposite vertex
                assert!(g.outward_normals[l].dot(&(v[l] - v[i])) < 0.0);
                // ∇λ_l = (q_ik × q_jk) / (6|K|) up to orientation
                let q_ik = v[i] - v[k];
                let q_jk = v[j] - v[k];
                let cross = q_ik.cross(&q_jk) / (6.0 * g.volume);
                assert!((cross.norm() - g.grad_lambda[l].norm()).abs() < 1e-11 * scale);
                assert!(cross.cross(&g.grad_lambda[l]).norm() < 1e-11 * scale * scale);
            }
            // 6|K| = |q_il · (q_jl × q_kl)| for l = 3
            let q = |a: usize| v[a] - v[3];
            assert!((q(0).dot(&q(1).cross(&q(2))).abs() - 6.0 * g.volume).abs() < 1e-13);
            let x = g.point(&[0.1, 0.2, 0.3, 0.4]);
            let b = g.barycentric(&x);
            for (bi, ei) in b.iter().zip([0.1, 0.2, 0.3, 0.4]) {
                assert!((bi - ei).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_rejected() {
        let r = TetGeometry::new([
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
        ]);
        assert!(matches!(r, Err(Error::DegenerateTet { .. })));
    }
}
