//! Small geometric helpers shared by the mesh and element modules.

use nalgebra::Vector3;

pub type Vec3 = Vector3<f64>;

/// Signed volume of the tetrahedron `(a, b, c, d)`; positive when
/// `(b-a, c-a, d-a)` is right-handed.
pub fn signed_volume(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> f64 {
    (b - a).dot(&(c - a).cross(&(d - a))) / 6.0
}

pub fn triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

/// Longest edge of a tetrahedron.
pub fn tet_diameter(v: &[Vec3; 4]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            d = d.max((v[i] - v[j]).norm());
        }
    }
    d
}

/// Inscribed sphere radius, `3|K| / Σ|f|`.
pub fn tet_inradius(v: &[Vec3; 4]) -> f64 {
    let vol = signed_volume(&v[0], &v[1], &v[2], &v[3]).abs();
    let area = triangle_area(&v[1], &v[2], &v[3])
        + triangle_area(&v[0], &v[2], &v[3])
        + triangle_area(&v[0], &v[1], &v[3])
        + triangle_area(&v[0], &v[1], &v[2]);
    3.0 * vol / area
}

/// Point from barycentric coordinates.
pub fn from_barycentric<const N: usize>(verts: &[Vec3; N], bary: &[f64; N]) -> Vec3 {
    let mut p = Vec3::zeros();
    for (v, &l) in verts.iter().zip(bary) {
        p += v * l;
    }
    p
}
