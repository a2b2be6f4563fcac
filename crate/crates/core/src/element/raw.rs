//! The 20 generating functions of the second-order first-family Nédélec space
//! in barycentric form.
//!
//! Ordering: for local edge `e = (i, j)` (see [`LOCAL_EDGES`]), index `2e` is
//! `L_ij = λi∇λj − λj∇λi` and `2e + 1` is `L_ji = λi∇λj + λj∇λi = ∇(λiλj)`.
//! For local face `l = (a, b, c)` (see [`LOCAL_FACES`]), index `12 + 2l` is
//! `L_abc` and `12 + 2l + 1` is `L_bac`, where
//! `L_xyz = λx(λy∇λz − λz∇λy)`.

use nalgebra::Matrix3;

use super::TetGeometry;
use crate::geometry::Vec3;
use crate::mesh::{LOCAL_EDGES, LOCAL_FACES};

pub const NUM_DOFS: usize = 20;

pub const fn edge_slot(edge: usize, moment: usize) -> usize {
    2 * edge + moment
}

pub const fn face_slot(face: usize, tangent: usize) -> usize {
    12 + 2 * face + tangent
}

/// Values and curls of 20 functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisEval {
    pub value: [Vec3; NUM_DOFS],
    pub curl: [Vec3; NUM_DOFS],
}

impl BasisEval {
    fn zeros() -> Self {
        Self {
            value: [Vec3::zeros(); NUM_DOFS],
            curl: [Vec3::zeros(); NUM_DOFS],
        }
    }
}

fn outer(a: &Vec3, b: &Vec3) -> Matrix3<f64> {
    a * b.transpose()
}

/// `L_abc = λa(λb∇λc − λc∇λb)`: value, curl and (constant) curl gradient.
pub(crate) fn triple_value(g: &[Vec3; 4], l: &[f64; 4], a: usize, b: usize, c: usize) -> Vec3 {
    (g[c] * l[b] - g[b] * l[c]) * l[a]
}

pub(crate) fn triple_curl(g: &[Vec3; 4], l: &[f64; 4], a: usize, b: usize, c: usize) -> Vec3 {
    g[b].cross(&g[c]) * (2.0 * l[a]) + g[a].cross(&g[c]) * l[b] - g[a].cross(&g[b]) * l[c]
}

/// `G[r][s] = ∂_s (∇×L_abc)_r`.
pub(crate) fn triple_grad_curl(g: &[Vec3; 4], a: usize, b: usize, c: usize) -> Matrix3<f64> {
    outer(&(g[b].cross(&g[c]) * 2.0), &g[a]) + outer(&g[a].cross(&g[c]), &g[b]) - outer(&g[a].cross(&g[b]), &g[c])
}

/// Coefficients of an arbitrary `L_abc` (distinct local vertices) in terms of
/// the two stored functions of face `{a, b, c}`, using `L_abc = −L_acb` and
/// `L_abc + L_bca + L_cab = 0`.
pub fn triple_in_raw(a: usize, b: usize, c: usize) -> [(usize, f64); 2] {
    let opposite = 6 - a - b - c;
    let [p, q, r] = LOCAL_FACES[opposite];
    let (f0, f1) = (face_slot(opposite, 0), face_slot(opposite, 1));
    // L_pqr = F0, L_qpr = F1
    let (c0, c1) = match (a, b, c) {
        _ if (a, b, c) == (p, q, r) => (1.0, 0.0),
        _ if (a, b, c) == (p, r, q) => (-1.0, 0.0),
        _ if (a, b, c) == (q, p, r) => (0.0, 1.0),
        _ if (a, b, c) == (q, r, p) => (0.0, -1.0),
        _ if (a, b, c) == (r, p, q) => (-1.0, 1.0),
        _ if (a, b, c) == (r, q, p) => (1.0, -1.0),
        _ => unreachable!("({a}, {b}, {c}) is not a permutation of face {opposite}"),
    };
    [(f0, c0), (f1, c1)]
}

/// Evaluate all 20 generating functions at a barycentric point.
pub fn eval_raw(geom: &TetGeometry, l: &[f64; 4]) -> BasisEval {
    let g = &geom.grad_lambda;
    let mut out = BasisEval::zeros();
    for (e, &[i, j]) in LOCAL_EDGES.iter().enumerate() {
        out.value[edge_slot(e, 0)] = g[j] * l[i] - g[i] * l[j];
        out.curl[edge_slot(e, 0)] = g[i].cross(&g[j]) * 2.0;
        out.value[edge_slot(e, 1)] = g[j] * l[i] + g[i] * l[j];
    }
    for (f, &[a, b, c]) in LOCAL_FACES.iter().enumerate() {
        out.value[face_slot(f, 0)] = triple_value(g, l, a, b, c);
        out.curl[face_slot(f, 0)] = triple_curl(g, l, a, b, c);
        out.value[face_slot(f, 1)] = triple_value(g, l, b, a, c);
        out.curl[face_slot(f, 1)] = triple_curl(g, l, b, a, c);
    }
    out
}

/// Constant curl gradients of the 20 generating functions.
pub fn raw_curl_gradients(geom: &TetGeometry) -> [Matrix3<f64>; NUM_DOFS] {
    let g = &geom.grad_lambda;
    let mut out = [Matrix3::zeros(); NUM_DOFS];
    for (f, &[a, b, c]) in LOCAL_FACES.iter().enumerate() {
        out[face_slot(f, 0)] = triple_grad_curl(g, a, b, c);
        out[face_slot(f, 1)] = triple_grad_curl(g, b, a, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::random_tet;
    use rand::{Rng, SeedableRng};

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
    fn reference_edge_values() {
        let g = reference();
        let r = eval_raw(&g, &[0.5, 0.5, 0.0, 0.0]);
        assert!((r.value[0] - Vec3::new(1.0, 0.5, 0.5)).norm() < 1e-15);
        assert!((r.curl[0] - Vec3::new(0.0, -2.0, 2.0)).norm() < 1e-15);
        let r2 = eval_raw(&g, &[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(r.curl[0], r2.curl[0]);
    }

    #[test]
    fn gradient_functions_are_curl_free() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = TetGeometry::new(random_tet(&mut rng, 20.0)).unwrap();
        let r = eval_raw(&g, &[0.3, 0.1, 0.4, 0.2]);
        for e in 0..6 {
            assert_eq!(r.curl[edge_slot(e, 1)], Vec3::zeros());
        }
    }

    /// Central differences of the value recover the analytic curl, and
    /// differences of the curl recover the curl gradient (both exact up to
    /// roundoff for polynomials of degree ≤ 2 and ≤ 1 respectively).
    #[test]
    fn curls_match_differentiation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let geom = TetGeometry::new(random_tet(&mut rng, 20.0)).unwrap();
            let gc = raw_curl_gradients(&geom);
            let mut l = [0.0; 4];
            for v in l.iter_mut() {
                *v = rng.random::<f64>();
            }
            let s: f64 = l.iter().sum();
            l.iter_mut().for_each(|v| *v /= s);
            let x = geom.point(&l);
            let h = 1e-3 * geom.diameter();
            let at = |p: Vec3| eval_raw(&geom, &geom.barycentric(&p));
            let mut jac_val = [Matrix3::zeros(); NUM_DOFS];
            let mut jac_curl = [Matrix3::zeros(); NUM_DOFS];
            for s in 0..3 {
                let mut dx = Vec3::zeros();
                dx[s] = h;
                let (p, m) = (at(x + dx), at(x - dx));
                for b in 0..NUM_DOFS {
                    jac_val[b].set_column(s, &((p.value[b] - m.value[b]) / (2.0 * h)));
                    jac_curl[b].set_column(s, &((p.curl[b] - m.curl[b]) / (2.0 * h)));
                }
            }
            let here = at(x);
            for b in 0..NUM_DOFS {
                let j = jac_val[b];
                let curl = Vec3::new(j[(2, 1)] - j[(1, 2)], j[(0, 2)] - j[(2, 0)], j[(1, 0)] - j[(0, 1)]);
                let scale = 1.0 + here.curl[b].norm() + j.norm();
                assert!((curl - here.curl[b]).norm() < 1e-8 * scale, "curl of {b}");
                let scale = 1.0 + gc[b].norm();
                assert!((jac_curl[b] - gc[b]).norm() < 1e-8 * scale, "grad curl of {b}");
            }
        }
    }

    #[test]
    fn triple_identities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let geom = TetGeometry::new(random_tet(&mut rng, 20.0)).unwrap();
        let l = [0.15, 0.25, 0.35, 0.25];
        let raw = eval_raw(&geom, &l);
        for verts in LOCAL_FACES {
            for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                let (a, b, c) = (verts[perm[0]], verts[perm[1]], verts[perm[2]]);
                let direct = triple_value(&geom.grad_lambda, &l, a, b, c);
                let via: Vec3 = triple_in_raw(a, b, c)
                    .iter()
                    .map(|&(slot, coef)| raw.value[slot] * coef)
                    .sum();
                assert!((direct - via).norm() < 1e-13 * (1.0 + direct.norm()));
            }
        }
    }
}
