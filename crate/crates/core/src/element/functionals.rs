//! The 20 degrees of freedom: two tangential moments per edge
//!
//! ```text
//! M⁽¹⁾(u) = ∫_e u·τ ds,   M⁽²⁾(u) = ∫_e u·τ (3 − 6s/|e|) ds,
//! ```
//!
//! and two scaled tangential curl moments per face
//! `M_q(u) = |f|⁻² ∫_f (∇×u)×n · q dA`.
//!
//! A functional is stored as a short stencil of barycentric sample points with
//! vector weights, acting either on the value or on the curl of a field. The
//! edge stencils use the degree-3 Gauss rule and the face stencils the degree-2
//! triangle rule, both exact on the local space.

use super::raw::{BasisEval, NUM_DOFS};
use super::TetGeometry;
use crate::geometry::Vec3;
use crate::mesh::{LOCAL_EDGES, LOCAL_FACES};
use crate::quadrature::{gauss_edge, rule_triangle};

pub const EDGE_DOF_DEGREE: usize = 3;
pub const FACE_DOF_DEGREE: usize = 2;

const EXACT: [usize; 2] = [EDGE_DOF_DEGREE, FACE_DOF_DEGREE];
const FINE: [usize; 2] = [9, 8];

/// A field that can be sampled for its value and curl.
pub trait VectorField {
    fn value(&self, x: &Vec3) -> Vec3;
    fn curl(&self, x: &Vec3) -> Vec3;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeMoment {
    /// Weight 1.
    First,
    /// Weight `3 − 6s/|e|`.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Value,
    Curl,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DofKind {
    /// `s` runs from local vertex `start` to `end`.
    Edge {
        edge: usize,
        moment: EdgeMoment,
        start: usize,
        end: usize,
    },
    Face {
        face: usize,
        tangent_index: usize,
        normal: Vec3,
        tangent: Vec3,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofFunctional {
    pub kind: DofKind,
    pub target: Target,
    samples: Vec<([f64; 4], Vec3)>,
}

impl DofFunctional {
    pub fn edge(geom: &TetGeometry, edge: usize, moment: EdgeMoment, start: usize, end: usize) -> Self {
        Self::edge_with_degree(geom, edge, moment, start, end, EDGE_DOF_DEGREE)
    }

    pub(crate) fn edge_with_degree(
        geom: &TetGeometry,
        edge: usize,
        moment: EdgeMoment,
        start: usize,
        end: usize,
        degree: usize,
    ) -> Self {
        let rule = gauss_edge(degree).expect("edge rule");
        let d = geom.vertices[end] - geom.vertices[start];
        // |e| ds-weight times unit tangent is just the edge vector
        let samples = rule
            .iter()
            .map(|(b, w)| {
                let t = b[1];
                let q = match moment {
                    EdgeMoment::First => 1.0,
                    EdgeMoment::Second => 3.0 - 6.0 * t,
                };
                let mut bary = [0.0; 4];
                bary[start] = 1.0 - t;
                bary[end] = t;
                (bary, d * (w * q))
            })
            .collect();
        Self {
            kind: DofKind::Edge {
                edge,
                moment,
                start,
                end,
            },
            target: Target::Value,
            samples,
        }
    }

    /// `|f|⁻² ∫_f (∇×u)×n·q dA = |f|⁻² ∫_f ∇×u · (n×q) dA`.
    pub fn face(geom: &TetGeometry, face: usize, tangent_index: usize, normal: Vec3, tangent: Vec3) -> Self {
        let scale = 1.0 / geom.face_areas[face];
        Self::face_moment(
            face,
            tangent_index,
            normal,
            tangent,
            Target::Curl,
            scale,
            FACE_DOF_DEGREE,
        )
    }

    pub(crate) fn face_moment(
        face: usize,
        tangent_index: usize,
        normal: Vec3,
        tangent: Vec3,
        target: Target,
        scale: f64,
        degree: usize,
    ) -> Self {
        let rule = rule_triangle(degree).expect("triangle rule");
        let dir = normal.cross(&tangent);
        let verts = LOCAL_FACES[face];
        let samples = rule
            .iter()
            .map(|(b, w)| {
                let mut bary = [0.0; 4];
                for (&v, &l) in verts.iter().zip(b) {
                    bary[v] = l;
                }
                (bary, dir * (w * scale))
            })
            .collect();
        Self {
            kind: DofKind::Face {
                face,
                tangent_index,
                normal,
                tangent,
            },
            target,
            samples,
        }
    }

    /// Apply to a field given in physical coordinates.
    pub fn apply(&self, geom: &TetGeometry, field: &(impl VectorField + ?Sized)) -> f64 {
        self.samples
            .iter()
            .map(|(b, wv)| {
                let x = geom.point(b);
                let v = match self.target {
                    Target::Value => field.value(&x),
                    Target::Curl => field.curl(&x),
                };
                wv.dot(&v)
            })
            .sum()
    }

    /// Apply to each of 20 functions given an evaluator at barycentric points.
    pub fn apply_all(&self, mut eval: impl FnMut(&[f64; 4]) -> BasisEval) -> [f64; NUM_DOFS] {
        let mut out = [0.0; NUM_DOFS];
        for (b, wv) in &self.samples {
            let e = eval(b);
            let vals = match self.target {
                Target::Value => &e.value,
                Target::Curl => &e.curl,
            };
            for (o, v) in out.iter_mut().zip(vals) {
                *o += wv.dot(v);
            }
        }
        out
    }

    pub fn samples(&self) -> &[([f64; 4], Vec3)] {
        &self.samples
    }
}

/// The ordered set of 20 functionals of one element; slot `2e + m` is moment
/// `m` on local edge `e`, slot `12 + 2l + t` is tangent `t` on local face `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSet {
    pub functionals: Vec<DofFunctional>,
}

impl FunctionalSet {
    /// Local canonical orientation: edges run from the lower to the higher
    /// local index; face `l = (i, j, k)` uses the outward normal and
    /// `q_ij = a_i − a_j`, `q_ik = a_i − a_k`.
    pub fn canonical(geom: &TetGeometry) -> Self {
        Self::build(
            geom,
            Target::Curl,
            EXACT,
            |e| LOCAL_EDGES[e],
            |l| (geom.outward_normals[l], geom.face_tangents[l]),
        )
    }

    /// Orientation shared with neighbouring elements, derived from the global
    /// vertex ids of the tet: edges run from lower to higher global id; a face
    /// with sorted global vertices `g0 < g1 < g2` uses `q¹ = a_g0 − a_g1`,
    /// `q² = a_g0 − a_g2` and the unit normal along `(a_g1 − a_g0) × (a_g2 − a_g0)`.
    pub fn global(geom: &TetGeometry, global_ids: &[usize; 4]) -> Self {
        Self::global_with(geom, global_ids, EXACT)
    }

    /// [`FunctionalSet::global`] with high-order stencils, for sampling smooth
    /// fields that are not in the local space.
    pub fn global_fine(geom: &TetGeometry, global_ids: &[usize; 4]) -> Self {
        Self::global_with(geom, global_ids, FINE)
    }

    fn global_with(geom: &TetGeometry, global_ids: &[usize; 4], degrees: [usize; 2]) -> Self {
        Self::build(
            geom,
            Target::Curl,
            degrees,
            |e| global_edge_dir(global_ids, e),
            |l| global_face_frame(geom, global_ids, l),
        )
    }

    /// Functionals of the standard second-order Nédélec interpolant in the
    /// global orientation: the same edge moments, and tangential face moments
    /// `|f|⁻¹ ∫_f (u×n)·q dA` in place of the curl moments.
    pub fn nedelec_global(geom: &TetGeometry, global_ids: &[usize; 4]) -> Self {
        Self::nedelec_global_with(geom, global_ids, EXACT)
    }

    pub fn nedelec_global_fine(geom: &TetGeometry, global_ids: &[usize; 4]) -> Self {
        Self::nedelec_global_with(geom, global_ids, FINE)
    }

    fn nedelec_global_with(geom: &TetGeometry, global_ids: &[usize; 4], degrees: [usize; 2]) -> Self {
        Self::build(
            geom,
            Target::Value,
            degrees,
            |e| global_edge_dir(global_ids, e),
            |l| global_face_frame(geom, global_ids, l),
        )
    }

    fn build(
        geom: &TetGeometry,
        face_target: Target,
        [edge_degree, face_degree]: [usize; 2],
        edge_dir: impl Fn(usize) -> [usize; 2],
        face_frame: impl Fn(usize) -> (Vec3, [Vec3; 2]),
    ) -> Self {
        let mut functionals = Vec::with_capacity(NUM_DOFS);
        for e in 0..6 {
            let [s, t] = edge_dir(e);
            for moment in [EdgeMoment::First, EdgeMoment::Second] {
                functionals.push(DofFunctional::edge_with_degree(geom, e, moment, s, t, edge_degree));
            }
        }
        for l in 0..4 {
            let (n, q) = face_frame(l);
            let scale = 1.0 / geom.face_areas[l];
            for (t, qt) in q.into_iter().enumerate() {
                functionals.push(DofFunctional::face_moment(l, t, n, qt, face_target, scale, face_degree));
            }
        }
        Self { functionals }
    }

    pub fn apply(&self, geom: &TetGeometry, field: &(impl VectorField + ?Sized)) -> [f64; NUM_DOFS] {
        let mut out = [0.0; NUM_DOFS];
        for (o, f) in out.iter_mut().zip(&self.functionals) {
            *o = f.apply(geom, field);
        }
        out
    }
}

fn global_edge_dir(global_ids: &[usize; 4], e: usize) -> [usize; 2] {
    let [i, j] = LOCAL_EDGES[e];
    if global_ids[i] < global_ids[j] {
        [i, j]
    } else {
        [j, i]
    }
}

fn global_face_frame(geom: &TetGeometry, global_ids: &[usize; 4], l: usize) -> (Vec3, [Vec3; 2]) {
    let mut v = LOCAL_FACES[l];
    v.sort_by_key(|&i| global_ids[i]);
    let a = geom.vertices;
    let normal = (a[v[1]] - a[v[0]]).cross(&(a[v[2]] - a[v[0]])).normalize();
    (normal, [a[v[0]] - a[v[1]], a[v[0]] - a[v[2]]])
}

/// Edge moment on local edge `(start, end)` of a field.
pub fn apply_edge_dof(
    geom: &TetGeometry,
    start: usize,
    end: usize,
    moment: EdgeMoment,
    field: &(impl VectorField + ?Sized),
) -> f64 {
    let edge = LOCAL_EDGES
        .iter()
        .position(|e| *e == [start.min(end), start.max(end)])
        .expect("start and end must be distinct local vertices");
    DofFunctional::edge(geom, edge, moment, start, end).apply(geom, field)
}

/// Face moment on local face `face` with the canonical outward normal and
/// tangent `q_ij` (`tangent_index = 0`) or `q_ik` (`1`).
pub fn apply_face_dof(
    geom: &TetGeometry,
    face: usize,
    tangent_index: usize,
    field: &(impl VectorField + ?Sized),
) -> f64 {
    DofFunctional::face(
        geom,
        face,
        tangent_index,
        geom.outward_normals[face],
        geom.face_tangents[face][tangent_index],
    )
    .apply(geom, field)
}
