//! Quadrature on simplices with barycentric point storage.
//!
//! Points are barycentric tuples and weights sum to one, so the physical
//! integral over an entity is `measure × Σ wᵢ f(Σⱼ λᵢⱼ vⱼ)`. Edge rules are
//! Gauss–Legendre; triangle rules of degree 1 and 2 are the classical
//! symmetric centroid and 3-point rules, higher degrees and all tetrahedral
//! rules are collapsed (Stroud conical) products of Gauss–Jacobi rules. All
//! weights are positive and all points are interior.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::geometry::{from_barycentric, signed_volume, triangle_area, Vec3};
use crate::{Error, Result};

pub const MAX_EDGE_DEGREE: usize = 25;
pub const MAX_TRIANGLE_DEGREE: usize = 24;
pub const MAX_TET_DEGREE: usize = 24;

/// A quadrature rule on an `N-1`-simplex (`N` barycentric coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule<const N: usize> {
    pub degree: usize,
    pub points: Vec<[f64; N]>,
    pub weights: Vec<f64>,
}

pub type EdgeRule = QuadRule<2>;
pub type TriangleRule = QuadRule<3>;
pub type TetRule = QuadRule<4>;

impl<const N: usize> QuadRule<N> {
    pub fn dimension(&self) -> usize {
        N - 1
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `(barycentric point, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64; N], f64)> + '_ {
        self.points.iter().zip(self.weights.iter().copied())
    }
}

/// Measure of a simplex given by its vertices (length, area or volume).
pub fn simplex_measure<const N: usize>(verts: &[Vec3; N]) -> f64 {
    match N {
        1 => 1.0,
        2 => (verts[1] - verts[0]).norm(),
        3 => triangle_area(&verts[0], &verts[1], &verts[2]),
        4 => signed_volume(&verts[0], &verts[1], &verts[2], &verts[3]).abs(),
        _ => unreachable!("simplices above dimension 3 are not supported"),
    }
}

/// `measure(entity) × Σ wᵢ f(xᵢ)`.
pub fn integrate<const N: usize, F>(verts: &[Vec3; N], rule: &QuadRule<N>, mut f: F) -> f64
where
    F: FnMut(&Vec3) -> f64,
{
    let sum: f64 = rule.iter().map(|(b, w)| w * f(&from_barycentric(verts, b))).sum();
    simplex_measure(verts) * sum
}

/// Gauss–Jacobi nodes and weights on `[0, 1]` for the weight `(1-x)^a`,
/// via Golub–Welsch.
fn gauss_jacobi_01(n: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    let b = 0.0;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jac[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + a + b;
            let beta = 4.0 * m * (m + a) * (m + b) * (m + a + b) / (s * s * (s + 1.0) * (s - 1.0));
            jac[(k, k + 1)] = beta.sqrt();
            jac[(k + 1, k)] = beta.sqrt();
        }
    }
    // ∫_{-1}^{1} (1-t)^a dt for integer a
    let mu0 = 2f64.powf(a + 1.0) / (a + 1.0);
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = eig.eigenvalues[k];
            let v0 = eig.eigenvectors[(0, k)];
            ((1.0 + t) / 2.0, mu0 * v0 * v0 / 2f64.powf(a + 1.0))
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

fn build_edge(degree: usize) -> EdgeRule {
    let n = (degree + 2) / 2;
    let (x, w) = gauss_jacobi_01(n, 0.0);
    QuadRule {
        degree,
        points: x.iter().map(|&s| [1.0 - s, s]).collect(),
        weights: w,
    }
}

fn build_triangle(degree: usize) -> TriangleRule {
    match degree {
        1 => QuadRule {
            degree,
            points: vec![[1.0 / 3.0; 3]],
            weights: vec![1.0],
        },
        2 => {
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            QuadRule {
                degree,
                points: vec![[a, b, b], [b, a, b], [b, b, a]],
                weights: vec![1.0 / 3.0; 3],
            }
        }
        _ => {
            let n = (degree + 2) / 2;
            let (u, wu) = gauss_jacobi_01(n, 1.0);
            let (v, wv) = gauss_jacobi_01(n, 0.0);
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for (&ui, &wi) in u.iter().zip(&wu) {
                for (&vj, &wj) in v.iter().zip(&wv) {
                    let (x, y) = (ui, vj * (1.0 - ui));
                    points.push([1.0 - x - y, x, y]);
                    weights.push(2.0 * wi * wj);
                }
            }
            QuadRule {
                degree,
                points,
                weights,
            }
        }
    }
}

fn build_tet(degree: usize) -> TetRule {
    let n = (degree + 2) / 2;
    let (u, wu) = gauss_jacobi_01(n, 2.0);
    let (v, wv) = gauss_jacobi_01(n, 1.0);
    let (w, ww) = gauss_jacobi_01(n, 0.0);
    let mut points = Vec::with_capacity(n * n * n);
    let mut weights = Vec::with_capacity(n * n * n);
    for (&ui, &wi) in u.iter().zip(&wu) {
        for (&vj, &wj) in v.iter().zip(&wv) {
            for (&wk, &wwk) in w.iter().zip(&ww) {
                let x = ui;
                let y = vj * (1.0 - ui);
                let z = wk * (1.0 - ui) * (1.0 - vj);
                points.push([1.0 - x - y - z, x, y, z]);
                weights.push(6.0 * wi * wj * wwk);
            }
        }
    }
    QuadRule {
        degree,
        points,
        weights,
    }
}

fn cached<const N: usize>(
    cell: &'static OnceLock<Vec<QuadRule<N>>>,
    entity: &'static str,
    max: usize,
    degree: usize,
    build: fn(usize) -> QuadRule<N>,
) -> Result<&'static QuadRule<N>> {
    if degree == 0 || degree > max {
        return Err(Error::UnsupportedDegree { entity, degree, max });
    }
    let rules = cell.get_or_init(|| (1..=max).map(build).collect());
    Ok(&rules[degree - 1])
}

/// Gauss–Legendre rule on an edge with `⌈(degree+1)/2⌉` points.
pub fn gauss_edge(degree: usize) -> Result<&'static EdgeRule> {
    static CACHE: OnceLock<Vec<EdgeRule>> = OnceLock::new();
    cached(&CACHE, "edge", MAX_EDGE_DEGREE, degree, build_edge)
}

pub fn rule_triangle(degree: usize) -> Result<&'static TriangleRule> {
    static CACHE: OnceLock<Vec<TriangleRule>> = OnceLock::new();
    cached(&CACHE, "triangle", MAX_TRIANGLE_DEGREE, degree, build_triangle)
}

pub fn rule_tet(degree: usize) -> Result<&'static TetRule> {
    static CACHE: OnceLock<Vec<TetRule>> = OnceLock::new();
    cached(&CACHE, "tetrahedron", MAX_TET_DEGREE, degree, build_tet)
}
