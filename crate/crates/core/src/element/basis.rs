use nalgebra::{Matrix3, SMatrix, SVector};

use super::functionals::{FunctionalSet, VectorField};
use super::raw::{eval_raw, raw_curl_gradients, BasisEval, NUM_DOFS};
use super::TetGeometry;
use crate::geometry::Vec3;
use crate::{Error, Result};

pub type Mat20 = SMatrix<f64, NUM_DOFS, NUM_DOFS>;
pub type Vec20 = SVector<f64, NUM_DOFS>;

/// Relative singular-value threshold for declaring the DOF matrix singular.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Vandermonde {
    /// `matrix[(a, b)] = M_a(L_b)`.
    pub matrix: Mat20,
    /// Reciprocal max-norm of each row of `matrix`.
    pub row_scale: Vec20,
    /// 2-norm condition number of the row-equilibrated matrix.
    pub condition: f64,
}

impl Vandermonde {
    /// `diag(row_scale) · matrix`, every row with max-norm 1.
    pub fn equilibrated(&self) -> Mat20 {
        Mat20::from_diagonal(&self.row_scale) * self.matrix
    }

    pub fn inverse(&self) -> Result<Mat20> {
        let inv = self.equilibrated().try_inverse().ok_or(Error::SingularVandermonde {
            min_singular: 0.0,
            norm: self.matrix.norm(),
        })?;
        Ok(inv * Mat20::from_diagonal(&self.row_scale))
    }
}

/// `V[a][b] = M_a(L_b)` for the given functionals against the raw functions.
///
/// Edge and face rows scale with different powers of the element size, so
/// singularity is judged after row equilibration.
pub fn dof_vandermonde(geom: &TetGeometry, functionals: &FunctionalSet) -> Result<Vandermonde> {
    let matrix = pairing_matrix(functionals, |b| eval_raw(geom, b));
    let row_scale = Vec20::from_fn(|a, _| {
        let m = matrix.row(a).amax();
        if m > 0.0 {
            1.0 / m
        } else {
            1.0
        }
    });
    let sv = (Mat20::from_diagonal(&row_scale) * matrix).singular_values();
    let (max, min) = sv
        .iter()
        .fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    if !(min > SINGULAR_TOL * max) {
        return Err(Error::SingularVandermonde {
            min_singular: min,
            norm: max,
        });
    }
    Ok(Vandermonde {
        matrix,
        row_scale,
        condition: max / min,
    })
}

/// `P[a][b] = M_a(f_b)` for any 20 functions given by a barycentric evaluator.
pub fn pairing_matrix(functionals: &FunctionalSet, mut eval: impl FnMut(&[f64; 4]) -> BasisEval) -> Mat20 {
    let mut m = Mat20::zeros();
    for (a, f) in functionals.functionals.iter().enumerate() {
        let row = f.apply_all(&mut eval);
        for (b, v) in row.into_iter().enumerate() {
            m[(a, b)] = v;
        }
    }
    m
}

/// 20 local functions given as combinations of the raw functions: column `b`
/// of `coefficients` holds the raw coefficients of function `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    geometry: TetGeometry,
    coefficients: Mat20,
    grad_curl: [Matrix3<f64>; NUM_DOFS],
}

impl BasisSet {
    pub fn from_coefficients(geometry: TetGeometry, coefficients: Mat20) -> Self {
        let raw = raw_curl_gradients(&geometry);
        let mut grad_curl = [Matrix3::zeros(); NUM_DOFS];
        for (b, g) in grad_curl.iter_mut().enumerate() {
            for (c, rg) in raw.iter().enumerate() {
                *g += rg * coefficients[(c, b)];
            }
        }
        Self {
            geometry,
            coefficients,
            grad_curl,
        }
    }

    pub fn geometry(&self) -> &TetGeometry {
        &self.geometry
    }

    pub fn coefficients(&self) -> &Mat20 {
        &self.coefficients
    }

    /// Constant `∇(∇×b)` of every member.
    pub fn grad_curl(&self) -> &[Matrix3<f64>; NUM_DOFS] {
        &self.grad_curl
    }

    pub fn eval(&self, bary: &[f64; 4]) -> BasisEval {
        let raw = eval_raw(&self.geometry, bary);
        let mut out = BasisEval {
            value: [Vec3::zeros(); NUM_DOFS],
            curl: [Vec3::zeros(); NUM_DOFS],
        };
        for b in 0..NUM_DOFS {
            for c in 0..NUM_DOFS {
                let k = self.coefficients[(c, b)];
                if k != 0.0 {
                    out.value[b] += raw.value[c] * k;
                    out.curl[b] += raw.curl[c] * k;
                }
            }
        }
        out
    }

    pub fn eval_at(&self, x: &Vec3) -> BasisEval {
        self.eval(&self.geometry.barycentric(x))
    }

    /// The local function `Σ dofs[b] · basis_b`.
    pub fn combine(&self, dofs: &[f64; NUM_DOFS]) -> LocalFunction<'_> {
        let d = Vec20::from_column_slice(dofs);
        LocalFunction {
            geometry: &self.geometry,
            raw: self.coefficients * d,
        }
    }

    /// Basis member `b` as a [`LocalFunction`].
    pub fn member(&self, b: usize) -> LocalFunction<'_> {
        LocalFunction {
            geometry: &self.geometry,
            raw: self.coefficients.column(b).into_owned(),
        }
    }
}

/// A member of the local space stored by its raw coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFunction<'a> {
    pub geometry: &'a TetGeometry,
    pub raw: Vec20,
}

impl LocalFunction<'_> {
    pub fn eval(&self, bary: &[f64; 4]) -> (Vec3, Vec3) {
        let r = eval_raw(self.geometry, bary);
        let mut v = Vec3::zeros();
        let mut c = Vec3::zeros();
        for k in 0..NUM_DOFS {
            v += r.value[k] * self.raw[k];
            c += r.curl[k] * self.raw[k];
        }
        (v, c)
    }

    pub fn grad_curl(&self) -> Matrix3<f64> {
        raw_curl_gradients(self.geometry)
            .iter()
            .zip(self.raw.iter())
            .map(|(g, &k)| g * k)
            .sum()
    }
}

impl VectorField for LocalFunction<'_> {
    fn value(&self, x: &Vec3) -> Vec3 {
        self.eval(&self.geometry.barycentric(x)).0
    }

    fn curl(&self, x: &Vec3) -> Vec3 {
        self.eval(&self.geometry.barycentric(x)).1
    }
}

/// Dual basis of `functionals` by inverting the DOF Vandermonde matrix.
pub fn dual_basis(geom: &TetGeometry, functionals: &FunctionalSet) -> Result<BasisSet> {
    let inv = dof_vandermonde(geom, functionals)?.inverse()?;
    Ok(BasisSet::from_coefficients(geom.clone(), inv))
}
