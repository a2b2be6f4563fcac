use nalgebra::Matrix3;
use serde::Serialize;

use super::expr::{eval_jacobian, Kind, Scalar, Vector};
use crate::assembly::ModelParams;
use crate::element::VectorField;
use crate::geometry::Vec3;

/// An analytic field with everything the error measurements need.
#[derive(Debug, Clone)]
pub struct ExactSolution {
    description: String,
    params: ModelParams,
    u: Vector,
    curl: Vector,
    grad_curl: [[Scalar; 3]; 3],
    f: Vector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadForm {
    /// `α Δ²u − β Δu + γ u`, valid for divergence-free `u`.
    Laplacian,
    /// `α (∇×)⁴u + β (∇×)²u + γ u`.
    Curl,
}

fn load(u: &Vector, params: &ModelParams, form: LoadForm) -> Vector {
    match form {
        LoadForm::Laplacian => {
            let lap = u.laplacian();
            lap.laplacian()
                .scale(params.alpha)
                .axpy(-params.beta, &lap)
                .axpy(params.gamma, u)
        }
        LoadForm::Curl => {
            let c2 = u.curl().curl();
            c2.curl()
                .curl()
                .scale(params.alpha)
                .axpy(params.beta, &c2)
                .axpy(params.gamma, u)
        }
    }
}

impl ExactSolution {
    /// `u = ∇×(s, s, s)` with `s = sin³(πx) sin³(πy) sin³(πz)` on the unit cube.
    pub fn sincube(params: ModelParams) -> Self {
        let s = Scalar::term(1.0, [Kind::SinCube; 3]);
        let u = Vector([s.clone(), s.clone(), s]).curl();
        Self::from_field("sincube", u, params, LoadForm::Laplacian)
    }

    /// `u = ∇×(s, s, s)` with the polynomial `s = (x(1−x) y(1−y) z(1−z))³`.
    pub fn polycube(params: ModelParams) -> Self {
        // t³(1−t)³ = t³ − 3t⁴ + 3t⁵ − t⁶
        let coefs = [(3, 1.0), (4, -3.0), (5, 3.0), (6, -1.0)];
        let mut s = Scalar::zero();
        for (px, cx) in coefs {
            for (py, cy) in coefs {
                for (pz, cz) in coefs {
                    s = s.add(&Scalar::monomial(cx * cy * cz, [px, py, pz]));
                }
            }
        }
        let u = Vector([s.clone(), s.clone(), s]).curl();
        Self::from_field("polycube", u, params, LoadForm::Laplacian)
    }

    /// `u = (y, z, x)`, a member of every element's local space.
    pub fn rotation(params: ModelParams) -> Self {
        let u = Vector([
            Scalar::monomial(1.0, [0, 1, 0]),
            Scalar::monomial(1.0, [0, 0, 1]),
            Scalar::monomial(1.0, [1, 0, 0]),
        ]);
        Self::from_field("rotation", u, params, LoadForm::Curl)
    }

    /// `u = (x·w)(x×v)` plus the affine field `(y, z, x)`: a global member of
    /// the local space including its homogeneous quadratic part.
    pub fn quadratic(params: ModelParams) -> Self {
        // w = (1, 2, -1), v = (0.5, -1, 2)
        let w = [1.0, 2.0, -1.0];
        let v = [0.5, -1.0, 2.0];
        let x = |i: usize| {
            let mut p = [0; 3];
            p[i] = 1;
            p
        };
        let mut comps: [Scalar; 3] = Default::default();
        for (r, comp) in comps.iter_mut().enumerate() {
            // (x×v)_r = x_{r+1} v_{r+2} − x_{r+2} v_{r+1}
            let (a, b) = ((r + 1) % 3, (r + 2) % 3);
            for (k, &wk) in w.iter().enumerate() {
                let mut pa = x(k);
                pa[a] += 1;
                let mut pb = x(k);
                pb[b] += 1;
                *comp = comp
                    .add(&Scalar::monomial(wk * v[b], pa))
                    .sub(&Scalar::monomial(wk * v[a], pb));
            }
        }
        let u = Vector(comps).axpy(1.0, &Self::rotation(params).u);
        Self::from_field("quadratic", u, params, LoadForm::Curl)
    }

    pub fn from_field(description: &str, u: Vector, params: ModelParams, form: LoadForm) -> Self {
        let curl = u.curl();
        let grad_curl = curl.jacobian();
        let f = load(&u, &params, form);
        Self {
            description: description.to_owned(),
            params,
            u,
            curl,
            grad_curl,
            f,
        }
    }

    /// Same field with a different right-hand side.
    pub fn with_load(mut self, f: Vector, description: &str) -> Self {
        self.f = f;
        self.description = description.to_owned();
        self
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn field(&self) -> &Vector {
        &self.u
    }

    pub fn load_expr(&self) -> &Vector {
        &self.f
    }

    /// The load rebuilt in the requested form.
    pub fn load_in_form(&self, form: LoadForm) -> Vector {
        load(&self.u, &self.params, form)
    }

    pub fn u(&self, x: &Vec3) -> Vec3 {
        self.u.eval(x)
    }

    pub fn curl_u(&self, x: &Vec3) -> Vec3 {
        self.curl.eval(x)
    }

    /// `G[r][s] = ∂_s (∇×u)_r`.
    pub fn grad_curl(&self, x: &Vec3) -> Matrix3<f64> {
        eval_jacobian(&self.grad_curl, x)
    }

    pub fn f(&self, x: &Vec3) -> Vec3 {
        self.f.eval(x)
    }

    pub fn divergence(&self, x: &Vec3) -> f64 {
        self.u.divergence().eval(x)
    }
}

impl VectorField for ExactSolution {
    fn value(&self, x: &Vec3) -> Vec3 {
        self.u(x)
    }

    fn curl(&self, x: &Vec3) -> Vec3 {
        self.curl_u(x)
    }
}
