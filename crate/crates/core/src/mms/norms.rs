use nalgebra::Matrix3;
use serde::Serialize;

use super::exact::ExactSolution;
use super::interpolate::{local_raw, LocalDofs};
use crate::assembly::FeSpace;
use crate::element::{LocalFunction, Vec20};
use crate::exec::Execution;
use crate::quadrature::rule_tet;

/// Quadrature degree for errors against smooth fields.
pub const ERROR_DEGREE: usize = 8;

/// Broken errors; `total² = l2² + curl² + grad_curl²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct NormReport {
    pub l2: f64,
    pub curl: f64,
    pub grad_curl: f64,
    pub total: f64,
}

impl NormReport {
    fn from_squares(sq: [f64; 3]) -> Self {
        let [a, b, c] = sq;
        Self {
            l2: a.sqrt(),
            curl: b.sqrt(),
            grad_curl: c.sqrt(),
            total: (a + b + c).sqrt(),
        }
    }
}

fn sum_squares(parts: Vec<[f64; 3]>) -> [f64; 3] {
    parts
        .into_iter()
        .fold([0.0; 3], |acc, p| [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]])
}

/// `‖u_h − u‖` in the broken norm; pass `None` to measure `u_h` itself.
pub fn broken_norms(
    space: &FeSpace,
    local: &[LocalDofs],
    exact: Option<&ExactSolution>,
    exec: Execution,
) -> NormReport {
    let rule = rule_tet(ERROR_DEGREE).expect("tet rule");
    let parts = exec.map(space.num_tets(), |t| {
        let geom = space.basis(t).geometry();
        let uh = LocalFunction {
            geometry: geom,
            raw: local_raw(space, t, &local[t]),
        };
        let gh = uh.grad_curl();
        let mut acc = [0.0; 3];
        for (bary, w) in rule.iter() {
            let x = geom.point(bary);
            let (mut v, mut c) = uh.eval(bary);
            let mut g = gh;
            if let Some(e) = exact {
                v -= e.u(&x);
                c -= e.curl_u(&x);
                g -= e.grad_curl(&x);
            }
            let w = w * geom.volume;
            acc[0] += w * v.norm_squared();
            acc[1] += w * c.norm_squared();
            acc[2] += w * g.norm_squared();
        }
        acc
    });
    NormReport::from_squares(sum_squares(parts))
}

/// Broken norms of an analytic field alone.
pub fn exact_norms(space: &FeSpace, exact: &ExactSolution, exec: Execution) -> NormReport {
    let rule = rule_tet(ERROR_DEGREE).expect("tet rule");
    let parts = exec.map(space.num_tets(), |t| {
        let geom = space.basis(t).geometry();
        let mut acc = [0.0; 3];
        for (bary, w) in rule.iter() {
            let x = geom.point(bary);
            let w = w * geom.volume;
            acc[0] += w * exact.u(&x).norm_squared();
            acc[1] += w * exact.curl_u(&x).norm_squared();
            acc[2] += w * exact.grad_curl(&x).norm_squared();
        }
        acc
    });
    NormReport::from_squares(sum_squares(parts))
}

/// Broken norms of the difference of two piecewise fields given by element DOFs.
pub fn discrete_difference(space: &FeSpace, a: &[LocalDofs], b: &[LocalDofs], exec: Execution) -> NormReport {
    let rule = rule_tet(4).expect("tet rule");
    let parts = exec.map(space.num_tets(), |t| {
        let geom = space.basis(t).geometry();
        let raw: Vec20 = local_raw(space, t, &a[t]) - local_raw(space, t, &b[t]);
        let d = LocalFunction { geometry: geom, raw };
        let mut acc = [0.0, 0.0, geom.volume * d.grad_curl().norm_squared()];
        for (bary, w) in rule.iter() {
            let (v, c) = d.eval(bary);
            acc[0] += w * geom.volume * v.norm_squared();
            acc[1] += w * geom.volume * c.norm_squared();
        }
        acc
    });
    NormReport::from_squares(sum_squares(parts))
}

/// `(Σ_K ‖∇×v‖²_{1,K})^{1/2}`: the broken H¹ norm of the curl.
pub fn curl_h1_norm(space: &FeSpace, local: &[LocalDofs], exec: Execution) -> f64 {
    let zero = vec![[0.0; 20]; local.len()];
    let r = discrete_difference(space, local, &zero, exec);
    (r.curl * r.curl + r.grad_curl * r.grad_curl).sqrt()
}

pub(crate) fn frobenius(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    a.component_mul(b).sum()
}
