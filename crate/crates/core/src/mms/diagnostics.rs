use std::collections::BTreeMap;

use serde::Serialize;

use super::exact::ExactSolution;
use super::interpolate::{interpolate, local_raw, Interpolant, LocalDofs};
use super::norms::{curl_h1_norm, discrete_difference, frobenius, ERROR_DEGREE};
use crate::assembly::FeSpace;
use crate::element::{FunctionalSet, LocalFunction, TetGeometry, VectorField};
use crate::exec::Execution;
use crate::geometry::Vec3;
use crate::mesh::{LOCAL_EDGES, LOCAL_FACES};
use crate::quadrature::rule_tet;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaceJumpReport {
    /// Largest componentwise jump of the face mean of the curl.
    pub max_jump: f64,
    /// Largest componentwise face mean of the curl over all faces.
    pub scale: f64,
    pub relative: f64,
    pub interior_faces: usize,
}

/// Face means of `∇×v_h` compared across every interior face.
pub fn face_jump_report(space: &FeSpace, local: &[LocalDofs]) -> FaceJumpReport {
    let topo = space.topology();
    let mean = |t: usize, l: usize| {
        let f = LocalFunction {
            geometry: space.basis(t).geometry(),
            raw: local_raw(space, t, &local[t]),
        };
        let mut bary = [0.0; 4];
        for v in LOCAL_FACES[l] {
            bary[v] = 1.0 / 3.0;
        }
        f.eval(&bary).1
    };
    let mut scale = 0.0_f64;
    for t in 0..space.num_tets() {
        for l in 0..4 {
            scale = scale.max(mean(t, l).amax());
        }
    }
    let mut max_jump = 0.0_f64;
    let mut interior_faces = 0;
    for (_, [(t0, l0), (t1, l1)]) in topo.interior_faces() {
        max_jump = max_jump.max((mean(t0, l0) - mean(t1, l1)).amax());
        interior_faces += 1;
    }
    FaceJumpReport {
        max_jump,
        scale,
        relative: if scale > 0.0 { max_jump / scale } else { 0.0 },
        interior_faces,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyReport {
    /// `|a_h(u, v_h) − (f, v_h)|`.
    pub residual: f64,
    /// `(Σ_K ‖∇×v_h‖²_{1,K})^{1/2}`.
    pub probe_norm: f64,
    /// `residual / probe_norm`; `None` for a curl-free probe.
    pub ratio: Option<f64>,
}

/// Consistency error of the exact solution tested against a discrete probe.
pub fn consistency_residual(
    space: &FeSpace,
    exact: &ExactSolution,
    probe: &[LocalDofs],
    exec: Execution,
) -> Result<ConsistencyReport> {
    consistency_residual_at(space, exact, probe, ERROR_DEGREE, exec)
}

/// [`consistency_residual`] with a chosen quadrature degree.
pub fn consistency_residual_at(
    space: &FeSpace,
    exact: &ExactSolution,
    probe: &[LocalDofs],
    degree: usize,
    exec: Execution,
) -> Result<ConsistencyReport> {
    if probe.iter().all(|d| d.iter().all(|&v| v == 0.0)) {
        return Err(Error::InvalidArgument("zero consistency probe".into()));
    }
    let probe_norm = curl_h1_norm(space, probe, exec);
    let p = exact.params();
    let rule = rule_tet(degree)?;
    let parts = exec.map(space.num_tets(), |t| {
        let geom = space.basis(t).geometry();
        let v = LocalFunction {
            geometry: geom,
            raw: local_raw(space, t, &probe[t]),
        };
        let gv = v.grad_curl();
        rule.iter()
            .map(|(bary, w)| {
                let x = geom.point(bary);
                let (vv, cv) = v.eval(bary);
                let a = p.alpha * frobenius(&exact.grad_curl(&x), &gv)
                    + p.beta * exact.curl_u(&x).dot(&cv)
                    + p.gamma * exact.u(&x).dot(&vv)
                    - exact.f(&x).dot(&vv);
                w * geom.volume * a
            })
            .sum::<f64>()
    });
    let residual = parts.iter().sum::<f64>().abs();
    Ok(ConsistencyReport {
        residual,
        probe_norm,
        ratio: (probe_norm > 0.0).then(|| residual / probe_norm),
    })
}

/// `‖r_h u − u_I‖₀`.
pub fn superclose_distance(space: &FeSpace, exact: &ExactSolution, exec: Execution) -> Result<f64> {
    let rh = interpolate(space, exact, Interpolant::Nedelec, exec)?;
    let ui = interpolate(space, exact, Interpolant::Averaged, exec)?;
    Ok(discrete_difference(space, &rh, &ui, exec).l2)
}

/// Gradient of a piecewise quadratic nodal function restricted to one element.
struct P2Gradient<'a> {
    geom: &'a TetGeometry,
    node: P2Node,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum P2Node {
    /// `λi(2λi − 1)` at local vertex `i`.
    Vertex(usize),
    /// `4 λi λj` on local edge `(i, j)`.
    Edge(usize, usize),
}

impl VectorField for P2Gradient<'_> {
    fn value(&self, x: &Vec3) -> Vec3 {
        let l = self.geom.barycentric(x);
        let g = &self.geom.grad_lambda;
        match self.node {
            P2Node::Vertex(i) => g[i] * (4.0 * l[i] - 1.0),
            P2Node::Edge(i, j) => (g[j] * l[i] + g[i] * l[j]) * 4.0,
        }
    }

    fn curl(&self, _: &Vec3) -> Vec3 {
        Vec3::zeros()
    }
}

/// Global coefficient vectors of `∇p_h` for every interior node of the
/// continuous piecewise quadratic space with zero boundary trace, as sparse
/// maps over free DOF indices.
pub fn p2_gradient_probes(space: &FeSpace) -> Vec<BTreeMap<usize, f64>> {
    let topo = space.topology();
    let mesh = space.mesh();
    let map = space.dofmap();
    let mut boundary_vertex = vec![false; mesh.num_vertices()];
    for (f, verts) in topo.faces.iter().enumerate() {
        if topo.boundary_faces[f] {
            for &v in verts {
                boundary_vertex[v] = true;
            }
        }
    }
    // key: (0, vertex) or (1, edge)
    let mut probes: BTreeMap<(u8, usize), BTreeMap<usize, f64>> = BTreeMap::new();
    for t in 0..space.num_tets() {
        let geom = space.basis(t).geometry();
        let tet = mesh.tets()[t];
        let functionals = FunctionalSet::global(geom, &tet);
        let ids = map.element(t).ids;
        let mut nodes = Vec::new();
        for (i, &v) in tet.iter().enumerate() {
            if !boundary_vertex[v] {
                nodes.push(((0, v), P2Node::Vertex(i)));
            }
        }
        for (e, &[i, j]) in LOCAL_EDGES.iter().enumerate() {
            let ge = topo.tet_edges[t][e];
            if !topo.boundary_edges[ge] {
                nodes.push(((1, ge), P2Node::Edge(i, j)));
            }
        }
        for (key, node) in nodes {
            let field = P2Gradient { geom, node };
            let entry = probes.entry(key).or_default();
            for (slot, func) in functionals.functionals.iter().take(12).enumerate() {
                let v = func.apply(geom, &field);
                if v.abs() > 1e-12 {
                    let idx = map
                        .free_index(ids[slot])
                        .expect("gradient probe touches a constrained DOF");
                    entry.insert(idx, v);
                }
            }
        }
    }
    probes.into_values().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceReport {
    /// `max |(u_h, ∇p_h)| / (‖u_h‖₀ ‖∇p_h‖₀)`.
    pub max_normalized: f64,
    pub max_abs: f64,
    pub probes: usize,
}

/// Discrete divergence of `u_h` (reduced vector) against all quadratic
/// gradient probes, using the assembled mass matrix.
pub fn divergence_test(space: &FeSpace, mass: &CsrMatrix, solution: &[f64]) -> DivergenceReport {
    let mu = mass.mul_vec(solution);
    let u_norm = solution
        .iter()
        .zip(&mu)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        .max(0.0)
        .sqrt();
    let probes = p2_gradient_probes(space);
    let mut max_normalized = 0.0_f64;
    let mut max_abs = 0.0_f64;
    for g in &probes {
        let pairing: f64 = g.iter().map(|(&i, &v)| v * mu[i]).sum();
        let gmg: f64 = g
            .iter()
            .map(|(&i, &v)| {
                let (cols, vals) = mass.row(i);
                let row: f64 = cols
                    .iter()
                    .zip(vals)
                    .filter_map(|(c, m)| g.get(c).map(|gc| m * gc))
                    .sum();
                v * row
            })
            .sum();
        max_abs = max_abs.max(pairing.abs());
        let denom = u_norm * gmg.max(0.0).sqrt();
        if denom > 0.0 {
            max_normalized = max_normalized.max(pairing.abs() / denom);
        }
    }
    DivergenceReport {
        max_normalized,
        max_abs,
        probes: probes.len(),
    }
}
