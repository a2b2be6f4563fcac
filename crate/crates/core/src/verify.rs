//! Randomized checks of the element used by the CLI and the test suites.

use nalgebra::{DMatrix, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::element::{
    dof_vandermonde, dual_basis, explicit_basis, face_curl_integral, face_slot, pairing_matrix, tet_geometry, BasisSet,
    FunctionalSet, Mat20, TetGeometry, NUM_DOFS,
};
use crate::geometry::{signed_volume, tet_diameter, tet_inradius, Vec3};
use crate::mesh::LOCAL_FACES;
use crate::quadrature::rule_triangle;
use crate::{Error, Result};

/// A random positively oriented tet in `[-1, 1]³` whose ratio of longest edge
/// to inradius is at most `max_regularity`.
pub fn random_tet(rng: &mut impl Rng, max_regularity: f64) -> [Vec3; 4] {
    loop {
        let mut v: [Vec3; 4] = std::array::from_fn(|_| {
            Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
        });
        if signed_volume(&v[0], &v[1], &v[2], &v[3]) < 0.0 {
            v.swap(2, 3);
        }
        let r = tet_inradius(&v);
        if r > 0.0 && tet_diameter(&v) / r <= max_regularity {
            return v;
        }
    }
}

pub const DUALITY_TOL: f64 = 1e-9;
pub const EXPLICIT_TOL: f64 = 1e-9;
pub const STOKES_TOL: f64 = 1e-12;
/// Required ratio between the 11th and 12th singular values.
pub const RANK_GAP: f64 = 1e6;
pub const CURL_GRADIENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub trials: usize,
    pub seed: u64,
    pub max_regularity: f64,
    /// Negative control: flip the sign of one functional when testing duality.
    pub inject_sign_flip: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 42,
            max_regularity: 20.0,
            inject_sign_flip: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, worst: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            passed: worst <= tolerance,
            worst,
            tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionStats {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementCheckReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub vandermonde_condition: ConditionStats,
}

impl ElementCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn geometries(opts: &CheckOptions) -> Result<Vec<TetGeometry>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..opts.trials)
        .map(|_| tet_geometry(random_tet(&mut rng, opts.max_regularity)))
        .collect()
}

fn max_off_identity(m: &Mat20) -> f64 {
    (m - Mat20::identity()).abs().max()
}

/// Vandermonde invertibility and duality of the inverted basis; also returns
/// the condition numbers.
pub fn unisolvence_check(geoms: &[TetGeometry], inject_sign_flip: bool) -> Result<(CheckResult, Vec<f64>)> {
    let mut worst = 0.0_f64;
    let mut conditions = Vec::with_capacity(geoms.len());
    let mut singular = 0;
    for g in geoms {
        let f = FunctionalSet::canonical(g);
        match dof_vandermonde(g, &f) {
            Ok(v) => conditions.push(v.condition),
            Err(Error::SingularVandermonde { .. }) => {
                singular += 1;
                continue;
            }
            Err(e) => return Err(e),
        }
        let basis = dual_basis(g, &f)?;
        let mut p = pairing_matrix(&f, |b| basis.eval(b));
        if inject_sign_flip {
            p.row_mut(0).neg_mut();
        }
        worst = worst.max(max_off_identity(&p));
    }
    if singular > 0 {
        worst = f64::INFINITY;
    }
    let detail = format!("{} tets, {singular} singular Vandermonde matrices", geoms.len());
    Ok((CheckResult::new("unisolvence", worst, DUALITY_TOL, detail), conditions))
}

/// Relative difference between the closed-form and inverted dual bases.
pub fn explicit_agreement(geoms: &[TetGeometry]) -> Result<CheckResult> {
    let mut worst = 0.0_f64;
    for g in geoms {
        let inverted = dual_basis(g, &FunctionalSet::canonical(g))?;
        let explicit = explicit_basis(g);
        let scale = inverted.coefficients().abs().max();
        worst = worst.max((inverted.coefficients() - explicit.coefficients()).abs().max() / scale);
    }
    Ok(CheckResult::new(
        "explicit-basis",
        worst,
        EXPLICIT_TOL,
        format!("{} tets", geoms.len()),
    ))
}

/// The two face integrals of the closed-form face functions on the reference
/// tet, expected to be −1/3 and 1/6.
pub fn reference_face_integrals() -> Result<[f64; 2]> {
    let g = reference_tet()?;
    // face l = 3 is (0, 1, 2); i = 0, j = 1, k = 2
    Ok([
        face_curl_integral(&g, 3, (3, 0, 1), 2),
        face_curl_integral(&g, 3, (3, 1, 2), 2),
    ])
}

pub fn reference_tet() -> Result<TetGeometry> {
    tet_geometry([Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()])
}

fn face_point(l: usize, b: &[f64; 3]) -> [f64; 4] {
    let mut bary = [0.0; 4];
    for (&v, &x) in LOCAL_FACES[l].iter().zip(b) {
        bary[v] = x;
    }
    bary
}

/// `|∫_f (∇×u)·n dA|` over every face, for the 8 face-basis members, relative
/// to `|f| max_f |∇×u|`.
pub fn stokes_check(geoms: &[TetGeometry]) -> Result<CheckResult> {
    let rule = rule_triangle(2)?;
    let mut worst = 0.0_f64;
    for g in geoms {
        let basis = dual_basis(g, &FunctionalSet::canonical(g))?;
        for l in 0..4 {
            for t in 0..2 {
                let b = face_slot(l, t);
                for face in 0..4 {
                    let mut flux = 0.0;
                    let mut peak = 0.0_f64;
                    for (p, w) in rule.iter() {
                        let c = basis.eval(&face_point(face, p)).curl[b];
                        flux += w * c.dot(&g.outward_normals[face]);
                        peak = peak.max(c.norm());
                    }
                    let area = g.face_areas[face];
                    if peak > 0.0 {
                        worst = worst.max((flux * area).abs() / (area * peak));
                    }
                }
            }
        }
    }
    Ok(CheckResult::new(
        "stokes",
        worst,
        STOKES_TOL,
        format!("{} tets x 8 members x 4 faces", geoms.len()),
    ))
}

/// Singular values of the matrix of curls of the 20 basis members sampled at
/// the four vertices.
pub fn curl_singular_values(basis: &BasisSet) -> Vec<f64> {
    let mut m = DMatrix::zeros(12, NUM_DOFS);
    for v in 0..4 {
        let mut bary = [0.0; 4];
        bary[v] = 1.0;
        let e = basis.eval(&bary);
        for b in 0..NUM_DOFS {
            for r in 0..3 {
                m[(3 * v + r, b)] = e.curl[b][r];
            }
        }
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank 11 of the curl map: reports the worst `σ₁₂/σ₁₁`.
pub fn kernel_rank_check(geoms: &[TetGeometry]) -> Result<CheckResult> {
    let mut worst = 0.0_f64;
    for g in geoms {
        let basis = dual_basis(g, &FunctionalSet::canonical(g))?;
        let s = curl_singular_values(&basis);
        worst = worst.max(s[11] / s[10]);
    }
    Ok(CheckResult::new(
        "curl-rank-11",
        worst,
        1.0 / RANK_GAP,
        format!("{} tets, ratio sigma12/sigma11", geoms.len()),
    ))
}

/// The stored constant curl gradient reproduces curl differences exactly:
/// `∇×b(x) − ∇×b(y) = G (x − y)`.
pub fn curl_gradient_check(geoms: &[TetGeometry], seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    let mut bary = || {
        let w: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
        let s: f64 = w.iter().sum();
        w.map(|x| x / s)
    };
    for g in geoms {
        let basis = dual_basis(g, &FunctionalSet::canonical(g))?;
        let (bx, by) = (bary(), bary());
        let (ex, ey) = (basis.eval(&bx), basis.eval(&by));
        let d = g.point(&bx) - g.point(&by);
        for b in 0..NUM_DOFS {
            let gc: &Matrix3<f64> = &basis.grad_curl()[b];
            let diff = ex.curl[b] - ey.curl[b];
            let scale = gc.norm() * d.norm() + diff.norm();
            if scale > 0.0 {
                worst = worst.max((diff - gc * d).norm() / scale);
            }
        }
    }
    Ok(CheckResult::new(
        "constant-curl-gradient",
        worst,
        CURL_GRADIENT_TOL,
        format!("{} tets x 20 members", geoms.len()),
    ))
}

/// All element checks on `opts.trials` random tets.
pub fn check_element(opts: &CheckOptions) -> Result<ElementCheckReport> {
    if opts.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(opts.max_regularity >= 24f64.sqrt()) {
        return Err(Error::InvalidArgument(format!(
            "max regularity {} is below that of the regular tet",
            opts.max_regularity
        )));
    }
    let geoms = geometries(opts)?;
    let (unisolvence, mut conditions) = unisolvence_check(&geoms, opts.inject_sign_flip)?;
    let sub = &geoms[..geoms.len().min(100)];
    let [a, b] = reference_face_integrals()?;
    let face_worst = (a + 1.0 / 3.0).abs().max((b - 1.0 / 6.0).abs());
    let checks = vec![
        unisolvence,
        explicit_agreement(sub)?,
        CheckResult::new(
            "reference-face-integrals",
            face_worst,
            1e-14,
            format!("{a:.16} (expect -1/3), {b:.16} (expect 1/6)"),
        ),
        stokes_check(&geoms)?,
        kernel_rank_check(&geoms)?,
        curl_gradient_check(&geoms, opts.seed)?,
    ];
    conditions.sort_by(f64::total_cmp);
    let vandermonde_condition = ConditionStats {
        min: conditions.first().copied().unwrap_or(f64::NAN),
        median: conditions.get(conditions.len() / 2).copied().unwrap_or(f64::NAN),
        max: conditions.last().copied().unwrap_or(f64::NAN),
    };
    Ok(ElementCheckReport {
        trials: opts.trials,
        seed: opts.seed,
        checks,
        vandermonde_condition,
    })
}
