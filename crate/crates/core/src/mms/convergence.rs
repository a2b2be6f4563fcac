use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use super::diagnostics::{
    consistency_residual, divergence_test, face_jump_report, superclose_distance, ConsistencyReport, DivergenceReport,
    FaceJumpReport,
};
use super::exact::ExactSolution;
use super::interpolate::{averaged_interpolant, localize};
use super::norms::{broken_norms, NormReport};
use crate::assembly::{assemble_blocks, assemble_load, FeSpace, LOAD_DEGREE};
use crate::mesh::{generate_box_mesh, mesh_stats, Mesh};
use crate::solver::{solve_cg, CgOptions, SolveReport};
use crate::Result;

/// `log(e₀/e₁) / log(h₀/h₁)`.
pub fn rate(e0: f64, e1: f64, h0: f64, h1: f64) -> f64 {
    (e0 / e1).ln() / (h0 / h1).ln()
}

/// Everything measured on one mesh.
#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub n: Option<usize>,
    pub h: f64,
    pub ndof_free: usize,
    pub errors: NormReport,
    pub solve: SolveReport,
    /// Wall time of the whole level: setup, assembly, solve and errors.
    pub seconds: f64,
    pub interpolation: Option<NormReport>,
    pub superclose: Option<f64>,
    pub consistency: Option<ConsistencyReport>,
    pub divergence: Option<DivergenceReport>,
    pub face_jumps: Option<FaceJumpReport>,
}

/// Which of the optional measurements to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diagnostics {
    pub interpolation: bool,
    pub divergence: bool,
    pub face_jumps: bool,
}

impl Diagnostics {
    pub const NONE: Self = Self {
        interpolation: false,
        divergence: false,
        face_jumps: false,
    };
    pub const ALL: Self = Self {
        interpolation: true,
        divergence: true,
        face_jumps: true,
    };
}

/// Settings shared by every level of a study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelOptions {
    pub cg: CgOptions,
    pub load_degree: usize,
    pub diagnostics: Diagnostics,
}

impl Default for LevelOptions {
    fn default() -> Self {
        Self {
            cg: CgOptions::default(),
            load_degree: LOAD_DEGREE,
            diagnostics: Diagnostics::NONE,
        }
    }
}

/// A solved level with its data kept for further inspection.
#[derive(Debug, Clone)]
pub struct SolvedLevel {
    pub space: FeSpace,
    /// Reduced solution over the free DOFs.
    pub solution: Vec<f64>,
    pub report: LevelReport,
}

pub fn solve_level(mesh: Mesh, n: Option<usize>, exact: &ExactSolution, opts: &LevelOptions) -> Result<SolvedLevel> {
    let start = Instant::now();
    let (cg, diagnostics) = (&opts.cg, opts.diagnostics);
    let exec = cg.exec;
    let space = FeSpace::new(mesh, exec)?;
    let stats = mesh_stats(space.mesh(), space.topology());
    let blocks = assemble_blocks(&space, exec)?;
    let matrix = blocks.combine(exact.params())?;
    let f = |x: &crate::Vec3| exact.f(x);
    let rhs = assemble_load(&space, &f, opts.load_degree, exec)?;
    let (solution, solve) = solve_cg(&matrix, &rhs, cg)?;
    let full = space.dofmap().expand(&solution);
    let local = localize(&space, &full);
    let errors = broken_norms(&space, &local, Some(exact), exec);

    let mut report = LevelReport {
        n,
        h: stats.h_max,
        ndof_free: space.dofmap().num_free(),
        errors,
        solve,
        seconds: 0.0,
        interpolation: None,
        superclose: None,
        consistency: None,
        divergence: None,
        face_jumps: None,
    };
    if diagnostics.interpolation {
        let ui = averaged_interpolant(&space, exact, exec)?;
        report.interpolation = Some(broken_norms(&space, &localize(&space, &ui), Some(exact), exec));
        report.superclose = Some(superclose_distance(&space, exact, exec)?);
        let probe = space.dofmap().expand(&space.dofmap().restrict(&ui));
        report.consistency = Some(consistency_residual(&space, exact, &localize(&space, &probe), exec)?);
    }
    if diagnostics.divergence {
        report.divergence = Some(divergence_test(&space, &blocks.mass, &solution));
    }
    if diagnostics.face_jumps {
        report.face_jumps = Some(face_jump_report(&space, &local));
    }
    report.seconds = start.elapsed().as_secs_f64();
    Ok(SolvedLevel {
        space,
        solution,
        report,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    #[serde(flatten)]
    pub level: LevelReport,
    /// Rate of the total error against the previous row.
    pub rate_total: Option<f64>,
    pub rate_interpolation: Option<f64>,
    pub rate_superclose: Option<f64>,
    pub rate_consistency: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Set when a level failed and the table stops early.
    pub failure: Option<String>,
}

impl ConvergenceTable {
    pub fn push(&mut self, level: LevelReport) {
        let prev = self.rows.last().map(|r| &r.level);
        let pair = |get: fn(&LevelReport) -> Option<f64>| {
            let p = prev?;
            Some(rate(get(p)?, get(&level)?, p.h, level.h))
        };
        let row = ConvergenceRow {
            rate_total: pair(|l| Some(l.errors.total)),
            rate_interpolation: pair(|l| l.interpolation.map(|i| i.total)),
            rate_superclose: pair(|l| l.superclose),
            rate_consistency: pair(|l| l.consistency.and_then(|c| c.ratio)),
            level,
        };
        self.rows.push(row);
    }

    pub const CSV_HEADER: &'static str =
        "n,h,ndof_free,err_L2,err_curl,err_gradcurl,err_total,rate_total,cg_iters,seconds";

    /// CSV with the columns of [`ConvergenceTable::CSV_HEADER`]; timings are
    /// left out when `with_timings` is false so that reruns compare equal.
    pub fn to_csv(&self, with_timings: bool) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let l = &r.level;
            let _ = writeln!(
                out,
                "{},{:.6e},{},{:.6e},{:.6e},{:.6e},{:.6e},{},{},{}",
                l.n.map(|n| n.to_string()).unwrap_or_default(),
                l.h,
                l.ndof_free,
                l.errors.l2,
                l.errors.curl,
                l.errors.grad_curl,
                l.errors.total,
                r.rate_total.map(|v| format!("{v:.4}")).unwrap_or_default(),
                l.solve.iterations,
                if with_timings {
                    format!("{:.3}", l.seconds)
                } else {
                    String::new()
                },
            );
        }
        out
    }
}

/// Solve on generated unit-cube meshes for each `n`; a failing level ends the
/// table with `failure` set.
pub fn convergence_study(levels: &[usize], exact: &ExactSolution, opts: &LevelOptions) -> ConvergenceTable {
    let mut table = ConvergenceTable::default();
    for &n in levels {
        let level = generate_box_mesh(n).and_then(|m| solve_level(m, Some(n), exact, opts));
        match level {
            Ok(l) => table.push(l.report),
            Err(e) => {
                table.failure = Some(format!("n = {n}: {e}"));
                break;
            }
        }
    }
    table
}
