use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nccurl::mesh::{build_topology, generate_box_mesh, mesh_stats, parse_msh, write_msh, Mesh, MeshStats};
use nccurl::mms::expr::Vector;
use nccurl::mms::{
    convergence_study, exact_norms, solve_level, ConvergenceTable, Diagnostics, ExactSolution, LevelOptions,
    LevelReport, NormReport,
};
use nccurl::solver::CgOptions;
use nccurl::verify::{check_element, CheckOptions, ElementCheckReport};
use serde::Serialize;
use serde_json::json;

use crate::config::{MeshSource, Mms, RunConfig};
use crate::error::CliError;

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    let wrap = |source| CliError::Write {
        path: path.display().to_string(),
        source,
    };
    fs::create_dir_all(dir).map_err(wrap)?;
    fs::write(&path, contents).map_err(wrap)
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(dir, name, &text)
}

pub fn load_mesh(source: &MeshSource) -> Result<(Mesh, Option<usize>), CliError> {
    match source {
        MeshSource::Generated(n) => Ok((generate_box_mesh(*n).map_err(CliError::Mesh)?, Some(*n))),
        MeshSource::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Mesh(nccurl::Error::InvalidArgument(format!("{}: {e}", path.display()))))?;
            let parsed = parse_msh(&text).map_err(CliError::Mesh)?;
            if parsed.reoriented > 0 {
                eprintln!("note: {} tets reoriented to positive volume", parsed.reoriented);
            }
            Ok((parsed.mesh, None))
        }
    }
}

fn exact_solution(config: &RunConfig) -> ExactSolution {
    let exact = match config.mms {
        Mms::Sincube => ExactSolution::sincube(config.params),
    };
    if config.zero_load {
        let desc = format!("{} with zero load", exact.description());
        exact.with_load(Vector::zero(), &desc)
    } else {
        exact
    }
}

fn level_options(config: &RunConfig, diagnostics: Diagnostics) -> LevelOptions {
    LevelOptions {
        cg: CgOptions {
            tol: config.tol,
            maxit: config.maxit,
            exec: config.exec,
        },
        diagnostics,
        ..LevelOptions::default()
    }
}

#[derive(Debug, Serialize)]
struct MeshReport {
    stats: MeshStats,
    volume: f64,
}

pub fn mesh(config: &RunConfig) -> Result<(), CliError> {
    let (mesh, _) = load_mesh(&config.mesh)?;
    let topology = build_topology(&mesh).map_err(CliError::Mesh)?;
    let report = MeshReport {
        stats: mesh_stats(&mesh, &topology),
        volume: (0..mesh.num_tets()).map(|t| mesh.tet_volume(t)).sum(),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(dir) = &config.out_dir {
        write_json(dir, "mesh.json", &report)?;
        write_file(dir, "mesh.msh", &write_msh(&mesh))?;
    }
    Ok(())
}

pub fn check(config: &RunConfig) -> Result<ElementCheckReport, CliError> {
    let opts = CheckOptions {
        trials: config.trials,
        seed: config.seed,
        inject_sign_flip: config.inject_sign_flip,
        ..CheckOptions::default()
    };
    let report = check_element(&opts)?;
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:<24} worst {:.3e} (tol {:.0e})  {}",
            c.name, c.worst, c.tolerance, c.detail
        );
    }
    let k = &report.vandermonde_condition;
    println!(
        "Vandermonde condition: min {:.3e}, median {:.3e}, max {:.3e}",
        k.min, k.median, k.max
    );
    if let Some(dir) = &config.out_dir {
        write_json(dir, "check_element.json", &report)?;
    }
    if report.passed() {
        Ok(report)
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(CliError::Failed(format!("failed checks: {}", names.join(", "))))
    }
}

#[derive(Debug, Serialize)]
struct SolveOutput<'a> {
    status: &'static str,
    mms: &'a str,
    params: nccurl::assembly::ModelParams,
    mesh: MeshStats,
    exact_norms: NormReport,
    #[serde(flatten)]
    level: LevelReport,
}

/// Writes `report.json` and `solution.json` (global DOF id to value).
pub fn solve(config: &RunConfig) -> Result<(), CliError> {
    let (mesh, n) = load_mesh(&config.mesh)?;
    let exact = exact_solution(config);
    let diagnostics = Diagnostics {
        interpolation: false,
        ..Diagnostics::ALL
    };
    let solved = match solve_level(mesh, n, &exact, &level_options(config, diagnostics)) {
        Ok(s) => s,
        Err(e @ (nccurl::Error::NotConverged { .. } | nccurl::Error::Breakdown(_))) => {
            let failure = json!({ "status": "failed", "mms": exact.description(), "error": e.to_string() });
            if let Some(dir) = &config.out_dir {
                write_json(dir, "report.json", &failure)?;
            }
            println!("{}", serde_json::to_string_pretty(&failure)?);
            return Err(CliError::Failed(e.to_string()));
        }
        Err(e) => return Err(e.into()),
    };
    let space = &solved.space;
    let output = SolveOutput {
        status: "ok",
        mms: exact.description(),
        params: config.params,
        mesh: mesh_stats(space.mesh(), space.topology()),
        exact_norms: exact_norms(space, &exact, config.exec),
        level: solved.report,
    };
    println!("{}", serde_json::to_string_pretty(&output)?);
    if let Some(dir) = &config.out_dir {
        let full = space.dofmap().expand(&solved.solution);
        let coefficients: BTreeMap<usize, f64> = full.into_iter().enumerate().collect();
        write_json(dir, "solution.json", &coefficients)?;
        write_json(dir, "report.json", &output)?;
    }
    Ok(())
}

pub fn convergence(config: &RunConfig) -> Result<ConvergenceTable, CliError> {
    if matches!(config.mesh, MeshSource::File(_)) {
        return Err(CliError::Config(
            "convergence runs on generated meshes; use --levels".into(),
        ));
    }
    let exact = exact_solution(config);
    let table = convergence_study(&config.levels, &exact, &level_options(config, Diagnostics::ALL));
    let csv = table.to_csv(config.timings);
    print!("{csv}");
    if let Some(dir) = &config.out_dir {
        write_file(dir, "convergence.csv", &csv)?;
        write_json(dir, "convergence.json", &table)?;
    }
    match &table.failure {
        Some(f) => Err(CliError::Failed(format!("convergence study stopped early at {f}"))),
        None => Ok(table),
    }
}
