use nccurl::assembly::{FeSpace, ModelParams};
use nccurl::exec::Execution;
use nccurl::mesh::{generate_box_mesh, Mesh};
use nccurl::mms::expr::{Scalar, Vector};
use nccurl::mms::*;
use nccurl::Vec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXEC: Execution = Execution::Parallel;

fn space(n: usize) -> FeSpace {
    FeSpace::new(generate_box_mesh(n).unwrap(), EXEC).unwrap()
}

fn single_tet() -> FeSpace {
    let v = vec![
        Vec3::zeros(),
        Vec3::new(1.0, 0.2, 0.0),
        Vec3::new(0.1, 0.9, 0.2),
        Vec3::new(0.3, 0.2, 1.1),
    ];
    FeSpace::new(Mesh::new(v, vec![[0, 1, 2, 3]]).unwrap(), EXEC).unwrap()
}

/// A cubic field outside every local space, so interpolation is first order.
fn cubic() -> ExactSolution {
    let m = Scalar::monomial;
    let u = Vector([
        m(1.0, [0, 3, 0]).add(&m(0.5, [1, 1, 1])),
        m(1.0, [0, 0, 3]).add(&m(-1.0, [2, 0, 1])),
        m(1.0, [3, 0, 0]).add(&m(2.0, [0, 2, 1])),
    ]);
    ExactSolution::from_field("cubic", u, ModelParams::default(), LoadForm::Curl)
}

fn random_point(rng: &mut impl Rng) -> Vec3 {
    Vec3::new(rng.random(), rng.random(), rng.random())
}

#[test]
fn sincube_vanishes_on_the_boundary() {
    let e = ExactSolution::sincube(ModelParams::default());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..1000 {
        let mut x = random_point(&mut rng);
        x[i % 3] = if (i / 3) % 2 == 0 { 0.0 } else { 1.0 };
        let mut n = Vec3::zeros();
        n[i % 3] = 1.0;
        assert!(e.u(&x).cross(&n).norm() < 1e-12);
        assert!(e.curl_u(&x).norm() < 1e-12);
    }
}

#[test]
fn sincube_is_divergence_free() {
    let e = ExactSolution::sincube(ModelParams::default());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        assert!(e.divergence(&random_point(&mut rng)).abs() < 1e-13);
    }
}

#[test]
fn load_forms_agree_at_random_points() {
    let e = ExactSolution::sincube(ModelParams::new(0.7, 1.9, 3.0).unwrap());
    let curl = e.load_in_form(LoadForm::Curl);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let x = random_point(&mut rng);
        let (a, b) = (e.f(&x), curl.eval(&x));
        assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    }
}

#[test]
fn interpolants_reproduce_local_space_fields() {
    let s = space(2);
    for e in [
        ExactSolution::rotation(ModelParams::default()),
        ExactSolution::quadratic(ModelParams::default()),
    ] {
        for kind in [Interpolant::Nedelec, Interpolant::Averaged] {
            let local = interpolate(&s, &e, kind, EXEC).unwrap();
            let r = broken_norms(&s, &local, Some(&e), EXEC);
            assert!(
                r.l2 < 1e-11 && r.curl < 1e-11 && r.grad_curl < 1e-11,
                "{} {kind:?} {r:?}",
                e.description()
            );
        }
    }
}

#[test]
fn zero_coefficients_measure_the_exact_norms() {
    let s = space(2);
    let e = ExactSolution::sincube(ModelParams::default());
    let zero = vec![[0.0; 20]; s.num_tets()];
    let a = broken_norms(&s, &zero, Some(&e), EXEC);
    let b = exact_norms(&s, &e, EXEC);
    assert!((a.total - b.total).abs() < 1e-12 * b.total);
    assert!((a.total.powi(2) - a.l2.powi(2) - a.curl.powi(2) - a.grad_curl.powi(2)).abs() < 1e-10 * a.total.powi(2));
}

#[test]
fn averaged_interpolant_means_the_one_sided_values() {
    let s = space(2);
    let e = ExactSolution::sincube(ModelParams::default());
    let rk = nedelec_local_dofs(&s, &e, EXEC).unwrap();
    let ui = averaged_interpolant(&s, &e, EXEC).unwrap();
    let map = s.dofmap();
    let topo = s.topology();
    let scale = ui.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for (t, dofs) in rk.iter().enumerate() {
        for slot in 0..12 {
            assert!((dofs[slot] - ui[map.element(t).ids[slot]]).abs() < 1e-12 * scale);
        }
    }
    for f in 0..topo.num_faces() {
        let sides = &topo.face_tets[f];
        for k in 0..2 {
            let g = map.face_dofs(f)[k];
            let vals: Vec<f64> = sides.iter().map(|&(t, l)| rk[t][12 + 2 * l + k]).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            assert_eq!(vals.len(), if topo.boundary_faces[f] { 1 } else { 2 });
            assert!((ui[g] - mean).abs() < 1e-12 * scale);
        }
    }
}

#[test]
fn superclose_distance_vanishes_for_constant_curl() {
    let s = space(2);
    let d = superclose_distance(&s, &ExactSolution::rotation(ModelParams::default()), EXEC).unwrap();
    assert!(d < 1e-12, "{d}");
}

#[test]
fn single_tet_interpolants_coincide() {
    let s = single_tet();
    let e = cubic();
    let a = interpolate(&s, &e, Interpolant::Nedelec, EXEC).unwrap();
    let b = interpolate(&s, &e, Interpolant::Averaged, EXEC).unwrap();
    for (x, y) in a[0].iter().zip(&b[0]) {
        assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0));
    }
    assert_eq!(superclose_distance(&s, &e, EXEC).unwrap(), 0.0);
}

#[test]
fn interpolation_grad_curl_error_is_first_order() {
    let e = cubic();
    let err = |n| {
        let s = space(n);
        let local = interpolate(&s, &e, Interpolant::Averaged, EXEC).unwrap();
        broken_norms(&s, &local, Some(&e), EXEC).grad_curl
    };
    let ratio = err(2) / err(4);
    assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
}

#[test]
fn random_members_have_continuous_mean_curl() {
    let s = space(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let full: Vec<f64> = (0..s.dofmap().num_dofs())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let mut local = localize(&s, &full);
    let r = face_jump_report(&s, &local);
    assert!(r.interior_faces > 0);
    assert!(r.max_jump < 1e-10 * r.scale, "{r:?}");

    // corrupt one face DOF on one side only
    let (_, [(t, l), _]) = s.topology().interior_faces().next().unwrap();
    local[t][12 + 2 * l] += 0.5;
    let bad = face_jump_report(&s, &local);
    assert!(bad.max_jump > 1e-3 * bad.scale, "{bad:?}");
}

#[test]
fn averaged_interpolant_has_continuous_mean_curl() {
    let s = space(2);
    let e = ExactSolution::sincube(ModelParams::default());
    let local = interpolate(&s, &e, Interpolant::Averaged, EXEC).unwrap();
    let r = face_jump_report(&s, &local);
    assert!(r.max_jump < 1e-10 * r.scale, "{r:?}");
}

#[test]
fn gradient_probes_are_consistent() {
    let s = space(2);
    let e = ExactSolution::sincube(ModelParams::default());
    let map = s.dofmap();
    let probes = p2_gradient_probes(&s);
    assert!(!probes.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f_scale = (0..200)
        .map(|_| e.f(&random_point(&mut rng)).norm())
        .fold(0.0, f64::max);
    for (k, probe) in probes.iter().enumerate() {
        let mut reduced = vec![0.0; map.num_free()];
        for (&i, &v) in probe {
            reduced[i] = v;
        }
        let local = localize(&s, &map.expand(&reduced));
        let zero = vec![[0.0; 20]; s.num_tets()];
        let grad_norm = discrete_difference(&s, &local, &zero, EXEC).l2;
        let coarse = consistency_residual(&s, &e, &local, EXEC).unwrap();
        assert!(coarse.probe_norm < 1e-10 * grad_norm);
        assert!(coarse.residual < 1e-4 * f_scale * grad_norm, "{coarse:?}");
        if k % 8 == 0 {
            let fine = consistency_residual_at(&s, &e, &local, 20, EXEC).unwrap();
            assert!(fine.residual < 1e-10 * f_scale * grad_norm, "{fine:?}");
        }
    }
}

#[test]
fn consistency_rejects_zero_probe() {
    let s = space(1);
    let zero = vec![[0.0; 20]; s.num_tets()];
    assert!(consistency_residual(&s, &ExactSolution::sincube(ModelParams::default()), &zero, EXEC).is_err());
}

#[test]
fn divergence_of_zero_is_zero() {
    let s = space(2);
    let mass = nccurl::assembly::assemble_blocks(&s, EXEC).unwrap().mass;
    let r = divergence_test(&s, &mass, &vec![0.0; s.dofmap().num_free()]);
    assert_eq!(r.max_abs, 0.0);
    assert_eq!(r.max_normalized, 0.0);
}

#[test]
fn divergence_negative_control() {
    let params = ModelParams::default();
    let e = ExactSolution::sincube(params);
    let opts = LevelOptions {
        diagnostics: Diagnostics {
            divergence: true,
            ..Diagnostics::NONE
        },
        ..LevelOptions::default()
    };
    let good = solve_level(generate_box_mesh(2).unwrap(), Some(2), &e, &opts).unwrap();
    let good = good.report.divergence.unwrap().max_normalized;
    let f = Vector([Scalar::monomial(1.0, [1, 0, 0]), Scalar::zero(), Scalar::zero()]);
    let bad = e.with_load(f, "div f = 1");
    let bad = solve_level(generate_box_mesh(2).unwrap(), Some(2), &bad, &opts).unwrap();
    let bad = bad.report.divergence.unwrap().max_normalized;
    assert!(good < 100.0 * opts.cg.tol, "{good}");
    assert!(bad > 1e-2, "{bad}");
}

#[test]
fn rate_of_halving() {
    assert!((rate(4.0, 1.0, 0.5, 0.25) - 2.0).abs() < 1e-15);
}

#[test]
fn table_csv_has_fixed_header_and_rates() {
    let e = cubic();
    let table = convergence_study(&[1, 2], &e, &LevelOptions::default());
    assert!(table.failure.is_none());
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows[0].rate_total.is_none());
    assert!(table.rows[1].rate_total.unwrap().is_finite());
    let csv = table.to_csv(false);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), ConvergenceTable::CSV_HEADER);
    assert_eq!(lines.count(), 2);
    assert_eq!(
        csv,
        convergence_study(&[1, 2], &e, &LevelOptions::default()).to_csv(false)
    );
}
