use nccurl::dofmap::*;
use nccurl::element::{explicit_basis, tet_geometry, FunctionalSet, VectorField};
use nccurl::geometry::Vec3;
use nccurl::mesh::{build_topology, generate_box_mesh, Mesh};

fn box_map(n: usize) -> (Mesh, nccurl::mesh::Topology, DofMap) {
    let mesh = generate_box_mesh(n).unwrap();
    let topo = build_topology(&mesh).unwrap();
    let map = build_dofmap(&mesh, &topo);
    (mesh, topo, map)
}

#[test]
fn unit_box_has_74_dofs_14_free() {
    let (_, topo, map) = box_map(1);
    assert_eq!(map.num_dofs(), 2 * 19 + 2 * 18);
    assert_eq!(map.num_free(), 2 + 2 * 6);
    let mask = boundary_mask(&topo, &map);
    assert_eq!(mask.num_free(), 14);
    assert_eq!(mask.constrained.len() - mask.num_free(), 60);
}

#[test]
fn free_count_matches_interior_entities() {
    for n in 2..=3 {
        let (_, topo, map) = box_map(n);
        let interior_edges = topo.boundary_edges.iter().filter(|b| !**b).count();
        let interior_faces = topo.boundary_faces.iter().filter(|b| !**b).count();
        assert_eq!(map.num_free(), 2 * interior_edges + 2 * interior_faces);
        assert_eq!(map.num_dofs(), 2 * topo.num_edges() + 2 * topo.num_faces());
    }
}

#[test]
fn single_tet_is_fully_constrained() {
    let mesh = Mesh::new(vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()], vec![[0, 1, 2, 3]]).unwrap();
    let topo = build_topology(&mesh).unwrap();
    let map = build_dofmap(&mesh, &topo);
    assert_eq!(map.num_dofs(), 20);
    assert_eq!(map.num_free(), 0);
    assert_eq!(boundary_mask(&topo, &map).constrained_face_dofs, 8);
}

#[test]
fn element_ids_are_distinct_and_ordered() {
    let (_, topo, map) = box_map(1);
    for t in 0..6 {
        let e = element_dofs(&map, t);
        let mut ids = e.ids.to_vec();
        assert!(ids[..12].iter().all(|&i| i < 2 * topo.num_edges()));
        assert!(ids[12..].iter().all(|&i| i >= 2 * topo.num_edges()));
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 20);
    }
}

#[test]
fn shared_entities_share_ids() {
    let (_, topo, map) = box_map(2);
    for (f, [(t0, l0), (t1, l1)]) in topo.interior_faces() {
        let a = &element_dofs(&map, t0).ids[12 + 2 * l0..14 + 2 * l0];
        let b = &element_dofs(&map, t1).ids[12 + 2 * l1..14 + 2 * l1];
        assert_eq!(a, b);
        assert_eq!(a, map.face_dofs(f));
    }
    for (t, edges) in topo.tet_edges.iter().enumerate() {
        for (e, &ge) in edges.iter().enumerate() {
            assert_eq!(&element_dofs(&map, t).ids[2 * e..2 * e + 2], map.edge_dofs(ge));
        }
    }
}

struct Quadratic;

impl VectorField for Quadratic {
    fn value(&self, x: &Vec3) -> Vec3 {
        Vec3::new(x.y * x.z + 1.0, x.x * x.x - x.z, 2.0 * x.x * x.y + x.y * x.y)
    }

    fn curl(&self, x: &Vec3) -> Vec3 {
        // ∂y w − ∂z v, ∂z u − ∂x w, ∂x v − ∂y u
        Vec3::new(2.0 * x.x + 2.0 * x.y + 1.0, x.y - 2.0 * x.y, 2.0 * x.x - x.z)
    }
}

#[test]
fn shared_functionals_agree_from_both_sides() {
    // two tets sharing face {0, 1, 2}
    let v = vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 0.1, 0.0),
        Vec3::new(0.2, 1.0, 0.1),
        Vec3::new(0.3, 0.2, 1.0),
        Vec3::new(0.4, 0.3, -1.0),
    ];
    let mesh = Mesh::new(v, vec![[0, 1, 2, 3], [0, 2, 1, 4]]).unwrap();
    let topo = build_topology(&mesh).unwrap();
    let map = build_dofmap(&mesh, &topo);
    let values: Vec<[f64; 20]> = (0..2)
        .map(|t| {
            let g = tet_geometry(mesh.tet_vertices(t)).unwrap();
            FunctionalSet::global(&g, &mesh.tets()[t]).apply(&g, &Quadratic)
        })
        .collect();
    let mut shared = 0;
    for g in 0..map.num_dofs() {
        let seen: Vec<f64> = (0..2)
            .filter_map(|t| {
                element_dofs(&map, t)
                    .ids
                    .iter()
                    .position(|&i| i == g)
                    .map(|s| values[t][s])
            })
            .collect();
        if seen.len() == 2 {
            assert!((seen[0] - seen[1]).abs() < 1e-12, "dof {g}: {seen:?}");
            shared += 1;
        }
    }
    assert_eq!(shared, 2 * 3 + 2);
}

#[test]
fn transform_relates_local_and_global_functionals() {
    let (mesh, _, map) = box_map(2);
    for t in 0..mesh.num_tets() {
        let g = tet_geometry(mesh.tet_vertices(t)).unwrap();
        let basis = explicit_basis(&g);
        let u = basis.combine(&std::array::from_fn(|i| (i as f64).cos()));
        let local = nalgebra::SVector::<f64, 20>::from(FunctionalSet::canonical(&g).apply(&g, &u));
        let global = nalgebra::SVector::<f64, 20>::from(FunctionalSet::global(&g, &mesh.tets()[t]).apply(&g, &u));
        let tm = element_dofs(&map, t).transform.matrix();
        assert!((local - tm * global).abs().max() < 1e-11);
    }
}
