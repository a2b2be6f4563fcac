//! Closed-form dual basis for the canonical local orientation.
//!
//! With `L_xyz = λx(λy∇λz − λz∇λy)` and face `l = (i, j, k)`:
//!
//! ```text
//! φ_lij = 3|K| (L_lij − L_ljk)          (dual to the q_ij face moment)
//! φ_lik = 3|K| (L_lik − L_lkj)          (dual to the q_ik face moment)
//! ψ_ij  = L_ij − Σ_f M_f(L_ij) φ_f      (dual to M⁽¹⁾ on e_ij)
//! ψ'_ij = L_ji                          (dual to M⁽²⁾ on e_ij)
//! ```
//!
//! Used as an independent check of the Vandermonde-inverted basis.

use super::basis::{pairing_matrix, BasisSet, Mat20};
use super::functionals::FunctionalSet;
use super::raw::{edge_slot, eval_raw, face_slot, triple_curl, triple_in_raw};
use super::TetGeometry;
use crate::mesh::{LOCAL_EDGES, LOCAL_FACES};
use crate::quadrature::rule_triangle;

/// Raw coefficients of the explicit basis, columns ordered like the canonical
/// functionals.
pub fn explicit_coefficients(geom: &TetGeometry) -> Mat20 {
    let mut x = Mat20::zeros();
    let s = 3.0 * geom.volume;
    for (l, &[i, j, k]) in LOCAL_FACES.iter().enumerate() {
        for (col, plus, minus) in [
            (face_slot(l, 0), (l, i, j), (l, j, k)),
            (face_slot(l, 1), (l, i, k), (l, k, j)),
        ] {
            for (slot, c) in triple_in_raw(plus.0, plus.1, plus.2) {
                x[(slot, col)] += s * c;
            }
            for (slot, c) in triple_in_raw(minus.0, minus.1, minus.2) {
                x[(slot, col)] -= s * c;
            }
        }
    }

    let canonical = FunctionalSet::canonical(geom);
    let raw_moments = pairing_matrix(&canonical, |b| eval_raw(geom, b));
    for e in 0..LOCAL_EDGES.len() {
        let rot = edge_slot(e, 0);
        let grad = edge_slot(e, 1);
        x[(rot, rot)] = 1.0;
        for f in 0..4 {
            for t in 0..2 {
                let m = raw_moments[(face_slot(f, t), rot)];
                let phi = x.column(face_slot(f, t)).into_owned();
                let mut col = x.column_mut(rot);
                col -= phi * m;
            }
        }
        x[(grad, grad)] = 1.0;
    }
    x
}

/// Explicit basis as a [`BasisSet`].
pub fn explicit_basis(geom: &TetGeometry) -> BasisSet {
    BasisSet::from_coefficients(geom.clone(), explicit_coefficients(geom))
}

/// `∫_{f_l} (∇×L_abc) × ∇λ_l · (∇λ_l × ∇λ_k) dA`, the building block of the
/// face-duality computation.
pub fn face_curl_integral(geom: &TetGeometry, l: usize, triple: (usize, usize, usize), k: usize) -> f64 {
    let g = &geom.grad_lambda;
    let rule = rule_triangle(2).expect("triangle rule");
    let dir = g[l].cross(&g[k]);
    let verts = LOCAL_FACES[l];
    let sum: f64 = rule
        .iter()
        .map(|(b, w)| {
            let mut bary = [0.0; 4];
            for (&v, &lv) in verts.iter().zip(b) {
                bary[v] = lv;
            }
            w * triple_curl(g, &bary, triple.0, triple.1, triple.2)
                .cross(&g[l])
                .dot(&dir)
        })
        .sum();
    geom.face_areas[l] * sum
}
