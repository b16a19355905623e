//! Probabilistic genericity certificate by finite-field exhaustion: no
//! singular point on the branch curve `B`, no singular point on the
//! fourfold `Y` (for `t != 0`), and no line on the surface `S`, each
//! checked exhaustively over `F_q` for the requested primes.
//!
//! A passing report says "no counterexample found over these fields"; it is
//! never a characteristic-zero proof.

use serde::Serialize;

use crate::enumfq::{find_singular_point, find_singular_point_p5, line_in_variety, points_on_variety};
use crate::field::{Eis, Field, Fp};
use crate::projective::ProjLine;
use crate::scene::{Scene, SceneError};
use std::collections::BTreeSet;

/// Per-prime outcome. `witness` fields are set when a counterexample was
/// found (coordinates rendered in the scalar encoding).
#[derive(Debug, Clone, Serialize)]
pub struct PrimeSmoothness {
    pub q: u64,
    pub b_singular_point: Option<String>,
    pub y_singular_point: Option<String>,
    pub line_on_s: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessReport {
    pub primes: Vec<PrimeSmoothness>,
    pub passed: bool,
    /// The certificate is evidence over the listed finite fields only.
    pub note: &'static str,
}

/// Runs the three exhaustive checks for a prime-field scene.
pub fn smoothness_check_fp(scene: &Scene<Fp>, q: u64) -> Result<PrimeSmoothness, SceneError> {
    scene.require_nonzero_t()?;
    // (i) B = {F = 0} cap {Q = 0} in the P^3 given by x4 = x5 = 0.
    let b_sing = find_singular_point(&[scene.f(), scene.q_quadric()], 4, q);
    // (ii) Y smooth over P^5.
    let y = scene.y()?;
    let y_sing = find_singular_point_p5(y, q);
    // (iii) no F_q-line on S: pair search over S's points.
    let s_points = points_on_variety(&[scene.s_cubic(), scene.q_quadric()], 5, q);
    let mut line_on_s: Option<ProjLine<Fp>> = None;
    let mut seen = BTreeSet::new();
    'outer: for i in 0..s_points.len() {
        for j in (i + 1)..s_points.len() {
            let Ok(line) = ProjLine::new(s_points[i].clone(), s_points[j].clone()) else {
                continue;
            };
            if !seen.insert(line.plucker().to_vec()) {
                continue;
            }
            if line_in_variety(&[scene.s_cubic(), scene.q_quadric()], &line) {
                line_on_s = Some(line);
                break 'outer;
            }
        }
    }
    let passed = b_sing.is_none() && y_sing.is_none() && line_on_s.is_none();
    Ok(PrimeSmoothness {
        q,
        b_singular_point: b_sing.map(|p| p.to_string()),
        y_singular_point: y_sing.map(|p| p.to_string()),
        line_on_s: line_on_s.map(|l| format!("{l:?}")),
        passed,
    })
}

/// Specializes the scene to each prime and runs the exhaustive checks.
pub fn smoothness_certificate(
    scene: &Scene<Eis>,
    primes: &[u64],
) -> Result<SmoothnessReport, SceneError> {
    let mut out = Vec::new();
    for &q in primes {
        let fp_scene = scene
            .specialize(q)
            .map_err(|e| SceneError::BadPrime(q, e.to_string()))?;
        out.push(smoothness_check_fp(&fp_scene, q)?);
    }
    let passed = out.iter().all(|r| r.passed);
    Ok(SmoothnessReport {
        primes: out,
        passed,
        note: "exhaustive over the listed finite fields; no counterexample found is not a proof",
    })
}
