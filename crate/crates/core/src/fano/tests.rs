use super::*;
use crate::field::Eis;
use crate::scene::{canonical_scene, TParam};
use rand::SeedableRng;

fn e(n: i64) -> Eis {
    Eis::from_int(n)
}

fn u(n: i64) -> (Eis, Eis) {
    (e(1), e(n))
}

#[test]
fn cone_lines_certify_for_all_t() {
    let scene = canonical_scene();
    for i in [1u8, 2] {
        for n in [-4i64, 0, 1, 3, 9] {
            cone_line(&scene, i, &u(n)).unwrap();
        }
        // The ruling over the cusp.
        cone_line(&scene, i, &(e(0), e(1))).unwrap();
        // The ruling over a labelled point.
        let triple = scene.label_triple(i).unwrap();
        cone_line(&scene, i, &triple.u_plus).unwrap();
    }
}

#[test]
fn generic_line_fails_certification() {
    let scene = canonical_scene();
    let a = crate::projective::ProjPoint::from_ints(&[1, 0, 0, 0, 0, 0], &e(1));
    let b = crate::projective::ProjPoint::from_ints(&[0, 1, 0, 0, 0, 0], &e(1));
    let line = ProjLine::new(a, b).unwrap();
    assert!(matches!(
        LineOnY::certify(&scene, line),
        Err(FanoError::CertificationFailed(_))
    ));
}

#[test]
fn symbolic_condition_system() {
    let scene = canonical_scene();
    let sys = lines_through_p0_symbolic(&scene).unwrap();
    assert_eq!(sys.conditions.len(), 3);
    assert_eq!(sys.reduced.len(), 3);
    // A point of Gamma_1 (a0 = a1 = 0, a4^3 = F) satisfies the system.
    let p = scene.curve(1).point(&u(3)).unwrap();
    let t_test = e(5);
    for c in &sys.conditions {
        let mut pt: Vec<Eis> = p.coords()[..5].to_vec();
        pt.push(e(7)); // unused lambda slot
        pt.push(t_test.clone());
        assert!(c.eval(&pt).unwrap().is_zero());
    }
}

#[test]
fn third_point_matches_negated_sum() {
    // The parametrization kills the u^2 coefficient of any restricted
    // linear form, so collinearity is u1 + u2 + u3 = 0.
    let scene = canonical_scene();
    for i in [1u8, 2] {
        for (a, b) in [(3i64, 0), (1, 5), (-2, 7), (4, 4), (1, 1)] {
            let u3 = third_point(&scene, i, &u(a), &u(b)).unwrap();
            let expected = e(-(a + b));
            // (s : t) == (1 : -(a+b))
            assert!(
                u3.0.mul(&expected).sub(&u3.1.mul(&e(1))).is_zero(),
                "i={i} u1={a} u2={b} got {:?}",
                u3
            );
        }
    }
}

#[test]
fn third_point_rejects_cusp_parameters() {
    let scene = canonical_scene();
    assert!(matches!(
        third_point(&scene, 1, &(e(0), e(1)), &u(2)),
        Err(FanoError::CuspParameter)
    ));
}

#[test]
fn residual_matches_cone_of_third_point() {
    let scene = canonical_scene();
    for i in [1u8, 2] {
        for (a, b) in [(3i64, 0), (1, 5), (-2, 7)] {
            let l1 = cone_line(&scene, i, &u(a)).unwrap();
            let l2 = cone_line(&scene, i, &u(b)).unwrap();
            let res = residual_line(&scene, &l1, &l2, None).unwrap();
            let u3 = third_point(&scene, i, &u(a), &u(b)).unwrap();
            let expected = cone_line(&scene, i, &u3).unwrap();
            assert_eq!(res.line(), expected.line(), "i={i} ({a},{b})");
        }
        // Repeated-parameter tangent case with the cone tangent plane.
        let l = cone_line(&scene, i, &u(3)).unwrap();
        let plane = cone_tangent_plane(&scene, i, &u(3)).unwrap();
        let res = residual_line(&scene, &l, &l, Some(&plane)).unwrap();
        let u3 = third_point(&scene, i, &u(3), &u(3)).unwrap();
        let expected = cone_line(&scene, i, &u3).unwrap();
        assert_eq!(res.line(), expected.line(), "tangent case i={i}");
    }
}

#[test]
fn residual_requires_tangent_plane_for_equal_lines() {
    let scene = canonical_scene();
    let l = cone_line(&scene, 1, &u(3)).unwrap();
    assert!(matches!(
        residual_line(&scene, &l, &l, None),
        Err(FanoError::TangentPlaneRequired)
    ));
}

#[test]
fn residual_rejects_skew_lines() {
    let scene = canonical_scene().specialize(13).unwrap();
    let lines = enumerate_lines_through_p0(&scene).unwrap();
    // Two cone lines always meet at the vertex; fabricate skew lines from
    // the enumeration plus a translate: instead simply take two lines on Y
    // found via the sampler, which are generically skew.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let s1 = sample_lines_in_di_open(&scene, 1, 4, &mut rng).unwrap();
    let mut found_skew = false;
    for a in &s1 {
        for b in &s1 {
            if a == b {
                continue;
            }
            match residual_line(&scene, a, b, None) {
                Err(FanoError::SkewLines) => {
                    found_skew = true;
                }
                _ => {}
            }
        }
    }
    assert!(found_skew, "expected at least one skew pair among samples");
    let _ = lines;
}

#[test]
fn meets_cone_signals_vertex_lines() {
    let scene = canonical_scene();
    let l = cone_line(&scene, 1, &u(3)).unwrap();
    assert_eq!(meets_cone(&scene, &l, 1).unwrap(), ConeMeet::ThroughVertex);
    // A residual line of two distinct cone lines of the same cone is again
    // a cone line, so it is also reported as a vertex line.
    let l2 = cone_line(&scene, 1, &u(0)).unwrap();
    let res = residual_line(&scene, &l, &l2, None).unwrap();
    assert_eq!(meets_cone(&scene, &res, 1).unwrap(), ConeMeet::ThroughVertex);
}

#[test]
fn xi4_ledger_cancels() {
    let scene = canonical_scene();
    let chain = assemble_xi4(&scene).unwrap();
    assert!(chain.ledger_is_zero());
    assert_eq!(chain.components.len(), 2);
}

#[test]
fn xi4_with_swapped_function_fails() {
    let scene = canonical_scene();
    let phi1 = scene.build_phi(1).unwrap();
    let result = assemble_xi4_with(&scene, phi1.clone(), phi1);
    assert!(matches!(result, Err(FanoError::LedgerNonzero(_))));
}

#[test]
fn xi4_ledger_lines_are_distinct() {
    let scene = canonical_scene();
    let triple = scene.label_triple(1).unwrap();
    let plus = cone_line(&scene, 1, &triple.u_plus).unwrap();
    let minus = cone_line(&scene, 1, &triple.u_minus).unwrap();
    assert_ne!(plus.line().plucker(), minus.line().plucker());
    // Both curves produce the same vertex lines over the shared points.
    let t2 = scene.label_triple(2).unwrap();
    let plus2 = cone_line(&scene, 2, &t2.u_plus).unwrap();
    assert_eq!(plus.line(), plus2.line());
}

#[test]
fn enumeration_matches_cone_lines_mod_13() {
    let scene = canonical_scene().specialize(13).unwrap();
    let enumerated = enumerate_lines_through_p0(&scene).unwrap();
    let mut cones = cone_lines_fq(&scene, 1).unwrap();
    cones.extend(cone_lines_fq(&scene, 2).unwrap());
    cones.sort();
    cones.dedup();
    assert_eq!(enumerated, cones);
    // #C1 + #C2 - #(C1 cap C2) = 14 + 14 - 3 over F_13.
    assert_eq!(enumerated.len(), 25);
}

#[test]
fn phi_tilde_zero_iff_meets_plus_line() {
    let scene = canonical_scene().specialize(13).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let (_, report) = assemble_xi2(&scene, 6, &mut rng).unwrap();
    assert!(report.all_consistent);
    assert_eq!(report.samples.len(), 12);
}

#[test]
fn eckardt_witness_found_mod_13() {
    let scene = canonical_scene().specialize(13).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    // A smooth cone point over C1 and one on the cusp line.
    let base = scene.curve(1).point(&(Fp::reduce(1, 13), Fp::reduce(3, 13))).unwrap();
    let mut coords = base.coords().to_vec();
    coords[5] = Fp::reduce(4, 13);
    let p = ProjPoint::new(coords).unwrap();
    match eckardt_witness(&scene, &p, 64, &mut rng).unwrap() {
        EckardtOutcome::Witness(_) => {}
        other => panic!("expected witness, got {other:?}"),
    }
    let cusp = scene.curve(1).cusp().clone();
    let mut coords = cusp.coords().to_vec();
    coords[5] = Fp::reduce(2, 13);
    let p = ProjPoint::new(coords).unwrap();
    match eckardt_witness(&scene, &p, 64, &mut rng).unwrap() {
        EckardtOutcome::Witness(_) => {}
        other => panic!("expected witness on the cusp line, got {other:?}"),
    }
}

#[test]
fn eckardt_zero_trials_is_inconclusive() {
    let scene = canonical_scene().specialize(13).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let base = scene.curve(1).point(&(Fp::reduce(1, 13), Fp::reduce(3, 13))).unwrap();
    assert_eq!(
        eckardt_witness(&scene, &base, 0, &mut rng).unwrap(),
        EckardtOutcome::Inconclusive { draws: 0 }
    );
}

#[test]
fn symbolic_scene_supports_cone_residuals() {
    // Cone-to-cone residual work even when t stays symbolic: the plane
    // restriction is t-free.
    let scene = canonical_scene().at_t(TParam::Symbolic).unwrap();
    let l1 = cone_line(&scene, 1, &u(2)).unwrap();
    let l2 = cone_line(&scene, 1, &u(5)).unwrap();
    let res = residual_line(&scene, &l1, &l2, None).unwrap();
    let u3 = third_point(&scene, 1, &u(2), &u(5)).unwrap();
    assert_eq!(res.line(), cone_line(&scene, 1, &u3).unwrap().line());
}
