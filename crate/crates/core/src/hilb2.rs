//! Hilbert-square incidence at desk scale: reduced point pairs of the
//! surface `S`, the induced divisors `C_i + S` with their pulled-back
//! functions, the point- and curve-indexed chains, the intersection
//! identity against an elliptic fiber, and the `t -> 0` degeneration
//! round-trip.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chain::{Chain, ChainComponent, LedgerKey, SupportDesc};
use crate::fano::{
    cone_line, meets_cone, phi_tilde, residual_line, ConeMeet, FanoError, LineOnY,
};
use crate::field::{Eis, Field, Fp};
use crate::poly::PolyError;
use crate::projective::{GeomError, ProjLine, ProjPoint};
use crate::scene::{PhiValue, RationalFunc, Scene, SceneError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Hilb2Error {
    #[error("point is not on the surface S")]
    NotOnSurface,
    #[error("pair is not reduced (the two points coincide)")]
    NonReducedPair,
    #[error("neither member of the pair lies on the curve")]
    NeitherPointOnCurve,
    #[error("base point lies in the divisor support {0}")]
    PointOnDivisorSupport(String),
    #[error("curve is one of the distinguished cuspidal cubics")]
    CurveIsDistinguished,
    #[error("curve meets the divisor support of the functions")]
    CurveMeetsDivisorSupport,
    #[error("operation needs the degenerate fourfold (t = 0)")]
    TZeroRequired,
    #[error("recovery failed: {0}")]
    RecoveryFailed(String),
    #[error("value mismatch between evaluation paths: {0}")]
    ValueMismatch(String),
    #[error(transparent)]
    Fano(#[from] FanoError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Membership test for the surface `S` (inside `x5 = 0`).
pub fn on_surface<K: Field>(scene: &Scene<K>, p: &ProjPoint<K>) -> bool {
    if !p.coords()[5].is_zero() {
        return false;
    }
    let s = scene.s_cubic().eval(p.coords()).map(|v| v.is_zero());
    let q = scene.q_quadric().eval(p.coords()).map(|v| v.is_zero());
    matches!((s, q), (Ok(true), Ok(true)))
}

/// An unordered pair of distinct points of `S` (a reduced point of the
/// Hilbert square). Stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairPoint<K: Field> {
    a: ProjPoint<K>,
    b: ProjPoint<K>,
}

impl<K: Field> PairPoint<K> {
    pub fn new(scene: &Scene<K>, x: ProjPoint<K>, y: ProjPoint<K>) -> Result<Self, Hilb2Error> {
        if x == y {
            return Err(Hilb2Error::NonReducedPair);
        }
        if !on_surface(scene, &x) || !on_surface(scene, &y) {
            return Err(Hilb2Error::NotOnSurface);
        }
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        Ok(PairPoint { a, b })
    }

    pub fn members(&self) -> (&ProjPoint<K>, &ProjPoint<K>) {
        (&self.a, &self.b)
    }
}

/// Value of the induced function on `C_i + S` at a pair: one value on the
/// normal locus, the two branch values on the non-normal locus `C_i + C_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phi2Value<K: Field> {
    One(PhiValue<K>),
    Both(PhiValue<K>, PhiValue<K>),
}

/// Evaluates the induced function of `C_i + S` at a pair.
pub fn phi2_eval<K: Field>(
    scene: &Scene<K>,
    pair: &PairPoint<K>,
    i: u8,
) -> Result<Phi2Value<K>, Hilb2Error> {
    phi2_eval_with(scene, pair, i, &scene.build_phi(i)?)
}

pub fn phi2_eval_with<K: Field>(
    scene: &Scene<K>,
    pair: &PairPoint<K>,
    i: u8,
    phi: &RationalFunc<K>,
) -> Result<Phi2Value<K>, Hilb2Error> {
    let curve = scene.curve(i);
    let on_a = curve.contains(&pair.a);
    let on_b = curve.contains(&pair.b);
    let value_at = |p: &ProjPoint<K>| -> Result<PhiValue<K>, Hilb2Error> {
        let u = curve.cusp_projection(p)?;
        Ok(phi.eval(&u))
    };
    match (on_a, on_b) {
        (false, false) => Err(Hilb2Error::NeitherPointOnCurve),
        (true, false) => Ok(Phi2Value::One(value_at(&pair.a)?)),
        (false, true) => Ok(Phi2Value::One(value_at(&pair.b)?)),
        (true, true) => Ok(Phi2Value::Both(value_at(&pair.a)?, value_at(&pair.b)?)),
    }
}

/// The induced chain `(C_1+S, phi_1^[2]) + (C_2+S, phi_2^[2])` with its
/// symbolic ledger `(p_+ + S) - (p_- + S)` + `(p_- + S) - (p_+ + S)`.
pub fn assemble_xi2_induced<K: Field>(scene: &Scene<K>) -> Result<Chain<K>, Hilb2Error> {
    assemble_xi2_induced_with(scene, scene.build_phi(1)?, scene.build_phi(2)?)
}

pub fn assemble_xi2_induced_with<K: Field>(
    scene: &Scene<K>,
    phi1: RationalFunc<K>,
    phi2: RationalFunc<K>,
) -> Result<Chain<K>, Hilb2Error> {
    let one = scene.u0().one_like();
    let mut chain = Chain::new(vec![
        ChainComponent {
            support: SupportDesc::CurvePlusSurface { i: 1 },
            func: phi1.clone(),
        },
        ChainComponent {
            support: SupportDesc::CurvePlusSurface { i: 2 },
            func: phi2.clone(),
        },
    ]);
    for (i, phi) in [(1u8, &phi1), (2u8, &phi2)] {
        let curve = scene.curve(i);
        let zero_pt = curve.point(&(one.clone(), phi.alpha.clone()))?;
        let pole_pt = curve.point(&(one.clone(), phi.beta.clone()))?;
        chain.add_ledger(LedgerKey::DivisorPlusS(zero_pt), 1);
        chain.add_ledger(LedgerKey::DivisorPlusS(pole_pt), -1);
    }
    if !chain.ledger_is_zero() {
        return Err(Hilb2Error::ValueMismatch(format!(
            "induced ledger has {} uncancelled entries",
            chain.ledger().len()
        )));
    }
    Ok(chain)
}

/// The point-indexed chain `sum_i (C_i + p, phi_i)`; requires `p` on `S`
/// and off the divisor supports `p_+`, `p_-` (`p` on a curve is allowed).
pub fn assemble_xi_p<K: Field>(scene: &Scene<K>, p: &ProjPoint<K>) -> Result<Chain<K>, Hilb2Error> {
    if !on_surface(scene, p) {
        return Err(Hilb2Error::NotOnSurface);
    }
    let triple = scene.label_triple(1)?;
    if *p == triple.p_plus || *p == triple.p_minus {
        return Err(Hilb2Error::PointOnDivisorSupport(p.to_string()));
    }
    let phi1 = scene.build_phi(1)?;
    let phi2 = scene.build_phi(2)?;
    let one = scene.u0().one_like();
    let mut chain = Chain::new(vec![
        ChainComponent {
            support: SupportDesc::CurvePlusPoint { i: 1, p: p.clone() },
            func: phi1.clone(),
        },
        ChainComponent {
            support: SupportDesc::CurvePlusPoint { i: 2, p: p.clone() },
            func: phi2.clone(),
        },
    ]);
    for (i, phi) in [(1u8, &phi1), (2u8, &phi2)] {
        let curve = scene.curve(i);
        let zero_pt = curve.point(&(one.clone(), phi.alpha.clone()))?;
        let pole_pt = curve.point(&(one.clone(), phi.beta.clone()))?;
        chain.add_ledger(LedgerKey::pair(zero_pt, p.clone()), 1);
        chain.add_ledger(LedgerKey::pair(pole_pt, p.clone()), -1);
    }
    if !chain.ledger_is_zero() {
        return Err(Hilb2Error::ValueMismatch(
            "point-indexed ledger does not cancel".into(),
        ));
    }
    Ok(chain)
}

/// A fiber of one of the two elliptic fibrations of `S` (pullbacks of the
/// rulings of the quadric). Ruling 1 fixes `(x0 : x2) = (x1 : x3) = tau`;
/// ruling 2 fixes `(x0 : x1) = (x2 : x3) = tau`. The distinguished curves
/// are the fibers over `(0 : 1)`: `C_1` in ruling 1, `C_2` in ruling 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCurve<K: Field> {
    pub ruling: u8,
    pub tau: (K, K),
}

impl<K: Field> FiberCurve<K> {
    pub fn new(ruling: u8, tau: (K, K)) -> Self {
        assert!(ruling == 1 || ruling == 2);
        assert!(!(tau.0.is_zero() && tau.1.is_zero()));
        FiberCurve { ruling, tau }
    }

    /// Whether this is the distinguished fiber equal to `C_1` or `C_2`.
    pub fn is_distinguished(&self) -> bool {
        self.tau.0.is_zero()
    }

    /// Membership: `p` on `S` and its base point on the ruling line.
    pub fn on_fiber(&self, scene: &Scene<K>, p: &ProjPoint<K>) -> bool {
        if !on_surface(scene, p) {
            return false;
        }
        let c = p.coords();
        let (u, v) = match self.ruling {
            1 => ((&c[0], &c[2]), (&c[1], &c[3])),
            _ => ((&c[0], &c[1]), (&c[2], &c[3])),
        };
        let cross = |pair: (&K, &K)| pair.0.mul(&self.tau.1).sub(&pair.1.mul(&self.tau.0));
        cross(u).is_zero() && cross(v).is_zero()
    }

    /// The ambient base point of the ruling line at parameter `(t0 : t1)`.
    pub fn base_point(&self, t: &(K, K)) -> [K; 4] {
        let (s0, s1) = (&self.tau.0, &self.tau.1);
        let (t0, t1) = (&t.0, &t.1);
        match self.ruling {
            1 => [s0.mul(t0), s0.mul(t1), s1.mul(t0), s1.mul(t1)],
            _ => [t0.mul(s0), t0.mul(s1), t1.mul(s0), t1.mul(s1)],
        }
    }

}

impl FiberCurve<Fp> {
    /// All points of the fiber over the prime field.
    pub fn points_fq(&self, scene: &Scene<Fp>) -> Vec<ProjPoint<Fp>> {
        let q = scene.u0().modulus();
        let one = Fp::reduce(1, q);
        let zero = Fp::reduce(0, q);
        let mut params: Vec<(Fp, Fp)> = (0..q).map(|v| (one, Fp::reduce(v as i128, q))).collect();
        params.push((zero, one));
        let mut out = Vec::new();
        for t in params {
            let base = self.base_point(&t);
            let mut pt6 = vec![zero; 6];
            pt6[..4].clone_from_slice(&base);
            let val = scene.f().eval(&pt6).expect("length 6");
            for root in val.cube_roots() {
                let mut coords = pt6.clone();
                coords[4] = root;
                if let Ok(p) = ProjPoint::new(coords) {
                    out.push(p);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// The exact intersection `C_i cap C` for a fiber `C`, by substitution:
/// the base lines meet in one point, whose cube-root lifts are the
/// intersection.
pub fn curve_fiber_intersection(
    scene: &Scene<Fp>,
    i: u8,
    fiber: &FiberCurve<Fp>,
) -> Vec<ProjPoint<Fp>> {
    let q = scene.u0().modulus();
    let zero = Fp::reduce(0, q);
    // C_1 is the ruling-1 fiber over (0:1); C_2 the ruling-2 fiber.
    if (i == 1 && fiber.ruling == 1) || (i == 2 && fiber.ruling == 2) {
        if fiber.is_distinguished() {
            // The fiber IS the curve; calling this is a caller bug.
            panic!("fiber coincides with C_{i}");
        }
        return vec![]; // distinct fibers of one ruling are disjoint
    }
    // Opposite rulings: base lines meet at one point.
    let (s0, s1) = (&fiber.tau.0, &fiber.tau.1);
    let base: [Fp; 4] = if fiber.ruling == 1 {
        // C_2 needs x0 = x2 = 0: on the ruling-1 line that is t0 = 0
        // (tau_0 != 0) giving [0, tau0, 0, tau1].
        [zero, *s0, zero, *s1]
    } else {
        // C_1 needs x0 = x1 = 0: on the ruling-2 line [0, 0, tau0, tau1].
        [zero, zero, *s0, *s1]
    };
    let mut pt6 = vec![zero; 6];
    pt6[..4].clone_from_slice(&base);
    let val = scene.f().eval(&pt6).expect("length 6");
    let mut out = Vec::new();
    for root in val.cube_roots() {
        let mut coords = pt6.clone();
        coords[4] = root;
        if let Ok(p) = ProjPoint::new(coords) {
            if scene.curve(i).contains(&p) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

/// One record of the intersection-identity check.
#[derive(Debug, Clone)]
pub struct XiCSample {
    pub pair: String,
    pub in_ci_plus_s: bool,
    pub in_c_plus_s: bool,
    pub in_ci_plus_c: bool,
    pub in_s_plus_p: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct XiCReport {
    pub i: u8,
    pub intersection_points: Vec<String>,
    pub samples: Vec<XiCSample>,
    pub flagged_p_inf_on_curve: bool,
    pub pass: bool,
}

/// Set-level verification of the intersection identity
/// `(C_i+S) . (C+S) = (C_i+C) + sum_{p in C_i cap C} (S+p)` on sampled
/// pairs, for `C` an elliptic fiber.
pub fn xi_c_identity_check(
    scene: &Scene<Fp>,
    i: u8,
    fiber: &FiberCurve<Fp>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<XiCReport, Hilb2Error> {
    if fiber.is_distinguished() {
        return Err(Hilb2Error::CurveIsDistinguished);
    }
    let triple = scene.label_triple(1)?;
    let fiber_points = fiber.points_fq(scene);
    if fiber_points.contains(&triple.p_plus) || fiber_points.contains(&triple.p_minus) {
        return Err(Hilb2Error::CurveMeetsDivisorSupport);
    }
    let flagged_p_inf_on_curve = fiber_points.contains(&triple.p_inf);
    let inter = curve_fiber_intersection(scene, i, fiber);
    let curve = scene.curve(i);
    let curve_points: Vec<ProjPoint<Fp>> = {
        let q = scene.u0().modulus();
        let one = Fp::reduce(1, q);
        let zero = Fp::reduce(0, q);
        let mut params: Vec<(Fp, Fp)> =
            (0..q).map(|v| (one, Fp::reduce(v as i128, q))).collect();
        params.push((zero, one));
        params
            .iter()
            .map(|t| curve.point(t).expect("curve point"))
            .collect()
    };
    let s_points = crate::enumfq::points_on_variety(
        &[scene.s_cubic(), scene.q_quadric()],
        5,
        scene.u0().modulus(),
    );
    let mut samples_out = Vec::new();
    let mut push_sample = |x: &ProjPoint<Fp>, y: &ProjPoint<Fp>| {
        if x == y {
            return;
        }
        let pair = PairPoint::new(scene, x.clone(), y.clone()).expect("points on S");
        let (a, b) = pair.members();
        let on_ci = |p: &ProjPoint<Fp>| curve.contains(p);
        let on_c = |p: &ProjPoint<Fp>| fiber.on_fiber(scene, p);
        let in_ci_plus_s = on_ci(a) || on_ci(b);
        let in_c_plus_s = on_c(a) || on_c(b);
        let in_ci_plus_c =
            (on_ci(a) && on_c(b)) || (on_ci(b) && on_c(a));
        let in_s_plus_p = inter
            .iter()
            .find(|p| p == &a || p == &b)
            .map(|p| p.to_string());
        // The identity: membership in both left factors must be explained
        // by the right side, and conversely.
        let lhs = in_ci_plus_s && in_c_plus_s;
        let rhs = in_ci_plus_c || in_s_plus_p.is_some();
        let pass = lhs == rhs;
        samples_out.push(XiCSample {
            pair: format!("{{{a}, {b}}}"),
            in_ci_plus_s,
            in_c_plus_s,
            in_ci_plus_c,
            in_s_plus_p,
            pass,
        });
    };
    let pick = |v: &[ProjPoint<Fp>], rng: &mut ChaCha8Rng| v[rng.gen_range(0..v.len())].clone();
    for k in 0..samples {
        match k % 3 {
            // Pairs {x in C_i, y in C}: the C_i + C part.
            0 => {
                let x = pick(&curve_points, rng);
                let y = pick(&fiber_points, rng);
                push_sample(&x, &y);
            }
            // Pairs {z in C_i cap C, w in S}: the S + p part.
            1 if !inter.is_empty() => {
                let z = pick(&inter, rng);
                let w = pick(&s_points, rng);
                push_sample(&z, &w);
            }
            // Random pairs with one member on C_i: in the left side only
            // when the other member lands on C.
            _ => {
                let x = pick(&curve_points, rng);
                let w = pick(&s_points, rng);
                push_sample(&x, &w);
            }
        }
    }
    let pass = samples_out.iter().all(|s| s.pass);
    let report = XiCReport {
        i,
        intersection_points: inter.iter().map(|p| p.to_string()).collect(),
        samples: samples_out,
        flagged_p_inf_on_curve,
        pass,
    };
    if !report.pass {
        return Err(Hilb2Error::ValueMismatch(
            "a sampled pair violates the intersection identity".into(),
        ));
    }
    Ok(report)
}

/// The recovered data of a degeneration round-trip.
#[derive(Debug, Clone)]
pub struct DegenRecord<K: Field> {
    pub p_on_curve: ProjPoint<K>,
    pub q_on_surface: ProjPoint<K>,
    pub value: PhiValue<K>,
}

/// Forward construction: the residual line of the vertex joins of
/// `p = nu_i(u)` and a surface point `q` on the degenerate fourfold.
pub fn build_degeneration_line<K: Field>(
    scene0: &Scene<K>,
    i: u8,
    u: &(K, K),
    q_point: &ProjPoint<K>,
) -> Result<LineOnY<K>, Hilb2Error> {
    require_t_zero(scene0)?;
    if !on_surface(scene0, q_point) {
        return Err(Hilb2Error::NotOnSurface);
    }
    let p = scene0.curve(i).point(u)?;
    if p == *q_point {
        return Err(Hilb2Error::NonReducedPair);
    }
    let l1 = cone_line(scene0, i, u)?;
    let l2 = LineOnY::certify(
        scene0,
        ProjLine::new(scene0.p0().clone(), q_point.clone())?,
    )?;
    Ok(residual_line(scene0, &l1, &l2, None)?)
}

fn require_t_zero<K: Field>(scene: &Scene<K>) -> Result<(), Hilb2Error> {
    match scene.t_value() {
        Ok(v) if v.is_zero() => Ok(()),
        _ => Err(Hilb2Error::TZeroRequired),
    }
}

/// Backward recovery: a line of the open degenerate locus determines the
/// unique pair `(p in C_i, q in S)` with `l` the residual of their vertex
/// joins; the three evaluation paths must agree exactly.
pub fn degeneration_check<K: Field>(
    scene0: &Scene<K>,
    l: &LineOnY<K>,
    i: u8,
) -> Result<DegenRecord<K>, Hilb2Error> {
    require_t_zero(scene0)?;
    if l.line().contains(scene0.p0()) {
        return Err(Hilb2Error::RecoveryFailed("line passes through p0".into()));
    }
    // Its unique cone intersection point.
    let z_p = match meets_cone(scene0, l, i)? {
        ConeMeet::Points(ps) if ps.len() == 1 => ps[0].clone(),
        other => {
            return Err(Hilb2Error::RecoveryFailed(format!(
                "cone intersection is {other:?}"
            )))
        }
    };
    // Both intersection points with the cone over S.
    let (a, b) = l.line().spanning_points();
    let s_res = scene0.s_cubic().restrict_to_line(a.coords(), b.coords())?;
    let q_res = scene0
        .q_quadric()
        .restrict_to_line(a.coords(), b.coords())?;
    let g = s_res.gcd(&q_res);
    if g.degree() != 2 {
        return Err(Hilb2Error::RecoveryFailed(format!(
            "surface-cone intersection has degree {}",
            g.degree()
        )));
    }
    let roots = g.roots()?;
    if roots.len() != 2 {
        return Err(Hilb2Error::RecoveryFailed(
            "surface-cone intersection is not two rational points".into(),
        ));
    }
    let pts: Vec<ProjPoint<K>> = roots
        .iter()
        .map(|(s, t)| l.line().point_at(s, t))
        .collect::<Result<_, _>>()?;
    let z_q = if pts[0] == z_p {
        pts[1].clone()
    } else if pts[1] == z_p {
        pts[0].clone()
    } else {
        return Err(Hilb2Error::RecoveryFailed(
            "cone point is not among the surface-cone points".into(),
        ));
    };
    let project = |z: &ProjPoint<K>| -> Result<ProjPoint<K>, Hilb2Error> {
        let mut c = z.coords().to_vec();
        c[5] = c[0].zero_like();
        Ok(ProjPoint::new(c)?)
    };
    let p_pt = project(&z_p)?;
    let q_pt = project(&z_q)?;
    if !on_surface(scene0, &p_pt) || !on_surface(scene0, &q_pt) {
        return Err(Hilb2Error::RecoveryFailed(
            "projected points are off the surface".into(),
        ));
    }
    // Path 1: the pullback along the cone-membership machinery.
    let v1 = phi_tilde(scene0, l, i)?;
    // Path 2: the induced-divisor evaluation at the recovered pair.
    let pair = PairPoint::new(scene0, p_pt.clone(), q_pt.clone())?;
    let v2 = match phi2_eval(scene0, &pair, i)? {
        Phi2Value::One(v) => v,
        Phi2Value::Both(_, _) => {
            return Err(Hilb2Error::RecoveryFailed(
                "recovered pair lies on the non-normal locus".into(),
            ))
        }
    };
    // Path 3: direct evaluation at the curve parameter of p.
    let u = scene0.curve(i).cusp_projection(&p_pt)?;
    let v3 = scene0.build_phi(i)?.eval(&u);
    if v1 != v2 || v2 != v3 {
        return Err(Hilb2Error::ValueMismatch(format!(
            "{v1:?} vs {v2:?} vs {v3:?}"
        )));
    }
    Ok(DegenRecord {
        p_on_curve: p_pt,
        q_on_surface: q_pt,
        value: v1,
    })
}

/// Bounded search for rational points of `S` in characteristic zero by
/// scanning ruling-1 base points for cube values of `F`; includes the
/// zeta-multiples of each lift. Deterministic order.
pub fn rational_s_points(scene: &Scene<Eis>, bound: i64, max: usize) -> Vec<ProjPoint<Eis>> {
    let mut out = Vec::new();
    let e = Eis::from_int;
    let mut reps: Vec<(i64, i64)> = (-bound..=bound).map(|v| (1i64, v)).collect();
    reps.push((0, 1));
    'outer: for (s0, s1) in reps.clone() {
        for (t0, t1) in reps.clone() {
            let base = [e(s0 * t0), e(s0 * t1), e(s1 * t0), e(s1 * t1)];
            if base.iter().all(|c| c.is_zero()) {
                continue;
            }
            let mut pt6 = base.to_vec();
            pt6.push(e(0));
            pt6.push(e(0));
            let val = scene.f().eval(&pt6).expect("len 6");
            for root in val.cube_roots() {
                let mut coords = pt6.clone();
                coords[4] = root;
                if let Ok(p) = ProjPoint::new(coords) {
                    if !out.contains(&p) {
                        out.push(p);
                        if out.len() >= max {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
