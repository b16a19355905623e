//! Construction and validation of a full parameter scene: the admissible
//! cubic form `F`, the quadric `Q`, the branch curve `B`, the triple-cover
//! surface `S`, the branch threefold `W` and the fourfold `Y`, the two
//! cuspidal plane cubics with their normalizations, the labelled triple on
//! their intersection, and the normalized rational functions on them.
//!
//! Ambient variable convention: `x0..x5` are the coordinates of P^5
//! (indices 0-5); the deformation parameter `t`, when symbolic, is variable
//! index 6. `B` lives in the `P^3` given by `x4 = x5 = 0`, `S` in `x5 = 0`,
//! `W` in `x4 = 0`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{Eis, Field, FieldError, Fp, SpecializationMap};
use crate::poly::{
    double_root, pad_vars, substitute_last_var, BinaryForm, CubicShape, MultiPoly, PolyError,
};
use crate::projective::{GeomError, LinearSubspace, ProjPoint};

mod canonical;
mod file;
mod smooth;

pub use canonical::{canonical_params, canonical_scene, seeded_params};
pub use file::{FileField, LoadedScene, SceneFile};
pub use smooth::{smoothness_certificate, PrimeSmoothness, SmoothnessReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("tangency data has a triple root (a = b)")]
    TripleRootTangency,
    #[error("tangency parameter is zero")]
    ZeroTangencyParameter,
    #[error("shared x3^3 coefficient mismatch: -a^2*b*c != -a'^2*b'*c'")]
    SharedCoefficientMismatch,
    #[error("cb/a has no cube root in the active field")]
    MissingCubeRoot,
    #[error("field has no primitive cube root of unity")]
    MissingZeta,
    #[error("stored designated root or zeta fails its defining relation")]
    BadDesignatedData,
    #[error("scene identity check failed: {0}")]
    IdentityCheckFailed(String),
    #[error("operation requires a numeric deformation parameter t")]
    NumericTRequired,
    #[error("operation requires t != 0")]
    NonzeroTRequired,
    #[error("prime {0} is unusable: {1}")]
    BadPrime(u64, String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Deformation parameter: an explicit scalar or a free symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TParam<K: Field> {
    Symbolic,
    Value(K),
}

/// The 13 cubic monomials in `x0..x3` left free by the two tangency
/// restrictions, as exponent vectors `(e0, e1, e2, e3)`.
pub const FREE_MONOMIALS: [[u8; 4]; 13] = [
    [3, 0, 0, 0],
    [2, 1, 0, 0],
    [2, 0, 1, 0],
    [2, 0, 0, 1],
    [1, 2, 0, 0],
    [1, 1, 1, 0],
    [1, 1, 0, 1],
    [1, 0, 2, 0],
    [1, 0, 1, 1],
    [1, 0, 0, 2],
    [0, 2, 1, 0],
    [0, 1, 2, 0],
    [0, 1, 1, 1],
];

/// Human-readable key for a free monomial, e.g. `x0^2*x1`.
pub fn monomial_key(exps: &[u8; 4]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{i}")),
            _ => parts.push(format!("x{i}^{e}")),
        }
    }
    parts.join("*")
}

/// Input data for a scene.
///
/// `G1 = c*(x2 - a*x3)^2*(x2 - b*x3)` and `G2 = c'*(x1 - a'*x3)^2*(x1 - b'*x3)`
/// are the restrictions of `F` to the tangent lines `x0 = x1 = 0` and
/// `x0 = x2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneParams<K: Field> {
    pub tangency1: (K, K, K),
    pub tangency2: (K, K, K),
    pub free_coeffs: BTreeMap<[u8; 4], K>,
    pub t: TParam<K>,
    pub seed: u64,
}

/// Moebius function `u -> mu * (u - alpha) / (u - beta)` on the
/// normalization parameter of a cuspidal cubic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunc<K: Field> {
    pub mu: K,
    pub alpha: K,
    pub beta: K,
}

/// Value of a rational function at a parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhiValue<K: Field> {
    Finite(K),
    Pole,
}

impl<K: Field> PhiValue<K> {
    pub fn finite(self) -> Option<K> {
        match self {
            PhiValue::Finite(v) => Some(v),
            PhiValue::Pole => None,
        }
    }
}

impl<K: Field> RationalFunc<K> {
    pub fn new(mu: K, alpha: K, beta: K) -> Self {
        assert!(alpha != beta, "Moebius data needs alpha != beta");
        assert!(!mu.is_zero(), "Moebius data needs mu != 0");
        RationalFunc { mu, alpha, beta }
    }

    /// Evaluation at a projective parameter `(u0 : u1)`, `u = u1/u0`.
    pub fn eval(&self, u: &(K, K)) -> PhiValue<K> {
        let num = u.1.sub(&self.alpha.mul(&u.0));
        let den = u.1.sub(&self.beta.mul(&u.0));
        if den.is_zero() {
            // alpha != beta rules out num = den = 0 away from (0,0).
            PhiValue::Pole
        } else {
            PhiValue::Finite(self.mu.mul(&num).mul(&den.inv().expect("nonzero")))
        }
    }
}

/// One of the two cuspidal plane cubics with its normalization data.
#[derive(Debug, Clone)]
pub struct CuspidalCurve<K: Field> {
    index: u8,
    /// Ambient variable indices of the plane coordinates `(w0, w1, w2)`:
    /// `(x2, x3, x4)` for the first curve, `(x1, x3, x4)` for the second.
    plane_vars: [usize; 3],
    /// Tangency data `(a, b, c)` of the branch cubic on this line.
    tangency: (K, K, K),
    /// The branch binary cubic `G_i(w0, w1)`.
    branch: BinaryForm<K>,
    /// Normalization `(u0 : u1) -> [w0(u) : w1(u) : w2(u)]`, three binary
    /// cubics.
    param: [BinaryForm<K>; 3],
    /// Plane cubic `w2^3 - G_i(w0, w1)` in the plane coordinates.
    plane_cubic: MultiPoly<K>,
    /// Cusp `[a : 1 : 0]`, in ambient coordinates.
    cusp: ProjPoint<K>,
}

impl<K: Field> CuspidalCurve<K> {
    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn plane_vars(&self) -> [usize; 3] {
        self.plane_vars
    }

    pub fn branch_cubic(&self) -> &BinaryForm<K> {
        &self.branch
    }

    pub fn plane_cubic(&self) -> &MultiPoly<K> {
        &self.plane_cubic
    }

    pub fn cusp(&self) -> &ProjPoint<K> {
        &self.cusp
    }

    pub fn parametrization(&self) -> &[BinaryForm<K>; 3] {
        &self.param
    }

    /// Embeds plane coordinates into P^5.
    pub fn embed(&self, plane: &[K; 3]) -> Result<ProjPoint<K>, GeomError> {
        let zero = plane[0].zero_like();
        let mut coords = vec![zero; 6];
        for (k, &v) in self.plane_vars.iter().enumerate() {
            coords[v] = plane[k].clone();
        }
        ProjPoint::new(coords)
    }

    /// The normalization map at a projective parameter.
    pub fn point(&self, u: &(K, K)) -> Result<ProjPoint<K>, GeomError> {
        let plane = [
            self.param[0].eval(&u.0, &u.1),
            self.param[1].eval(&u.0, &u.1),
            self.param[2].eval(&u.0, &u.1),
        ];
        self.embed(&plane)
    }

    /// Extracts the plane coordinates of an ambient point on the curve's
    /// plane; `None` when the point is off the plane `x0 = x_i = x5 = 0`.
    pub fn plane_coords(&self, p: &ProjPoint<K>) -> Option<[K; 3]> {
        let coords = p.coords();
        for (j, c) in coords.iter().enumerate() {
            if !self.plane_vars.contains(&j) && !c.is_zero() {
                return None;
            }
        }
        Some([
            coords[self.plane_vars[0]].clone(),
            coords[self.plane_vars[1]].clone(),
            coords[self.plane_vars[2]].clone(),
        ])
    }

    /// Exact membership test in P^5.
    pub fn contains(&self, p: &ProjPoint<K>) -> bool {
        match self.plane_coords(p) {
            None => false,
            Some(w) => self
                .plane_cubic
                .eval(&w)
                .map(|v| v.is_zero())
                .unwrap_or(false),
        }
    }

    /// Projection from the cusp, the inverse of the normalization on the
    /// smooth locus: `(w0 - a*w1 : w2)`. The cusp itself maps to `(0 : 1)`,
    /// its parameter on the normalization.
    pub fn cusp_projection(&self, p: &ProjPoint<K>) -> Result<(K, K), SceneError> {
        let w = self.plane_coords(p).ok_or_else(|| {
            SceneError::IdentityCheckFailed(format!("point {p} off the plane of C{}", self.index))
        })?;
        let a = &self.tangency.0;
        let s = w[0].sub(&a.mul(&w[1]));
        let t = w[2].clone();
        if s.is_zero() && t.is_zero() {
            if *p == self.cusp {
                return Ok((s.zero_like(), s.one_like()));
            }
            return Err(SceneError::IdentityCheckFailed(format!(
                "cusp projection undefined at {p}"
            )));
        }
        Ok((s, t))
    }
}

/// The labelled triple on `C1 \cap C2`, fixed by the stored cube root.
#[derive(Debug, Clone)]
pub struct LabeledTriple<K: Field> {
    /// Parameters `(u_inf, u_plus, u_minus) = (u0, u0*zeta, u0*zeta^2)` as
    /// projective pairs on the curve the triple was derived for.
    pub u_inf: (K, K),
    pub u_plus: (K, K),
    pub u_minus: (K, K),
    /// The corresponding ambient points (shared by both curves).
    pub p_inf: ProjPoint<K>,
    pub p_plus: ProjPoint<K>,
    pub p_minus: ProjPoint<K>,
}

/// A fully validated parameter scene.
#[derive(Debug, Clone)]
pub struct Scene<K: Field> {
    params: SceneParams<K>,
    f: MultiPoly<K>,
    q_quadric: MultiPoly<K>,
    s_cubic: MultiPoly<K>,
    y_sym: MultiPoly<K>,
    w_sym: MultiPoly<K>,
    y_numeric: Option<MultiPoly<K>>,
    w_numeric: Option<MultiPoly<K>>,
    p0: ProjPoint<K>,
    curves: [CuspidalCurve<K>; 2],
    zeta: K,
    u0: K,
    u0_prime: K,
}

/// `c * (w0 - a*w1)^2 * (w0 - b*w1)` as a binary cubic in `(w0, w1)`.
fn branch_cubic<K: Field>(a: &K, b: &K, c: &K) -> BinaryForm<K> {
    let one = a.one_like();
    let w0 = MultiPoly::var(2, 0, one.clone());
    let w1 = MultiPoly::var(2, 1, one);
    let l = w0.sub(&w1.scale(a));
    let m = w0.sub(&w1.scale(b));
    BinaryForm::from_poly(&l.mul(&l).mul(&m).scale(c)).expect("homogeneous by construction")
}

/// Embeds a binary form in `(x_i, x_j)` into an `n`-variable polynomial.
fn binary_to_vars<K: Field>(form: &BinaryForm<K>, n: usize, vi: usize, vj: usize) -> MultiPoly<K> {
    let d = form.degree();
    MultiPoly::from_terms(
        n,
        form.coeffs().iter().enumerate().filter_map(|(k, c)| {
            if c.is_zero() {
                return None;
            }
            let mut e = vec![0u8; n];
            e[vi] = (d - k) as u8;
            e[vj] = k as u8;
            Some((e, c.clone()))
        }),
    )
}

fn build_curve<K: Field>(
    index: u8,
    tangency: &(K, K, K),
) -> Result<CuspidalCurve<K>, SceneError> {
    let (a, b, c) = tangency;
    let one = a.one_like();
    let plane_vars = if index == 1 { [2, 3, 4] } else { [1, 3, 4] };
    let branch = branch_cubic(a, b, c);
    // Normalization: w0 = c*b*u0^3 - a*u1^3, w1 = c*u0^3 - u1^3,
    // w2 = c*(b-a)*u0^2*u1. Then w2^3 = G(w0, w1) identically.
    let zero = a.zero_like();
    let cb = c.mul(b);
    let x_w0 = BinaryForm::new(vec![cb, zero.clone(), zero.clone(), a.neg()]);
    let x_w1 = BinaryForm::new(vec![c.clone(), zero.clone(), zero.clone(), one.neg()]);
    let cba = c.mul(&b.sub(a));
    let x_w2 = BinaryForm::new(vec![zero.clone(), cba, zero.clone(), zero.clone()]);
    let param = [x_w0, x_w1, x_w2];
    // Plane cubic w2^3 - G(w0, w1) in plane coordinates (w0, w1, w2).
    let g_in_plane = binary_to_vars(&branch, 3, 0, 1);
    let w2cube = MultiPoly::monomial(3, &[0, 0, 3], one.clone());
    let plane_cubic = w2cube.sub(&g_in_plane);
    // Identity check: the parametrization satisfies the plane cubic.
    let subs: Vec<MultiPoly<K>> = param.iter().map(|f| f.to_poly()).collect();
    if !plane_cubic.compose(&subs)?.is_zero() {
        return Err(SceneError::IdentityCheckFailed(format!(
            "normalization of C{index} misses its plane cubic"
        )));
    }
    // Cusp = image of (0 : 1) = [a : 1 : 0], the point over the double
    // root of the branch cubic.
    match double_root(&branch)? {
        CubicShape::DoubleRoot { root, .. } => {
            let cross = root.0.mul(&one).sub(&root.1.mul(a));
            if !cross.is_zero() {
                return Err(SceneError::IdentityCheckFailed(format!(
                    "double root of G{index} is not at (a : 1)"
                )));
            }
        }
        CubicShape::Squarefree => {
            return Err(SceneError::IdentityCheckFailed(format!(
                "branch cubic G{index} is squarefree"
            )))
        }
    }
    let mut cusp_coords = vec![zero.clone(); 6];
    cusp_coords[plane_vars[0]] = a.clone();
    cusp_coords[plane_vars[1]] = one.clone();
    let cusp = ProjPoint::new(cusp_coords).expect("a != 0");
    // Projection-from-cusp inverts the normalization: check the symbolic
    // identity (w0(u) - a*w1(u)) * u1 - w2(u) * u0 = 0 up to the common
    // factor u0^2, i.e. cross-multiplied equality of binary forms.
    let s_form = param[0].to_poly().sub(&param[1].to_poly().scale(a));
    let u0v = MultiPoly::var(2, 0, one.clone());
    let u1v = MultiPoly::var(2, 1, one.clone());
    let cross = s_form.mul(&u1v).sub(&param[2].to_poly().mul(&u0v));
    if !cross.is_zero() {
        return Err(SceneError::IdentityCheckFailed(format!(
            "cusp projection does not invert the normalization of C{index}"
        )));
    }
    Ok(CuspidalCurve {
        index,
        plane_vars,
        tangency: tangency.clone(),
        branch,
        param,
        plane_cubic,
        cusp,
    })
}

/// Constructs and fully validates a scene.
pub fn build_scene<K: Field>(params: SceneParams<K>) -> Result<Scene<K>, SceneError> {
    build_scene_with(params, None, None)
}

/// Variant with explicit designated cube root and zeta, used by
/// specialization and file loading so labellings stay consistent.
pub fn build_scene_with<K: Field>(
    params: SceneParams<K>,
    designated_u0: Option<K>,
    zeta: Option<K>,
) -> Result<Scene<K>, SceneError> {
    let (a, b, c) = params.tangency1.clone();
    let (ap, bp, cp) = params.tangency2.clone();
    for v in [&a, &b, &c, &ap, &bp, &cp] {
        if v.is_zero() {
            return Err(SceneError::ZeroTangencyParameter);
        }
    }
    if a == b || ap == bp {
        return Err(SceneError::TripleRootTangency);
    }
    // Shared x3^3 coefficient: -a^2*b*c = -a'^2*b'*c'.
    let shared1 = a.mul(&a).mul(&b).mul(&c).neg();
    let shared2 = ap.mul(&ap).mul(&bp).mul(&cp).neg();
    if shared1 != shared2 {
        return Err(SceneError::SharedCoefficientMismatch);
    }
    let one = a.one_like();
    let zeta = match zeta {
        Some(z) => {
            let rel = z.mul(&z).add(&z).add(&one);
            if !rel.is_zero() || z.is_one() {
                return Err(SceneError::BadDesignatedData);
            }
            z
        }
        None => a.omega().ok_or(SceneError::MissingZeta)?,
    };
    // Designated cube root u0 of c*b/a; prefer a stored/rational choice.
    let target = c.mul(&b).div(&a)?;
    let u0 = match designated_u0 {
        Some(u) => {
            if u.mul(&u).mul(&u) != target {
                return Err(SceneError::BadDesignatedData);
            }
            u
        }
        None => {
            let mut roots = target.cube_roots();
            if roots.is_empty() {
                return Err(SceneError::MissingCubeRoot);
            }
            roots.sort();
            pick_designated_root(roots)
        }
    };
    // Matching root for the second curve: a*u0 = a'*u0'.
    let u0_prime = a.mul(&u0).div(&ap)?;
    let target2 = cp.mul(&bp).div(&ap)?;
    if u0_prime.mul(&u0_prime).mul(&u0_prime) != target2 {
        return Err(SceneError::MissingCubeRoot);
    }

    let curves = [
        build_curve(1, &params.tangency1)?,
        build_curve(2, &params.tangency2)?,
    ];

    // F = G1(x2,x3) + G2(x1,x3) + a^2*b*c * x3^3 + free part.
    let g1 = binary_to_vars(&curves[0].branch, 6, 2, 3);
    let g2 = binary_to_vars(&curves[1].branch, 6, 1, 3);
    let x3cube = MultiPoly::monomial(6, &[0, 0, 0, 3, 0, 0], shared1.neg());
    let mut f = g1.add(&g2).add(&x3cube);
    for (exps, coeff) in &params.free_coeffs {
        assert!(
            FREE_MONOMIALS.contains(exps),
            "coefficient for non-free monomial {exps:?}"
        );
        let e6 = [exps[0] as usize, exps[1] as usize, exps[2] as usize, exps[3] as usize, 0, 0];
        f = f.add(&MultiPoly::monomial(6, &e6, coeff.clone()));
    }

    // Restriction identities F|_{R1} = G1, F|_{R2} = G2.
    let zero = one.zero_like();
    let restrict = |kill: [usize; 2]| -> MultiPoly<K> {
        let rows: Vec<Vec<K>> = (0..6)
            .map(|i| {
                let mut row = vec![zero.clone(); 6];
                if !kill.contains(&i) {
                    row[i] = one.clone();
                }
                row
            })
            .collect();
        f.substitute_linear(&rows).expect("square substitution")
    };
    if restrict([0, 1]) != g1 {
        return Err(SceneError::IdentityCheckFailed("F|_{R1} != G1".into()));
    }
    if restrict([0, 2]) != g2 {
        return Err(SceneError::IdentityCheckFailed("F|_{R2} != G2".into()));
    }
    // B misses [0,0,0,1]: the x3^3 coefficient of F is -a^2*b*c != 0.
    let f_at_e3 = f.eval(&[
        zero.clone(),
        zero.clone(),
        zero.clone(),
        one.clone(),
        zero.clone(),
        zero.clone(),
    ])?;
    if f_at_e3.is_zero() {
        return Err(SceneError::IdentityCheckFailed(
            "branch curve passes through [0,0,0,1]".into(),
        ));
    }

    // Q, S, Y, W.
    let q_quadric = MultiPoly::monomial(6, &[1, 0, 0, 1, 0, 0], one.clone()).sub(
        &MultiPoly::monomial(6, &[0, 1, 1, 0, 0, 0], one.clone()),
    );
    let x4cube = MultiPoly::monomial(6, &[0, 0, 0, 0, 3, 0], one.clone());
    let s_cubic = x4cube.sub(&f);
    let f7 = pad_vars(&f, 7);
    let q7 = pad_vars(&q_quadric, 7);
    let x4cube7 = pad_vars(&x4cube, 7);
    let x5_7 = MultiPoly::var(7, 5, one.clone());
    let t7 = MultiPoly::var(7, 6, one.clone());
    let x0_7 = MultiPoly::var(7, 0, one.clone());
    let deform = t7.mul(&x0_7).mul(&x5_7).mul(&x5_7);
    let y_sym = x4cube7.sub(&f7).add(&x5_7.mul(&q7)).add(&deform);
    let w_sym = f7.sub(&x5_7.mul(&q7)).sub(&deform);

    let (y_numeric, w_numeric) = match &params.t {
        TParam::Symbolic => (None, None),
        TParam::Value(tv) => (
            Some(substitute_last_var(&y_sym, tv)),
            Some(substitute_last_var(&w_sym, tv)),
        ),
    };

    let mut p0_coords = vec![zero.clone(); 6];
    p0_coords[5] = one.clone();
    let p0 = ProjPoint::new(p0_coords).expect("nonzero");

    let scene = Scene {
        params,
        f,
        q_quadric,
        s_cubic,
        y_sym,
        w_sym,
        y_numeric,
        w_numeric,
        p0,
        curves,
        zeta,
        u0,
        u0_prime,
    };
    scene.validate_curve_identities()?;
    scene.label_triple(1)?;
    scene.label_triple(2)?;
    Ok(scene)
}

/// Prefers a root in the prime subfield (rational over Q(w)), falling back
/// to the smallest in the canonical order. Input is sorted.
fn pick_designated_root<K: Field>(roots: Vec<K>) -> K {
    roots
        .iter()
        .find(|r| r.in_prime_subfield())
        .unwrap_or(&roots[0])
        .clone()
}

impl<K: Field> Scene<K> {
    pub fn params(&self) -> &SceneParams<K> {
        &self.params
    }

    /// The cubic form `F(x0..x3)` as a 6-variable polynomial.
    pub fn f(&self) -> &MultiPoly<K> {
        &self.f
    }

    /// `x0*x3 - x1*x2`.
    pub fn q_quadric(&self) -> &MultiPoly<K> {
        &self.q_quadric
    }

    /// `x4^3 - F`, the cubic of the triple cover; `S = {s_cubic = 0, Q = 0}`
    /// inside `x5 = 0`.
    pub fn s_cubic(&self) -> &MultiPoly<K> {
        &self.s_cubic
    }

    /// The fourfold equation with symbolic `t` (7 variables, `t` last).
    pub fn y_sym(&self) -> &MultiPoly<K> {
        &self.y_sym
    }

    /// The branch threefold equation with symbolic `t`.
    pub fn w_sym(&self) -> &MultiPoly<K> {
        &self.w_sym
    }

    /// The fourfold equation at the scene's numeric `t`.
    pub fn y(&self) -> Result<&MultiPoly<K>, SceneError> {
        self.y_numeric.as_ref().ok_or(SceneError::NumericTRequired)
    }

    /// The branch threefold equation at the scene's numeric `t`.
    pub fn w(&self) -> Result<&MultiPoly<K>, SceneError> {
        self.w_numeric.as_ref().ok_or(SceneError::NumericTRequired)
    }

    pub fn t(&self) -> &TParam<K> {
        &self.params.t
    }

    pub fn t_value(&self) -> Result<&K, SceneError> {
        match &self.params.t {
            TParam::Value(v) => Ok(v),
            TParam::Symbolic => Err(SceneError::NumericTRequired),
        }
    }

    pub fn require_nonzero_t(&self) -> Result<(), SceneError> {
        match &self.params.t {
            TParam::Symbolic => Ok(()),
            TParam::Value(v) if !v.is_zero() => Ok(()),
            TParam::Value(_) => Err(SceneError::NonzeroTRequired),
        }
    }

    /// Restricts `Y` to the image of a linear map into `P^5`: `rows` has
    /// one row per ambient variable (six rows), each of the new parameter
    /// count. Uses the numeric equation when `t` is a value; for symbolic
    /// `t` the restriction must be `t`-free (cone-type restrictions are).
    pub fn restrict_y(&self, rows: &[Vec<K>]) -> Result<MultiPoly<K>, SceneError> {
        assert_eq!(rows.len(), 6);
        match &self.params.t {
            TParam::Value(_) => Ok(self.y()?.substitute_linear(rows)?),
            TParam::Symbolic => {
                let m = rows[0].len();
                let zero = self.u0.zero_like();
                let one = self.u0.one_like();
                let mut full: Vec<Vec<K>> = rows
                    .iter()
                    .map(|r| {
                        let mut row = r.clone();
                        row.push(zero.clone());
                        row
                    })
                    .collect();
                let mut t_row = vec![zero.clone(); m + 1];
                t_row[m] = one;
                full.push(t_row);
                let restricted = self.y_sym.substitute_linear(&full)?;
                if restricted.degree_in(m).unwrap_or(0) > 0 {
                    return Err(SceneError::NumericTRequired);
                }
                Ok(substitute_last_var(&restricted, &zero))
            }
        }
    }

    /// Rebuilds the scene at a different deformation parameter.
    pub fn at_t(&self, t: TParam<K>) -> Result<Scene<K>, SceneError> {
        let mut params = self.params.clone();
        params.t = t;
        build_scene_with(params, Some(self.u0.clone()), Some(self.zeta.clone()))
    }

    pub fn p0(&self) -> &ProjPoint<K> {
        &self.p0
    }

    pub fn curve(&self, i: u8) -> &CuspidalCurve<K> {
        &self.curves[(i - 1) as usize]
    }

    pub fn zeta(&self) -> &K {
        &self.zeta
    }

    pub fn u0(&self) -> &K {
        &self.u0
    }

    pub fn u0_prime(&self) -> &K {
        &self.u0_prime
    }

    /// The designated cube root on curve `i`.
    pub fn designated_root(&self, i: u8) -> &K {
        if i == 1 {
            &self.u0
        } else {
            &self.u0_prime
        }
    }

    fn validate_curve_identities(&self) -> Result<(), SceneError> {
        let one = self.u0.one_like();
        let zero = one.zero_like();
        for curve in &self.curves {
            // The embedded normalization lies on Y for every t: compose the
            // 7-variable Y with x_j = param_j(u0, u1), x5 = 0, t = t.
            let mut subs: Vec<MultiPoly<K>> = Vec::with_capacity(7);
            for j in 0..6 {
                let form = curve
                    .plane_vars
                    .iter()
                    .position(|&v| v == j)
                    .map(|k| curve.param[k].to_poly());
                subs.push(match form {
                    Some(p) => pad_vars(&p, 3),
                    None => MultiPoly::zero(3),
                });
            }
            subs.push(MultiPoly::var(3, 2, one.clone()));
            if !self.y_sym.compose(&subs)?.is_zero() {
                return Err(SceneError::IdentityCheckFailed(format!(
                    "C{} is not on Y for symbolic t",
                    curve.index
                )));
            }
            // Branch restriction agrees with the stored branch cubic:
            // F(plane embedding of (w0, w1)) = G_i(w0, w1).
            let mut rows = Vec::with_capacity(6);
            for j in 0..6 {
                let mut row = vec![zero.clone(); 2];
                if j == curve.plane_vars[0] {
                    row[0] = one.clone();
                }
                if j == curve.plane_vars[1] {
                    row[1] = one.clone();
                }
                rows.push(row);
            }
            let restricted = self.f.substitute_linear(&rows)?;
            if restricted != curve.branch.to_poly() {
                return Err(SceneError::IdentityCheckFailed(format!(
                    "F restricted to R{} differs from G{}",
                    curve.index, curve.index
                )));
            }
        }
        Ok(())
    }

    /// The labelled triple for curve `i` (both curves name the same ambient
    /// points; this is re-verified on every call).
    pub fn label_triple(&self, i: u8) -> Result<LabeledTriple<K>, SceneError> {
        let one = self.u0.one_like();
        let u0 = self.designated_root(i).clone();
        let z = &self.zeta;
        let u_inf = (one.clone(), u0.clone());
        let u_plus = (one.clone(), u0.mul(z));
        let u_minus = (one.clone(), u0.mul(z).mul(z));
        let curve = self.curve(i);
        let p_inf = curve.point(&u_inf)?;
        let p_plus = curve.point(&u_plus)?;
        let p_minus = curve.point(&u_minus)?;
        // Distinctness and the cross-curve match.
        if p_inf == p_plus || p_plus == p_minus || p_inf == p_minus {
            return Err(SceneError::IdentityCheckFailed(
                "labelled triple is not three distinct points".into(),
            ));
        }
        let other = if i == 1 { 2 } else { 1 };
        let other_curve = self.curve(other);
        let u0o = self.designated_root(other).clone();
        let pairs = [
            (&p_inf, (one.clone(), u0o.clone())),
            (&p_plus, (one.clone(), u0o.mul(z))),
            (&p_minus, (one.clone(), u0o.mul(z).mul(z))),
        ];
        for (p, uo) in pairs {
            if *p != other_curve.point(&uo)? {
                return Err(SceneError::IdentityCheckFailed(
                    "labelled triples of the two curves disagree".into(),
                ));
            }
        }
        // All on the line x0 = x1 = x2 = x5 = 0.
        for p in [&p_inf, &p_plus, &p_minus] {
            let c = p.coords();
            if !(c[0].is_zero() && c[1].is_zero() && c[2].is_zero() && c[5].is_zero()) {
                return Err(SceneError::IdentityCheckFailed(
                    "triple point off the line x0=x1=x2=x5=0".into(),
                ));
            }
        }
        // Collinearity (rank computation, independent of the coordinate
        // shape above).
        let span = LinearSubspace::span(&[p_inf.clone(), p_plus.clone(), p_minus.clone()]);
        if span.dim() != 1 {
            return Err(SceneError::IdentityCheckFailed(
                "labelled triple not collinear".into(),
            ));
        }
        Ok(LabeledTriple {
            u_inf,
            u_plus,
            u_minus,
            p_inf,
            p_plus,
            p_minus,
        })
    }

    /// The normalized rational function on curve `i`:
    /// `div(phi_1) = p_+ - p_-`, `div(phi_2) = p_- - p_+`, and
    /// `phi_i(p_inf) = 1`.
    pub fn build_phi(&self, i: u8) -> Result<RationalFunc<K>, SceneError> {
        let triple = self.label_triple(i)?;
        let u0 = self.designated_root(i);
        let (alpha, beta) = if i == 1 {
            (triple.u_plus.1.clone(), triple.u_minus.1.clone())
        } else {
            (triple.u_minus.1.clone(), triple.u_plus.1.clone())
        };
        // mu * (u0 - alpha) / (u0 - beta) = 1.
        let mu = u0.sub(&beta).div(&u0.sub(&alpha))?;
        let phi = RationalFunc::new(mu, alpha, beta);
        debug_assert_eq!(
            phi.eval(&triple.u_inf),
            PhiValue::Finite(u0.one_like())
        );
        Ok(phi)
    }
}

impl Scene<Eis> {
    /// Reduces the whole scene modulo `q` via the canonical specialization
    /// map, preserving the designated cube roots and labelling.
    pub fn specialize(&self, q: u64) -> Result<Scene<Fp>, SceneError> {
        let m = SpecializationMap::new(q)?;
        self.specialize_via(&m)
    }

    pub fn specialize_via(&self, m: &SpecializationMap) -> Result<Scene<Fp>, SceneError> {
        let sp = |x: &Eis| m.apply(x);
        let params = SceneParams {
            tangency1: (
                sp(&self.params.tangency1.0)?,
                sp(&self.params.tangency1.1)?,
                sp(&self.params.tangency1.2)?,
            ),
            tangency2: (
                sp(&self.params.tangency2.0)?,
                sp(&self.params.tangency2.1)?,
                sp(&self.params.tangency2.2)?,
            ),
            free_coeffs: self
                .params
                .free_coeffs
                .iter()
                .map(|(k, v)| Ok((*k, sp(v)?)))
                .collect::<Result<_, FieldError>>()?,
            t: match &self.params.t {
                TParam::Symbolic => TParam::Symbolic,
                TParam::Value(v) => TParam::Value(sp(v)?),
            },
            seed: self.params.seed,
        };
        build_scene_with(params, Some(sp(&self.u0)?), Some(m.omega()))
    }
}

#[cfg(test)]
mod tests;
