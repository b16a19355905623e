//! Homogeneous forms in two variables: restriction targets for curves and
//! lines, with exact gcd, double-root detection for branch cubics, and root
//! extraction.

use crate::field::Field;

use super::{MultiPoly, PolyError};

/// Homogeneous binary form `sum_i c[i] * s^(d-i) * t^i` of degree
/// `d = c.len() - 1`. Roots are projective pairs `(s : t)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryForm<K: Field> {
    c: Vec<K>,
}

impl<K: Field> BinaryForm<K> {
    pub fn new(coeffs: Vec<K>) -> Self {
        assert!(!coeffs.is_empty());
        BinaryForm { c: coeffs }
    }

    /// Interprets a two-variable polynomial (var 0 = s, var 1 = t) as a
    /// binary form. The zero polynomial maps to the empty-coefficient zero
    /// form (no field context is available for it).
    pub fn from_poly(p: &MultiPoly<K>) -> Result<Self, PolyError> {
        assert_eq!(p.nvars(), 2);
        let Some((_, first)) = p.terms().next() else {
            return Ok(BinaryForm { c: vec![] });
        };
        let one = first.one_like();
        if !p.is_homogeneous() {
            return Err(PolyError::ShapeMismatch(
                "restriction is not homogeneous".into(),
            ));
        }
        let d = p.degree().unwrap();
        let zero = one.zero_like();
        let mut c = vec![zero; d + 1];
        for (m, k) in p.terms() {
            c[m.exps()[1] as usize] = k.clone();
        }
        Ok(BinaryForm { c })
    }

    pub fn coeffs(&self) -> &[K] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, s: &K, t: &K) -> K {
        let zero = s.zero_like();
        let mut acc = zero;
        let d = self.degree();
        for (i, c) in self.c.iter().enumerate() {
            let mut term = c.clone();
            for _ in 0..(d - i) {
                term = term.mul(s);
            }
            for _ in 0..i {
                term = term.mul(t);
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn derivative_s(&self) -> Self {
        // d/ds of c[i] s^(d-i) t^i -> (d-i) c[i] s^(d-i-1) t^i.
        let d = self.degree();
        if d == 0 {
            return BinaryForm {
                c: vec![self.c[0].zero_like()],
            };
        }
        let c = (0..d)
            .map(|i| self.c[i].mul(&self.c[i].embed_int((d - i) as i64)))
            .collect();
        BinaryForm { c }
    }

    pub fn derivative_t(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm {
                c: vec![self.c[0].zero_like()],
            };
        }
        let c = (1..=d)
            .map(|i| self.c[i].mul(&self.c[i].embed_int(i as i64)))
            .collect();
        BinaryForm { c }
    }

    /// Splits into the multiplicity of the root `(0 : 1)` and the
    /// dehomogenized univariate polynomial in `t` (coefficient of `t^i`
    /// at index `i`).
    fn univariate(&self) -> (usize, Vec<K>) {
        let mut top = self.c.len();
        while top > 0 && self.c[top - 1].is_zero() {
            top -= 1;
        }
        // Trailing zero coefficients c[d], c[d-1], ... are roots at (0:1).
        let inf_mult = self.c.len() - top;
        (inf_mult, self.c[..top].to_vec())
    }

    fn from_univariate(inf_mult: usize, mut u: Vec<K>, zero: K) -> Self {
        for _ in 0..inf_mult {
            u.push(zero.clone());
        }
        BinaryForm { c: u }
    }

    /// Monic gcd of two binary forms (zero form when both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone().make_monic();
        }
        if other.is_zero() {
            return self.clone().make_monic();
        }
        let (m1, u1) = self.univariate();
        let (m2, u2) = other.univariate();
        let g = univ_gcd::<K>(u1, u2);
        let zero = self.c[0].zero_like();
        BinaryForm::from_univariate(m1.min(m2), g, zero).make_monic()
    }

    fn make_monic(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let lead = self
            .c
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .unwrap()
            .clone();
        let inv = lead.inv().expect("nonzero leading coefficient");
        BinaryForm {
            c: self.c.iter().map(|c| c.mul(&inv)).collect(),
        }
    }

    /// All distinct projective roots `(s : t)`.
    ///
    /// Exact for degrees <= 2 over any field; higher degrees fall back to
    /// exhaustion and therefore need an enumerable (finite) field.
    pub fn roots(&self) -> Result<Vec<(K, K)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroForm);
        }
        let (inf_mult, u) = self.univariate();
        let one = self.c.iter().find(|c| !c.is_zero()).unwrap().one_like();
        let zero = one.zero_like();
        let mut roots: Vec<(K, K)> = Vec::new();
        if inf_mult > 0 {
            roots.push((zero.clone(), one.clone()));
        }
        let deg = u.len().saturating_sub(1);
        match deg {
            0 => {}
            1 => {
                // u0 + u1 t = 0
                let t = u[0].neg().div(&u[1]).expect("leading nonzero");
                roots.push((one.clone(), t));
            }
            2 => {
                // u0 + u1 t + u2 t^2 = 0
                let disc = u[1].mul(&u[1]).sub(&u[0].mul(&u[2]).mul(&u[0].embed_int(4)));
                let two_a = u[2].mul(&u[2].embed_int(2));
                for sq in disc.square_roots() {
                    let t = u[1].neg().add(&sq).div(&two_a).expect("a nonzero");
                    if !roots.iter().any(|(rs, rt)| rs == &one && rt == &t) {
                        roots.push((one.clone(), t));
                    }
                }
            }
            d => {
                let Some(all) = one.enumerate() else {
                    return Err(PolyError::RootSearchUnsupported(d));
                };
                for t in all {
                    let mut acc = zero.clone();
                    for c in u.iter().rev() {
                        acc = acc.mul(&t).add(c);
                    }
                    if acc.is_zero() {
                        roots.push((one.clone(), t));
                    }
                }
            }
        }
        Ok(roots)
    }

    /// Exact division by a linear form, erroring when not a factor.
    pub fn divide_exact_linear(&self, linear: &Self) -> Result<Self, PolyError> {
        assert_eq!(linear.degree(), 1);
        let p = self.to_poly();
        let l = linear.to_poly();
        BinaryForm::from_poly(&p.divide_exact(&l)?)
    }

    pub fn to_poly(&self) -> MultiPoly<K> {
        let d = self.degree();
        let mut p = MultiPoly::zero(2);
        for (i, c) in self.c.iter().enumerate() {
            p = p.add(&MultiPoly::monomial(2, &[d - i, i], c.clone()));
        }
        p
    }
}

fn univ_trim<K: Field>(u: &mut Vec<K>) {
    while u.len() > 1 && u.last().map(|c| c.is_zero()).unwrap_or(false) {
        u.pop();
    }
    if u.len() == 1 && u[0].is_zero() {
        u.clear();
    }
}

/// Monic gcd of two univariate polynomials (coefficient of t^i at index i).
fn univ_gcd<K: Field>(mut a: Vec<K>, mut b: Vec<K>) -> Vec<K> {
    univ_trim(&mut a);
    univ_trim(&mut b);
    while !b.is_empty() {
        let r = univ_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        let inv = lead.inv().expect("nonzero lead");
        for c in &mut a {
            *c = c.mul(&inv);
        }
    }
    a
}

fn univ_rem<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = b.last().unwrap().inv().expect("nonzero divisor");
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - 1 - db;
        let factor = r.last().unwrap().mul(&lead_inv);
        for (i, bc) in b.iter().enumerate() {
            let sub = bc.mul(&factor);
            r[k + i] = r[k + i].sub(&sub);
        }
        univ_trim(&mut r);
        if r.iter().all(|c| c.is_zero()) {
            r.clear();
        }
    }
    r
}

/// Outcome of double-root analysis of a nonzero binary cubic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubicShape<K: Field> {
    /// Squarefree: no repeated root.
    Squarefree,
    /// `c * l^2 * m`: the double root and the residual linear factor.
    DoubleRoot { root: (K, K), cofactor: BinaryForm<K> },
}

/// Detects the double root of a binary cubic via `gcd(dg/ds, dg/dt)`.
///
/// A triple root is reported as [`PolyError::TripleRoot`]; scenes must
/// reject that tangency degeneracy.
pub fn double_root<K: Field>(g: &BinaryForm<K>) -> Result<CubicShape<K>, PolyError> {
    if g.is_zero() {
        return Err(PolyError::ZeroForm);
    }
    assert_eq!(g.degree(), 3, "double_root expects a binary cubic");
    let d = g.derivative_s().gcd(&g.derivative_t());
    match d.degree() {
        0 => Ok(CubicShape::Squarefree),
        1 => {
            // d = c0 s + c1 t vanishes at (c1 : -c0).
            let root = (d.c[1].clone(), d.c[0].neg());
            let cofactor = g.divide_exact_linear(&d)?.divide_exact_linear(&d)?;
            debug_assert_eq!(cofactor.degree(), 1);
            Ok(CubicShape::DoubleRoot { root, cofactor })
        }
        _ => Err(PolyError::TripleRoot),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Eis, Fp};
    use crate::poly::MultiPoly;

    fn e(n: i64) -> Eis {
        Eis::from_int(n)
    }

    /// (s - a t)^2 (s - b t), scaled by c.
    fn tangency_cubic(a: i64, b: i64, c: i64) -> BinaryForm<Eis> {
        let s = MultiPoly::var(2, 0, e(1));
        let t = MultiPoly::var(2, 1, e(1));
        let l = s.sub(&t.scale(&e(a)));
        let m = s.sub(&t.scale(&e(b)));
        BinaryForm::from_poly(&l.pow(2).mul(&m).scale(&e(c))).unwrap()
    }

    #[test]
    fn double_root_of_branch_cubic() {
        let g = tangency_cubic(1, 8, 1);
        match double_root(&g).unwrap() {
            CubicShape::DoubleRoot { root, cofactor } => {
                // root (1 : 1), cofactor proportional to s - 8t
                let (rs, rt) = root;
                assert_eq!(rs.mul(&e(1)), rt);
                assert!(cofactor.eval(&e(8), &e(1)).is_zero());
            }
            other => panic!("expected double root, got {other:?}"),
        }
    }

    #[test]
    fn squarefree_cubic_has_no_double_root() {
        // s*t*(s - t)
        let s = MultiPoly::var(2, 0, e(1));
        let t = MultiPoly::var(2, 1, e(1));
        let g = BinaryForm::from_poly(&s.mul(&t).mul(&s.sub(&t))).unwrap();
        assert_eq!(double_root(&g).unwrap(), CubicShape::Squarefree);
    }

    #[test]
    fn triple_root_is_an_error() {
        let s = MultiPoly::var(2, 0, e(1));
        let g = BinaryForm::from_poly(&s.pow(3)).unwrap();
        assert!(matches!(double_root(&g), Err(PolyError::TripleRoot)));
    }

    #[test]
    fn double_root_at_s_equals_zero() {
        // s^2 * t has its double root where s vanishes, at (0 : 1).
        let s = MultiPoly::var(2, 0, e(1));
        let t = MultiPoly::var(2, 1, e(1));
        let g = BinaryForm::from_poly(&s.pow(2).mul(&t)).unwrap();
        match double_root(&g).unwrap() {
            CubicShape::DoubleRoot { root, cofactor } => {
                assert!(root.0.is_zero());
                assert!(!root.1.is_zero());
                assert!(cofactor.eval(&e(1), &e(0)).is_zero());
            }
            other => panic!("expected double root, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_roots_over_f13() {
        // (t - 2s)(t - 5s) = 10 s^2 - 7 s t + t^2
        let q = 13;
        let f = |n: i128| Fp::new(n, q).unwrap();
        let form = BinaryForm::new(vec![f(10), f(-7), f(1)]);
        let mut roots = form.roots().unwrap();
        roots.sort();
        assert_eq!(roots.len(), 2);
        for (s, t) in &roots {
            assert!(form.eval(s, t).is_zero());
        }
    }

    #[test]
    fn double_root_classification_matches_factorization_over_f13() {
        use rand::{Rng, SeedableRng};
        let q = 13u64;
        let f = |n: u64| Fp::new(n as i128, q).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 200 {
            let coeffs: Vec<Fp> = (0..4).map(|_| f(rng.gen_range(0..q))).collect();
            let g = BinaryForm::new(coeffs);
            if g.is_zero() {
                continue;
            }
            // Oracle: root multiset over P^1(F_13) by repeated division.
            let mut mults = Vec::new();
            let mut pts: Vec<(Fp, Fp)> = (0..q).map(|t| (f(1), f(t))).collect();
            pts.push((f(0), f(1)));
            for (s, t) in pts {
                let mut h = g.clone();
                let mut m = 0;
                // linear form vanishing at (s:t): t*S - s*T ... i.e. c0 = t, c1 = -s
                let lin = BinaryForm::new(vec![t, s.neg()]);
                debug_assert!(lin.eval(&s, &t).is_zero());
                while h.degree() >= 1 && h.eval(&s, &t).is_zero() {
                    h = h.divide_exact_linear(&lin).unwrap();
                    m += 1;
                }
                if m > 0 {
                    mults.push(m);
                }
            }
            mults.sort_unstable();
            let verdict = double_root(&g);
            match mults.as_slice() {
                [3] => assert!(matches!(verdict, Err(PolyError::TripleRoot))),
                m if m.contains(&2) => {
                    assert!(matches!(verdict, Ok(CubicShape::DoubleRoot { .. })))
                }
                _ => assert_eq!(verdict.unwrap(), CubicShape::Squarefree),
            }
            checked += 1;
        }
    }

    #[test]
    fn gcd_of_shared_factor() {
        let s = MultiPoly::var(2, 0, e(1));
        let t = MultiPoly::var(2, 1, e(1));
        let common = s.sub(&t.scale(&e(4)));
        let a = BinaryForm::from_poly(&common.mul(&s.add(&t))).unwrap();
        let b = BinaryForm::from_poly(&common.mul(&s.sub(&t))).unwrap();
        let g = a.gcd(&b);
        assert_eq!(g.degree(), 1);
        assert!(g.eval(&e(4), &e(1)).is_zero());
    }
}
