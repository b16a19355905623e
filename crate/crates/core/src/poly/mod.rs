//! Sparse multivariate polynomial arithmetic over an exact field:
//! evaluation, substitution, coefficient collection, exact division, and
//! the binary-form routines (gcd, double-root detection) behind tangency
//! checks.
//!
//! Terms are keyed by exponent vectors under the graded-lexicographic
//! order; zero coefficients are never stored, so structural equality is
//! canonical equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::Field;

mod binary;

pub use binary::{double_root, BinaryForm, CubicShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("substitution shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("variable index {0} out of range for {1} variables")]
    VariableOutOfRange(usize, usize),
    #[error("division is not exact")]
    NonExactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("binary form has a triple root")]
    TripleRoot,
    #[error("operation requires a nonzero form")]
    ZeroForm,
    #[error("root search of degree {0} needs an enumerable field")]
    RootSearchUnsupported(usize),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Exponent vector under graded-lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mono(Vec<u8>);

impl Mono {
    pub fn new(exps: Vec<u8>) -> Self {
        Mono(exps)
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn total_degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, other: &Mono) -> Mono {
        Mono(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    fn product(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sparse multivariate polynomial over the field `K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<K: Field> {
    nvars: usize,
    terms: BTreeMap<Mono, K>,
}

impl<K: Field> MultiPoly<K> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "polynomials need at least one variable");
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; nvars]), c);
        }
        p
    }

    pub fn monomial(nvars: usize, exps: &[usize], c: K) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms
                .insert(Mono(exps.iter().map(|&e| e as u8).collect()), c);
        }
        p
    }

    /// The variable `x_i` as a polynomial.
    pub fn var(nvars: usize, i: usize, one: K) -> Self {
        let mut exps = vec![0usize; nvars];
        exps[i] = 1;
        Self::monomial(nvars, &exps, one)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u8>, K)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Mono(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u8]) -> Option<&K> {
        self.terms.get(&Mono(exps.to_vec()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<usize> {
        self.terms.keys().map(|m| m.0[var] as usize).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Homogeneous when grading only the listed variables.
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let part_deg =
            |m: &Mono| -> usize { vars.iter().map(|&v| m.0[v] as usize).sum() };
        let mut degs = self.terms.keys().map(part_deg);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Mono, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.product(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc: Option<Self> = None;
        for _ in 0..e {
            acc = Some(match acc {
                None => self.clone(),
                Some(a) => a.mul(self),
            });
        }
        match acc {
            Some(a) => a,
            None => {
                // x^0 = 1; need a one. Take it from any coefficient, or
                // declare the empty product of the zero polynomial undefined.
                let one = self
                    .terms
                    .values()
                    .next()
                    .map(|c| c.one_like())
                    .expect("pow(0) of the zero polynomial has no field context");
                Self::constant(self.nvars, one)
            }
        }
    }

    pub fn eval(&self, point: &[K]) -> Result<K, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = point[0].zero_like();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitutes `x_i := subs[i]`, a polynomial in a fresh variable set.
    pub fn compose(&self, subs: &[MultiPoly<K>]) -> Result<MultiPoly<K>, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::ShapeMismatch(format!(
                "{} substitution polynomials for {} variables",
                subs.len(),
                self.nvars
            )));
        }
        let m = subs
            .first()
            .map(|s| s.nvars)
            .ok_or_else(|| PolyError::ShapeMismatch("empty substitution".into()))?;
        if subs.iter().any(|s| s.nvars != m) {
            return Err(PolyError::ShapeMismatch(
                "substitution polynomials disagree on variable count".into(),
            ));
        }
        // Memoized powers per substituted variable.
        let mut powers: Vec<Vec<MultiPoly<K>>> = subs.iter().map(|s| vec![s.clone()]).collect();
        let power = |i: usize, e: usize, powers: &mut Vec<Vec<MultiPoly<K>>>| {
            while powers[i].len() < e {
                let next = powers[i].last().unwrap().mul(&subs[i]);
                powers[i].push(next);
            }
            powers[i][e - 1].clone()
        };
        let mut out = MultiPoly::zero(m);
        for (mono, c) in &self.terms {
            let mut term = MultiPoly::constant(m, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&power(i, e as usize, &mut powers));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Linear substitution `x_i := sum_j matrix[i][j] * y_j`.
    ///
    /// `matrix` has one row per old variable; all rows share the new
    /// variable count.
    pub fn substitute_linear(&self, matrix: &[Vec<K>]) -> Result<MultiPoly<K>, PolyError> {
        if matrix.len() != self.nvars {
            return Err(PolyError::ShapeMismatch(format!(
                "{} rows for {} variables",
                matrix.len(),
                self.nvars
            )));
        }
        let m = matrix
            .first()
            .map(|r| r.len())
            .ok_or_else(|| PolyError::ShapeMismatch("empty matrix".into()))?;
        if m == 0 || matrix.iter().any(|r| r.len() != m) {
            return Err(PolyError::ShapeMismatch("ragged matrix".into()));
        }
        let subs: Vec<MultiPoly<K>> = matrix
            .iter()
            .map(|row| {
                let mut p = MultiPoly::zero(m);
                for (j, c) in row.iter().enumerate() {
                    let mut e = vec![0u8; m];
                    e[j] = 1;
                    p.add_term(Mono(e), c.clone());
                }
                p
            })
            .collect();
        self.compose(&subs)
    }

    /// Coefficients `c_k` with `f = sum_k c_k * var^k`, each free of `var`.
    pub fn collect(&self, var: usize) -> Result<Vec<MultiPoly<K>>, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange(var, self.nvars));
        }
        let top = self.degree_in(var).unwrap_or(0);
        let mut out = vec![MultiPoly::zero(self.nvars); top + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            out[k].add_term(Mono(e), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / g`; errors when the division is not exact.
    pub fn divide_exact(&self, g: &Self) -> Result<Self, PolyError> {
        assert_eq!(self.nvars, g.nvars);
        if g.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        let (lm_g, lc_g) = {
            let (m, c) = g.terms.iter().next_back().expect("nonzero");
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((lm_r, lc_r)) = rem
            .terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            if !lm_g.divides(&lm_r) {
                return Err(PolyError::NonExactDivision);
            }
            let m = lm_g.quotient(&lm_r);
            let c = lc_r.div(&lc_g).expect("leading coefficient nonzero");
            let t = {
                let mut t = Self::zero(self.nvars);
                t.terms.insert(m, c);
                t
            };
            rem = rem.sub(&t.mul(g));
            quot = quot.add(&t);
        }
        Ok(quot)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            out.add_term(Mono(exps), c.mul(&c.embed_int(e as i64)));
        }
        out
    }

    /// Gradient as one polynomial per variable.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|v| self.derivative(v)).collect()
    }

    /// Applies a coefficient map, dropping coefficients that map to zero.
    pub fn try_map_coeffs<L: Field, E>(
        &self,
        mut f: impl FnMut(&K) -> Result<L, E>,
    ) -> Result<MultiPoly<L>, E> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let img = f(c)?;
            if !img.is_zero() {
                terms.insert(m.clone(), img);
            }
        }
        Ok(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Restriction to a parametrized line: `x_i := s*p[i] + t*q[i]`,
    /// returned as a binary form in `(s, t)`.
    pub fn restrict_to_line(&self, p: &[K], q: &[K]) -> Result<BinaryForm<K>, PolyError> {
        if p.len() != self.nvars || q.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got: p.len().min(q.len()),
            });
        }
        let matrix: Vec<Vec<K>> = p
            .iter()
            .zip(q)
            .map(|(a, b)| vec![a.clone(), b.clone()])
            .collect();
        let restricted = self.substitute_linear(&matrix)?;
        BinaryForm::from_poly(&restricted)
    }

    /// Canonical text form: `(coeff)*x0^e0*...` terms joined by ` + `.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut s = format!("({})", c.encode());
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => s.push_str(&format!("*x{}", i)),
                    _ => s.push_str(&format!("*x{}^{}", i, e)),
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

/// Parses the canonical text form produced by [`MultiPoly::to_text`].
///
/// `decode` turns the scalar encoding back into a field element (this keeps
/// the polynomial grammar independent of the coefficient field).
pub fn parse_poly<K: Field>(
    nvars: usize,
    text: &str,
    decode: impl Fn(&str) -> Result<K, String>,
) -> Result<MultiPoly<K>, PolyError> {
    let text = text.trim();
    if text == "0" {
        return Ok(MultiPoly::zero(nvars));
    }
    let mut out = MultiPoly::zero(nvars);
    for term in text.split(" + ") {
        let term = term.trim();
        let rest = term
            .strip_prefix('(')
            .ok_or_else(|| PolyError::Parse(format!("term {term:?} lacks (coeff)")))?;
        let close = rest
            .find(')')
            .ok_or_else(|| PolyError::Parse(format!("term {term:?} lacks )")))?;
        let coeff = decode(&rest[..close]).map_err(PolyError::Parse)?;
        let mut exps = vec![0u8; nvars];
        let factors = &rest[close + 1..];
        if !factors.is_empty() {
            for factor in factors.split('*').skip(1) {
                let factor = factor.trim();
                let body = factor
                    .strip_prefix('x')
                    .ok_or_else(|| PolyError::Parse(format!("bad factor {factor:?}")))?;
                let (idx, exp) = match body.split_once('^') {
                    Some((i, e)) => (
                        i.parse::<usize>()
                            .map_err(|_| PolyError::Parse(factor.into()))?,
                        e.parse::<u8>()
                            .map_err(|_| PolyError::Parse(factor.into()))?,
                    ),
                    None => (
                        body.parse::<usize>()
                            .map_err(|_| PolyError::Parse(factor.into()))?,
                        1,
                    ),
                };
                if idx >= nvars {
                    return Err(PolyError::VariableOutOfRange(idx, nvars));
                }
                exps[idx] += exp;
            }
        }
        out.add_term(Mono(exps), coeff);
    }
    Ok(out)
}

impl<K: Field> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl<K: Field> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Lifts an `n`-variable polynomial into `m >= n` variables (same exponent
/// layout, trailing zeros).
pub fn pad_vars<K: Field>(p: &MultiPoly<K>, m: usize) -> MultiPoly<K> {
    assert!(m >= p.nvars());
    MultiPoly::from_terms(
        m,
        p.terms().map(|(mono, c)| {
            let mut e = mono.exps().to_vec();
            e.resize(m, 0);
            (e, c.clone())
        }),
    )
}

/// Substitutes a constant for the last variable, dropping it.
pub fn substitute_last_var<K: Field>(p: &MultiPoly<K>, value: &K) -> MultiPoly<K> {
    let n = p.nvars();
    assert!(n >= 2);
    MultiPoly::from_terms(
        n - 1,
        p.terms().map(|(mono, c)| {
            let e = mono.exps();
            let mut coeff = c.clone();
            for _ in 0..e[n - 1] {
                coeff = coeff.mul(value);
            }
            (e[..n - 1].to_vec(), coeff)
        }),
    )
}

/// Flat evaluation form for enumeration-heavy loops.
pub struct CompiledPoly<K: Field> {
    nvars: usize,
    terms: Vec<(K, Vec<u8>)>,
}

impl<K: Field> CompiledPoly<K> {
    pub fn new(p: &MultiPoly<K>) -> Self {
        CompiledPoly {
            nvars: p.nvars,
            terms: p
                .terms
                .iter()
                .map(|(m, c)| (c.clone(), m.0.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[K]) -> K {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = point[0].zero_like();
        for (c, exps) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}
