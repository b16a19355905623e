//! Points, lines, and linear subspaces of projective space with exact
//! incidence predicates.
//!
//! Points are stored with the first nonzero coordinate scaled to one, so
//! structural equality is projective equality. Lines additionally cache the
//! Pluecker vector in the same canonical scaling; it is the equality and
//! hash key used when enumerated line sets are compared.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::field::Field;
use crate::poly::{MultiPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("projective point needs a nonzero coordinate vector")]
    ZeroVector,
    #[error("points do not span a line")]
    DependentPoints,
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Point of projective space, canonically scaled.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint<K: Field> {
    coords: Vec<K>,
}

impl<K: Field> ProjPoint<K> {
    pub fn new(coords: Vec<K>) -> Result<Self, GeomError> {
        let pivot = coords.iter().position(|c| !c.is_zero());
        match pivot {
            None => Err(GeomError::ZeroVector),
            Some(i) => {
                let inv = coords[i].inv().expect("pivot nonzero");
                Ok(ProjPoint {
                    coords: coords.iter().map(|c| c.mul(&inv)).collect(),
                })
            }
        }
    }

    pub fn from_ints(coords: &[i64], one: &K) -> Self {
        ProjPoint::new(coords.iter().map(|&c| one.embed_int(c)).collect())
            .expect("nonzero integer vector")
    }

    pub fn coords(&self) -> &[K] {
        &self.coords
    }

    /// Projective dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Drops the last coordinate (projection away from the last basis
    /// point); errors if the result is the zero vector.
    pub fn project_drop_last(&self) -> Result<Self, GeomError> {
        ProjPoint::new(self.coords[..self.coords.len() - 1].to_vec())
    }

    /// Extends with zeros to a larger ambient space.
    pub fn zero_pad(&self, ambient_len: usize) -> Self {
        let zero = self.coords[0].zero_like();
        let mut c = self.coords.clone();
        c.resize(ambient_len, zero);
        ProjPoint { coords: c }
    }
}

impl<K: Field> fmt::Display for ProjPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl<K: Field> fmt::Debug for ProjPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Line through two independent points, keyed by its Pluecker vector.
#[derive(Clone)]
pub struct ProjLine<K: Field> {
    a: ProjPoint<K>,
    b: ProjPoint<K>,
    plucker: Vec<K>,
}

impl<K: Field> ProjLine<K> {
    pub fn new(a: ProjPoint<K>, b: ProjPoint<K>) -> Result<Self, GeomError> {
        if a.coords.len() != b.coords.len() {
            return Err(GeomError::AmbientMismatch(
                a.ambient_dim(),
                b.ambient_dim(),
            ));
        }
        let raw = plucker_raw(a.coords(), b.coords());
        let pivot = raw.iter().position(|c| !c.is_zero());
        match pivot {
            None => Err(GeomError::DependentPoints),
            Some(i) => {
                let inv = raw[i].inv().expect("pivot nonzero");
                Ok(ProjLine {
                    a,
                    b,
                    plucker: raw.iter().map(|c| c.mul(&inv)).collect(),
                })
            }
        }
    }

    pub fn spanning_points(&self) -> (&ProjPoint<K>, &ProjPoint<K>) {
        (&self.a, &self.b)
    }

    /// Canonically scaled Pluecker coordinates `p_ij`, `i < j` in
    /// lexicographic order.
    pub fn plucker(&self) -> &[K] {
        &self.plucker
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.ambient_dim()
    }

    /// The point `s*a + t*b` of the line.
    pub fn point_at(&self, s: &K, t: &K) -> Result<ProjPoint<K>, GeomError> {
        let coords = self
            .a
            .coords
            .iter()
            .zip(&self.b.coords)
            .map(|(x, y)| x.mul(s).add(&y.mul(t)))
            .collect();
        ProjPoint::new(coords)
    }

    pub fn contains(&self, p: &ProjPoint<K>) -> bool {
        rank(&[
            self.a.coords.clone(),
            self.b.coords.clone(),
            p.coords.clone(),
        ]) <= 2
    }

    /// All quadratic Pluecker relations
    /// `p_ij p_kl - p_ik p_jl + p_il p_jk = 0` over 4-element index sets.
    pub fn plucker_relation_holds(&self) -> bool {
        let n = self.a.coords.len();
        let idx = |i: usize, j: usize| -> usize {
            // position of (i, j), i < j, in lex order
            let mut pos = 0;
            for r in 0..i {
                pos += n - 1 - r;
            }
            pos + (j - i - 1)
        };
        let p = &self.plucker;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for l in (k + 1)..n {
                        let lhs = p[idx(i, j)]
                            .mul(&p[idx(k, l)])
                            .sub(&p[idx(i, k)].mul(&p[idx(j, l)]))
                            .add(&p[idx(i, l)].mul(&p[idx(j, k)]));
                        if !lhs.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn plucker_raw<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let n = a.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(a[i].mul(&b[j]).sub(&a[j].mul(&b[i])));
        }
    }
    out
}

impl<K: Field> PartialEq for ProjLine<K> {
    fn eq(&self, other: &Self) -> bool {
        self.a.coords.len() == other.a.coords.len() && self.plucker == other.plucker
    }
}

impl<K: Field> Eq for ProjLine<K> {}

impl<K: Field> std::hash::Hash for ProjLine<K> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.plucker.hash(state);
    }
}

impl<K: Field> PartialOrd for ProjLine<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<K: Field> Ord for ProjLine<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.plucker.cmp(&other.plucker)
    }
}

impl<K: Field> fmt::Debug for ProjLine<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line({:?} ; {:?})", self.a, self.b)
    }
}

/// Row echelon form over an exact field; returns (reduced rows, rank).
pub fn rref<K: Field>(rows: &[Vec<K>]) -> (Vec<Vec<K>>, usize) {
    let mut m: Vec<Vec<K>> = rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    if m.is_empty() {
        return (vec![], 0);
    }
    let ncols = m[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(sel) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, sel);
        let inv = m[pivot_row][col].inv().expect("pivot nonzero");
        m[pivot_row] = m[pivot_row].iter().map(|c| c.mul(&inv)).collect();
        for r in 0..m.len() {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                m[r] = m[r]
                    .iter()
                    .zip(&m[pivot_row])
                    .map(|(a, b)| a.sub(&b.mul(&factor)))
                    .collect();
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.retain(|r| r.iter().any(|c| !c.is_zero()));
    let rank = m.len();
    (m, rank)
}

pub fn rank<K: Field>(rows: &[Vec<K>]) -> usize {
    rref(rows).1
}

/// Basis of the solution space of `rows * x = 0` (each row a linear form on
/// `ncols` coordinates).
pub fn nullspace<K: Field>(rows: &[Vec<K>], ncols: usize, one: &K) -> Vec<Vec<K>> {
    let (r, _) = rref(rows);
    let zero = one.zero_like();
    let mut pivots = Vec::new();
    for row in &r {
        let p = row.iter().position(|c| !c.is_zero()).unwrap();
        pivots.push(p);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![zero.clone(); ncols];
        v[free] = one.clone();
        for (row, &p) in r.iter().zip(&pivots) {
            // pivot coordinate = -(row . v restricted to free part)
            v[p] = row[free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Linear span of a point set, stored as reduced row space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearSubspace<K: Field> {
    basis: Vec<Vec<K>>,
    ambient_len: usize,
}

impl<K: Field> LinearSubspace<K> {
    pub fn span(points: &[ProjPoint<K>]) -> Self {
        assert!(!points.is_empty(), "span of an empty set");
        let ambient_len = points[0].coords.len();
        let rows: Vec<Vec<K>> = points.iter().map(|p| p.coords.clone()).collect();
        let (basis, _) = rref(&rows);
        LinearSubspace { basis, ambient_len }
    }

    /// Projective dimension (0 for a point, 1 for a line, ...).
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient_len
    }

    pub fn basis(&self) -> &[Vec<K>] {
        &self.basis
    }

    pub fn basis_points(&self) -> Vec<ProjPoint<K>> {
        self.basis
            .iter()
            .map(|r| ProjPoint::new(r.clone()).expect("basis rows nonzero"))
            .collect()
    }

    pub fn contains(&self, p: &ProjPoint<K>) -> bool {
        let mut rows = self.basis.clone();
        rows.push(p.coords.clone());
        rank(&rows) == self.basis.len()
    }

    /// Intersection with another subspace of the same ambient space.
    pub fn meet(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.ambient_len, other.ambient_len);
        let one = self.basis[0]
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero basis row")
            .one_like();
        // Solve for combinations of self-basis lying in other: stack the
        // orthogonality-free formulation via joint nullspace of coefficients.
        let k = self.basis.len();
        let l = other.basis.len();
        let mut rows = Vec::new();
        for coord in 0..self.ambient_len {
            let mut row = Vec::with_capacity(k + l);
            for b in &self.basis {
                row.push(b[coord].clone());
            }
            for b in &other.basis {
                row.push(b[coord].neg());
            }
            rows.push(row);
        }
        let ns = nullspace(&rows, k + l, &one);
        let mut pts = Vec::new();
        for v in ns {
            let mut coords = vec![one.zero_like(); self.ambient_len];
            for (ci, b) in v.iter().zip(&self.basis) {
                for (x, bx) in coords.iter_mut().zip(b) {
                    *x = x.add(&ci.mul(bx));
                }
            }
            if let Ok(p) = ProjPoint::new(coords) {
                pts.push(p);
            }
        }
        if pts.is_empty() {
            None
        } else {
            Some(LinearSubspace::span(&pts))
        }
    }
}

/// Result of intersecting two lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineMeet<K: Field> {
    Equal,
    Point(ProjPoint<K>),
    Skew,
}

/// The unique intersection point of coplanar distinct lines, `Equal` for
/// identical lines, `Skew` otherwise.
pub fn line_meet_line<K: Field>(l1: &ProjLine<K>, l2: &ProjLine<K>) -> LineMeet<K> {
    assert_eq!(
        l1.ambient_dim(),
        l2.ambient_dim(),
        "lines in different ambient spaces"
    );
    if l1 == l2 {
        return LineMeet::Equal;
    }
    let rows = vec![
        l1.a.coords.clone(),
        l1.b.coords.clone(),
        l2.a.coords.clone(),
        l2.b.coords.clone(),
    ];
    if rank(&rows) > 3 {
        return LineMeet::Skew;
    }
    // alpha*a1 + beta*b1 - gamma*a2 - delta*b2 = 0
    let one = l1.a.coords[0].one_like();
    let ncols = 4;
    let coeff_rows: Vec<Vec<K>> = (0..l1.a.coords.len())
        .map(|coord| {
            vec![
                l1.a.coords[coord].clone(),
                l1.b.coords[coord].clone(),
                l2.a.coords[coord].neg(),
                l2.b.coords[coord].neg(),
            ]
        })
        .collect();
    let ns = nullspace(&coeff_rows, ncols, &one);
    for v in ns {
        let coords: Vec<K> = l1
            .a
            .coords
            .iter()
            .zip(&l1.b.coords)
            .map(|(x, y)| x.mul(&v[0]).add(&y.mul(&v[1])))
            .collect();
        if let Ok(p) = ProjPoint::new(coords) {
            return LineMeet::Point(p);
        }
    }
    // Distinct coplanar lines always meet; reaching here means the rank
    // test and the nullspace disagree, which cannot happen over a field.
    unreachable!("coplanar distinct lines must intersect");
}

/// Containment of a line in the hypersurface `f = 0` by identical vanishing
/// of the restriction.
///
/// `f` may carry trailing passenger variables beyond the ambient coordinate
/// count (the symbolic deformation parameter); these are preserved as free
/// variables of the restriction.
pub fn line_in_hypersurface<K: Field>(
    f: &MultiPoly<K>,
    l: &ProjLine<K>,
) -> Result<bool, GeomError> {
    let ambient_len = l.a.coords.len();
    let extra = f
        .nvars()
        .checked_sub(ambient_len)
        .ok_or(GeomError::AmbientMismatch(f.nvars(), ambient_len))?;
    let zero = l.a.coords[0].zero_like();
    let one = l.a.coords[0].one_like();
    let ncols = 2 + extra;
    let mut matrix: Vec<Vec<K>> = Vec::with_capacity(f.nvars());
    for i in 0..ambient_len {
        let mut row = vec![zero.clone(); ncols];
        row[0] = l.a.coords[i].clone();
        row[1] = l.b.coords[i].clone();
        matrix.push(row);
    }
    for e in 0..extra {
        let mut row = vec![zero.clone(); ncols];
        row[2 + e] = one.clone();
        matrix.push(row);
    }
    Ok(f.substitute_linear(&matrix)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Eis, Field};

    fn pt(coords: &[i64]) -> ProjPoint<Eis> {
        ProjPoint::from_ints(coords, &Eis::from_int(1))
    }

    #[test]
    fn canonical_scaling() {
        let p = pt(&[0, 3, 6]);
        let q = pt(&[0, 1, 2]);
        assert_eq!(p, q);
        assert!(p.coords()[1].is_one());
    }

    #[test]
    fn span_dimensions() {
        // two equal points span a projective point
        let s = LinearSubspace::span(&[pt(&[1, 2, 3, 0, 0, 0]), pt(&[2, 4, 6, 0, 0, 0])]);
        assert_eq!(s.dim(), 0);
        // p0 with two more independent points spans a plane
        let p0 = pt(&[0, 0, 0, 0, 0, 1]);
        let s = LinearSubspace::span(&[p0, pt(&[0, 0, 8, 1, 0, 0]), pt(&[0, 0, 1, 1, 0, 0])]);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn rank_by_row_reduction_oracle() {
        // the three labeled triple points of the canonical scene
        let w = Eis::zeta();
        let mk = |k: u32| {
            let mut z = Eis::from_int(-2);
            for _ in 0..k {
                z = z.mul(&w);
            }
            ProjPoint::new(vec![
                Eis::from_int(0),
                Eis::from_int(0),
                Eis::from_int(0),
                Eis::from_int(1),
                z,
                Eis::from_int(0),
            ])
            .unwrap()
        };
        let s = LinearSubspace::span(&[mk(0), mk(1), mk(2)]);
        // They are distinct points of one line x0=x1=x2=x5=0.
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn plucker_relation_for_constructed_lines() {
        let l = ProjLine::new(pt(&[1, 2, 3, 4, 5, 6]), pt(&[0, 1, 1, 2, 0, 7])).unwrap();
        assert!(l.plucker_relation_holds());
    }

    #[test]
    fn line_equality_is_projective() {
        let a = pt(&[1, 0, 0, 0]);
        let b = pt(&[0, 1, 0, 0]);
        let c = pt(&[1, 1, 0, 0]);
        let l1 = ProjLine::new(a.clone(), b.clone()).unwrap();
        let l2 = ProjLine::new(b.clone(), c.clone()).unwrap();
        assert_eq!(l1, l2);
        let l3 = ProjLine::new(a, pt(&[0, 0, 1, 0])).unwrap();
        assert_ne!(l1, l3);
    }

    #[test]
    fn meets_and_skews() {
        let p0 = pt(&[0, 0, 0, 1]);
        let l1 = ProjLine::new(p0.clone(), pt(&[1, 0, 0, 0])).unwrap();
        let l2 = ProjLine::new(p0.clone(), pt(&[0, 1, 0, 0])).unwrap();
        match line_meet_line(&l1, &l2) {
            LineMeet::Point(p) => assert_eq!(p, p0),
            other => panic!("expected meet at p0, got {other:?}"),
        }
        let l3 = ProjLine::new(pt(&[1, 0, 0, 0]), pt(&[0, 1, 0, 0])).unwrap();
        let l4 = ProjLine::new(pt(&[0, 0, 1, 0]), pt(&[0, 1, 0, 1])).unwrap();
        assert_eq!(line_meet_line(&l3, &l4), LineMeet::Skew);
        assert_eq!(line_meet_line(&l1, &l1.clone()), LineMeet::Equal);
    }

    #[test]
    fn line_in_zero_hypersurface() {
        let f: MultiPoly<Eis> = MultiPoly::zero(4);
        let l = ProjLine::new(pt(&[1, 0, 0, 0]), pt(&[0, 1, 0, 0])).unwrap();
        assert!(line_in_hypersurface(&f, &l).unwrap());
    }

    #[test]
    fn incidence_examples() {
        let p0 = pt(&[0, 0, 0, 0, 0, 1]);
        let q = pt(&[0, 0, 8, 1, 0, 0]);
        let l = ProjLine::new(p0.clone(), q.clone()).unwrap();
        assert!(l.contains(&p0));
        assert!(l.contains(&q));
        assert!(l.contains(&ProjLine::new(p0.clone(), q.clone())
            .unwrap()
            .point_at(&Eis::from_int(3), &Eis::from_int(5))
            .unwrap()));
        assert!(!l.contains(&pt(&[1, 0, 0, 0, 0, 0])));
    }

    #[test]
    fn nullspace_solves_hyperplane() {
        let one = Eis::from_int(1);
        let rows = vec![vec![
            Eis::from_int(1),
            Eis::from_int(2),
            Eis::from_int(-1),
        ]];
        let ns = nullspace(&rows, 3, &one);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = v[0].add(&v[1].mul(&Eis::from_int(2))).sub(&v[2]);
            assert!(Field::is_zero(&dot));
        }
    }
}
