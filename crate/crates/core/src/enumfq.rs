//! Exhaustive enumeration over projective spaces and hypersurfaces for
//! prime fields: point counting, singular-point scans, and line searches.
//!
//! Points of `P^n(F_q)` are enumerated as canonical representatives (first
//! nonzero coordinate equal to one), so sets of results are deduplicated by
//! construction. Line searches key results by Pluecker vectors.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::field::{Field, Fp};
use crate::poly::{CompiledPoly, MultiPoly};
use crate::projective::{nullspace, rank, ProjLine, ProjPoint};

/// Calls `f` on every canonical representative of `P^(len-1)(F_q)`,
/// zero-padded to `pad_len` coordinates.
pub fn for_each_proj_point(len: usize, pad_len: usize, q: u64, mut f: impl FnMut(&[Fp])) {
    assert!(pad_len >= len);
    let zero = Fp::reduce(0, q);
    let one = Fp::reduce(1, q);
    let mut coords = vec![zero; pad_len];
    for lead in 0..len {
        for c in coords.iter_mut().take(pad_len) {
            *c = zero;
        }
        coords[lead] = one;
        // Odometer over positions lead+1..len.
        let free = len - lead - 1;
        let mut digits = vec![0u64; free];
        loop {
            for (k, &d) in digits.iter().enumerate() {
                coords[lead + 1 + k] = Fp::reduce(d as i128, q);
            }
            f(&coords);
            let mut k = 0;
            loop {
                if k == free {
                    break;
                }
                digits[k] += 1;
                if digits[k] < q {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == free {
                break;
            }
        }
    }
}

/// Canonical representatives of the projectivized span of `basis`.
pub fn proj_points_of_span(basis: &[Vec<Fp>], q: u64) -> Vec<Vec<Fp>> {
    let n = basis[0].len();
    let zero = Fp::reduce(0, q);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for_each_proj_point(basis.len(), basis.len(), q, |coeffs| {
        let mut v = vec![zero; n];
        for (c, b) in coeffs.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            for (x, bx) in v.iter_mut().zip(b) {
                *x = x.add(&c.mul(bx));
            }
        }
        if let Ok(p) = ProjPoint::new(v) {
            if seen.insert(p.coords().to_vec()) {
                out.push(p.coords().to_vec());
            }
        }
    });
    out
}

/// All points of the subvariety cut by `polys` inside the sub-`P^(len-1)`
/// of `P^5` spanned by the first `len` coordinates.
pub fn points_on_variety(polys: &[&MultiPoly<Fp>], len: usize, q: u64) -> Vec<ProjPoint<Fp>> {
    let compiled: Vec<CompiledPoly<Fp>> = polys.iter().map(|p| CompiledPoly::new(p)).collect();
    let pad = polys[0].nvars();
    let mut out = Vec::new();
    for_each_proj_point(len, pad, q, |coords| {
        if compiled.iter().all(|c| c.eval(coords).is_zero()) {
            out.push(ProjPoint::new(coords.to_vec()).expect("canonical rep"));
        }
    });
    out
}

/// A singular point of the complete intersection `polys = 0` (restricted to
/// the coordinate subspace of size `len`), i.e. a point where the Jacobian
/// has rank below `polys.len()`. Coordinates beyond `len` are frozen to
/// zero, and the Jacobian is taken in the first `len` variables.
pub fn find_singular_point(
    polys: &[&MultiPoly<Fp>],
    len: usize,
    q: u64,
) -> Option<ProjPoint<Fp>> {
    let compiled: Vec<CompiledPoly<Fp>> = polys.iter().map(|p| CompiledPoly::new(p)).collect();
    let grads: Vec<Vec<CompiledPoly<Fp>>> = polys
        .iter()
        .map(|p| {
            (0..len)
                .map(|v| CompiledPoly::new(&p.derivative(v)))
                .collect()
        })
        .collect();
    let needed = polys.len();
    let mut found: Option<ProjPoint<Fp>> = None;
    for_each_proj_point(len, polys[0].nvars(), q, |coords| {
        if found.is_some() {
            return;
        }
        if !compiled.iter().all(|c| c.eval(coords).is_zero()) {
            return;
        }
        let jac: Vec<Vec<Fp>> = grads
            .iter()
            .map(|row| row.iter().map(|g| g.eval(coords)).collect())
            .collect();
        if rank(&jac) < needed {
            found = Some(ProjPoint::new(coords.to_vec()).expect("canonical rep"));
        }
    });
    found
}

/// Exhaustive smoothness scan of the hypersurface `cubic = 0` in `P^5(F_q)`,
/// parallelized over the leading-coordinate charts. Returns a singular
/// point if one exists.
pub fn find_singular_point_p5(cubic: &MultiPoly<Fp>, q: u64) -> Option<ProjPoint<Fp>> {
    assert_eq!(cubic.nvars(), 6);
    let grads: Vec<MultiPoly<Fp>> = (0..6).map(|v| cubic.derivative(v)).collect();
    // Chart by chart: lead position and the value of the next coordinate.
    let mut tasks = Vec::new();
    for lead in 0..6usize {
        if lead == 5 {
            tasks.push((lead, 0u64));
        } else {
            for v in 0..q {
                tasks.push((lead, v));
            }
        }
    }
    let witnesses: Vec<ProjPoint<Fp>> = tasks
        .par_iter()
        .filter_map(|&(lead, first)| {
            let compiled = CompiledPoly::new(cubic);
            let cgrads: Vec<CompiledPoly<Fp>> = grads.iter().map(CompiledPoly::new).collect();
            let zero = Fp::reduce(0, q);
            let one = Fp::reduce(1, q);
            let mut coords = vec![zero; 6];
            coords[lead] = one;
            let free = 5 - lead;
            let mut hit: Option<ProjPoint<Fp>> = None;
            let mut scan = |coords: &[Fp], hit: &mut Option<ProjPoint<Fp>>| {
                if hit.is_some() {
                    return;
                }
                if !compiled.eval(coords).is_zero() {
                    return;
                }
                if cgrads.iter().all(|g| g.eval(coords).is_zero()) {
                    *hit = Some(ProjPoint::new(coords.to_vec()).expect("canonical"));
                }
            };
            if free == 0 {
                scan(&coords, &mut hit);
                return hit;
            }
            coords[lead + 1] = Fp::reduce(first as i128, q);
            let rest = free - 1;
            let mut digits = vec![0u64; rest];
            loop {
                for (k, &d) in digits.iter().enumerate() {
                    coords[lead + 2 + k] = Fp::reduce(d as i128, q);
                }
                scan(&coords, &mut hit);
                if hit.is_some() {
                    return hit;
                }
                let mut k = 0;
                loop {
                    if k == rest {
                        break;
                    }
                    digits[k] += 1;
                    if digits[k] < q {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
                if k == rest {
                    break;
                }
            }
            hit
        })
        .collect();
    witnesses.into_iter().min_by(|a, b| a.coords().cmp(b.coords()))
}

/// All lines on the cubic hypersurface through a given smooth point `z`,
/// optionally restricted to extra linear conditions (rows dotted with the
/// coordinates must vanish; used to stay inside a hyperplane section).
///
/// A line `span(z, w)` lies on the cubic iff `C(z) = C(w) = 0` together
/// with the two polar conditions; the gradient condition is folded into the
/// search space.
pub fn lines_through_point_on_cubic(
    cubic: &MultiPoly<Fp>,
    z: &ProjPoint<Fp>,
    extra_linear: &[Vec<Fp>],
    q: u64,
) -> Option<Vec<ProjLine<Fp>>> {
    let n = z.coords().len();
    assert_eq!(cubic.nvars(), n);
    let compiled = CompiledPoly::new(cubic);
    if !compiled.eval(z.coords()).is_zero() {
        return None;
    }
    let grads: Vec<MultiPoly<Fp>> = (0..n).map(|v| cubic.derivative(v)).collect();
    let one = Fp::reduce(1, q);
    let grad_at_z: Vec<Fp> = grads
        .iter()
        .map(|g| CompiledPoly::new(g).eval(z.coords()))
        .collect();
    if grad_at_z.iter().all(|c| c.is_zero()) {
        // Singular point: the tangent-hyperplane description breaks down.
        return None;
    }
    // Second polar P_z(w) = sum_i z_i * dC/dx_i (w), one quadratic.
    let mut polar = MultiPoly::zero(n);
    for (zi, g) in z.coords().iter().zip(&grads) {
        polar = polar.add(&g.scale(zi));
    }
    let cpolar = CompiledPoly::new(&polar);
    let mut rows = vec![grad_at_z];
    rows.extend(extra_linear.iter().cloned());
    let basis = nullspace(&rows, n, &one);
    if basis.is_empty() {
        return Some(vec![]);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in proj_points_of_span(&basis, q) {
        if !cpolar.eval(&w).is_zero() || !compiled.eval(&w).is_zero() {
            continue;
        }
        let Ok(wp) = ProjPoint::new(w) else { continue };
        if wp == *z {
            continue;
        }
        let line = ProjLine::new(z.clone(), wp).expect("distinct points span");
        if seen.insert(line.plucker().to_vec()) {
            out.push(line);
        }
    }
    out.sort();
    Some(out)
}

/// All lines contained in the cubic hypersurface whose points are drawn
/// from `points` (typically the full point set of the variety), found by
/// pair search with Pluecker deduplication.
pub fn lines_on_cubic_by_pairs(
    cubic: &MultiPoly<Fp>,
    points: &[ProjPoint<Fp>],
) -> Vec<ProjLine<Fp>> {
    let n = cubic.nvars();
    let grads: Vec<CompiledPoly<Fp>> = (0..n)
        .map(|v| CompiledPoly::new(&cubic.derivative(v)))
        .collect();
    let grad_vecs: Vec<Vec<Fp>> = points
        .par_iter()
        .map(|p| grads.iter().map(|g| g.eval(p.coords())).collect())
        .collect();
    let dot = |a: &[Fp], b: &[Fp]| -> Fp {
        let mut acc = a[0].zero_like();
        for (x, y) in a.iter().zip(b) {
            acc = acc.add(&x.mul(y));
        }
        acc
    };
    let pair_lines: Vec<ProjLine<Fp>> = (0..points.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut local = Vec::new();
            for j in (i + 1)..points.len() {
                if !dot(&grad_vecs[i], points[j].coords()).is_zero() {
                    continue;
                }
                if !dot(&grad_vecs[j], points[i].coords()).is_zero() {
                    continue;
                }
                if let Ok(line) = ProjLine::new(points[i].clone(), points[j].clone()) {
                    local.push(line);
                }
            }
            local
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for line in pair_lines {
        if seen.insert(line.plucker().to_vec()) {
            out.push(line);
        }
    }
    out.sort();
    out
}

/// Does the line lie inside the variety cut by all `polys`?
pub fn line_in_variety<K: Field>(polys: &[&MultiPoly<K>], line: &ProjLine<K>) -> bool {
    polys
        .iter()
        .all(|p| crate::projective::line_in_hypersurface(p, line).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_point_count() {
        let mut n = 0usize;
        for_each_proj_point(4, 4, 7, |_| n += 1);
        // (7^4 - 1) / 6 = 400
        assert_eq!(n, 400);
    }

    #[test]
    fn canonical_reps_are_distinct() {
        let mut seen = BTreeSet::new();
        for_each_proj_point(3, 3, 13, |c| {
            assert!(seen.insert(c.to_vec()));
        });
        assert_eq!(seen.len(), 183);
    }

    #[test]
    fn lines_on_fermat_cubic_surface() {
        // x0^3 + x1^3 + x2^3 + x3^3 in P^3 over F_7 contains lines, e.g.
        // x0 = -x1, x2 = -x3.
        let q = 7u64;
        let one = Fp::reduce(1, q);
        let mut cubic = MultiPoly::zero(4);
        for v in 0..4 {
            let mut e = [0usize; 4];
            e[v] = 3;
            cubic = cubic.add(&MultiPoly::monomial(4, &e, one));
        }
        let pts = points_on_variety(&[&cubic], 4, q);
        let lines = lines_on_cubic_by_pairs(&cubic, &pts);
        assert!(!lines.is_empty());
        for l in &lines {
            assert!(line_in_variety(&[&cubic], l));
        }
        // The classical count: a smooth cubic surface has 27 lines over the
        // algebraic closure; over F_7 the Fermat surface is well known to
        // have all of them rational.
        assert_eq!(lines.len(), 27);
    }
}
