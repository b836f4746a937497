//! Exact polyhedral helpers: Fourier–Motzkin feasibility, faces of a point
//! configuration, placing triangulations and normalized lattice volumes.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{hnf_col, lattice_coords};
use crate::matrix::{qla, IntMat};
use crate::rational::{dot, q, qvec, Q};

/// One inequality `g . t >= c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ineq {
    pub g: Vec<Q>,
    pub c: Q,
}

/// Find a rational point satisfying every inequality, or `None`.
pub fn fourier_motzkin(ineqs: &[Ineq], vars: usize) -> Option<Vec<Q>> {
    if vars == 0 {
        return ineqs.iter().all(|i| i.c <= Q::zero()).then(Vec::new);
    }
    let k = vars - 1;
    let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for i in ineqs {
        let gk = &i.g[k];
        if gk.is_positive() {
            lower.push(i.clone());
        } else if gk.is_negative() {
            upper.push(i.clone());
        } else {
            rest.push(Ineq { g: i.g[..k].to_vec(), c: i.c.clone() });
        }
    }
    // Pair every lower bound with every upper bound on t_k.
    for lo in &lower {
        for up in &upper {
            let (a, b) = (lo.g[k].clone(), -up.g[k].clone());
            let g: Vec<Q> = (0..k).map(|j| &lo.g[j] * &b + &up.g[j] * &a).collect();
            let c = &lo.c * &b + &up.c * &a;
            let cand = normalize(Ineq { g, c });
            if !rest.contains(&cand) {
                rest.push(cand);
            }
        }
    }
    let mut t = fourier_motzkin(&rest, k)?;
    let bound = |i: &Ineq| {
        let partial: Q = (0..k).map(|j| &i.g[j] * &t[j]).sum();
        (&i.c - partial) / &i.g[k]
    };
    let lo = lower.iter().map(bound).max();
    let hi = upper.iter().map(bound).min();
    let tk = match (lo, hi) {
        (Some(l), _) => l,
        (None, Some(h)) => h,
        (None, None) => Q::zero(),
    };
    t.push(tk);
    Some(t)
}

fn normalize(i: Ineq) -> Ineq {
    let s = i
        .g
        .iter()
        .chain(std::iter::once(&i.c))
        .map(|x| x.abs())
        .find(|x| !x.is_zero());
    match s {
        Some(s) => Ineq { g: i.g.iter().map(|x| x / &s).collect(), c: &i.c / &s },
        None => i,
    }
}

/// Is there `h` with `h . a_i > 0` for every column?
pub fn is_pointed(a: &IntMat) -> bool {
    pointed_witness(a).is_some()
}

/// A functional `h` with `h . a_i >= 1` for every column, if one exists.
pub fn pointed_witness(a: &IntMat) -> Option<Vec<Q>> {
    let ineqs: Vec<Ineq> = a
        .col_vecs()
        .iter()
        .map(|c| Ineq { g: qvec(c), c: Q::one() })
        .collect();
    fourier_motzkin(&ineqs, a.rows())
}

/// A face `G` of a point configuration together with a supporting functional
/// that vanishes on `G` and is positive on the other columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Zero-based column indices.
    #[serde(rename = "columnIndices")]
    pub column_indices: Vec<usize>,
    #[serde(with = "crate::rational::serde_q::vec")]
    pub functional: Vec<Q>,
}

/// Supporting functional for the column subset `g`, if it is a face.
pub fn face_functional(a: &IntMat, g: &[usize]) -> Option<Vec<Q>> {
    let d = a.rows();
    let gcols: Vec<Vec<Q>> = g.iter().map(|&j| qvec(&a.col(j))).collect();
    let perp = if gcols.is_empty() {
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect()
    } else {
        qla::nullspace(&gcols, d)
    };
    let others: Vec<usize> = (0..a.cols()).filter(|j| !g.contains(j)).collect();
    if perp.is_empty() {
        return others.is_empty().then(|| vec![Q::zero(); d]);
    }
    let ineqs: Vec<Ineq> = others
        .iter()
        .map(|&j| {
            let col = qvec(&a.col(j));
            Ineq { g: perp.iter().map(|p| dot(p, &col)).collect(), c: Q::one() }
        })
        .collect();
    let t = fourier_motzkin(&ineqs, perp.len())?;
    let mut phi = vec![Q::zero(); d];
    for (tk, p) in t.iter().zip(&perp) {
        for i in 0..d {
            phi[i] += tk * &p[i];
        }
    }
    Some(phi)
}

/// All faces of a pointed configuration, including the empty face and the
/// whole set, ordered by size then lexicographically.
pub fn faces(a: &IntMat) -> Result<Vec<Face>> {
    let n = a.cols();
    if n > 16 {
        return Err(Error::Precondition("face enumeration limited to 16 columns".into()));
    }
    if !is_pointed(a) {
        return Err(Error::NotPointed);
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let g: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        if let Some(functional) = face_functional(a, &g) {
            out.push(Face { column_indices: g, functional });
        }
    }
    out.sort_by(|x, y| {
        (x.column_indices.len(), &x.column_indices).cmp(&(y.column_indices.len(), &y.column_indices))
    });
    Ok(out)
}

/// Integer coordinates of the columns of `a` in a basis of `Z a`.
pub fn lattice_coordinates(a: &IntMat) -> Vec<Vec<i64>> {
    if a.cols() == 0 || a.is_zero() {
        return vec![vec![]; a.cols()];
    }
    let basis = hnf_col(a).basis();
    (0..a.cols())
        .map(|j| lattice_coords(&basis, &a.col(j)).expect("column lies in its own lattice"))
        .collect()
}

fn affine_det(pts: &[Vec<Q>]) -> Q {
    let base = &pts[0];
    let rows: Vec<Vec<Q>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    if rows.is_empty() {
        return Q::one();
    }
    qla::det(&rows)
}

/// Placing triangulation of a full-dimensional affine point set in `Q^r`,
/// inserting points in the given order. Simplices are lists of indices.
pub fn placing_triangulation(pts: &[Vec<Q>], order: &[usize]) -> Vec<Vec<usize>> {
    let r = pts.first().map_or(0, |p| p.len());
    if r == 0 {
        return order.first().map(|&i| vec![vec![i]]).unwrap_or_default();
    }
    // Initial simplex: greedily extend an affinely independent set.
    let mut init: Vec<usize> = Vec::new();
    let mut used = vec![false; pts.len()];
    for &i in order {
        if init.len() == r + 1 {
            break;
        }
        let mut trial: Vec<Vec<Q>> = init.iter().map(|&j| pts[j].clone()).collect();
        trial.push(pts[i].clone());
        let base = trial[0].clone();
        let diffs: Vec<Vec<Q>> = trial[1..]
            .iter()
            .map(|p| p.iter().zip(&base).map(|(x, y)| x - y).collect())
            .collect();
        if qla::rank(&diffs) == diffs.len() {
            init.push(i);
            used[i] = true;
        }
    }
    if init.len() < r + 1 {
        return Vec::new();
    }
    let mut simplices = vec![init];
    for &p in order {
        if used[p] {
            continue;
        }
        used[p] = true;
        let mut boundary: Vec<(Vec<usize>, usize)> = Vec::new();
        let mut counts: std::collections::BTreeMap<Vec<usize>, (usize, usize)> = Default::default();
        for s in &simplices {
            for skip in 0..s.len() {
                let mut f: Vec<usize> = s.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
                f.sort();
                let e = counts.entry(f).or_insert((0, s[skip]));
                e.0 += 1;
            }
        }
        for (f, (c, opp)) in counts {
            if c == 1 {
                boundary.push((f, opp));
            }
        }
        let mut added = Vec::new();
        for (f, opp) in boundary {
            let base = &pts[f[0]];
            let diffs: Vec<Vec<Q>> = f[1..]
                .iter()
                .map(|&j| pts[j].iter().zip(base).map(|(x, y)| x - y).collect())
                .collect();
            let normal = if diffs.is_empty() {
                vec![Q::one()]
            } else {
                qla::nullspace(&diffs, r).into_iter().next().expect("facet hyperplane")
            };
            let side = |x: &Vec<Q>| dot(&normal, x) - dot(&normal, base);
            let so = side(&pts[opp]);
            let sp = side(&pts[p]);
            if !sp.is_zero() && (sp.is_positive() != so.is_positive()) {
                let mut s = f.clone();
                s.push(p);
                added.push(s);
            }
        }
        simplices.extend(added);
    }
    simplices
}

/// The cone over one facet of `conv(0, Y)` not containing the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UmbrellaFacet {
    pub normal: Vec<Q>,
    pub points: Vec<usize>,
}

/// Facets `h . y = 1` of `conv(0, Y)` with `h . y <= 1` on all of `Y`.
pub fn umbrella_facets(y: &[Vec<i64>]) -> Vec<UmbrellaFacet> {
    let r = y.first().map_or(0, |p| p.len());
    let mut out: Vec<UmbrellaFacet> = Vec::new();
    if r == 0 {
        return out;
    }
    let yq: Vec<Vec<Q>> = y.iter().map(|p| qvec(p)).collect();
    let n = y.len();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let rows: Vec<Vec<Q>> = idx.iter().map(|&i| yq[i].clone()).collect();
        if qla::rank(&rows) == r {
            let h = qla::solve(&rows, &vec![Q::one(); r]).expect("invertible");
            if yq.iter().all(|p| dot(&h, p) <= Q::one()) && !out.iter().any(|f| f.normal == h) {
                let points = (0..n).filter(|&i| dot(&h, &yq[i]) == Q::one()).collect();
                out.push(UmbrellaFacet { normal: h, points });
            }
        }
        // next combination
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - r + i {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Simplices `sigma` (as column index sets of size `rank`) of the umbrella
/// triangulation of `conv(0, A)`, each with its normalized volume.
pub fn umbrella_simplices(a: &IntMat) -> Vec<(Vec<usize>, i64)> {
    let y = lattice_coordinates(a);
    let r = y.first().map_or(0, |p| p.len());
    let mut out = Vec::new();
    for f in umbrella_facets(&y) {
        // Project the facet onto coordinates avoiding one with nonzero normal.
        let k = f.normal.iter().position(|x| !x.is_zero()).expect("nonzero normal");
        let proj: Vec<Vec<Q>> = f
            .points
            .iter()
            .map(|&i| y[i].iter().enumerate().filter(|(c, _)| *c != k).map(|(_, &v)| q(v)).collect())
            .collect();
        let order: Vec<usize> = (0..proj.len()).collect();
        for s in placing_triangulation(&proj, &order) {
            let cols: Vec<usize> = s.iter().map(|&i| f.points[i]).collect();
            let rows: Vec<Vec<Q>> = cols.iter().map(|&i| qvec(&y[i])).collect();
            let det = if r == 0 { Q::one() } else { qla::det(&rows).abs() };
            let mut sorted = cols.clone();
            sorted.sort();
            out.push((sorted, crate::rational::to_i64(&det).expect("integral volume")));
        }
    }
    out.sort();
    out
}

/// Normalized volume of `conv(0, A)` with respect to the lattice `Z A`.
/// The empty configuration has volume 1.
pub fn normalized_volume(a: &IntMat) -> Result<i64> {
    if a.cols() == 0 || a.is_zero() {
        return Ok(1);
    }
    if !is_pointed(a) {
        return Err(Error::NotPointed);
    }
    Ok(umbrella_simplices(a).iter().map(|(_, v)| v).sum())
}

/// Second route: placing triangulation of `{0} u Y` in lattice coordinates,
/// inserting points in `order` (indices into `{0} u Y`, the origin being 0).
pub fn volume_by_placing(a: &IntMat, order: &[usize]) -> i64 {
    let y = lattice_coordinates(a);
    let r = y.first().map_or(0, |p| p.len());
    if r == 0 {
        return 1;
    }
    let mut pts = vec![vec![Q::zero(); r]];
    pts.extend(y.iter().map(|p| qvec(p)));
    let total: Q = placing_triangulation(&pts, order)
        .iter()
        .map(|s| {
            let sp: Vec<Vec<Q>> = s.iter().map(|&i| pts[i].clone()).collect();
            affine_det(&sp).abs()
        })
        .sum();
    crate::rational::to_i64(&total).expect("integral volume")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacesAndVolume {
    pub faces: Vec<Face>,
    pub vol: i64,
}

/// Faces of `A_sigma` (reported with original column indices) and its
/// normalized volume.
pub fn faces_and_volume(a: &IntMat, sigma: Option<&[usize]>) -> Result<FacesAndVolume> {
    let idx: Vec<usize> = sigma.map_or_else(|| (0..a.cols()).collect(), |s| s.to_vec());
    if idx.iter().any(|&j| j >= a.cols()) {
        return Err(Error::Dimension("sigma index out of range".into()));
    }
    let sub = a.select_cols(&idx);
    let mut fs = faces(&sub)?;
    for f in &mut fs {
        f.column_indices = f.column_indices.iter().map(|&j| idx[j]).collect();
    }
    Ok(FacesAndVolume { faces: fs, vol: normalized_volume(&sub)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fm_finds_witness() {
        let ineqs = vec![
            Ineq { g: vec![q(1), q(0)], c: q(1) },
            Ineq { g: vec![q(-1), q(1)], c: q(0) },
            Ineq { g: vec![q(0), q(-1)], c: q(-3) },
        ];
        let t = fourier_motzkin(&ineqs, 2).unwrap();
        for i in &ineqs {
            assert!(dot(&i.g, &t) >= i.c);
        }
        let bad = vec![Ineq { g: vec![q(1)], c: q(1) }, Ineq { g: vec![q(-1)], c: q(0) }];
        assert!(fourier_motzkin(&bad, 1).is_none());
    }

    #[test]
    fn pointedness() {
        assert!(is_pointed(&IntMat::lit(&[&[1, 1, 1], &[0, 1, 2]])));
        assert!(!is_pointed(&IntMat::lit(&[&[1, -1]])));
        assert!(!is_pointed(&IntMat::lit(&[&[1, 0]])));
    }

    #[test]
    fn small_volumes() {
        assert_eq!(normalized_volume(&IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]])).unwrap(), 3);
        assert_eq!(normalized_volume(&IntMat::lit(&[&[1, 2]])).unwrap(), 2);
        assert_eq!(normalized_volume(&IntMat::lit(&[&[1, 2, 3]])).unwrap(), 3);
        assert_eq!(normalized_volume(&IntMat::lit(&[&[1, 1], &[0, 1]])).unwrap(), 1);
        assert_eq!(normalized_volume(&IntMat::lit(&[&[2], &[2]])).unwrap(), 1);
    }
}
