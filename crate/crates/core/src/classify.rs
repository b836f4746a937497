//! Candidate associated primes of lattice basis ideals, toral/Andean flags,
//! prime-level Andean arrangements and the resonance/pyramid test.
//!
//! Candidates `(sigma, omega)` are the pairs passing the block condition on
//! the rows of `B` outside `sigma`; they are necessary for an associated
//! prime, not sufficient. Arrangements ignore the integer shifts coming from
//! embedded components, so negative answers are reported as `Unknown`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    build_gale_context_with, gale_extension, integer_kernel, lattice_contains_q, saturate_and_compare,
    GaleContext, GaleOptions,
};
use crate::matrix::{qla, IntMat};
use crate::polytope::{faces, normalized_volume, Face};
use crate::rational::{qvec, Q};

/// Candidate associated prime of `I(B)`; indices are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaOmegaPrime {
    pub sigma: Vec<usize>,
    pub omega: Vec<usize>,
    /// Columns `omega` of `B` restricted to the rows `sigma`.
    #[serde(rename = "latticeGens")]
    pub lattice_gens: IntMat,
    pub toral: bool,
    /// Whether the block of `B` on rows outside `sigma` and columns outside
    /// `omega` is invertible (required for toral components).
    #[serde(rename = "invertibleBlock")]
    pub invertible_block: bool,
    /// Every column meeting the rows outside `sigma` has entries of both
    /// signs there; otherwise `I(B)` is not contained in the prime.
    pub mixed: bool,
    /// Columns of `A_sigma`, spanning the quasidegrees of the prime.
    #[serde(rename = "qdegSpan")]
    pub qdeg_span: IntMat,
}

/// A rational subspace of `C^d` with its finite set of integer shifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    pub sigma: Vec<usize>,
    /// Spanning vectors as columns.
    pub span: IntMat,
    pub dim: usize,
    pub proper: bool,
    pub shifts: Vec<Vec<i64>>,
}

impl Subspace {
    pub fn contains(&self, beta: &[Q]) -> bool {
        let gens: Vec<Vec<Q>> = self.span.col_vecs().iter().map(|c| qvec(c)).collect();
        self.shifts.iter().any(|s| {
            let b: Vec<Q> = beta.iter().zip(s).map(|(x, &y)| x - Q::from_integer(y.into())).collect();
            if gens.is_empty() {
                b.iter().all(|x| x.is_zero())
            } else {
                qla::in_span(&gens, &b)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub subspaces: Vec<Subspace>,
    /// Always true: shifts from embedded structure are not computed.
    #[serde(rename = "primeLevel")]
    pub prime_level: bool,
}

impl Arrangement {
    pub fn contains(&self, beta: &[Q]) -> bool {
        self.subspaces.iter().any(|s| s.contains(beta))
    }
}

/// All pairs passing the block condition: `omega` is the set of columns
/// vanishing on the rows outside `sigma`, and the remaining block is square.
/// Invertibility and the sign pattern of the block are recorded.
pub fn candidate_pairs_raw(a: &IntMat, b: &IntMat) -> Result<Vec<SigmaOmegaPrime>> {
    let (n, m) = (b.rows(), b.cols());
    if a.cols() != n {
        return Err(Error::Dimension("A and B disagree on n".into()));
    }
    if n > 14 {
        return Err(Error::Precondition("candidate enumeration is limited to n <= 14".into()));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let sigma: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let rest: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        let omega: Vec<usize> = (0..m).filter(|&j| rest.iter().all(|&i| b.get(i, j) == 0)).collect();
        let omega_c: Vec<usize> = (0..m).filter(|j| !omega.contains(j)).collect();
        if omega_c.len() != rest.len() {
            continue;
        }
        let invertible_block = rest.is_empty() || b.select_rows(&rest).select_cols(&omega_c).det() != 0;
        let mixed = omega_c.iter().all(|&j| {
            rest.iter().any(|&i| b.get(i, j) > 0) && rest.iter().any(|&i| b.get(i, j) < 0)
        });
        let lattice_gens = b.select_rows(&sigma).select_cols(&omega);
        let a_s = a.select_cols(&sigma);
        let toral = is_toral(&a_s, &lattice_gens)?;
        out.push(SigmaOmegaPrime { sigma, omega, lattice_gens, toral, qdeg_span: a_s, invertible_block, mixed });
    }
    Ok(out)
}

pub fn candidate_pairs(ctx: &GaleContext) -> Result<Vec<SigmaOmegaPrime>> {
    candidate_pairs_raw(&ctx.a, &ctx.b)
}

fn is_toral(a_sigma: &IntMat, gens: &IntMat) -> Result<bool> {
    let ker = if a_sigma.cols() == 0 { IntMat::zeros(0, 0) } else { integer_kernel(a_sigma) };
    if gens.rows() == 0 {
        return Ok(true);
    }
    Ok(saturate_and_compare(gens, &ker)?.equal)
}

/// `Sat(Z B_{sigma,omega}) = ker_Z(A_sigma)`.
pub fn toral_test(ctx: &GaleContext, p: &SigmaOmegaPrime) -> Result<bool> {
    is_toral(&ctx.a.select_cols(&p.sigma), &p.lattice_gens)
}

/// A non-toral candidate that can contain `I(B)`.
pub fn is_andean(c: &SigmaOmegaPrime) -> bool {
    !c.toral && c.mixed
}

fn arrangement_of(cands: &[SigmaOmegaPrime], d: usize) -> Arrangement {
    let mut subspaces: Vec<Subspace> = Vec::new();
    for c in cands.iter().filter(|c| is_andean(c)) {
        let dim = c.qdeg_span.rank();
        if subspaces.iter().any(|s| s.span == c.qdeg_span) {
            continue;
        }
        subspaces.push(Subspace {
            sigma: c.sigma.clone(),
            span: c.qdeg_span.clone(),
            dim,
            proper: dim < d,
            shifts: vec![vec![0; d]],
        });
    }
    Arrangement { subspaces, prime_level: true }
}

/// Union of `C A_sigma` over the Andean candidates, with shift `{0}`.
pub fn andean_arrangement_prime_level(ctx: &GaleContext) -> Result<Arrangement> {
    Ok(arrangement_of(&candidate_pairs(ctx)?, ctx.d()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TriState {
    /// No Andean candidate at all, so nothing to avoid.
    NotInPrimeLevel,
    InArrangement,
    /// Outside the prime-level set, but Andean candidates exist whose
    /// shifted quasidegrees were not computed.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    pub gamma: Vec<usize>,
    #[serde(rename = "andeanCount")]
    pub andean_count: usize,
    /// Projections of the Andean spans onto the first `d` coordinates.
    pub projected: Vec<Subspace>,
    pub flag: TriState,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterReport {
    #[serde(rename = "toralFlag")]
    pub toral_flag: TriState,
    #[serde(rename = "completelyToralFlag")]
    pub completely_toral_flag: TriState,
    #[serde(rename = "perGamma")]
    pub per_gamma: Vec<GammaReport>,
    pub certificates: Vec<String>,
}

fn flag_for(arr: &Arrangement, andean: usize, beta: &[Q]) -> TriState {
    if arr.contains(beta) {
        TriState::InArrangement
    } else if andean == 0 {
        TriState::NotInPrimeLevel
    } else {
        TriState::Unknown
    }
}

/// Toral and completely toral flags for `beta`.
pub fn toral_parameter_tests(ctx: &GaleContext, beta: &[Q]) -> Result<ParameterReport> {
    let d = ctx.d();
    if beta.len() != d {
        return Err(Error::Dimension(format!("beta must have {d} entries")));
    }
    let cands = candidate_pairs(ctx)?;
    let arr = arrangement_of(&cands, d);
    let toral_flag = flag_for(&arr, cands.iter().filter(|c| is_andean(c)).count(), beta);
    let m = ctx.m();
    let mut per_gamma = Vec::new();
    for mask in 0u32..(1 << m) {
        let gamma: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
        let bg = ctx.b.select_cols(&gamma);
        let ag = gale_extension(&bg, &ctx.a)?;
        let sub = build_gale_context_with(&ag, Some(&bg), None, GaleOptions { require_pointed: false })?;
        let sub_cands = candidate_pairs(&sub)?;
        let sub_arr = arrangement_of(&sub_cands, sub.d());
        let top: Vec<usize> = (0..d).collect();
        let projected: Vec<Subspace> = sub_arr
            .subspaces
            .iter()
            .map(|s| {
                let span = s.span.select_rows(&top);
                let dim = span.rank();
                Subspace { sigma: s.sigma.clone(), span, dim, proper: dim < d, shifts: vec![vec![0; d]] }
            })
            .collect();
        let proj_arr = Arrangement { subspaces: projected.clone(), prime_level: true };
        let andean_count = sub_cands.iter().filter(|c| is_andean(c)).count();
        per_gamma.push(GammaReport { gamma, andean_count, flag: flag_for(&proj_arr, andean_count, beta), projected });
    }
    let worst = |flags: &mut dyn Iterator<Item = TriState>| {
        let v: Vec<TriState> = flags.collect();
        if v.contains(&TriState::InArrangement) {
            TriState::InArrangement
        } else if v.contains(&TriState::Unknown) {
            TriState::Unknown
        } else {
            TriState::NotInPrimeLevel
        }
    };
    let completely = worst(&mut std::iter::once(toral_flag).chain(per_gamma.iter().map(|g| g.flag)));
    let mut certificates = Vec::new();
    match completely {
        TriState::NotInPrimeLevel => certificates.push(
            "completely toral: Horn(B, kappa) is holonomic for every kappa with A kappa = beta (prime-level certificate)"
                .to_string(),
        ),
        TriState::Unknown => certificates.push(
            "outside every prime-level projection; shifts from embedded components not computed, so holonomicity of Horn(B, kappa) is not certified"
                .to_string(),
        ),
        TriState::InArrangement => {}
    }
    if toral_flag == TriState::NotInPrimeLevel {
        certificates.push("toral: the lattice basis binomial module is holonomic (no Andean candidate)".into());
    }
    Ok(ParameterReport { toral_flag, completely_toral_flag: completely, per_gamma, certificates })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceResonance {
    pub face: Face,
    pub resonant: bool,
    pub volume: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub faces: Vec<FaceResonance>,
    pub centers: Vec<Face>,
    pub unique: bool,
    pub pyramid: bool,
    pub irreducible: bool,
    pub volume: i64,
}

/// Is `beta` in `Z A + Q G`? Project along `Q G` and test lattice
/// membership of the image.
pub fn is_resonant(a: &IntMat, g: &[usize], beta: &[Q]) -> bool {
    let d = a.rows();
    let gcols: Vec<Vec<Q>> = g.iter().map(|&j| qvec(&a.col(j))).collect();
    // Rows of P span the annihilator of Q G.
    let p: Vec<Vec<Q>> = if gcols.is_empty() {
        (0..d).map(|i| (0..d).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }).collect()).collect()
    } else {
        qla::nullspace(&gcols, d)
    };
    if p.is_empty() {
        return true;
    }
    let apply = |v: &[Q]| -> Vec<Q> { p.iter().map(|row| crate::rational::dot(row, v)).collect() };
    let gens: Vec<Vec<Q>> = (0..a.cols()).map(|j| apply(&qvec(&a.col(j)))).collect();
    let target = apply(beta);
    lattice_contains_q(&gens, &target)
}

/// Resonance centers of `beta` among the faces of `A_sigma` and the pyramid
/// condition on a unique center.
pub fn resonance_and_pyramid(a_sigma: &IntMat, beta: &[Q]) -> Result<ResonanceReport> {
    if beta.len() != a_sigma.rows() {
        return Err(Error::Dimension("beta must have one entry per row".into()));
    }
    let fs = faces(a_sigma)?;
    let volume = normalized_volume(a_sigma)?;
    let mut rows = Vec::with_capacity(fs.len());
    for f in fs {
        let resonant = is_resonant(a_sigma, &f.column_indices, beta);
        let volume = normalized_volume(&a_sigma.select_cols(&f.column_indices))?;
        rows.push(FaceResonance { face: f, resonant, volume });
    }
    let sub = |g: &Face, h: &Face| {
        g.column_indices.len() < h.column_indices.len()
            && g.column_indices.iter().all(|j| h.column_indices.contains(j))
    };
    let centers: Vec<&FaceResonance> = rows
        .iter()
        .filter(|g| !g.resonant && rows.iter().filter(|h| sub(&g.face, &h.face)).all(|h| h.resonant))
        .collect();
    let unique = centers.len() == 1;
    let pyramid = unique && centers[0].volume == volume;
    let centers: Vec<Face> = centers.iter().map(|c| c.face.clone()).collect();
    Ok(ResonanceReport { faces: rows, centers, unique, pyramid, irreducible: unique && pyramid, volume })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_gale_context;
    use crate::rational::{q, qf};

    #[test]
    fn segment_three_candidates() {
        let a = IntMat::lit(&[&[1, 2, 3]]);
        let b = IntMat::lit(&[&[-2, 1], &[1, -2], &[0, 1]]);
        let ctx = build_gale_context(&a, Some(&b), None).unwrap();
        let c = candidate_pairs(&ctx).unwrap();
        let sigmas: Vec<Vec<usize>> = c.iter().map(|p| p.sigma.clone()).collect();
        assert_eq!(sigmas, vec![vec![0], vec![1], vec![0, 1], vec![2], vec![0, 1, 2]]);
        assert!(c.iter().all(|p| p.toral));
        let r = toral_parameter_tests(&ctx, &[q(0)]).unwrap();
        assert_eq!(r.toral_flag, TriState::NotInPrimeLevel);
    }

    #[test]
    fn resonance_examples() {
        let one = IntMat::lit(&[&[1]]);
        let r = resonance_and_pyramid(&one, &[qf(1, 2)]).unwrap();
        assert!(r.unique && r.pyramid && r.irreducible);
        assert!(r.centers[0].column_indices.is_empty());
        let r = resonance_and_pyramid(&one, &[q(0)]).unwrap();
        assert!(r.centers.is_empty() && !r.irreducible);
        let cubic = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let r = resonance_and_pyramid(&cubic, &[qf(1, 2), qf(1, 3)]).unwrap();
        let cs: Vec<Vec<usize>> = r.centers.iter().map(|f| f.column_indices.clone()).collect();
        assert_eq!(cs, vec![vec![0], vec![3]]);
        assert!(!r.pyramid && !r.irreducible);
    }
}
