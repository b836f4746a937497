//! Hermite and Smith normal forms, Gale duality contexts, saturation and
//! parameter solving.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{qla, IntMat};
use crate::polytope;
use crate::rational::{q, to_i64, Q};

/// Column-style Hermite normal form `H = M U`.
///
/// `H` is lower echelon: its first `rank` columns carry pivots in strictly
/// increasing rows, pivots are positive, entries left of a pivot lie in
/// `[0, pivot)`, and the remaining columns are zero. The trailing columns of
/// `U` are therefore a lattice basis of `ker_Z(M)`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMat,
    pub u: IntMat,
    pub pivot_rows: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Nonzero columns of `H`: a canonical basis of the column lattice.
    pub fn basis(&self) -> IntMat {
        self.h.select_cols(&(0..self.rank()).collect::<Vec<_>>())
    }

    pub fn kernel(&self) -> IntMat {
        self.u.select_cols(&(self.rank()..self.u.cols()).collect::<Vec<_>>())
    }
}

pub fn hnf_col(m: &IntMat) -> Hnf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMat::identity(cols);
    let mut pc = 0;
    let mut pivot_rows = Vec::new();
    for i in 0..rows {
        if pc == cols {
            break;
        }
        loop {
            let jmin = (pc..cols)
                .filter(|&j| h.get(i, j) != 0)
                .min_by_key(|&j| (h.get(i, j).abs(), j));
            let Some(jmin) = jmin else { break };
            h.swap_cols(pc, jmin);
            u.swap_cols(pc, jmin);
            let p = h.get(i, pc);
            let mut clean = true;
            for j in pc + 1..cols {
                let f = h.get(i, j) / p;
                h.add_col(j, pc, -f);
                u.add_col(j, pc, -f);
                if h.get(i, j) != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(i, pc) == 0 {
            continue;
        }
        if h.get(i, pc) < 0 {
            h.neg_col(pc);
            u.neg_col(pc);
        }
        let p = h.get(i, pc);
        for j in 0..pc {
            let f = h.get(i, j).div_euclid(p);
            h.add_col(j, pc, -f);
            u.add_col(j, pc, -f);
        }
        pivot_rows.push(i);
        pc += 1;
    }
    Hnf { h, u, pivot_rows }
}

/// Smith normal form `U M V = S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snf {
    pub u: IntMat,
    pub s: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn divisors(&self) -> Vec<i64> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i))
            .filter(|&x| x != 0)
            .collect()
    }
}

pub fn snf(m: &IntMat) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(i64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = s.get(i, j).abs();
                    if x != 0 && best.map_or(true, |(b, _, _)| x < b) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else {
                return Snf { u, s, v };
            };
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let p = s.get(t, t);
            let mut dirty = false;
            for i in t + 1..rows {
                let f = s.get(i, t) / p;
                s.add_row(i, t, -f);
                u.add_row(i, t, -f);
                dirty |= s.get(i, t) != 0;
            }
            for j in t + 1..cols {
                let f = s.get(t, j) / p;
                s.add_col(j, t, -f);
                v.add_col(j, t, -f);
                dirty |= s.get(t, j) != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| s.get(i, j) % p != 0);
            match bad {
                Some((i, _)) => {
                    s.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if s.get(t, t) < 0 {
            s.neg_row(t);
            u.neg_row(t);
        }
    }
    Snf { u, s, v }
}

/// Both normal forms of a nonzero matrix.
#[derive(Clone, Debug)]
pub struct NormalForms {
    pub hnf: IntMat,
    pub snf: Snf,
}

pub fn normal_forms(m: &IntMat) -> Result<NormalForms> {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return Err(Error::Degenerate("zero matrix".into()));
    }
    Ok(NormalForms { hnf: hnf_col(m).h, snf: snf(m) })
}

/// Lattice basis of `ker_Z(M)` as columns.
pub fn integer_kernel(m: &IntMat) -> IntMat {
    if m.rows() == 0 {
        return IntMat::identity(m.cols());
    }
    hnf_col(m).kernel()
}

/// Does the column lattice of `gens` contain `v`?
pub fn lattice_contains(gens: &IntMat, v: &[i64]) -> bool {
    lattice_coords(gens, v).is_some()
}

/// Integer coordinates of `v` in the HNF basis of the column lattice of
/// `gens`, if `v` lies in that lattice.
pub fn lattice_coords(gens: &IntMat, v: &[i64]) -> Option<Vec<i64>> {
    let hn = hnf_col(gens);
    let h = hn.basis();
    let mut y = Vec::with_capacity(hn.rank());
    for (p, &i) in hn.pivot_rows.iter().enumerate() {
        let mut r = v[i];
        for (qq, yq) in y.iter().enumerate() {
            r -= h.get(i, qq) * yq;
        }
        let piv = h.get(i, p);
        if r % piv != 0 {
            return None;
        }
        y.push(r / piv);
    }
    if h.mul_vec(&y) == v {
        Some(y)
    } else {
        None
    }
}

/// Rational-coefficient version of [`lattice_contains`].
pub fn lattice_contains_q(gens: &[Vec<Q>], v: &[Q]) -> bool {
    let mut den = num_bigint::BigInt::from(1);
    for x in gens.iter().flatten().chain(v.iter()) {
        den = num_integer::Integer::lcm(&den, x.denom());
    }
    let d = Q::from_integer(den);
    let conv = |x: &Q| to_i64(&(x * &d)).expect("lattice entries out of i64 range");
    let n = v.len();
    let cols: Vec<Vec<i64>> = gens.iter().map(|g| g.iter().map(conv).collect()).collect();
    let m = IntMat::from_cols(&cols, n).expect("consistent generators");
    let target: Vec<i64> = v.iter().map(conv).collect();
    if m.cols() == 0 {
        return target.iter().all(|&x| x == 0);
    }
    lattice_contains(&m, &target)
}

/// Unimodular `n x n` matrix whose first rows are `x`, which must satisfy
/// `Z x = Z^rows`. Built by inverting the column-HNF transform of `x`.
pub fn unimodular_completion(x: &IntMat) -> Result<IntMat> {
    let hn = hnf_col(x);
    let id = IntMat::identity(x.rows());
    if hn.rank() != x.rows() || hn.basis() != id {
        return Err(Error::LatticeNotFull(x.rows()));
    }
    hn.u.inverse_unimodular()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaleContext {
    #[serde(rename = "A")]
    pub a: IntMat,
    #[serde(rename = "Atilde")]
    pub atilde: IntMat,
    #[serde(rename = "Aperp")]
    pub aperp: IntMat,
    #[serde(rename = "Ctilde")]
    pub ctilde: IntMat,
    #[serde(rename = "Cperp")]
    pub cperp: IntMat,
    #[serde(rename = "C")]
    pub c: IntMat,
    #[serde(rename = "B")]
    pub b: IntMat,
    #[serde(rename = "K")]
    pub k: IntMat,
    pub varkappa: Vec<i64>,
    #[serde(rename = "epsC")]
    pub eps_c: Vec<i64>,
    #[serde(rename = "latticeIndex")]
    pub lattice_index: i64,
    /// Smith form of `K`, whose `U` maps residues to diagonal coordinates.
    #[serde(rename = "snfK")]
    pub snf_k: Snf,
}

#[derive(Clone, Copy, Debug)]
pub struct GaleOptions {
    pub require_pointed: bool,
}

impl Default for GaleOptions {
    fn default() -> Self {
        GaleOptions { require_pointed: true }
    }
}

pub fn build_gale_context(
    a: &IntMat,
    b: Option<&IntMat>,
    atilde: Option<&IntMat>,
) -> Result<GaleContext> {
    build_gale_context_with(a, b, atilde, GaleOptions::default())
}

pub fn build_gale_context_with(
    a: &IntMat,
    b: Option<&IntMat>,
    atilde: Option<&IntMat>,
    opts: GaleOptions,
) -> Result<GaleContext> {
    let (d, n) = (a.rows(), a.cols());
    if d == 0 || n == 0 || a.is_zero() {
        return Err(Error::Degenerate("A must be a nonzero matrix".into()));
    }
    let sn = snf(a);
    let divs = sn.divisors();
    if divs.len() != d || divs.iter().any(|&x| x != 1) {
        return Err(Error::LatticeNotFull(d));
    }
    if opts.require_pointed && !polytope::is_pointed(a) {
        return Err(Error::NotPointed);
    }
    let m = n - d;
    let atilde = match atilde {
        Some(t) => {
            if t.rows() != n || t.cols() != n {
                return Err(Error::Dimension("Atilde must be n x n".into()));
            }
            if (0..d).any(|i| t.row(i) != a.row(i)) {
                return Err(Error::Precondition("top rows of Atilde must equal A".into()));
            }
            if t.det().abs() != 1 {
                return Err(Error::Precondition("Atilde is not unimodular".into()));
            }
            t.clone()
        }
        None => unimodular_completion(a)?,
    };
    let ctilde = atilde.inverse_unimodular()?;
    let aperp = atilde.select_rows(&(d..n).collect::<Vec<_>>());
    let cperp = ctilde.select_cols(&(0..d).collect::<Vec<_>>());
    let c = ctilde.select_cols(&(d..n).collect::<Vec<_>>());
    let b = match b {
        Some(b) => {
            if b.rows() != n {
                return Err(Error::NotGaleDual(format!("B has {} rows, expected {n}", b.rows())));
            }
            if !a.mul(b)?.is_zero() {
                return Err(Error::NotGaleDual("A B != 0".into()));
            }
            if b.cols() != m || b.rank() != m {
                return Err(Error::NotGaleDual(format!("B must have rank {m}")));
            }
            b.clone()
        }
        None => c.clone(),
    };
    let k = aperp.mul(&b)?;
    let snf_k = snf(&k);
    let varkappa = snf_k.divisors();
    let lattice_index = k.det().abs();
    let eps_c = (0..n).map(|i| c.row(i).iter().sum()).collect();
    Ok(GaleContext {
        a: a.clone(),
        atilde,
        aperp,
        ctilde,
        cperp,
        c,
        b,
        k,
        varkappa,
        eps_c,
        lattice_index,
        snf_k,
    })
}

impl GaleContext {
    pub fn d(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn m(&self) -> usize {
        self.b.cols()
    }

    /// Check every structural invariant exactly.
    pub fn verify(&self) -> Result<()> {
        let n = self.n();
        let fail = |s: &str| Err(Error::Precondition(format!("context invariant: {s}")));
        if self.atilde.mul(&self.ctilde)? != IntMat::identity(n) {
            return fail("Atilde Ctilde = I");
        }
        if (0..self.d()).any(|i| self.atilde.row(i) != self.a.row(i)) {
            return fail("top rows of Atilde");
        }
        if !self.a.mul(&self.c)?.is_zero() || !self.a.mul(&self.b)?.is_zero() {
            return fail("A C = A B = 0");
        }
        if self.c.mul(&self.k)? != self.b {
            return fail("B = C K");
        }
        let prod: i64 = self.varkappa.iter().product();
        if self.k.det() == 0 || prod != self.lattice_index || self.k.det().abs() != prod {
            return fail("lattice index");
        }
        let sum: Vec<i64> = (0..n).map(|i| self.c.row(i).iter().sum()).collect();
        if sum != self.eps_c {
            return fail("epsC");
        }
        Ok(())
    }

    /// Column HNF of `K`; its diagonal bounds the residue representatives.
    pub fn k_hnf(&self) -> Hnf {
        hnf_col(&self.k)
    }

    /// Representatives `j` of `Z^m / K Z^m` with `0 <= j_i < H_ii`, in
    /// lexicographic order.
    pub fn residues(&self) -> Vec<Vec<i64>> {
        let h = self.k_hnf().h;
        let m = self.m();
        let mut out = vec![vec![]];
        for i in 0..m {
            let hi = h.get(i, i);
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..hi).map(move |x| {
                        let mut p = p.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Write `a = K w + j` with `j` a residue representative.
    pub fn reduce_mod_k(&self, a: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let hn = self.k_hnf();
        let h = &hn.h;
        let m = self.m();
        let mut j = a.to_vec();
        let mut t = vec![0i64; m];
        for i in 0..m {
            let f = j[i].div_euclid(h.get(i, i));
            t[i] = f;
            for r in 0..m {
                j[r] -= f * h.get(r, i);
            }
        }
        (hn.u.mul_vec(&t), j)
    }

    /// `K^{-1}` over Q.
    pub fn k_inverse(&self) -> Vec<Vec<Q>> {
        qla::inverse(&self.k.to_q()).expect("K is invertible")
    }

    /// Diagonal (Smith) coordinates of a residue class.
    pub fn snf_key(&self, j: &[i64]) -> Vec<i64> {
        let uj = self.snf_k.u.mul_vec(j);
        uj.iter().zip(&self.varkappa).map(|(x, d)| x.rem_euclid(*d)).collect()
    }

    /// Coordinates `v` with `C v = c`, if `c` lies in `ker_Z(A)`.
    pub fn c_coords(&self, c: &[i64]) -> Option<Vec<i64>> {
        let v = self.aperp.mul_vec(c);
        if self.c.mul_vec(&v) == c {
            Some(v)
        } else {
            None
        }
    }
}

/// Saturation of a column lattice and comparison with another one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub sat_l: IntMat,
    pub equal: bool,
    /// `[sat(L) : L]`, the torsion order of `Z^n / L`.
    pub index: i64,
}

pub fn saturate(l: &IntMat) -> IntMat {
    let n = l.rows();
    let lq = l.transpose().to_q();
    let perp = qla::nullspace(&lq, n);
    if perp.is_empty() {
        return IntMat::identity(n);
    }
    let rows: Vec<Vec<i64>> = perp.iter().map(|v| clear_denominators(v)).collect();
    let nmat = IntMat::from_rows_n(&rows, n).expect("consistent rows");
    let ker = integer_kernel(&nmat);
    if ker.cols() == 0 {
        return ker;
    }
    hnf_col(&ker).basis()
}

pub fn saturate_and_compare(l: &IntMat, m: &IntMat) -> Result<SaturationReport> {
    if l.rows() != m.rows() {
        return Err(Error::Dimension("lattices live in different ambient spaces".into()));
    }
    let sat_l = saturate(l);
    let sat_m = saturate(m);
    let contains_all = |gens: &IntMat, vs: &IntMat| {
        (0..vs.cols()).all(|j| gens.cols() > 0 && lattice_contains(gens, &vs.col(j)))
            || vs.cols() == 0
    };
    let equal = contains_all(&sat_l, &sat_m) && contains_all(&sat_m, &sat_l);
    let index = if l.cols() == 0 || l.is_zero() {
        1
    } else {
        snf(l).divisors().iter().product()
    };
    Ok(SaturationReport { sat_l, equal, index })
}

pub fn clear_denominators(v: &[Q]) -> Vec<i64> {
    let mut den = num_bigint::BigInt::from(1);
    for x in v {
        den = num_integer::Integer::lcm(&den, x.denom());
    }
    let d = Q::from_integer(den);
    let ints: Vec<i64> = v.iter().map(|x| to_i64(&(x * &d)).expect("i64 range")).collect();
    let g = ints.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g > 1 {
        ints.iter().map(|x| x / g).collect()
    } else {
        ints
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterMode {
    Any,
    AnnihilatingC,
}

/// A parameter `kappa` with `A kappa = beta`.
///
/// `Any` solves on the lexicographically first independent columns and sets
/// the rest to zero; `AnnihilatingC` returns the unique solution in the row
/// span of `A`, so that `kappa C = 0`.
pub fn solve_parameter(a: &IntMat, beta: &[Q], mode: ParameterMode) -> Result<Vec<Q>> {
    if beta.len() != a.rows() {
        return Err(Error::Dimension("beta length must equal the row count of A".into()));
    }
    let aq = a.to_q();
    match mode {
        ParameterMode::Any => {
            qla::solve(&aq, beta).ok_or_else(|| Error::Precondition("beta not in span of A".into()))
        }
        ParameterMode::AnnihilatingC => {
            let d = a.rows();
            let gram: Vec<Vec<Q>> = (0..d)
                .map(|i| (0..d).map(|j| crate::rational::dot(&aq[i], &aq[j])).collect())
                .collect();
            let y = qla::solve(&gram, beta)
                .ok_or_else(|| Error::Precondition("A has dependent rows".into()))?;
            Ok(a.vec_mul_q(&y))
        }
    }
}

/// The matrix `A[gamma]`: `A` on top of an integer basis of the saturated
/// left annihilator of `B_gamma`, taken modulo the row span of `A`.
pub fn gale_extension(b_gamma: &IntMat, a: &IntMat) -> Result<IntMat> {
    let n = a.cols();
    if b_gamma.rows() != n {
        return Err(Error::Dimension("B_gamma must have n rows".into()));
    }
    if b_gamma.rank() != b_gamma.cols() {
        return Err(Error::Degenerate("B_gamma is rank deficient".into()));
    }
    if !a.mul(b_gamma)?.is_zero() {
        return Err(Error::NotGaleDual("A B_gamma != 0".into()));
    }
    // Left annihilator lattice, as rows.
    let lb = if b_gamma.cols() == 0 {
        IntMat::identity(n)
    } else {
        integer_kernel(&b_gamma.transpose()).transpose()
    };
    if lb.rows() == a.rows() {
        return Ok(a.clone());
    }
    // Coordinates of A's rows in the basis `lb`.
    let lbt = lb.transpose();
    let mut xrows = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let x = qla::solve(&lbt.to_q(), &crate::rational::qvec(&a.row(i)))
            .ok_or_else(|| Error::NotGaleDual("rows of A not in annihilator".into()))?;
        let xi: Vec<i64> = x.iter().map(|v| to_i64(v).expect("integral coordinates")).collect();
        xrows.push(xi);
    }
    let x = IntMat::from_rows_n(&xrows, lb.rows())?;
    let xt = unimodular_completion(&x)?;
    let out = xt.mul(&lb)?;
    debug_assert!((0..a.rows()).all(|i| out.row(i) == a.row(i)));
    Ok(out)
}

/// Does `beta` lie in the rational column span of `m`?
pub fn in_rational_span(m: &IntMat, beta: &[Q]) -> bool {
    let gens: Vec<Vec<Q>> = m.col_vecs().iter().map(|c| c.iter().map(|&x| q(x)).collect()).collect();
    qla::in_span(&gens, beta)
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn cubic() -> IntMat {
        IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]])
    }

    #[test]
    fn hnf_kernel_is_saturated_basis() {
        let hn = hnf_col(&cubic());
        assert_eq!(hn.basis(), IntMat::identity(2));
        let ker = hn.kernel();
        assert_eq!(ker.cols(), 2);
        assert!(cubic().mul(&ker).unwrap().is_zero());
        assert_eq!(snf(&ker).divisors(), vec![1, 1]);
    }

    #[test]
    fn snf_of_k() {
        let k = IntMat::lit(&[&[-1, 2], &[0, -3]]);
        let s = snf(&k);
        assert_eq!(s.divisors(), vec![1, 3]);
        assert_eq!(s.u.mul(&k).unwrap().mul(&s.v).unwrap(), s.s);
        assert!(normal_forms(&IntMat::zeros(2, 2)).is_err());
    }

    #[test]
    fn completion_keeps_top_rows() {
        let t = unimodular_completion(&cubic()).unwrap();
        assert_eq!(t.row(0), vec![1, 1, 1, 1]);
        assert_eq!(t.row(1), vec![0, 1, 2, 3]);
        assert_eq!(t.det().abs(), 1);
    }

    #[test]
    fn context_rejects_bad_input() {
        let scaled = IntMat::lit(&[&[2, 2, 2]]);
        assert_eq!(build_gale_context(&scaled, None, None), Err(Error::LatticeNotFull(1)));
        let unpointed = IntMat::lit(&[&[1, -1, 0], &[0, 0, 1]]);
        assert_eq!(build_gale_context(&unpointed, None, None), Err(Error::NotPointed));
        let bad_b = IntMat::lit(&[&[1], &[1], &[1], &[1]]);
        assert!(matches!(
            build_gale_context(&cubic(), Some(&IntMat::lit(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]])), None),
            Err(Error::NotGaleDual(_))
        ));
        assert!(matches!(
            build_gale_context(&IntMat::lit(&[&[1, 1, 1, 1]]), Some(&bad_b), None),
            Err(Error::NotGaleDual(_))
        ));
    }

    #[test]
    fn residue_reduction() {
        let at = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let b = IntMat::lit(&[&[-1, 2], &[0, -3], &[3, 0], &[-2, 1]]);
        let ctx = build_gale_context(&cubic(), Some(&b), Some(&at)).unwrap();
        assert_eq!(ctx.residues(), vec![vec![0, 0], vec![0, 1], vec![0, 2]]);
        for a in [[5, -7], [0, 0], [-3, 4], [1, 1]] {
            let (w, j) = ctx.reduce_mod_k(&a);
            let mut back = ctx.k.mul_vec(&w);
            for (x, y) in back.iter_mut().zip(&j) {
                *x += y;
            }
            assert_eq!(back, a.to_vec());
            assert!(ctx.residues().contains(&j));
        }
        let keys: Vec<Vec<i64>> = ctx.residues().iter().map(|j| ctx.snf_key(j)).collect();
        let mut dedup = keys.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 3);
    }

    #[test]
    fn parameter_modes() {
        let a = IntMat::lit(&[&[1, 2, 3]]);
        assert_eq!(
            solve_parameter(&a, &[q(2)], ParameterMode::Any).unwrap(),
            vec![q(2), q(0), q(0)]
        );
        let k = solve_parameter(&cubic(), &[qf(1, 2), qf(1, 3)], ParameterMode::AnnihilatingC)
            .unwrap();
        assert_eq!(cubic().mul_qvec(&k), vec![qf(1, 2), qf(1, 3)]);
    }
}
