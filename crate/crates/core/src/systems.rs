//! Generator sets of the hypergeometric systems: toric ideals, lattice basis
//! ideals, GKZ, Horn and normalized Horn systems, the homogenization ρ and
//! the restriction witnesses.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{build_gale_context, solve_parameter, GaleContext, ParameterMode};
use crate::matrix::{qla, IntMat};
use crate::poly::Poly;
use crate::rational::{binomial, fmt_q, q, Q};
use crate::weyl::{euler_operators, ADegree, InitialForm, WeightVector, WeylOp, WeylRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SystemKind {
    #[serde(rename = "GKZ")]
    Gkz,
    LatticeBasisBinomial,
    Horn,
    NormalizedHorn,
    HomogenizedBinomial,
    /// Caller-supplied generators (used for module fixtures).
    Custom,
}

/// A linear factor `B_row . η + κ_row + shift`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinFactor {
    pub row: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub shift: Q,
}

impl LinFactor {
    pub fn to_poly(&self, b: &IntMat, kappa: &[Q]) -> Poly {
        let coeffs: Vec<Q> = b.row(self.row).iter().map(|&x| q(x)).collect();
        Poly::linear(&coeffs, &kappa[self.row] + &self.shift)
    }

    pub fn eval(&self, b: &IntMat, kappa: &[Q], eta: &[Q]) -> Q {
        let row = b.row(self.row);
        let lin: Q = row.iter().zip(eta).map(|(&x, e)| q(x) * e).sum();
        lin + &kappa[self.row] + &self.shift
    }
}

/// Factored `q_k` and `p_k` of one Horn generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornFactored {
    pub k: usize,
    pub q: Vec<LinFactor>,
    pub p: Vec<LinFactor>,
    #[serde(rename = "qPoly")]
    pub q_poly: Poly,
    #[serde(rename = "pPoly")]
    pub p_poly: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub kind: SystemKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ctx: Option<GaleContext>,
    /// The grading matrix (`A`, or `ρ(A)` for homogenized systems).
    #[serde(rename = "A", skip_serializing_if = "Option::is_none", default)]
    pub a: Option<IntMat>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none", default)]
    pub b: Option<IntMat>,
    #[serde(with = "crate::rational::serde_q::vec")]
    pub beta: Vec<Q>,
    #[serde(with = "crate::rational::serde_q::vec")]
    pub kappa: Vec<Q>,
    pub generators: Vec<WeylOp>,
    #[serde(rename = "eulerOps")]
    pub euler_ops: Vec<WeylOp>,
    /// A-degree of each generator (x-side) or its Z^m-shift (z-side).
    pub degrees: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub factored: Option<Vec<HornFactored>>,
}

impl SystemSpec {
    pub fn pretty(&self) -> String {
        let mut s = format!("{:?} system\n", self.kind);
        if !self.kappa.is_empty() {
            let k: Vec<String> = self.kappa.iter().map(fmt_q).collect();
            s.push_str(&format!("kappa = ({})\n", k.join(", ")));
        }
        for (i, g) in self.generators.iter().enumerate() {
            s.push_str(&format!("  g{} = {}\n", i + 1, g));
        }
        for (i, e) in self.euler_ops.iter().enumerate() {
            s.push_str(&format!("  E{} = {}\n", i + 1, e));
        }
        s
    }

    /// All x-side operators: generators followed by Euler operators.
    pub fn all_ops(&self) -> Vec<WeylOp> {
        self.generators.iter().chain(&self.euler_ops).cloned().collect()
    }
}

/// `d^(w+) - d^(w-)`.
pub fn binomial_of(w: &[i64]) -> WeylOp {
    let ring = WeylRing::x(w.len());
    let plus: Vec<i64> = w.iter().map(|&x| x.max(0)).collect();
    let minus: Vec<i64> = w.iter().map(|&x| (-x).max(0)).collect();
    &WeylOp::d_pow(ring, &plus).expect("valid") - &WeylOp::d_pow(ring, &minus).expect("valid")
}

pub fn lattice_basis_ideal(b: &IntMat) -> Result<Vec<WeylOp>> {
    if b.rank() != b.cols() {
        return Err(Error::Degenerate("B must have full column rank".into()));
    }
    (0..b.cols())
        .map(|k| {
            let w = b.col(k);
            if w.iter().all(|&x| x == 0) {
                Err(Error::Degenerate(format!("column {k} of B is zero")))
            } else {
                Ok(binomial_of(&w))
            }
        })
        .collect()
}

/// Commutative polynomial in the ∂'s of a ∂-only operator.
pub fn d_poly(op: &WeylOp) -> Result<Poly> {
    let n = op.ring().var_count;
    let mut p = Poly::zero(n);
    for ((a, b), c) in op.terms() {
        if a.iter().any(|&x| x != 0) {
            return Err(Error::Precondition("operator is not a polynomial in the derivatives".into()));
        }
        p.add_term(b.clone(), c.clone());
    }
    Ok(p)
}

fn monomials_upto(n: usize, deg: i64) -> Vec<Vec<i64>> {
    let mut out = vec![];
    fn rec(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    if deg >= 0 {
        rec(n, deg, &mut vec![], &mut out);
    }
    out
}

/// Is `f` a combination `sum h_i g_i` with `deg(h_i g_i) <= deg_bound`?
pub fn ideal_membership_upto(gens: &[Poly], f: &Poly, deg_bound: i64) -> Result<bool> {
    if f.total_degree() > deg_bound {
        return Err(Error::Precondition("degree bound below the degree of f".into()));
    }
    if f.is_zero() {
        return Ok(true);
    }
    let n = f.nvars();
    let mut cols: Vec<Poly> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        for m in monomials_upto(n, deg_bound - g.total_degree()) {
            cols.push(g.shift_exp(&m));
        }
    }
    let mut rows: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for p in cols.iter().chain(std::iter::once(f)) {
        for e in p.terms().keys() {
            let len = rows.len();
            rows.entry(e.clone()).or_insert(len);
        }
    }
    let mut mat = vec![vec![Q::zero(); cols.len()]; rows.len()];
    for (j, p) in cols.iter().enumerate() {
        for (e, c) in p.terms() {
            mat[rows[e]][j] = c.clone();
        }
    }
    let mut rhs = vec![Q::zero(); rows.len()];
    for (e, c) in f.terms() {
        rhs[rows[e]] = c.clone();
    }
    if cols.is_empty() {
        return Ok(false);
    }
    Ok(qla::solve(&mat, &rhs).is_some())
}

/// `true` when `u` is larger than `v` in degree reverse lexicographic order.
pub fn degrevlex_gt(u: &[i64], v: &[i64]) -> bool {
    let (du, dv): (i64, i64) = (u.iter().sum(), v.iter().sum());
    if du != dv {
        return du > dv;
    }
    for i in (0..u.len()).rev() {
        if u[i] != v[i] {
            return u[i] < v[i];
        }
    }
    false
}

/// Binomials `d^u - d^v` with `Au = Av` and `|u|, |v| <= deg_bound`,
/// reduced to a minimal generating set up to that degree. This need not
/// generate the toric ideal beyond the bound.
pub fn toric_gens_bounded(a: &IntMat, deg_bound: i64) -> Result<Vec<WeylOp>> {
    if deg_bound < 1 {
        return Err(Error::Precondition("degree bound must be at least 1".into()));
    }
    let n = a.cols();
    let mut by_degree: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
    for u in monomials_upto(n, deg_bound) {
        by_degree.entry(a.mul_vec(&u)).or_default().push(u);
    }
    // (leading, trailing) with disjoint supports.
    let mut cands: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for group in by_degree.values() {
        for (i, u) in group.iter().enumerate() {
            for v in &group[i + 1..] {
                if u.iter().zip(v).any(|(x, y)| *x > 0 && *y > 0) {
                    continue;
                }
                if degrevlex_gt(u, v) {
                    cands.push((u.clone(), v.clone()));
                } else {
                    cands.push((v.clone(), u.clone()));
                }
            }
        }
    }
    cands.sort_by(|(u1, _), (u2, _)| {
        let (d1, d2): (i64, i64) = (u1.iter().sum(), u2.iter().sum());
        d1.cmp(&d2).then_with(|| {
            if u1 == u2 {
                std::cmp::Ordering::Equal
            } else if degrevlex_gt(u1, u2) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            }
        })
    });
    let mut kept: Vec<Poly> = Vec::new();
    let mut out = Vec::new();
    for (u, v) in cands {
        let f = Poly::from_terms(n, [(u.clone(), Q::one()), (v.clone(), -Q::one())]);
        if !ideal_membership_upto(&kept, &f, deg_bound)? {
            kept.push(f);
            let w: Vec<i64> = u.iter().zip(&v).map(|(x, y)| x - y).collect();
            out.push(binomial_of(&w));
        }
    }
    Ok(out)
}

fn x_degrees(a: &IntMat, gens: &[WeylOp]) -> Result<Vec<Vec<i64>>> {
    gens.iter()
        .map(|g| match g.a_degree(a) {
            ADegree::Degree(d) => Ok(d),
            ADegree::Inhomogeneous => Err(Error::Inhomogeneous),
        })
        .collect()
}

/// GKZ system `I_A + <E - A kappa>` with the toric part bounded in degree.
pub fn gkz_system(ctx: &GaleContext, kappa: &[Q], deg_bound: i64) -> Result<SystemSpec> {
    let gens = toric_gens_bounded(&ctx.a, deg_bound)?;
    x_system(SystemKind::Gkz, ctx, kappa, gens)
}

/// Lattice basis binomial system `I(B) + <E - A kappa>`.
pub fn lattice_basis_system(ctx: &GaleContext, kappa: &[Q]) -> Result<SystemSpec> {
    let gens = lattice_basis_ideal(&ctx.b)?;
    x_system(SystemKind::LatticeBasisBinomial, ctx, kappa, gens)
}

/// An x-side system with caller-supplied generators plus Euler operators.
pub fn x_system(kind: SystemKind, ctx: &GaleContext, kappa: &[Q], gens: Vec<WeylOp>) -> Result<SystemSpec> {
    if kappa.len() != ctx.n() {
        return Err(Error::Dimension("kappa must have n entries".into()));
    }
    let beta = ctx.a.mul_qvec(kappa);
    let degrees = x_degrees(&ctx.a, &gens)?;
    Ok(SystemSpec {
        kind,
        ctx: Some(ctx.clone()),
        a: Some(ctx.a.clone()),
        b: Some(ctx.b.clone()),
        euler_ops: euler_operators(&ctx.a, &beta)?,
        beta,
        kappa: kappa.to_vec(),
        generators: gens,
        degrees,
        factored: None,
    })
}

/// Factored `q_k`, `p_k` for every column of `B`.
pub fn horn_factors(b: &IntMat, kappa: &[Q]) -> Vec<HornFactored> {
    (0..b.cols())
        .map(|k| {
            let mut qf = Vec::new();
            let mut pf = Vec::new();
            for i in 0..b.rows() {
                let e = b.get(i, k);
                let dst = if e > 0 { &mut qf } else { &mut pf };
                for l in 0..e.abs() {
                    dst.push(LinFactor { row: i, shift: q(-l) });
                }
            }
            let m = b.cols();
            let prod = |fs: &[LinFactor]| {
                fs.iter().fold(Poly::one(m), |acc, f| &acc * &f.to_poly(b, kappa))
            };
            HornFactored { k, q_poly: prod(&qf), p_poly: prod(&pf), q: qf, p: pf }
        })
        .collect()
}

/// Rows `i` of `B` of the form `c e_k` with `c > 0`, one per column `k`,
/// preferring rows whose κ entry vanishes.
pub fn normalizing_rows(b: &IntMat, kappa: &[Q]) -> Result<Vec<usize>> {
    let m = b.cols();
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let cands: Vec<usize> = (0..b.rows())
            .filter(|&i| b.get(i, k) > 0 && (0..m).all(|j| j == k || b.get(i, j) == 0))
            .collect();
        if cands.is_empty() {
            return Err(Error::Precondition(format!(
                "no row of B is a positive multiple of e_{} (column {k} has no diagonal entry)",
                k + 1
            )));
        }
        match cands.iter().find(|&&i| kappa[i].is_zero()) {
            Some(&i) => out.push(i),
            None => {
                return Err(Error::Precondition(format!(
                    "row {} of B is diagonal but kappa_{} = {} is not zero",
                    cands[0] + 1,
                    cands[0] + 1,
                    fmt_q(&kappa[cands[0]])
                )))
            }
        }
    }
    Ok(out)
}

/// Horn system `q_k - z_k p_k`, or `z_k^{-1} q_k - p_k` when normalized.
pub fn horn_generators(b: &IntMat, kappa: &[Q], normalized: bool) -> Result<SystemSpec> {
    let (n, m) = (b.rows(), b.cols());
    if kappa.len() != n {
        return Err(Error::Dimension("kappa must have one entry per row of B".into()));
    }
    if m == 0 || b.rank() != m {
        return Err(Error::Degenerate("B must have full column rank".into()));
    }
    if normalized {
        normalizing_rows(b, kappa)?;
    }
    let ring = WeylRing::z_laurent(m);
    let factored = horn_factors(b, kappa);
    let mut gens = Vec::with_capacity(m);
    let mut degrees = Vec::with_capacity(m);
    for h in &factored {
        let mut ek = vec![0; m];
        ek[h.k] = 1;
        let mut form: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
        if normalized {
            let neg: Vec<i64> = ek.iter().map(|x| -x).collect();
            form.insert(neg.clone(), h.q_poly.clone());
            form.insert(vec![0; m], -&h.p_poly);
            degrees.push(neg);
        } else {
            form.insert(vec![0; m], h.q_poly.clone());
            form.insert(ek.clone(), -&h.p_poly);
            degrees.push(ek);
        }
        form.retain(|_, g| !g.is_zero());
        gens.push(WeylOp::from_theta_form(ring, &form)?);
    }
    Ok(SystemSpec {
        kind: if normalized { SystemKind::NormalizedHorn } else { SystemKind::Horn },
        ctx: None,
        a: None,
        b: Some(b.clone()),
        beta: vec![],
        kappa: kappa.to_vec(),
        generators: gens,
        euler_ops: vec![],
        degrees,
        factored: Some(factored),
    })
}

/// `ρ(A)`: a row of ones on top of `[0 | A]`.
pub fn rho_matrix(a: &IntMat) -> IntMat {
    let (d, n) = (a.rows(), a.cols());
    let mut r = IntMat::zeros(d + 1, n + 1);
    for j in 0..=n {
        r.set(0, j, 1);
    }
    for i in 0..d {
        for j in 0..n {
            r.set(i + 1, j + 1, a.get(i, j));
        }
    }
    r
}

/// Exponents `(u, v)` of a binomial `d^u - d^v`.
pub fn binomial_exponents(g: &WeylOp) -> Result<(Vec<i64>, Vec<i64>)> {
    let terms: Vec<_> = g.terms().iter().collect();
    let bad = || Error::Precondition(format!("not a binomial in the derivatives: {g}"));
    if terms.len() != 2 {
        return Err(bad());
    }
    let mut plus = None;
    let mut minus = None;
    for ((a, b), c) in terms {
        if a.iter().any(|&x| x != 0) {
            return Err(bad());
        }
        if *c == Q::one() {
            plus = Some(b.clone());
        } else if *c == -Q::one() {
            minus = Some(b.clone());
        }
    }
    match (plus, minus) {
        (Some(u), Some(v)) => Ok((u, v)),
        _ => Err(bad()),
    }
}

/// Homogenize binomials with a new variable `d_0` and grade by `ρ(A)`.
pub fn homogenize_rho(a: &IntMat, gens: &[WeylOp], beta: &[Q], beta0: &Q) -> Result<SystemSpec> {
    let n = a.cols();
    let ra = rho_matrix(a);
    let ring = WeylRing::x(n + 1);
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        if g.ring().var_count != n {
            return Err(Error::RingMismatch("generator lives in the wrong ring".into()));
        }
        let (u, v) = binomial_exponents(g)?;
        let (du, dv): (i64, i64) = (u.iter().sum(), v.iter().sum());
        let mut uu = vec![(dv - du).max(0)];
        uu.extend(&u);
        let mut vv = vec![(du - dv).max(0)];
        vv.extend(&v);
        out.push(&WeylOp::d_pow(ring, &uu)? - &WeylOp::d_pow(ring, &vv)?);
    }
    let mut b0 = vec![beta0.clone()];
    b0.extend(beta.iter().cloned());
    let ctx = build_gale_context(&ra, None, None)?;
    let kappa = solve_parameter(&ra, &b0, ParameterMode::Any)?;
    let degrees = x_degrees(&ra, &out)?;
    Ok(SystemSpec {
        kind: SystemKind::HomogenizedBinomial,
        euler_ops: euler_operators(&ra, &b0)?,
        b: Some(ctx.b.clone()),
        ctx: Some(ctx),
        a: Some(ra),
        beta: b0,
        kappa,
        generators: out,
        degrees,
        factored: None,
    })
}

/// One generator of the restriction comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NhornComparison {
    pub k: usize,
    pub restricted: WeylOp,
    pub nhorn: WeylOp,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfunctionCheck {
    pub j: usize,
    pub initial: WeylOp,
    pub expected: WeylOp,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionReport {
    #[serde(rename = "nhornEquality")]
    pub nhorn_equality: Vec<NhornComparison>,
    #[serde(rename = "bfunctionWitness")]
    pub bfunction_witness: Vec<BfunctionCheck>,
    pub passed: bool,
}

/// Substitute `x_j -> x_j + c` in a normal-ordered operator.
pub fn translate_x(op: &WeylOp, j: usize, c: &Q) -> WeylOp {
    let ring = op.ring();
    let mut out = WeylOp::zero(ring);
    for ((a, b), v) in op.terms() {
        assert!(a[j] >= 0, "translation of a negative power");
        for t in 0..=a[j] {
            let mut xe = a.clone();
            xe[j] = t;
            let coef = v * binomial(a[j], t) * crate::rational::pow_q(c, a[j] - t);
            let term = WeylOp::term(ring, xe, b.clone(), coef).expect("valid term");
            out = &out + &term;
        }
    }
    out
}

pub fn restriction_witnesses(ctx: &GaleContext, kappa: &[Q]) -> Result<RestrictionReport> {
    restriction_witnesses_raw(&ctx.a, &ctx.b, kappa)
}

/// Witnesses for the restriction of `I(B) + <E - A kappa>` to
/// `x_{m+1} = ... = x_n = 1`. `A` may have zero rows (then `m = n`).
pub fn restriction_witnesses_raw(a: &IntMat, b: &IntMat, kappa: &[Q]) -> Result<RestrictionReport> {
    let (n, m) = (b.rows(), b.cols());
    if kappa.len() != n || a.cols() != n {
        return Err(Error::Dimension("A, B and kappa disagree on n".into()));
    }
    for i in 0..m {
        for k in 0..m {
            if b.get(i, k) != i64::from(i == k) {
                return Err(Error::Precondition(format!("row {} of B is not the unit row e_{}", i + 1, i + 1)));
            }
        }
        if !kappa[i].is_zero() {
            return Err(Error::Precondition(format!("kappa_{} must be zero", i + 1)));
        }
    }
    if !a.mul(b)?.is_zero() {
        return Err(Error::NotGaleDual("A B != 0".into()));
    }
    let xring = WeylRing::x(n);
    let zring = WeylRing::z_laurent(m);
    let nhorn = if m > 0 { horn_generators(b, kappa, true)?.generators } else { vec![] };

    let mut comps = Vec::with_capacity(m);
    for k in 0..m {
        let w = b.col(k);
        let mut mu = vec![0; n];
        for j in m..n {
            mu[j] = w[j].abs();
        }
        let op = &WeylOp::x_pow(xring, &mu)? * &binomial_of(&w);
        // Group as (x^a' d^b' on the first m variables) * g(θ_{>m}).
        let mut grouped: BTreeMap<(Vec<i64>, Vec<i64>), Poly> = BTreeMap::new();
        for ((xa, db), c) in op.terms() {
            let mut g = Poly::constant(n - m, c.clone());
            for j in m..n {
                for l in 0..db[j] {
                    g = &g * &(&Poly::var(n - m, j - m) - &Poly::constant(n - m, q(l)));
                }
            }
            let key = (xa[..m].to_vec(), db[..m].to_vec());
            let e = grouped.entry(key).or_insert_with(|| Poly::zero(n - m));
            *e = &*e + &g;
        }
        // θ_j -> κ_j + sum_{i<=m} b_ji θ_i, then x_{>m} = 1.
        let images: Vec<Poly> = (m..n)
            .map(|j| {
                let coeffs: Vec<Q> = (0..m).map(|i| q(b.get(j, i))).collect();
                Poly::linear(&coeffs, kappa[j].clone())
            })
            .collect();
        let mut restricted = WeylOp::zero(zring);
        for ((xa, db), g) in grouped {
            let left = WeylOp::term(zring, xa, db, Q::one())?;
            let mut form = BTreeMap::new();
            form.insert(vec![0; m], g.substitute(&images, m));
            let right = WeylOp::from_theta_form(zring, &form)?;
            restricted = &restricted + &(&left * &right);
        }
        let equal = restricted == nhorn[k];
        comps.push(NhornComparison { k, restricted, nhorn: nhorn[k].clone(), equal });
    }

    let d = n - m;
    let mut checks = Vec::with_capacity(d);
    if d > 0 {
        let beta = a.mul_qvec(kappa);
        let a_tail = a.select_cols(&(m..n).collect::<Vec<_>>());
        let inv = qla::inverse(&a_tail.to_q())
            .ok_or_else(|| Error::Precondition("columns m+1..n of A are not independent".into()))?;
        let eulers = euler_operators(a, &beta)?;
        let mut w = vec![Q::zero(); n];
        for x in w.iter_mut().skip(m) {
            *x = Q::one();
        }
        let weight = WeightVector::minus_plus(&w);
        for j in m..n {
            let nu = &inv[j - m];
            let mut o = WeylOp::zero(xring);
            for (i, e) in eulers.iter().enumerate() {
                o = &o + &e.scale(&nu[i]);
            }
            let shifted = translate_x(&o, j, &Q::one());
            let lifted = &WeylOp::x(xring, j) * &shifted;
            let initial = match lifted.initial_form(&weight)? {
                InitialForm::Weyl(p) => p,
                InitialForm::Symbol(_) => unreachable!("(-w,w) weights give Weyl initial forms"),
            };
            let expected = WeylOp::theta(xring, j);
            let equal = initial == expected;
            checks.push(BfunctionCheck { j, initial, expected, equal });
        }
    }
    let passed = comps.iter().all(|c| c.equal) && checks.iter().all(|c| c.equal);
    Ok(RestrictionReport { nhorn_equality: comps, bfunction_witness: checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn toric_small() {
        let g = toric_gens_bounded(&IntMat::lit(&[&[1, 2]]), 2).unwrap();
        assert_eq!(g, vec![WeylOp::parse(WeylRing::x(2), "dx1^2 - dx2").unwrap()]);
        assert!(toric_gens_bounded(&IntMat::identity(3), 3).unwrap().is_empty());
    }

    #[test]
    fn degrevlex() {
        assert!(degrevlex_gt(&[0, 0, 2, 0], &[0, 1, 0, 1]));
        assert!(degrevlex_gt(&[0, 2, 0, 0], &[1, 0, 1, 0]));
        assert!(degrevlex_gt(&[2, 0], &[0, 1]));
    }

    #[test]
    fn membership() {
        let n = 2;
        let g = Poly::from_terms(n, [(vec![1, 0], q(1)), (vec![0, 1], q(-1))]);
        let f = g.shift_exp(&[1, 0]);
        assert!(ideal_membership_upto(&[g.clone()], &f, 2).unwrap());
        assert!(!ideal_membership_upto(&[g.clone()], &Poly::one(n), 2).unwrap());
        assert!(ideal_membership_upto(&[g], &f, 1).is_err());
    }

    #[test]
    fn rho_examples() {
        let a = IntMat::lit(&[&[1, 2]]);
        assert_eq!(rho_matrix(&a), IntMat::lit(&[&[1, 1, 1], &[0, 1, 2]]));
        let g = WeylOp::parse(WeylRing::x(2), "dx1^2 - dx2").unwrap();
        let s = homogenize_rho(&a, &[g], &[qf(1, 3)], &q(0)).unwrap();
        assert_eq!(s.generators[0], WeylOp::parse(WeylRing::x(3), "dx2^2 - dx1*dx3").unwrap());
        let bad = WeylOp::parse(WeylRing::x(2), "dx1 + x2").unwrap();
        assert!(homogenize_rho(&a, &[bad], &[q(0)], &q(0)).is_err());
    }

    #[test]
    fn telescoping_horn() {
        let b = IntMat::lit(&[&[1], &[-1]]);
        let s = horn_generators(&b, &[q(0), q(0)], false).unwrap();
        // η - z(-η) = (1 + z) η
        let expect = WeylOp::parse(WeylRing::z_laurent(1), "z1*dz1 + z1^2*dz1").unwrap();
        assert_eq!(s.generators[0], expect);
    }

    #[test]
    fn normalized_precondition_names_row() {
        let b = IntMat::lit(&[&[1], &[1], &[-1], &[-1]]);
        let err = horn_generators(&b, &[q(1), q(1), q(0), q(0)], true).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");
        let b2 = IntMat::lit(&[&[2], &[-2]]);
        assert!(horn_generators(&b2, &[q(0), q(0)], true).is_ok());
        let b3 = IntMat::lit(&[&[-1], &[1]]);
        assert!(horn_generators(&b3, &[q(0), q(1)], true).unwrap_err().to_string().contains("row 2"));
    }

    #[test]
    fn vacuous_restriction() {
        let b = IntMat::identity(2);
        let r = restriction_witnesses_raw(&IntMat::zeros(0, 2), &b, &[q(0), q(0)]).unwrap();
        assert!(r.passed);
    }
}
