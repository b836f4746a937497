//! Truncated logarithm-free series solutions.
//!
//! A series is `sum_u c_u w^(v+u)` over offsets `u` in a lattice, cut off
//! where an affine grading `cone . u + offset` exceeds `order`. Offsets that
//! violate one of the support constraints carry coefficient zero; offsets
//! above the order are simply unknown.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{hnf_col, GaleContext};
use crate::matrix::{qla, IntMat};
use crate::polytope::umbrella_simplices;
use crate::rational::{dot, dot_iq, falling, floor_i64, fmt_q, is_integer, q, to_i64, Q};
use crate::systems::{binomial_exponents, horn_generators, SystemKind, SystemSpec};
use crate::weyl::WeylOp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Z,
}

/// `g . u + c >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "crate::rational::serde_q::vec")]
    pub g: Vec<Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
}

impl Constraint {
    pub fn holds(&self, u: &[i64]) -> bool {
        dot_iq(u, &self.g) + &self.c >= Q::zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    pub side: Side,
    #[serde(rename = "baseExponent", with = "crate::rational::serde_q::vec")]
    pub base_exponent: Vec<Q>,
    /// Columns span the lattice of offsets.
    #[serde(rename = "supportLattice")]
    pub support_lattice: IntMat,
    /// Grading weight; the grading of `u` is `cone . u + offset`.
    #[serde(with = "crate::rational::serde_q::vec")]
    pub cone: Vec<Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub offset: Q,
    pub constraints: Vec<Constraint>,
    #[serde(with = "terms_wire")]
    pub terms: BTreeMap<Vec<i64>, Q>,
    pub order: i64,
}

mod terms_wire {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term {
        u: Vec<i64>,
        c: String,
    }

    pub fn serialize<S: Serializer>(t: &BTreeMap<Vec<i64>, Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Term> = t.iter().map(|(u, c)| Term { u: u.clone(), c: fmt_q(c) }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Vec<i64>, Q>, D::Error> {
        let v = Vec::<Term>::deserialize(d)?;
        v.into_iter()
            .map(|t| Ok((t.u, crate::rational::parse_q(&t.c).map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

impl TruncatedSeries {
    pub fn grading(&self, u: &[i64]) -> Q {
        dot_iq(u, &self.cone) + &self.offset
    }

    pub fn satisfies_constraints(&self, u: &[i64]) -> bool {
        self.constraints.iter().all(|c| c.holds(u))
    }

    pub fn coeff(&self, u: &[i64]) -> Q {
        self.terms.get(u).cloned().unwrap_or_else(Q::zero)
    }

    pub fn exponent(&self, u: &[i64]) -> Vec<Q> {
        self.base_exponent.iter().zip(u).map(|(v, &x)| v + q(x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn pretty(&self) -> String {
        let var = match self.side {
            Side::X => "x",
            Side::Z => "z",
        };
        let v: Vec<String> = self.base_exponent.iter().map(fmt_q).collect();
        let mut s = format!("{var}^({}) * [\n", v.join(", "));
        let mut by_grade: Vec<(&Vec<i64>, &Q)> = self.terms.iter().collect();
        by_grade.sort_by(|a, b| self.grading(a.0).cmp(&self.grading(b.0)).then(a.0.cmp(b.0)));
        for (u, c) in by_grade {
            let us: Vec<String> = u.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("  [{}] u=({}) {}\n", fmt_q(&self.grading(u)), us.join(","), fmt_q(c)));
        }
        s.push_str(&format!("] + O(grading > {})\n", self.order));
        s
    }
}

/// Termwise action of an operator, keyed by output offset.
pub fn apply_to_series(op: &WeylOp, s: &TruncatedSeries) -> BTreeMap<Vec<i64>, Q> {
    let mut out: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
    for (u, cu) in &s.terms {
        let e = s.exponent(u);
        for ((a, b), c) in op.terms() {
            let mut f = c * cu;
            for i in 0..e.len() {
                f *= falling(&e[i], b[i]);
            }
            if f.is_zero() {
                continue;
            }
            let t: Vec<i64> = (0..u.len()).map(|i| u[i] + a[i] - b[i]).collect();
            *out.entry(t).or_insert_with(Q::zero) += f;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub u: Vec<i64>,
    #[serde(with = "crate::rational::serde_q")]
    pub grading: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpResidual {
    pub op: usize,
    /// Output offsets inspected (all contributions known).
    pub checked: usize,
    /// Output offsets within the safe order with a contribution beyond the
    /// truncation.
    pub incomplete: usize,
    pub nonzero: usize,
    #[serde(rename = "maxResidual", with = "crate::rational::serde_q")]
    pub max_residual: Q,
    /// Nonzero residual of least grading.
    #[serde(rename = "firstNonzero")]
    pub first_nonzero: Option<Residual>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilationReport {
    #[serde(rename = "safeOrder")]
    pub safe_order: i64,
    pub ops: Vec<OpResidual>,
    pub passed: bool,
}

impl AnnihilationReport {
    pub fn pretty(&self) -> String {
        let mut s = format!(
            "annihilation through grading {}: {}\n",
            self.safe_order,
            if self.passed { "zero residual" } else { "FAILED" }
        );
        for r in &self.ops {
            s.push_str(&format!(
                "  op {}: checked {}, incomplete {}, nonzero {}, max |residual| {}",
                r.op + 1,
                r.checked,
                r.incomplete,
                r.nonzero,
                fmt_q(&r.max_residual)
            ));
            if let Some(f) = &r.first_nonzero {
                s.push_str(&format!(" (first at grading {})", fmt_q(&f.grading)));
            }
            s.push('\n');
        }
        s
    }
}

/// Apply every operator and require zero output through `safe_order`.
pub fn annihilation_check(ops: &[WeylOp], s: &TruncatedSeries, safe_order: i64) -> AnnihilationReport {
    let safe = q(safe_order);
    let mut reports = Vec::with_capacity(ops.len());
    for (idx, op) in ops.iter().enumerate() {
        let out = apply_to_series(op, s);
        let mut targets: BTreeSet<Vec<i64>> = out.keys().cloned().collect();
        // Offsets reached only from beyond the truncation would be missed.
        for u in s.terms.keys() {
            for (a, b) in op.terms().keys() {
                targets.insert((0..u.len()).map(|i| u[i] + a[i] - b[i]).collect());
            }
        }
        let mut r = OpResidual {
            op: idx,
            checked: 0,
            incomplete: 0,
            nonzero: 0,
            max_residual: Q::zero(),
            first_nonzero: None,
        };
        for t in targets {
            let g = s.grading(&t);
            if g > safe {
                continue;
            }
            let complete = op.terms().keys().all(|(a, b)| {
                let src: Vec<i64> = (0..t.len()).map(|i| t[i] - a[i] + b[i]).collect();
                !s.satisfies_constraints(&src) || s.grading(&src) <= q(s.order)
            });
            if !complete {
                r.incomplete += 1;
                continue;
            }
            r.checked += 1;
            let v = out.get(&t).cloned().unwrap_or_else(Q::zero);
            if !v.is_zero() {
                r.nonzero += 1;
                if v.abs() > r.max_residual {
                    r.max_residual = v.abs();
                }
                if r.first_nonzero.as_ref().map_or(true, |f| g < f.grading) {
                    r.first_nonzero = Some(Residual { u: t.clone(), grading: g, value: v });
                }
            }
        }
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.nonzero == 0 && r.incomplete == 0);
    AnnihilationReport { safe_order, ops: reports, passed }
}

fn offsets_upto(m: usize, order: i64) -> Vec<Vec<i64>> {
    let mut out = vec![];
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    if order >= 0 {
        rec(0, order, &mut vec![0; m], &mut out);
    }
    out.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then(a.cmp(b)));
    out
}

/// Series solution `sum_u c_u z^(v+u)`, `u` in `N^m`, of a Horn system.
pub fn horn_series(horn: &SystemSpec, start: &[Q], order: i64) -> Result<TruncatedSeries> {
    let factored = horn
        .factored
        .as_ref()
        .ok_or_else(|| Error::Precondition("not a Horn system".into()))?;
    let m = factored.len();
    if start.len() != m {
        return Err(Error::Dimension(format!("start exponent must have {m} entries")));
    }
    if order < 0 {
        return Err(Error::Precondition("order must be nonnegative".into()));
    }
    let at = |u: &[i64]| -> Vec<Q> { start.iter().zip(u).map(|(v, &x)| v + q(x)).collect() };
    let mut terms: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
    for u in offsets_upto(m, order) {
        let c = if u.iter().all(|&x| x == 0) {
            Q::one()
        } else {
            let mut val = None;
            for h in factored {
                if u[h.k] == 0 {
                    continue;
                }
                let qv = h.q_poly.eval(&at(&u));
                if qv.is_zero() {
                    return Err(Error::Resonant(format!(
                        "resonant start exponent: q_{}(v+u) = 0 at u = {:?}",
                        h.k + 1,
                        u
                    )));
                }
                if val.is_none() {
                    let mut prev = u.clone();
                    prev[h.k] -= 1;
                    let pv = h.p_poly.eval(&at(&prev));
                    val = Some(&terms[&prev] * pv / qv);
                }
            }
            val.expect("some positive entry")
        };
        // Every column's recurrence must hold, including the boundary ones.
        for h in factored {
            let lhs = &c * h.q_poly.eval(&at(&u));
            let rhs = if u[h.k] > 0 {
                let mut prev = u.clone();
                prev[h.k] -= 1;
                &terms[&prev] * h.p_poly.eval(&at(&prev))
            } else {
                Q::zero()
            };
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "no series with this start exponent: recurrence for column {} fails at u = {:?}",
                    h.k + 1,
                    u
                )));
            }
        }
        terms.insert(u, c);
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(TruncatedSeries {
        side: Side::Z,
        base_exponent: start.to_vec(),
        support_lattice: IntMat::identity(m),
        cone: vec![Q::one(); m],
        offset: Q::zero(),
        constraints: (0..m)
            .map(|k| Constraint { g: (0..m).map(|i| if i == k { Q::one() } else { Q::zero() }).collect(), c: Q::zero() })
            .collect(),
        terms,
        order,
    })
}

fn grading_matrix(sys: &SystemSpec) -> Result<&IntMat> {
    sys.a
        .as_ref()
        .ok_or_else(|| Error::Precondition("system has no grading matrix".into()))
}

/// Binomial moves `(u+, u-)` of the generators.
fn moves(sys: &SystemSpec) -> Result<Vec<(Vec<i64>, Vec<i64>)>> {
    sys.generators.iter().map(binomial_exponents).collect()
}

fn falling_vec(e: &[Q], k: &[i64]) -> Q {
    e.iter().zip(k).fold(Q::one(), |acc, (x, &j)| acc * falling(x, j))
}

/// Γ-type series `sum_u c_u x^(v+u)` annihilated by the binomial generators,
/// with `u` running over the lattice they span.
pub fn gkz_series(sys: &SystemSpec, v: &[Q], order: i64) -> Result<TruncatedSeries> {
    gkz_series_with(sys, &sys.beta, v, order)
}

fn gkz_series_with(sys: &SystemSpec, beta: &[Q], v: &[Q], order: i64) -> Result<TruncatedSeries> {
    let a = grading_matrix(sys)?;
    let n = a.cols();
    if v.len() != n {
        return Err(Error::Dimension(format!("start exponent must have {n} entries")));
    }
    if a.mul_qvec(v) != beta {
        return Err(Error::Precondition("start exponent does not satisfy A v = beta".into()));
    }
    let mv = moves(sys)?;
    let lat = if mv.is_empty() {
        IntMat::zeros(n, 0)
    } else {
        let cols: Vec<Vec<i64>> = mv.iter().map(|(p, m)| p.iter().zip(m).map(|(x, y)| x - y).collect()).collect();
        hnf_col(&IntMat::from_cols(&cols, n)?).basis()
    };
    let r = lat.cols();
    let jset: Vec<usize> = (0..n).filter(|&j| is_integer(&v[j])).collect();
    if jset.iter().any(|&j| v[j] < Q::zero()) {
        return Err(Error::Precondition("integer coordinates of the start exponent must be nonnegative".into()));
    }
    let lat_j = lat.select_rows(&jset);
    if lat_j.rank() != r {
        return Err(Error::Precondition(
            "start exponent has too few integer coordinates for a graded truncation".into(),
        ));
    }
    let floor: Vec<i64> = jset.iter().map(|&j| to_i64(&v[j]).expect("integer")).collect();
    let base_grade: i64 = floor.iter().sum();
    if base_grade > order {
        return Err(Error::Precondition("order is below the grading of the start exponent".into()));
    }
    // Support points: integer u_J with v_J + u_J >= 0 lifting to the lattice.
    let lj = lat_j.to_q();
    let mut support: BTreeSet<Vec<i64>> = BTreeSet::new();
    for p in offsets_upto(jset.len(), order) {
        let y: Vec<Q> = p.iter().zip(&floor).map(|(x, f)| q(x - f)).collect();
        let Some(t) = qla::solve(&lj, &y) else { continue };
        if !t.iter().all(is_integer) {
            continue;
        }
        let u = lat.mul_qvec(&t);
        if (0..jset.len()).any(|i| u[jset[i]] != y[i]) {
            continue;
        }
        support.insert(u.iter().map(|x| to_i64(x).expect("integral")).collect());
    }
    let cone: Vec<Q> = (0..n).map(|j| if jset.contains(&j) { Q::one() } else { Q::zero() }).collect();
    let constraints: Vec<Constraint> = jset
        .iter()
        .map(|&j| Constraint {
            g: (0..n).map(|i| if i == j { Q::one() } else { Q::zero() }).collect(),
            c: v[j].clone(),
        })
        .collect();
    let mut s = TruncatedSeries {
        side: Side::X,
        base_exponent: v.to_vec(),
        support_lattice: lat,
        cone,
        offset: q(base_grade),
        constraints,
        terms: BTreeMap::new(),
        order,
    };
    let ex = |u: &[i64]| -> Vec<Q> { v.iter().zip(u).map(|(a, &b)| a + q(b)).collect() };
    let add = |u: &[i64], w: &[i64], sgn: i64| -> Vec<i64> { u.iter().zip(w).map(|(a, b)| a + sgn * b).collect() };

    // Relation for move (p, m), w = p - m, at offset t:
    //   c_t [v+t]_p = c_{t-w} [v+t-w]_m.
    let mut known: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
    let zero = vec![0i64; n];
    known.insert(zero.clone(), Q::one());
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        let cx = known[&x].clone();
        for (p, m) in &mv {
            let w: Vec<i64> = p.iter().zip(m).map(|(a, b)| a - b).collect();
            let fwd = add(&x, &w, 1);
            if support.contains(&fwd) && !known.contains_key(&fwd) {
                let lhs = falling_vec(&ex(&fwd), p);
                if !lhs.is_zero() {
                    known.insert(fwd.clone(), &cx * falling_vec(&ex(&x), m) / lhs);
                    queue.push_back(fwd);
                }
            }
            let back = add(&x, &w, -1);
            if support.contains(&back) && !known.contains_key(&back) {
                let den = falling_vec(&ex(&back), m);
                if !den.is_zero() {
                    known.insert(back.clone(), &cx * falling_vec(&ex(&x), p) / den);
                    queue.push_back(back);
                }
            }
        }
    }
    if let Some(u) = support.iter().find(|u| !known.contains_key(*u)) {
        return Err(Error::Resonant(format!(
            "resonant start exponent: offset {u:?} is not reached by any recurrence with a nonvanishing factor"
        )));
    }
    s.terms = known;
    // Consistency of every relation whose two sides are both determined.
    let value = |s: &TruncatedSeries, t: &[i64]| -> Option<Q> {
        if !s.satisfies_constraints(t) {
            Some(Q::zero())
        } else if s.grading(t) > q(order) {
            None
        } else {
            Some(s.coeff(t))
        }
    };
    for t in support.iter() {
        for (p, m) in &mv {
            let w: Vec<i64> = p.iter().zip(m).map(|(a, b)| a - b).collect();
            for (hi, lo) in [(t.clone(), add(t, &w, -1)), (add(t, &w, 1), t.clone())] {
                let (Some(ch), Some(cl)) = (value(&s, &hi), value(&s, &lo)) else { continue };
                let fp = falling_vec(&ex(&hi), p);
                let fm = falling_vec(&ex(&lo), m);
                if ch * &fp != cl * &fm {
                    let which = if fp.is_zero() { "[v+u]_{u+}" } else { "[v+u-w]_{u-}" };
                    return Err(Error::Resonant(format!(
                        "resonant start exponent: recurrence for move {w:?} fails at u = {hi:?} (factor {which} = {})",
                        fmt_q(if fp.is_zero() { &fp } else { &fm })
                    )));
                }
            }
        }
    }
    s.terms.retain(|_, c| !c.is_zero());
    Ok(s)
}

/// A starting exponent read off a simplex of the umbrella triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartExponent {
    pub simplex: Vec<usize>,
    pub k: Vec<i64>,
    #[serde(with = "crate::rational::serde_q::vec")]
    pub v: Vec<Q>,
}

/// For each simplex `sigma` of volume `D`, `D` exponents `v` with
/// `v_{sigma^c} = k` in `N` and `A v = beta`, pairwise distinct modulo `Z^n`.
pub fn start_exponents(a: &IntMat, beta: &[Q]) -> Result<Vec<StartExponent>> {
    let n = a.cols();
    if beta.len() != a.rows() {
        return Err(Error::Dimension("beta must have one entry per row of A".into()));
    }
    let mut out = Vec::new();
    for (sigma, vol) in umbrella_simplices(a) {
        let rest: Vec<usize> = (0..n).filter(|j| !sigma.contains(j)).collect();
        let a_s = a.select_cols(&sigma).to_q();
        let a_r = a.select_cols(&rest);
        let mut found: Vec<Vec<Q>> = Vec::new();
        let bound = vol * rest.len().max(1) as i64;
        'outer: for k in offsets_upto(rest.len(), bound) {
            let rhs: Vec<Q> = beta.iter().zip(a_r.mul_vec(&k)).map(|(b, x)| b - q(x)).collect();
            let vs = qla::solve(&a_s, &rhs).ok_or_else(|| Error::Degenerate("singular simplex".into()))?;
            let mut v = vec![Q::zero(); n];
            for (i, &j) in sigma.iter().enumerate() {
                v[j] = vs[i].clone();
            }
            for (i, &j) in rest.iter().enumerate() {
                v[j] = q(k[i]);
            }
            for f in &found {
                if f.iter().zip(&v).all(|(x, y)| is_integer(&(x - y))) {
                    continue 'outer;
                }
            }
            found.push(v.clone());
            out.push(StartExponent { simplex: sigma.clone(), k, v });
            if found.len() as i64 == vol {
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub count: usize,
    pub starts: Vec<StartExponent>,
    pub warnings: Vec<String>,
}

/// Count the start exponents that yield a valid truncated series.
pub fn rank_by_series(sys: &SystemSpec, beta: &[Q], order: i64) -> Result<RankReport> {
    let a = grading_matrix(sys)?;
    let mut report = RankReport { count: 0, starts: vec![], warnings: vec![] };
    for st in start_exponents(a, beta)? {
        match gkz_series_with(sys, beta, &st.v, order) {
            Ok(_) => {
                report.count += 1;
                report.starts.push(st);
            }
            Err(e) => report.warnings.push(format!("simplex {:?}, k = {:?}: {e}", st.simplex, st.k)),
        }
    }
    Ok(report)
}

/// Image of `phi = x^kappa f(x^B)`: the series `f`, split by the fractional
/// part of its exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusFactorImage {
    /// The component with integral exponent offsets.
    pub principal: TruncatedSeries,
    /// All components, keyed by the fractional shift `r`.
    pub components: Vec<(Vec<String>, TruncatedSeries)>,
    #[serde(rename = "indexCount")]
    pub index_count: i64,
}

pub fn torus_factor_map(phi: &TruncatedSeries, ctx: &GaleContext, kappa: &[Q]) -> Result<TorusFactorImage> {
    if phi.side != Side::X {
        return Err(Error::Precondition("torus_factor_map takes an x-side series".into()));
    }
    let n = ctx.n();
    if kappa.len() != n || phi.base_exponent.len() != n {
        return Err(Error::Dimension(format!("expected vectors of length {n}")));
    }
    if ctx.c.vec_mul_q(kappa).iter().any(|x| !x.is_zero()) {
        return Err(Error::Precondition("kappa C must vanish".into()));
    }
    let bq = ctx.b.to_q();
    let solve_b = |x: &[Q]| -> Option<Vec<Q>> {
        let w = qla::solve(&bq, x)?;
        (ctx.b.mul_qvec(&w) == x).then_some(w)
    };
    let diff: Vec<Q> = phi.base_exponent.iter().zip(kappa).map(|(v, k)| v - k).collect();
    let w0 = solve_b(&diff).ok_or_else(|| Error::Precondition("v - kappa is outside the span of B".into()))?;
    let m = ctx.m();
    let mut parts: BTreeMap<Vec<Q>, BTreeMap<Vec<i64>, Q>> = BTreeMap::new();
    parts.entry(vec![Q::zero(); m]).or_default();
    for (u, c) in &phi.terms {
        let uq: Vec<Q> = u.iter().map(|&x| q(x)).collect();
        let t = solve_b(&uq).ok_or_else(|| Error::Precondition(format!("offset {u:?} is outside the span of B")))?;
        let fl: Vec<i64> = t.iter().map(floor_i64).collect();
        let r: Vec<Q> = t.iter().zip(&fl).map(|(x, &f)| x - q(f)).collect();
        parts.entry(r).or_default().insert(fl, c.clone());
    }
    let bt: Vec<Vec<Q>> = (0..m).map(|k| ctx.b.col(k).iter().map(|&x| q(x)).collect()).collect();
    // Pull a linear form on x-offsets back along u = B (r + u_z).
    let pull = |g: &[Q], r: &[Q]| -> (Vec<Q>, Q) {
        let gz: Vec<Q> = bt.iter().map(|col| dot(g, col)).collect();
        (gz.clone(), dot(&gz, r))
    };
    let mut comps = Vec::new();
    for (r, terms) in parts {
        let (cone, shift) = pull(&phi.cone, &r);
        let constraints = phi
            .constraints
            .iter()
            .map(|c| {
                let (g, s) = pull(&c.g, &r);
                Constraint { g, c: &c.c + s }
            })
            .collect();
        let series = TruncatedSeries {
            side: Side::Z,
            base_exponent: w0.iter().zip(&r).map(|(a, b)| a + b).collect(),
            support_lattice: IntMat::identity(m),
            cone,
            offset: &phi.offset + shift,
            constraints,
            terms,
            order: phi.order,
        };
        comps.push((r.iter().map(fmt_q).collect(), series));
    }
    let principal = comps[0].1.clone();
    Ok(TorusFactorImage { principal, components: comps, index_count: ctx.lattice_index })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferRank {
    #[serde(rename = "xCount")]
    pub x_count: usize,
    /// Nonzero z-side components, each annihilated by `Horn(B, kappa)`.
    #[serde(rename = "zCount")]
    pub z_count: usize,
    #[serde(rename = "latticeIndex")]
    pub lattice_index: i64,
    pub warnings: Vec<String>,
}

/// Count x-side series of the GKZ system at `A kappa`, push each through
/// `torus_factor_map`, and count the nonzero z-side components that pass
/// the Horn annihilation check through `order - 3`.
pub fn rank_by_transfer(sys: &SystemSpec, ctx: &GaleContext, kappa: &[Q], order: i64) -> Result<TransferRank> {
    if sys.kind != SystemKind::Gkz && sys.kind != SystemKind::LatticeBasisBinomial {
        return Err(Error::Precondition("expected an x-side binomial system".into()));
    }
    let beta = ctx.a.mul_qvec(kappa);
    let horn = horn_generators(&ctx.b, kappa, false)?;
    let mut out = TransferRank { x_count: 0, z_count: 0, lattice_index: ctx.lattice_index, warnings: vec![] };
    for st in start_exponents(&ctx.a, &beta)? {
        let phi = match gkz_series_with(sys, &beta, &st.v, order) {
            Ok(p) => p,
            Err(e) => {
                out.warnings.push(format!("simplex {:?}: {e}", st.simplex));
                continue;
            }
        };
        out.x_count += 1;
        let img = torus_factor_map(&phi, ctx, kappa)?;
        for (r, comp) in &img.components {
            if comp.is_zero() {
                continue;
            }
            let rep = annihilation_check(&horn.generators, comp, order - 3);
            if rep.passed {
                out.z_count += 1;
            } else {
                out.warnings.push(format!("component r = {r:?} of simplex {:?} is not annihilated", st.simplex));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_gale_context;
    use crate::rational::{qf, rising};
    use crate::systems::gkz_system;

    #[test]
    fn gauss_coefficients() {
        let (a, b, c) = (qf(1, 2), qf(1, 3), qf(5, 7));
        let bm = IntMat::lit(&[&[1], &[1], &[-1], &[-1]]);
        let kappa = vec![q(0), &c - q(1), -a.clone(), -b.clone()];
        let h = horn_generators(&bm, &kappa, false).unwrap();
        let s = horn_series(&h, &[q(0)], 12).unwrap();
        for j in 0..=12i64 {
            let want = rising(&a, j) * rising(&b, j) / (rising(&c, j) * rising(&q(1), j));
            assert_eq!(s.coeff(&[j]), want);
        }
        assert!(annihilation_check(&h.generators, &s, 10).passed);
    }

    #[test]
    fn resonant_horn_start() {
        let bm = IntMat::lit(&[&[1], &[1], &[-1], &[-1]]);
        let kappa = vec![q(0), q(1), qf(-1, 2), qf(-1, 3)];
        let h = horn_generators(&bm, &kappa, false).unwrap();
        assert!(matches!(horn_series(&h, &[q(-1)], 4), Err(Error::Resonant(_))));
    }

    #[test]
    fn segment_series_and_rank() {
        let a = IntMat::lit(&[&[1, 2]]);
        let ctx = build_gale_context(&a, None, None).unwrap();
        let sys = gkz_system(&ctx, &[qf(1, 3), q(0)], 2).unwrap();
        let s = gkz_series(&sys, &[q(0), qf(1, 6)], 10).unwrap();
        // c_t (2t)(2t-1) = c_{t-1} (1/6 - t + 1) along u = t (2, -1).
        let mut c = Q::one();
        for t in 1..=5i64 {
            c = c * (qf(1, 6) - q(t) + q(1)) / (q(2 * t) * q(2 * t - 1));
            assert_eq!(s.coeff(&[2 * t, -t]), c);
        }
        assert!(annihilation_check(&sys.all_ops(), &s, 7).passed);
        assert_eq!(rank_by_series(&sys, &[qf(1, 3)], 8).unwrap().count, 2);
    }

    #[test]
    fn twisted_cubic_rank() {
        let a = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let ctx = build_gale_context(&a, None, None).unwrap();
        let beta = vec![qf(1, 2), qf(1, 3)];
        let kappa = crate::lattice::solve_parameter(&a, &beta, crate::lattice::ParameterMode::Any).unwrap();
        let sys = gkz_system(&ctx, &kappa, 2).unwrap();
        let r = rank_by_series(&sys, &beta, 8).unwrap();
        assert_eq!(r.count, 3, "{:?}", r.warnings);
        for st in &r.starts {
            let s = gkz_series(&sys, &st.v, 8).unwrap();
            assert!(annihilation_check(&sys.all_ops(), &s, 5).passed);
        }
    }

    #[test]
    fn constant_series() {
        let a = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let ctx = build_gale_context(&a, None, None).unwrap();
        let sys = gkz_system(&ctx, &vec![q(0); 4], 2).unwrap();
        let s = gkz_series(&sys, &vec![q(0); 4], 6).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert!(annihilation_check(&sys.all_ops(), &s, 3).passed);
    }

    #[test]
    fn identity_rank_one() {
        let a = IntMat::identity(2);
        let ctx = build_gale_context(&a, None, None).unwrap();
        let sys = gkz_system(&ctx, &[qf(1, 2), qf(1, 3)], 1).unwrap();
        assert_eq!(rank_by_series(&sys, &[qf(1, 2), qf(1, 3)], 4).unwrap().count, 1);
    }

    #[test]
    fn gauss_transfer() {
        let a = IntMat::lit(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, -1]]);
        let b = IntMat::lit(&[&[1], &[1], &[-1], &[-1]]);
        let ctx = build_gale_context(&a, Some(&b), None).unwrap();
        let kg = vec![q(0), qf(5, 7) - q(1), qf(-1, 2), qf(-1, 3)];
        let beta = a.mul_qvec(&kg);
        let kappa = crate::lattice::solve_parameter(&a, &beta, crate::lattice::ParameterMode::AnnihilatingC).unwrap();
        let sys = gkz_system(&ctx, &kappa, 2).unwrap();
        // v from the simplex {2,3,4}: x1 stays an integer coordinate.
        let vs = qla::solve(&a.select_cols(&[1, 2, 3]).to_q(), &beta).unwrap();
        let v = vec![q(0), vs[0].clone(), vs[1].clone(), vs[2].clone()];
        let phi = gkz_series(&sys, &v, 11).unwrap();
        assert!(annihilation_check(&sys.all_ops(), &phi, 8).passed);
        let img = torus_factor_map(&phi, &ctx, &kappa).unwrap();
        assert_eq!(img.index_count, 1);
        assert_eq!(img.components.len(), 1);
        let horn = horn_generators(&b, &kappa, false).unwrap();
        assert!(annihilation_check(&horn.generators, &img.principal, 8).passed);
    }

    #[test]
    fn rank_scaling_index_three() {
        let a = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let at = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let b = IntMat::lit(&[&[-1, 2], &[0, -3], &[3, 0], &[-2, 1]]);
        let ctx = build_gale_context(&a, Some(&b), Some(&at)).unwrap();
        let beta = vec![qf(1, 2), qf(1, 3)];
        let kappa = crate::lattice::solve_parameter(&a, &beta, crate::lattice::ParameterMode::AnnihilatingC).unwrap();
        let sys = gkz_system(&ctx, &kappa, 2).unwrap();
        let t = rank_by_transfer(&sys, &ctx, &kappa, 8).unwrap();
        assert_eq!((t.x_count, t.z_count, t.lattice_index), (3, 9, 3), "{:?}", t.warnings);
    }
}
