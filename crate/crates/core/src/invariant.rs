//! Torus invariantization: the maps δ from torus-invariant operators to the
//! z-side Weyl algebra, the fractional-power module they land in, the partial
//! inverse ψ, and explicit presentations of invariantized systems.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::GaleContext;
use crate::matrix::{qla, IntMat};
use crate::poly::{var_names, Poly};
use crate::rational::{fmt_q, is_integer, q, to_i64, Q};
use crate::systems::{horn_generators, SystemKind, SystemSpec};
use crate::weyl::{ADegree, WeylOp, WeylRing};

/// Element `sum_v z^v g_v(η)` of the free module over the z-side Laurent
/// Weyl algebra with fractional exponents `v`. Stored label-left: the
/// monomial `z^v` sits to the left of the η-polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracModuleElt {
    m: usize,
    terms: BTreeMap<Vec<Q>, Poly>,
}

/// One summand `Q_j z^(r_j)` of a [`FracModuleElt`], written label-right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Residue representative `j` of `Z^m / K Z^m`.
    pub residue: Vec<i64>,
    /// Smith coordinates of the residue, `0 <= k < varkappa`.
    #[serde(rename = "snfKey")]
    pub snf_key: Vec<i64>,
    /// Exponent `r_j = K^{-1} j` of the generator `z^(r_j)`.
    #[serde(with = "crate::rational::serde_q::vec")]
    pub label: Vec<Q>,
    pub op: WeylOp,
}

impl FracModuleElt {
    pub fn zero(m: usize) -> Self {
        FracModuleElt { m, terms: BTreeMap::new() }
    }

    /// `z^v g(η)`.
    pub fn monomial(v: Vec<Q>, g: Poly) -> Self {
        let mut e = Self::zero(v.len());
        e.add_term(v, g);
        e
    }

    /// Embed an integral z-side operator.
    pub fn from_op(op: &WeylOp) -> Self {
        let m = op.ring().var_count;
        let mut e = Self::zero(m);
        for (s, g) in op.theta_form() {
            e.add_term(s.iter().map(|&x| q(x)).collect(), g);
        }
        e
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Q>, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, v: Vec<Q>, g: Poly) {
        let slot = self.terms.entry(v.clone()).or_insert_with(|| Poly::zero(g.nvars()));
        *slot = &*slot + &g;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add(&self, o: &FracModuleElt) -> FracModuleElt {
        let mut e = self.clone();
        for (v, g) in &o.terms {
            e.add_term(v.clone(), g.clone());
        }
        e
    }

    pub fn scale(&self, c: &Q) -> FracModuleElt {
        let mut e = Self::zero(self.m);
        for (v, g) in &self.terms {
            e.add_term(v.clone(), g.scale(c));
        }
        e
    }

    /// `z^e . (sum z^v g) = sum z^(v+e) g`.
    pub fn left_mul_z(&self, e: &[Q]) -> FracModuleElt {
        let mut out = Self::zero(self.m);
        for (v, g) in &self.terms {
            out.add_term(v.iter().zip(e).map(|(a, b)| a + b).collect(), g.clone());
        }
        out
    }

    /// `(sum z^v g(η)) . z^e = sum z^(v+e) g(η + e)`.
    pub fn right_mul_z(&self, e: &[Q]) -> FracModuleElt {
        let mut out = Self::zero(self.m);
        for (v, g) in &self.terms {
            out.add_term(v.iter().zip(e).map(|(a, b)| a + b).collect(), g.translate(e));
        }
        out
    }

    /// `η_k . z^v g = z^v (η_k + v_k) g`.
    pub fn left_mul_eta(&self, k: usize) -> FracModuleElt {
        let mut out = Self::zero(self.m);
        for (v, g) in &self.terms {
            let f = Poly::linear(
                &(0..self.m).map(|i| if i == k { Q::one() } else { Q::zero() }).collect::<Vec<_>>(),
                v[k].clone(),
            );
            out.add_term(v.clone(), &f * g);
        }
        out
    }

    /// Left action of an integral z-side operator `sum_s z^s h_s(η)`:
    /// `h(η) z^v = z^v h(η + v)`.
    pub fn left_mul_op(&self, op: &WeylOp) -> FracModuleElt {
        let mut out = Self::zero(self.m);
        for (s, h) in op.theta_form() {
            let sq: Vec<Q> = s.iter().map(|&x| q(x)).collect();
            for (v, g) in &self.terms {
                let e: Vec<Q> = v.iter().zip(&sq).map(|(a, b)| a + b).collect();
                out.add_term(e, &h.translate(v) * g);
            }
        }
        out
    }

    /// Remove a common left prefix `z^r`, if every exponent minus `r` is
    /// integral; the result is an integral operator.
    pub fn strip_left(&self, r: &[Q]) -> Option<WeylOp> {
        let mut form: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
        for (v, g) in &self.terms {
            let w: Option<Vec<i64>> = v.iter().zip(r).map(|(a, b)| to_i64(&(a - b))).collect();
            form.insert(w?, g.clone());
        }
        WeylOp::from_theta_form(WeylRing::z_laurent(self.m), &form).ok()
    }

    /// The integral operator, if every exponent is integral.
    pub fn to_op(&self) -> Option<WeylOp> {
        self.strip_left(&vec![Q::zero(); self.m])
    }

    /// Split into label-right summands `Q_j z^(r_j)`, one per residue class.
    pub fn components(&self, ctx: &GaleContext) -> Result<Vec<Component>> {
        let kq = ctx.k.to_q();
        let kinv = ctx.k_inverse();
        let mut buckets: BTreeMap<Vec<i64>, BTreeMap<Vec<i64>, Poly>> = BTreeMap::new();
        for (v, g) in &self.terms {
            let kv: Vec<Q> = kq.iter().map(|row| crate::rational::dot(row, v)).collect();
            let kv: Vec<i64> = kv
                .iter()
                .map(|x| to_i64(x).ok_or_else(|| Error::OutsideLattice(vec![])))
                .collect::<Result<_>>()?;
            let (w, j) = ctx.reduce_mod_k(&kv);
            let r: Vec<Q> = kinv.iter().map(|row| crate::rational::dot(row, &crate::rational::qvec(&j))).collect();
            // z^v g(η) = z^w g(η - r) z^r
            let neg: Vec<Q> = r.iter().map(|x| -x.clone()).collect();
            let e = buckets.entry(j).or_default().entry(w).or_insert_with(|| Poly::zero(self.m));
            *e = &*e + &g.translate(&neg);
        }
        let ring = WeylRing::z_laurent(self.m);
        let mut out = Vec::new();
        for (j, mut form) in buckets {
            form.retain(|_, g| !g.is_zero());
            if form.is_empty() {
                continue;
            }
            let label = kinv.iter().map(|row| crate::rational::dot(row, &crate::rational::qvec(&j))).collect();
            out.push(Component {
                snf_key: ctx.snf_key(&j),
                residue: j,
                label,
                op: WeylOp::from_theta_form(ring, &form)?,
            });
        }
        Ok(out)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = var_names("eta", self.m);
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(v, g)| {
                let z = z_monomial(v);
                if z.is_empty() {
                    format!("({})", g.display(&names))
                } else {
                    format!("{z}*({})", g.display(&names))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Text form of `z^v` with rational exponents, empty for `v = 0`.
pub fn z_monomial(v: &[Q]) -> String {
    v.iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| {
            if e.is_one() {
                format!("z{}", i + 1)
            } else if is_integer(e) {
                format!("z{}^{}", i + 1, fmt_q(e))
            } else {
                format!("z{}^({})", i + 1, fmt_q(e))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for FracModuleElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[derive(Serialize, Deserialize)]
struct EltTerm {
    #[serde(with = "crate::rational::serde_q::vec")]
    z: Vec<Q>,
    poly: Poly,
}

#[derive(Serialize, Deserialize)]
struct EltWire {
    m: usize,
    terms: Vec<EltTerm>,
}

impl Serialize for FracModuleElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EltWire {
            m: self.m,
            terms: self.terms.iter().map(|(v, g)| EltTerm { z: v.clone(), poly: g.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FracModuleElt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = EltWire::deserialize(d)?;
        let mut e = FracModuleElt::zero(w.m);
        for t in w.terms {
            if t.z.len() != w.m || t.poly.nvars() != w.m {
                return Err(serde::de::Error::custom("term length mismatch"));
            }
            e.add_term(t.z, t.poly);
        }
        Ok(e)
    }
}

/// `δ_{M,κ}` for a full-rank `n x m` matrix `M` whose columns span
/// `ker_Q(A)`: `x^(Mv) θ^u -> z^v prod (M_i η + κ_i)^(u_i)`, with `v`
/// rational when `M` spans a proper sublattice.
pub fn delta_basis(a: &IntMat, mm: &IntMat, kappa: &[Q], p: &WeylOp) -> Result<FracModuleElt> {
    let (n, m) = (mm.rows(), mm.cols());
    if p.ring().var_count != n || kappa.len() != n || a.cols() != n {
        return Err(Error::Dimension("operator, matrices and kappa disagree on n".into()));
    }
    let mq = mm.to_q();
    let images: Vec<Poly> = (0..n)
        .map(|i| Poly::linear(&mq[i], kappa[i].clone()))
        .collect();
    let mut out = FracModuleElt::zero(m);
    for (s, g) in p.theta_form() {
        let deg = a.mul_vec(&s);
        if deg.iter().any(|&x| x != 0) {
            return Err(Error::NotInvariant(deg));
        }
        let v = qla::solve(&mq, &crate::rational::qvec(&s)).ok_or_else(|| Error::OutsideLattice(s.clone()))?;
        out.add_term(v, g.substitute(&images, m));
    }
    Ok(out)
}

/// `δ_{B,κ}` on operators whose exponent differences lie in `Z B`.
pub fn delta(ctx: &GaleContext, kappa: &[Q], p: &WeylOp) -> Result<WeylOp> {
    let e = delta_basis(&ctx.a, &ctx.b, kappa, p)?;
    if let Some(v) = e.terms().keys().find(|v| v.iter().any(|x| !is_integer(x))) {
        let s = ctx.b.mul_qvec(v).iter().map(|x| to_i64(x).unwrap_or(0)).collect();
        return Err(Error::OutsideLattice(s));
    }
    Ok(e.to_op().expect("integral exponents"))
}

/// `δ̄`: the image with fractional exponents `z^(K^{-1} v')` for exponent
/// differences `C v'`, landing in `sum_k D_Z z^(k / varkappa)`.
pub fn delta_bar(ctx: &GaleContext, kappa: &[Q], p: &WeylOp) -> Result<FracModuleElt> {
    delta_basis(&ctx.a, &ctx.b, kappa, p)
}

/// The y-form `δ_{C, κ + ε_C}`, integral in the saturated coordinates.
pub fn delta_y(ctx: &GaleContext, kappa: &[Q], p: &WeylOp) -> Result<WeylOp> {
    let shifted: Vec<Q> = kappa.iter().zip(&ctx.eps_c).map(|(k, e)| k + q(*e)).collect();
    let e = delta_basis(&ctx.a, &ctx.c, &shifted, p)?;
    Ok(e.to_op().expect("C is a lattice basis"))
}

/// Transport a y-form through `y^1 (.) y^{-1}` and `y = z^(K^{-1})`,
/// `η_y = K η_z`.
pub fn y_to_z(ctx: &GaleContext, y_form: &WeylOp) -> FracModuleElt {
    let m = ctx.m();
    let kinv = ctx.k_inverse();
    let kq = ctx.k.to_q();
    let images: Vec<Poly> = (0..m).map(|i| Poly::linear(&kq[i], -Q::one())).collect();
    let mut out = FracModuleElt::zero(m);
    for (s, g) in y_form.theta_form() {
        let sq = crate::rational::qvec(&s);
        let v: Vec<Q> = kinv.iter().map(|row| crate::rational::dot(row, &sq)).collect();
        out.add_term(v, g.substitute(&images, m));
    }
    out
}

/// Row subset `R` of `B` (lexicographically first) with invertible `B_R`.
pub fn psi_rows(b: &IntMat) -> Result<Vec<usize>> {
    let (n, m) = (b.rows(), b.cols());
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        if b.select_rows(&idx).det() != 0 {
            return Ok(idx);
        }
        let mut i = m;
        loop {
            if i == 0 {
                return Err(Error::Precondition("B has no invertible m x m row block".into()));
            }
            i -= 1;
            if idx[i] < n - m + i {
                idx[i] += 1;
                for t in i + 1..m {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// ψ: `z^u -> x^(Bu)`, `η_i -> sum_k (N^{-1})_ik (θ_(R_k) - κ_(R_k))` with
/// `N = B_R`.
pub fn psi(ctx: &GaleContext, kappa: &[Q], op: &WeylOp) -> Result<WeylOp> {
    let (n, m) = (ctx.n(), ctx.m());
    if op.ring().var_count != m {
        return Err(Error::RingMismatch("psi expects a z-side operator".into()));
    }
    let rows = psi_rows(&ctx.b)?;
    let ninv = qla::inverse(&ctx.b.select_rows(&rows).to_q()).expect("invertible block");
    let images: Vec<Poly> = (0..m)
        .map(|i| {
            let mut p = Poly::zero(n);
            for (k, &r) in rows.iter().enumerate() {
                let lin = &Poly::var(n, r) - &Poly::constant(n, kappa[r].clone());
                p = &p + &lin.scale(&ninv[i][k]);
            }
            p
        })
        .collect();
    let mut form: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
    for (u, g) in op.theta_form() {
        let s = ctx.b.mul_vec(&u);
        let h = g.substitute(&images, n);
        let e = form.entry(s).or_insert_with(|| Poly::zero(n));
        *e = &*e + &h;
    }
    WeylOp::from_theta_form(WeylRing::x_laurent(n), &form)
}

/// Exponent `μ` such that `x^μ g` is torus invariant: `dexp - xexp` of the
/// leading term (highest ∂-order, then positive coefficient, then the
/// lexicographically largest `(dexp, xexp)`).
pub fn lift_exponent(g: &WeylOp) -> Result<Vec<i64>> {
    let lead = g
        .terms()
        .iter()
        .max_by(|((a1, b1), c1), ((a2, b2), c2)| {
            let o1: i64 = b1.iter().sum();
            let o2: i64 = b2.iter().sum();
            o1.cmp(&o2)
                .then((*c1 > &Q::zero()).cmp(&(*c2 > &Q::zero())))
                .then((b1, a1).cmp(&(b2, a2)))
        })
        .ok_or(Error::ZeroOperator)?;
    let ((a, b), _) = lead;
    Ok(b.iter().zip(a).map(|(x, y)| x - y).collect())
}

/// One generator's image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationRow {
    pub generator: usize,
    pub mu: Vec<i64>,
    pub lifted: WeylOp,
    pub image: FracModuleElt,
    pub components: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueInfo {
    pub residue: Vec<i64>,
    #[serde(rename = "snfKey")]
    pub snf_key: Vec<i64>,
    #[serde(with = "crate::rational::serde_q::vec")]
    pub label: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiPresentation {
    pub system: SystemSpec,
    #[serde(rename = "summandCount")]
    pub summand_count: i64,
    pub residues: Vec<ResidueInfo>,
    pub rows: Vec<PresentationRow>,
    /// `z^(r_j) . row` for every residue `j` and nonzero row, residues outer.
    #[serde(rename = "moduleRows")]
    pub module_rows: Vec<FracModuleElt>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decomposed: Option<Vec<ShornSummand>>,
}

impl PiPresentation {
    pub fn pretty(&self) -> String {
        let mut s = format!("{} residue classes\n", self.summand_count);
        for r in &self.rows {
            s.push_str(&format!("  row {}: {}\n", r.generator + 1, r.image));
        }
        if let Some(d) = &self.decomposed {
            for sm in d {
                s.push_str(&format!("  summand {:?} shift {:?}\n", sm.residue, sm.shift));
                for g in &sm.system.generators {
                    s.push_str(&format!("    {}\n", g.display_theta()));
                }
            }
        }
        s
    }
}

pub fn residue_infos(ctx: &GaleContext) -> Vec<ResidueInfo> {
    let kinv = ctx.k_inverse();
    ctx.residues()
        .into_iter()
        .map(|j| ResidueInfo {
            snf_key: ctx.snf_key(&j),
            label: kinv.iter().map(|row| crate::rational::dot(row, &crate::rational::qvec(&j))).collect(),
            residue: j,
        })
        .collect()
}

pub fn pi_presentation(sys: &SystemSpec) -> Result<PiPresentation> {
    let ctx = sys
        .ctx
        .as_ref()
        .ok_or_else(|| Error::Precondition("presentation needs an x-side system with a context".into()))?;
    if ctx.a.mul_qvec(&sys.kappa) != sys.beta {
        return Err(Error::Precondition("beta must equal A kappa".into()));
    }
    let n = ctx.n();
    let ring = WeylRing::x_laurent(n);
    let mut rows = Vec::new();
    for (i, g) in sys.generators.iter().enumerate() {
        if let ADegree::Inhomogeneous = g.a_degree(&ctx.a) {
            return Err(Error::Inhomogeneous);
        }
        if g.is_zero() {
            continue;
        }
        let mu = lift_exponent(g)?;
        let lifted = &WeylOp::x_pow(ring, &mu)? * &g.to_laurent();
        let image = delta_bar(ctx, &sys.kappa, &lifted)?;
        let components = image.components(ctx)?;
        rows.push(PresentationRow { generator: i, mu, lifted, image, components });
    }
    let residues = residue_infos(ctx);
    let mut module_rows = Vec::new();
    for r in &residues {
        for row in &rows {
            if !row.image.is_zero() {
                module_rows.push(row.image.left_mul_z(&r.label));
            }
        }
    }
    let decomposed = match sys.kind {
        SystemKind::LatticeBasisBinomial => Some(shorn_decomposition(ctx, &sys.kappa)?),
        _ => None,
    };
    Ok(PiPresentation {
        system: sys.clone(),
        summand_count: ctx.lattice_index,
        residues,
        rows,
        module_rows,
        decomposed,
    })
}

/// One summand of the decomposition of the invariantized lattice basis
/// system: residue `j`, shift `C j` and the Horn system for `κ + C j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShornSummand {
    pub residue: Vec<i64>,
    #[serde(rename = "snfKey")]
    pub snf_key: Vec<i64>,
    #[serde(with = "crate::rational::serde_q::vec")]
    pub label: Vec<Q>,
    pub shift: Vec<i64>,
    #[serde(with = "crate::rational::serde_q::vec")]
    pub kappa: Vec<Q>,
    pub system: SystemSpec,
    /// `row . z^(r_j)` for each lattice basis row, as `z^(r_j) . h`.
    pub rows: Vec<FracModuleElt>,
    /// Whether each `h` equals the Horn generator for `κ + C j`.
    #[serde(rename = "rowsMatch")]
    pub rows_match: bool,
}

pub fn shorn_decomposition(ctx: &GaleContext, kappa: &[Q]) -> Result<Vec<ShornSummand>> {
    let n = ctx.n();
    if kappa.len() != n {
        return Err(Error::Dimension("kappa must have n entries".into()));
    }
    let ring = WeylRing::x_laurent(n);
    let mut base_rows = Vec::new();
    for g in crate::systems::lattice_basis_ideal(&ctx.b)? {
        let mu = lift_exponent(&g)?;
        let lifted = &WeylOp::x_pow(ring, &mu)? * &g.to_laurent();
        base_rows.push(delta_bar(ctx, kappa, &lifted)?);
    }
    let mut out = Vec::new();
    for r in residue_infos(ctx) {
        let shift = ctx.c.mul_vec(&r.residue);
        let k2: Vec<Q> = kappa.iter().zip(&shift).map(|(k, s)| k + q(*s)).collect();
        let system = horn_generators(&ctx.b, &k2, false)?;
        let rows: Vec<FracModuleElt> = base_rows.iter().map(|row| row.right_mul_z(&r.label)).collect();
        let rows_match = rows
            .iter()
            .zip(&system.generators)
            .all(|(row, h)| row.strip_left(&r.label).as_ref() == Some(h));
        out.push(ShornSummand {
            residue: r.residue,
            snf_key: r.snf_key,
            label: r.label,
            shift,
            kappa: k2,
            system,
            rows,
            rows_match,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_gale_context;

    fn index_one() -> GaleContext {
        build_gale_context(&IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]), None, None).unwrap()
    }

    #[test]
    fn module_actions() {
        let v = vec![crate::rational::qf(1, 2)];
        let e = FracModuleElt::monomial(v.clone(), Poly::one(1));
        let eta = e.left_mul_eta(0);
        assert_eq!(eta, FracModuleElt::monomial(v.clone(), Poly::linear(&[q(1)], crate::rational::qf(1, 2))));
        let z = WeylOp::x(WeylRing::z_laurent(1), 0);
        let shifted = e.left_mul_op(&z);
        assert_eq!(shifted, e.left_mul_z(&[q(1)]));
    }

    #[test]
    fn lift_of_binomials() {
        let g = WeylOp::parse(WeylRing::x(4), "dx3^3 - dx1*dx4^2").unwrap();
        assert_eq!(lift_exponent(&g).unwrap(), vec![0, 0, 3, 0]);
        let h = WeylOp::parse(WeylRing::x(2), "dx2 - 1").unwrap();
        assert_eq!(lift_exponent(&h).unwrap(), vec![0, 1]);
    }

    #[test]
    fn psi_round_trip_small() {
        let ctx = index_one();
        let kappa = vec![q(0), crate::rational::qf(1, 2), q(0), q(0)];
        let zr = WeylRing::z_laurent(2);
        let op = WeylOp::parse(zr, "eta1*(eta1 + 1) + z2").unwrap();
        let back = delta(&ctx, &kappa, &psi(&ctx, &kappa, &op).unwrap()).unwrap();
        assert_eq!(back, op);
    }
}
