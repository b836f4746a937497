//! Normal-ordered Weyl algebra elements `sum c x^a d^b` over a polynomial or
//! Laurent base, with θ-rewriting, A-grading, initial forms and the action
//! on monomials with rational exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMat;
use crate::poly::{push_term, var_names, Poly};
use crate::rational::{binomial, falling, fmt_q, parse_q, q, Q};

/// Polynomial in θ (x-side) or η (z-side).
pub type ThetaPoly = Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylRing {
    #[serde(rename = "varCount")]
    pub var_count: usize,
    pub laurent: bool,
    #[serde(rename = "varKind")]
    pub var_kind: VarKind,
}

impl WeylRing {
    pub fn x(n: usize) -> Self {
        WeylRing { var_count: n, laurent: false, var_kind: VarKind::X }
    }

    pub fn x_laurent(n: usize) -> Self {
        WeylRing { var_count: n, laurent: true, var_kind: VarKind::X }
    }

    pub fn z_laurent(m: usize) -> Self {
        WeylRing { var_count: m, laurent: true, var_kind: VarKind::Z }
    }

    pub fn laurent(self) -> Self {
        WeylRing { laurent: true, ..self }
    }

    fn prefix(&self) -> &'static str {
        match self.var_kind {
            VarKind::X => "x",
            VarKind::Z => "z",
        }
    }

    /// Names of the Euler-type variables θ_i (x-side) or η_i (z-side).
    pub fn theta_names(&self) -> Vec<String> {
        match self.var_kind {
            VarKind::X => var_names("t", self.var_count),
            VarKind::Z => var_names("eta", self.var_count),
        }
    }
}

type Key = (Vec<i64>, Vec<i64>);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylOp {
    ring: WeylRing,
    terms: BTreeMap<Key, Q>,
}

/// Stirling number of the second kind.
pub fn stirling2(k: usize, j: usize) -> Q {
    let mut row = vec![Q::one()];
    for i in 1..=k {
        let mut next = vec![Q::zero(); i + 1];
        for (t, v) in row.iter().enumerate() {
            next[t + 1] += v;
            next[t] += v * q(t as i64);
        }
        if i > 0 {
            next[0] = Q::zero();
        }
        row = next;
    }
    row.get(j).cloned().unwrap_or_else(Q::zero)
}

impl WeylOp {
    pub fn zero(ring: WeylRing) -> Self {
        WeylOp { ring, terms: BTreeMap::new() }
    }

    pub fn constant(ring: WeylRing, c: Q) -> Self {
        let n = ring.var_count;
        let mut p = Self::zero(ring);
        p.add_term(vec![0; n], vec![0; n], c);
        p
    }

    pub fn one(ring: WeylRing) -> Self {
        Self::constant(ring, Q::one())
    }

    /// The single term `c x^xexp d^dexp`.
    pub fn term(ring: WeylRing, xexp: Vec<i64>, dexp: Vec<i64>, c: Q) -> Result<Self> {
        let n = ring.var_count;
        if xexp.len() != n || dexp.len() != n {
            return Err(Error::Dimension("exponent length differs from variable count".into()));
        }
        if dexp.iter().any(|&b| b < 0) {
            return Err(Error::Precondition("negative derivative order".into()));
        }
        if !ring.laurent && xexp.iter().any(|&a| a < 0) {
            return Err(Error::RingMismatch("negative power in a polynomial ring".into()));
        }
        let mut p = Self::zero(ring);
        p.add_term(xexp, dexp, c);
        Ok(p)
    }

    pub fn x(ring: WeylRing, i: usize) -> Self {
        let mut e = vec![0; ring.var_count];
        e[i] = 1;
        Self::term(ring, e, vec![0; ring.var_count], Q::one()).expect("valid variable")
    }

    pub fn x_pow(ring: WeylRing, e: &[i64]) -> Result<Self> {
        Self::term(ring, e.to_vec(), vec![0; ring.var_count], Q::one())
    }

    pub fn d(ring: WeylRing, i: usize) -> Self {
        let mut e = vec![0; ring.var_count];
        e[i] = 1;
        Self::term(ring, vec![0; ring.var_count], e, Q::one()).expect("valid variable")
    }

    pub fn d_pow(ring: WeylRing, e: &[i64]) -> Result<Self> {
        Self::term(ring, vec![0; ring.var_count], e.to_vec(), Q::one())
    }

    /// `θ_i = x_i d_i`.
    pub fn theta(ring: WeylRing, i: usize) -> Self {
        let mut e = vec![0; ring.var_count];
        e[i] = 1;
        Self::term(ring, e.clone(), e, Q::one()).expect("valid variable")
    }

    pub fn ring(&self) -> WeylRing {
        self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Key, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, xexp: &[i64], dexp: &[i64]) -> Q {
        self.terms
            .get(&(xexp.to_vec(), dexp.to_vec()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    fn add_term(&mut self, xexp: Vec<i64>, dexp: Vec<i64>, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (xexp, dexp);
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Reinterpret in another ring with the same variable count.
    pub fn with_ring(&self, ring: WeylRing) -> Result<Self> {
        if ring.var_count != self.ring.var_count {
            return Err(Error::RingMismatch("variable counts differ".into()));
        }
        if !ring.laurent && self.terms.keys().any(|(a, _)| a.iter().any(|&x| x < 0)) {
            return Err(Error::RingMismatch("operator has negative powers".into()));
        }
        Ok(WeylOp { ring, terms: self.terms.clone() })
    }

    pub fn to_laurent(&self) -> Self {
        WeylOp { ring: self.ring.laurent(), terms: self.terms.clone() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut p = Self::zero(self.ring);
        for ((a, b), v) in &self.terms {
            p.add_term(a.clone(), b.clone(), v * c);
        }
        p
    }

    pub fn try_add(&self, o: &WeylOp) -> Result<Self> {
        self.check_ring(o)?;
        let mut p = self.clone();
        for ((a, b), v) in &o.terms {
            p.add_term(a.clone(), b.clone(), v.clone());
        }
        Ok(p)
    }

    fn check_ring(&self, o: &WeylOp) -> Result<()> {
        if self.ring.var_count != o.ring.var_count || self.ring.var_kind != o.ring.var_kind {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, o.ring)));
        }
        Ok(())
    }

    /// Normal-ordered product. Uses
    /// `d^b x^c = sum_k C(b,k) [c]_k x^(c-k) d^(b-k)` per variable, which
    /// holds for negative `c` as well.
    pub fn multiply(&self, o: &WeylOp) -> Result<Self> {
        self.check_ring(o)?;
        let ring = if self.ring.laurent || o.ring.laurent { self.ring.laurent() } else { self.ring };
        let n = ring.var_count;
        let mut out = Self::zero(ring);
        for ((a, b), c1) in &self.terms {
            for ((cc, e), c2) in &o.terms {
                // Per-variable expansion lists of (k, coefficient).
                let per: Vec<Vec<(i64, Q)>> = (0..n)
                    .map(|i| {
                        (0..=b[i])
                            .map(|k| (k, binomial(b[i], k) * falling(&q(cc[i]), k)))
                            .filter(|(_, v)| !v.is_zero())
                            .collect()
                    })
                    .collect();
                let mut idx = vec![0usize; n];
                if per.iter().any(|l| l.is_empty()) {
                    continue;
                }
                loop {
                    let mut coef = c1 * c2;
                    let mut xe = Vec::with_capacity(n);
                    let mut de = Vec::with_capacity(n);
                    for i in 0..n {
                        let (k, v) = &per[i][idx[i]];
                        coef *= v;
                        xe.push(a[i] + cc[i] - k);
                        de.push(b[i] - k + e[i]);
                    }
                    out.add_term(xe, de, coef);
                    let mut i = 0;
                    loop {
                        if i == n {
                            break;
                        }
                        idx[i] += 1;
                        if idx[i] < per[i].len() {
                            break;
                        }
                        idx[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `A (u - v)` if it is the same for every term `x^u d^v`.
    pub fn a_degree(&self, a: &IntMat) -> ADegree {
        let mut deg: Option<Vec<i64>> = None;
        for (u, v) in self.terms.keys() {
            let diff: Vec<i64> = u.iter().zip(v).map(|(x, y)| x - y).collect();
            let dd = a.mul_vec(&diff);
            match &deg {
                None => deg = Some(dd),
                Some(prev) if *prev != dd => return ADegree::Inhomogeneous,
                _ => {}
            }
        }
        ADegree::Degree(deg.unwrap_or_else(|| vec![0; a.rows()]))
    }

    /// Rewrite as `sum_s x^s g_s(θ)` using `x^a d^b = x^(a-b) prod [θ_i]_(b_i)`.
    pub fn theta_form(&self) -> BTreeMap<Vec<i64>, ThetaPoly> {
        let n = self.ring.var_count;
        let mut out: BTreeMap<Vec<i64>, ThetaPoly> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let mut g = Poly::constant(n, c.clone());
            for i in 0..n {
                for l in 0..b[i] {
                    let f = &Poly::var(n, i) - &Poly::constant(n, q(l));
                    g = &g * &f;
                }
            }
            let e = out.entry(s).or_insert_with(|| Poly::zero(n));
            *e = &*e + &g;
        }
        out.retain(|_, g| !g.is_zero());
        out
    }

    /// Inverse of [`WeylOp::theta_form`]: expand `sum_s x^s g_s(θ)` with
    /// `θ^k = sum_j S(k,j) x^j d^j`.
    pub fn from_theta_form(ring: WeylRing, form: &BTreeMap<Vec<i64>, ThetaPoly>) -> Result<Self> {
        let n = ring.var_count;
        let mut out = Self::zero(ring.laurent());
        for (s, g) in form {
            for (e, c) in g.terms() {
                if e.iter().any(|&k| k < 0) {
                    return Err(Error::Precondition("negative power of theta".into()));
                }
                // Expand prod_i θ_i^{e_i}.
                let mut acc: Vec<(Vec<i64>, Q)> = vec![(vec![], c.clone())];
                for i in 0..n {
                    let k = e[i] as usize;
                    let mut next = Vec::new();
                    for (js, v) in &acc {
                        for j in 0..=k {
                            let st = stirling2(k, j);
                            if st.is_zero() {
                                continue;
                            }
                            let mut js2 = js.clone();
                            js2.push(j as i64);
                            next.push((js2, v * st));
                        }
                    }
                    acc = next;
                }
                for (js, v) in acc {
                    let xe = s.iter().zip(&js).map(|(a, b)| a + b).collect();
                    out.add_term(xe, js, v);
                }
            }
        }
        out.with_ring(ring)
    }

    /// Act on `coeff * x^a` with rational exponent `a`:
    /// `x^u d^v . x^a = [a]_v x^(a - v + u)`.
    pub fn apply_monomial(&self, a: &[Q], coeff: &Q) -> BTreeMap<Vec<Q>, Q> {
        let mut out: BTreeMap<Vec<Q>, Q> = BTreeMap::new();
        for ((u, v), c) in &self.terms {
            let mut f = c * coeff;
            for i in 0..a.len() {
                f *= falling(&a[i], v[i]);
            }
            if f.is_zero() {
                continue;
            }
            let e: Vec<Q> = (0..a.len()).map(|i| &a[i] - q(v[i]) + q(u[i])).collect();
            let slot = out.entry(e.clone()).or_insert_with(Q::zero);
            *slot += f;
            if slot.is_zero() {
                out.remove(&e);
            }
        }
        out
    }

    /// Act on a (Laurent) polynomial in the ring's variables.
    pub fn apply_poly(&self, f: &Poly) -> Poly {
        let n = self.ring.var_count;
        let mut out = Poly::zero(n);
        for (e, c) in f.terms() {
            let a: Vec<Q> = e.iter().map(|&k| q(k)).collect();
            for (r, v) in self.apply_monomial(&a, c) {
                let ie: Vec<i64> = r.iter().map(|x| crate::rational::to_i64(x).expect("integral")).collect();
                out.add_term(ie, v);
            }
        }
        out
    }

    pub fn initial_form(&self, w: &WeightVector) -> Result<InitialForm> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let n = self.ring.var_count;
        let c = w.total()?;
        if w.lx.len() != n {
            return Err(Error::Dimension("weight vector length".into()));
        }
        let weight = |(a, b): &Key| {
            (0..n).fold(Q::zero(), |acc, i| acc + &w.lx[i] * q(a[i]) + &w.ld[i] * q(b[i]))
        };
        let top = self.terms.keys().map(weight).max().expect("nonzero operator");
        let lead = self.terms.iter().filter(|(k, _)| weight(k) == top);
        if c.is_zero() {
            let mut p = Self::zero(self.ring);
            for ((a, b), v) in lead {
                p.add_term(a.clone(), b.clone(), v.clone());
            }
            Ok(InitialForm::Weyl(p))
        } else {
            let sym = Poly::from_terms(
                2 * n,
                lead.map(|((a, b), v)| ([a.clone(), b.clone()].concat(), v.clone())),
            );
            Ok(InitialForm::Symbol(sym))
        }
    }

    /// Highest total ∂-order among the terms.
    pub fn order(&self) -> i64 {
        self.terms.keys().map(|(_, b)| b.iter().sum::<i64>()).max().unwrap_or(0)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let p = self.ring.prefix();
        let mut s = String::new();
        for (i, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let mut f: Vec<String> = Vec::new();
            for (j, &k) in a.iter().enumerate() {
                match k {
                    0 => {}
                    1 => f.push(format!("{p}{}", j + 1)),
                    _ => f.push(format!("{p}{}^{k}", j + 1)),
                }
            }
            for (j, &k) in b.iter().enumerate() {
                match k {
                    0 => {}
                    1 => f.push(format!("d{p}{}", j + 1)),
                    _ => f.push(format!("d{p}{}^{k}", j + 1)),
                }
            }
            push_term(&mut s, i == 0, c, &f.join("*"));
        }
        s
    }

    /// Print as `sum_s x^s * (g_s(θ))`.
    pub fn display_theta(&self) -> String {
        let names = self.ring.theta_names();
        let p = self.ring.prefix();
        let parts: Vec<String> = self
            .theta_form()
            .iter()
            .map(|(s, g)| {
                let mono: Vec<String> = s
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(j, &k)| if k == 1 { format!("{p}{}", j + 1) } else { format!("{p}{}^{k}", j + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("({})", g.display(&names))
                } else {
                    format!("{}*({})", mono.join("*"), g.display(&names))
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Parse the text form, e.g. `2*x1^2*dx1 - t2 + 1/3`. Factors are
    /// multiplied in the Weyl algebra in the order written; `t`, `theta` and
    /// `eta` name θ_i, and `z`/`dz` are accepted as aliases of `x`/`dx`.
    pub fn parse(ring: WeylRing, s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0, ring };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}

/// Result of [`WeylOp::a_degree`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ADegree {
    Degree(Vec<i64>),
    Inhomogeneous,
}

/// Weight vector `(Lx, Ld)` with `Lx + Ld = c 1` and `c >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    #[serde(rename = "Lx", with = "crate::rational::serde_q::vec")]
    pub lx: Vec<Q>,
    #[serde(rename = "Ld", with = "crate::rational::serde_q::vec")]
    pub ld: Vec<Q>,
}

impl WeightVector {
    /// The order filtration `(0, 1)`.
    pub fn order(n: usize) -> Self {
        WeightVector { lx: vec![Q::zero(); n], ld: vec![Q::one(); n] }
    }

    /// `(-w, w)`.
    pub fn minus_plus(w: &[Q]) -> Self {
        WeightVector { lx: w.iter().map(|x| -x.clone()).collect(), ld: w.to_vec() }
    }

    pub fn total(&self) -> Result<Q> {
        if self.lx.len() != self.ld.len() || self.lx.is_empty() {
            return Err(Error::Dimension("weight vector halves differ".into()));
        }
        let c = &self.lx[0] + &self.ld[0];
        if self.lx.iter().zip(&self.ld).any(|(a, b)| a + b != c) || c < Q::zero() {
            return Err(Error::Precondition("Lx + Ld must be a nonnegative multiple of 1".into()));
        }
        Ok(c)
    }
}

/// Initial form: a commutative symbol in `(x, ξ)` for `c > 0`, a Weyl
/// operator for `c = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialForm {
    Symbol(Poly),
    Weyl(WeylOp),
}

/// `E_i - beta_i` with `E_i = sum_j a_ij θ_j`.
pub fn euler_operators(a: &IntMat, beta: &[Q]) -> Result<Vec<WeylOp>> {
    if beta.len() != a.rows() {
        return Err(Error::Dimension("beta length must equal the row count of A".into()));
    }
    let ring = WeylRing::x(a.cols());
    Ok((0..a.rows())
        .map(|i| {
            let mut e = WeylOp::constant(ring, -beta[i].clone());
            for j in 0..a.cols() {
                e = &e + &WeylOp::theta(ring, j).scale(&q(a.get(i, j)));
            }
            e
        })
        .collect())
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, o: &WeylOp) -> WeylOp {
        self.try_add(o).expect("ring mismatch")
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, o: &WeylOp) -> WeylOp {
        self.try_add(&-o).expect("ring mismatch")
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        self.scale(&q(-1))
    }
}

impl Mul for &WeylOp {
    type Output = WeylOp;
    fn mul(self, o: &WeylOp) -> WeylOp {
        self.multiply(o).expect("ring mismatch")
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    x: Vec<i64>,
    d: Vec<i64>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct WeylWire {
    ring: WeylRing,
    terms: Vec<TermWire>,
}

impl Serialize for WeylOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeylWire {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| TermWire { x: a.clone(), d: b.clone(), c: fmt_q(c) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeylOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = WeylWire::deserialize(d)?;
        let mut p = WeylOp::zero(w.ring);
        for t in w.terms {
            let c = parse_q(&t.c).map_err(D::Error::custom)?;
            let single = WeylOp::term(w.ring, t.x, t.d, c).map_err(D::Error::custom)?;
            p = &p + &single;
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Var(String, usize),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(parse_q(&txt)?));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                i += 1;
            }
            let name: String = cs[st..i].iter().collect();
            let ds = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            if ds == i {
                return Err(Error::Parse(format!("variable {name:?} needs an index")));
            }
            let idx: usize = cs[ds..i].iter().collect::<String>().parse().map_err(|_| Error::Parse("index".into()))?;
            out.push(Tok::Var(name, idx));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    ring: WeylRing,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<WeylOp> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<WeylOp> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.multiply(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<i64> {
        if !self.eat('^') {
            return Ok(1);
        }
        let neg = self.eat('-');
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let k = crate::rational::to_i64(&v).ok_or_else(|| Error::Parse("integer exponent expected".into()))?;
                Ok(if neg { -k } else { k })
            }
            _ => Err(Error::Parse("exponent expected".into())),
        }
    }

    fn factor(&mut self) -> Result<WeylOp> {
        let ring = self.ring;
        let n = ring.var_count;
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let mut v = v;
                if self.eat('/') {
                    match self.toks.get(self.pos).cloned() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            self.pos += 1;
                            v /= d;
                        }
                        _ => return Err(Error::Parse("denominator expected".into())),
                    }
                }
                Ok(WeylOp::constant(ring, v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                let k = self.exponent()?;
                if k < 0 {
                    return Err(Error::Parse("negative power of a sum".into()));
                }
                Ok(e.pow(k as u32))
            }
            Some(Tok::Var(name, idx)) => {
                self.pos += 1;
                if idx == 0 || idx > n {
                    return Err(Error::Parse(format!("variable index {idx} out of range 1..={n}")));
                }
                let i = idx - 1;
                let k = self.exponent()?;
                let mut e = vec![0; n];
                e[i] = k;
                match name.as_str() {
                    "x" | "z" => WeylOp::x_pow(ring, &e),
                    "dx" | "dz" | "d" => {
                        if k < 0 {
                            return Err(Error::Parse("negative derivative power".into()));
                        }
                        WeylOp::d_pow(ring, &e)
                    }
                    "t" | "theta" | "eta" => {
                        if k < 0 {
                            return Err(Error::Parse("negative theta power".into()));
                        }
                        Ok(WeylOp::theta(ring, i).pow(k as u32))
                    }
                    _ => Err(Error::Parse(format!("unknown variable {name:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r1() -> WeylRing {
        WeylRing::x(1)
    }

    #[test]
    fn defining_relation() {
        let d = WeylOp::d(r1(), 0);
        let x = WeylOp::x(r1(), 0);
        assert_eq!(&d * &x, WeylOp::parse(r1(), "x1*dx1 + 1").unwrap());
        let x2 = WeylOp::parse(r1(), "x1^2").unwrap();
        assert_eq!(&d * &x2, WeylOp::parse(r1(), "x1^2*dx1 + 2*x1").unwrap());
        let th = WeylOp::theta(r1(), 0);
        assert_eq!(&th * &x, WeylOp::parse(r1(), "x1*t1 + x1").unwrap());
    }

    #[test]
    fn laurent_product_rule() {
        let r = WeylRing::x_laurent(1);
        let d = WeylOp::d(r, 0);
        let xi = WeylOp::parse(r, "x1^-1").unwrap();
        assert_eq!(&d * &xi, WeylOp::parse(r, "x1^-1*dx1 - x1^-2").unwrap());
        assert!(WeylOp::parse(r1(), "x1^-1").is_err());
    }

    #[test]
    fn theta_round_trip() {
        let r = WeylRing::x_laurent(2);
        let p = WeylOp::parse(r, "x1^3*dx1^2*dx2 - 1/2*x2^-1 + dx2^3").unwrap();
        let back = WeylOp::from_theta_form(r, &p.theta_form()).unwrap();
        assert_eq!(back, p);
        assert_eq!(stirling2(4, 2), q(7));
    }

    #[test]
    fn euler_and_degree() {
        let a = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let e = euler_operators(&a, &[q(0), q(0)]).unwrap();
        assert_eq!(e[1], WeylOp::parse(WeylRing::x(4), "t2 + 2*t3 + 3*t4").unwrap());
        let p = WeylOp::parse(WeylRing::x(4), "x1*dx2").unwrap();
        assert_eq!(p.a_degree(&a), ADegree::Degree(vec![0, -1]));
        let mixed = WeylOp::parse(WeylRing::x(4), "x1 + dx1").unwrap();
        assert_eq!(mixed.a_degree(&a), ADegree::Inhomogeneous);
        assert!(euler_operators(&IntMat::zeros(0, 3), &[]).unwrap().is_empty());
    }

    #[test]
    fn initial_forms() {
        let r = WeylRing::x(1);
        let p = WeylOp::parse(r, "x1*dx1 + dx1 + 3").unwrap();
        match p.initial_form(&WeightVector::order(1)).unwrap() {
            InitialForm::Symbol(s) => {
                assert_eq!(s, Poly::from_terms(2, [(vec![1, 1], q(1)), (vec![0, 1], q(1))]))
            }
            _ => panic!("expected symbol"),
        }
        assert_eq!(WeylOp::zero(r).initial_form(&WeightVector::order(1)), Err(Error::ZeroOperator));
    }

    #[test]
    fn text_and_json() {
        let r = WeylRing::x(2);
        let p = WeylOp::parse(r, "2*x1^2*dx1 - t2 + 1/3").unwrap();
        assert_eq!(WeylOp::parse(r, &p.display()).unwrap(), p);
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<WeylOp>(&js).unwrap(), p);
    }
}
