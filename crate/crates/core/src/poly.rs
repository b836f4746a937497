//! Commutative (Laurent) polynomials with rational coefficients.
//!
//! Used for θ/η-polynomials, cotangent symbols, commutative ∂-polynomials and
//! the Laurent polynomials of the discriminant module. Exponents are `i64` so
//! that negative powers are representable; operations that need polynomial
//! exponents say so.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, pow_q, q, Q};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn monomial(exp: Vec<i64>, c: Q) -> Self {
        let mut p = Poly::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    /// `sum_i coeffs[i] v_i + c`.
    pub fn linear(coeffs: &[Q], c: Q) -> Self {
        let n = coeffs.len();
        let mut p = Poly::constant(n, c);
        for (i, a) in coeffs.iter().enumerate() {
            p.add_term(
                {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    e
                },
                a.clone(),
            );
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Q> {
        &self.terms
    }

    pub fn coeff(&self, e: &[i64]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: Q) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    /// Multiply by the monomial `v^e`.
    pub fn shift_exp(&self, e: &[i64]) -> Self {
        Poly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(k, v)| (k.iter().zip(e).map(|(a, b)| a + b).collect(), v.clone())),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().sum::<i64>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> i64 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    pub fn eval(&self, at: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (e, c)| {
            let m = e.iter().zip(at).fold(c.clone(), |m, (&k, x)| m * pow_q(x, k));
            acc + m
        })
    }

    /// Substitute `v_i -> images[i]`, polynomials in `n` variables; exponents
    /// must be nonnegative.
    pub fn substitute(&self, images: &[Poly], n: usize) -> Poly {
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut m = Poly::constant(n, c.clone());
            for (k, img) in e.iter().zip(images) {
                assert!(*k >= 0, "substitution into a negative power");
                m = &m * &img.pow(*k as u32);
            }
            out = &out + &m;
        }
        out
    }

    /// `p(v + s)`.
    pub fn translate(&self, s: &[Q]) -> Poly {
        let images: Vec<Poly> = (0..self.nvars)
            .map(|i| &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, s[i].clone()))
            .collect();
        self.substitute(&images, self.nvars)
    }

    /// Embed into more variables, placing variable `i` at `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        Poly::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut f = vec![0; nvars];
                for (i, &k) in e.iter().enumerate() {
                    f[map[i]] += k;
                }
                (f, c.clone())
            }),
        )
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(j, &k)| if k == 1 { names[j].clone() } else { format!("{}^{}", names[j], k) })
                .collect();
            push_term(&mut s, i == 0, c, &mono.join("*"));
        }
        s
    }
}

/// Append `c*mono` to a sum being printed.
pub(crate) fn push_term(s: &mut String, first: bool, c: &Q, mono: &str) {
    let neg = c < &Q::zero();
    let a = if neg { -c.clone() } else { c.clone() };
    if first {
        if neg {
            s.push('-');
        }
    } else {
        s.push_str(if neg { " - " } else { " + " });
    }
    if mono.is_empty() {
        s.push_str(&fmt_q(&a));
    } else if a.is_one() {
        s.push_str(mono);
    } else {
        s.push_str(&fmt_q(&a));
        s.push('*');
        s.push_str(mono);
    }
}

pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(&var_names("v", self.nvars)))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&q(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars.max(o.nvars));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                p.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        p
    }
}

/// Wire form: `{"nvars": n, "terms": [[exponent, "p/q"], ...]}`.
#[derive(Serialize, Deserialize)]
struct PolyWire {
    nvars: usize,
    terms: Vec<(Vec<i64>, String)>,
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyWire {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), fmt_q(c))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = PolyWire::deserialize(d)?;
        let mut p = Poly::zero(w.nvars);
        for (e, c) in w.terms {
            if e.len() != w.nvars {
                return Err(serde::de::Error::custom("exponent length mismatch"));
            }
            let c = crate::rational::parse_q(&c).map_err(serde::de::Error::custom)?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}
