//! Rational uniformization `s -> (Bs)^B` of reduced discriminants and exact
//! vanishing checks.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{qla, IntMat};
use crate::poly::Poly;
use crate::rational::{fmt_q, is_integer, pow_q, q, qf, to_i64, Q};

/// Laurent polynomial in `z_1..z_m`.
pub type LaurentPoly = Poly;

/// Fixed seed of the sampler used by [`vanish_check`].
pub const SAMPLE_SEED: u64 = 0x4b41_504e_4f56;

/// `((Bs)^{b_1}, ..., (Bs)^{b_m})`.
pub fn hk_parametrize(b: &IntMat, s: &[Q]) -> Result<Vec<Q>> {
    if s.len() != b.cols() {
        return Err(Error::Dimension(format!("s must have {} entries", b.cols())));
    }
    let bs = b.mul_qvec(s);
    if let Some(i) = bs.iter().position(|x| x.is_zero()) {
        return Err(Error::Precondition(format!("row form (Bs)_{} vanishes", i + 1)));
    }
    Ok((0..b.cols())
        .map(|k| (0..b.rows()).fold(Q::one(), |acc, i| acc * pow_q(&bs[i], b.get(i, k))))
        .collect())
}

/// Write `nabla = x^e0 * sum_w lambda_w x^(Bw)` with `e0` the
/// lexicographically smallest exponent and return `sum_w lambda_w z^w`.
pub fn dehomogenize_discriminant(nabla: &Poly, b: &IntMat) -> Result<LaurentPoly> {
    let (n, m) = (b.rows(), b.cols());
    if nabla.nvars() != n {
        return Err(Error::Dimension(format!("expected a polynomial in {n} variables")));
    }
    let Some(e0) = nabla.terms().keys().next().cloned() else {
        return Ok(Poly::zero(m));
    };
    let bq = b.to_q();
    let mut out = Poly::zero(m);
    for (e, c) in nabla.terms() {
        let diff: Vec<Q> = e.iter().zip(&e0).map(|(x, y)| q(x - y)).collect();
        let w = qla::solve(&bq, &diff)
            .filter(|w| b.mul_qvec(w) == diff && w.iter().all(is_integer))
            .ok_or_else(|| {
                Error::Precondition(format!("exponent {e:?} is not in the coset of {e0:?} modulo ZB"))
            })?;
        out.add_term(w.iter().map(|x| to_i64(x).expect("integral")).collect(), c.clone());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishReport {
    pub samples: usize,
    pub zeros: usize,
    pub passed: bool,
    /// `(s, f((Bs)^B))` for the first few nonzero values.
    pub nonzero: Vec<(Vec<String>, String)>,
}

/// Evaluate `f` at `hk_parametrize(B, s)` for seeded random admissible `s`.
pub fn vanish_check(f: &LaurentPoly, b: &IntMat, samples: usize) -> Result<VanishReport> {
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is required".into()));
    }
    if f.nvars() != b.cols() {
        return Err(Error::Dimension(format!("expected a Laurent polynomial in {} variables", b.cols())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut report = VanishReport { samples, zeros: 0, passed: false, nonzero: vec![] };
    let mut taken = 0;
    let mut attempts = 0;
    while taken < samples {
        attempts += 1;
        if attempts > 1000 * samples {
            return Err(Error::Degenerate("could not find admissible sample points".into()));
        }
        let s: Vec<Q> = (0..b.cols()).map(|_| qf(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
        let Ok(z) = hk_parametrize(b, &s) else { continue };
        taken += 1;
        let v = f.eval(&z);
        if v.is_zero() {
            report.zeros += 1;
        } else if report.nonzero.len() < 5 {
            report.nonzero.push((s.iter().map(fmt_q).collect(), fmt_q(&v)));
        }
    }
    report.passed = report.zeros == samples;
    Ok(report)
}

/// `x2^2 - 4 x1 x3`, the discriminant of `x1 + x2 t + x3 t^2`.
pub fn quadratic_discriminant() -> Poly {
    Poly::from_terms(3, [(vec![0, 2, 0], q(1)), (vec![1, 0, 1], q(-4))])
}

/// Discriminant of `x1 + x2 t + x3 t^2 + x4 t^3`.
pub fn cubic_discriminant() -> Poly {
    Poly::from_terms(
        4,
        [
            (vec![0, 2, 2, 0], q(1)),
            (vec![1, 0, 3, 0], q(-4)),
            (vec![0, 3, 0, 1], q(-4)),
            (vec![2, 0, 0, 2], q(-27)),
            (vec![1, 1, 1, 1], q(18)),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let b = IntMat::lit(&[&[1], &[-2], &[1]]);
        assert_eq!(hk_parametrize(&b, &[qf(3, 7)]).unwrap(), vec![qf(1, 4)]);
        let f = dehomogenize_discriminant(&quadratic_discriminant(), &b).unwrap();
        assert_eq!(f, Poly::from_terms(1, [(vec![0], q(1)), (vec![1], q(-4))]));
        assert!(vanish_check(&f, &b, 20).unwrap().passed);
        let g = Poly::from_terms(1, [(vec![0], q(1)), (vec![1], q(-5))]);
        assert_eq!(vanish_check(&g, &b, 20).unwrap().zeros, 0);
        assert!(vanish_check(&Poly::zero(1), &b, 3).unwrap().passed);
    }

    #[test]
    fn cubic() {
        let b = IntMat::lit(&[&[1, 0], &[-2, 1], &[1, -2], &[0, 1]]);
        let f = dehomogenize_discriminant(&cubic_discriminant(), &b).unwrap();
        assert_eq!(f.terms().len(), 5);
        assert!(vanish_check(&f, &b, 20).unwrap().passed);
        assert!(matches!(
            hk_parametrize(&b, &[q(1), q(2)]),
            Err(Error::Precondition(_))
        ));
    }
}
