//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hypergeom::lattice::{build_gale_context, GaleContext};
use hypergeom::poly::Poly;
use hypergeom::rational::{q, qf};
use hypergeom::weyl::{WeylOp, WeylRing};
use hypergeom::{IntMat, Q};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_q(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

/// Polynomial of total degree at most `deg` with up to `terms` random terms.
pub fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, deg: i64, terms: usize) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..terms {
        let mut e = vec![0i64; nvars];
        let mut left = rng.gen_range(0..=deg);
        for slot in e.iter_mut() {
            let k = rng.gen_range(0..=left);
            *slot = k;
            left -= k;
        }
        p.add_term(e, small_q(rng));
    }
    p
}

/// Random normal-ordered operator in `x_1..x_n` with exponents at most `max`.
pub fn random_op(rng: &mut ChaCha8Rng, n: usize, terms: usize, max: i64) -> WeylOp {
    let ring = WeylRing::x(n);
    let mut op = WeylOp::zero(ring);
    for _ in 0..terms {
        let xe: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
        let de: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
        let c = q(rng.gen_range(-3..=3));
        op = &op + &WeylOp::term(ring, xe, de, c).unwrap();
    }
    op
}

/// Torus-invariant operator `sum_w x^(Bw) g_w(θ)` on the Laurent x-side.
pub fn random_invariant(rng: &mut ChaCha8Rng, ctx: &GaleContext) -> WeylOp {
    let (n, m) = (ctx.n(), ctx.m());
    let mut form: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=3) {
        let w: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..=1)).collect();
        let g = random_poly(rng, n, 2, 3);
        let e = form.entry(ctx.b.mul_vec(&w)).or_insert_with(|| Poly::zero(n));
        *e = &*e + &g;
    }
    WeylOp::from_theta_form(WeylRing::x_laurent(n), &form).unwrap()
}

/// Random z-side operator `sum_u z^u g_u(η)`.
pub fn random_z_op(rng: &mut ChaCha8Rng, m: usize) -> WeylOp {
    let mut form: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=3) {
        let u: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..=1)).collect();
        let g = random_poly(rng, m, 2, 3);
        let e = form.entry(u).or_insert_with(|| Poly::zero(m));
        *e = &*e + &g;
    }
    WeylOp::from_theta_form(WeylRing::z_laurent(m), &form).unwrap()
}

/// Index-one contexts with a parameter `kappa`.
pub fn index_one_contexts() -> Vec<(GaleContext, Vec<Q>)> {
    let cubic = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
    let gauss = IntMat::lit(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, -1]]);
    let gb = IntMat::lit(&[&[1], &[1], &[-1], &[-1]]);
    vec![
        (build_gale_context(&cubic, None, None).unwrap(), vec![q(0), qf(1, 2), q(0), q(0)]),
        (build_gale_context(&gauss, Some(&gb), None).unwrap(), vec![q(0), qf(-2, 7), qf(-1, 2), qf(-1, 3)]),
    ]
}

/// Dense test polynomial with every monomial of degree at most `deg`.
pub fn dense_poly(rng: &mut ChaCha8Rng, nvars: usize, deg: i64) -> Poly {
    fn rec(rng: &mut ChaCha8Rng, e: &mut Vec<i64>, i: usize, left: i64, p: &mut Poly) {
        if i == e.len() {
            p.add_term(e.clone(), q(rng.gen_range(1..=7)));
            return;
        }
        for k in 0..=left {
            e[i] = k;
            rec(rng, e, i + 1, left - k, p);
        }
        e[i] = 0;
    }
    let mut p = Poly::zero(nvars);
    rec(rng, &mut vec![0; nvars], 0, deg, &mut p);
    p
}
