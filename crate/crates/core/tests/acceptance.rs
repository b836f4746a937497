//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact over the rationals, so every tolerance is zero. Runs without the
//! libtest harness so the report is always printed.

mod common;

use hypergeom::classify::{candidate_pairs, toral_parameter_tests};
use hypergeom::discriminant::{dehomogenize_discriminant, hk_parametrize, quadratic_discriminant, cubic_discriminant, vanish_check, SAMPLE_SEED};
use hypergeom::fixtures::{self, GoldenReport};
use hypergeom::invariant::{delta, psi};
use hypergeom::lattice::{build_gale_context, solve_parameter, ParameterMode};
use hypergeom::matrix::qla;
use hypergeom::poly::Poly;
use hypergeom::polytope::faces_and_volume;
use hypergeom::rational::{q, qf};
use hypergeom::series::{annihilation_check, gkz_series, horn_series, rank_by_series, torus_factor_map};
use hypergeom::systems::{gkz_system, horn_generators, restriction_witnesses};
use hypergeom::weyl::{euler_operators, ADegree, WeylOp, WeylRing};
use hypergeom::{IntMat, Q};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact comparisons only.
const TOLERANCE: i64 = 0;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn golden(name: &str, apply_errata: bool) -> GoldenReport {
    fixtures::by_name(name).unwrap().run(apply_errata).unwrap()
}

fn failed_labels(r: &GoldenReport) -> Vec<String> {
    r.checks.iter().filter(|c| !c.passed).map(|c| c.label.clone()).collect()
}

fn c1_gale_context() -> Outcome {
    let r = golden("ex5_5", false);
    let ctx = fixtures::by_name("ex5_5").unwrap().context().unwrap();
    let ok = r.passed && ctx.snf_k.divisors() == vec![1, 3] && ctx.lattice_index == 3;
    outcome(ok, format!("C, B, K exact; SNF(K) = diag{:?}; index {}", ctx.snf_k.divisors(), ctx.lattice_index))
}

/// Printed operators, taken literally.
fn c2_images_literal() -> (Outcome, GoldenReport) {
    let r = golden("ex5_7", false);
    let bad = failed_labels(&r);
    (outcome(r.passed, format!("mismatched: {bad:?}")), r)
}

fn c3_shorn() -> Outcome {
    let r = golden("ex5_9", false);
    outcome(r.passed, format!("{} checks, mismatched {:?}", r.checks.len(), failed_labels(&r)))
}

fn c4_non_cyclic() -> Outcome {
    let r = golden("ex3_5", false);
    outcome(r.passed, format!("{} checks, mismatched {:?}", r.checks.len(), failed_labels(&r)))
}

fn c5_delta() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ctxs = common::index_one_contexts();
    let (mut kernel, mut ring_map, mut round_trip) = (0, 0, 0);
    for t in 0..100 {
        let (ctx, kappa) = &ctxs[t % ctxs.len()];
        let beta = ctx.a.mul_qvec(kappa);
        let euler = euler_operators(&ctx.a, &beta).unwrap();
        let h = common::random_invariant(&mut rng, ctx);
        let e = euler[rng.gen_range(0..euler.len())].to_laurent();
        if delta(ctx, kappa, &(&h * &e)).unwrap().is_zero() {
            kernel += 1;
        }
        let p = common::random_invariant(&mut rng, ctx);
        let lhs = delta(ctx, kappa, &(&h * &p)).unwrap();
        let rhs = &delta(ctx, kappa, &h).unwrap() * &delta(ctx, kappa, &p).unwrap();
        if lhs == rhs {
            ring_map += 1;
        }
    }
    for t in 0..50 {
        let (ctx, kappa) = &ctxs[t % ctxs.len()];
        let op = common::random_z_op(&mut rng, ctx.m());
        if delta(ctx, kappa, &psi(ctx, kappa, &op).unwrap()).unwrap() == op {
            round_trip += 1;
        }
    }
    outcome(
        kernel == 100 && ring_map == 100 && round_trip == 50,
        format!("kernel {kernel}/100, multiplicative {ring_map}/100, delta(psi) = id {round_trip}/50"),
    )
}

fn pochhammer(a: &Q, j: i64) -> Q {
    let mut acc = Q::one();
    let mut x = a.clone();
    for _ in 0..j {
        acc *= &x;
        x += Q::one();
    }
    acc
}

fn c6_horn_series() -> Outcome {
    let (a, b, c) = (qf(1, 2), qf(1, 3), qf(5, 7));
    let bm = IntMat::lit(&[&[1], &[1], &[-1], &[-1]]);
    let kappa = vec![q(0), &c - q(1), -a.clone(), -b.clone()];
    let h = horn_generators(&bm, &kappa, false).unwrap();
    let s = horn_series(&h, &[q(0)], 13).unwrap();
    let mut fact = Q::one();
    let mut matched = 0;
    for j in 0..=12i64 {
        if j > 0 {
            fact *= q(j);
        }
        let want = pochhammer(&a, j) * pochhammer(&b, j) / (pochhammer(&c, j) * &fact);
        if s.coeff(&[j]) == want {
            matched += 1;
        }
    }
    let rep = annihilation_check(&h.generators, &s, 10);
    outcome(matched == 13 && rep.passed, format!("coefficients {matched}/13; residual zero through 10: {}", rep.passed))
}

fn c7_transfer() -> Outcome {
    let a = IntMat::lit(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, -1]]);
    let b = IntMat::lit(&[&[1], &[1], &[-1], &[-1]]);
    let ctx = build_gale_context(&a, Some(&b), None).unwrap();
    let kg = vec![q(0), qf(5, 7) - q(1), qf(-1, 2), qf(-1, 3)];
    let beta = a.mul_qvec(&kg);
    let kappa = solve_parameter(&a, &beta, ParameterMode::AnnihilatingC).unwrap();
    let sys = gkz_system(&ctx, &kappa, 2).unwrap();
    let vs = qla::solve(&a.select_cols(&[1, 2, 3]).to_q(), &beta).unwrap();
    let v = vec![q(0), vs[0].clone(), vs[1].clone(), vs[2].clone()];
    let phi = gkz_series(&sys, &v, 11).unwrap();
    let img = torus_factor_map(&phi, &ctx, &kappa).unwrap();
    let horn = horn_generators(&b, &kappa, false).unwrap();
    let rep = annihilation_check(&horn.generators, &img.principal, 8);
    let nonzero = !img.principal.is_zero();
    outcome(rep.passed && nonzero, format!("{} z-terms; Horn residual zero through 8: {}", img.principal.terms.len(), rep.passed))
}

fn c8_rank_volume() -> Outcome {
    let a = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
    let ctx = build_gale_context(&a, None, None).unwrap();
    let beta = vec![qf(1, 2), qf(1, 3)];
    let kappa = solve_parameter(&a, &beta, ParameterMode::Any).unwrap();
    let sys = gkz_system(&ctx, &kappa, 2).unwrap();
    let rank = rank_by_series(&sys, &beta, 8).unwrap().count;
    let vol = faces_and_volume(&a, None).unwrap().vol;
    outcome(rank == 3 && vol == 3, format!("rank {rank}, volume {vol}"))
}

fn c9_restriction() -> Outcome {
    let a = IntMat::lit(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, -1]]);
    let b = IntMat::lit(&[&[1], &[1], &[-1], &[-1]]);
    let ctx = build_gale_context(&a, Some(&b), None).unwrap();
    let kappa = vec![q(0), qf(-2, 7), qf(-1, 2), qf(-1, 3)];
    let r = restriction_witnesses(&ctx, &kappa).unwrap();
    let ring = WeylRing::x(4);
    let thetas = r.bfunction_witness.iter().all(|w| w.initial == WeylOp::theta(ring, w.j) && w.equal);
    let eq = r.nhorn_equality.iter().all(|c| c.equal);
    let ok = r.passed && thetas && eq && r.bfunction_witness.len() == 3 && r.nhorn_equality.len() == 1;
    outcome(ok, format!("nHorn equal {}/{}, theta witnesses {}/3", r.nhorn_equality.iter().filter(|c| c.equal).count(), r.nhorn_equality.len(), r.bfunction_witness.iter().filter(|w| w.equal).count()))
}

fn c10_classification() -> Outcome {
    let f81 = fixtures::by_name("ex8_1").unwrap();
    let ctx81 = f81.context().unwrap();
    let cands = candidate_pairs(&ctx81).unwrap();
    let beta = ctx81.a.mul_qvec(f81.kappa.as_ref().unwrap());
    let rep = toral_parameter_tests(&ctx81, &beta).unwrap();
    let meta = &f81.expected;
    let recorded = meta.beta.as_deref() == Some(&[q(2), q(0), q(0), q(0)][..])
        && meta.rank == Some(6)
        && meta.rank_recomputed == Some(false);
    let r81 = golden("ex8_1", false);
    let r68 = golden("ex6_8", false);
    let ctx68 = fixtures::by_name("ex6_8").unwrap().context().unwrap();
    let all_toral = candidate_pairs(&ctx68).unwrap().iter().all(|c| c.toral);
    let ok = recorded && r81.passed && r68.passed && all_toral && !cands.is_empty();
    outcome(
        ok,
        format!(
            "ex8_1: {} candidates, toral {:?}, completely {:?}; ex6_8 all toral {all_toral}",
            cands.len(),
            rep.toral_flag,
            rep.completely_toral_flag
        ),
    )
}

fn homogeneous_bundle() -> Vec<IntMat> {
    vec![IntMat::lit(&[&[1], &[-2], &[1]]), IntMat::lit(&[&[1, 0], &[-2, 1], &[1, -2], &[0, 1]])]
}

fn c11_hk() -> Outcome {
    let b = IntMat::lit(&[&[1], &[-2], &[1]]);
    let f = Poly::from_terms(1, [(vec![0], q(1)), (vec![1], q(-4))]);
    let rep = vanish_check(&f, &b, 20).unwrap();
    let same_route = dehomogenize_discriminant(&quadratic_discriminant(), &b).unwrap();
    let cubic_ok = {
        let bc = &homogeneous_bundle()[1];
        vanish_check(&dehomogenize_discriminant(&cubic_discriminant(), bc).unwrap(), bc, 20).unwrap().passed
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut scale_ok = 0;
    let mut tried = 0;
    for bm in homogeneous_bundle() {
        for _ in 0..25 {
            let s: Vec<Q> = (0..bm.cols()).map(|_| common::small_q(&mut rng)).collect();
            let t = qf(rng.gen_range(1..=9), rng.gen_range(1..=4)) * q(if rng.gen_bool(0.5) { 1 } else { -1 });
            let Ok(z) = hk_parametrize(&bm, &s) else { continue };
            tried += 1;
            let ts: Vec<Q> = s.iter().map(|x| x * &t).collect();
            if hk_parametrize(&bm, &ts).unwrap() == z {
                scale_ok += 1;
            }
        }
    }
    let ok = rep.passed && rep.zeros == 20 && same_route == f && cubic_ok && scale_ok == tried;
    outcome(ok, format!("{}/20 exact zeros (seed {SAMPLE_SEED:#x}); scale invariance {scale_ok}/{tried}; cubic {cubic_ok}", rep.zeros))
}

fn c12_weyl() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut agree = 0;
    for _ in 0..200 {
        let p = common::random_op(&mut rng, 3, 3, 2);
        let r = common::random_op(&mut rng, 3, 3, 2);
        let f = common::dense_poly(&mut rng, 3, 5);
        if (&p * &r).apply_poly(&f) == p.apply_poly(&r.apply_poly(&f)) {
            agree += 1;
        }
    }
    let a = IntMat::lit(&[&[1, 1, 1], &[0, 1, 2]]);
    let mut additive = 0;
    let mut products = 0;
    for _ in 0..100 {
        let p = homogeneous_op(&mut rng);
        let r = homogeneous_op(&mut rng);
        let pr = &p * &r;
        if pr.is_zero() {
            continue;
        }
        products += 1;
        if let (ADegree::Degree(dp), ADegree::Degree(dr), ADegree::Degree(d)) = (p.a_degree(&a), r.a_degree(&a), pr.a_degree(&a)) {
            if d.iter().zip(dp.iter().zip(&dr)).all(|(s, (x, y))| *s == x + y) {
                additive += 1;
            }
        }
    }
    outcome(agree == 200 && additive == products, format!("oracle {agree}/200; a_degree additive {additive}/{products}"))
}

/// Homogeneous for `A = [[1,1,1],[0,1,2]]`: exponent differences vary along
/// the kernel vector `(1,-2,1)`.
fn homogeneous_op(rng: &mut ChaCha8Rng) -> WeylOp {
    let ring = WeylRing::x(3);
    let base: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
    let mut op = WeylOp::zero(ring);
    for _ in 0..rng.gen_range(1..=3) {
        let t = rng.gen_range(-1..=1);
        let mut xe = Vec::new();
        let mut de = Vec::new();
        for (i, k) in [1, -2, 1].iter().enumerate() {
            let s = base[i] + t * k;
            let c = rng.gen_range(0..=1);
            xe.push(s.max(0) + c);
            de.push((-s).max(0) + c);
        }
        op = &op + &WeylOp::term(ring, xe, de, q(rng.gen_range(1..=4))).unwrap();
    }
    op
}

fn main() {
    assert_eq!(TOLERANCE, 0);
    let (c2, r57) = c2_images_literal();
    let results = vec![
        ("1 Gale context reproduction", c1_gale_context()),
        ("2 invariantization golden images", c2),
        ("3 sHorn decomposition", c3_shorn()),
        ("4 non-cyclic presentation", c4_non_cyclic()),
        ("5 delta kernel and ring map", c5_delta()),
        ("6 Horn series", c6_horn_series()),
        ("7 solution transfer", c7_transfer()),
        ("8 rank equals volume", c8_rank_volume()),
        ("9 restriction witnesses", c9_restriction()),
        ("10 classification fixtures", c10_classification()),
        ("11 Horn-Kapranov", c11_hk()),
        ("12 Weyl algebra soundness", c12_weyl()),
    ];
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }

    // The printed first image carries an inverted prefactor. It is the only
    // known deviation and it must look exactly like the recorded erratum.
    let fails: Vec<&str> = results.iter().filter(|(_, o)| !o.passed).map(|(n, _)| *n).collect();
    assert_eq!(fails, vec!["2 invariantization golden images"], "unexpected failures");
    assert_eq!(failed_labels(&r57), vec!["image1".to_string()]);
    let corrected = golden("ex5_7", true);
    assert!(corrected.passed, "{}", corrected.pretty());
    assert_eq!(corrected.errata_applied.len(), 1);
    println!("note: criterion 2 passes for image2 and image3 and for image1 with the recorded prefactor z^(2/3,1/3)");
}
