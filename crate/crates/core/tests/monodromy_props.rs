//! Monodromy identities across every ordered chamber pair of small
//! diagrams: solution ratio against the theta formula, the cocycle
//! property, q-periodicity, and the stable-envelope normalization.

use num_complex::Complex64;
use quivertex_core::chambers::enumerate_chambers;
use quivertex_core::monodromy::{
    monodromy_formula, monodromy_ratio, qde_residual, qde_residual_negative,
    stab_normalized_core, NumericContext,
};
use quivertex_core::partitions::Partition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn nctx() -> NumericContext {
    NumericContext::new(
        Complex64::new(0.3, 0.0),
        Complex64::new(0.55, 0.0),
        1e-9,
    )
    .unwrap()
}

fn sample_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = 0.35 + 0.8 * rng.gen::<f64>();
            let phi = 0.25 * (rng.gen::<f64>() - 0.5);
            Complex64::from_polar(r, phi)
        })
        .collect()
}

#[test]
fn ratio_equals_formula_for_all_chamber_pairs() {
    let ctx = nctx();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["1", "2", "1,1", "2,1", "3"] {
        let la: Partition = name.parse().unwrap();
        let n = la.var_range().len();
        let chambers = enumerate_chambers(&la).unwrap();
        for c1 in &chambers {
            for c2 in &chambers {
                for _ in 0..3 {
                    let point = sample_point(&mut rng, n);
                    let ratio = monodromy_ratio(&la, c1, c2, &point, &ctx).unwrap();
                    let formula = monodromy_formula(&la, c1, c2, &point, &ctx).unwrap();
                    let err = (ratio - formula).norm() / (formula.norm() + 1.0);
                    assert!(err < 1e-8, "λ={name} err={err:.3e}");
                }
            }
        }
    }
}

#[test]
fn formula_satisfies_the_cocycle_identity() {
    let ctx = nctx();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let la: Partition = "2,1".parse().unwrap();
    let n = la.var_range().len();
    let chambers = enumerate_chambers(&la).unwrap();
    let triples = [(0usize, 3usize, 5usize), (1, 2, 7), (4, 6, 0)];
    for (a, b, c) in triples {
        for _ in 0..3 {
            let point = sample_point(&mut rng, n);
            let ab = monodromy_formula(&la, &chambers[a], &chambers[b], &point, &ctx).unwrap();
            let bc = monodromy_formula(&la, &chambers[b], &chambers[c], &point, &ctx).unwrap();
            let ac = monodromy_formula(&la, &chambers[a], &chambers[c], &point, &ctx).unwrap();
            let err = (ab * bc - ac).norm() / (ac.norm() + 1.0);
            assert!(err < 1e-8, "triple ({a},{b},{c}) err={err:.3e}");
        }
    }
}

#[test]
fn monodromy_is_q_periodic() {
    let ctx = nctx();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let la: Partition = "2".parse().unwrap();
    let n = la.var_range().len();
    let chambers = enumerate_chambers(&la).unwrap();
    let q = ctx.q();
    for dir in 0..n {
        for _ in 0..3 {
            let point = sample_point(&mut rng, n);
            let mut shifted = point.clone();
            shifted[dir] *= q;
            let r1 = monodromy_ratio(&la, &chambers[0], &chambers[3], &point, &ctx).unwrap();
            let r2 = monodromy_ratio(&la, &chambers[0], &chambers[3], &shifted, &ctx).unwrap();
            let err = (r2 / r1 - Complex64::new(1.0, 0.0)).norm();
            assert!(err < 1e-8, "dir={dir} err={err:.3e}");
        }
    }
}

#[test]
fn stable_envelope_normalization_is_consistent() {
    let ctx = nctx();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for name in ["1", "2", "2,1"] {
        let la: Partition = name.parse().unwrap();
        let n = la.var_range().len();
        let chambers = enumerate_chambers(&la).unwrap();
        for c1 in &chambers {
            for c2 in &chambers {
                let point = sample_point(&mut rng, n);
                let (rescaled, stab_ratio) =
                    stab_normalized_core(&la, c1, c2, &point, &ctx).unwrap();
                let err = (rescaled - stab_ratio).norm() / (stab_ratio.norm() + 1.0);
                assert!(err < 1e-8, "λ={name} err={err:.3e}");
            }
        }
    }
}

#[test]
fn residuals_scale_with_truncation() {
    // the per-box residual collapses as the truncation grows
    let base = NumericContext::new(
        Complex64::new(0.5, 0.0),
        Complex64::new(0.55, 0.0),
        1e-3,
    )
    .unwrap();
    let t = Complex64::new(0.4, 0.15);
    let coarse = qde_residual(t, &base.with_factors(12)).unwrap();
    let fine = qde_residual(t, &base.with_factors(60)).unwrap();
    assert!(fine < coarse * 1e-3, "coarse {coarse:.2e} fine {fine:.2e}");
    let neg_fine = qde_residual_negative(t, &base.with_factors(120)).unwrap();
    assert!(neg_fine < 1e-10);
}
