//! Property tests: randomized invariants over small prime fields. Each
//! property states an exact identity of the objects involved, so failures
//! point at implementation defects rather than tolerance choices.

use num_complex::Complex64;
use proptest::prelude::*;

use tml_core::chars::Character;
use tml_core::expsum::{
    duality_check, gauss_all, gauss_sum, mean_square, mean_square_predicted, subgroup_points,
    t_tilde, t_tilde_all, TorusMatrix,
};
use tml_core::field::{build_ctx, gcd_i};
use tml_core::fft::{dft, naive_dft};
use tml_core::lfun::hurwitz_zeta_half;
use tml_core::moment::predict_main;
use tml_core::toric::{lattice_min_2d, IntBox};

const SMALL_PRIMES: &[u64] = &[3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

fn small_prime() -> impl Strategy<Value = u64> {
    (0..SMALL_PRIMES.len()).prop_map(|i| SMALL_PRIMES[i])
}

/// Nonzero exponent in a modest range.
fn exponent() -> impl Strategy<Value = i64> {
    (-6i64..=6).prop_filter("nonzero", |&e| e != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// dlog is the inverse of g^·, and a homomorphism.
    #[test]
    fn dlog_homomorphism(q in small_prime(), x in 1u64..1000, y in 1u64..1000) {
        let ctx = build_ctx(q).unwrap();
        let (x, y) = (x % (q - 1) + 1, y % (q - 1) + 1);
        let n = ctx.order();
        prop_assert_eq!(ctx.gpow(ctx.dlog(x) as i64), x);
        let lhs = ctx.dlog(ctx.mul(x, y));
        let rhs = (ctx.dlog(x) + ctx.dlog(y)) % n;
        prop_assert_eq!(lhs, rhs);
    }

    /// χ_j^e evaluates as the e-th power of χ_j pointwise.
    #[test]
    fn character_powers(q in small_prime(), j in 0i64..60, e in -6i64..=6, u in 1u64..1000) {
        let ctx = build_ctx(q).unwrap();
        let u = u % (q - 1) + 1;
        let chi = Character::new(&ctx, j);
        let lhs = chi.power(e).eval(u);
        let rhs = chi.eval(u).powi(e as i32);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    /// ε has modulus one away from the trivial character, and the batch
    /// table matches the direct sum.
    #[test]
    fn gauss_sum_modulus(q in small_prime(), j in 1u64..60) {
        let ctx = build_ctx(q).unwrap();
        let j = j % (ctx.order() - 1) + 1; // nontrivial
        let chi = Character::new(&ctx, j as i64);
        let eps = gauss_sum(&chi);
        prop_assert!((eps.norm() - 1.0).abs() < 1e-10);
        let table = gauss_all(&ctx);
        prop_assert!((table[j as usize] - eps).norm() < 1e-10);
    }

    /// Conjugation sends T̃_{a,b}(u) to T̃_{a,b}((−1)^{a+b} u): negating both
    /// summation variables negates the additive argument.
    #[test]
    fn t_tilde_conjugation(q in small_prime(), a in exponent(), b in exponent(), u in 1u64..1000) {
        let ctx = build_ctx(q).unwrap();
        let u = (u % (q - 1) + 1) as i64;
        if a + b == 0 && ctx.q() == 3 {
            // fine, still valid — no special case needed
        }
        let lhs = t_tilde(&ctx, a, b, u).unwrap().conj();
        let sign = if (a + b).rem_euclid(2) == 0 { 1 } else { -1 };
        let rhs = t_tilde(&ctx, a, b, sign * u).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    /// Swapping the exponent roles swaps the summation variables only.
    #[test]
    fn t_tilde_symmetry(q in small_prime(), a in exponent(), b in exponent(), u in 1u64..1000) {
        let ctx = build_ctx(q).unwrap();
        let u = (u % (q - 1) + 1) as i64;
        let lhs = t_tilde(&ctx, a, b, u).unwrap();
        let rhs = t_tilde(&ctx, b, a, u).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    /// The batch T̃ table agrees with direct enumeration everywhere.
    #[test]
    fn t_tilde_batch(q in small_prime(), a in exponent(), b in exponent()) {
        let ctx = build_ctx(q).unwrap();
        let table = t_tilde_all(&ctx, a, b);
        for u in 1..q {
            let direct = t_tilde(&ctx, a, b, u as i64).unwrap();
            prop_assert!((table[(u - 1) as usize] - direct).norm() < 1e-8);
        }
    }

    /// Subgroup points satisfy the defining relations, come sorted and
    /// deduplicated, and have the predicted cardinality (q−1)·gcd(d,q−1)
    /// for a single row (a b) with d = gcd(a,b).
    #[test]
    fn subgroup_membership(q in small_prime(), a in exponent(), b in exponent()) {
        let ctx = build_ctx(q).unwrap();
        let m = TorusMatrix::row2(a, b);
        let pts = subgroup_points(&ctx, &m).unwrap();
        let n = ctx.order();
        let d = gcd_i(a, b);
        prop_assert_eq!(pts.len() as u64, n * gcd_i(d as i64, n as i64));
        for w in pts.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for p in &pts {
            let s = (a as i128 * ctx.dlog(p[0]) as i128 + b as i128 * ctx.dlog(p[1]) as i128)
                .rem_euclid(n as i128);
            prop_assert_eq!(s, 0);
        }
    }

    /// Mean square equals the subgroup density for random 1×2 relations.
    #[test]
    fn mean_square_random(q in small_prime(), a in -3i64..=3, b in -3i64..=3) {
        prop_assume!(a != 0 || b != 0);
        let ctx = build_ctx(q).unwrap();
        let m = TorusMatrix::row2(a, b);
        let ms = mean_square(&ctx, &m).unwrap();
        let pred = mean_square_predicted(&ctx, &m).unwrap();
        prop_assert!((ms - pred).abs() <= 1e-8 * pred.max(1.0));
    }

    /// Duality holds at random points for random single relations.
    #[test]
    fn duality_random(q in small_prime(), a in exponent(), b in exponent(),
                      u1 in 1u64..1000, u2 in 1u64..1000) {
        let ctx = build_ctx(q).unwrap();
        let m = TorusMatrix::row2(a, b);
        let u = [(u1 % (q - 1) + 1) as i64, (u2 % (q - 1) + 1) as i64];
        let (lhs, rhs) = duality_check(&ctx, &m, &u).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-8);
    }

    /// Lagrange–Gauss reduction finds the true shortest vector.
    #[test]
    fn lattice_min_exhaustive(q in small_prime(), alpha in 1u64..1000) {
        let alpha = alpha % (q - 1) + 1;
        let lm = lattice_min_2d(q, alpha);
        // brute scan: any minimizer has both coordinates below √(2q/√3)+1
        let r = (1.16 * q as f64).sqrt().ceil() as i64 + 1;
        let mut best = q as f64 * q as f64;
        for n in 1..=r {
            let m0 = (alpha as i64 * n).rem_euclid(q as i64);
            for m in [m0, m0 - q as i64] {
                best = best.min((m * m + n * n) as f64);
            }
        }
        prop_assert!((lm * lm - best).abs() < 1e-9);
    }

    /// Bluestein and the O(n²) transform agree at awkward lengths.
    #[test]
    fn dft_matches_naive(len in 1usize..48, seed in 0u64..1_000_000) {
        let x: Vec<Complex64> = (0..len)
            .map(|k| {
                let t = ((seed + k as u64 * 2654435761) % 1000) as f64 / 1000.0;
                Complex64::new(t - 0.5, (t * t) - 0.3)
            })
            .collect();
        for sign in [1, -1] {
            let fast = dft(&x, sign);
            let slow = naive_dft(&x, sign);
            for (f, s) in fast.iter().zip(&slow) {
                prop_assert!((f - s).norm() < 1e-9 * (len as f64));
            }
        }
    }

    /// Box and matrix string forms round-trip.
    #[test]
    fn parse_roundtrips(lo1 in -50i64..50, w1 in 0i64..20, lo2 in -50i64..50, w2 in 0i64..20,
                        a in -9i64..=9, b in -9i64..=9, c in -9i64..=9, d in -9i64..=9) {
        let bx = IntBox::new(vec![(lo1, lo1 + w1), (lo2, lo2 + w2)]).unwrap();
        let back: IntBox = bx.to_string().parse().unwrap();
        prop_assert_eq!(&bx, &back);

        let m = TorusMatrix::new(vec![vec![a, b], vec![c, d]]).unwrap();
        let back: TorusMatrix = m.to_string().parse().unwrap();
        prop_assert_eq!(m.entries(), back.entries());
    }

    /// The predicted main term is symmetric, conjugation-invariant and
    /// stable under common scaling of the exponents.
    #[test]
    fn predict_main_invariances(a in exponent(), b in exponent(), s in 1i64..=3,
                                q in small_prime()) {
        prop_assume!(a + b != 0);
        let base = predict_main(a, b, q);
        prop_assert_eq!(base, predict_main(b, a, q));
        prop_assert_eq!(base, predict_main(-a, -b, q));
        prop_assert_eq!(base, predict_main(s * a, s * b, q));
    }

    /// The multiplication identity Σ_{a=1}^{m} ζ(½, a/m) = √m·ζ(½).
    #[test]
    fn hurwitz_multiplication(m in 2u64..=9) {
        let zh = -1.4603545088095868; // ζ(½), pinned externally
        let s: f64 = (1..=m).map(|a| hurwitz_zeta_half(a as f64 / m as f64).unwrap()).sum();
        prop_assert!((s - (m as f64).sqrt() * zh).abs() < 1e-9);
    }
}
