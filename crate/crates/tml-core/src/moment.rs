//! Toroidal second moments M_{a,b}(q) = (1/(q−1)) Σ_χ L(½,χ^a)L(½,χ^b),
//! their predicted main terms, and the twisted/subfamily variants.
//!
//! Two computation paths: `moment_exact` goes through the batch L-table
//! (one Hurwitz-zeta DFT), `afe_moment` through the functional-equation
//! bucket engine. Both split the average into even/odd character classes
//! and carry the trivial-power characters as exact corrections, so
//! moment = even_part + odd_part + corrections holds by construction.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, LN_2, PI};
use std::time::Instant;

use crate::chars::Character;
use crate::error::{Error, Result};
use crate::field::{build_ctx, gcd_i, FieldCtx};
use crate::lfun::weight::GChoice;
use crate::lfun::{digamma, l_central, l_central_all, riemann_zeta, AfeEngine, LTable};

const EULER_GAMMA: f64 = 0.5772156649015329;

/// One moment computation: the value, its even/odd split, the predicted
/// main term, and bookkeeping.
#[derive(Clone, Debug)]
pub struct MomentReport {
    pub q: u64,
    pub a: i64,
    pub b: i64,
    pub moment: Complex64,
    pub even_part: Complex64,
    pub odd_part: Complex64,
    pub main_term: f64,
    pub abs_error: f64,
    pub nonvanishing_count: u64,
    pub seconds: f64,
    pub method: &'static str,
}

impl MomentReport {
    /// The trivial-power correction implied by the split.
    #[inline]
    pub fn corrections(&self) -> Complex64 {
        self.moment - self.even_part - self.odd_part
    }
}

/// Nonvanishing census over the character products.
#[derive(Clone, Debug)]
pub struct Nonvanishing {
    pub count: u64,
    /// Indices whose |product| sits in [1e−10, 1e−6]·scale — small enough
    /// to deserve a second look, large enough not to be numerical zero.
    pub flagged: Vec<u64>,
}

fn nonvanishing_scan(prods: &[Complex64]) -> Nonvanishing {
    let scale = prods.iter().map(|p| p.norm()).fold(1.0f64, f64::max);
    let mut count = 0;
    let mut flagged = Vec::new();
    for (j, p) in prods.iter().enumerate() {
        let m = p.norm();
        if m > 1e-8 * scale {
            count += 1;
        }
        if m >= 1e-10 * scale && m <= 1e-6 * scale {
            flagged.push(j as u64);
        }
    }
    Nonvanishing { count, flagged }
}

/// C = γ/2 − π/4 − 3(log 2)/2 − (log π)/2 ≈ −2.108876, the constant of
/// the diagonal main term log q + 2C.
///
/// # Panics
/// If the two closed forms (the second via ψ(¼)) disagree beyond 1e−12,
/// which would indicate a broken digamma.
pub fn const_c() -> f64 {
    let direct = 0.5 * EULER_GAMMA - FRAC_PI_4 - 1.5 * LN_2 - 0.5 * PI.ln();
    let via_digamma = EULER_GAMMA + 0.5 * digamma(0.25) - 0.5 * PI.ln();
    assert!(
        (direct - via_digamma).abs() < 1e-12,
        "C forms disagree: {direct} vs {via_digamma}"
    );
    direct
}

/// Predicted main term of M_{a,b}(q): log q + 2C on the diagonal a+b = 0,
/// ζ((|a|+|b|)/(2 gcd(a,b))) for ab < 0 off the diagonal, 1 for ab > 0.
///
/// # Panics
/// If a·b = 0.
pub fn predict_main(a: i64, b: i64, q: u64) -> f64 {
    assert!(a != 0 && b != 0, "exponents must be nonzero");
    if a + b == 0 {
        return (q as f64).ln() + 2.0 * const_c();
    }
    if (a > 0) == (b > 0) {
        return 1.0;
    }
    let e = (a.unsigned_abs() + b.unsigned_abs()) as f64 / (2 * gcd_i(a, b)) as f64;
    riemann_zeta(e).expect("exponent > 1 off the diagonal")
}

#[inline]
fn power_index(n: u64, e: i64, j: u64) -> usize {
    (e as i128 * j as i128).rem_euclid(n as i128) as usize
}

/// M_{a,b}(q) from a prebuilt L-table: O(q) on top of the table.
pub fn moment_exact_from(table: &LTable, ctx: &FieldCtx, a: i64, b: i64) -> Result<MomentReport> {
    let t0 = Instant::now();
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    let n = ctx.order();
    let nf = n as f64;
    let mut even = Complex64::new(0.0, 0.0);
    let mut odd = Complex64::new(0.0, 0.0);
    let mut triv = Complex64::new(0.0, 0.0);
    let mut prods = Vec::with_capacity(n as usize);
    for j in 0..n {
        let aj = power_index(n, a, j);
        let bj = power_index(n, b, j);
        let p = table.values[aj] * table.values[bj];
        prods.push(p);
        if aj == 0 || bj == 0 {
            triv += p;
        } else if j & 1 == 0 {
            even += p;
        } else {
            odd += p;
        }
    }
    even /= nf;
    odd /= nf;
    triv /= nf;
    Ok(finish(ctx.q(), a, b, even, odd, triv, &prods, t0, "exact"))
}

/// M_{a,b}(q) by the exact central-value pipeline: builds the L-table and
/// averages the products; O(q log q) total.
pub fn moment_exact(ctx: &FieldCtx, a: i64, b: i64) -> Result<MomentReport> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    let table = l_central_all(ctx);
    moment_exact_from(&table, ctx, a, b)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    q: u64,
    a: i64,
    b: i64,
    even: Complex64,
    odd: Complex64,
    triv: Complex64,
    prods: &[Complex64],
    t0: Instant,
    method: &'static str,
) -> MomentReport {
    let moment = even + odd + triv;
    let main_term = predict_main(a, b, q);
    let nv = nonvanishing_scan(prods);
    MomentReport {
        q,
        a,
        b,
        moment,
        even_part: even,
        odd_part: odd,
        main_term,
        abs_error: (moment - main_term).norm(),
        nonvanishing_count: nv.count,
        seconds: t0.elapsed().as_secs_f64(),
        method,
    }
}

/// Twisted second moment (1/(q−1)) Σ_χ χ(ρ) |L(½,χ)|² from a prebuilt
/// table: O(q).
pub fn twisted_moment_from(table: &LTable, ctx: &FieldCtx, rho: u64) -> Result<Complex64> {
    let r = ctx.reduce(rho as i64);
    if r == 0 {
        return Err(Error::BadResidue {
            u: rho as i64,
            q: ctx.q(),
        });
    }
    let d = ctx.dlog(r) as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, v) in table.values.iter().enumerate() {
        acc += ctx.unity(j as i64 * d) * v.norm_sqr();
    }
    Ok(acc / ctx.order() as f64)
}

/// Twisted second moment, building its own table.
pub fn twisted_moment(ctx: &FieldCtx, rho: u64) -> Result<Complex64> {
    let table = l_central_all(ctx);
    twisted_moment_from(&table, ctx, rho)
}

/// Second moment over the subfamily of a-th powers:
/// (1/(q−1)) Σ_{χ = η^a} |L(½,χ)|² = M_{a,−a}(q)/gcd(a,q−1).
///
/// # Panics
/// If a < 1, or if the exact subgroup identity fails beyond 1e−8 (which
/// would indicate a broken table).
pub fn power_subfamily_moment(ctx: &FieldCtx, a: i64) -> f64 {
    assert!(a >= 1, "subfamily exponent must be >= 1");
    let table = l_central_all(ctx);
    let n = ctx.order();
    let g = gcd_i(a, n as i64);
    let mut acc = 0.0;
    let mut j = 0u64;
    while j < n {
        acc += table.values[j as usize].norm_sqr();
        j += g;
    }
    let value = acc / n as f64;
    // the full moment over the same table, for the subgroup identity
    let full: f64 = (0..n)
        .map(|j| {
            let aj = power_index(n, a, j);
            table.values[aj].norm_sqr()
        })
        .sum::<f64>()
        / n as f64;
    assert!(
        (value * g as f64 - full).abs() <= 1e-8,
        "subgroup identity violated: {} vs {}",
        value * g as f64,
        full
    );
    value
}

/// Result of a root-twist probe: either the twisted moment at the
/// smallest root of f mod q, or the statement that f has no root there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootTwist {
    Value { rho: u64, value: Complex64 },
    NoRoot,
}

/// Twisted moment at the smallest root mod q of an integer polynomial
/// (coefficients low-to-high). The polynomial must be irreducible over Q
/// of degree ≥ 2; a rational-root certificate of reducibility is checked,
/// full irreducibility is the caller's responsibility.
pub fn root_twist(ctx: &FieldCtx, f: &[i64]) -> Result<RootTwist> {
    let deg = match f.iter().rposition(|&c| c != 0) {
        Some(d) => d,
        None => {
            return Err(Error::PreconditionViolated {
                what: "zero polynomial".into(),
            })
        }
    };
    if deg < 2 {
        return Err(Error::PreconditionViolated {
            what: format!("degree {deg} < 2"),
        });
    }
    let f = &f[..=deg];
    if f[0] == 0 {
        // x divides f
        return Err(Error::ReducibleHint { num: 0, den: 1 });
    }
    if let Some((num, den)) = rational_root(f) {
        return Err(Error::ReducibleHint { num, den });
    }
    let q = ctx.q();
    for rho in 1..q {
        let mut acc: i128 = 0;
        for &c in f.iter().rev() {
            acc = (acc * rho as i128 + c as i128).rem_euclid(q as i128);
        }
        if acc == 0 {
            let value = twisted_moment(ctx, rho)?;
            return Ok(RootTwist::Value { rho, value });
        }
    }
    Ok(RootTwist::NoRoot)
}

/// Rational root p/s of an integer polynomial (constant term nonzero),
/// in lowest terms with s > 0, via the rational-root theorem.
fn rational_root(f: &[i64]) -> Option<(i64, i64)> {
    let lead = *f.last().unwrap();
    let numerators = divisors(f[0].unsigned_abs());
    let denominators = divisors(lead.unsigned_abs());
    for &s in &denominators {
        for &p in &numerators {
            for num in [p as i64, -(p as i64)] {
                // f(num/s)·s^deg = Σ c_k num^k s^{deg−k}
                let deg = f.len() - 1;
                let mut acc: i128 = 0;
                for (k, &c) in f.iter().enumerate() {
                    let mut term = c as i128;
                    for _ in 0..k {
                        term *= num as i128;
                    }
                    for _ in k..deg {
                        term *= s as i128;
                    }
                    acc += term;
                }
                if acc == 0 && gcd_i(num, s as i64) == 1 {
                    return Some((num, s as i64));
                }
            }
        }
    }
    None
}

fn divisors(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            if d != m / d {
                out.push(m / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Count of characters with L(½,χ^a)L(½,χ^b) numerically nonzero, with
/// the borderline indices flagged.
pub fn nonvanishing_count(ctx: &FieldCtx, a: i64, b: i64) -> Result<Nonvanishing> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    let table = l_central_all(ctx);
    let n = ctx.order();
    let prods: Vec<Complex64> = (0..n)
        .map(|j| table.values[power_index(n, a, j)] * table.values[power_index(n, b, j)])
        .collect();
    Ok(nonvanishing_scan(&prods))
}

/// M_{a,b}(q) through the functional-equation engine with the given test
/// function: one pair sweep, four DFTs, exact trivial-power corrections.
pub fn afe_moment_opts(
    ctx: &FieldCtx,
    a: i64,
    b: i64,
    x: f64,
    g: GChoice,
) -> Result<MomentReport> {
    let t0 = Instant::now();
    let engine = AfeEngine::new(ctx, a, b, x, g)?;
    let n = ctx.order();
    let nf = n as f64;
    let mut exact: HashMap<usize, Complex64> = HashMap::new();
    let mut even = Complex64::new(0.0, 0.0);
    let mut odd = Complex64::new(0.0, 0.0);
    let mut triv = Complex64::new(0.0, 0.0);
    let mut prods = Vec::with_capacity(n as usize);
    for j in 0..n {
        let aj = engine.power_index(a, j);
        let bj = engine.power_index(b, j);
        if aj == 0 || bj == 0 {
            let mut lv = |k: usize| {
                *exact
                    .entry(k)
                    .or_insert_with(|| l_central(&Character::new(ctx, k as i64)))
            };
            let p = lv(aj) * lv(bj);
            prods.push(p);
            triv += p;
        } else {
            let p = engine.bracket(j);
            prods.push(p);
            if j & 1 == 0 {
                even += p;
            } else {
                odd += p;
            }
        }
    }
    even /= nf;
    odd /= nf;
    triv /= nf;
    Ok(finish(ctx.q(), a, b, even, odd, triv, &prods, t0, "afe"))
}

/// M_{a,b}(q) through the functional equation with the primary test
/// function and split X (so Y = q²/X). Must agree with `moment_exact`
/// to 1e−5 wherever the pair sweep fits in memory.
pub fn afe_moment(ctx: &FieldCtx, a: i64, b: i64, x: f64) -> Result<MomentReport> {
    afe_moment_opts(ctx, a, b, x, GChoice::Exp1)
}

/// A moment-computation strategy, dispatchable by name at runtime.
pub trait MomentMethod: Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, ctx: &FieldCtx, a: i64, b: i64) -> Result<MomentReport>;
}

/// Moments of M_{a,b}(q) for each modulus in `q_list`, in input order.
/// Per-entry failures (composite moduli, oversize sweeps) are recorded in
/// place, not fatal. `workers = 0` uses one thread per core.
pub fn sweep(
    a: i64,
    b: i64,
    q_list: &[u64],
    workers: usize,
    method: &dyn MomentMethod,
) -> Result<Vec<Result<MomentReport>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::PreconditionViolated {
            what: format!("worker pool: {e}"),
        })?;
    Ok(pool.install(|| {
        q_list
            .par_iter()
            .map(|&q| build_ctx(q).and_then(|ctx| method.compute(&ctx, a, b)))
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfun::{n_term, p_term, Parity};

    const C0: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn constant_forms() {
        let c = const_c();
        assert!((c - (-2.1088760447)).abs() < 1e-9, "C={c}");
        assert!((2.0 * c - (-4.2177520894)).abs() < 1e-8);
    }

    #[test]
    fn predictions() {
        let q = 10007u64;
        let diag = predict_main(3, -3, q);
        assert!((diag - ((q as f64).ln() + 2.0 * const_c())).abs() < 1e-12);
        // ζ(2) = π²/6 for (1,−3)
        assert!((predict_main(1, -3, q) - PI * PI / 6.0).abs() < 1e-10);
        assert!((predict_main(1, -3, q) - 1.6449341).abs() < 1e-7);
        assert_eq!(predict_main(2, 5, q), 1.0);
        // (1,−2) and (2,−4) share ζ(3/2)
        assert!((predict_main(1, -2, q) - predict_main(2, -4, q)).abs() < 1e-14);
        assert!((predict_main(1, -2, q) - 2.612375348685488).abs() < 1e-10);
    }

    #[test]
    fn exact_small_q_oracle() {
        // q=5: M_{1,−1} = (1/4) Σ_j |L(½,χ_j)|² by four direct calls
        let ctx = build_ctx(5).unwrap();
        let direct: f64 = (0..4)
            .map(|j| l_central(&Character::new(&ctx, j)).norm_sqr())
            .sum::<f64>()
            / 4.0;
        let rep = moment_exact(&ctx, 1, -1).unwrap();
        assert!((rep.moment.re - direct).abs() < 1e-10);
        assert!(rep.moment.im.abs() < 1e-12);
        assert_eq!(rep.method, "exact");
        assert_eq!(rep.q, 5);
        assert!(rep.abs_error >= 0.0);
        assert!(rep.nonvanishing_count <= 4);
    }

    #[test]
    fn exact_general_oracle() {
        // q=13, (a,b)=(2,3): independent per-character product sum
        let ctx = build_ctx(13).unwrap();
        let mut want = C0;
        for j in 0..12i64 {
            let la = l_central(&Character::new(&ctx, 2 * j));
            let lb = l_central(&Character::new(&ctx, 3 * j));
            want += la * lb;
        }
        want /= 12.0;
        let rep = moment_exact(&ctx, 2, 3).unwrap();
        assert!((rep.moment - want).norm() < 1e-9, "{} vs {want}", rep.moment);
        // split recombines, with the trivial-power corrections nonzero
        // here (2j ≡ 0 at j ∈ {0,6}, 3j ≡ 0 at j ∈ {0,4,8})
        let corr = rep.corrections();
        assert!(corr.norm() > 1e-6);
        assert!(
            (rep.even_part + rep.odd_part + corr - rep.moment).norm() < 1e-14
        );
    }

    #[test]
    fn relabeling_and_conjugation() {
        let ctx = build_ctx(13).unwrap();
        let m1 = moment_exact(&ctx, 1, -1).unwrap().moment;
        let m2 = moment_exact(&ctx, -1, 1).unwrap().moment;
        assert!((m1 - m2).norm() < 1e-12);
        for (a, b) in [(1i64, 2i64), (2, 3), (1, -2)] {
            let m = moment_exact(&ctx, a, b).unwrap().moment;
            let mc = moment_exact(&ctx, -a, -b).unwrap().moment;
            assert!((m - mc.conj()).norm() < 1e-10, "(a,b)=({a},{b})");
        }
    }

    #[test]
    fn zero_exponent_rejected() {
        let ctx = build_ctx(5).unwrap();
        assert!(matches!(
            moment_exact(&ctx, 0, 1),
            Err(Error::ZeroExponent)
        ));
        assert!(matches!(
            nonvanishing_count(&ctx, 1, 0),
            Err(Error::ZeroExponent)
        ));
    }

    #[test]
    fn twisted_trivial_and_symmetry() {
        let ctx = build_ctx(13).unwrap();
        let full = moment_exact(&ctx, 1, -1).unwrap().moment;
        let t1 = twisted_moment(&ctx, 1).unwrap();
        assert!((t1 - full).norm() < 1e-10);
        // ρ = −1: the twist pairs χ with χ̄, so the sum is real
        let tm1 = twisted_moment(&ctx, 12).unwrap();
        assert!(tm1.im.abs() < 1e-10, "{tm1}");
        assert!(matches!(
            twisted_moment(&ctx, 13),
            Err(Error::BadResidue { .. })
        ));
        assert!(matches!(
            twisted_moment(&ctx, 26),
            Err(Error::BadResidue { .. })
        ));
    }

    #[test]
    fn partition_identity() {
        // Σ over ρ with ρ³ = 1 of the ρ-twist equals M_{3,−3}
        let ctx = build_ctx(13).unwrap();
        let table = l_central_all(&ctx);
        let mut acc = C0;
        for rho in 1..13u64 {
            if rho.pow(3) % 13 == 1 {
                acc += twisted_moment_from(&table, &ctx, rho).unwrap();
            }
        }
        let m = moment_exact_from(&table, &ctx, 3, -3).unwrap().moment;
        assert!((acc - m).norm() < 1e-8, "{acc} vs {m}");
    }

    #[test]
    fn subfamily_identities() {
        let ctx = build_ctx(13).unwrap();
        // gcd(5,12)=1: the subfamily is the whole family
        let whole = power_subfamily_moment(&ctx, 5);
        let m11 = moment_exact(&ctx, 1, -1).unwrap().moment;
        assert!((whole - m11.re).abs() < 1e-10);
        // a=3: a third of M_{3,−3}
        let sub = power_subfamily_moment(&ctx, 3);
        let m33 = moment_exact(&ctx, 3, -3).unwrap().moment;
        assert!((sub * 3.0 - m33.re).abs() < 1e-8);
        // q=7, a=6: only the trivial character; closed form
        let ctx7 = build_ctx(7).unwrap();
        let sub7 = power_subfamily_moment(&ctx7, 6);
        let l0 = -1.4603545088095868 * (1.0 - 1.0 / 7f64.sqrt());
        assert!((sub7 - l0 * l0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn root_twist_cases() {
        // x²+1 mod 13: roots ±5, smallest 5
        let ctx = build_ctx(13).unwrap();
        match root_twist(&ctx, &[1, 0, 1]).unwrap() {
            RootTwist::Value { rho, value } => {
                assert_eq!(rho, 5);
                let direct = twisted_moment(&ctx, 5).unwrap();
                assert!((value - direct).norm() < 1e-12);
            }
            RootTwist::NoRoot => panic!("x²+1 has roots mod 13"),
        }
        // −1 is not a square mod 7
        let ctx7 = build_ctx(7).unwrap();
        assert_eq!(root_twist(&ctx7, &[1, 0, 1]).unwrap(), RootTwist::NoRoot);
        // x³−2 mod 31: 4³ = 64 ≡ 2
        let ctx31 = build_ctx(31).unwrap();
        match root_twist(&ctx31, &[-2, 0, 0, 1]).unwrap() {
            RootTwist::Value { rho, .. } => assert_eq!(rho, 4),
            RootTwist::NoRoot => panic!("2 is a cube mod 31"),
        }
    }

    #[test]
    fn root_twist_rejections() {
        let ctx = build_ctx(13).unwrap();
        // x²−1 = (x−1)(x+1)
        assert!(matches!(
            root_twist(&ctx, &[-1, 0, 1]),
            Err(Error::ReducibleHint { den: 1, .. })
        ));
        // 4x²−1 has only the non-integral roots ±½
        assert!(matches!(
            root_twist(&ctx, &[-1, 0, 4]),
            Err(Error::ReducibleHint { den: 2, .. })
        ));
        // x | 3x²+x
        assert!(matches!(
            root_twist(&ctx, &[0, 1, 3]),
            Err(Error::ReducibleHint { num: 0, den: 1 })
        ));
        // degree too small, even after trimming leading zeros
        assert!(matches!(
            root_twist(&ctx, &[1, 1]),
            Err(Error::PreconditionViolated { .. })
        ));
        assert!(matches!(
            root_twist(&ctx, &[5, 3, 0, 0]),
            Err(Error::PreconditionViolated { .. })
        ));
        assert!(root_twist(&ctx, &[1, 0, 1, 0]).is_ok());
    }

    #[test]
    fn nonvanishing_census() {
        let ctx = build_ctx(5).unwrap();
        let nv = nonvanishing_count(&ctx, 1, 1).unwrap();
        assert!(nv.count <= 4);
        // direct: all four products are far from zero at q=5
        let all_big = (0..4i64).all(|j| {
            l_central(&Character::new(&ctx, j)).norm_sqr() > 1e-4
        });
        assert!(all_big && nv.count == 4, "count={}", nv.count);
        // censored census is conjugation-invariant
        let ctx13 = build_ctx(13).unwrap();
        let nv1 = nonvanishing_count(&ctx13, 2, 3).unwrap();
        let nv2 = nonvanishing_count(&ctx13, -2, -3).unwrap();
        assert_eq!(nv1.count, nv2.count);
        assert_eq!(nv1.flagged, nv2.flagged);
    }

    #[test]
    fn afe_agrees_with_exact() {
        let ctx = build_ctx(101).unwrap();
        for (a, b) in [(1i64, 1i64), (1, -1)] {
            let afe = afe_moment(&ctx, a, b, 101.0).unwrap();
            let exact = moment_exact(&ctx, a, b).unwrap();
            assert!(
                (afe.moment - exact.moment).norm() < 1e-5,
                "(a,b)=({a},{b}): {} vs {}",
                afe.moment,
                exact.moment
            );
            assert!((afe.even_part - exact.even_part).norm() < 1e-5);
            assert!((afe.odd_part - exact.odd_part).norm() < 1e-5);
            assert!((afe.corrections() - exact.corrections()).norm() < 1e-9);
            assert_eq!(afe.method, "afe");
        }
    }

    #[test]
    fn afe_split_independence() {
        let ctx = build_ctx(101).unwrap();
        let m1 = afe_moment(&ctx, 1, -2, 101.0 / 4.0).unwrap().moment;
        let m2 = afe_moment(&ctx, 1, -2, 101.0).unwrap().moment;
        let m3 = afe_moment(&ctx, 1, -2, 404.0).unwrap().moment;
        assert!((m1 - m2).norm() < 1e-5, "{m1} vs {m2}");
        assert!((m2 - m3).norm() < 1e-5, "{m2} vs {m3}");
    }

    #[test]
    fn afe_g_independence() {
        let ctx = build_ctx(13).unwrap();
        let m1 = afe_moment_opts(&ctx, 1, 1, 13.0, GChoice::Exp1).unwrap();
        let m2 = afe_moment_opts(&ctx, 1, 1, 13.0, GChoice::Exp2).unwrap();
        assert!(
            (m1.moment - m2.moment).norm() < 1e-6,
            "{} vs {}",
            m1.moment,
            m2.moment
        );
    }

    #[test]
    fn afe_report_ties_to_decomposition_terms() {
        // even_part + trivial even brackets = N + P; same for odd
        let ctx = build_ctx(31).unwrap();
        let (a, b) = (2i64, 1i64);
        let rep = afe_moment(&ctx, a, b, 31.0).unwrap();
        let engine = AfeEngine::new(&ctx, a, b, 31.0, GChoice::Exp1).unwrap();
        let nf = 30.0;
        // trivial-power indices: 2j ≡ 0 at j ∈ {0,15}; j ≡ 0 at 0
        let even_full = rep.even_part + engine.bracket(0) / nf;
        let ne = n_term(&ctx, a, b, 31.0, Parity::Even).unwrap();
        let pe = p_term(&ctx, a, b, 31.0, Parity::Even).unwrap();
        assert!((even_full - (ne + pe)).norm() < 1e-8);
        let odd_full = rep.odd_part + engine.bracket(15) / nf;
        let no = n_term(&ctx, a, b, 31.0, Parity::Odd).unwrap();
        let po = p_term(&ctx, a, b, 31.0, Parity::Odd).unwrap();
        let i_neg_beta = Complex64::new(0.0, -1.0); // β = (a&1)+(b&1) = 1
        assert!((odd_full - (no + i_neg_beta * po)).norm() < 1e-8);
    }

    struct Exact;
    impl MomentMethod for Exact {
        fn name(&self) -> &'static str {
            "exact"
        }
        fn compute(&self, ctx: &FieldCtx, a: i64, b: i64) -> Result<MomentReport> {
            moment_exact(ctx, a, b)
        }
    }

    #[test]
    fn sweep_order_and_errors() {
        let out = sweep(1, -1, &[5, 6, 7], 2, &Exact).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out[0].as_ref().unwrap().q, 5);
        assert!(matches!(out[1], Err(Error::NotPrime { q: 6 })));
        assert_eq!(out[2].as_ref().unwrap().q, 7);
        assert!(sweep(1, -1, &[], 1, &Exact).unwrap().is_empty());
        // deterministic across runs and worker counts
        let again = sweep(1, -1, &[5, 6, 7], 1, &Exact).unwrap();
        assert_eq!(
            out[2].as_ref().unwrap().moment,
            again[2].as_ref().unwrap().moment
        );
    }
}
