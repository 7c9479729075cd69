//! Approximate functional equation for L(½,χ^a)L(½,χ^b), batch and
//! per-character, plus the even/odd decomposition terms N and P.
//!
//! For χ^a, χ^b nontrivial,
//!   L(½,χ^a)L(½,χ^b) = Σ_{m,n} χ^a(m)χ^b(n)(mn)^{−1/2} V(mn/X)
//!     + [ε(χ^a)ε(χ^b)/i^{ta+tb}] Σ_{m,n} conj(χ^a(m)χ^b(n))(mn)^{−1/2} V(mn/Y)
//! with XY = q² and V the parity-matched weight. Since χ_j^a(m)χ_j^b(n)
//! = e(jt/(q−1)) depends only on t = a·ind(m)+b·ind(n) mod (q−1), each
//! smoothed sum collapses to a residue-bucketed table of length q−1, and
//! one DFT evaluates it for every character at once.

use num_complex::Complex64;

use crate::chars::Character;
use crate::error::{Error, Result};
use crate::expsum::{gauss_all, t_tilde_all};
use crate::fft::dft;
use crate::field::FieldCtx;
use crate::lfun::weight::{v_grid, GChoice, VGrid};

/// i^{−k} for k mod 4.
const I_NEG: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, -1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, 1.0),
];

/// Cap on the combined length of the two weight tables (their memory is
/// 16 bytes per unit): y_cut·(X+Y) must stay below this.
const PAIR_CAP: u128 = 80_000_000;

/// Character parity class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parameters of one AFE evaluation: exponents, split point, parities of
/// (χ^a, χ^b) for the class being processed, and the test function.
#[derive(Clone, Copy, Debug)]
pub struct AfeParams {
    pub a: i64,
    pub b: i64,
    pub x: f64,
    pub y: f64,
    pub ta: u8,
    pub tb: u8,
    pub g: GChoice,
}

impl AfeParams {
    /// Params for the parity class of a given character, with Y = q²/X.
    pub fn for_character(a: i64, b: i64, x: f64, chi: &Character) -> Result<AfeParams> {
        if a == 0 || b == 0 {
            return Err(Error::ZeroExponent);
        }
        let q = chi.ctx().q() as f64;
        let p = chi.parity();
        let params = AfeParams {
            a,
            b,
            x,
            y: q * q / x,
            ta: (a & 1) as u8 * p,
            tb: (b & 1) as u8 * p,
            g: GChoice::Exp1,
        };
        params.validate(chi.ctx().q())?;
        Ok(params)
    }

    pub fn validate(&self, q: u64) -> Result<()> {
        if self.a == 0 || self.b == 0 {
            return Err(Error::ZeroExponent);
        }
        let qq = q as f64 * q as f64;
        if !(self.x > 0.0) || !(self.y > 0.0) || (self.x * self.y - qq).abs() > 1e-12 * qq {
            return Err(Error::PreconditionViolated {
                what: format!("need X·Y = q²: {}·{} vs {}", self.x, self.y, qq),
            });
        }
        if self.ta > 1 || self.tb > 1 {
            return Err(Error::PreconditionViolated {
                what: format!("parities must be 0/1, got ({},{})", self.ta, self.tb),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Residue-bucketed pair sums
// ---------------------------------------------------------------------------

/// Per-class weight tables: w[2r] and w[2r+1] hold r^{−1/2}V_cls(r/X) for
/// the even-j class (0,0) and the odd-j class ((a&1),(b&1)).
fn build_w(pmax: u64, lx: f64, g0: &VGrid, g1: &VGrid) -> Vec<f64> {
    let mut w = vec![0.0; 2 * (pmax as usize + 1)];
    for r in 1..=pmax as usize {
        let rf = r as f64;
        let lr = rf.ln() - lx;
        let rs = 1.0 / rf.sqrt();
        w[2 * r] = rs * g0.eval_ln(lr);
        w[2 * r + 1] = rs * g1.eval_ln(lr);
    }
    w
}

/// S-tables over t = a·ind(m)+b·ind(n) mod (q−1): sx for the X-side sum,
/// sy for the Y-side, each per parity class.
struct BucketTables {
    sx: [Vec<f64>; 2],
    sy: [Vec<f64>; 2],
}

fn build_tables(ctx: &FieldCtx, a: i64, b: i64, x: f64, y: f64, g: GChoice) -> Result<BucketTables> {
    let q = ctx.q();
    let n = ctx.order() as usize;
    let g0 = v_grid(0, 0, g)?;
    let g1 = v_grid((a & 1) as u8, (b & 1) as u8, g)?;
    let cut = g0.y_cut().max(g1.y_cut());
    let px = (cut * x).ceil() as u64;
    let py = (cut * y).ceil() as u64;
    if px as u128 + py as u128 > PAIR_CAP {
        return Err(Error::TooLarge {
            estimate: px as u128 + py as u128,
            cap: PAIR_CAP,
        });
    }

    let wx = build_w(px, x.ln(), &g0, &g1);
    let same = (x - y).abs() <= 1e-9 * x;
    let wy_own;
    let wy: &[f64] = if same {
        &wx
    } else {
        wy_own = build_w(py, y.ln(), &g0, &g1);
        &wy_own
    };

    // folded bucket increments per residue
    let mut adl = vec![0u32; q as usize];
    let mut bdl = vec![0u32; q as usize];
    for v in 1..q {
        let d = ctx.dlog(v) as i128;
        adl[v as usize] = (a as i128 * d).rem_euclid(n as i128) as u32;
        bdl[v as usize] = (b as i128 * d).rem_euclid(n as i128) as u32;
    }

    let mut sx = [vec![0f64; n], vec![0f64; n]];
    let mut sy = [vec![0f64; n], vec![0f64; n]];
    let p = px.max(py);
    let nn = n as u32;
    let q32 = q as u32;

    // unordered pairs m ≤ n ≤ p/m; each contributes at (m,n) and,
    // when distinct, at the swapped bucket with the same weight
    let mut m = 1u64;
    while m * m <= p {
        let mq = (m % q) as usize;
        if mq == 0 {
            m += 1;
            continue;
        }
        let am = adl[mq];
        let bm = bdl[mq];
        let nmax = p / m;
        let mut nq = mq as u32;
        let mut r = m * m;
        let mut nv = m;
        loop {
            if nq != 0 {
                let nqi = nq as usize;
                let ri = 2 * r as usize;
                let mut t1 = am + bdl[nqi];
                if t1 >= nn {
                    t1 -= nn;
                }
                let t1 = t1 as usize;
                if r <= px {
                    sx[0][t1] += wx[ri];
                    sx[1][t1] += wx[ri + 1];
                }
                if r <= py {
                    sy[0][t1] += wy[ri];
                    sy[1][t1] += wy[ri + 1];
                }
                if nv != m {
                    let mut t2 = adl[nqi] + bm;
                    if t2 >= nn {
                        t2 -= nn;
                    }
                    let t2 = t2 as usize;
                    if r <= px {
                        sx[0][t2] += wx[ri];
                        sx[1][t2] += wx[ri + 1];
                    }
                    if r <= py {
                        sy[0][t2] += wy[ri];
                        sy[1][t2] += wy[ri + 1];
                    }
                }
            }
            if nv == nmax {
                break;
            }
            nv += 1;
            nq += 1;
            if nq == q32 {
                nq = 0;
            }
            r += m;
        }
        m += 1;
    }

    Ok(BucketTables { sx, sy })
}

// ---------------------------------------------------------------------------
// Batch engine
// ---------------------------------------------------------------------------

/// Batch AFE evaluator: after one pair sweep and four DFTs, the bracket
/// value of every character mod q is an O(1) lookup.
pub struct AfeEngine<'a> {
    ctx: &'a FieldCtx,
    a: i64,
    b: i64,
    x: f64,
    y: f64,
    f1: [Vec<Complex64>; 2],
    f2: [Vec<Complex64>; 2],
    eps: Vec<Complex64>,
}

impl<'a> AfeEngine<'a> {
    /// Y = q²/X.
    pub fn new(ctx: &'a FieldCtx, a: i64, b: i64, x: f64, g: GChoice) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::ZeroExponent);
        }
        if !(x > 0.0) {
            return Err(Error::DomainError {
                what: format!("need X > 0, got {x}"),
            });
        }
        let qf = ctx.q() as f64;
        let y = qf * qf / x;
        let bt = build_tables(ctx, a, b, x, y, g)?;
        let cpx = |v: &[f64]| -> Vec<Complex64> {
            v.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        };
        let f1 = [dft(&cpx(&bt.sx[0]), 1), dft(&cpx(&bt.sx[1]), 1)];
        let f2 = [dft(&cpx(&bt.sy[0]), -1), dft(&cpx(&bt.sy[1]), -1)];
        Ok(AfeEngine {
            ctx,
            a,
            b,
            x,
            y,
            f1,
            f2,
            eps: gauss_all(ctx),
        })
    }

    #[inline]
    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    #[inline]
    pub fn exponents(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    #[inline]
    pub fn split(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    /// Index of χ_j^e in the character group.
    #[inline]
    pub fn power_index(&self, e: i64, j: u64) -> usize {
        (e as i128 * j as i128).rem_euclid(self.ctx.order() as i128) as usize
    }

    /// The AFE bracket for χ_j — both smoothed sums joined by the root
    /// factor — regardless of whether the identity holds at j.
    pub fn bracket(&self, j: u64) -> Complex64 {
        let p = (j & 1) as usize;
        let aj = self.power_index(self.a, j);
        let bj = self.power_index(self.b, j);
        let beta = if p == 1 {
            ((self.a & 1) + (self.b & 1)) as usize
        } else {
            0
        };
        let root = self.eps[aj] * self.eps[bj] * I_NEG[beta];
        self.f1[p][j as usize] + root * self.f2[p][j as usize]
    }

    /// L(½,χ_j^a)L(½,χ_j^b) via the AFE; errors if either power is trivial
    /// (the identity only holds for nontrivial powers).
    pub fn eval(&self, j: u64) -> Result<Complex64> {
        if self.power_index(self.a, j) == 0 {
            return Err(Error::TrivialPower { j, a: self.a });
        }
        if self.power_index(self.b, j) == 0 {
            return Err(Error::TrivialPower { j, a: self.b });
        }
        Ok(self.bracket(j))
    }
}

/// Single-character AFE evaluation. Performs a full pair sweep per call;
/// loops over characters should use [`AfeEngine`], which shares the sweep.
/// The character sums here are assembled directly against the bucket
/// tables (no DFT), so this path and the engine check each other.
pub fn afe_eval(chi: &Character, params: &AfeParams, eps: &[Complex64]) -> Result<Complex64> {
    let ctx = chi.ctx();
    params.validate(ctx.q())?;
    let n = ctx.order();
    let j = chi.index();
    let aj = (params.a as i128 * j as i128).rem_euclid(n as i128) as usize;
    let bj = (params.b as i128 * j as i128).rem_euclid(n as i128) as usize;
    if aj == 0 {
        return Err(Error::TrivialPower { j, a: params.a });
    }
    if bj == 0 {
        return Err(Error::TrivialPower { j, a: params.b });
    }
    let ta = (params.a & 1) as u8 * chi.parity();
    let tb = (params.b & 1) as u8 * chi.parity();
    if (ta, tb) != (params.ta, params.tb) {
        return Err(Error::PreconditionViolated {
            what: format!(
                "params carry parities ({},{}) but χ_{j}^(a,b) has ({ta},{tb})",
                params.ta, params.tb
            ),
        });
    }
    let bt = build_tables(ctx, params.a, params.b, params.x, params.y, params.g)?;
    let p = (j & 1) as usize;
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    for t in 0..n as usize {
        let e = ctx.unity((j * t as u64) as i64);
        s1 += bt.sx[p][t] * e;
        s2 += bt.sy[p][t] * e.conj();
    }
    let root = eps[aj] * eps[bj] * I_NEG[(ta + tb) as usize];
    Ok(s1 + root * s2)
}

// ---------------------------------------------------------------------------
// N and P terms of the even/odd decomposition
// ---------------------------------------------------------------------------

/// N-term of the decomposition: the character-averaged first AFE sum.
/// Even: ½ Σ_{m^a n^b ≡ ±1} (mn)^{−1/2} V(mn/X); odd: the same with the
/// sign of the congruence class and the odd-parity weight W.
pub fn n_term(ctx: &FieldCtx, a: i64, b: i64, x: f64, parity: Parity) -> Result<f64> {
    let (acc0, acch) = congruence_sums(ctx, a, b, x, parity)?;
    Ok(match parity {
        Parity::Even => 0.5 * (acc0 + acch),
        Parity::Odd => 0.5 * (acc0 - acch),
    })
}

/// P-term: the character-averaged dual sum, which the Gauss-sum relation
/// turns into exponential-sum values. Even:
/// (1/2√q) Σ (mn)^{−1/2} V(mn/Y) T̃_{2a,2b}(m^{2a}n^{2b}); odd: the same
/// with T̃_{a,b}(u) − T̃_{a,b}(−u) and weight W. The odd P-term enters the
/// moment multiplied by i^{−β}, β = (a&1)+(b&1) — applied by the caller.
pub fn p_term(ctx: &FieldCtx, a: i64, b: i64, y: f64, parity: Parity) -> Result<Complex64> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    let s = bucket_weights(ctx, a, b, y, parity)?;
    let n = ctx.order();
    let h = n / 2;
    let scale = 0.5 / (ctx.q() as f64).sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    match parity {
        Parity::Even => {
            let tt = t_tilde_all(ctx, 2 * a, 2 * b);
            for (t, &w) in s.iter().enumerate() {
                if w != 0.0 {
                    let u2 = ctx.gpow(2 * t as i64);
                    acc += w * tt[(u2 - 1) as usize];
                }
            }
        }
        Parity::Odd => {
            let tt = t_tilde_all(ctx, a, b);
            for (t, &w) in s.iter().enumerate() {
                if w != 0.0 {
                    let u = ctx.gpow(t as i64);
                    let mu = ctx.gpow(t as i64 + h as i64);
                    acc += w * (tt[(u - 1) as usize] - tt[(mu - 1) as usize]);
                }
            }
        }
    }
    Ok(acc * scale)
}

/// Bucketed weight sums s[t] = Σ_{a·ind m + b·ind n ≡ t} (mn)^{−1/2}V(mn/X)
/// for the weight class of `parity`.
fn bucket_weights(ctx: &FieldCtx, a: i64, b: i64, x: f64, parity: Parity) -> Result<Vec<f64>> {
    let (ta, tb) = match parity {
        Parity::Even => (0, 0),
        Parity::Odd => ((a & 1) as u8, (b & 1) as u8),
    };
    let grid = v_grid(ta, tb, GChoice::Exp1)?;
    let q = ctx.q();
    let n = ctx.order() as usize;
    let pmax = (grid.y_cut() * x).ceil() as u64;
    if pmax as u128 > PAIR_CAP {
        return Err(Error::TooLarge {
            estimate: pmax as u128,
            cap: PAIR_CAP,
        });
    }
    let lx = x.ln();
    let mut w = vec![0.0; pmax as usize + 1];
    for r in 1..=pmax as usize {
        let rf = r as f64;
        w[r] = grid.eval_ln(rf.ln() - lx) / rf.sqrt();
    }

    let mut adl = vec![0u32; q as usize];
    let mut bdl = vec![0u32; q as usize];
    for v in 1..q {
        let d = ctx.dlog(v) as i128;
        adl[v as usize] = (a as i128 * d).rem_euclid(n as i128) as u32;
        bdl[v as usize] = (b as i128 * d).rem_euclid(n as i128) as u32;
    }

    let mut s = vec![0f64; n];
    let nn = n as u32;
    let q32 = q as u32;
    let mut m = 1u64;
    while m * m <= pmax {
        let mq = (m % q) as usize;
        if mq == 0 {
            m += 1;
            continue;
        }
        let am = adl[mq];
        let bm = bdl[mq];
        let nmax = pmax / m;
        let mut nq = mq as u32;
        let mut r = m * m;
        let mut nv = m;
        loop {
            if nq != 0 {
                let nqi = nq as usize;
                let mut t1 = am + bdl[nqi];
                if t1 >= nn {
                    t1 -= nn;
                }
                s[t1 as usize] += w[r as usize];
                if nv != m {
                    let mut t2 = adl[nqi] + bm;
                    if t2 >= nn {
                        t2 -= nn;
                    }
                    s[t2 as usize] += w[r as usize];
                }
            }
            if nv == nmax {
                break;
            }
            nv += 1;
            nq += 1;
            if nq == q32 {
                nq = 0;
            }
            r += m;
        }
        m += 1;
    }
    Ok(s)
}

/// Weighted sums over the congruence classes m^a n^b ≡ ±1: returns
/// (Σ over ≡ 1, Σ over ≡ −1) with the class weight of `parity`.
fn congruence_sums(ctx: &FieldCtx, a: i64, b: i64, x: f64, parity: Parity) -> Result<(f64, f64)> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    let s = bucket_weights(ctx, a, b, x, parity)?;
    let h = ctx.order() as usize / 2;
    Ok((s[0], s[h]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_ctx;

    /// Brute double sum for the X-side character sum of χ_j.
    fn brute_sum(
        ctx: &FieldCtx,
        a: i64,
        b: i64,
        j: u64,
        x: f64,
        conj: bool,
    ) -> Complex64 {
        let grid = v_grid(
            (a & 1) as u8 * (j & 1) as u8,
            (b & 1) as u8 * (j & 1) as u8,
            GChoice::Exp1,
        )
        .unwrap();
        let pmax = (grid.y_cut() * x) as u64;
        let n = ctx.order() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 1..=pmax {
            if m % ctx.q() == 0 {
                continue;
            }
            for nv in 1..=pmax / m {
                if nv % ctx.q() == 0 {
                    continue;
                }
                let t = (a * ctx.dlog(m % ctx.q()) as i64 + b * ctx.dlog(nv % ctx.q()) as i64)
                    .rem_euclid(n);
                let mut e = ctx.unity(j as i64 * t);
                if conj {
                    e = e.conj();
                }
                let r = (m * nv) as f64;
                acc += e * grid.eval(r / x) / r.sqrt();
            }
        }
        acc
    }

    #[test]
    fn engine_matches_brute_sums() {
        let ctx = build_ctx(11).unwrap();
        let (a, b) = (1i64, -2i64);
        let x = 11.0;
        let engine = AfeEngine::new(&ctx, a, b, x, GChoice::Exp1).unwrap();
        for j in [1u64, 2, 3, 7] {
            let s1 = brute_sum(&ctx, a, b, j, x, false);
            let s2 = brute_sum(&ctx, a, b, j, x, true);
            let aj = engine.power_index(a, j);
            let bj = engine.power_index(b, j);
            let beta = if j & 1 == 1 { ((a & 1) + (b & 1)) as usize } else { 0 };
            let eps = gauss_all(&ctx);
            let expect = s1 + eps[aj] * eps[bj] * I_NEG[beta] * s2;
            let got = engine.eval(j).unwrap();
            assert!((got - expect).norm() < 1e-10, "j={j}: {got} vs {expect}");
        }
    }

    #[test]
    fn afe_eval_agrees_with_engine() {
        let ctx = build_ctx(11).unwrap();
        let eps = gauss_all(&ctx);
        for (a, b) in [(1i64, 1i64), (1, -1), (2, 1)] {
            let engine = AfeEngine::new(&ctx, a, b, 11.0, GChoice::Exp1).unwrap();
            for j in 1..10u64 {
                let chi = Character::new(&ctx, j as i64);
                let params = AfeParams::for_character(a, b, 11.0, &chi).unwrap();
                match (afe_eval(&chi, &params, &eps), engine.eval(j)) {
                    (Ok(v1), Ok(v2)) => {
                        assert!((v1 - v2).norm() < 1e-10, "(a,b)=({a},{b}) j={j}")
                    }
                    (Err(Error::TrivialPower { .. }), Err(Error::TrivialPower { .. })) => {}
                    (r1, r2) => panic!("mismatch at j={j}: {r1:?} vs {r2:?}"),
                }
            }
        }
    }

    #[test]
    fn trivial_power_rejected() {
        let ctx = build_ctx(11).unwrap();
        let engine = AfeEngine::new(&ctx, 5, 1, 11.0, GChoice::Exp1).unwrap();
        // j = 2: 5·2 = 10 ≡ 0 (mod 10)
        assert!(matches!(
            engine.eval(2),
            Err(Error::TrivialPower { j: 2, a: 5 })
        ));
        assert!(matches!(engine.eval(0), Err(Error::TrivialPower { j: 0, .. })));
        assert!(engine.eval(1).is_ok());
    }

    #[test]
    fn params_validation() {
        let ctx = build_ctx(11).unwrap();
        let chi = Character::new(&ctx, 3);
        let params = AfeParams::for_character(1, -1, 11.0, &chi).unwrap();
        assert!((params.x * params.y - 121.0).abs() < 1e-9);
        assert_eq!((params.ta, params.tb), (1, 1));
        let mut bad = params;
        bad.y = 12.0;
        assert!(bad.validate(11).is_err());
        assert!(AfeParams::for_character(0, 1, 11.0, &chi).is_err());
        // parity mismatch: even-character params applied to an odd character
        let even_chi = Character::new(&ctx, 2);
        let even_params = AfeParams::for_character(1, -1, 11.0, &even_chi).unwrap();
        let eps = gauss_all(&ctx);
        assert!(matches!(
            afe_eval(&chi, &even_params, &eps),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn x_independence() {
        // the AFE value of each character must not depend on the split
        let ctx = build_ctx(31).unwrap();
        for (a, b) in [(1i64, 1i64), (1, -2)] {
            let e1 = AfeEngine::new(&ctx, a, b, 31.0, GChoice::Exp1).unwrap();
            let e2 = AfeEngine::new(&ctx, a, b, 31.0 * 31.0 / 8.0, GChoice::Exp1).unwrap();
            for j in 0..30u64 {
                match (e1.eval(j), e2.eval(j)) {
                    (Ok(v1), Ok(v2)) => assert!(
                        (v1 - v2).norm() < 1e-6,
                        "(a,b)=({a},{b}) j={j}: {v1} vs {v2}"
                    ),
                    (Err(_), Err(_)) => {}
                    (r1, r2) => panic!("j={j}: {r1:?} vs {r2:?}"),
                }
            }
        }
    }

    #[test]
    fn decomposition_identity() {
        // (1/(q−1)) Σ_{χ even} bracket = N + P, and odd with i^{−β}
        let ctx = build_ctx(31).unwrap();
        let nf = 30.0;
        for (a, b) in [(1i64, 1i64), (1, -1), (2, 1)] {
            let engine = AfeEngine::new(&ctx, a, b, 31.0, GChoice::Exp1).unwrap();
            let even: Complex64 =
                (0..30).step_by(2).map(|j| engine.bracket(j)).sum::<Complex64>() / nf;
            let ne = n_term(&ctx, a, b, 31.0, Parity::Even).unwrap();
            let pe = p_term(&ctx, a, b, 31.0, Parity::Even).unwrap();
            assert!(
                (even - (ne + pe)).norm() < 1e-8,
                "(a,b)=({a},{b}) even: {even} vs {}",
                ne + pe
            );

            let odd: Complex64 =
                (1..30).step_by(2).map(|j| engine.bracket(j)).sum::<Complex64>() / nf;
            let no = n_term(&ctx, a, b, 31.0, Parity::Odd).unwrap();
            let po = p_term(&ctx, a, b, 31.0, Parity::Odd).unwrap();
            let beta = ((a & 1) + (b & 1)) as usize;
            let rhs = no + I_NEG[beta] * po;
            assert!(
                (odd - rhs).norm() < 1e-8,
                "(a,b)=({a},{b}) odd: {odd} vs {rhs}"
            );
        }
    }

    #[test]
    fn n_term_direct_oracle() {
        // (a,b)=(1,−1): m·n^{−1} ≡ 1 ⇔ m ≡ n, ≡ −1 ⇔ m ≡ −n (mod q)
        let ctx = build_ctx(31).unwrap();
        let g_even = v_grid(0, 0, GChoice::Exp1).unwrap();
        let g_odd = v_grid(1, 1, GChoice::Exp1).unwrap();
        let x = 31.0;
        let pmax = (g_even.y_cut().max(g_odd.y_cut()) * x).ceil() as u64;
        let (mut s0e, mut she, mut s0o, mut sho) = (0.0, 0.0, 0.0, 0.0);
        for m in 1..=pmax {
            if m % 31 == 0 {
                continue;
            }
            for n in 1..=pmax / m {
                if n % 31 == 0 {
                    continue;
                }
                let r = (m * n) as f64;
                let y = r / x;
                if m % 31 == n % 31 {
                    s0e += g_even.eval(y) / r.sqrt();
                    s0o += g_odd.eval(y) / r.sqrt();
                }
                if (m + n) % 31 == 0 {
                    she += g_even.eval(y) / r.sqrt();
                    sho += g_odd.eval(y) / r.sqrt();
                }
            }
        }
        let ne = n_term(&ctx, 1, -1, x, Parity::Even).unwrap();
        let no = n_term(&ctx, 1, -1, x, Parity::Odd).unwrap();
        assert!((ne - 0.5 * (s0e + she)).abs() < 1e-9, "ne={ne}");
        assert!((no - 0.5 * (s0o - sho)).abs() < 1e-9, "no={no}");
    }

    #[test]
    fn p_term_vanishes_as_y_shrinks() {
        // with Y = 1e−3 every surviving weight is V(≥1000)/√r < 1e−8
        let ctx = build_ctx(31).unwrap();
        let p = p_term(&ctx, 1, 1, 1e-3, Parity::Even).unwrap();
        assert!(p.norm() < 1e-6, "p={p}");
    }
}
