//! Gauss sums and exponential sums over tori.
//!
//! For an r×k integer matrix A the subgroup H_A(F_q) ⊂ (F_q^×)^k is cut out
//! by the monomial equations Π_j x_j^{a_{i,j}} = 1, and
//!
//!   T_A(u;q) = q^{−(k−rank A)/2} Σ_{x∈H_A} e(x·u/q).
//!
//! The two-variable specialization with x^a y^b = u,
//!
//!   T̃_{a,b}(u;q) = q^{−1/2} Σ_{x^a y^b = u} e((x+y)/q),
//!
//! is linked to normalized Gauss sums ε(χ) = q^{−1/2} Σ_x χ(x) e(x/q) by
//!
//!   T̃_{a,b}(u;q) = (√q/(q−1)) Σ_χ ε(χ^a) ε(χ^b) conj(χ(u)),
//!
//! which turns full-table evaluation into one DFT over Z/(q−1).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::chars::{subgroup_perp, Character};
use crate::error::{Error, Result};
use crate::fft::dft;
use crate::field::{ext_gcd, gcd_i, FieldCtx};

/// Default elementary-operation cap for brute enumerations.
pub const ENUM_CAP: u128 = 100_000_000;

// ---------------------------------------------------------------------------
// TorusMatrix
// ---------------------------------------------------------------------------

/// Integer exponent matrix A defining H_A, with its rank and type flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusMatrix {
    entries: Vec<Vec<i64>>,
    rank: usize,
    affine_type: bool,
    connected_type: bool,
}

impl TorusMatrix {
    /// Validates shape (r ≥ 1 rows, k ≥ 1 columns, rectangular) and computes
    /// rank / affine / connected flags by exact integer arithmetic.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        if entries.is_empty() || entries[0].is_empty() {
            return Err(Error::PreconditionViolated {
                what: "matrix must have at least one row and one column".into(),
            });
        }
        let k = entries[0].len();
        if entries.iter().any(|r| r.len() != k) {
            return Err(Error::PreconditionViolated {
                what: "matrix rows must have equal length".into(),
            });
        }
        let affine_type = entries.iter().flatten().all(|&e| e >= 0)
            && (0..k).all(|j| entries.iter().any(|r| r[j] > 0));
        let inv = smith_invariants(&entries);
        let rank = inv.len();
        let connected_type = inv.iter().all(|&d| d == 1);
        Ok(TorusMatrix {
            entries,
            rank,
            affine_type,
            connected_type,
        })
    }

    /// Convenience: single-row matrix (a b) for the two-variable sums.
    pub fn row2(a: i64, b: i64) -> Self {
        TorusMatrix::new(vec![vec![a, b]]).expect("1x2 is always valid")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    #[inline]
    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Rank over the rationals.
    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All entries ≥ 0 and every column has a positive entry.
    #[inline]
    pub fn affine_type(&self) -> bool {
        self.affine_type
    }

    /// Z^k / (row span) torsion-free, i.e. every Smith invariant is 1.
    #[inline]
    pub fn connected_type(&self) -> bool {
        self.connected_type
    }
}

impl std::str::FromStr for TorusMatrix {
    type Err = Error;

    /// Parses "a,b;c,d" — rows separated by ';', entries by ','.
    fn from_str(s: &str) -> Result<Self> {
        let entries: Vec<Vec<i64>> = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| {
                        e.trim().parse::<i64>().map_err(|_| Error::PreconditionViolated {
                            what: format!("bad matrix entry {e:?}"),
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<Vec<i64>>>>()?;
        TorusMatrix::new(entries)
    }
}

impl std::fmt::Display for TorusMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Nonzero invariant factors d_1 | d_2 | … of the Smith normal form.
/// Exact i128 arithmetic; matrices here are tiny (k ≤ 4 in practice).
fn smith_invariants(entries: &[Vec<i64>]) -> Vec<i128> {
    let rows = entries.len();
    let cols = entries[0].len();
    let mut m: Vec<Vec<i128>> = entries
        .iter()
        .map(|r| r.iter().map(|&e| e as i128).collect())
        .collect();
    let mut inv = Vec::new();
    let (mut r0, mut c0) = (0usize, 0usize);
    while r0 < rows && c0 < cols {
        // smallest nonzero pivot in the remaining block
        let mut piv: Option<(usize, usize)> = None;
        for i in r0..rows {
            for j in c0..cols {
                if m[i][j] != 0
                    && piv.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        m.swap(r0, pi);
        for row in m.iter_mut() {
            row.swap(c0, pj);
        }
        // clear the pivot row and column by Euclidean steps
        'reduce: loop {
            for i in (r0 + 1)..rows {
                if m[i][c0] != 0 {
                    let f = m[i][c0].div_euclid(m[r0][c0]);
                    for j in c0..cols {
                        m[i][j] -= f * m[r0][j];
                    }
                    if m[i][c0] != 0 {
                        m.swap(r0, i);
                        continue 'reduce;
                    }
                }
            }
            for j in (c0 + 1)..cols {
                if m[r0][j] != 0 {
                    let f = m[r0][j].div_euclid(m[r0][c0]);
                    for i in r0..rows {
                        let t = f * m[i][c0];
                        m[i][j] -= t;
                    }
                    if m[r0][j] != 0 {
                        for i in r0..rows {
                            m[i].swap(c0, j);
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        // divisibility: the pivot must divide the rest of the block
        let p = m[r0][c0].abs();
        let mut offender = None;
        'scan: for i in (r0 + 1)..rows {
            for j in (c0 + 1)..cols {
                if m[i][j] % p != 0 {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            for jj in c0..cols {
                let t = m[i][jj];
                m[r0][jj] += t;
            }
            continue;
        }
        inv.push(p);
        r0 += 1;
        c0 += 1;
    }
    inv
}

// ---------------------------------------------------------------------------
// Subgroup points
// ---------------------------------------------------------------------------

/// H_A(F_q): all (x_1,…,x_k) ∈ (F_q^×)^k with Π_j x_j^{a_{i,j}} = 1 for every
/// row i, in lexicographic order. Brute enumeration over exponent tuples
/// (the conditions are linear mod q−1 in the dlogs); (q−1)^k·r work, capped.
pub fn subgroup_points(ctx: &FieldCtx, a: &TorusMatrix) -> Result<Vec<Vec<u64>>> {
    subgroup_points_with_cap(ctx, a, ENUM_CAP)
}

pub fn subgroup_points_with_cap(
    ctx: &FieldCtx,
    a: &TorusMatrix,
    cap: u128,
) -> Result<Vec<Vec<u64>>> {
    let k = a.cols();
    let n = ctx.order();
    let estimate = (n as u128).pow(k as u32) * a.rows() as u128;
    if estimate > cap {
        return Err(Error::TooLarge { estimate, cap });
    }
    let gp = ctx.gpow_table();
    // row sums Σ_j a_{ij} e_j mod n, maintained incrementally: every odometer
    // step at position `pos` (wraps included — n−1 → 0 is +1 mod n) shifts
    // row i by a_{i,pos}
    let arow: Vec<Vec<u64>> = a
        .entries()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&aij| (aij as i128).rem_euclid(n as i128) as u64)
                .collect()
        })
        .collect();
    let mut sums = vec![0u64; a.rows()];
    let mut out = Vec::new();
    let mut e = vec![0u64; k];
    loop {
        if sums.iter().all(|&s| s == 0) {
            out.push(e.iter().map(|&ej| gp[ej as usize] as u64).collect());
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                out.sort_unstable();
                return Ok(out);
            }
            pos -= 1;
            e[pos] += 1;
            for (s, row) in sums.iter_mut().zip(&arow) {
                let v = *s + row[pos];
                *s = if v >= n { v - n } else { v };
            }
            if e[pos] < n {
                break;
            }
            e[pos] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Gauss sums
// ---------------------------------------------------------------------------

/// ε(χ) = q^{−1/2} Σ_{x mod q} χ(x) e(x/q), by direct summation.
/// |ε(χ)| = 1 for nontrivial χ; ε(χ_0) = −q^{−1/2}.
pub fn gauss_sum(chi: &Character<'_>) -> Complex64 {
    let ctx = chi.ctx();
    let n = ctx.order();
    let j = chi.index() as i64;
    let gp = ctx.gpow_table();
    let unity = ctx.unity_table();
    let psi = ctx.psi_table();
    let mut s = Complex64::new(0.0, 0.0);
    let mut t = 0i64;
    for k in 0..n as usize {
        s += unity[t as usize] * psi[gp[k] as usize];
        t += j;
        if t >= n as i64 {
            t -= n as i64;
        }
    }
    s / (ctx.q() as f64).sqrt()
}

/// Table of ε(χ_j), j = 0,…,q−2, as one DFT of z_k = e(g^k/q):
/// ε(χ_j) = q^{−1/2} Σ_k e(jk/(q−1)) z_k.
pub fn gauss_all(ctx: &FieldCtx) -> Vec<Complex64> {
    let n = ctx.order() as usize;
    let gp = ctx.gpow_table();
    let psi = ctx.psi_table();
    let z: Vec<Complex64> = (0..n).map(|k| psi[gp[k] as usize]).collect();
    let scale = 1.0 / (ctx.q() as f64).sqrt();
    dft(&z, 1).into_iter().map(|v| v * scale).collect()
}

// ---------------------------------------------------------------------------
// T̃_{a,b}
// ---------------------------------------------------------------------------

/// T̃_{a,b}(u;q) by direct enumeration of the solution set of x^a y^b = u.
///
/// With d = gcd(a,b) and βa + αb = d, the solutions are parametrized by
/// (t, ρ) ∈ F_q^× × μ_d(F_q) as x = x₀ ρ^β t^{b/d}, y = y₀ ρ^α t^{−a/d};
/// there are (q−1)·gcd(d, q−1) of them when u is representable and none
/// otherwise. O(q·gcd(d,q−1)) work.
pub fn t_tilde(ctx: &FieldCtx, a: i64, b: i64, u: i64) -> Result<Complex64> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    let q = ctx.q();
    let ur = ctx.reduce(u);
    if ur == 0 {
        return Err(Error::BadResidue { u, q });
    }
    let n = ctx.order() as i64;
    let m = ctx.dlog(ur) as i64;

    let (d, beta, alpha) = ext_gcd(a, b);
    let (dp, p, _) = ext_gcd(d, n); // dp = gcd(d, q−1), p·d ≡ dp (mod n)
    if m % dp != 0 {
        return Ok(Complex64::new(0.0, 0.0)); // u not a value of x^a y^b
    }
    // particular solution of a·s + b·t ≡ m (mod n) along the Bézout direction
    let w = ((m / dp) as i128 * p as i128).rem_euclid(n as i128) as i64;
    let s0 = (beta as i128 * w as i128).rem_euclid(n as i128) as i64;
    let t0 = (alpha as i128 * w as i128).rem_euclid(n as i128) as i64;
    let step_x = (b / d).rem_euclid(n);
    let step_y = (-(a / d)).rem_euclid(n);
    let rho_x = (beta as i128 * (n / dp) as i128).rem_euclid(n as i128) as i64;
    let rho_y = (alpha as i128 * (n / dp) as i128).rem_euclid(n as i128) as i64;

    let gp = ctx.gpow_table();
    let psi = ctx.psi_table();
    let mut total = Complex64::new(0.0, 0.0);
    for l in 0..dp {
        let mut sx = (s0 + (l as i128 * rho_x as i128).rem_euclid(n as i128) as i64) % n;
        let mut sy = (t0 + (l as i128 * rho_y as i128).rem_euclid(n as i128) as i64) % n;
        for _ in 0..n {
            let mut idx = gp[sx as usize] as u64 + gp[sy as usize] as u64;
            if idx >= q {
                idx -= q;
            }
            total += psi[idx as usize];
            sx += step_x;
            if sx >= n {
                sx -= n;
            }
            sy += step_y;
            if sy >= n {
                sy -= n;
            }
        }
    }
    Ok(total / (q as f64).sqrt())
}

/// Full table of T̃_{a,b}(u;q) for u = 1,…,q−1 (index u−1), via the
/// Gauss-sum relation: one DFT of w_j = ε(χ_j^a) ε(χ_j^b). O(q log q).
pub fn t_tilde_all(ctx: &FieldCtx, a: i64, b: i64) -> Vec<Complex64> {
    let n = ctx.order() as usize;
    let eps = gauss_all(ctx);
    let w: Vec<Complex64> = (0..n as i64)
        .map(|j| {
            let ja = (a as i128 * j as i128).rem_euclid(n as i128) as usize;
            let jb = (b as i128 * j as i128).rem_euclid(n as i128) as usize;
            eps[ja] * eps[jb]
        })
        .collect();
    // T̃(g^m) = (√q/(q−1)) Σ_j w_j e(−jm/(q−1))
    let by_dlog = dft(&w, -1);
    let scale = (ctx.q() as f64).sqrt() / n as f64;
    let gp = ctx.gpow_table();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (m, v) in by_dlog.into_iter().enumerate() {
        out[(gp[m] - 1) as usize] = v * scale;
    }
    out
}

/// Closed form of T̃_{a,−a}(u;q):
/// α₁ = √q when u = (−1)^a (else 0), and α₂ = −gcd(|a|,q−1)/√q when
/// u ∈ (F_q^×)^a (else 0); the value is α₁ + α₂. Real for every u.
pub fn t_tilde_diag_closed(ctx: &FieldCtx, a: i64, u: i64) -> Result<f64> {
    if a == 0 {
        return Err(Error::ZeroExponent);
    }
    let q = ctx.q();
    let ur = ctx.reduce(u);
    if ur == 0 {
        return Err(Error::BadResidue { u, q });
    }
    let sq = (q as f64).sqrt();
    let minus_one_a = if a % 2 == 0 { 1 } else { q - 1 };
    let d = gcd_i(a, ctx.order() as i64);
    let mut v = 0.0;
    if ur == minus_one_a {
        v += sq;
    }
    if ctx.dlog(ur) % d == 0 {
        v -= d as f64 / sq;
    }
    Ok(v)
}

/// T_{a,b}(u,v;q) = T̃_{a,b}(u^a v^b;q).
pub fn t_ab(ctx: &FieldCtx, a: i64, b: i64, u: i64, v: i64) -> Result<Complex64> {
    let q = ctx.q();
    let (ur, vr) = (ctx.reduce(u), ctx.reduce(v));
    if ur == 0 {
        return Err(Error::BadResidue { u, q });
    }
    if vr == 0 {
        return Err(Error::BadResidue { u: v, q });
    }
    let w = ctx.mul(ctx.pow(ur, a), ctx.pow(vr, b));
    t_tilde(ctx, a, b, w as i64)
}

// ---------------------------------------------------------------------------
// T_A, mean square, duality
// ---------------------------------------------------------------------------

/// T_A(u;q) = q^{−(k−rank A)/2} Σ_{x∈H_A} e(x·u/q); u ∈ F_q^k, zeros allowed.
pub fn t_general(ctx: &FieldCtx, a: &TorusMatrix, u: &[i64]) -> Result<Complex64> {
    if u.len() != a.cols() {
        return Err(Error::PreconditionViolated {
            what: format!("u has {} coordinates, matrix has {} columns", u.len(), a.cols()),
        });
    }
    let points = subgroup_points(ctx, a)?;
    let q = ctx.q();
    let ur: Vec<u64> = u.iter().map(|&x| ctx.reduce(x)).collect();
    let psi = ctx.psi_table();
    let sum: Complex64 = points
        .iter()
        .map(|p| {
            let dot: u128 = p
                .iter()
                .zip(&ur)
                .map(|(&x, &c)| x as u128 * c as u128)
                .sum();
            psi[(dot % q as u128) as usize]
        })
        .sum();
    let norm = (q as f64).powf(-((a.cols() - a.rank()) as f64) / 2.0);
    Ok(sum * norm)
}

/// (1/q^k) Σ_{u∈F_q^k} |T_A(u;q)|², by direct summation over the full grid
/// (parallel over rows of fixed u₁,…,u_{k−1}, with the innermost-coordinate
/// phases advanced incrementally). Equals |H_A(F_q)| / q^{k−rank A} exactly.
pub fn mean_square(ctx: &FieldCtx, a: &TorusMatrix) -> Result<f64> {
    mean_square_with_cap(ctx, a, ENUM_CAP)
}

pub fn mean_square_with_cap(ctx: &FieldCtx, a: &TorusMatrix, cap: u128) -> Result<f64> {
    let k = a.cols();
    let q = ctx.q();
    let points = subgroup_points_with_cap(ctx, a, cap)?;
    let total: u128 = (q as u128).pow(k as u32);
    let estimate = total * points.len() as u128 * k as u128;
    if estimate > cap {
        return Err(Error::TooLarge { estimate, cap });
    }
    let psi = ctx.psi_table();
    let q32 = q as u32;
    // phase of each point advances by x₀ as u₀ steps through its range
    let steps: Vec<u32> = points.iter().map(|p| (p[0] % q) as u32).collect();
    let rows = (total / q as u128) as u64;
    let sum_sq: f64 = (0..rows)
        .into_par_iter()
        .map(|row| {
            // decode u₁,…,u_{k−1} from the row index; u₀ sweeps innermost
            let mut rem = row;
            let mut u = [0u64; 8];
            for uc in u.iter_mut().take(k).skip(1) {
                *uc = rem % q;
                rem /= q;
            }
            let mut idx: Vec<u32> = points
                .iter()
                .map(|p| {
                    let mut dot: u64 = 0;
                    for i in 1..k {
                        dot += (p[i] * u[i]) % q;
                    }
                    (dot % q) as u32
                })
                .collect();
            let mut acc = 0.0;
            for _u0 in 0..q {
                let mut s = Complex64::new(0.0, 0.0);
                for (ix, &st) in idx.iter_mut().zip(&steps) {
                    s += psi[*ix as usize];
                    let v = *ix + st;
                    *ix = if v >= q32 { v - q32 } else { v };
                }
                acc += s.norm_sqr();
            }
            acc
        })
        .sum();
    let norm = (q as f64).powi((k - a.rank()) as i32); // |T|² carries q^{−(k−rank)}
    Ok(sum_sq / norm / total as f64)
}

/// Predicted mean square |H_A(F_q)| / q^{k−rank A}.
pub fn mean_square_predicted(ctx: &FieldCtx, a: &TorusMatrix) -> Result<f64> {
    let points = subgroup_points(ctx, a)?;
    Ok(points.len() as f64 / (ctx.q() as f64).powi((a.cols() - a.rank()) as i32))
}

/// Both sides of the Gauss-sum duality
///   (1/|H_A^⊥|) Σ_{χ⃗∈H_A^⊥} ε(χ⃗) conj(χ⃗(u)) = q^{−rank(A)/2} T_A(u;q),
/// where ε(χ⃗) = Π_i ε(χ_i) and χ⃗(u) = Π_i χ_i(u_i). Requires unit u_i.
pub fn duality_check(
    ctx: &FieldCtx,
    a: &TorusMatrix,
    u: &[i64],
) -> Result<(Complex64, Complex64)> {
    if u.len() != a.cols() {
        return Err(Error::PreconditionViolated {
            what: format!("u has {} coordinates, matrix has {} columns", u.len(), a.cols()),
        });
    }
    let q = ctx.q();
    let ur: Vec<u64> = u
        .iter()
        .map(|&x| {
            let r = ctx.reduce(x);
            if r == 0 {
                Err(Error::BadResidue { u: x, q })
            } else {
                Ok(r)
            }
        })
        .collect::<Result<_>>()?;
    let perp = subgroup_perp(ctx, a)?;
    let eps = gauss_all(ctx);
    let n = ctx.order() as i64;
    let dlogs: Vec<i64> = ur.iter().map(|&x| ctx.dlog(x) as i64).collect();
    let mut lhs = Complex64::new(0.0, 0.0);
    for tuple in &perp {
        let mut term = Complex64::new(1.0, 0.0);
        let mut phase = 0i64;
        for (i, &j) in tuple.iter().enumerate() {
            term *= eps[j as usize];
            phase = (phase + (j as i128 * dlogs[i] as i128).rem_euclid(n as i128) as i64) % n;
        }
        lhs += term * ctx.unity(-phase);
    }
    lhs /= perp.len() as f64;
    let rhs = t_general(ctx, a, u)? * (q as f64).powf(-(a.rank() as f64) / 2.0);
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Weil report
// ---------------------------------------------------------------------------

/// Scan of max_u |T̃_{a,b}(u;q)| against the square-root-cancellation bound:
/// |a|+|b| when ab > 0, max(|a|,|b|) when ab < 0. The bound is proved for
/// a+b ≠ 0 and q ≥ max(|a|,|b|)²; outside that range the scan still runs
/// with `applicable` unset.
#[derive(Clone, Debug, Serialize)]
pub struct WeilReport {
    pub q: u64,
    pub a: i64,
    pub b: i64,
    pub max_abs: f64,
    pub bound: f64,
    pub ok: bool,
    pub applicable: bool,
}

pub fn weil_report(ctx: &FieldCtx, a: i64, b: i64) -> Result<WeilReport> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    let q = ctx.q();
    let table = t_tilde_all(ctx, a, b);
    let max_abs = table.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let bound = if a * b > 0 {
        (a.unsigned_abs() + b.unsigned_abs()) as f64
    } else {
        a.unsigned_abs().max(b.unsigned_abs()) as f64
    };
    let applicable = a + b != 0 && q >= a.unsigned_abs().max(b.unsigned_abs()).pow(2);
    Ok(WeilReport {
        q,
        a,
        b,
        max_abs,
        bound,
        ok: max_abs <= bound + 1e-8,
        applicable,
    })
}
