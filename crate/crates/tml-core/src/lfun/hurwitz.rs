//! Hurwitz zeta ζ(s,x) by Euler–Maclaurin.
//!
//! The workhorse is ζ(½, a/q), evaluated q−1 times per prime when building
//! an exact table of central L-values; the general real-s form also serves
//! ζ(s) itself for the moment predictions.

use crate::error::{Error, Result};

/// Euler–Maclaurin cut: the remainder after the B₈ term at N = 36 is below
/// 1e−16 for every s in the range used here (½ ≤ s ≤ 20, 0 < x ≤ 1).
const EM_N: usize = 36;

/// B₂/2!, B₄/4!, B₆/6!, B₈/8!.
const EM_B: [f64; 4] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
];

/// ζ(s,x) = Σ_{n≥0} (n+x)^{−s} for s ≠ 1, continued in s, via
/// Σ_{n<N} (n+x)^{−s} + (N+x)^{1−s}/(s−1) + ½(N+x)^{−s}
/// + Σ_k B_{2k}/(2k)! · s(s+1)⋯(s+2k−2) · (N+x)^{−s−2k+1}.
///
/// Absolute error ≤ 1e−11 on s ≥ ½, 0 < x ≤ 1 (in practice ≲ 1e−15).
pub fn hurwitz_zeta(s: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError {
            what: format!("hurwitz_zeta needs x > 0, got {x}"),
        });
    }
    if !(s > 0.0) || s == 1.0 {
        return Err(Error::DomainError {
            what: format!("hurwitz_zeta needs s > 0, s ≠ 1, got {s}"),
        });
    }
    let mut sum = 0.0;
    for n in 0..EM_N {
        sum += (n as f64 + x).powf(-s);
    }
    let w = EM_N as f64 + x;
    sum += w.powf(1.0 - s) / (s - 1.0) + 0.5 * w.powf(-s);
    // derivative corrections: Pochhammer s(s+1)⋯(s+2k−2), powers w^{−s−2k+1}
    let mut poch = s;
    let mut pw = w.powf(-s - 1.0);
    let iw2 = 1.0 / (w * w);
    for (k, &bk) in EM_B.iter().enumerate() {
        sum += bk * poch * pw;
        if k + 1 < EM_B.len() {
            poch *= (s + 2.0 * k as f64 + 1.0) * (s + 2.0 * k as f64 + 2.0);
            pw *= iw2;
        }
    }
    Ok(sum)
}

/// ζ(½,x) on (0,1], absolute error ≤ 1e−11.
///
/// The batch L-value pipeline calls this q−1 times per prime.
pub fn hurwitz_zeta_half(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::DomainError {
            what: format!("hurwitz_zeta_half needs 0 < x ≤ 1, got {x}"),
        });
    }
    // inlined s = ½ specialization: powf(−½) → 1/sqrt
    let mut sum = 0.0;
    for n in 0..EM_N {
        sum += 1.0 / (n as f64 + x).sqrt();
    }
    let w = EM_N as f64 + x;
    let rsw = 1.0 / w.sqrt();
    sum += -2.0 * w * rsw + 0.5 * rsw;
    let mut poch = 0.5;
    let mut pw = rsw / w;
    let iw2 = 1.0 / (w * w);
    for (k, &bk) in EM_B.iter().enumerate() {
        sum += bk * poch * pw;
        if k + 1 < EM_B.len() {
            let t = 2.0 * k as f64;
            poch *= (1.5 + t) * (2.5 + t);
            pw *= iw2;
        }
    }
    Ok(sum)
}

/// ζ(s) for real s > 1.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::DomainError {
            what: format!("riemann_zeta needs s > 1, got {s}"),
        });
    }
    hurwitz_zeta(s, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const ZETA_HALF: f64 = -1.4603545088095868;

    #[test]
    fn zeta_half_at_one() {
        assert!((hurwitz_zeta_half(1.0).unwrap() - ZETA_HALF).abs() < 1e-12);
        // agreement of the specialized and general forms
        for &x in &[1.0, 0.9, 0.5, 0.25, 0.1, 1e-3, 1e-6] {
            let a = hurwitz_zeta_half(x).unwrap();
            let b = hurwitz_zeta(0.5, x).unwrap();
            assert!((a - b).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn half_argument_identity() {
        // ζ(s,½) = (2^s − 1) ζ(s) at s = ½
        let lhs = hurwitz_zeta_half(0.5).unwrap();
        let rhs = (2f64.sqrt() - 1.0) * ZETA_HALF;
        assert!((lhs - rhs).abs() < 1e-11, "lhs={lhs} rhs={rhs}");
        assert!((lhs - -0.6048986434216305).abs() < 1e-9);
    }

    #[test]
    fn multiplication_identity() {
        // Σ_{a=1}^{m} ζ(s, a/m) = m^s ζ(s) at s = ½
        for m in [3u32, 4, 5] {
            let sum: f64 = (1..=m)
                .map(|a| hurwitz_zeta_half(a as f64 / m as f64).unwrap())
                .sum();
            let rhs = (m as f64).sqrt() * ZETA_HALF;
            assert!((sum - rhs).abs() < 1e-10, "m={m} sum={sum} rhs={rhs}");
        }
    }

    #[test]
    fn quarter_arguments() {
        // ζ(½,¼) + ζ(½,¾) = Σ_{a≤4} ζ(½,a/4) − ζ(½,½) − ζ(½,1)
        let q14 = hurwitz_zeta_half(0.25).unwrap();
        let q34 = hurwitz_zeta_half(0.75).unwrap();
        let rhs = 2.0 * ZETA_HALF - (2f64.sqrt() - 1.0) * ZETA_HALF - ZETA_HALF;
        assert!((q14 + q34 - rhs).abs() < 1e-11);
    }

    #[test]
    fn domain_errors() {
        assert!(hurwitz_zeta_half(0.0).is_err());
        assert!(hurwitz_zeta_half(-0.5).is_err());
        assert!(hurwitz_zeta_half(1.5).is_err());
        assert!(hurwitz_zeta(1.0, 0.5).is_err());
        assert!(hurwitz_zeta(0.5, 0.0).is_err());
        assert!(riemann_zeta(1.0).is_err());
    }

    #[test]
    fn riemann_values() {
        assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-13);
        assert!((riemann_zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-13);
        assert!((riemann_zeta(1.5).unwrap() - 2.612375348685488).abs() < 1e-12);
        // ζ(2,½) = 3ζ(2) = π²/2
        assert!((hurwitz_zeta(2.0, 0.5).unwrap() - PI * PI / 2.0).abs() < 1e-12);
        // large s: direct series dominates, E-M tail negligible
        assert!((riemann_zeta(20.0).unwrap() - 1.0000009539620338).abs() < 1e-14);
    }

    #[test]
    fn small_x_blowup() {
        // ζ(½,x) ~ x^{−1/2} as x → 0
        let x = 1e-10;
        let v = hurwitz_zeta_half(x).unwrap();
        assert!((v - (1.0 / x.sqrt() + ZETA_HALF)).abs() < 1e-4);
    }
}
