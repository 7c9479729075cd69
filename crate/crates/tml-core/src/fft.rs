//! Discrete Fourier transforms of arbitrary length.
//!
//! Group-dual sums over Z/(q−1) need DFTs whose length is q−1 — never a
//! power of two — so the power-of-two radix-2 kernel is wrapped in a
//! Bluestein chirp-z transform. Conventions:
//!
//!   dft(x, sign)[k] = Σ_m x[m] · e(sign · mk / N),   e(t) = exp(2πi t)
//!
//! No normalization is applied in either direction.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// In-place radix-2 FFT; length must be a power of two.
/// `sign` is applied as e(sign·mk/n).
fn fft_pow2(a: &mut [Complex64], sign: f64) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    // twiddles computed per index from sin/cos: no phase-accumulation drift
    let half = n / 2;
    let w = sign * TAU / n as f64;
    let roots: Vec<Complex64> = (0..half)
        .map(|i| Complex64::from_polar(1.0, w * i as f64))
        .collect();
    let mut len = 2;
    while len <= n {
        let step = n / len;
        let half_len = len / 2;
        for start in (0..n).step_by(len) {
            for i in 0..half_len {
                let u = a[start + i];
                let v = a[start + i + half_len] * roots[i * step];
                a[start + i] = u + v;
                a[start + i + half_len] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Bluestein chirp-z: arbitrary-length DFT as one convolution of length
/// next_pow2(2N−1). The chirp phase uses m² reduced mod 2N in integer
/// arithmetic, so no precision is lost for large N.
fn bluestein(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    let l = (2 * n - 1).next_power_of_two();
    let two_n = 2 * n as u128;

    // c[m] = e(sign · m²/(2N))
    let chirp: Vec<Complex64> = (0..n)
        .map(|m| {
            let sq = (m as u128 * m as u128) % two_n;
            Complex64::from_polar(1.0, sign * PI * sq as f64 / n as f64)
        })
        .collect();

    let mut a = vec![Complex64::new(0.0, 0.0); l];
    for m in 0..n {
        a[m] = x[m] * chirp[m];
    }
    let mut b = vec![Complex64::new(0.0, 0.0); l];
    b[0] = chirp[0].conj();
    for j in 1..n {
        let c = chirp[j].conj();
        b[j] = c;
        b[l - j] = c;
    }

    fft_pow2(&mut a, -1.0);
    fft_pow2(&mut b, -1.0);
    for i in 0..l {
        a[i] *= b[i];
    }
    fft_pow2(&mut a, 1.0);

    let scale = 1.0 / l as f64;
    (0..n).map(|k| a[k] * chirp[k] * scale).collect()
}

/// DFT of any length: X[k] = Σ_m x[m]·e(sign·mk/N); sign ∈ {−1,+1}.
pub fn dft(x: &[Complex64], sign: i32) -> Vec<Complex64> {
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    if n.is_power_of_two() {
        let mut buf = x.to_vec();
        fft_pow2(&mut buf, sign as f64);
        return buf;
    }
    bluestein(x, sign as f64)
}

/// Reference O(N²) DFT with the same convention; used as the oracle in
/// tests and fine for N in the hundreds.
pub fn naive_dft(x: &[Complex64], sign: i32) -> Vec<Complex64> {
    let n = x.len();
    let w = sign as f64 * TAU / n as f64;
    (0..n)
        .map(|k| {
            (0..n)
                .map(|m| x[m] * Complex64::from_polar(1.0, w * ((m * k) % n) as f64))
                .sum()
        })
        .collect()
}
