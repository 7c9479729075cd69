//! Prime-field context: primality, primitive roots, discrete logarithms,
//! roots of unity and power-residue subgroups of F_q^×.
//!
//! Everything downstream (characters, exponential sums, L-values) works in
//! the cyclic group F_q^× = ⟨g⟩ of order q−1; this module owns the dense
//! dlog/power tables that make that identification O(1) per element.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Deterministic Miller–Rabin, valid for all inputs below 2^64.
///
/// Witness set {2,3,5,7,11,13,17,19,23,29,31,37} is sufficient for 64-bit
/// integers (Sorenson–Webster).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n-1 = d·2^s with d odd
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// (a·b) mod m without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by square-and-multiply.
#[inline]
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Distinct prime factors of n by trial division (n < 2^63 here, and the
/// moduli of interest keep n ≤ ~10^8, so this is cheap).
fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Immutable per-prime context: modulus, smallest primitive root, and the
/// two dense tables identifying F_q^× with Z/(q−1).
///
/// Memory: ~2q machine words for the tables; the complex unit-root tables
/// are built lazily on first use (they are only needed by the character /
/// exponential-sum layers).
pub struct FieldCtx {
    q: u64,
    g: u64,
    /// dlog[x] = k with g^k ≡ x (mod q), for 1 ≤ x ≤ q−1; dlog[0] unused.
    dlog: Vec<u32>,
    /// gpow[k] = g^k mod q for 0 ≤ k ≤ q−2.
    gpow: Vec<u32>,
    /// unity[t] = e(t/(q−1)), lazily built.
    unity: OnceLock<Vec<Complex64>>,
    /// psi[x] = e(x/q), lazily built.
    psi: OnceLock<Vec<Complex64>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("q", &self.q)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

/// Builds the context for a prime q ≥ 3: smallest primitive root and full
/// dlog/gpow tables.
pub fn build_ctx(q: u64) -> Result<FieldCtx> {
    if q < 3 {
        return Err(Error::TooSmall { q });
    }
    if !is_prime(q) {
        return Err(Error::NotPrime { q });
    }
    let factors = prime_factors(q - 1);
    let g = (2..q)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, (q - 1) / p, q) != 1))
        .expect("every prime has a primitive root");

    let n = (q - 1) as usize;
    let mut gpow = vec![0u32; n];
    let mut dlog = vec![0u32; q as usize];
    let mut x = 1u64;
    for k in 0..n {
        gpow[k] = x as u32;
        dlog[x as usize] = k as u32;
        x = mul_mod(x, g, q);
    }
    debug_assert_eq!(x, 1, "g must have order q-1");

    Ok(FieldCtx {
        q,
        g,
        dlog,
        gpow,
        unity: OnceLock::new(),
        psi: OnceLock::new(),
    })
}

impl FieldCtx {
    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn g(&self) -> u64 {
        self.g
    }

    /// Group order q−1.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q - 1
    }

    /// Discrete log of x (x must be a unit; panics in debug builds otherwise).
    #[inline]
    pub fn dlog(&self, x: u64) -> u64 {
        let r = (x % self.q) as usize;
        debug_assert!(r != 0, "dlog of 0 mod {}", self.q);
        self.dlog[r] as u64
    }

    /// g^k mod q for any k (reduced mod q−1).
    #[inline]
    pub fn gpow(&self, k: i64) -> u64 {
        let n = (self.q - 1) as i64;
        self.gpow[k.rem_euclid(n) as usize] as u64
    }

    /// Raw power table (index k in 0..q−1).
    #[inline]
    pub fn gpow_table(&self) -> &[u32] {
        &self.gpow
    }

    /// Reduces a signed integer to a residue in 0..q.
    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a % self.q, b % self.q, self.q)
    }

    #[inline]
    pub fn pow(&self, a: u64, e: i64) -> u64 {
        // reduce the exponent mod q−1 so negative powers work on units
        let n = (self.q - 1) as i64;
        pow_mod(a % self.q, e.rem_euclid(n) as u64, self.q)
    }

    /// Multiplicative inverse of a unit.
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.q != 0);
        pow_mod(a % self.q, self.q - 2, self.q)
    }

    /// e(t/(q−1)) with t reduced mod q−1; table-backed.
    #[inline]
    pub fn unity(&self, t: i64) -> Complex64 {
        let n = (self.q - 1) as i64;
        self.unity_table()[t.rem_euclid(n) as usize]
    }

    /// Table of e(t/(q−1)) for t in 0..q−1.
    pub fn unity_table(&self) -> &[Complex64] {
        self.unity.get_or_init(|| {
            let n = self.q - 1;
            let w = std::f64::consts::TAU / n as f64;
            (0..n)
                .map(|t| Complex64::from_polar(1.0, w * t as f64))
                .collect()
        })
    }

    /// Additive character ψ(x) = e(x/q); table-backed.
    #[inline]
    pub fn psi(&self, x: i64) -> Complex64 {
        self.psi_table()[x.rem_euclid(self.q as i64) as usize]
    }

    /// Table of e(x/q) for x in 0..q.
    pub fn psi_table(&self) -> &[Complex64] {
        self.psi.get_or_init(|| {
            let w = std::f64::consts::TAU / self.q as f64;
            (0..self.q)
                .map(|x| Complex64::from_polar(1.0, w * x as f64))
                .collect()
        })
    }
}

/// μ_d(F_q) = {x : x^d = 1} = {g^{k(q−1)/e}} with e = gcd(d, q−1),
/// sorted ascending. Size gcd(d, q−1).
pub fn roots_of_unity(ctx: &FieldCtx, d: u64) -> Vec<u64> {
    assert!(d >= 1, "need d >= 1");
    let n = ctx.order();
    let e = gcd(d, n);
    let step = (n / e) as usize;
    let mut out: Vec<u64> = (0..e as usize)
        .map(|k| ctx.gpow_table()[k * step] as u64)
        .collect();
    out.sort_unstable();
    out
}

/// (F_q^×)^a = {x^a : x ∈ F_q^×} = ⟨g^{gcd(|a|,q−1)}⟩, sorted ascending.
/// Size (q−1)/gcd(|a|,q−1).
pub fn power_residues(ctx: &FieldCtx, a: i64) -> Result<Vec<u64>> {
    if a == 0 {
        return Err(Error::ZeroExponent);
    }
    let n = ctx.order();
    let d = gcd(a.unsigned_abs(), n);
    let mut out: Vec<u64> = (0..(n / d))
        .map(|k| ctx.gpow_table()[(k * d) as usize] as u64)
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[inline]
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd for signed inputs, always ≥ 0.
#[inline]
pub fn gcd_i(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

/// Extended gcd: returns (d, s, t) with s·a + t·b = d = gcd(a,b), d ≥ 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (d, s, t) = ext_gcd(b, a.rem_euclid(b));
    // d = s·b + t·(a − ⌊a/b⌋·b)
    (d, t, s - a.div_euclid(b) * t)
}
