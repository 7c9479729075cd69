//! Central values of Dirichlet L-functions: Hurwitz-zeta evaluation,
//! gamma factors, the smoothing weight V, and the approximate functional
//! equation, batch and per-character.
//!
//! Everything rests on the finite identity
//!   L(s,χ) = q^{−s} Σ_{x=1}^{q−1} χ(x) ζ(s, x/q),
//! which at s = ½ turns the q−1 central values of a full character group
//! into one length-(q−1) DFT of Hurwitz-zeta samples ζ(½, g^k/q).

pub mod afe;
pub mod gamma;
pub mod hurwitz;
pub mod weight;

pub use afe::{afe_eval, n_term, p_term, AfeEngine, AfeParams, Parity};
pub use gamma::{digamma, gamma, gamma_factor};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_half, riemann_zeta};
pub use weight::{v_grid, v_weight, GChoice, QuadOpts, VGrid};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::chars::Character;
use crate::fft::{dft, naive_dft};
use crate::field::FieldCtx;

/// Central L-values of a full character group, indexed by character index.
#[derive(Clone, Debug)]
pub struct LTable {
    pub values: Vec<Complex64>,
    pub method: &'static str,
}

impl LTable {
    /// values[e·j mod (q−1)] — the entry of χ_j^e.
    #[inline]
    pub fn at(&self, e: i64, j: u64) -> Complex64 {
        let n = self.values.len() as i128;
        self.values[(e as i128 * j as i128).rem_euclid(n) as usize]
    }
}

/// ζ(½, g^k/q) for k = 0..q−2, the common input of both evaluation paths.
fn hurwitz_samples(ctx: &FieldCtx) -> Vec<f64> {
    let q = ctx.q() as f64;
    ctx.gpow_table()
        .par_iter()
        .map(|&x| hurwitz_zeta_half(x as f64 / q).expect("0 < g^k/q < 1"))
        .collect()
}

/// L(½,χ) by direct summation of q^{−1/2} Σ_k e(jk/(q−1)) ζ(½, g^k/q).
/// The trivial character comes out as ζ(½)(1−q^{−1/2}) automatically.
pub fn l_central(chi: &Character) -> Complex64 {
    let ctx = chi.ctx();
    let z = hurwitz_samples(ctx);
    let j = chi.index() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &zv) in z.iter().enumerate() {
        acc += zv * ctx.unity(j * k as i64);
    }
    acc / (ctx.q() as f64).sqrt()
}

/// All central values at once: one DFT of the Hurwitz-zeta samples,
/// O(q log q) after the O(q) sampling pass.
pub fn l_central_all(ctx: &FieldCtx) -> LTable {
    let z: Vec<Complex64> = hurwitz_samples(ctx)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    let scale = 1.0 / (ctx.q() as f64).sqrt();
    let values = dft(&z, 1).into_iter().map(|v| v * scale).collect();
    LTable {
        values,
        method: "hurwitz_batch",
    }
}

/// The same table by the O(q²) character-at-a-time sum; cross-check path.
pub fn l_table_direct(ctx: &FieldCtx) -> LTable {
    let z: Vec<Complex64> = hurwitz_samples(ctx)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    let scale = 1.0 / (ctx.q() as f64).sqrt();
    let values = naive_dft(&z, 1).into_iter().map(|v| v * scale).collect();
    LTable {
        values,
        method: "direct",
    }
}
