//! The character group of (Z/qZ)^×.
//!
//! A character mod prime q is the index j ∈ Z/(q−1) with
//! χ_j(g^k) = e(jk/(q−1)) for the fixed primitive root g of the context.
//! Characters are value objects (ctx reference + index); values are
//! computed on demand from the dlog table and the shared root-of-unity
//! table, never materialized per character.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expsum::{subgroup_points, TorusMatrix};
use crate::field::FieldCtx;

/// Dirichlet character mod q, encoded by its index j relative to the
/// context's primitive root.
#[derive(Clone, Copy, Debug)]
pub struct Character<'a> {
    ctx: &'a FieldCtx,
    j: u64,
}

impl<'a> Character<'a> {
    /// Character of index j (reduced mod q−1).
    pub fn new(ctx: &'a FieldCtx, j: i64) -> Self {
        let n = ctx.order() as i64;
        Character {
            ctx,
            j: j.rem_euclid(n) as u64,
        }
    }

    #[inline]
    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    #[inline]
    pub fn index(&self) -> u64 {
        self.j
    }

    #[inline]
    pub fn is_trivial(&self) -> bool {
        self.j == 0
    }

    /// χ(x): e(j·dlog(x)/(q−1)) for units, 0 when x ≡ 0 (mod q).
    pub fn eval(&self, x: u64) -> Complex64 {
        let r = x % self.ctx.q();
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let t = (self.j as i64) * (self.ctx.dlog(r) as i64);
        self.ctx.unity(t)
    }

    /// t(χ) = (1−χ(−1))/2 ∈ {0,1}; equals j mod 2 since −1 = g^{(q−1)/2}.
    #[inline]
    pub fn parity(&self) -> u8 {
        (self.j & 1) as u8
    }

    /// χ^a, i.e. the character of index a·j mod (q−1).
    pub fn power(&self, a: i64) -> Character<'a> {
        let n = self.ctx.order() as i64;
        let j = (a as i128 * self.j as i128).rem_euclid(n as i128) as i64;
        Character::new(self.ctx, j)
    }
}

/// All characters mod q in index order.
pub fn all_characters(ctx: &FieldCtx) -> impl Iterator<Item = Character<'_>> {
    (0..ctx.order()).map(move |j| Character::new(ctx, j as i64))
}

/// Default work cap for the brute `subgroup_perp` enumeration.
pub const PERP_CAP: u128 = 100_000_000;

/// H_A^⊥: all tuples (χ_{j_1},…,χ_{j_k}) with Π_i χ_{j_i}(x_i) = 1 for
/// every point (x_i) ∈ H_A(F_q). Returned as index tuples in lexicographic
/// order; the result is a subgroup of (Z/(q−1))^k under componentwise
/// addition.
///
/// Brute enumeration intended for small q: the work estimate
/// (q−1)^k · |H_A| is checked against `cap`.
pub fn subgroup_perp_with_cap(
    ctx: &FieldCtx,
    a: &TorusMatrix,
    cap: u128,
) -> Result<Vec<Vec<u64>>> {
    let k = a.cols();
    let n = ctx.order();
    let points = subgroup_points(ctx, a)?;
    let estimate = (n as u128).pow(k as u32) * points.len().max(1) as u128;
    if estimate > cap {
        return Err(Error::TooLarge { estimate, cap });
    }

    // dlog image of H_A: orthogonality is a linear condition mod q−1
    let dlogs: Vec<Vec<u64>> = points
        .iter()
        .map(|p| p.iter().map(|&x| ctx.dlog(x)).collect())
        .collect();

    let mut out = Vec::new();
    let mut idx = vec![0u64; k];
    loop {
        let ok = dlogs.iter().all(|d| {
            let s: u128 = idx
                .iter()
                .zip(d)
                .map(|(&j, &dl)| j as u128 * dl as u128)
                .sum();
            s % n as u128 == 0
        });
        if ok {
            out.push(idx.clone());
        }
        // odometer over (Z/(q−1))^k, last coordinate fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `subgroup_perp_with_cap` with the default cap.
pub fn subgroup_perp(ctx: &FieldCtx, a: &TorusMatrix) -> Result<Vec<Vec<u64>>> {
    subgroup_perp_with_cap(ctx, a, PERP_CAP)
}
