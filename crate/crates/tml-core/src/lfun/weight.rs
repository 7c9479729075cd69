//! The smoothing weight V(y) of the approximate functional equation.
//!
//! V(y) = (1/2πi) ∫_{(σ)} y^{−u} G(u) (γ(½+u)/γ(½)) du/u with G even,
//! holomorphic, G(0) = 1. V(y) → 1 as y → 0 and decays faster than any
//! power as y → ∞. Two admissible G's are provided; the computed moments
//! must not depend on the choice.
//!
//! Numerics: on Re u = 3 the integrand decays like e^{9−t²}, so a
//! trapezoid with step 0.05 truncated at |Im u| = 12 is exact to ~1e−13.
//! For y < 0.05 the prefactor y^{−3} would amplify roundoff, so the
//! contour is moved to Re u = −¼ (crossing only the simple pole at u = 0,
//! residue 1): V(y) = 1 + ∫_{(−¼)}, now with prefactor y^{1/4} ≤ 1.

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::lfun::gamma::gamma_factor;

/// Test-function choice: exp(u²) (primary) or exp(2u²) (secondary, for
/// checking that moments are G-independent).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GChoice {
    Exp1,
    Exp2,
}

impl GChoice {
    #[inline]
    fn eval(self, u: Complex64) -> Complex64 {
        match self {
            GChoice::Exp1 => (u * u).exp(),
            GChoice::Exp2 => (u * u * 2.0).exp(),
        }
    }
}

/// Contour parameters for the V quadrature.
#[derive(Clone, Copy, Debug)]
pub struct QuadOpts {
    pub sigma: f64,
    pub t_max: f64,
    pub h: f64,
    pub g: GChoice,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            sigma: 3.0,
            t_max: 12.0,
            h: 0.05,
            g: GChoice::Exp1,
        }
    }
}

/// y below which the default evaluator switches to the Re u = −¼ contour.
const Y_SPLIT: f64 = 0.05;

/// Absolute tolerance on the quadrature tail.
const TAIL_TOL: f64 = 1e-10;

/// Precomputed line data: g_r[k] = G(u_k) (γ(½+u_k)/γ(½)) / u_k at
/// u_k = σ + ikh. Everything y-independent lives here, so one table
/// serves any number of y evaluations on the same contour.
struct QuadTable {
    sigma: f64,
    h: f64,
    g_r: Vec<Complex64>,
}

impl QuadTable {
    fn build(ta: u8, tb: u8, opts: &QuadOpts) -> Result<QuadTable> {
        if opts.sigma <= -0.5 || opts.sigma == 0.0 {
            return Err(Error::DomainError {
                what: format!(
                    "contour Re u = {} is not inside (−½,0)∪(0,∞)",
                    opts.sigma
                ),
            });
        }
        if !(opts.h > 0.0) || !(opts.t_max > opts.h) {
            return Err(Error::DomainError {
                what: format!("bad quadrature grid h={} t_max={}", opts.h, opts.t_max),
            });
        }
        let half = Complex64::new(0.5, 0.0);
        let g_half = gamma_factor(half, ta, tb)?.re;
        let steps = (opts.t_max / opts.h).ceil() as usize;
        let mut g_r = Vec::with_capacity(steps + 1);
        for k in 0..=steps {
            let u = Complex64::new(opts.sigma, k as f64 * opts.h);
            let r = gamma_factor(half + u, ta, tb)? / g_half;
            g_r.push(opts.g.eval(u) * r / u);
        }
        Ok(QuadTable {
            sigma: opts.sigma,
            h: opts.h,
            g_r,
        })
    }

    /// Trapezoid sum (h/2π)[f(0) + 2Σ_k Re f(kh)] with
    /// f(t) = y^{−u} g_r(t); the y-dependence enters as one rotation.
    fn integral(&self, y: f64) -> Result<f64> {
        let l = y.ln();
        let amp = (-self.sigma * l).exp(); // y^{−σ}
        let tail = self.g_r.last().unwrap().norm() * amp * self.h;
        if tail > TAIL_TOL {
            return Err(Error::QuadratureFailure {
                tail,
                tol: TAIL_TOL,
            });
        }
        let rot = Complex64::from_polar(1.0, -self.h * l);
        let mut z = Complex64::new(amp, 0.0);
        let mut acc = 0.5 * self.g_r[0].re * amp;
        for gr in &self.g_r[1..] {
            z *= rot;
            acc += (z * gr).re;
        }
        Ok(acc * self.h / PI)
    }
}

/// V(y) on the caller's contour. A contour left of the origin
/// (−½ < σ < 0) picks up the residue 1 at u = 0.
pub fn v_weight_opts(y: f64, ta: u8, tb: u8, opts: &QuadOpts) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::DomainError {
            what: format!("v_weight needs y > 0, got {y}"),
        });
    }
    let table = QuadTable::build(ta, tb, opts)?;
    let shift = if opts.sigma < 0.0 { 1.0 } else { 0.0 };
    Ok(shift + table.integral(y)?)
}

/// V(y) with the default contour: Re u = 3 for y ≥ 0.05, Re u = −¼ below
/// (see module docs). Absolute accuracy ≈ 1e−12, target ≤ 1e−10.
pub fn v_weight(y: f64, ta: u8, tb: u8) -> Result<f64> {
    let mut opts = QuadOpts::default();
    if y < Y_SPLIT {
        opts.sigma = -0.25;
    }
    v_weight_opts(y, ta, tb, &opts)
}

// ---------------------------------------------------------------------------
// Interpolation grid
// ---------------------------------------------------------------------------

/// Grid domain in t = ln y and spacing. Below T_LO, V ≡ 1 to ~8e−12
/// (|V − 1| ≍ y^{1/2} log y); above T_HI, V is below 1e−13 in magnitude
/// for every parity class and both G choices (exp(2u²) decays slowest,
/// crossing 1e−13 near t ≈ 13.7 for class (1,1)).
const T_LO: f64 = -60.0;
const T_HI: f64 = 14.5;
const DELTA: f64 = 0.01;

/// Threshold defining y_cut: the largest grid ordinate with |V| above it.
const CUT_EPS: f64 = 1e-13;

/// Uniform grid of V in t = ln y with 6-point Lagrange interpolation
/// (error ≪ 1e−10 at δ = 0.01). Built once per parity class and G choice,
/// then shared: the double sums of the AFE evaluate V millions of times.
pub struct VGrid {
    ta: u8,
    tb: u8,
    vals: Vec<f64>,
    y_cut: f64,
}

impl VGrid {
    pub fn build(ta: u8, tb: u8, g: GChoice) -> Result<VGrid> {
        let hi = QuadTable::build(ta, tb, &QuadOpts { g, ..QuadOpts::default() })?;
        let lo = QuadTable::build(
            ta,
            tb,
            &QuadOpts {
                sigma: -0.25,
                g,
                ..QuadOpts::default()
            },
        )?;
        let n = ((T_HI - T_LO) / DELTA).round() as usize + 1;
        let mut vals = Vec::with_capacity(n);
        for i in 0..n {
            let t = T_LO + i as f64 * DELTA;
            let y = t.exp();
            let v = if y < Y_SPLIT {
                1.0 + lo.integral(y)?
            } else {
                hi.integral(y)?
            };
            vals.push(v);
        }
        let cut = vals.iter().rposition(|v| v.abs() > CUT_EPS).unwrap_or(0);
        let y_cut = (T_LO + cut as f64 * DELTA).exp();
        Ok(VGrid { ta, tb, vals, y_cut })
    }

    #[inline]
    pub fn parities(&self) -> (u8, u8) {
        (self.ta, self.tb)
    }

    /// Largest y with |V(y)| above 1e−13; sums over mn ≤ y_cut·X capture
    /// every term whose weight clears that threshold.
    #[inline]
    pub fn y_cut(&self) -> f64 {
        self.y_cut
    }

    /// V(y).
    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        self.eval_ln(y.ln())
    }

    /// V(e^t): 1 below the grid, 0 above, 6-point Lagrange inside.
    pub fn eval_ln(&self, t: f64) -> f64 {
        if t < T_LO {
            return 1.0;
        }
        if t > T_HI {
            return 0.0;
        }
        // 1/Π_{l≠j}(j−l) for the equispaced nodes 0..5
        const INV_DENOM: [f64; 6] = [
            -1.0 / 120.0,
            1.0 / 24.0,
            -1.0 / 12.0,
            1.0 / 12.0,
            -1.0 / 24.0,
            1.0 / 120.0,
        ];
        let u = (t - T_LO) / DELTA;
        let base = (u.floor() as usize).saturating_sub(2).min(self.vals.len() - 6);
        let s = u - base as f64;
        let d = [s, s - 1.0, s - 2.0, s - 3.0, s - 4.0, s - 5.0];
        let mut pre = [1.0; 6];
        let mut suf = [1.0; 6];
        for j in 1..6 {
            pre[j] = pre[j - 1] * d[j - 1];
            suf[5 - j] = suf[6 - j] * d[6 - j];
        }
        let v = &self.vals[base..base + 6];
        let mut acc = 0.0;
        for j in 0..6 {
            acc += v[j] * INV_DENOM[j] * pre[j] * suf[j];
        }
        acc
    }
}

type GridMap = HashMap<(u8, u8, GChoice), Arc<VGrid>>;

static GRID_CACHE: OnceLock<Mutex<GridMap>> = OnceLock::new();

/// Shared grid for the parity class (ta,tb) and test function g.
pub fn v_grid(ta: u8, tb: u8, g: GChoice) -> Result<Arc<VGrid>> {
    let cache = GRID_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (ta, tb, g);
    if let Some(grid) = cache.lock().unwrap().get(&key) {
        return Ok(Arc::clone(grid));
    }
    let grid = Arc::new(VGrid::build(ta, tb, g)?);
    cache
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&grid));
    Ok(grid)
}
