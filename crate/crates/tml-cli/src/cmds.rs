//! Subcommand implementations: thin drivers over the library operations,
//! plus the uniform failure-to-exit-code mapping.

use std::fmt;
use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tml_core::chars::Character;
use tml_core::error::Error;
use tml_core::expsum::{mean_square, subgroup_points, t_tilde, t_tilde_all, TorusMatrix};
use tml_core::field::build_ctx;
use tml_core::lfun::{l_central, l_central_all};
use tml_core::moment::{root_twist, MomentReport, RootTwist};
use tml_core::registry::{BoxedMethod, MethodOpts, Registry};
use tml_core::toric::{count_brute, count_lattice_linear, IntBox};

use crate::args::{
    CountArgs, CountMode, ExpsumArgs, LvalueArgs, MeansquareArgs, MethodArgs, MomentArgs,
    RoottwistArgs, SweepArgs,
};
use crate::output::{Cell, TableSink};

/// Anything a subcommand can fail with, ranked into the stable exit-code
/// scheme: usage 1, invalid modulus 2, numerical failure 3.
pub enum Failure {
    Usage(String),
    Numerical(String),
    Core(Error),
    Io(io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Numerical(_) => 3,
            Failure::Core(e) => match e {
                Error::NotPrime { .. } | Error::TooSmall { .. } => 2,
                Error::TooLarge { .. }
                | Error::QuadratureFailure { .. }
                | Error::PoleError { .. } => 3,
                _ => 1,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(s) | Failure::Numerical(s) => write!(f, "{s}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

type CmdResult = Result<(), Failure>;

// ---------------------------------------------------------------------------
// moment / sweep
// ---------------------------------------------------------------------------

const MOMENT_HEADER: &[&str] = &[
    "q", "a", "b", "moment_re", "moment_im", "even_re", "even_im", "odd_re", "odd_im",
    "main_term", "abs_error", "nonvanishing", "seconds", "method",
];

fn moment_row(r: &MomentReport) -> Vec<Cell> {
    vec![
        Cell::Uint(r.q),
        Cell::Int(r.a),
        Cell::Int(r.b),
        Cell::Real(r.moment.re),
        Cell::Real(r.moment.im),
        Cell::Real(r.even_part.re),
        Cell::Real(r.even_part.im),
        Cell::Real(r.odd_part.re),
        Cell::Real(r.odd_part.im),
        Cell::Real(r.main_term),
        Cell::Real(r.abs_error),
        Cell::Uint(r.nonvanishing_count),
        Cell::Real(r.seconds),
        Cell::Text(r.method.to_string()),
    ]
}

/// Row for a modulus that failed inside a sweep: numeric fields NaN/null,
/// the method column carries the flag.
fn flagged_row(q: u64, a: i64, b: i64, e: &Error) -> Vec<Cell> {
    let flag = match e {
        Error::NotPrime { .. } => "flagged:notprime",
        Error::TooSmall { .. } => "flagged:toosmall",
        _ => "flagged:error",
    };
    let mut row = vec![Cell::Uint(q), Cell::Int(a), Cell::Int(b)];
    row.extend((0..8).map(|_| Cell::Real(f64::NAN)));
    row.push(Cell::Null);
    row.push(Cell::Real(f64::NAN));
    row.push(Cell::Text(flag.to_string()));
    row
}

fn make_method(margs: &MethodArgs) -> Result<BoxedMethod, Failure> {
    if !(margs.x_factor.is_finite() && margs.x_factor > 0.0) {
        return Err(Failure::Usage(format!(
            "--x-factor must be a positive real, got {}",
            margs.x_factor
        )));
    }
    let opts = MethodOpts {
        x_factor: margs.x_factor,
        g: margs.g.into(),
    };
    Ok(Registry::standard().create(&margs.method, &opts)?)
}

pub fn moment(args: MomentArgs) -> CmdResult {
    let method = make_method(&args.method)?;
    let ctx = build_ctx(args.q)?;
    let report = method.compute(&ctx, args.a, args.b)?;
    let mut sink = TableSink::new(&args.output, MOMENT_HEADER)?;
    sink.row(moment_row(&report))?;
    sink.finish().map_err(Failure::from)
}

pub fn sweep(args: SweepArgs) -> CmdResult {
    let method = make_method(&args.method)?;
    let qs: Vec<u64> = if let Some(list) = &args.q_list {
        parse_u64_list(list, "modulus")?
    } else {
        let (lo, hi) = (args.qmin.unwrap(), args.qmax.unwrap());
        if lo < 3 {
            return Err(Failure::Usage(format!("--qmin must be >= 3, got {lo}")));
        }
        if hi < lo {
            return Err(Failure::Usage(format!("empty range: --qmin {lo} > --qmax {hi}")));
        }
        primes_in(lo, hi)
    };
    let mut sink = TableSink::new(&args.output, MOMENT_HEADER)?;
    let mut fit = Vec::new();
    for chunk in qs.chunks(64) {
        let reports =
            tml_core::moment::sweep(args.a, args.b, chunk, args.workers as usize, method.as_ref())?;
        for (&q, r) in chunk.iter().zip(&reports) {
            match r {
                Ok(rep) => {
                    if rep.abs_error > 0.0 {
                        fit.push(((q as f64).ln(), rep.abs_error.ln()));
                    }
                    sink.row(moment_row(rep))?;
                }
                Err(e) => {
                    eprintln!("# q={q}: {e}");
                    sink.row(flagged_row(q, args.a, args.b, e))?;
                }
            }
        }
    }
    if let Some(slope) = lsq_slope(&fit) {
        eprintln!(
            "# log|M - main| vs log q slope: {slope:.3} over {} moduli",
            fit.len()
        );
    }
    sink.finish().map_err(Failure::from)
}

// ---------------------------------------------------------------------------
// expsum
// ---------------------------------------------------------------------------

const EXPSUM_HEADER: &[&str] = &["q", "a", "b", "u", "t_re", "t_im", "t_abs"];

pub fn expsum(args: ExpsumArgs) -> CmdResult {
    let ctx = build_ctx(args.q)?;
    let row = |u: u64, z: num_complex::Complex64| {
        vec![
            Cell::Uint(args.q),
            Cell::Int(args.a),
            Cell::Int(args.b),
            Cell::Uint(u),
            Cell::Real(z.re),
            Cell::Real(z.im),
            Cell::Real(z.norm()),
        ]
    };
    if args.all {
        let table = t_tilde_all(&ctx, args.a, args.b);
        let mut sink = TableSink::new(&args.output, EXPSUM_HEADER)?;
        for (idx, &z) in table.iter().enumerate() {
            sink.row(row(idx as u64 + 1, z))?;
        }
        let max_abs = table.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let bound = if args.a * args.b > 0 {
            (args.a.unsigned_abs() + args.b.unsigned_abs()) as f64
        } else {
            args.a.unsigned_abs().max(args.b.unsigned_abs()) as f64
        };
        let applicable =
            args.a + args.b != 0 && args.q >= args.a.unsigned_abs().max(args.b.unsigned_abs()).pow(2);
        eprintln!(
            "# max |T~| = {max_abs:.6}, square-root-cancellation bound {bound} (applicable: {applicable})"
        );
        if max_abs > 0.0 {
            let mut bins = [0u64; 10];
            for z in &table {
                let i = ((z.norm() / max_abs) * 10.0) as usize;
                bins[i.min(9)] += 1;
            }
            eprintln!("# |T~| histogram over [0, {max_abs:.4}] in 10 bins: {bins:?}");
        }
        sink.finish().map_err(Failure::from)
    } else {
        let u = args.u.unwrap();
        let z = t_tilde(&ctx, args.a, args.b, u)?;
        let mut sink = TableSink::new(&args.output, EXPSUM_HEADER)?;
        sink.row(row(ctx.reduce(u), z))?;
        sink.finish().map_err(Failure::from)
    }
}

// ---------------------------------------------------------------------------
// meansquare
// ---------------------------------------------------------------------------

const MEANSQUARE_HEADER: &[&str] = &[
    "q", "matrix", "k", "rank", "subgroup_size", "mean_square", "predicted", "rel_error",
];

pub fn meansquare(args: MeansquareArgs) -> CmdResult {
    let ctx = build_ctx(args.q)?;
    let m: TorusMatrix = args.matrix.parse()?;
    let points = subgroup_points(&ctx, &m)?;
    let predicted =
        points.len() as f64 / (args.q as f64).powi((m.cols() - m.rank()) as i32);
    let ms = mean_square(&ctx, &m)?;
    let rel = (ms - predicted).abs() / predicted.max(1.0);
    let mut sink = TableSink::new(&args.output, MEANSQUARE_HEADER)?;
    sink.row(vec![
        Cell::Uint(args.q),
        Cell::Text(m.to_string()),
        Cell::Uint(m.cols() as u64),
        Cell::Uint(m.rank() as u64),
        Cell::Uint(points.len() as u64),
        Cell::Real(ms),
        Cell::Real(predicted),
        Cell::Real(rel),
    ])?;
    sink.finish().map_err(Failure::from)
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------

const COUNT_HEADER: &[&str] = &[
    "q", "matrix", "u", "box", "method", "count", "normalized", "bound",
];

const FUZZ_HEADER: &[&str] = &[
    "instance", "q", "matrix", "u", "box", "count_brute", "count_lattice", "agree",
];

/// The lattice method handles a single congruence u_i x_i ≡ u_j x_j: the
/// matrix must be one row with exactly one +1 and one −1 entry.
fn lattice_indices(m: &TorusMatrix) -> Result<(usize, usize), Failure> {
    let usage = || {
        Failure::Usage(
            "lattice mode needs a single-row matrix with exactly one +1 and one -1 entry"
                .to_string(),
        )
    };
    if m.rows() != 1 {
        return Err(usage());
    }
    let (mut i, mut j) = (None, None);
    for (t, &e) in m.entries()[0].iter().enumerate() {
        match e {
            0 => {}
            1 if i.is_none() => i = Some(t),
            -1 if j.is_none() => j = Some(t),
            _ => return Err(usage()),
        }
    }
    match (i, j) {
        (Some(i), Some(j)) => Ok((i, j)),
        _ => Err(usage()),
    }
}

pub fn count(args: CountArgs) -> CmdResult {
    if let Some(n) = args.fuzz {
        return fuzz_count(&args, n);
    }
    let need = |o: &Option<String>, name: &str| -> Result<String, Failure> {
        o.clone()
            .ok_or_else(|| Failure::Usage(format!("--{name} is required without --fuzz")))
    };
    let q = args
        .q
        .ok_or_else(|| Failure::Usage("--q is required without --fuzz".to_string()))?;
    let m: TorusMatrix = need(&args.matrix, "matrix")?.parse()?;
    let u = parse_i64_list(&need(&args.u, "u")?, "residue")?;
    let b: IntBox = need(&args.box_spec, "box")?.parse()?;
    let ctx = build_ctx(q)?;
    let prefix = |method: &str| {
        vec![
            Cell::Uint(q),
            Cell::Text(m.to_string()),
            Cell::Text(join_i64(&u)),
            Cell::Text(b.to_string()),
            Cell::Text(method.to_string()),
        ]
    };
    let mut rows = Vec::new();
    if matches!(args.mode, CountMode::Brute | CountMode::Both) {
        let r = count_brute(&ctx, &m, &u, &b)?;
        let mut row = prefix(r.method);
        row.extend([Cell::Uint(r.count), Cell::Real(r.normalized), Cell::Null]);
        rows.push(row);
    }
    if matches!(args.mode, CountMode::Lattice | CountMode::Both) {
        let (i, j) = lattice_indices(&m)?;
        let r = count_lattice_linear(&ctx, i, j, &u, &b)?;
        let mut row = prefix("lattice");
        row.extend([
            Cell::Uint(r.count),
            Cell::Real(r.count as f64 / (b.size() as f64).sqrt()),
            Cell::Real(r.bound),
        ]);
        rows.push(row);
    }
    let mut sink = TableSink::new(&args.output, COUNT_HEADER)?;
    for row in rows {
        sink.row(row)?;
    }
    sink.finish().map_err(Failure::from)
}

/// Seeded self-test corpus: random single-congruence instances counted by
/// both methods. The lattice side counts u_i x_i ≡ u_j x_j; the matching
/// coset for the brute side is w·H_A with w_i = u_j, w_j = u_i. Boxes sit
/// inside blocks [mq+1, mq+q−1] of nonzero residues, where the coset
/// count and the plain lattice count agree exactly.
fn fuzz_count(args: &CountArgs, n: u64) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let pool2 = primes_in(5, 1499);
    let pool3 = primes_in(5, 199);
    let mut sink = TableSink::new(&args.output, FUZZ_HEADER)?;
    let mut bad = 0u64;
    for inst in 0..n {
        let k = if inst % 4 == 3 { 3 } else { 2 };
        let pool = if k == 2 { &pool2 } else { &pool3 };
        let q = pool[rng.gen_range(0..pool.len())];
        let ctx = build_ctx(q)?;
        let (i, j) = if k == 2 {
            (0, 1)
        } else {
            let i = rng.gen_range(0..3usize);
            let mut j = rng.gen_range(0..2usize);
            if j >= i {
                j += 1;
            }
            (i, j)
        };
        let mut row = vec![0i64; k];
        row[i] = 1;
        row[j] = -1;
        let m = TorusMatrix::new(vec![row]).expect("single congruence row");
        let u: Vec<i64> = (0..k).map(|_| rng.gen_range(1..q) as i64).collect();
        let qi = q as i64;
        let intervals: Vec<(i64, i64)> = (0..k)
            .map(|_| {
                let w = rng.gen_range(1..=(q - 1).min(120)) as i64;
                let block = rng.gen_range(-2i64..=2) * qi;
                let lo = block + rng.gen_range(1..=(qi - w));
                (lo, lo + w - 1)
            })
            .collect();
        let b = IntBox::new(intervals).expect("nonempty intervals");
        let mut w = vec![1i64; k];
        w[i] = u[j];
        w[j] = u[i];
        let brute = count_brute(&ctx, &m, &w, &b)?;
        let latt = count_lattice_linear(&ctx, i, j, &u, &b)?;
        let agree = brute.count == latt.count;
        bad += u64::from(!agree);
        sink.row(vec![
            Cell::Uint(inst),
            Cell::Uint(q),
            Cell::Text(m.to_string()),
            Cell::Text(join_i64(&u)),
            Cell::Text(b.to_string()),
            Cell::Uint(brute.count),
            Cell::Uint(latt.count),
            Cell::Bool(agree),
        ])?;
    }
    sink.finish()?;
    eprintln!("# fuzz: {}/{n} instances agree (seed {})", n - bad, args.seed);
    if bad > 0 {
        return Err(Failure::Numerical(format!(
            "{bad} of {n} fuzz instances disagree between brute and lattice counts"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// roottwist
// ---------------------------------------------------------------------------

const ROOT_HEADER: &[&str] = &["q", "f", "rho", "value_re", "value_im", "value_abs", "status"];

pub fn roottwist(args: RoottwistArgs) -> CmdResult {
    let f = parse_i64_list(&args.f, "coefficient")?;
    let qs: Vec<u64> = match (args.q, args.qmin, args.qmax) {
        (Some(q), _, _) => vec![q],
        (None, Some(lo), Some(hi)) => {
            if lo < 3 {
                return Err(Failure::Usage(format!("--qmin must be >= 3, got {lo}")));
            }
            if hi < lo {
                return Err(Failure::Usage(format!("empty range: --qmin {lo} > --qmax {hi}")));
            }
            primes_in(lo, hi)
        }
        _ => unreachable!("clap group guarantees a modulus source"),
    };
    let mut rows = Vec::new();
    let mut fit = Vec::new();
    for q in qs {
        let ctx = build_ctx(q)?;
        match root_twist(&ctx, &f)? {
            RootTwist::Value { rho, value } => {
                let abs = value.norm();
                if abs > 0.0 {
                    fit.push(((q as f64).ln(), abs.ln()));
                }
                rows.push(vec![
                    Cell::Uint(q),
                    Cell::Text(args.f.clone()),
                    Cell::Uint(rho),
                    Cell::Real(value.re),
                    Cell::Real(value.im),
                    Cell::Real(abs),
                    Cell::Text("root".to_string()),
                ]);
            }
            RootTwist::NoRoot => {
                rows.push(vec![
                    Cell::Uint(q),
                    Cell::Text(args.f.clone()),
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::Text("noroot".to_string()),
                ]);
            }
        }
    }
    let mut sink = TableSink::new(&args.output, ROOT_HEADER)?;
    for row in rows {
        sink.row(row)?;
    }
    if let Some(slope) = lsq_slope(&fit) {
        eprintln!(
            "# log|twist| vs log q slope: {slope:.3} over {} rooted moduli",
            fit.len()
        );
    }
    sink.finish().map_err(Failure::from)
}

// ---------------------------------------------------------------------------
// lvalue
// ---------------------------------------------------------------------------

const LVALUE_HEADER: &[&str] = &["q", "j", "parity", "l_re", "l_im", "l_abs"];

pub fn lvalue(args: LvalueArgs) -> CmdResult {
    let ctx = build_ctx(args.q)?;
    let row = |j: u64, z: num_complex::Complex64| {
        vec![
            Cell::Uint(args.q),
            Cell::Uint(j),
            Cell::Uint(j & 1),
            Cell::Real(z.re),
            Cell::Real(z.im),
            Cell::Real(z.norm()),
        ]
    };
    if args.all {
        let table = l_central_all(&ctx);
        let mut sink = TableSink::new(&args.output, LVALUE_HEADER)?;
        for (j, &z) in table.values.iter().enumerate() {
            sink.row(row(j as u64, z))?;
        }
        sink.finish().map_err(Failure::from)
    } else {
        let chi = Character::new(&ctx, args.j.unwrap());
        let z = l_central(&chi);
        let mut sink = TableSink::new(&args.output, LVALUE_HEADER)?;
        sink.row(row(chi.index(), z))?;
        sink.finish().map_err(Failure::from)
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = 7u64;
    while d * d <= n {
        for off in [0, 4] {
            if n % (d + off) == 0 {
                return false;
            }
        }
        d += 6;
    }
    true
}

fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

fn parse_i64_list(s: &str, what: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Usage(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn parse_u64_list(s: &str, what: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Failure::Usage(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn join_i64(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Least-squares slope of y on x; None below two distinct points.
fn lsq_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in pts {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let den = n * sxx - sx * sx;
    (den.abs() > 1e-12).then(|| (n * sxy - sx * sy) / den)
}
