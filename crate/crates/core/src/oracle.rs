//! Brute-force and sampling checks of the maximum of `Q_n`, the sign-scheme
//! lemmas, the elementary inequalities and move monotonicity.
//!
//! Sweeps are split into fixed-size shards processed in parallel; shard `s`
//! draws from its own ChaCha stream `s` under the report seed, and shard
//! results are merged in shard order, so reports depend only on the inputs.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluate::{
    self, eval_f, eval_factor, eval_q, lemma1_check, q_bound, Inequality, XPoint, ZPoint,
};
use crate::normalize::build_certificate;
use crate::scalar::{Exact, Scalar};
use crate::scheme::{SignVector, TriangularScheme};

const SHARD: usize = 4096;

fn shard_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn shards(total: usize) -> impl ParallelIterator<Item = (u64, usize)> {
    let count = total.div_ceil(SHARD);
    (0..count)
        .into_par_iter()
        .map(move |s| (s as u64, SHARD.min(total - s * SHARD)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    VertexEnum,
    Grid,
    Random,
    CoordinateAscent,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::VertexEnum => "vertex-enum",
            Method::Grid => "grid",
            Method::Random => "random",
            Method::CoordinateAscent => "coordinate-ascent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxReport {
    pub n: usize,
    pub method: Method,
    pub best_value: f64,
    pub best_point: Vec<f64>,
    pub bound: u64,
    pub within_bound: bool,
    pub evaluations: u64,
    /// Largest excess over the bound seen anywhere (0 if none).
    pub max_excess: f64,
    /// `bound - best_value`.
    pub shortfall: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Points attaining the bound outside the candidate family.
    pub findings: Vec<Vec<f64>>,
}

impl fmt::Display for MaxReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} bound={} best={} at {:?} via {} ({} evaluations){}",
            self.n,
            self.bound,
            self.best_value,
            self.best_point,
            self.method,
            self.evaluations,
            if self.within_bound {
                ""
            } else {
                " EXCEEDS BOUND"
            }
        )
    }
}

/// Points where `Q_n` reaches `2^⌊(n+1)/2⌋`.
///
/// Odd `n`: `(−1, 0, −1, 0, …, −1)`. Even `n`: `([−1,0]^k, [0,−1]^{n/2-k})`
/// for `k = 0..=n/2`, in increasing `k`.
pub fn candidate_maximizers<S: Scalar>(n: usize) -> Result<Vec<XPoint<S>>> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let block = |a: i64, b: i64, reps: usize| (0..reps).flat_map(move |_| [a, b]);
    let patterns: Vec<Vec<i64>> = if n % 2 == 1 {
        vec![(0..n).map(|t| if t % 2 == 0 { -1 } else { 0 }).collect()]
    } else {
        (0..=n / 2)
            .map(|k| block(-1, 0, k).chain(block(0, -1, n / 2 - k)).collect())
            .collect()
    };
    patterns
        .into_iter()
        .map(|p| XPoint::new(p.into_iter().map(S::from_int).collect()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOptions {
    /// Uniform random points in `[-1,1]^n`.
    pub samples: usize,
    /// Random starts refined by coordinate ascent.
    pub ascent_starts: usize,
    pub seed: u64,
}

impl BoundOptions {
    pub fn new(samples: usize, seed: u64) -> BoundOptions {
        BoundOptions {
            samples,
            ascent_starts: samples,
            seed,
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

fn q64(x: &[f64]) -> f64 {
    let mut acc = 1.0;
    for i in 0..x.len() {
        let mut run = 1.0;
        for v in &x[i..] {
            run *= v;
            acc *= 1.0 - run;
        }
    }
    acc
}

/// Pattern search on a halving bracket: 20 rounds, each trying `x_k ± h`
/// one coordinate at a time, `h` starting at 0.5.
pub fn coordinate_ascent(start: &[f64]) -> (Vec<f64>, f64) {
    let mut x = start.to_vec();
    let mut value = q64(&x);
    let mut h = 0.5;
    for _ in 0..20 {
        for k in 0..x.len() {
            let keep = x[k];
            let mut best = (value, keep);
            for cand in [(keep - h).max(-1.0), (keep + h).min(1.0)] {
                x[k] = cand;
                let v = q64(&x);
                if v > best.0 {
                    best = (v, cand);
                }
            }
            x[k] = best.1;
            value = best.0;
        }
        h *= 0.5;
    }
    (x, value)
}

struct Sweep {
    best_value: f64,
    best_point: Vec<f64>,
    max_excess: f64,
    evaluations: u64,
}

impl Sweep {
    fn empty() -> Sweep {
        Sweep {
            best_value: f64::NEG_INFINITY,
            best_point: vec![],
            max_excess: 0.0,
            evaluations: 0,
        }
    }

    fn observe(&mut self, x: &[f64], v: f64, bound: f64) {
        self.max_excess = self.max_excess.max(v - bound);
        if v > self.best_value {
            self.best_value = v;
            self.best_point = x.to_vec();
        }
    }
}

/// Shard-order merge; ties keep the earlier shard's point.
fn merge(parts: Vec<Sweep>) -> Option<Sweep> {
    let mut it = parts.into_iter();
    let mut acc = it.next()?;
    for b in it {
        acc.max_excess = acc.max_excess.max(b.max_excess);
        acc.evaluations += b.evaluations;
        if b.best_value > acc.best_value {
            acc.best_value = b.best_value;
            acc.best_point = b.best_point;
        }
    }
    Some(acc)
}

/// Exact check at the candidate maximizers plus random sampling and
/// coordinate-ascent refinement. Returns an error if anything exceeds the bound.
pub fn verify_bound(n: usize, opts: BoundOptions) -> Result<MaxReport> {
    let bound = q_bound(n);
    let exact_bound = Exact::from_int(bound as i64);
    let candidates = candidate_maximizers::<Exact>(n)?;
    for c in &candidates {
        let v = eval_q(c);
        if v != exact_bound {
            return Err(Error::BoundViolation(format!(
                "candidate {:?} gives {v} instead of {bound}",
                c.coords().iter().map(Scalar::to_f64).collect::<Vec<_>>()
            )));
        }
    }
    let mut best_point: Vec<f64> = candidates[0].coords().iter().map(Scalar::to_f64).collect();
    let mut best_value = bound as f64;
    let mut method = Method::VertexEnum;
    let mut evaluations = candidates.len() as u64;
    let mut max_excess: f64 = 0.0;

    let bf = bound as f64;
    let random = merge(
        shards(opts.samples)
            .map(|(s, len)| {
                let mut rng = shard_rng(opts.seed, 2 * s);
                let mut out = Sweep::empty();
                for _ in 0..len {
                    let x = random_point(&mut rng, n);
                    out.evaluations += 1;
                    out.observe(&x, q64(&x), bf);
                }
                out
            })
            .collect(),
    );
    let ascent = merge(
        shards(opts.ascent_starts)
            .map(|(s, len)| {
                let mut rng = shard_rng(opts.seed, 2 * s + 1);
                let mut out = Sweep::empty();
                for _ in 0..len {
                    let (x, v) = coordinate_ascent(&random_point(&mut rng, n));
                    out.evaluations += 1 + 40 * n as u64;
                    out.observe(&x, v, bf);
                }
                out
            })
            .collect(),
    );
    for (sweep, m) in [(random, Method::Random), (ascent, Method::CoordinateAscent)] {
        if let Some(s) = sweep {
            evaluations += s.evaluations;
            max_excess = max_excess.max(s.max_excess);
            if s.best_value > best_value {
                best_value = s.best_value;
                best_point = s.best_point;
                method = m;
            }
        }
    }
    let within_bound = max_excess <= evaluate::PRODUCT_TOL;
    if !within_bound {
        return Err(Error::BoundViolation(format!(
            "Q_{n} reached {best_value} at {best_point:?}, above {bound}"
        )));
    }
    Ok(MaxReport {
        n,
        method,
        best_value,
        best_point,
        bound,
        within_bound,
        evaluations,
        max_excess: max_excess.max(0.0),
        shortfall: bf - best_value,
        seed: Some(opts.seed),
        findings: vec![],
    })
}

/// Largest admissible grid for `n` variables, in points.
pub const GRID_POINT_LIMIT: u64 = 200_000_000;

/// Exhaustive sweep of `Q_n` over the grid `{-1, -1+step, …, 1}^n`.
///
/// `2 / step` must be an even integer so that `-1`, `0` and `1` are grid points.
pub fn grid_max(n: usize, step: f64) -> Result<MaxReport> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(step > 0.0 && step <= 2.0) {
        return Err(Error::Domain(format!(
            "grid step {step} must lie in (0, 2]"
        )));
    }
    let m = (2.0 / step).round();
    if (m * step - 2.0).abs() > 1e-9 || !(m as u64).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "grid step {step} must divide 1 evenly"
        )));
    }
    let m = m as u64;
    if step <= 0.1 + 1e-12 && n > 6 {
        return Err(Error::Resource(format!(
            "grid step {step} limited to n <= 6, got n = {n}"
        )));
    }
    let per_axis = m + 1;
    let total = (per_axis as f64).powi(n as i32);
    if total > GRID_POINT_LIMIT as f64 {
        return Err(Error::Resource(format!(
            "grid of {total} points exceeds {GRID_POINT_LIMIT}"
        )));
    }
    let coord = |k: u64| (2.0 * k as f64 - m as f64) / m as f64;
    let bound = q_bound(n);
    let bf = bound as f64;
    let candidates: Vec<Vec<f64>> = candidate_maximizers::<f64>(n)?
        .into_iter()
        .map(XPoint::into_inner)
        .collect();

    // shard over the first coordinate
    let parts: Vec<(Sweep, Vec<Vec<f64>>)> = (0..per_axis)
        .into_par_iter()
        .map(|first| {
            let mut idx = vec![0u64; n];
            idx[0] = first;
            let mut x: Vec<f64> = idx.iter().map(|&k| coord(k)).collect();
            let mut out = Sweep::empty();
            let mut findings = Vec::new();
            loop {
                let v = q64(&x);
                out.evaluations += 1;
                out.observe(&x, v, bf);
                if v >= bf - evaluate::FACTOR_TOL && !candidates.contains(&x) {
                    findings.push(x.clone());
                }
                // odometer over coordinates 2..n
                let mut d = n - 1;
                loop {
                    if d == 0 {
                        return (out, findings);
                    }
                    idx[d] += 1;
                    if idx[d] < per_axis {
                        x[d] = coord(idx[d]);
                        break;
                    }
                    idx[d] = 0;
                    x[d] = coord(0);
                    d -= 1;
                }
            }
        })
        .collect();
    let findings: Vec<Vec<f64>> = parts.iter().flat_map(|(_, f)| f.clone()).collect();
    let sweep = merge(parts.into_iter().map(|(s, _)| s).collect()).expect("grid is non-empty");
    let within_bound = sweep.max_excess <= evaluate::PRODUCT_TOL;
    Ok(MaxReport {
        n,
        method: Method::Grid,
        best_value: sweep.best_value,
        best_point: sweep.best_point,
        bound,
        within_bound,
        evaluations: sweep.evaluations,
        max_excess: sweep.max_excess.max(0.0),
        shortfall: bf - sweep.best_value,
        seed: None,
        findings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub eps: Vec<i64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LemmaReport {
    pub n_max: usize,
    pub seed: u64,
    pub vectors: u64,
    pub squares: u64,
    pub negative_positions: u64,
    pub odd_negative_positions: u64,
    pub violations: Vec<Violation>,
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sign-scheme lemmas, n <= {}: {} vectors, {} squares, {} negative positions, {} odd negative positions, {} violations",
            self.n_max,
            self.vectors,
            self.squares,
            self.negative_positions,
            self.odd_negative_positions,
            self.violations.len()
        )
    }
}

/// Largest dimension enumerated exhaustively by [`verify_lemmas`].
pub const EXHAUSTIVE_LEMMA_DIM: usize = 16;
/// Random vectors per dimension above [`EXHAUSTIVE_LEMMA_DIM`].
pub const RANDOM_LEMMA_VECTORS: usize = 256;

fn check_lemmas_one(eps: &SignVector) -> LemmaReport {
    let c = TriangularScheme::generate(eps);
    let n = eps.len();
    let mut r = LemmaReport {
        vectors: 1,
        ..LemmaReport::default()
    };
    let violation = |check: &str, detail: String| Violation {
        check: check.into(),
        eps: eps.to_ints(),
        detail,
    };
    let mut found = Vec::new();
    for i in 1..=n {
        for i2 in i + 1..=n {
            for j in i2..=n {
                for j2 in j + 1..=n {
                    r.squares += 1;
                    let p = c.square_sign_product(i, i2, j, j2).expect("valid square");
                    if p != 1 {
                        found.push(violation(
                            "square-product",
                            format!("({i},{i2};{j},{j2}) gives {p}"),
                        ));
                    }
                }
            }
        }
    }
    for p in c.positions() {
        if !c.at(p.i, p.j).is_minus() {
            continue;
        }
        r.negative_positions += 1;
        let h = c.horizontal_sum(p.i, p.j).expect("in range");
        let v = c.vertical_sum(p.i, p.j).expect("in range");
        if h != -v {
            found.push(violation(
                "horizontal-vertical",
                format!("{p}: H = {h}, V = {v}"),
            ));
        }
        if (p.i + p.j) % 2 == 1 {
            r.odd_negative_positions += 1;
            let w = c.wrong_counts(p.i, p.j).expect("in range");
            let (hw, vw) = (w.horizontal(), w.vertical());
            if v != 2 * vw - 1 || h != 2 * hw - 1 || hw + vw != 1 {
                found.push(violation(
                    "wrong-count",
                    format!("{p}: H = {h}, V = {v}, Hw = {hw}, Vw = {vw}"),
                ));
            }
        }
    }
    r.violations = found;
    r
}

fn combine(mut a: LemmaReport, b: LemmaReport) -> LemmaReport {
    a.vectors += b.vectors;
    a.squares += b.squares;
    a.negative_positions += b.negative_positions;
    a.odd_negative_positions += b.odd_negative_positions;
    a.violations.extend(b.violations);
    a
}

fn vectors_for(n: usize, seed: u64) -> Vec<SignVector> {
    if n <= EXHAUSTIVE_LEMMA_DIM {
        SignVector::enumerate(n).expect("small n").collect()
    } else {
        let mut rng = shard_rng(seed, n as u64);
        (0..RANDOM_LEMMA_VECTORS)
            .map(|_| {
                let mask = if n >= 64 {
                    rng.gen::<u64>()
                } else {
                    rng.gen_range(0..1u64 << n)
                };
                SignVector::from_mask(n.min(64), mask).expect("n >= 1")
            })
            .collect()
    }
}

/// Corner parity of squares, `H = -V` at negative entries, and the wrong-count
/// identities at negative entries with `i + j` odd, over all generated schemes
/// of dimension `1..=n_max` (random vectors above dimension 16).
pub fn verify_lemmas(n_max: usize, seed: u64) -> Result<LemmaReport> {
    if n_max == 0 {
        return Err(Error::ZeroDimension);
    }
    if n_max > 64 {
        return Err(Error::Resource(format!(
            "lemma sweep supports n <= 64, got {n_max}"
        )));
    }
    let mut report = LemmaReport {
        n_max,
        seed,
        ..LemmaReport::default()
    };
    for n in 1..=n_max {
        let parts: Vec<LemmaReport> = vectors_for(n, seed)
            .par_iter()
            .map(check_lemmas_one)
            .collect();
        report = parts.into_iter().fold(report, combine);
    }
    report
        .violations
        .sort_by(|a, b| (&a.eps, &a.check, &a.detail).cmp(&(&b.eps, &b.check, &b.detail)));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub n_max: usize,
    pub samples_per_move: usize,
    pub seed: u64,
    pub vectors: u64,
    pub moves: u64,
    pub evaluations: u64,
    pub violations: Vec<Violation>,
}

impl fmt::Display for MonotonicityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "move monotonicity, n <= {}: {} vectors, {} moves, {} samples, {} violations",
            self.n_max,
            self.vectors,
            self.moves,
            self.evaluations,
            self.violations.len()
        )
    }
}

fn random_z(rng: &mut ChaCha8Rng, n: usize) -> ZPoint<f64> {
    ZPoint::new((0..n).map(|_| rng.gen_range(0.0..=1.0)).collect()).expect("inside unit cube")
}

/// Along every built certificate for `n <= n_max`, checks that sampled
/// `F` values never decrease across a move and that the product of the
/// touched factors before the move is at most 1.
pub fn verify_monotonicity(
    n_max: usize,
    samples_per_move: usize,
    seed: u64,
) -> Result<MonotonicityReport> {
    if n_max == 0 {
        return Err(Error::ZeroDimension);
    }
    if n_max > 20 {
        return Err(Error::Resource(format!(
            "monotonicity sweep supports n <= 20, got {n_max}"
        )));
    }
    let mut report = MonotonicityReport {
        n_max,
        samples_per_move,
        seed,
        ..Default::default()
    };
    for n in 1..=n_max {
        let parts: Vec<Result<MonotonicityReport>> = (0..1u64 << n)
            .into_par_iter()
            .map(|mask| {
                let eps = SignVector::from_mask(n, mask)?;
                let cert = build_certificate(&eps)?;
                let mut rng = shard_rng(seed ^ ((n as u64) << 32), mask);
                let mut part = MonotonicityReport {
                    vectors: 1,
                    ..Default::default()
                };
                let mut scheme = TriangularScheme::generate(&eps);
                for mv in &cert.moves {
                    let next = mv.apply(&scheme)?;
                    part.moves += 1;
                    for _ in 0..samples_per_move {
                        let z = random_z(&mut rng, n);
                        let before = eval_f(&scheme, &z)?;
                        let after = eval_f(&next, &z)?;
                        let local = mv
                            .flipped_positions()
                            .iter()
                            .map(|p| eval_factor(&scheme, &z, p.i, p.j))
                            .product::<Result<f64>>()?;
                        part.evaluations += 1;
                        if before > after + evaluate::PRODUCT_TOL {
                            part.violations.push(Violation {
                                check: "monotone".into(),
                                eps: eps.to_ints(),
                                detail: format!("{mv} at {:?}: {before} > {after}", z.coords()),
                            });
                        }
                        if local > 1.0 + evaluate::FACTOR_TOL {
                            part.violations.push(Violation {
                                check: "local-factor".into(),
                                eps: eps.to_ints(),
                                detail: format!("{mv} at {:?}: factor product {local}", z.coords()),
                            });
                        }
                    }
                    scheme = next;
                }
                Ok(part)
            })
            .collect();
        for part in parts {
            let part = part?;
            report.vectors += part.vectors;
            report.moves += part.moves;
            report.evaluations += part.evaluations;
            report.violations.extend(part.violations);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InequalityReport {
    pub samples: usize,
    pub seed: u64,
    pub evaluations: u64,
    pub max_residual: f64,
    pub violations: Vec<Violation>,
}

impl fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "elementary inequalities: {} triples + 8 corners, {} checks, max factorization residual {:e}, {} violations",
            self.samples,
            self.evaluations,
            self.max_residual,
            self.violations.len()
        )
    }
}

/// The four elementary inequalities at the corners of `[0,1]^3` and at
/// `samples` random triples, plus the factorization residual of `A6`.
pub fn verify_inequalities(samples: usize, seed: u64) -> Result<InequalityReport> {
    let corners: Vec<[f64; 3]> = (0..8u8)
        .map(|b| [(b & 1) as f64, (b >> 1 & 1) as f64, (b >> 2 & 1) as f64])
        .collect();
    let mut triples: Vec<Vec<[f64; 3]>> = vec![corners];
    triples.extend(
        shards(samples)
            .map(|(s, len)| {
                let mut rng = shard_rng(seed, s);
                (0..len)
                    .map(|_| [rng.gen(), rng.gen(), rng.gen()])
                    .collect::<Vec<[f64; 3]>>()
            })
            .collect::<Vec<_>>(),
    );
    let mut report = InequalityReport {
        samples,
        seed,
        ..Default::default()
    };
    for [x, y, z] in triples.into_iter().flatten() {
        for which in Inequality::ALL {
            let o = lemma1_check(which, x, y, z)?;
            report.evaluations += 1;
            if !o.holds {
                report.violations.push(Violation {
                    check: format!("{which:?}"),
                    eps: vec![],
                    detail: format!("({x}, {y}, {z}): {} > {}", o.lhs, o.rhs),
                });
            }
            if let Some(r) = o.residual {
                report.max_residual = report.max_residual.max(r.abs());
                if r.abs() > evaluate::FACTOR_TOL {
                    report.violations.push(Violation {
                        check: "A6-factorization".into(),
                        eps: vec![],
                        detail: format!("({x}, {y}, {z}): residual {r:e}"),
                    });
                }
            }
        }
    }
    Ok(report)
}
