//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use signscheme::discriminant::{discriminant_bound, BoundInput};
use signscheme::evaluate::{FACTOR_TOL, PRODUCT_TOL};
use signscheme::normalize::level_lists;
use signscheme::oracle::{self, candidate_maximizers, BoundOptions};
use signscheme::{
    build_certificate, change_of_variables, check_certificate, eval_p, eval_q, trace_build, Exact,
    Move, Position, Scalar, SignVector, TriangularScheme, YTuple,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every sign vector of length 1..=12 gets an accepted certificate whose
/// touched positions are disjoint and cover exactly the wrong set.
fn exhaustive_soundness() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for n in 1..=12 {
        for eps in SignVector::enumerate(n).unwrap() {
            total += 1;
            let cert = build_certificate(&eps).map_err(|e| format!("{eps}: {e}"))?;
            let report = check_certificate(&eps, &cert);
            ensure(report.accepted, || format!("{eps}: rejected\n{report}"))?;
            let touched: Vec<Position> = cert
                .moves
                .iter()
                .flat_map(Move::flipped_positions)
                .collect();
            let unique: BTreeSet<Position> = touched.iter().copied().collect();
            ensure(unique.len() == touched.len(), || {
                format!("{eps}: overlapping moves")
            })?;
            ensure(
                unique == TriangularScheme::generate(&eps).wrong_set(),
                || format!("{eps}: touched positions differ from the wrong set"),
            )?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(total == 8190, || {
        format!("expected 8190 vectors, saw {total}")
    })?;
    ensure(secs < 60.0, || format!("took {secs:.1}s, limit 60s"))?;
    Ok(format!("{total} vectors in {secs:.2}s"))
}

fn worked_trace() -> Outcome {
    use Move as M;
    let eps: SignVector = "+,-,+,+,-,+,+".parse().unwrap();
    let expected: Vec<Vec<Move>> = vec![
        vec![M::point(1, 1)],
        vec![M::horizontal(1, 1, 2)],
        vec![M::horizontal(1, 1, 2), M::vertical(2, 3, 3)],
        vec![
            M::horizontal(1, 1, 2),
            M::vertical(2, 3, 3),
            M::vertical(1, 4, 4),
        ],
        vec![
            M::horizontal(1, 1, 2),
            M::vertical(2, 3, 3),
            M::square(1, 4, 4, 5),
        ],
        vec![
            M::horizontal(1, 1, 2),
            M::square(2, 3, 3, 6),
            M::square(1, 4, 4, 5),
            M::vertical(5, 6, 6),
        ],
        vec![
            M::horizontal(1, 1, 2),
            M::square(2, 3, 3, 6),
            M::square(1, 4, 4, 5),
            M::vertical(5, 6, 6),
            M::vertical(4, 7, 7),
            M::point(1, 7),
        ],
    ];
    let lists = level_lists(&trace_build(&eps).map_err(|e| e.to_string())?);
    for (k, (got, want)) in lists.iter().zip(&expected).enumerate() {
        ensure(got == want, || {
            format!("L({}) = {got:?}, expected {want:?}", k + 1)
        })?;
    }
    ensure(lists.len() == 7, || format!("{} levels", lists.len()))?;
    let cert = build_certificate(&eps).map_err(|e| e.to_string())?;
    ensure(cert.moves == expected[6], || {
        "final certificate differs".into()
    })?;
    Ok(format!("L(1)..L(7) match; final {cert}"))
}

fn maximum_of_q() -> Outcome {
    for n in 1..=20 {
        let bound = Exact::from_int(signscheme::q_bound(n) as i64);
        for c in candidate_maximizers::<Exact>(n).map_err(|e| e.to_string())? {
            let v = eval_q(&c);
            ensure(v == bound, || {
                format!("n={n}: candidate gives {v}, expected {bound}")
            })?;
        }
    }
    let mut worst: f64 = 0.0;
    for n in 1..=10 {
        let opts = BoundOptions {
            samples: 1_000_000,
            ascent_starts: 1_000,
            seed: 0xACCE_0000 + n as u64,
        };
        let r = oracle::verify_bound(n, opts).map_err(|e| e.to_string())?;
        ensure(r.within_bound && r.max_excess <= PRODUCT_TOL, || {
            format!("n={n}: excess {}", r.max_excess)
        })?;
        worst = worst.max(r.max_excess);
    }
    for (n, step) in [
        (1, 0.01),
        (2, 0.01),
        (3, 0.01),
        (1, 0.25),
        (2, 0.25),
        (3, 0.25),
    ] {
        let r = oracle::grid_max(n, step).map_err(|e| e.to_string())?;
        let bound = signscheme::q_bound(n) as f64;
        ensure(r.best_value == bound && r.within_bound, || {
            format!(
                "grid n={n} step={step}: best {} vs bound {bound}",
                r.best_value
            )
        })?;
        let candidates: Vec<Vec<f64>> = candidate_maximizers::<f64>(n)
            .unwrap()
            .into_iter()
            .map(|p| p.into_inner())
            .collect();
        ensure(candidates.contains(&r.best_point), || {
            format!("grid n={n}: best at {:?}", r.best_point)
        })?;
    }
    let m1 = oracle::grid_max(1, 0.01).unwrap().best_value;
    let m2 = oracle::grid_max(2, 0.01).unwrap().best_value;
    ensure(m1 == 2.0 && m2 == 2.0, || format!("M1 = {m1}, M2 = {m2}"))?;
    Ok(format!("exact candidates n<=20, 10^6 samples/n for n<=10 (max excess {worst:e}), grids n<=3; M1 = M2 = 2"))
}

fn elementary_inequalities() -> Outcome {
    let r = oracle::verify_inequalities(100_000, 0x1A1A).map_err(|e| e.to_string())?;
    ensure(r.violations.is_empty(), || {
        format!(
            "{} violations, first {:?}",
            r.violations.len(),
            r.violations.first()
        )
    })?;
    ensure(r.max_residual <= FACTOR_TOL, || {
        format!("residual {}", r.max_residual)
    })?;
    ensure(r.evaluations == 4 * 100_008, || {
        format!("{} checks", r.evaluations)
    })?;
    Ok(format!(
        "100000 triples + 8 corners, max residual {:e}",
        r.max_residual
    ))
}

fn scheme_lemmas() -> Outcome {
    let r = oracle::verify_lemmas(10, 0).map_err(|e| e.to_string())?;
    ensure(r.violations.is_empty(), || {
        format!(
            "{} violations, first {:?}",
            r.violations.len(),
            r.violations.first()
        )
    })?;
    ensure(r.vectors == 2046, || format!("{} vectors", r.vectors))?;
    Ok(r.to_string())
}

fn move_monotonicity() -> Outcome {
    let r = oracle::verify_monotonicity(6, 100, 0xF00D).map_err(|e| e.to_string())?;
    ensure(r.violations.is_empty(), || {
        format!(
            "{} violations, first {:?}",
            r.violations.len(),
            r.violations.first()
        )
    })?;
    ensure(r.vectors == 126, || format!("{} vectors", r.vectors))?;
    Ok(r.to_string())
}

fn p_q_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB41D6E);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 10_000 {
        let n = rng.gen_range(2..=10);
        let mut mags: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.gen_range(-3.0..=3.0)))
            .collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if mags.windows(2).any(|w| w[0] >= w[1]) {
            continue;
        }
        let y: Vec<f64> = mags
            .into_iter()
            .map(|m| if rng.gen() { m } else { -m })
            .collect();
        let y = YTuple::new(y).map_err(|e| e.to_string())?;
        let p = eval_p(&y);
        let q = eval_q(&change_of_variables(&y));
        let rel = (p - q).abs() / p.abs().max(f64::MIN_POSITIVE);
        ensure(rel <= 1e-9, || {
            format!("{:?}: P = {p}, Q = {q}", y.coords())
        })?;
        worst = worst.max(rel);
        count += 1;
    }
    Ok(format!("10000 tuples, max relative error {worst:e}"))
}

fn discriminant_calculator() -> Outcome {
    let b = discriminant_bound(&BoundInput::new(2, 1.0, Some(1.0)).unwrap())
        .map_err(|e| e.to_string())?;
    // sqrt(1 * (8 - 2) / 3) * (sqrt(2) * 1)^(1/1) + floor(2/2) * ln 4
    let independent = 2f64.sqrt() * 2f64.sqrt() + 1.0 * 4f64.ln();
    ensure((b.bound - independent).abs() <= 1e-12, || {
        format!("{} vs {independent}", b.bound)
    })?;
    ensure((b.bound - (2.0 + 4f64.ln())).abs() <= 1e-12, || {
        format!("{} vs 2 + ln 4", b.bound)
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(0xD15C);
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let r1 = rng.gen_range(0.01..50.0);
        let r2 = r1 * rng.gen_range(1.001..3.0);
        let g1 = rng.gen_range(0.5..4.0);
        let g2 = g1 * rng.gen_range(1.001..3.0);
        let at = |r: f64, g: f64| {
            discriminant_bound(&BoundInput::new(n, r, Some(g)).unwrap())
                .unwrap()
                .bound
        };
        ensure(at(r1, g1) < at(r2, g1), || {
            format!("not increasing in R_K at n={n}, R={r1}, {r2}")
        })?;
        ensure(at(r1, g1) < at(r1, g2), || {
            format!("not increasing in gamma at n={n}, g={g1}, {g2}")
        })?;
    }
    Ok(format!(
        "n=2, R_K=1, gamma=1 gives {:.15}; monotone at 100 random inputs",
        b.bound
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "1 exhaustive certificate soundness n<=12",
            exhaustive_soundness,
        ),
        ("2 golden trace for (+,-,+,+,-,+,+)", worked_trace),
        ("3 maximum of Q_n at desk scale", maximum_of_q),
        ("4 elementary inequalities", elementary_inequalities),
        ("5 scheme lemmas exhaustive n<=10", scheme_lemmas),
        ("6 move monotonicity n<=6", move_monotonicity),
        ("7 P/Q bridge", p_q_bridge),
        ("8 discriminant bound calculator", discriminant_calculator),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!(
                "PASS criterion {name} ({:.2}s): {detail}",
                start.elapsed().as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL criterion {name} ({:.2}s): {why}",
                    start.elapsed().as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
