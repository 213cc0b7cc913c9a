use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use signscheme::evaluate::{FACTOR_TOL, PRODUCT_TOL};
use signscheme::scalar::exact_from_f64;
use signscheme::{
    build_certificate, chamber_of, eval_f, eval_factor, eval_q, Certificate, Exact, Move, Sign,
    SignVector, TriangularScheme, XPoint, ZPoint,
};

fn sign_vector(max: usize) -> impl Strategy<Value = SignVector> {
    prop::collection::vec(prop::bool::ANY, 1..=max).prop_map(|bits| {
        SignVector::new(
            bits.into_iter()
                .map(|b| if b { Sign::Plus } else { Sign::Minus })
                .collect(),
        )
        .unwrap()
    })
}

fn any_scheme(max: usize) -> impl Strategy<Value = TriangularScheme> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::ANY, n * (n + 1) / 2).prop_map(move |bits| {
            let mut it = bits.into_iter();
            let rows = (1..=n)
                .map(|i| {
                    (i..=n)
                        .map(|_| {
                            if it.next().unwrap() {
                                Sign::Plus
                            } else {
                                Sign::Minus
                            }
                        })
                        .collect()
                })
                .collect();
            TriangularScheme::from_rows(rows).unwrap()
        })
    })
}

fn unit_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, n)
}

/// Every structurally valid move of dimension `n`.
fn all_moves(n: usize) -> Vec<Move> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            out.push(Move::point(i, j));
            for j2 in j + 1..=n {
                out.push(Move::horizontal(i, j, j2));
            }
            for i2 in i + 1..=j {
                out.push(Move::vertical(i, i2, j));
                for j2 in j + 1..=n {
                    out.push(Move::square(i, i2, j, j2));
                }
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn generated_entries_are_partial_products(eps in sign_vector(24)) {
        let c = TriangularScheme::generate(&eps);
        let s = eps.as_slice();
        for p in c.positions() {
            let direct = s[p.i - 1..p.j].iter().fold(1i64, |a, e| a * e.to_i64());
            prop_assert_eq!(c.at(p.i, p.j).to_i64(), direct);
        }
        for k in 1..=eps.len() {
            prop_assert_eq!(c.at(k, k), s[k - 1]);
        }
    }

    #[test]
    fn wrong_set_empty_iff_reference(eps in sign_vector(16)) {
        let c = TriangularScheme::generate(&eps);
        let is_ref = eps.as_slice().iter().all(|s| s.is_minus());
        prop_assert_eq!(c.wrong_set().is_empty(), is_ref);
        prop_assert_eq!(c == TriangularScheme::reference(eps.len()).unwrap(), is_ref);
    }

    #[test]
    fn flipping_touched_positions_twice_is_identity(c in any_scheme(7), pick in any::<prop::sample::Index>()) {
        let moves = all_moves(c.dimension());
        let mv = moves[pick.index(moves.len())];
        let once = c.with_flipped(&mv.flipped_positions()).unwrap();
        prop_assert_eq!(once.with_flipped(&mv.flipped_positions()).unwrap(), c.clone());
        let differing = c.positions().filter(|p| c.at(p.i, p.j) != once.at(p.i, p.j)).count();
        prop_assert_eq!(differing, mv.flipped_positions().len());
    }

    #[test]
    fn applicable_moves_never_decrease_f(
        c in any_scheme(7),
        zs in prop::collection::vec(unit_point(7), 8),
    ) {
        let n = c.dimension();
        for mv in all_moves(n) {
            if !mv.preconditions_hold(&c).unwrap() {
                continue;
            }
            let next = mv.apply(&c).unwrap();
            for z in &zs {
                let z = ZPoint::new(z[..n].to_vec()).unwrap();
                let before = eval_f(&c, &z).unwrap();
                let after = eval_f(&next, &z).unwrap();
                prop_assert!(before <= after + PRODUCT_TOL, "{} : {} > {}", mv, before, after);
                let local: f64 = mv
                    .flipped_positions()
                    .iter()
                    .map(|p| eval_factor(&c, &z, p.i, p.j).unwrap())
                    .product();
                prop_assert!(local <= 1.0 + FACTOR_TOL, "{} local product {}", mv, local);
            }
        }
    }

    #[test]
    fn certificate_moves_commute(eps in sign_vector(12), seed in any::<u64>()) {
        let cert = build_certificate(&eps).unwrap();
        let mut moves = cert.moves.clone();
        moves.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut c = TriangularScheme::generate(&eps);
        for mv in &moves {
            c = mv.apply(&c).unwrap();
        }
        prop_assert!(c.is_reference());
    }

    #[test]
    fn certificate_json_round_trips(eps in sign_vector(14)) {
        let cert = build_certificate(&eps).unwrap();
        prop_assert_eq!(Certificate::from_json(&cert.to_json()).unwrap(), cert);
    }

    #[test]
    fn q_is_nonnegative_on_cube(x in prop::collection::vec(-1.0f64..=1.0, 1..12)) {
        prop_assert!(eval_q(&XPoint::new(x).unwrap()) >= 0.0);
    }

    #[test]
    fn chamber_identity_is_exact_over_rationals(x in prop::collection::vec(-1.0f64..=1.0, 1..7)) {
        let exact: Vec<Exact> = x.iter().map(|&v| exact_from_f64(v).unwrap()).collect();
        let x = XPoint::new(exact).unwrap();
        let (eps, z) = chamber_of(&x);
        prop_assert_eq!(eval_q(&x), eval_f(&TriangularScheme::generate(&eps), &z).unwrap());
    }

    #[test]
    fn reference_scheme_stays_under_bound(z in prop::collection::vec(0.0f64..=1.0, 1..12)) {
        let n = z.len();
        let c = TriangularScheme::reference(n).unwrap();
        let v = eval_f(&c, &ZPoint::new(z).unwrap()).unwrap();
        prop_assert!(v <= signscheme::q_bound(n) as f64 + PRODUCT_TOL);
    }
}
