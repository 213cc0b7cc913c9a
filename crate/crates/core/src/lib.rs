//! Triangular sign schemes generated by sign vectors, the four monotone
//! rewrite moves between them, certificates that rewrite any generated
//! scheme into the alternating scheme `C₋`, and numerical checks of the
//! resulting bound `max Q_n = 2^⌊(n+1)/2⌋` on `[-1, 1]^n`.
//!
//! Evaluators are generic over [`Scalar`]; the aliases below fix the two
//! modes used throughout: `f64` for sampling and [`Exact`] rationals for
//! identities that must hold with no tolerance.

pub mod cli;
pub mod discriminant;
pub mod error;
pub mod evaluate;
pub mod moves;
pub mod normalize;
pub mod oracle;
pub mod scalar;
pub mod scheme;

pub use error::{Error, Result};
pub use evaluate::{
    chamber_of, change_of_variables, eval_f, eval_factor, eval_p, eval_q, lemma1_check, q_bound,
    Inequality, InequalityOutcome, XPoint, YTuple, ZPoint,
};
pub use moves::{apply_move, preconditions_hold, Certificate, Move, MoveKind};
pub use normalize::{
    build_certificate, check_certificate, check_certificate_with, trace_build, CheckMode,
    CheckReport, TraceStep,
};
pub use scalar::{Exact, Scalar};
pub use scheme::{Position, Sign, SignVector, TriangularScheme, WrongCounts, WrongSet};

pub type XPoint64 = XPoint<f64>;
pub type ZPoint64 = ZPoint<f64>;
pub type YTuple64 = YTuple<f64>;
pub type XPointExact = XPoint<Exact>;
pub type ZPointExact = ZPoint<Exact>;
pub type YTupleExact = YTuple<Exact>;
