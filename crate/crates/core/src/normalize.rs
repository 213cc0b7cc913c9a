//! Column-by-column construction of move certificates that turn `C(ε)` into `C₋`,
//! together with an independent certificate checker and a step trace.
//!
//! Columns are processed left to right. For column `k` the moves found for the
//! first `k-1` columns are kept; each wrong `−` of the new column is fixed by
//! scanning bottom to top, either by adding a `Vertical` move inside the
//! column (when `V(i,k) > 0` in the original scheme) or by extending an
//! earlier `Point(i;j)` to `Horizontal(i;j,k)` or an earlier
//! `Vertical(i',i;j)` to `Square(i',i;j,k)` (when `V(i,k) < 0`, taking the
//! greatest eligible `j`). Remaining wrong `+` get `Point` moves.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moves::{Certificate, Move};
use crate::scheme::{Position, Sign, SignVector, TriangularScheme};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TraceAction {
    /// New `Vertical` inside the current column.
    AddVertical { mv: Move },
    /// An earlier move extended into the current column.
    Substitute { from: Move, to: Move },
    /// `Point` for a wrong `+` left over in the current column.
    AddPoint { mv: Move },
    /// Column finished; the move list is the one for this dimension.
    LevelComplete,
}

impl fmt::Display for TraceAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceAction::AddVertical { mv } => write!(f, "add {mv}"),
            TraceAction::Substitute { from, to } => write!(f, "replace {from} by {to}"),
            TraceAction::AddPoint { mv } => write!(f, "add {mv}"),
            TraceAction::LevelComplete => write!(f, "complete"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub level: usize,
    /// Working copy of column `level` after the action, top row first.
    pub column: Vec<Sign>,
    /// Rows of the column flipped by this action.
    pub flipped: Vec<usize>,
    pub moves: Vec<Move>,
    pub action: TraceAction,
}

struct Builder<'a> {
    scheme: TriangularScheme,
    eps: &'a SignVector,
    moves: Vec<Move>,
    trace: Option<Vec<TraceStep>>,
}

fn is_wrong_minus(col: &[Sign], row: usize, k: usize) -> bool {
    col[row - 1] == Sign::Minus && Sign::reference(row, k) == Sign::Plus
}

fn is_wrong_plus(col: &[Sign], row: usize, k: usize) -> bool {
    col[row - 1] == Sign::Plus && Sign::reference(row, k) == Sign::Minus
}

impl Builder<'_> {
    fn record(&mut self, level: usize, column: &[Sign], flipped: Vec<usize>, action: TraceAction) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceStep {
                level,
                column: column.to_vec(),
                flipped,
                moves: self.moves.clone(),
                action,
            });
        }
    }

    fn process_column(&mut self, k: usize) -> Result<()> {
        let mut col = self.scheme.column(k)?;
        for i in (1..=k).rev() {
            if !is_wrong_minus(&col, i, k) {
                continue;
            }
            let v = self.scheme.vertical_sum(i, k)?;
            if v > 0 {
                let i2 = (i + 1..=k)
                    .find(|&r| is_wrong_plus(&col, r, k))
                    .ok_or_else(|| {
                        Error::AlgorithmInvariant(format!(
                            "{}: V({i},{k}) = {v} > 0 but no wrong + below row {i}",
                            self.eps
                        ))
                    })?;
                let mv = Move::vertical(i, i2, k);
                self.moves.push(mv);
                col[i - 1] = -col[i - 1];
                col[i2 - 1] = -col[i2 - 1];
                self.record(k, &col, vec![i, i2], TraceAction::AddVertical { mv });
            } else if v < 0 {
                let (slot, from) = self
                    .moves
                    .iter()
                    .enumerate()
                    .filter_map(|(t, m)| match *m {
                        Move::Point { i: r, j } if r == i && j < k => Some((t, j, *m)),
                        Move::Vertical { i2, j, .. } if i2 == i && j < k => Some((t, j, *m)),
                        _ => None,
                    })
                    .max_by_key(|&(_, j, _)| j)
                    .map(|(t, _, m)| (t, m))
                    .ok_or_else(|| {
                        Error::AlgorithmInvariant(format!(
                            "{}: V({i},{k}) = {v} < 0 but no Point({i};j) or Vertical(i',{i};j) to extend",
                            self.eps
                        ))
                    })?;
                let (to, flipped) = match from {
                    Move::Point { j, .. } => (Move::horizontal(i, j, k), vec![i]),
                    Move::Vertical { i: top, j, .. } => {
                        if !is_wrong_plus(&col, top, k) {
                            return Err(Error::AlgorithmInvariant(format!(
                                "{}: fourth corner ({top},{k}) of Square({top},{i};{j},{k}) is not a wrong +",
                                self.eps
                            )));
                        }
                        (Move::square(top, i, j, k), vec![top, i])
                    }
                    _ => unreachable!("only Point and Vertical moves are extension targets"),
                };
                self.moves[slot] = to;
                for &r in &flipped {
                    col[r - 1] = -col[r - 1];
                }
                self.record(k, &col, flipped, TraceAction::Substitute { from, to });
            } else {
                return Err(Error::AlgorithmInvariant(format!(
                    "{}: V({i},{k}) = 0 at a wrong −",
                    self.eps
                )));
            }
        }
        for i in 1..=k {
            if is_wrong_plus(&col, i, k) {
                let mv = Move::point(i, k);
                self.moves.push(mv);
                col[i - 1] = Sign::Minus;
                self.record(k, &col, vec![i], TraceAction::AddPoint { mv });
            }
        }
        self.record(k, &col, vec![], TraceAction::LevelComplete);
        Ok(())
    }
}

fn run(eps: &SignVector, trace: bool) -> Result<(Vec<Move>, Option<Vec<TraceStep>>)> {
    let mut b = Builder {
        scheme: TriangularScheme::generate(eps),
        eps,
        moves: Vec::new(),
        trace: trace.then(Vec::new),
    };
    for k in 1..=eps.len() {
        b.process_column(k)?;
    }
    Ok((b.moves, b.trace))
}

/// Builds the certificate turning `C(eps)` into `C₋`.
pub fn build_certificate(eps: &SignVector) -> Result<Certificate> {
    let (moves, _) = run(eps, false)?;
    Ok(Certificate::new(eps.clone(), moves))
}

/// Same algorithm as [`build_certificate`], recording every action.
pub fn trace_build(eps: &SignVector) -> Result<Vec<TraceStep>> {
    Ok(run(eps, true)?.1.expect("trace requested"))
}

/// Move lists at the end of each level, `L⁽¹⁾ … L⁽ⁿ⁾`.
pub fn level_lists(trace: &[TraceStep]) -> Vec<Vec<Move>> {
    trace
        .iter()
        .filter(|s| s.action == TraceAction::LevelComplete)
        .map(|s| s.moves.clone())
        .collect()
}

/// How move preconditions are validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Each move against the scheme produced by its predecessors.
    #[default]
    Sequential,
    /// Every move against `C(eps)`; sound only together with disjointness.
    Initial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCheck {
    pub index: usize,
    #[serde(rename = "move")]
    pub mv: Move,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub mode: CheckMode,
    pub dimension_ok: bool,
    pub disjoint: bool,
    /// Positions touched by more than one move.
    pub overlaps: Vec<Position>,
    pub moves: Vec<MoveCheck>,
    pub preconditions_ok: bool,
    pub reaches_reference: bool,
    /// Wrong positions left in the final scheme.
    pub remaining_wrong: Vec<Position>,
    pub accepted: bool,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "dimension matches: {}", yn(self.dimension_ok))?;
        writeln!(f, "disjoint moves:    {}", yn(self.disjoint))?;
        for p in &self.overlaps {
            writeln!(f, "  overlap at {p}")?;
        }
        writeln!(f, "preconditions:     {}", yn(self.preconditions_ok))?;
        for m in self.moves.iter().filter(|m| !m.valid) {
            writeln!(
                f,
                "  move {} {}: {}",
                m.index + 1,
                m.mv,
                m.error.as_deref().unwrap_or("invalid")
            )?;
        }
        writeln!(
            f,
            "reaches C\u{2212}:        {}",
            yn(self.reaches_reference)
        )?;
        if !self.remaining_wrong.is_empty() {
            let ps: Vec<String> = self
                .remaining_wrong
                .iter()
                .map(Position::to_string)
                .collect();
            writeln!(f, "  wrong entries remain at {}", ps.join(" "))?;
        }
        write!(
            f,
            "{}",
            if self.accepted {
                "ACCEPTED"
            } else {
                "REJECTED"
            }
        )
    }
}

pub fn check_certificate(eps: &SignVector, cert: &Certificate) -> CheckReport {
    check_certificate_with(eps, cert, CheckMode::Sequential)
}

pub fn check_certificate_with(
    eps: &SignVector,
    cert: &Certificate,
    mode: CheckMode,
) -> CheckReport {
    let dimension_ok = cert.dimension == eps.len() && cert.source == *eps;
    let n = eps.len();

    let mut seen = BTreeSet::new();
    let mut overlaps = BTreeSet::new();
    for m in &cert.moves {
        for p in m.flipped_positions() {
            if !seen.insert(p) {
                overlaps.insert(p);
            }
        }
    }
    let disjoint = overlaps.is_empty();

    let initial = TriangularScheme::generate(eps);
    let mut current = initial.clone();
    let mut checks = Vec::with_capacity(cert.moves.len());
    for (index, mv) in cert.moves.iter().enumerate() {
        let against = match mode {
            CheckMode::Sequential => &current,
            CheckMode::Initial => &initial,
        };
        let outcome = mv
            .apply(against)
            .and_then(|_| current.with_flipped(&mv.flipped_positions()));
        checks.push(match outcome {
            Ok(next) => {
                current = next;
                MoveCheck {
                    index,
                    mv: *mv,
                    valid: true,
                    error: None,
                }
            }
            Err(e) => MoveCheck {
                index,
                mv: *mv,
                valid: false,
                error: Some(e.to_string()),
            },
        });
    }
    let preconditions_ok = checks.iter().all(|c| c.valid);
    let remaining_wrong: Vec<Position> = current.wrong_set().into_iter().collect();
    let reaches_reference = current.dimension() == n && remaining_wrong.is_empty();
    let accepted = dimension_ok && disjoint && preconditions_ok && reaches_reference;
    CheckReport {
        mode,
        dimension_ok,
        disjoint,
        overlaps: overlaps.into_iter().collect(),
        moves: checks,
        preconditions_ok,
        reaches_reference,
        remaining_wrong,
        accepted,
    }
}

/// Plain-text rendering of a trace: for each level the partial scheme, the
/// working column with flipped entries in brackets, and the move list.
pub fn render_trace(eps: &SignVector, trace: &[TraceStep]) -> String {
    let full = TriangularScheme::generate(eps);
    let mut out = String::new();
    let mut level = 0;
    for step in trace {
        if step.level != level {
            level = step.level;
            out.push_str(&format!("level {level}\n"));
            let original = full.column(level).expect("level within dimension");
            for r in 1..=level {
                let left: Vec<String> = (r..level).map(|c| full.at(r, c).to_string()).collect();
                let pad = "  ".repeat(r - 1);
                let body = left.join(" ");
                let sep = if body.is_empty() { "" } else { " " };
                out.push_str(&format!("  {pad}{body}{sep}| {}\n", original[r - 1]));
            }
        }
        match step.action {
            TraceAction::LevelComplete => {
                let list: Vec<String> = step.moves.iter().map(Move::to_string).collect();
                out.push_str(&format!("  L({level}) = {{{}}}\n", list.join(", ")));
            }
            ref action => {
                let col: Vec<String> = step
                    .column
                    .iter()
                    .enumerate()
                    .map(|(r, s)| {
                        if step.flipped.contains(&(r + 1)) {
                            format!("[{s}]")
                        } else {
                            s.to_string()
                        }
                    })
                    .collect();
                out.push_str(&format!("  {action}; column: {}\n", col.join(" ")));
            }
        }
    }
    out
}
