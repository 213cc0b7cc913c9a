//! The four sign-flip rewrites (Point, Horizontal, Vertical, Square) and certificates built from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{Position, Sign, SignVector, TriangularScheme};

/// A rewrite move with absolute 1-based indices.
///
/// Before the move the touched entries must read:
/// * `Point(i;j)`: `+` at `(i,j)`;
/// * `Horizontal(i;j,j2)`: `+` at `(i,j)`, `−` at `(i,j2)`;
/// * `Vertical(i,i2;j)`: `−` at `(i,j)`, `+` at `(i2,j)`;
/// * `Square(i,i2;j,j2)`: `−` at `(i,j)`, `+` at `(i,j2)`, `+` at `(i2,j)`, `−` at `(i2,j2)`.
///
/// Applying a move flips every touched entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "MoveRecord", try_from = "MoveRecord")]
pub enum Move {
    Point {
        i: usize,
        j: usize,
    },
    Horizontal {
        i: usize,
        j: usize,
        j2: usize,
    },
    Vertical {
        i: usize,
        i2: usize,
        j: usize,
    },
    Square {
        i: usize,
        i2: usize,
        j: usize,
        j2: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "P")]
    Point,
    #[serde(rename = "H")]
    Horizontal,
    #[serde(rename = "V")]
    Vertical,
    #[serde(rename = "S")]
    Square,
}

impl Move {
    pub fn point(i: usize, j: usize) -> Move {
        Move::Point { i, j }
    }

    pub fn horizontal(i: usize, j: usize, j2: usize) -> Move {
        Move::Horizontal { i, j, j2 }
    }

    pub fn vertical(i: usize, i2: usize, j: usize) -> Move {
        Move::Vertical { i, i2, j }
    }

    pub fn square(i: usize, i2: usize, j: usize, j2: usize) -> Move {
        Move::Square { i, i2, j, j2 }
    }

    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Point { .. } => MoveKind::Point,
            Move::Horizontal { .. } => MoveKind::Horizontal,
            Move::Vertical { .. } => MoveKind::Vertical,
            Move::Square { .. } => MoveKind::Square,
        }
    }

    /// Touched positions paired with the sign each must carry before the move.
    pub fn pattern(&self) -> Vec<(Position, Sign)> {
        use Sign::{Minus, Plus};
        let p = Position::new;
        match *self {
            Move::Point { i, j } => vec![(p(i, j), Plus)],
            Move::Horizontal { i, j, j2 } => vec![(p(i, j), Plus), (p(i, j2), Minus)],
            Move::Vertical { i, i2, j } => vec![(p(i, j), Minus), (p(i2, j), Plus)],
            Move::Square { i, i2, j, j2 } => vec![
                (p(i, j), Minus),
                (p(i, j2), Plus),
                (p(i2, j), Plus),
                (p(i2, j2), Minus),
            ],
        }
    }

    pub fn flipped_positions(&self) -> Vec<Position> {
        self.pattern().into_iter().map(|(p, _)| p).collect()
    }

    /// Largest column index touched.
    pub fn max_column(&self) -> usize {
        match *self {
            Move::Point { j, .. } | Move::Vertical { j, .. } => j,
            Move::Horizontal { j2, .. } | Move::Square { j2, .. } => j2,
        }
    }

    /// Checks index ordering and that every touched position lies in dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let ordered = match *self {
            Move::Point { i, j } => i >= 1 && i <= j,
            Move::Horizontal { i, j, j2 } => i >= 1 && i <= j && j < j2,
            Move::Vertical { i, i2, j } => i >= 1 && i < i2 && i2 <= j,
            Move::Square { i, i2, j, j2 } => i >= 1 && i < i2 && i2 <= j && j < j2,
        };
        if !ordered {
            return Err(Error::IndexPattern(format!(
                "{self} has out-of-order indices"
            )));
        }
        for p in self.flipped_positions() {
            if !(p.i >= 1 && p.i <= p.j && p.j <= n) {
                return Err(Error::Index(p, n));
            }
        }
        Ok(())
    }

    /// Whether the required sign pattern is present in `scheme`.
    pub fn preconditions_hold(&self, scheme: &TriangularScheme) -> Result<bool> {
        Ok(self.first_mismatch(scheme)?.is_none())
    }

    fn first_mismatch(&self, scheme: &TriangularScheme) -> Result<Option<(Position, Sign, Sign)>> {
        self.validate(scheme.dimension())?;
        Ok(self
            .pattern()
            .into_iter()
            .map(|(p, want)| (p, want, scheme.at(p.i, p.j)))
            .find(|&(_, want, found)| want != found))
    }

    /// New scheme with the touched entries flipped.
    pub fn apply(&self, scheme: &TriangularScheme) -> Result<TriangularScheme> {
        if let Some((position, expected, found)) = self.first_mismatch(scheme)? {
            return Err(Error::InvalidMove {
                mv: *self,
                position,
                expected,
                found,
            });
        }
        scheme.with_flipped(&self.flipped_positions())
    }
}

pub fn preconditions_hold(scheme: &TriangularScheme, mv: &Move) -> Result<bool> {
    mv.preconditions_hold(scheme)
}

pub fn apply_move(scheme: &TriangularScheme, mv: &Move) -> Result<TriangularScheme> {
    mv.apply(scheme)
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::Point { i, j } => write!(f, "Point({i};{j})"),
            Move::Horizontal { i, j, j2 } => write!(f, "Horizontal({i};{j},{j2})"),
            Move::Vertical { i, i2, j } => write!(f, "Vertical({i},{i2};{j})"),
            Move::Square { i, i2, j, j2 } => write!(f, "Square({i},{i2};{j},{j2})"),
        }
    }
}

/// Wire form of a move; field order fixed for byte-stable output.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRecord {
    kind: MoveKind,
    i: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i2: Option<usize>,
    j: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j2: Option<usize>,
}

impl From<Move> for MoveRecord {
    fn from(m: Move) -> MoveRecord {
        let kind = m.kind();
        match m {
            Move::Point { i, j } => MoveRecord {
                kind,
                i,
                i2: None,
                j,
                j2: None,
            },
            Move::Horizontal { i, j, j2 } => MoveRecord {
                kind,
                i,
                i2: None,
                j,
                j2: Some(j2),
            },
            Move::Vertical { i, i2, j } => MoveRecord {
                kind,
                i,
                i2: Some(i2),
                j,
                j2: None,
            },
            Move::Square { i, i2, j, j2 } => MoveRecord {
                kind,
                i,
                i2: Some(i2),
                j,
                j2: Some(j2),
            },
        }
    }
}

impl TryFrom<MoveRecord> for Move {
    type Error = String;

    fn try_from(r: MoveRecord) -> std::result::Result<Move, String> {
        match (r.kind, r.i2, r.j2) {
            (MoveKind::Point, None, None) => Ok(Move::point(r.i, r.j)),
            (MoveKind::Horizontal, None, Some(j2)) => Ok(Move::horizontal(r.i, r.j, j2)),
            (MoveKind::Vertical, Some(i2), None) => Ok(Move::vertical(r.i, i2, r.j)),
            (MoveKind::Square, Some(i2), Some(j2)) => Ok(Move::square(r.i, i2, r.j, j2)),
            (kind, i2, j2) => Err(format!(
                "move of kind {kind:?} has i2 {}, j2 {}",
                if i2.is_some() { "present" } else { "absent" },
                if j2.is_some() { "present" } else { "absent" },
            )),
        }
    }
}

/// An ordered move list claimed to turn `C(source)` into `C₋`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "n")]
    pub dimension: usize,
    #[serde(rename = "eps")]
    pub source: SignVector,
    pub moves: Vec<Move>,
}

impl Certificate {
    pub fn new(source: SignVector, moves: Vec<Move>) -> Certificate {
        Certificate {
            dimension: source.len(),
            source,
            moves,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moves.iter().map(Move::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
