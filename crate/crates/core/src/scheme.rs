//! Sign vectors, triangular sign schemes and their combinatorial statistics.
//!
//! All public indices are 1-based: entry `(i, j)` exists for `1 <= i <= j <= n`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    /// The correct sign at `(i, j)`: `(-1)^(j-i+1)`.
    ///
    /// Equal to `(-1)^(i-j+1)` since both exponents have the same parity.
    pub fn reference(i: usize, j: usize) -> Sign {
        debug_assert!(i <= j);
        if (j - i + 1).is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '\u{2212}',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "1" | "+1" => Ok(Sign::Plus),
            "-" | "\u{2212}" | "-1" | "\u{2212}1" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("unrecognized sign token {other:?}"))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v)
            .ok_or_else(|| serde::de::Error::custom(format!("sign must be 1 or -1, got {v}")))
    }
}

/// A 1-based `(row, column)` position in a triangular scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub i: usize,
    pub j: usize,
}

impl Position {
    pub const fn new(i: usize, j: usize) -> Position {
        Position { i, j }
    }
}

impl From<(usize, usize)> for Position {
    fn from((i, j): (usize, usize)) -> Position {
        Position { i, j }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Generator `ε ∈ {±1}^n` of a scheme. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Sign>", into = "Vec<Sign>")]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(entries: Vec<Sign>) -> Result<SignVector> {
        if entries.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(SignVector(entries))
    }

    pub fn all_minus(n: usize) -> Result<SignVector> {
        SignVector::new(vec![Sign::Minus; n])
    }

    /// Vector whose k-th entry (1-based) is `−` iff bit `k-1` of `mask` is set.
    pub fn from_mask(n: usize, mask: u64) -> Result<SignVector> {
        if n > 64 {
            return Err(Error::Domain(format!(
                "mask enumeration supports n <= 64, got {n}"
            )));
        }
        SignVector::new(
            (0..n)
                .map(|k| {
                    if mask >> k & 1 == 1 {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                })
                .collect(),
        )
    }

    /// All `2^n` sign vectors of length `n`, in mask order.
    pub fn enumerate(n: usize) -> Result<impl Iterator<Item = SignVector>> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if n >= 64 {
            return Err(Error::Resource(format!(
                "cannot enumerate 2^{n} sign vectors"
            )));
        }
        Ok((0..1u64 << n).map(move |m| SignVector::from_mask(n, m).expect("n >= 1")))
    }

    pub fn from_ints(values: &[i64]) -> Result<SignVector> {
        let entries = values
            .iter()
            .map(|&v| {
                Sign::from_i64(v)
                    .ok_or_else(|| Error::Parse(format!("sign must be 1 or -1, got {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SignVector::new(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Sign] {
        &self.0
    }

    /// 1-based access.
    pub fn get(&self, k: usize) -> Option<Sign> {
        k.checked_sub(1).and_then(|k| self.0.get(k)).copied()
    }

    /// The prefix of length `k`.
    pub fn truncated(&self, k: usize) -> Result<SignVector> {
        if k > self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: k,
            });
        }
        SignVector::new(self.0[..k].to_vec())
    }

    pub fn to_ints(&self) -> Vec<i64> {
        self.0.iter().map(|s| s.to_i64()).collect()
    }
}

impl TryFrom<Vec<Sign>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<Sign>) -> Result<SignVector> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<Sign> {
    fn from(v: SignVector) -> Vec<Sign> {
        v.0
    }
}

impl FromStr for SignVector {
    type Err = Error;

    /// Comma-separated tokens, each one of `+`, `-`, `1`, `-1`.
    fn from_str(s: &str) -> Result<SignVector> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::ZeroDimension);
        }
        SignVector::new(
            s.split(',')
                .map(str::parse)
                .collect::<Result<Vec<Sign>>>()?,
        )
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Upper-triangular array of signs `C[i][j]`, `1 <= i <= j <= n`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriangularScheme {
    n: usize,
    entries: Vec<Sign>,
}

/// Wrong counts around a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WrongCounts {
    /// Wrong `+` strictly left of the position in its row.
    pub h_plus: usize,
    /// Wrong `−` strictly left of the position in its row.
    pub h_minus: usize,
    /// Wrong `+` strictly below the position in its column.
    pub v_plus: usize,
    /// Wrong `−` strictly below the position in its column.
    pub v_minus: usize,
}

impl WrongCounts {
    pub fn horizontal(&self) -> i64 {
        self.h_plus as i64 - self.h_minus as i64
    }

    pub fn vertical(&self) -> i64 {
        self.v_plus as i64 - self.v_minus as i64
    }
}

pub type WrongSet = BTreeSet<Position>;

fn tri_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl TriangularScheme {
    /// Scheme generated by `eps`: `C[i][j] = ε_i · … · ε_j`.
    pub fn generate(eps: &SignVector) -> TriangularScheme {
        let n = eps.len();
        let s = eps.as_slice();
        let mut entries = Vec::with_capacity(tri_len(n));
        for i in 0..n {
            let mut acc = Sign::Plus;
            for &e in &s[i..] {
                acc = acc * e;
                entries.push(acc);
            }
        }
        TriangularScheme { n, entries }
    }

    /// The all-correct scheme `C₋`, generated by `(−1, …, −1)`.
    pub fn reference(n: usize) -> Result<TriangularScheme> {
        Ok(TriangularScheme::generate(&SignVector::all_minus(n)?))
    }

    /// Builds a scheme from rows; row `i` (1-based) must hold `n - i + 1` signs.
    pub fn from_rows(rows: Vec<Vec<Sign>>) -> Result<TriangularScheme> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut entries = Vec::with_capacity(tri_len(n));
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n - r {
                return Err(Error::DimensionMismatch {
                    expected: n - r,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(TriangularScheme { n, entries })
    }

    /// Parses rows such as `"+ + -"` separated by `/` or newlines.
    pub fn parse_rows(s: &str) -> Result<TriangularScheme> {
        let rows = s
            .split(['/', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(|r| {
                r.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<Sign>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TriangularScheme::from_rows(rows)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn contains(&self, p: Position) -> bool {
        1 <= p.i && p.i <= p.j && p.j <= self.n
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let r = i - 1;
        r * self.n - r * (r.saturating_sub(1)) / 2 + (j - i)
    }

    pub fn check(&self, p: Position) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Index(p, self.n))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Result<Sign> {
        self.check(Position::new(i, j))?;
        Ok(self.entries[self.offset(i, j)])
    }

    /// Unchecked 1-based access; panics outside the triangle.
    pub fn at(&self, i: usize, j: usize) -> Sign {
        assert!(
            self.contains(Position::new(i, j)),
            "({i},{j}) outside dimension {}",
            self.n
        );
        self.entries[self.offset(i, j)]
    }

    /// A copy with the given positions sign-flipped.
    pub fn with_flipped(&self, positions: &[Position]) -> Result<TriangularScheme> {
        let mut out = self.clone();
        for &p in positions {
            self.check(p)?;
            let k = out.offset(p.i, p.j);
            out.entries[k] = -out.entries[k];
        }
        Ok(out)
    }

    /// Leading `k × k` sub-scheme (the first `k` columns).
    pub fn leading(&self, k: usize) -> Result<TriangularScheme> {
        if k == 0 {
            return Err(Error::ZeroDimension);
        }
        if k > self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: k,
            });
        }
        let mut entries = Vec::with_capacity(tri_len(k));
        for i in 1..=k {
            for j in i..=k {
                entries.push(self.at(i, j));
            }
        }
        Ok(TriangularScheme { n: k, entries })
    }

    /// Column `j` from the top: `C[1][j], …, C[j][j]`.
    pub fn column(&self, j: usize) -> Result<Vec<Sign>> {
        self.check(Position::new(j, j))?;
        Ok((1..=j).map(|i| self.at(i, j)).collect())
    }

    pub fn row(&self, i: usize) -> Result<Vec<Sign>> {
        self.check(Position::new(i, i))?;
        Ok((i..=self.n).map(|j| self.at(i, j)).collect())
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        (1..=self.n).flat_map(move |i| (i..=self.n).map(move |j| Position::new(i, j)))
    }

    pub fn is_wrong(&self, i: usize, j: usize) -> bool {
        self.at(i, j) != Sign::reference(i, j)
    }

    /// Positions whose entry differs from `(-1)^(j-i+1)`.
    pub fn wrong_set(&self) -> WrongSet {
        self.positions()
            .filter(|p| self.is_wrong(p.i, p.j))
            .collect()
    }

    pub fn is_reference(&self) -> bool {
        self.positions().all(|p| !self.is_wrong(p.i, p.j))
    }

    /// `H(i,j) = Σ_{u=i}^{j-1} C[i][u]`.
    pub fn horizontal_sum(&self, i: usize, j: usize) -> Result<i64> {
        self.check(Position::new(i, j))?;
        Ok((i..j).map(|u| self.at(i, u).to_i64()).sum())
    }

    /// `V(i,j) = Σ_{v=i+1}^{j} C[v][j]`.
    pub fn vertical_sum(&self, i: usize, j: usize) -> Result<i64> {
        self.check(Position::new(i, j))?;
        Ok((i + 1..=j).map(|v| self.at(v, j).to_i64()).sum())
    }

    pub fn wrong_counts(&self, i: usize, j: usize) -> Result<WrongCounts> {
        self.check(Position::new(i, j))?;
        let mut c = WrongCounts::default();
        for k in i..j {
            if self.is_wrong(i, k) {
                match self.at(i, k) {
                    Sign::Plus => c.h_plus += 1,
                    Sign::Minus => c.h_minus += 1,
                }
            }
        }
        for k in i + 1..=j {
            if self.is_wrong(k, j) {
                match self.at(k, j) {
                    Sign::Plus => c.v_plus += 1,
                    Sign::Minus => c.v_minus += 1,
                }
            }
        }
        Ok(c)
    }

    /// Product of the four corners `C[i][j] C[i2][j] C[i][j2] C[i2][j2]`.
    ///
    /// Requires `i < i2 <= j < j2` so that all four corners lie in the triangle.
    pub fn square_sign_product(&self, i: usize, i2: usize, j: usize, j2: usize) -> Result<i64> {
        if !(i >= 1 && i < i2 && i2 <= j && j < j2) {
            return Err(Error::IndexPattern(format!(
                "square ({i},{i2};{j},{j2}) needs i < i' <= j < j'"
            )));
        }
        self.check(Position::new(i2, j2))?;
        Ok((self.at(i, j) * self.at(i2, j) * self.at(i, j2) * self.at(i2, j2)).to_i64())
    }
}

impl fmt::Display for TriangularScheme {
    /// One row per line; row `i` indented by `i-1` two-space steps.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            let row: Vec<String> = (i..=self.n).map(|j| self.at(i, j).to_string()).collect();
            if i > 1 {
                writeln!(f)?;
            }
            write!(f, "{}{}", "  ".repeat(i - 1), row.join(" "))?;
        }
        Ok(())
    }
}
