//! Upper bound on `log|d_K|` in terms of the regulator, for totally real
//! primitive fields of degree `n >= 2`:
//!
//! `log|d_K| <= sqrt(γ_{n-1} (n³-n)/3) · (√n R_K)^{1/(n-1)} + ⌊n/2⌋ log 4`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `γ_d^d` for `d = 1..=8`: 1, 4/3, 2, 4, 8, 64/3, 64, 256.
const HERMITE_POWERS: [f64; 8] = [1.0, 4.0 / 3.0, 2.0, 4.0, 8.0, 64.0 / 3.0, 64.0, 256.0];

/// Largest dimension with a built-in Hermite constant.
pub const HERMITE_TABLE_MAX: usize = HERMITE_POWERS.len();

/// Known Hermite constant `γ_d`, `1 <= d <= 8`.
pub fn hermite_constant(d: usize) -> Option<f64> {
    let power = *HERMITE_POWERS.get(d.checked_sub(1)?)?;
    Some(power.powf(1.0 / d as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HermiteSource {
    Table,
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInput {
    pub n: usize,
    pub regulator: f64,
    pub hermite: Option<f64>,
}

impl BoundInput {
    pub fn new(n: usize, regulator: f64, hermite: Option<f64>) -> Result<BoundInput> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "field degree must be at least 2, got {n}"
            )));
        }
        if !(regulator > 0.0 && regulator.is_finite()) {
            return Err(Error::Domain(format!(
                "regulator must be positive, got {regulator}"
            )));
        }
        if let Some(g) = hermite {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::Domain(format!(
                    "Hermite constant must be positive, got {g}"
                )));
            }
        }
        Ok(BoundInput {
            n,
            regulator,
            hermite,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantBound {
    pub n: usize,
    pub regulator: f64,
    pub hermite: f64,
    pub hermite_source: HermiteSource,
    /// `sqrt(γ_{n-1} (n³-n)/3) · (√n R_K)^{1/(n-1)}`
    pub lattice_term: f64,
    /// `⌊n/2⌋ log 4`
    pub additive_term: f64,
    pub bound: f64,
    /// `n log n`, the additive constant from the older `n^{n/2}` estimate.
    pub older_additive_term: f64,
    pub older_bound: f64,
}

pub fn discriminant_bound(input: &BoundInput) -> Result<DiscriminantBound> {
    let n = input.n;
    let (hermite, hermite_source) = match input.hermite {
        Some(g) => (g, HermiteSource::User),
        None => (
            hermite_constant(n - 1).ok_or_else(|| {
                Error::Domain(format!(
                    "no built-in Hermite constant for dimension {}; pass it explicitly",
                    n - 1
                ))
            })?,
            HermiteSource::Table,
        ),
    };
    let nf = n as f64;
    let lattice_term = (hermite * (nf.powi(3) - nf) / 3.0).sqrt()
        * (nf.sqrt() * input.regulator).powf(1.0 / (nf - 1.0));
    let additive_term = (n / 2) as f64 * 4f64.ln();
    let older_additive_term = nf * nf.ln();
    Ok(DiscriminantBound {
        n,
        regulator: input.regulator,
        hermite,
        hermite_source,
        lattice_term,
        additive_term,
        bound: lattice_term + additive_term,
        older_additive_term,
        older_bound: lattice_term + older_additive_term,
    })
}

impl fmt::Display for DiscriminantBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.n - 1;
        let source = match self.hermite_source {
            HermiteSource::Table => "built-in table",
            HermiteSource::User => "user supplied",
        };
        writeln!(f, "log|d_K| <= {:.12}", self.bound)?;
        writeln!(
            f,
            "  lattice term   sqrt(gamma_{d} (n^3-n)/3) (sqrt(n) R_K)^(1/{d}) = {:.12}",
            self.lattice_term
        )?;
        writeln!(
            f,
            "  additive term  floor(n/2) log 4 = {:.12}",
            self.additive_term
        )?;
        writeln!(f, "  gamma_{d} = {:.12} ({source})", self.hermite)?;
        writeln!(
            f,
            "  with additive term n log n = {:.12} instead: {:.12}",
            self.older_additive_term, self.older_bound
        )?;
        write!(
            f,
            "note: applies only to totally real primitive fields of degree {}",
            self.n
        )
    }
}
