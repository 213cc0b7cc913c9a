//! Evaluation of `P_n`, `Q_n`, `F_C` and their factors, generic over [`Scalar`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scheme::{Sign, SignVector, TriangularScheme};

/// Absolute tolerance for single factors and factor-pair bounds.
pub const FACTOR_TOL: f64 = 1e-12;
/// Absolute tolerance for full products.
pub const PRODUCT_TOL: f64 = 1e-9;
/// Slack allowed on the cube boundary for floating-point coordinates.
pub const BOX_SLACK: f64 = 1e-15;

/// A point of the cube `[-1, 1]^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct XPoint<S>(Vec<S>);

/// A point of the unit cube `[0, 1]^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct ZPoint<S>(Vec<S>);

/// A tuple `y` with `0 < |y_1| < |y_2| < … < |y_n|`, `n >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct YTuple<S>(Vec<S>);

impl<S: Scalar> XPoint<S> {
    // negated comparisons so that NaN is rejected
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(coords: Vec<S>) -> Result<XPoint<S>> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let limit = S::one() + S::slack(BOX_SLACK);
        if let Some((k, _)) = coords.iter().enumerate().find(|(_, c)| !(c.abs() <= limit)) {
            return Err(Error::Domain(format!(
                "x_{} = {:?} lies outside [-1, 1]",
                k + 1,
                coords[k]
            )));
        }
        Ok(XPoint(coords))
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }
}

impl<S: Scalar> ZPoint<S> {
    pub fn new(coords: Vec<S>) -> Result<ZPoint<S>> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let limit = S::one() + S::slack(BOX_SLACK);
        if let Some((k, _)) = coords
            .iter()
            .enumerate()
            .find(|(_, c)| !(**c >= S::zero() && **c <= limit))
        {
            return Err(Error::Domain(format!(
                "z_{} = {:?} lies outside [0, 1]",
                k + 1,
                coords[k]
            )));
        }
        Ok(ZPoint(coords))
    }

    pub fn zeros(n: usize) -> Result<ZPoint<S>> {
        ZPoint::new(vec![S::zero(); n])
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }
}

impl<S: Scalar> YTuple<S> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(coords: Vec<S>) -> Result<YTuple<S>> {
        if coords.len() < 2 {
            return Err(Error::Domain(format!(
                "need at least two y values, got {}",
                coords.len()
            )));
        }
        if coords[0].is_zero() {
            return Err(Error::Domain("y_1 must be non-zero".into()));
        }
        for k in 1..coords.len() {
            if !(coords[k - 1].abs() < coords[k].abs()) {
                return Err(Error::Domain(format!(
                    "|y_{}| < |y_{}| fails: {:?} vs {:?}",
                    k,
                    k + 1,
                    coords[k - 1],
                    coords[k]
                )));
            }
        }
        Ok(YTuple(coords))
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }
}

/// `P_n(y) = Π_{i<j} (1 - y_i / y_j)`.
pub fn eval_p<S: Scalar>(y: &YTuple<S>) -> S {
    let c = y.coords();
    let mut acc = S::one();
    for j in 1..c.len() {
        for i in 0..j {
            acc = acc * (S::one() - c[i].clone() / c[j].clone());
        }
    }
    acc
}

/// Ratios `x_i = y_i / y_{i+1}`.
pub fn change_of_variables<S: Scalar>(y: &YTuple<S>) -> XPoint<S> {
    let c = y.coords();
    XPoint(c.windows(2).map(|w| w[0].clone() / w[1].clone()).collect())
}

/// `Q_n(x) = Π_{i<=j} (1 - x_i · … · x_j)`.
pub fn eval_q<S: Scalar>(x: &XPoint<S>) -> S {
    let c = x.coords();
    let mut acc = S::one();
    for i in 0..c.len() {
        let mut run = S::one();
        for v in &c[i..] {
            run = run * v.clone();
            acc = acc * (S::one() - run.clone());
        }
    }
    acc
}

/// Splits `x` into its chamber: `ε_i = sign(x_i)` with `sign(0) = +1`, and `z_i = |x_i|`.
pub fn chamber_of<S: Scalar>(x: &XPoint<S>) -> (SignVector, ZPoint<S>) {
    let signs = x
        .coords()
        .iter()
        .map(|v| {
            if *v < S::zero() {
                Sign::Minus
            } else {
                Sign::Plus
            }
        })
        .collect();
    let z = x.coords().iter().map(|v| v.abs()).collect();
    (
        SignVector::new(signs).expect("XPoint is non-empty"),
        ZPoint(z),
    )
}

fn check_dims<S>(scheme: &TriangularScheme, z: &ZPoint<S>) -> Result<()> {
    if z.0.len() != scheme.dimension() {
        return Err(Error::DimensionMismatch {
            expected: scheme.dimension(),
            found: z.0.len(),
        });
    }
    Ok(())
}

fn signed<S: Scalar>(s: Sign, v: S) -> S {
    match s {
        Sign::Plus => v,
        Sign::Minus => -v,
    }
}

/// `F_C(z) = Π_{i<=j} (1 - C_{i,j} z_i · … · z_j)`.
pub fn eval_f<S: Scalar>(scheme: &TriangularScheme, z: &ZPoint<S>) -> Result<S> {
    check_dims(scheme, z)?;
    let c = z.coords();
    let n = c.len();
    let mut acc = S::one();
    for i in 1..=n {
        let mut run = S::one();
        for j in i..=n {
            run = run * c[j - 1].clone();
            acc = acc * (S::one() - signed(scheme.at(i, j), run.clone()));
        }
    }
    Ok(acc)
}

/// The single factor `1 - C_{i,j} z_i · … · z_j`.
pub fn eval_factor<S: Scalar>(
    scheme: &TriangularScheme,
    z: &ZPoint<S>,
    i: usize,
    j: usize,
) -> Result<S> {
    check_dims(scheme, z)?;
    let sign = scheme.get(i, j)?;
    let run = z.coords()[i - 1..j]
        .iter()
        .fold(S::one(), |a, v| a * v.clone());
    Ok(S::one() - signed(sign, run))
}

/// `2^⌊(n+1)/2⌋`, the maximum of `Q_n` on `[-1, 1]^n`.
pub fn q_bound(n: usize) -> u64 {
    1u64 << n.div_ceil(2)
}

/// The four elementary inequalities on `[0,1]^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Inequality {
    /// `(1-x)(1+xy) <= 1`
    A4,
    /// `(1-x)(1+xy) <= (1+x)(1-xy)`
    A5,
    /// `(1-y)(1+xy)(1+yz)(1-xyz) <= (1+y)(1-xy)(1-yz)(1+xyz)`
    A6,
    /// `(1-y)(1+xy)(1+yz)(1-xyz) <= 1`
    A7,
}

impl Inequality {
    pub const ALL: [Inequality; 4] = [
        Inequality::A4,
        Inequality::A5,
        Inequality::A6,
        Inequality::A7,
    ];

    pub fn from_number(k: u8) -> Result<Inequality> {
        match k {
            4 => Ok(Inequality::A4),
            5 => Ok(Inequality::A5),
            6 => Ok(Inequality::A6),
            7 => Ok(Inequality::A7),
            _ => Err(Error::Domain(format!("no inequality numbered {k}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityOutcome<S> {
    pub lhs: S,
    pub rhs: S,
    pub holds: bool,
    /// For `A6`: `(rhs - lhs) - 2y(1-x)(1-z)(1+x y^2 z)`, identically zero.
    pub residual: Option<S>,
}

pub fn lemma1_check<S: Scalar>(
    which: Inequality,
    x: S,
    y: S,
    z: S,
) -> Result<InequalityOutcome<S>> {
    for (name, v) in [("x", &x), ("y", &y), ("z", &z)] {
        if !(*v >= S::zero() && *v <= S::one()) {
            return Err(Error::Domain(format!("{name} = {v:?} lies outside [0, 1]")));
        }
    }
    let one = S::one;
    let xy = x.clone() * y.clone();
    let yz = y.clone() * z.clone();
    let xyz = xy.clone() * z.clone();
    let (lhs, rhs) = match which {
        Inequality::A4 => ((one() - x.clone()) * (one() + xy.clone()), one()),
        Inequality::A5 => (
            (one() - x.clone()) * (one() + xy.clone()),
            (one() + x.clone()) * (one() - xy.clone()),
        ),
        Inequality::A6 | Inequality::A7 => {
            let lhs = (one() - y.clone())
                * (one() + xy.clone())
                * (one() + yz.clone())
                * (one() - xyz.clone());
            let rhs = if which == Inequality::A6 {
                (one() + y.clone())
                    * (one() - xy.clone())
                    * (one() - yz.clone())
                    * (one() + xyz.clone())
            } else {
                one()
            };
            (lhs, rhs)
        }
    };
    let residual = (which == Inequality::A6).then(|| {
        let factored = S::two()
            * y.clone()
            * (one() - x.clone())
            * (one() - z.clone())
            * (one() + x.clone() * y.clone() * y.clone() * z.clone());
        rhs.clone() - lhs.clone() - factored
    });
    let holds = lhs <= rhs.clone() + S::slack(FACTOR_TOL);
    Ok(InequalityOutcome {
        lhs,
        rhs,
        holds,
        residual,
    })
}
