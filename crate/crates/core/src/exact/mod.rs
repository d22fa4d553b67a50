//! Exact rational linear algebra: orientation signs, square solves and
//! homogeneous linear feasibility. Nothing here rounds.

mod int;
mod lp;
mod rational;
mod strict;

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use int::{det_sign as int_det_sign, det_value as int_det_value, lifted_det_sign, IntDir};
pub use lp::{feasible_direction, feasible_point, Constraint, LinearSystem, Relation};
pub use strict::{strict_direction, strict_direction_across};
pub use rational::{
    format_rational, parse_rational, primitive_integer, rational_from_int, Rational,
};
pub(crate) use int::big_sign;
pub(crate) use rational::reduce_by_gcd;
pub(crate) use rational::serde_point as serde_rationals;

/// Three-valued sign of an exact quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_i128(v: i128) -> Self {
        match v.cmp(&0) {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }

    pub fn of_big(v: &BigInt) -> Self {
        big_sign(v)
    }

    pub fn of_rational(v: &Rational) -> Self {
        if v.is_positive() {
            Sign::Positive
        } else if v.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::of_i128((self.as_i8() * rhs.as_i8()) as i128)
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i8()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(Sign::Negative),
            0 => Ok(Sign::Zero),
            1 => Ok(Sign::Positive),
            other => Err(format!("sign out of range: {other}")),
        }
    }
}

/// A coordinate vector of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(#[serde(with = "rational::serde_point")] Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints<T: Clone + Into<BigInt>>(coords: &[T]) -> Self {
        Point(
            coords
                .iter()
                .map(|c| Rational::from_integer(c.clone().into()))
                .collect(),
        )
    }

    pub fn zero(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    /// Unit coordinate vector `e_axis` (0-based).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut p = Self::zero(dim);
        p.0[axis] = Rational::one();
        p
    }

    /// Parses a comma-separated coordinate list such as `"1/2,-3"`.
    pub fn parse_list(text: &str) -> Result<Self> {
        text.split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map(Point)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> Point {
        Point(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn dot(&self, other: &Point) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn expect_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn check_square(columns: &[Point]) -> Result<usize> {
    let d = columns.len();
    for c in columns {
        c.expect_dim(d)?;
    }
    Ok(d)
}

/// Sign of the determinant of the matrix with the given columns.
pub fn det_sign(columns: &[Point]) -> Result<Sign> {
    check_square(columns)?;
    let dirs: Vec<IntDir> = columns.iter().map(IntDir::from_point).collect();
    let refs: Vec<&IntDir> = dirs.iter().collect();
    Ok(int_det_sign(&refs))
}

/// Coefficients `c` with `Σ c_i · columns[i] = rhs`, or `None` when the
/// columns are linearly dependent.
///
/// Each row of the augmented system is cleared of denominators, then reduced
/// by Bareiss elimination; only the final back substitution divides.
pub fn solve_square(columns: &[Point], rhs: &Point) -> Result<Option<Vec<Rational>>> {
    let n = check_square(columns)?;
    rhs.expect_dim(n)?;
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    // Row i of the augmented matrix is (columns[0][i], …, columns[n-1][i], rhs[i]).
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row: Vec<&Rational> = columns
                .iter()
                .map(|c| &c.coords()[i])
                .chain(std::iter::once(&rhs.coords()[i]))
                .collect();
            let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Ok(None);
            };
            m.swap(k, r);
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            let lead = m[i][k].clone();
            for j in k + 1..=n {
                let v = &pivot * &m[i][j] - &lead * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = pivot;
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(Some(x))
}
