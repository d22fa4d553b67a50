//! Fraction-free integer determinants.
//!
//! Every predicate in the crate is invariant under positive scaling of the
//! individual vectors involved, so rational points are first scaled to
//! primitive integer directions and all signs are read off integer
//! determinants. Bareiss elimination runs in checked `i128` and restarts in
//! `BigInt` on overflow.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{primitive_integer, Point, Sign};

/// A primitive integer vector with an optional machine-word copy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntDir {
    big: Vec<BigInt>,
    small: Option<Vec<i64>>,
}

impl IntDir {
    pub fn from_big(big: Vec<BigInt>) -> Self {
        let small = big.iter().map(|c| c.to_i64()).collect::<Option<Vec<_>>>();
        IntDir { big, small }
    }

    /// Primitive positive multiple of `p`.
    pub fn from_point(p: &Point) -> Self {
        Self::from_big(primitive_integer(p.coords()))
    }

    pub fn dim(&self) -> usize {
        self.big.len()
    }

    /// Coordinates as `i64` when they all fit.
    pub fn small(&self) -> Option<&[i64]> {
        self.small.as_deref()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.big
    }

    pub fn is_zero(&self) -> bool {
        self.big.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        IntDir {
            big: self.big.iter().map(|c| -c).collect(),
            small: self
                .small
                .as_ref()
                .and_then(|s| s.iter().map(|c| c.checked_neg()).collect()),
        }
    }

    pub fn dot(&self, other: &IntDir) -> BigInt {
        self.big.iter().zip(&other.big).map(|(a, b)| a * b).sum()
    }

    pub fn dot_sign(&self, other: &IntDir) -> Sign {
        if let (Some(a), Some(b)) = (&self.small, &other.small) {
            let mut acc: i128 = 0;
            let mut ok = true;
            for (x, y) in a.iter().zip(b) {
                match acc.checked_add(*x as i128 * *y as i128) {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Sign::of_i128(acc);
            }
        }
        Sign::of_big(&self.dot(other))
    }

    pub fn to_point(&self) -> Point {
        Point::from_ints(&self.big)
    }
}

/// Sign of the determinant of the square matrix whose rows are `rows`
/// (equivalently, whose columns are `rows`).
pub fn det_sign(rows: &[&IntDir]) -> Sign {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.dim() == n));
    if rows.iter().all(|r| r.small.is_some()) {
        let mut m: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.small.as_ref().unwrap().iter().map(|&c| c as i128).collect())
            .collect();
        if let Some(s) = bareiss_i128(&mut m) {
            return s;
        }
    }
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.big.clone()).collect();
    bareiss_big_sign(&mut m)
}

/// Determinant value (exact) of the matrix whose rows are `rows`.
pub fn det_value(rows: &[&IntDir]) -> BigInt {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.big.clone()).collect();
    bareiss_big(&mut m)
}

fn bareiss_i128(m: &mut [Vec<i128>]) -> Option<Sign> {
    let n = m.len();
    if n == 0 {
        return Some(Sign::Positive);
    }
    let mut negate = false;
    let mut prev: i128 = 1;
    for k in 0..n.saturating_sub(1) {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return Some(Sign::Zero);
            };
            m.swap(k, r);
            negate = !negate;
        }
        let pivot = m[k][k];
        for i in k + 1..n {
            let lead = m[i][k];
            for j in k + 1..n {
                let a = pivot.checked_mul(m[i][j])?;
                let b = lead.checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][k] = 0;
        }
        prev = pivot;
    }
    let s = Sign::of_i128(m[n - 1][n - 1]);
    Some(if negate { -s } else { s })
}

fn bareiss_big(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            let lead = m[i][k].clone();
            if lead.is_zero() {
                // only the scaling term survives
                for j in k + 1..n {
                    m[i][j] = (&pivot * &m[i][j]) / &prev;
                }
                continue;
            }
            for j in k + 1..n {
                let v = &pivot * &m[i][j] - &lead * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn bareiss_big_sign(m: &mut [Vec<BigInt>]) -> Sign {
    Sign::of_big(&bareiss_big(m))
}

/// Sign of `det [rows | 1]` for `d+1` rows of dimension `d`: the affine
/// orientation of the points.
pub fn lifted_det_sign(rows: &[&IntDir]) -> Sign {
    let n = rows.len();
    let lifted: Vec<IntDir> = rows
        .iter()
        .map(|r| {
            let mut big = r.big.clone();
            big.push(BigInt::from(1));
            IntDir::from_big(big)
        })
        .collect();
    debug_assert!(lifted.iter().all(|r| r.dim() == n));
    let refs: Vec<&IntDir> = lifted.iter().collect();
    det_sign(&refs)
}

pub(crate) fn big_sign(v: &BigInt) -> Sign {
    if v.is_positive() {
        Sign::Positive
    } else if v.is_negative() {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(v: &[i64]) -> IntDir {
        IntDir::from_big(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn small_and_big_paths_agree() {
        let huge = i64::MAX / 3;
        let rows = [dir(&[huge, 1, 2]), dir(&[3, huge, 5]), dir(&[7, 11, huge])];
        let refs: Vec<&IntDir> = rows.iter().collect();
        let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.big.clone()).collect();
        assert_eq!(det_sign(&refs), bareiss_big_sign(&mut m));
        assert_eq!(det_sign(&refs), Sign::Positive);
    }

    #[test]
    fn det_value_matches_cofactor_expansion() {
        let rows = [dir(&[2, -1, 0]), dir(&[1, 3, 4]), dir(&[0, 5, -2])];
        let refs: Vec<&IntDir> = rows.iter().collect();
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 4*0) + 0 = 2*(-26) + (-2) = -54
        assert_eq!(det_value(&refs), BigInt::from(-54));
        assert_eq!(det_sign(&refs), Sign::Negative);
    }

    #[test]
    fn zero_leading_entry_with_row_swap() {
        let rows = [dir(&[0, 1]), dir(&[1, 0])];
        let refs: Vec<&IntDir> = rows.iter().collect();
        assert_eq!(det_sign(&refs), Sign::Negative);
        assert_eq!(det_value(&refs), BigInt::from(-1));
    }

    #[test]
    fn lifted_orientation() {
        let rows = [dir(&[0, 0]), dir(&[1, 0]), dir(&[0, 1])];
        let refs: Vec<&IntDir> = rows.iter().collect();
        assert_eq!(lifted_det_sign(&refs), Sign::Positive);
    }
}
