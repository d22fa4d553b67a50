//! Exact feasibility of homogeneous systems `a·x ≥ 0`, `a·x > 0`, `a·x = 0`.
//!
//! Writes `x = u − v` with `0 ≤ u, v ≤ 1` and maximizes a slack `t ≤ 1` that
//! every strict row must exceed. The origin (`u = v = t = 0`) is a feasible
//! starting basis, so a single phase of dictionary simplex with Bland's rule
//! decides the system: strictly feasible iff the optimal slack is positive.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{reduce_by_gcd, IntDir, Point, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=0")]
    NonNegative,
    #[serde(rename = ">0")]
    Positive,
    #[serde(rename = "=0")]
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub normal: Point,
    pub relation: Relation,
}

impl Constraint {
    pub fn new(normal: Point, relation: Relation) -> Self {
        Constraint { normal, relation }
    }

    pub fn holds_at(&self, x: &Point) -> bool {
        let v = self.normal.dot(x);
        match self.relation {
            Relation::NonNegative => !v.is_negative(),
            Relation::Positive => v.is_positive(),
            Relation::Zero => v.is_zero(),
        }
    }
}

/// A homogeneous linear system over `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    dim: usize,
    rows: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(rows: Vec<Constraint>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Input("linear system needs at least one row".into()));
        };
        let dim = first.normal.dim();
        for r in &rows {
            r.normal.expect_dim(dim)?;
        }
        Ok(LinearSystem { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn is_satisfied_by(&self, x: &Point) -> bool {
        x.dim() == self.dim && self.rows.iter().all(|r| r.holds_at(x))
    }
}

/// An exact point satisfying every row of `system` (strict rows strictly),
/// or `None` when there is none.
pub fn feasible_point(system: &LinearSystem) -> Option<Point> {
    let dirs: Vec<(IntDir, Relation)> = system
        .rows
        .iter()
        .map(|r| (IntDir::from_point(&r.normal), r.relation))
        .collect();
    let refs: Vec<(&IntDir, Relation)> = dirs.iter().map(|(d, r)| (d, *r)).collect();
    feasible_direction(system.dim, &refs).map(|d| d.to_point())
}

/// Integer-normal form of [`feasible_point`]. The returned vector is
/// primitive; positive rescaling keeps every homogeneous row satisfied.
pub fn feasible_direction(dim: usize, rows: &[(&IntDir, Relation)]) -> Option<IntDir> {
    if !rows.iter().any(|(_, r)| *r == Relation::Positive) {
        return Some(IntDir::from_big(vec![Zero::zero(); dim]));
    }
    let n = dim;
    // Variables: u_0..u_{n-1}, v_0..v_{n-1}, t.
    let nvars = 2 * n + 1;
    let t = 2 * n;
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut push_row = |coef: &dyn Fn(usize) -> Rational| {
        a.push((0..nvars).map(coef).collect());
    };
    for (normal, rel) in rows {
        let c = |sign: i32, j: usize| -> Rational {
            let k = if j < n { j } else { j - n };
            let v = Rational::from_integer(normal.coords()[k].clone());
            // -a·u + a·v
            let v = if j < n { -v } else { v };
            if sign < 0 {
                -v
            } else {
                v
            }
        };
        match rel {
            Relation::Positive => push_row(&|j| {
                if j == t {
                    Rational::one()
                } else {
                    c(1, j)
                }
            }),
            Relation::NonNegative => push_row(&|j| if j == t { Rational::zero() } else { c(1, j) }),
            Relation::Zero => {
                push_row(&|j| if j == t { Rational::zero() } else { c(1, j) });
                push_row(&|j| if j == t { Rational::zero() } else { c(-1, j) });
            }
        }
    }
    for var in 0..nvars {
        push_row(&|j| if j == var { Rational::one() } else { Rational::zero() });
    }
    let m = a.len();
    let mut b: Vec<Rational> = vec![Rational::zero(); m];
    for bound in b.iter_mut().skip(m - nvars) {
        *bound = Rational::one();
    }
    let mut obj: Vec<Rational> = (0..nvars)
        .map(|j| if j == t { Rational::one() } else { Rational::zero() })
        .collect();

    let mut dict = Dictionary {
        a,
        b,
        c: std::mem::take(&mut obj),
        value: Rational::zero(),
        basic: (nvars..nvars + m).collect(),
        nonbasic: (0..nvars).collect(),
    };
    dict.maximize_until_positive();
    if !dict.value.is_positive() {
        return None;
    }
    let mut vals = vec![Rational::zero(); nvars];
    for (i, &var) in dict.basic.iter().enumerate() {
        if var < nvars {
            vals[var] = dict.b[i].clone();
        }
    }
    let x: Vec<Rational> = (0..n).map(|j| &vals[j] - &vals[n + j]).collect();
    let ints = super::primitive_integer(&x);
    Some(IntDir::from_big(reduce_by_gcd(ints)))
}

/// `x_basic[i] = b[i] − Σ_j a[i][j] x_nonbasic[j]`, objective
/// `value + Σ_j c[j] x_nonbasic[j]`.
struct Dictionary {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    value: Rational,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
}

impl Dictionary {
    /// Bland's rule pivoting. Stops at optimality or as soon as the objective
    /// turns positive, which is all a feasibility decision needs.
    fn maximize_until_positive(&mut self) {
        loop {
            if self.value.is_positive() {
                return;
            }
            let entering = (0..self.nonbasic.len())
                .filter(|&j| self.c[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(e) = entering else {
                return;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][e].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][e];
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basic[i] < self.basic[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // Every variable is boxed, so the problem is never unbounded.
            let (r, _) = leave.expect("bounded feasibility program");
            self.pivot(r, e);
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.a[r][e].clone();
        let inv = Rational::one() / &piv;
        let cols = self.nonbasic.len();
        for j in 0..cols {
            if j == e {
                self.a[r][j] = inv.clone();
            } else if !self.a[r][j].is_zero() {
                self.a[r][j] = &self.a[r][j] * &inv;
            }
        }
        self.b[r] = &self.b[r] * &inv;
        let pivot_row = self.a[r].clone();
        let pivot_b = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][e].is_zero() {
                continue;
            }
            let coef = self.a[i][e].clone();
            for j in 0..cols {
                if j == e {
                    self.a[i][j] = -(&coef * &pivot_row[e]);
                } else if !pivot_row[j].is_zero() {
                    self.a[i][j] = &self.a[i][j] - &coef * &pivot_row[j];
                }
            }
            if !pivot_b.is_zero() {
                self.b[i] = &self.b[i] - &coef * &pivot_b;
            }
        }
        let coef = self.c[e].clone();
        for j in 0..cols {
            if j == e {
                self.c[j] = -(&coef * &pivot_row[e]);
            } else if !pivot_row[j].is_zero() {
                self.c[j] = &self.c[j] - &coef * &pivot_row[j];
            }
        }
        self.value = &self.value + &coef * &pivot_b;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[e]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Point;

    fn row(v: &[i64], rel: Relation) -> Constraint {
        Constraint::new(Point::from_ints(v), rel)
    }

    #[test]
    fn open_quadrant() {
        let sys = LinearSystem::new(vec![
            row(&[1, 0], Relation::Positive),
            row(&[0, 1], Relation::Positive),
        ])
        .unwrap();
        let p = feasible_point(&sys).unwrap();
        assert!(sys.is_satisfied_by(&p));
    }

    #[test]
    fn contradictory_strict_rows() {
        let sys = LinearSystem::new(vec![
            row(&[1, 0], Relation::Positive),
            row(&[-1, 0], Relation::Positive),
        ])
        .unwrap();
        assert_eq!(feasible_point(&sys), None);
    }

    #[test]
    fn forced_to_origin() {
        let sys = LinearSystem::new(vec![
            row(&[1], Relation::NonNegative),
            row(&[-1], Relation::NonNegative),
        ])
        .unwrap();
        assert_eq!(feasible_point(&sys), Some(Point::from_ints(&[0])));
    }

    #[test]
    fn equality_with_strict() {
        // x = y, x + y > 0, x - 2z > 0
        let sys = LinearSystem::new(vec![
            row(&[1, -1, 0], Relation::Zero),
            row(&[1, 1, 0], Relation::Positive),
            row(&[1, 0, -2], Relation::Positive),
        ])
        .unwrap();
        let p = feasible_point(&sys).unwrap();
        assert!(sys.is_satisfied_by(&p));
    }

    #[test]
    fn equality_blocks_strict() {
        // x = 0 and x > 0
        let sys = LinearSystem::new(vec![
            row(&[1, 0], Relation::Zero),
            row(&[1, 0], Relation::Positive),
        ])
        .unwrap();
        assert_eq!(feasible_point(&sys), None);
    }

    #[test]
    fn rejects_empty_and_mixed_dimensions() {
        assert!(LinearSystem::new(vec![]).is_err());
        assert!(LinearSystem::new(vec![
            row(&[1, 0], Relation::Positive),
            row(&[1], Relation::Positive)
        ])
        .is_err());
    }
}
