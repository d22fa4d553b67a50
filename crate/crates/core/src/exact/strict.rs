//! Strict homogeneous feasibility `a_i · x > 0` in low dimension.
//!
//! Incremental: keep a witness for the first `i` rows; when row `i+1` is
//! violated, any solution of the enlarged system can be slid onto the
//! hyperplane `a_{i+1}·x = 0` while staying in the open cone of the earlier
//! rows, so the search recurses on that hyperplane in one dimension less and
//! lifts the answer back with a small push along `a_{i+1}`. Integer
//! arithmetic throughout; rows are visited in a fixed pseudo-random order.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{reduce_by_gcd, IntDir, Sign};

/// A direction with `row · x > 0` for every row, or `None`.
pub fn strict_direction(dim: usize, rows: &[IntDir]) -> Option<IntDir> {
    let mut order: Vec<&IntDir> = rows.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ rows.len() as u64);
    order.shuffle(&mut rng);
    solve(dim, &order).map(primitive)
}

fn primitive(x: IntDir) -> IntDir {
    IntDir::from_big(reduce_by_gcd(x.coords().to_vec()))
}

/// Given `x` with `row · x > 0` for every row and `new_row · x ≤ 0`, a
/// direction satisfying the rows and `new_row` strictly, or `None`.
/// The orthogonal projection of `x` onto the wall is tried first.
pub fn strict_direction_across(rows: &[IntDir], new_row: &IntDir, x: &IntDir) -> Option<IntDir> {
    let a = new_row;
    let aa = a.dot(a);
    let ax = a.dot(x);
    let z: Vec<BigInt> =
        x.coords().iter().zip(a.coords()).map(|(xi, ai)| &aa * xi - &ax * ai).collect();
    let z = IntDir::from_big(z);
    if rows.iter().all(|r| r.dot_sign(&z) == Sign::Positive) {
        let refs: Vec<&IntDir> = rows.iter().collect();
        return Some(primitive(push(&refs, a, z)));
    }
    let mut order: Vec<&IntDir> = rows.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ rows.len() as u64);
    order.shuffle(&mut rng);
    onto_and_push(new_row.dim(), &order, new_row).map(primitive)
}

fn solve(dim: usize, rows: &[&IntDir]) -> Option<IntDir> {
    if rows.is_empty() {
        return Some(IntDir::from_big(
            (0..dim).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect(),
        ));
    }
    if dim == 0 || rows.iter().any(|r| r.is_zero()) {
        return None;
    }
    if dim == 1 {
        let s = Sign::of_big(&rows[0].coords()[0]);
        return rows
            .iter()
            .all(|r| Sign::of_big(&r.coords()[0]) == s)
            .then(|| IntDir::from_big(vec![BigInt::from(s.as_i8())]));
    }
    let mut x = rows[0].clone();
    for i in 1..rows.len() {
        if rows[i].dot_sign(&x) == Sign::Positive {
            continue;
        }
        x = onto_and_push(dim, &rows[..i], rows[i])?;
    }
    Some(x)
}

/// Solves `rows` on the hyperplane `a · x = 0`, then pushes into `a · x > 0`.
fn onto_and_push(dim: usize, rows: &[&IntDir], a: &IntDir) -> Option<IntDir> {
    let p = a.coords().iter().position(|c| !c.is_zero())?;
    let ap = &a.coords()[p];
    // Basis of the hyperplane: b_q = a_p e_q − a_q e_p for q ≠ p.
    let restricted: Vec<IntDir> = rows
        .iter()
        .map(|r| {
            let rp = &r.coords()[p];
            let v: Vec<BigInt> = (0..dim)
                .filter(|&q| q != p)
                .map(|q| ap * &r.coords()[q] - &a.coords()[q] * rp)
                .collect();
            IntDir::from_big(v)
        })
        .collect();
    let refs: Vec<&IntDir> = restricted.iter().collect();
    let y = solve(dim - 1, &refs)?;
    // Lift: z_q = a_p y_q (q ≠ p), z_p = −Σ a_q y_q.
    let mut z = vec![BigInt::zero(); dim];
    let mut k = 0;
    for (q, slot) in z.iter_mut().enumerate() {
        if q == p {
            continue;
        }
        *slot = ap * &y.coords()[k];
        k += 1;
    }
    let mut zp = BigInt::zero();
    for (q, yq) in (0..dim).filter(|&q| q != p).zip(y.coords()) {
        zp -= &a.coords()[q] * yq;
    }
    z[p] = zp;
    Some(push(rows, a, IntDir::from_big(z)))
}

/// `z` on the wall of `a` with every row positive, moved into `a · x > 0`.
fn push(rows: &[&IntDir], a: &IntDir, z: IntDir) -> IntDir {
    // Push by ε along a: every row keeps its sign while ε < (r·z)/|r·a|.
    let mut eps_num = BigInt::one();
    let mut eps_den = BigInt::one();
    for r in rows {
        let ra = r.dot(a);
        if ra.is_negative() {
            // candidate ε = (r·z) / (2|r·a|)
            let num = r.dot(&z);
            let den = BigInt::from(2) * (-ra);
            if &num * &eps_den < &eps_num * &den {
                eps_num = num;
                eps_den = den;
            }
        }
    }
    let x: Vec<BigInt> = z
        .coords()
        .iter()
        .zip(a.coords())
        .map(|(zi, ai)| &eps_den * zi + &eps_num * ai)
        .collect();
    IntDir::from_big(x)
}
