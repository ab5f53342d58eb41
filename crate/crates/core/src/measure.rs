//! Exact-rational linear feasibility for the invariant-measure check.
//!
//! The measure system asks for lengths `l ≥ 1` with `A·l = 0` (one balance
//! equation per holonomy pairing). Substituting `l = 1 + y` reduces this to
//! `A·y = b, y ≥ 0`, decided by a phase-one simplex over `BigRational` with
//! Bland's rule. Infeasibility comes with a Farkas certificate `λ` satisfying
//! `λᵀA ≤ 0` and `λᵀb > 0`, which replays in a certificate checker without
//! re-running the simplex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Outcome of [`feasibility`].
#[derive(Debug, Clone)]
pub enum FeasResult {
    /// A point `y ≥ 0` with `A·y = b`.
    Feasible(Vec<Rat>),
    /// Farkas multipliers `λ` with `λᵀA ≤ 0` and `λᵀb > 0`.
    Infeasible(Vec<Rat>),
}

/// Decides `∃ y ≥ 0 : A·y = b` exactly.
pub fn feasibility(a: &[Vec<Rat>], b: &[Rat]) -> FeasResult {
    let m = a.len();
    assert_eq!(b.len(), m);
    let n = if m == 0 { 0 } else { a[0].len() };
    if m == 0 {
        return FeasResult::Feasible(vec![Rat::zero(); n]);
    }

    // Tableau with artificial variables; flip rows so the RHS is nonnegative.
    let mut flip = vec![false; m];
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rat> = a[i].clone();
        let mut r = b[i].clone();
        if r.is_negative() {
            flip[i] = true;
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            r = -r;
        }
        row.extend((0..m).map(|j| if j == i { Rat::one() } else { Rat::zero() }));
        rows.push(row);
        rhs.push(r);
    }
    let total = n + m;
    let mut basis: Vec<usize> = (n..total).collect();

    // Reduced costs for minimising the sum of artificials.
    let mut obj: Vec<Rat> = vec![Rat::zero(); total];
    for (j, o) in obj.iter_mut().enumerate() {
        if j >= n {
            *o = Rat::one();
        }
        for row in rows.iter() {
            *o -= &row[j];
        }
    }
    let mut value: Rat = rhs.iter().sum();

    loop {
        // Bland: entering column = smallest index with negative reduced cost.
        let entering = match (0..total).find(|&j| obj[j].is_negative()) {
            Some(j) => j,
            None => break,
        };
        // Leaving row: minimum ratio, ties by smallest basis index.
        let mut best: Option<(usize, Rat)> = None;
        for i in 0..m {
            if rows[i][entering].is_positive() {
                let ratio = &rhs[i] / &rows[i][entering];
                match &best {
                    None => best = Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < *br || (ratio == *br && basis[i] < basis[*bi]) {
                            best = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let (pivot_row, _) = best.expect("phase-one objective is bounded below by zero");
        // Pivot.
        let pivot = rows[pivot_row][entering].clone();
        for x in rows[pivot_row].iter_mut() {
            *x /= &pivot;
        }
        rhs[pivot_row] /= &pivot;
        for i in 0..m {
            if i != pivot_row && !rows[i][entering].is_zero() {
                let factor = rows[i][entering].clone();
                for j in 0..total {
                    let delta = &factor * &rows[pivot_row][j];
                    rows[i][j] -= delta;
                }
                let delta = &factor * &rhs[pivot_row];
                rhs[i] -= delta;
            }
        }
        if !obj[entering].is_zero() {
            let factor = obj[entering].clone();
            for j in 0..total {
                let delta = &factor * &rows[pivot_row][j];
                obj[j] -= delta;
            }
            let delta = &factor * &rhs[pivot_row];
            value -= delta;
        }
        basis[pivot_row] = entering;
    }

    if value.is_zero() {
        let mut y = vec![Rat::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                y[basis[i]] = rhs[i].clone();
            }
        }
        FeasResult::Feasible(y)
    } else {
        // λ_i = 1 - (final reduced cost of artificial i), undoing row flips.
        let mut lambda = Vec::with_capacity(m);
        for i in 0..m {
            let mut l = Rat::one() - &obj[n + i];
            if flip[i] {
                l = -l;
            }
            lambda.push(l);
        }
        FeasResult::Infeasible(lambda)
    }
}

/// Replays a Farkas certificate: `λᵀA ≤ 0` componentwise and `λᵀb > 0`.
pub fn verify_farkas(a: &[Vec<Rat>], b: &[Rat], lambda: &[Rat]) -> bool {
    let m = a.len();
    if lambda.len() != m || b.len() != m {
        return false;
    }
    let n = if m == 0 { 0 } else { a[0].len() };
    for j in 0..n {
        let mut dot = Rat::zero();
        for i in 0..m {
            dot += &lambda[i] * &a[i][j];
        }
        if dot.is_positive() {
            return false;
        }
    }
    let mut dot = Rat::zero();
    for i in 0..m {
        dot += &lambda[i] * &b[i];
    }
    dot.is_positive()
}

/// The right-hand side of the `l = 1 + y` substitution: `b = -A·1`.
pub fn kernel_rhs(a: &[Vec<Rat>]) -> Vec<Rat> {
    a.iter()
        .map(|row| -row.iter().fold(Rat::zero(), |acc, x| acc + x))
        .collect()
}

/// Decides `∃ l ≥ 1 : A·l = 0`, the shape used by the invariant-measure
/// check. On success the witness is scaled to integer lengths.
pub fn positive_kernel(a: &[Vec<Rat>]) -> FeasResult {
    let m = a.len();
    if m == 0 {
        return FeasResult::Feasible(Vec::new());
    }
    let b = kernel_rhs(a);
    match feasibility(a, &b) {
        FeasResult::Infeasible(l) => FeasResult::Infeasible(l),
        FeasResult::Feasible(y) => {
            let mut l: Vec<Rat> = y.iter().map(|v| v + Rat::one()).collect();
            // the system is homogeneous, so integer scaling is free
            let lcm = l
                .iter()
                .fold(BigInt::one(), |acc, v| num_integer::lcm(acc, v.denom().clone()));
            let scale = BigRational::from_integer(lcm);
            for v in l.iter_mut() {
                *v *= &scale;
            }
            FeasResult::Feasible(l)
        }
    }
}
