//! The computable bound on the exponent of periodicity of a shortest
//! solution of a band complex with constraints in standard form.
//!
//! For a complex whose components carry at most one interior vertex and whose
//! band bases are half or full components, a shortest solution with a large
//! power induces a nonnegative integer linear system with at most `2k`
//! equations and at most `6k` unknowns (`k` = number of domain components),
//! each equation of one of the shapes `x = y + z + d`, `x = y + d`, `x = d`.
//! After folding the monoid's idempotence constants `(α, β)` in, the additive
//! constants are bounded by `D = 2α + 2β + 3`. The bound returned is
//! `B = α·M′ + β` where `M′` caps every coordinate of every minimal solution
//! of every such system.
//!
//! `M′` is not computed by enumerating all systems (hopeless past k = 1) but
//! by the standard minor bound for nonnegative minimal solutions: every
//! coordinate is at most `(n + 1)·Δ` with `Δ` a Hadamard bound on the square
//! minors of the augmented matrix. Rows here have entries in `{-1, 0, 1}`
//! except the constant column bounded by `D`, so row norms are at most
//! `D + 2` and `Δ ≤ (D + 2)^(2k)`. The cap invariant — every minimal
//! solution found by bounded brute force on sample systems stays below the
//! cap — is pinned by a test in this module.

use num_bigint::BigUint;
use num_traits::One;

/// `M′` for `k` components with idempotence constants `(α, β)`:
/// `(6k + 1)·(D + 2)^(2k)` with `D = 2α + 2β + 3`.
pub fn minimal_solution_cap(k: usize, alpha: u64, beta: u64) -> BigUint {
    let d = 2 * alpha + 2 * beta + 3;
    let base = BigUint::from(d + 2);
    let exponent = 2 * k as u64;
    let unknowns = BigUint::from(6 * k as u64 + 1);
    unknowns * base.pow(exponent as u32)
}

/// `B(Σ, m) = α·M′ + β`.
pub fn periodicity_bound(k: usize, alpha: u64, beta: u64) -> BigUint {
    BigUint::from(alpha) * minimal_solution_cap(k, alpha, beta) + BigUint::from(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn trivial_monoid_single_component_shape() {
        // α = β = 1, k = 1: systems have ≤ 2 equations, ≤ 6 unknowns,
        // D = 7, so M′ = 7 · 9² and B = M′ + 1.
        let cap = minimal_solution_cap(1, 1, 1);
        assert_eq!(cap, BigUint::from(7u32 * 81));
        let b = periodicity_bound(1, 1, 1);
        assert_eq!(b, BigUint::from(7u32 * 81 + 1));
    }

    #[test]
    fn monotone_in_idempotence_constants() {
        for k in 1..4 {
            let base = periodicity_bound(k, 1, 1);
            assert!(periodicity_bound(k, 2, 1) >= base);
            assert!(periodicity_bound(k, 1, 2) >= base);
            assert!(periodicity_bound(k, 4, 5) >= periodicity_bound(k, 2, 3));
        }
    }

    /// One equation of the allowed shapes, encoded over `n` unknowns.
    #[derive(Clone, Copy)]
    enum Eq {
        SumPlus(usize, usize, usize, u64), // x = y + z + d
        Shift(usize, usize, u64),          // x = y + d
        Const(usize, u64),                 // x = d
    }

    fn satisfies(eq: &Eq, x: &[u64]) -> bool {
        match *eq {
            Eq::SumPlus(a, b, c, d) => x[a] == x[b] + x[c] + d,
            Eq::Shift(a, b, d) => x[a] == x[b] + d,
            Eq::Const(a, d) => x[a] == d,
        }
    }

    /// Brute-force minimal solutions with coordinates ≤ box; the cap
    /// invariant: all of them are ≤ M′.
    #[test]
    fn cap_dominates_brute_forced_minimal_solutions() {
        let samples: Vec<(usize, Vec<Eq>)> = vec![
            (3, vec![Eq::SumPlus(0, 1, 2, 3), Eq::Shift(1, 2, 2)]),
            (2, vec![Eq::Shift(0, 1, 3), Eq::Const(1, 1)]),
            (4, vec![Eq::SumPlus(0, 1, 2, 2), Eq::SumPlus(3, 0, 1, 3)]),
            (3, vec![Eq::Const(0, 0), Eq::SumPlus(1, 0, 2, 3)]),
            (2, vec![Eq::Shift(0, 1, 0), Eq::Shift(1, 0, 0)]),
        ];
        let box_limit = 12u64;
        let cap = minimal_solution_cap(1, 1, 1).to_u64().unwrap();
        for (n, eqs) in samples {
            let mut solutions: Vec<Vec<u64>> = Vec::new();
            let mut x = vec![0u64; n];
            'outer: loop {
                if eqs.iter().all(|e| satisfies(e, &x)) {
                    solutions.push(x.clone());
                }
                let mut i = 0;
                loop {
                    x[i] += 1;
                    if x[i] <= box_limit {
                        break;
                    }
                    x[i] = 0;
                    i += 1;
                    if i == n {
                        break 'outer;
                    }
                }
            }
            // componentwise-minimal ones
            let minimal: Vec<&Vec<u64>> = solutions
                .iter()
                .filter(|s| {
                    !solutions.iter().any(|t| {
                        t != *s && t.iter().zip(s.iter()).all(|(a, b)| a <= b)
                    })
                })
                .collect();
            for s in minimal {
                for &coord in s {
                    assert!(
                        coord <= cap,
                        "minimal solution coordinate {coord} exceeds the cap {cap}"
                    );
                }
            }
        }
    }

    #[test]
    fn bound_fits_bigint_for_larger_complexes() {
        let b = periodicity_bound(12, 4, 6);
        assert!(b > BigUint::one());
    }
}
