//! Explicit degree bounds that make every search loop in the crate a
//! decision procedure rather than a heuristic.
//!
//! Each bound is returned as a [`BigUint`] because the doubly exponential
//! ones overflow machine integers already for small parameters. Search code
//! clamps them with [`clamp_degree`] and treats "budget exhausted below the
//! bound" as *undecided*, never as a verdict.

use num_bigint::BigUint;
use num_traits::{Pow, ToPrimitive};

use crate::scalar::binomial;

/// Degree bound for a generating syzygy among `p` elements of `A_m^(K)`
/// whose `DegWith(K)` degrees are at most `d`:
/// `2 (m + |K|) (p - 1) d`.
pub fn syzygy_degree_bound(m: usize, k_size: usize, p: usize, d: u64) -> BigUint {
    BigUint::from(2u64 * (m as u64 + k_size as u64))
        * BigUint::from(p.saturating_sub(1) as u64)
        * BigUint::from(d)
}

/// Degree bound on a numerator/denominator representation of a solution of a
/// `p x q` system over the fraction algebra of `A_m^(K)` with entry degrees
/// at most `d`: `(16 m^4 d^2 min(p,q)^2) ^ (4^(m - |K|))`.
pub fn solution_degree_bound(m: usize, k_size: usize, d: u64, p: usize, q: usize) -> BigUint {
    let mn = p.min(q) as u64;
    let base = BigUint::from(16u64)
        * BigUint::from(m as u64).pow(4u64)
        * BigUint::from(d).pow(2u64)
        * BigUint::from(mn).pow(2u64);
    base.pow(pow4(m - k_size))
}

/// Degree growth of the system produced by eliminating one derivation from a
/// trapezoidal system with `r` diagonal entries and entry degrees at most
/// `d`: the new entries have degree at most `16 m^2 r^2 d`.
pub fn elimination_system_bound(m: usize, r: usize, d: u64) -> BigUint {
    BigUint::from(16u64) * BigUint::from(m as u64).pow(2u64) * BigUint::from(r as u64).pow(2u64)
        * BigUint::from(d)
}

/// Degree reached after cascading the one-derivation elimination down from
/// `A_m` to `A_m^(K)`, starting from a system with `r` rows/unknowns and
/// entry degrees at most `d`: `(2m)^(4^(m-|K|)) * (d r)^(3^(m-|K|))`.
pub fn cascade_degree_bound(m: usize, k_size: usize, d: u64, r: usize) -> BigUint {
    let diff = m - k_size;
    BigUint::from(2u64 * m as u64).pow(pow4(diff))
        * (BigUint::from(d) * BigUint::from(r as u64)).pow(pow3(diff))
}

/// Degree bound for a common left denominator of the solution entries after
/// the full cascade: `4 (m + |K|) * cascade^2`.
pub fn shared_denominator_bound(m: usize, k_size: usize, d: u64, r: usize) -> BigUint {
    BigUint::from(4u64 * (m as u64 + k_size as u64))
        * cascade_degree_bound(m, k_size, d, r).pow(2u64)
}

/// Degree bound that makes the one-shot polynomial-ansatz solver complete
/// for a system with `p` rows: `(2 (m + |K|) p + 1) * shared_denominator`.
pub fn ansatz_degree_bound(m: usize, k_size: usize, p: usize, d: u64, r: usize) -> BigUint {
    (BigUint::from(2u64 * (m as u64 + k_size as u64) * p as u64) + BigUint::from(1u64))
        * shared_denominator_bound(m, k_size, d, r)
}

/// Degree cap for the denominator-swap search: given the target order `e`,
/// the number `f` of derivations being cleared, and the max `DegWith(Kd)`
/// degree `dmax` of the two inputs, the cap is
/// `e + 2 (m + |Kd|) C(e + f, f) dmax`.
pub fn swap_degree_bound(m: usize, kd_size: usize, e: u64, f: u64, dmax: u64) -> BigUint {
    BigUint::from(e)
        + BigUint::from(2u64 * (m as u64 + kd_size as u64)) * binomial(e + f, f) * BigUint::from(dmax)
}

/// Default cap for the fraction-equality witness search:
/// `4 (m + |Kd|)^2 dmax^2` where `dmax` bounds the representation degrees.
pub fn equality_witness_bound(m: usize, kd_size: usize, dmax: u64) -> BigUint {
    BigUint::from(4u64) * BigUint::from(m as u64 + kd_size as u64).pow(2u64)
        * BigUint::from(dmax).pow(2u64)
}

/// Saturation cap for the Hilbert-function computation on a module with `s`
/// relations of order at most `d`, evaluated up to shift `zmax`:
/// `2 zmax + 4 d s`.
pub fn hilbert_saturation_bound(zmax: u64, d: u64, s: usize) -> u64 {
    2 * zmax + 4 * d * s as u64
}

/// Bound on the leading-term magnitude `l` of the Hilbert polynomial of a
/// module given by an `n x s` presentation with entry orders at most `d`,
/// when the dimension-like degree is `t`:
///
/// * `t = m`:  `l <= n`;
/// * `t < m`:  `l <= n * (4 m^2 d min(n,s)) ^ (4^(m-t-1) * 2 (m-t))`.
pub fn bezout_bound(n: usize, s: usize, m: usize, d: u64, t: i64) -> BigUint {
    if t >= m as i64 {
        return BigUint::from(n as u64);
    }
    let t = t.max(0) as usize;
    let base = BigUint::from(4u64)
        * BigUint::from(m as u64).pow(2u64)
        * BigUint::from(d)
        * BigUint::from(n.min(s) as u64);
    let exp = pow4(m - t - 1) * 2 * (m as u64 - t as u64);
    BigUint::from(n as u64) * base.pow(exp)
}

fn pow4(e: usize) -> u64 {
    assert!(e <= 31, "tower exponent out of range");
    4u64.pow(e as u32)
}

fn pow3(e: usize) -> u64 {
    assert!(e <= 39, "tower exponent out of range");
    3u64.pow(e as u32)
}

/// Clamps a possibly astronomical bound to a practical `i64` search cap.
pub fn clamp_degree(b: &BigUint) -> i64 {
    b.to_i64().unwrap_or(i64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        // One variable, no derivations allowed, unit parameters: 16^4.
        assert_eq!(solution_degree_bound(1, 0, 1, 1, 1), BigUint::from(65536u64));
        // Syzygy between two elements of A_1^({1}) of degree <= 1: 2*2*1*1.
        assert_eq!(syzygy_degree_bound(1, 1, 2, 1), BigUint::from(4u64));
        // One elimination stage with unit parameters.
        assert_eq!(elimination_system_bound(1, 1, 1), BigUint::from(16u64));
        // Leading-term bound with m = 2, t = 1: 1 * (4*4*1*1)^(4^0 * 2).
        assert_eq!(bezout_bound(1, 1, 2, 1, 1), BigUint::from(256u64));
    }

    #[test]
    fn top_dimension_case_is_linear() {
        assert_eq!(bezout_bound(7, 3, 2, 5, 2), BigUint::from(7u64));
        assert_eq!(bezout_bound(7, 3, 2, 5, 3), BigUint::from(7u64));
    }

    #[test]
    fn bezout_exponent_grows_with_codimension() {
        // m = 2, t = 0: exponent 4^1 * 4 = 16 on base 4*4*2*2 = 64.
        let b = bezout_bound(2, 3, 2, 2, 0);
        assert_eq!(b, BigUint::from(2u64) * BigUint::from(64u64).pow(16u64));
    }

    #[test]
    fn cascade_and_denominator_bounds() {
        // No derivations to eliminate: cascade is (2m)^1 * (dr)^1.
        assert_eq!(cascade_degree_bound(2, 2, 3, 2), BigUint::from(24u64));
        assert_eq!(
            shared_denominator_bound(2, 2, 3, 2),
            BigUint::from(16u64) * BigUint::from(24u64).pow(2u64)
        );
        // One stage: (2m)^4 * (dr)^3.
        assert_eq!(
            cascade_degree_bound(2, 1, 1, 1),
            BigUint::from(4u64).pow(4u64)
        );
    }

    #[test]
    fn swap_and_witness_caps() {
        // e = 1, f = 1, dmax = 1, m = 1, |Kd| = 1: 1 + 4 * C(2,1) * 1 = 9.
        assert_eq!(swap_degree_bound(1, 1, 1, 1, 1), BigUint::from(9u64));
        assert_eq!(equality_witness_bound(1, 1, 2), BigUint::from(64u64));
        assert_eq!(hilbert_saturation_bound(8, 2, 3), 40);
    }

    #[test]
    fn clamping() {
        assert_eq!(clamp_degree(&BigUint::from(12u64)), 12);
        let huge = BigUint::from(2u64).pow(200u64);
        assert_eq!(clamp_degree(&huge), i64::MAX);
    }
}
