//! Hilbert–Kolchin analysis of finitely presented submodules of free
//! modules over differential operators with rational-function coefficients.
//!
//! A [`ModulePresentation`] lists generator rows `w_j` of a left submodule
//! `L` of the free module of rank `n`. The Hilbert function of the quotient
//! counts, for each order `z`, the dimension over `F(X_1..X_m)` of the
//! order-filtration level `z` of the quotient. It is computed by Macaulay
//! saturation: span the products `D^beta * w_j` up to a growing order cap
//! `z + k`, count (by exact linear algebra over `F(X)`, estimated through
//! random integer specialization) how many echelon pivots fall on columns
//! of order at most `z`, and accept the count once it is stable across
//! consecutive levels `k`.
//!
//! For large `z` the Hilbert function agrees with a polynomial; [`hk_fit`]
//! recovers it from finite differences of the computed tail. Its degree `t`
//! (the differential type) and normalized leading coefficient
//! `l = t! * lc` (the typical differential dimension) are the two
//! invariants the bound checks compare: [`bezout_check`] verifies
//! `l <= bezout_bound(n, s, m, d, t)` and, in the codimension-one case
//! `m - t = 1`, the sharper sum-of-orders bound.
//!
//! [`principal_element`] searches, for a chosen component `i0` and
//! derivation subset `K`, for an element of `L` concentrated in component
//! `i0` with value in the subalgebra `A^(K)` — by solving the defining
//! linear system over the fraction algebra and clearing denominators. The
//! returned element comes with an exactly verified membership certificate.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds;
use crate::linalg::{prefix_rank_profile, ScalarMatrix};
use crate::matrix::{LinearSystem, MatrixError, OpMatrix};
use crate::ore::{common_multiple, FractionContext, OreError, Side};
use crate::scalar::{FieldScalar, FieldTag};
use crate::solve::{decide_solve, SolveBudget, SolveError, SolveStatus};
use crate::weyl::{DegreeKind, Monomial, VarSet, WeylError, WeylOp};

/// Errors raised by the Hilbert-analysis pipeline.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HilbertError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(&'static str),
    #[error("stabilization failed: {0}")]
    NotStabilized(String),
    #[error("solver budget exhausted while searching for a principal element")]
    ResourceCap,
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Generators of a left submodule `L` of the free module of rank `n` over
/// the operator algebra: `s` rows, each a vector of `n` operators.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    m: usize,
    n: usize,
    s: usize,
    field: FieldTag,
    generators: Vec<Vec<WeylOp>>,
    d: u64,
}

impl ModulePresentation {
    /// Validates shape (rectangular, nonzero rows, matching `m`/field) and
    /// records the maximal order `d` of the entries.
    pub fn new(
        generators: Vec<Vec<WeylOp>>,
        m: usize,
        field: FieldTag,
    ) -> Result<Self, HilbertError> {
        if generators.is_empty() {
            return Err(HilbertError::InvalidPresentation("no generator rows"));
        }
        let n = generators[0].len();
        if n == 0 {
            return Err(HilbertError::InvalidPresentation("zero-width rows"));
        }
        let mut d: i64 = 0;
        for row in &generators {
            if row.len() != n {
                return Err(HilbertError::InvalidPresentation("ragged generator rows"));
            }
            if row.iter().all(WeylOp::is_zero) {
                return Err(HilbertError::InvalidPresentation("zero generator row"));
            }
            for e in row {
                if e.m() != m || e.field() != field {
                    return Err(HilbertError::InvalidPresentation(
                        "entry with mismatched variable count or field",
                    ));
                }
                d = d.max(e.degree(&DegreeKind::OrdD));
            }
        }
        Ok(ModulePresentation {
            m,
            n,
            s: generators.len(),
            field,
            generators,
            d: d.max(0) as u64,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn field(&self) -> FieldTag {
        self.field
    }
    /// Maximal order of any entry.
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn generators(&self) -> &[Vec<WeylOp>] {
        &self.generators
    }

    /// Order of a generator row: the maximal order of its entries.
    fn row_order(&self, j: usize) -> u64 {
        self.generators[j]
            .iter()
            .map(|e| e.degree(&DegreeKind::OrdD))
            .max()
            .unwrap_or(-1)
            .max(0) as u64
    }

    /// Sum over components of the largest entry order in that component
    /// (the codimension-one comparison value; empty components count 0).
    pub fn order_sum(&self) -> u64 {
        (0..self.n)
            .map(|i| {
                self.generators
                    .iter()
                    .map(|row| row[i].degree(&DegreeKind::OrdD))
                    .max()
                    .unwrap_or(-1)
                    .max(0) as u64
            })
            .sum()
    }
}

/// Number of monomials of degree at most `deg` in `m` variables.
fn choose_dim(deg: u64, m: usize) -> u64 {
    let mut acc: u64 = 1;
    for i in 1..=m as u64 {
        acc = acc * (deg + i) / i;
    }
    acc
}

/// All exponent vectors of length `m` with total degree exactly `order`,
/// in a fixed deterministic order.
fn d_monomials(m: usize, order: u32) -> Vec<Vec<u32>> {
    fn rec(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot + 1 == cur.len() {
            cur[slot] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[slot] = e;
            rec(slot + 1, left - e, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    rec(0, order, &mut cur, &mut out);
    out
}

/// Hilbert-function values for `z = 0..=zmax`, with per-order flags saying
/// whether the saturation stabilized (`k_stab` consecutive equal estimates)
/// before hitting its extension cap.
#[derive(Clone, Debug)]
pub struct HilbertProfile {
    pub values: Vec<u64>,
    pub stabilized: Vec<bool>,
    /// Ranks were estimated by random specialization (exact whp).
    pub monte_carlo: bool,
}

/// Macaulay rows at one saturation level, kept symbolic so several
/// specialization points can reuse them.
struct LevelMatrix {
    /// Sparse rows: (column index, coefficient polynomial terms), where a
    /// term is an `X`-exponent vector with a scalar.
    rows: Vec<Vec<(usize, Vec<(Vec<u32>, FieldScalar)>)>>,
    ncols: usize,
    /// Number of columns of order greater than `z`, indexed by `z`.
    high_counts: Vec<usize>,
}

/// Builds the level-`cap` Macaulay matrix of a presentation: rows are the
/// products `D^beta * w_j` of order at most `cap`, columns the monomials
/// `e_i * D^gamma` of order at most `cap` sorted by order descending.
fn level_matrix(l: &ModulePresentation, cap: u64) -> LevelMatrix {
    let m = l.m;
    let n = l.n;
    // Columns: order descending, then component, then exponent order.
    let mut col_index: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    let mut order_boundary = vec![0usize; cap as usize + 2];
    let mut next = 0usize;
    for o in (0..=cap as u32).rev() {
        for i in 0..n {
            for dexp in d_monomials(m, o) {
                col_index.insert((i, dexp), next);
                next += 1;
            }
        }
        // After placing order o, columns of order > o-1 are exactly `next`.
        if o > 0 {
            order_boundary[o as usize - 1] = next;
        }
    }
    let ncols = next;
    let mut high_counts = vec![0usize; cap as usize + 1];
    for z in 0..=cap as usize {
        high_counts[z] = if z == cap as usize {
            0
        } else {
            order_boundary[z]
        };
    }
    let one = FieldScalar::one(l.field);
    let mut rows = Vec::new();
    for j in 0..l.s {
        let dj = l.row_order(j);
        if dj > cap {
            continue;
        }
        for o in 0..=(cap - dj) as u32 {
            for beta in d_monomials(m, o) {
                let theta = WeylOp::from_monomial(
                    Monomial {
                        xexp: vec![0; m],
                        dexp: beta.clone(),
                    },
                    one.clone(),
                );
                let mut entries: BTreeMap<usize, Vec<(Vec<u32>, FieldScalar)>> = BTreeMap::new();
                for (i, w) in l.generators[j].iter().enumerate() {
                    let prod = theta.mul(w);
                    for (mono, c) in prod.terms() {
                        let col = col_index[&(i, mono.dexp.clone())];
                        entries
                            .entry(col)
                            .or_default()
                            .push((mono.xexp.clone(), c.clone()));
                    }
                }
                rows.push(entries.into_iter().collect());
            }
        }
    }
    LevelMatrix {
        rows,
        ncols,
        high_counts,
    }
}

/// Specializes the symbolic rows at an integer point and returns the
/// column-prefix rank profile modulo one large prime.
fn specialized_profile(
    level: &LevelMatrix,
    point: &[FieldScalar],
    prime_index: usize,
) -> Vec<usize> {
    let field = point.first().map_or(FieldTag::Q, FieldScalar::field);
    let mut rows = Vec::with_capacity(level.rows.len());
    for row in &level.rows {
        let mut out = Vec::new();
        for (col, terms) in row {
            let mut acc = FieldScalar::zero(field);
            for (xexp, c) in terms {
                let mut t = c.clone();
                for (v, &e) in xexp.iter().enumerate() {
                    for _ in 0..e {
                        t = t.mul(&point[v]);
                    }
                }
                acc = acc.add(&t);
            }
            if !acc.is_zero() {
                out.push((*col, acc));
            }
        }
        rows.push(out);
    }
    let mat = ScalarMatrix::from_sparse_rows(rows, level.ncols, field);
    prefix_rank_profile(&mat, prime_index)
}

/// Computes Hilbert-function values for all `z <= zmax` by Macaulay
/// saturation. Each order's estimate is frozen as soon as it repeats for
/// `k_stab` consecutive extension levels, so the value at `z` does not
/// depend on `zmax`. Orders whose cap is exhausted first are reported with
/// their last estimate and a cleared `stabilized` flag. Characteristic
/// zero only (ranks go through integer specialization).
pub fn hilbert_profile(
    l: &ModulePresentation,
    zmax: u64,
    k_stab: u32,
    seed: u64,
) -> Result<HilbertProfile, HilbertError> {
    if l.field != FieldTag::Q {
        return Err(HilbertError::Weyl(WeylError::CharPUnsupported));
    }
    let m = l.m;
    let n = l.n as u64;
    let nz = zmax as usize + 1;
    let mut values = vec![0u64; nz];
    let mut stabilized = vec![false; nz];
    let mut resolved = vec![false; nz];
    let mut last_est = vec![u64::MAX; nz];
    let mut streak = vec![0u32; nz];
    // The extension cap must leave room for at least `k_stab` observations
    // (degenerate for derivation-free presentations, where d = 0).
    let caps: Vec<u64> = (0..=zmax)
        .map(|z| bounds::hilbert_saturation_bound(z, l.d, l.s).max(z + k_stab as u64))
        .collect();
    let mut level: u64 = 0;
    while resolved.iter().any(|r| !r) {
        // Retire orders whose extension cap is behind us.
        for z in 0..nz {
            if !resolved[z] && level > caps[z] {
                resolved[z] = true;
                values[z] = last_est[z];
            }
        }
        if resolved.iter().all(|r| *r) {
            break;
        }
        let lm = level_matrix(l, level);
        // Up to three specialization points, each with its own prime; stop
        // as soon as an extra point no longer improves the combined profile.
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add(level.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let mut combined = vec![0usize; lm.ncols + 1];
        for trial in 0..3usize {
            let point: Vec<FieldScalar> = (0..m)
                .map(|_| FieldScalar::from_i64(rng.gen_range(-(1 << 16)..=1 << 16), FieldTag::Q))
                .collect();
            let profile = specialized_profile(&lm, &point, trial);
            let mut changed = false;
            for (c, p) in combined.iter_mut().zip(&profile) {
                if *p > *c {
                    *c = *p;
                    changed = true;
                }
            }
            if trial >= 1 && !changed {
                break;
            }
        }
        let rank = combined[lm.ncols];
        for z in 0..nz.min(level as usize + 1) {
            if resolved[z] {
                continue;
            }
            let inter = rank - combined[lm.high_counts[z]];
            let est = n * choose_dim(z as u64, m) - inter as u64;
            debug_assert!(
                last_est[z] == u64::MAX || est <= last_est[z],
                "saturation estimates must be non-increasing"
            );
            if est == last_est[z] {
                streak[z] += 1;
            } else {
                last_est[z] = est;
                streak[z] = 1;
            }
            if streak[z] >= k_stab {
                resolved[z] = true;
                stabilized[z] = true;
                values[z] = est;
            }
        }
        level += 1;
    }
    Ok(HilbertProfile {
        values,
        stabilized,
        monte_carlo: true,
    })
}

/// One Hilbert-function value (see [`hilbert_profile`]); returns the
/// estimate at the extension cap even if it never stabilized.
pub fn hilbert_function(
    l: &ModulePresentation,
    z: u64,
    k_stab: u32,
    seed: u64,
) -> Result<u64, HilbertError> {
    Ok(hilbert_profile(l, z, k_stab, seed)?.values[z as usize])
}

/// Result of fitting a polynomial to a Hilbert-function tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HkFit {
    /// All values are zero: the quotient is the zero module.
    Zero,
    Poly {
        /// Degree of the fitted polynomial (the differential type).
        t: u32,
        /// `t!` times the leading coefficient (the typical differential
        /// dimension).
        l: BigRational,
        /// Coefficients of the fitted polynomial, ascending in `z`.
        coeffs: Vec<BigRational>,
    },
}

fn rat_int(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Fits the minimal-degree polynomial matching a tail of the value list
/// (pairs `(z, HF(z))` with consecutive `z`). Degree `t` is accepted when
/// the `(t+1)`-st finite differences vanish on a tail covering at least
/// `t + 3` points; the fit is verified exactly against that tail.
pub fn hk_fit(points: &[(u64, u64)]) -> Result<HkFit, HilbertError> {
    if points.len() < 3 {
        return Err(HilbertError::NotStabilized(
            "need at least three Hilbert values to fit".into(),
        ));
    }
    for w in points.windows(2) {
        assert_eq!(w[1].0, w[0].0 + 1, "values must cover consecutive orders");
    }
    if points.iter().all(|&(_, v)| v == 0) {
        return Ok(HkFit::Zero);
    }
    let vals: Vec<i128> = points.iter().map(|&(_, v)| v as i128).collect();
    for t in 0..=(points.len() - 3) {
        // Difference tables up to order t+1.
        let mut table = vec![vals.clone()];
        for _ in 0..=t {
            let prev = table.last().expect("nonempty table");
            table.push(prev.windows(2).map(|w| w[1] - w[0]).collect());
        }
        let top = table.last().expect("nonempty table");
        let zeros = top.iter().rev().take_while(|&&v| v == 0).count();
        // The zero entries of the (t+1)-st differences span zeros + t + 1
        // original points; require at least t + 3.
        if zeros < 2 {
            continue;
        }
        let window = zeros + t + 1;
        // Newton forward interpolation from the first point of the tail.
        let start = points.len() - window;
        let z0 = points[start].0;
        let mut coeffs = vec![BigRational::from_integer(BigInt::from(0)); t + 1];
        // Accumulates C(z - z0, k) as a polynomial in z.
        let mut basis = vec![rat_int(1)];
        for k in 0..=t {
            let delta = rat_int(table[k][start]);
            for (c, b) in coeffs.iter_mut().zip(&basis) {
                *c += &delta * b;
            }
            // basis *= (z - z0 - k) / (k + 1)
            let shift = rat_int(z0 as i128 + k as i128);
            let div = rat_int(k as i128 + 1);
            let mut nextb = vec![BigRational::from_integer(BigInt::from(0)); basis.len() + 1];
            for (p, b) in basis.iter().enumerate() {
                nextb[p + 1] += b / &div;
                nextb[p] -= b * &shift / &div;
            }
            basis = nextb;
        }
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c == &rat_int(0)) {
            coeffs.pop();
        }
        // Defensive: the fit must reproduce every point of the tail.
        for &(z, v) in &points[start..] {
            let mut acc = BigRational::from_integer(BigInt::from(0));
            for c in coeffs.iter().rev() {
                acc = acc * rat_int(z as i128) + c;
            }
            assert_eq!(acc, rat_int(v as i128), "fitted polynomial must match the tail");
        }
        let t_actual = coeffs.len() - 1;
        let mut l = coeffs.last().expect("nonempty coefficients").clone();
        for k in 1..=t_actual {
            l *= rat_int(k as i128);
        }
        return Ok(HkFit::Poly {
            t: t_actual as u32,
            l,
            coeffs,
        });
    }
    Err(HilbertError::NotStabilized(
        "no polynomial tail detected in the supplied Hilbert values".into(),
    ))
}

/// The default derivation-subset sweep for principal-element searches:
/// sliding windows of size `t + 1`.
pub fn principal_candidates(m: usize, t: u32) -> Vec<VarSet> {
    let size = t as usize + 1;
    if size > m {
        return Vec::new();
    }
    (1..=m - size + 1)
        .map(|a| {
            let idx: Vec<usize> = (a..a + size).collect();
            VarSet::from_indices(m, &idx)
        })
        .collect()
}

/// Searches for a nonzero element of `L` concentrated in component `i0`
/// (1-based) with value in `A^(K)`: solves `sum_j C_j w_{i,j} = delta_{i,i0}`
/// for fractions `C_j` over `Q^(K)` and clears their denominators on the
/// left. Returns the monic denominator `b` with `(0,..,b,..,0) in L`, after
/// re-verifying membership by exact normal-ordered expansion; `None` when
/// the solver certifies the system unsolvable for this `K`.
pub fn principal_element(
    l: &ModulePresentation,
    i0: usize,
    k: &VarSet,
    seed: u64,
) -> Result<Option<WeylOp>, HilbertError> {
    assert!(i0 >= 1 && i0 <= l.n, "component index out of range");
    let m = l.m;
    let field = l.field;
    let ctx = FractionContext::new(m, field, VarSet::full(m), *k)?;
    // The unknowns multiply the generators from the left; the solver wants
    // them on the right, so transport everything through the adjoint
    // anti-automorphism (which fixes A^(K) setwise).
    let rows: Vec<Vec<WeylOp>> = (0..l.n)
        .map(|i| (0..l.s).map(|j| l.generators[j][i].adjoint()).collect())
        .collect();
    let rhs: Vec<WeylOp> = (0..l.n)
        .map(|i| {
            if i + 1 == i0 {
                WeylOp::one(m, field)
            } else {
                WeylOp::zero(m, field)
            }
        })
        .collect();
    let sys = LinearSystem::new(OpMatrix::from_rows(rows, m, field)?, rhs, ctx)?;
    let outcome = decide_solve(&sys, seed, &SolveBudget::default())?;
    let sol = match outcome.status {
        SolveStatus::Unsolvable => return Ok(None),
        SolveStatus::UndecidedAtCap => return Err(HilbertError::ResourceCap),
        SolveStatus::Solved => outcome.solution.expect("solved outcome has a solution"),
    };
    // Shared right denominator for all solution components, then back
    // through the adjoint: b^-1 * a_j solves the original system.
    let dens: Vec<WeylOp> = sol.iter().map(|v| v.den().clone()).collect();
    let (cofs, shared) = common_multiple(&dens, k, Side::Right)?;
    let numerators: Vec<WeylOp> = sol
        .iter()
        .zip(&cofs)
        .map(|(v, c)| v.num().mul(c))
        .collect();
    let b_raw = shared.adjoint();
    let lead = b_raw
        .leading_monomial()
        .cloned()
        .expect("denominator is nonzero");
    let scale = b_raw.coefficient(&lead).inv().expect("leading coefficient nonzero");
    let b = b_raw.scale(&scale);
    let combiners: Vec<WeylOp> = numerators.iter().map(|u| u.adjoint().scale(&scale)).collect();
    // Membership certificate: the combination of generator rows with the
    // cleared coefficients must give exactly (0,..,b,..,0).
    for i in 0..l.n {
        let mut acc = WeylOp::zero(m, field);
        for j in 0..l.s {
            acc = acc.add(&combiners[j].mul(&l.generators[j][i]));
        }
        let expected = if i + 1 == i0 {
            b.clone()
        } else {
            WeylOp::zero(m, field)
        };
        if acc != expected {
            return Err(HilbertError::Solve(SolveError::VerificationFailed));
        }
    }
    debug_assert!(b.in_subalgebra(k));
    Ok(Some(b))
}

/// Bound-comparison block of a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    /// The general leading-coefficient bound for these parameters.
    pub bezout: BigUint,
    /// Sum-of-orders comparison value, present only when `m - t = 1`.
    pub kolchin_sum: Option<u64>,
    /// Whether `l` satisfies every applicable bound.
    pub satisfied: bool,
}

/// Full analysis of one presentation: Hilbert values, fitted polynomial,
/// differential type and typical differential dimension, bound verdicts.
#[derive(Clone, Debug)]
pub struct HKReport {
    pub hf: Vec<(u64, u64)>,
    /// Differential type; `-1` marks the zero quotient.
    pub t: i64,
    pub l: BigRational,
    /// Fitted polynomial coefficients, ascending in `z` (empty for the
    /// zero quotient).
    pub poly: Vec<BigRational>,
    pub bounds: BoundReport,
    /// Ranks were estimated by random specialization (exact whp).
    pub monte_carlo: bool,
}

/// Computes the Hilbert function on `z = 0..=zmax`, fits its polynomial
/// tail, and checks the leading coefficient against the applicable bounds.
pub fn bezout_check(
    l: &ModulePresentation,
    zmax: u64,
    seed: u64,
) -> Result<HKReport, HilbertError> {
    let profile = hilbert_profile(l, zmax, 2, seed)?;
    for (z, ok) in profile.stabilized.iter().enumerate() {
        if !ok {
            return Err(HilbertError::NotStabilized(format!(
                "order {z} did not stabilize within its extension cap"
            )));
        }
    }
    let hf: Vec<(u64, u64)> = profile
        .values
        .iter()
        .enumerate()
        .map(|(z, &v)| (z as u64, v))
        .collect();
    let fit = hk_fit(&hf)?;
    let report = match fit {
        HkFit::Zero => HKReport {
            hf,
            t: -1,
            l: BigRational::from_integer(BigInt::from(0)),
            poly: Vec::new(),
            bounds: BoundReport {
                bezout: bounds::bezout_bound(l.n, l.s, l.m, l.d, l.m as i64),
                kolchin_sum: None,
                satisfied: true,
            },
            monte_carlo: profile.monte_carlo,
        },
        HkFit::Poly { t, l: lc, coeffs } => {
            let bez = bounds::bezout_bound(l.n, l.s, l.m, l.d, t as i64);
            let mut satisfied = lc <= BigRational::from_integer(BigInt::from(bez.clone()));
            let kolchin_sum = if l.m as i64 - t as i64 == 1 {
                let sum = l.order_sum();
                satisfied = satisfied && lc <= rat_int(sum as i128);
                Some(sum)
            } else {
                None
            };
            HKReport {
                hf,
                t: t as i64,
                l: lc,
                poly: coeffs,
                bounds: BoundReport {
                    bezout: bez,
                    kolchin_sum,
                    satisfied,
                },
                monte_carlo: profile.monte_carlo,
            }
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, m: usize) -> WeylOp {
        WeylOp::var_x(i, m, FieldTag::Q)
    }
    fn d(i: usize, m: usize) -> WeylOp {
        WeylOp::var_d(i, m, FieldTag::Q)
    }
    fn one(m: usize) -> WeylOp {
        WeylOp::one(m, FieldTag::Q)
    }
    fn present(rows: Vec<Vec<WeylOp>>, m: usize) -> ModulePresentation {
        ModulePresentation::new(rows, m, FieldTag::Q).unwrap()
    }
    fn pairs(values: &[u64]) -> Vec<(u64, u64)> {
        values
            .iter()
            .enumerate()
            .map(|(z, &v)| (z as u64, v))
            .collect()
    }

    #[test]
    fn presentation_validation() {
        assert!(matches!(
            ModulePresentation::new(vec![], 1, FieldTag::Q),
            Err(HilbertError::InvalidPresentation(_))
        ));
        assert!(matches!(
            ModulePresentation::new(vec![vec![WeylOp::zero(1, FieldTag::Q)]], 1, FieldTag::Q),
            Err(HilbertError::InvalidPresentation(_))
        ));
        let l = present(vec![vec![d(1, 2).mul(&d(2, 2)), x(1, 2)]], 2);
        assert_eq!((l.m(), l.n(), l.s(), l.d()), (2, 2, 1, 2));
        assert_eq!(l.order_sum(), 2);
    }

    #[test]
    fn monomial_counts_match_closed_form() {
        for m in 1..=3usize {
            for cap in 0..=4u64 {
                let total: usize = (0..=cap as u32).map(|o| d_monomials(m, o).len()).sum();
                assert_eq!(total as u64, choose_dim(cap, m));
            }
        }
    }

    #[test]
    fn hf_single_derivation_one_variable() {
        let l = present(vec![vec![d(1, 1)]], 1);
        let p = hilbert_profile(&l, 4, 2, 7).unwrap();
        assert_eq!(p.values, vec![1, 1, 1, 1, 1]);
        assert!(p.stabilized.iter().all(|&b| b));
    }

    #[test]
    fn hf_single_derivation_two_variables() {
        let l = present(vec![vec![d(1, 2)]], 2);
        let p = hilbert_profile(&l, 6, 2, 7).unwrap();
        assert_eq!(p.values, vec![1, 2, 3, 4, 5, 6, 7]);
        assert!(p.stabilized.iter().all(|&b| b));
    }

    #[test]
    fn hf_second_order_operator() {
        let l = present(vec![vec![d(1, 1).mul(&d(1, 1))]], 1);
        let p = hilbert_profile(&l, 5, 2, 7).unwrap();
        assert_eq!(p.values, vec![1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn hf_gradient_module() {
        let l = present(vec![vec![d(1, 2)], vec![d(2, 2)]], 2);
        let p = hilbert_profile(&l, 4, 2, 7).unwrap();
        assert_eq!(p.values, vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn hf_unit_module_is_zero() {
        // x1 is invertible over F(X), so L is everything.
        let l = present(vec![vec![x(1, 1)]], 1);
        let p = hilbert_profile(&l, 4, 2, 7).unwrap();
        assert_eq!(p.values, vec![0, 0, 0, 0, 0]);
        assert_eq!(hk_fit(&pairs(&p.values)).unwrap(), HkFit::Zero);
    }

    #[test]
    fn hf_values_independent_of_batch_width() {
        let l = present(vec![vec![d(1, 2)]], 2);
        let narrow = hilbert_function(&l, 3, 2, 99).unwrap();
        let wide = hilbert_profile(&l, 6, 2, 99).unwrap();
        assert_eq!(narrow, wide.values[3]);
    }

    #[test]
    fn fit_constant() {
        let fit = hk_fit(&pairs(&[1, 1, 1, 1])).unwrap();
        assert_eq!(
            fit,
            HkFit::Poly {
                t: 0,
                l: rat_int(1),
                coeffs: vec![rat_int(1)],
            }
        );
    }

    #[test]
    fn fit_linear() {
        let fit = hk_fit(&pairs(&[1, 2, 3, 4, 5])).unwrap();
        match fit {
            HkFit::Poly { t, l, coeffs } => {
                assert_eq!(t, 1);
                assert_eq!(l, rat_int(1));
                assert_eq!(coeffs, vec![rat_int(1), rat_int(1)]);
            }
            HkFit::Zero => panic!("nonzero values"),
        }
    }

    #[test]
    fn fit_binomial() {
        let fit = hk_fit(&pairs(&[1, 3, 6, 10, 15])).unwrap();
        match fit {
            HkFit::Poly { t, l, coeffs } => {
                assert_eq!(t, 2);
                assert_eq!(l, rat_int(1));
                // C(z+2, 2) = 1 + 3z/2 + z^2/2.
                assert_eq!(
                    coeffs,
                    vec![
                        rat_int(1),
                        BigRational::new(BigInt::from(3), BigInt::from(2)),
                        BigRational::new(BigInt::from(1), BigInt::from(2)),
                    ]
                );
            }
            HkFit::Zero => panic!("nonzero values"),
        }
    }

    #[test]
    fn fit_rejects_exponential_growth() {
        assert!(matches!(
            hk_fit(&pairs(&[1, 2, 4, 8, 16])),
            Err(HilbertError::NotStabilized(_))
        ));
        assert!(matches!(
            hk_fit(&pairs(&[5, 9])),
            Err(HilbertError::NotStabilized(_))
        ));
    }

    #[test]
    fn fit_uses_tail_not_head() {
        // Pre-stable junk at z = 0 must not spoil the tail fit.
        let fit = hk_fit(&pairs(&[7, 2, 2, 2, 2])).unwrap();
        match fit {
            HkFit::Poly { t, l, .. } => {
                assert_eq!(t, 0);
                assert_eq!(l, rat_int(2));
            }
            HkFit::Zero => panic!("nonzero values"),
        }
    }

    #[test]
    fn principal_sweep_windows() {
        let sweep = principal_candidates(3, 1);
        assert_eq!(sweep.len(), 2);
        assert_eq!(sweep[0], VarSet::from_indices(3, &[1, 2]));
        assert_eq!(sweep[1], VarSet::from_indices(3, &[2, 3]));
        assert!(principal_candidates(2, 2).is_empty());
    }

    #[test]
    fn principal_element_trivial() {
        let l = present(vec![vec![one(1)]], 1);
        let b = principal_element(&l, 1, &VarSet::empty(1), 3).unwrap();
        assert_eq!(b, Some(one(1)));
    }

    #[test]
    fn principal_element_pair_of_derivations() {
        let l = present(vec![vec![d(1, 2)], vec![d(2, 2)]], 2);
        let b = principal_element(&l, 1, &VarSet::from_indices(2, &[1]), 3).unwrap();
        assert_eq!(b, Some(d(1, 2)));
    }

    #[test]
    fn principal_element_diagonal_module() {
        let rows = vec![
            vec![d(1, 2), WeylOp::zero(2, FieldTag::Q)],
            vec![WeylOp::zero(2, FieldTag::Q), x(1, 2)],
        ];
        let l = present(rows, 2);
        let b = principal_element(&l, 1, &VarSet::from_indices(2, &[1]), 3).unwrap();
        assert_eq!(b, Some(d(1, 2)));
    }

    #[test]
    fn principal_element_reports_failure() {
        // K = {1} cannot produce an element of A^({1}) from d2 alone.
        let l = present(vec![vec![d(2, 2)]], 2);
        let b = principal_element(&l, 1, &VarSet::from_indices(2, &[1]), 3).unwrap();
        assert_eq!(b, None);
    }

    #[test]
    fn bezout_report_for_line_module() {
        let l = present(vec![vec![d(1, 2)]], 2);
        let r = bezout_check(&l, 6, 11).unwrap();
        assert_eq!(r.t, 1);
        assert_eq!(r.l, rat_int(1));
        assert_eq!(r.bounds.bezout, BigUint::from(256u32));
        assert_eq!(r.bounds.kolchin_sum, Some(1));
        assert!(r.bounds.satisfied);
        assert!(r.monte_carlo);
        assert_eq!(r.hf, pairs(&[1, 2, 3, 4, 5, 6, 7]));
    }

    #[test]
    fn bezout_report_for_power_modules() {
        for k in 1..=4u32 {
            let l = present(vec![vec![d(1, 1).pow(k)]], 1);
            let r = bezout_check(&l, 6, 11).unwrap();
            assert_eq!(r.t, 0, "power {k}");
            assert_eq!(r.l, rat_int(k as i128));
            // m - t = 1: the sum-of-orders bound is met with equality.
            assert_eq!(r.bounds.kolchin_sum, Some(k as u64));
            assert!(r.bounds.satisfied);
        }
    }

    #[test]
    fn bezout_report_for_zero_quotient() {
        let l = present(vec![vec![one(1)]], 1);
        let r = bezout_check(&l, 4, 11).unwrap();
        assert_eq!(r.t, -1);
        assert_eq!(r.l, rat_int(0));
        assert!(r.poly.is_empty());
        assert!(r.bounds.satisfied);
    }

    #[test]
    fn bezout_report_full_gradient() {
        for m in 1..=3usize {
            let rows: Vec<Vec<WeylOp>> = (1..=m).map(|i| vec![d(i, m)]).collect();
            let l = present(rows, m);
            let r = bezout_check(&l, 5, 11).unwrap();
            assert_eq!((r.t, r.l.clone()), (0, rat_int(1)), "m = {m}");
            assert!(r.bounds.satisfied);
        }
    }
}
