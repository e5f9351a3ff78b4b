//! Deciding linear systems over fraction algebras of differential operators.
//!
//! Two independent solvers are provided.
//!
//! The *elimination* solver ([`decide_solve`]) is constructive and complete:
//! it reduces the system to trapezoidal form, then repeatedly eliminates one
//! derivation `D_gamma` that is allowed in numerators but not denominators.
//! One elimination round finds, for every free column, an operator relation
//! tying that column to the pivots; changes coordinates so every relevant
//! operator's `D_gamma`-degree equals its full order outside the denominator
//! set ("normalization"); bounds the `D_gamma`-degree of each unknown; and
//! equates coefficients of powers of `D_gamma`, producing an equivalent
//! system over the smaller numerator algebra. When numerator and denominator
//! algebras coincide, Gaussian elimination over the skew fraction field
//! finishes the job. Solvability is preserved exactly in both directions at
//! every step, so `Unsolvable` is a certified verdict.
//!
//! The *ansatz* solver ([`ansatz_solve`]) posits a shared-denominator
//! solution of bounded degree and solves for its coefficients as a scalar
//! linear system. It is fast on low-degree solutions and serves as a
//! cross-check of the elimination pipeline; it can certify unsolvability
//! only when its schedule reaches the (astronomical) theoretical degree
//! bound.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds;
use crate::linalg::ScalarMatrix;
use crate::matrix::{
    trapezoid_reduce, FractionMatrix, LinearSystem, MatrixError, OpMatrix, TrapezoidOutcome,
    TrapezoidSystem,
};
use crate::ore::{AnsatzUnknown, FractionContext, OperatorSolver, OreError, OreFraction, Side};
use crate::scalar::{FieldScalar, FieldTag};
use crate::weyl::{BasisChange, DegreeKind, VarSet, WeylError, WeylOp};

/// Errors raised by the solving pipeline.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("no normalizing transform found within the retry limit")]
    RetryLimitExceeded,
    #[error("divisor is not normalized with respect to the chosen derivation")]
    NotNormalized,
    #[error("internal check failed: candidate solution does not satisfy the system")]
    VerificationFailed,
}

/// Verdict of a solve run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    Unsolvable,
    UndecidedAtCap,
}

/// One line of the degree ledger: what a pipeline stage looked like and
/// which bounds applied to it.
#[derive(Clone, Debug)]
pub struct StageCertificate {
    pub stage: String,
    pub equations: usize,
    pub unknowns: usize,
    pub max_entry_degree: i64,
    pub detail: String,
}

/// Result of a solve: status, a solution when one was found (components are
/// fractions in the system's context), and the per-stage degree ledger.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solution: Option<Vec<OreFraction>>,
    pub certificates: Vec<StageCertificate>,
}

impl SolveOutcome {
    fn undecided(certificates: Vec<StageCertificate>) -> Self {
        SolveOutcome {
            status: SolveStatus::UndecidedAtCap,
            solution: None,
            certificates,
        }
    }
    fn unsolvable(certificates: Vec<StageCertificate>) -> Self {
        SolveOutcome {
            status: SolveStatus::Unsolvable,
            solution: None,
            certificates,
        }
    }
}

/// Resource budget for [`decide_solve`]; exceeding it yields
/// [`SolveStatus::UndecidedAtCap`] instead of an unbounded computation.
#[derive(Clone, Copy, Debug)]
pub struct SolveBudget {
    /// Cap on the max entry degree of any intermediate system.
    pub max_entry_degree: i64,
    /// Cap on equations x unknowns of any intermediate system.
    pub max_cells: usize,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget {
            max_entry_degree: 64,
            max_cells: 4096,
        }
    }
}

/// The coordinate change that makes a family of operators normalized with
/// respect to `D_gamma`, together with how many candidates were tried.
#[derive(Clone, Debug)]
pub struct NormalizationRecord {
    pub omega: ScalarMatrix,
    pub gamma: usize,
    pub attempts: usize,
}

fn identity_matrix(n: usize, field: FieldTag) -> ScalarMatrix {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        FieldScalar::one(field)
                    } else {
                        FieldScalar::zero(field)
                    }
                })
                .collect()
        })
        .collect();
    ScalarMatrix::from_rows(rows, field)
}

/// Whether `h` (nonzero) is normalized with respect to `D_gamma` over the
/// denominator set `kd`: its `D_gamma`-degree equals its order in the
/// derivations outside `kd`, and consequently its leading
/// `D_gamma`-coefficient lies in the denominator subalgebra.
fn is_normalized(h: &WeylOp, gamma: usize, kd: &VarSet) -> bool {
    if h.is_zero() {
        return false;
    }
    if h.dgamma_degree(gamma) != h.degree(&DegreeKind::OrdOutside(*kd)) {
        return false;
    }
    match h.gamma_leading(gamma) {
        Some((_, lc)) => lc.in_subalgebra(kd),
        None => false,
    }
}

/// Finds an invertible scalar mix of the derivations outside `kd` (and the
/// contragredient mix of the matching position variables) under which every
/// member of `family` becomes normalized with respect to `D_gamma`. The
/// identity is tried first; failing that, random integer matrices are drawn
/// from a widening range. The good set is Zariski-open, so success is
/// expected within a couple of attempts.
pub fn normalize_family(
    family: &[WeylOp],
    gamma: usize,
    ka: &VarSet,
    kd: &VarSet,
    seed: u64,
) -> Result<(NormalizationRecord, Vec<WeylOp>), SolveError> {
    let m = ka.m();
    let vars = ka.minus(kd).to_vec();
    assert!(vars.contains(&gamma), "gamma must be outside the denominator set");
    assert!(family.iter().all(|h| !h.is_zero()), "family members must be nonzero");
    let field = family
        .first()
        .map_or(FieldTag::Q, WeylOp::field);
    let n = vars.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range: i64 = 8;
    for attempt in 1..=32usize {
        let omega = if attempt == 1 {
            identity_matrix(n, field)
        } else {
            let rows = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| FieldScalar::from_i64(rng.gen_range(-range..=range), field))
                        .collect()
                })
                .collect();
            range = range.saturating_mul(2);
            ScalarMatrix::from_rows(rows, field)
        };
        let Ok(change) = BasisChange::new(m, field, &vars, &omega) else {
            continue; // singular draw
        };
        let images: Vec<WeylOp> = family.iter().map(|h| change.apply(h)).collect();
        if images.iter().all(|h| is_normalized(h, gamma, kd)) {
            return Ok((
                NormalizationRecord {
                    omega,
                    gamma,
                    attempts: attempt,
                },
                images,
            ));
        }
    }
    Err(SolveError::RetryLimitExceeded)
}

/// Right division with remainder by `D_gamma`-degree: returns `(phi, psi)`
/// with `v = h*phi + psi` and the `D_gamma`-degree of `psi` strictly below
/// that of `h`. Requires `h` normalized with respect to `D_gamma` (leading
/// `D_gamma`-coefficient in the denominator subalgebra), which makes the
/// leading coefficient invertible and the recurrence well defined. The
/// `D_gamma`-degree of a fraction is that of its numerator; this is
/// representation independent because denominators are free of `D_gamma`.
pub fn gamma_div_rem(
    v: &OreFraction,
    h: &WeylOp,
    gamma: usize,
    ctx: &FractionContext,
) -> Result<(OreFraction, OreFraction), SolveError> {
    let m = ctx.m();
    let field = ctx.field();
    assert!(
        !ctx.kd().contains(gamma),
        "division variable must lie outside the denominator set"
    );
    let Some((t, lc)) = h.gamma_leading(gamma) else {
        return Err(SolveError::NotNormalized);
    };
    if !lc.in_subalgebra(&ctx.kd()) {
        return Err(SolveError::NotNormalized);
    }
    let lc_inv = OreFraction::new(WeylOp::one(m, field), lc, ctx)?;
    let h_frac = OreFraction::embed(h, ctx)?;
    let mut phi = OreFraction::zero(ctx);
    let mut psi = v.clone();
    while !psi.is_zero() && psi.num().dgamma_degree(gamma) >= t as i64 {
        let (t1, lead_num) = psi
            .num()
            .gamma_leading(gamma)
            .expect("nonzero remainder has a leading level");
        let lead = OreFraction::new(lead_num, psi.den().clone(), ctx)?;
        let dpow = OreFraction::embed(&WeylOp::var_d(gamma, m, field).pow(t1 - t), ctx)?;
        let phi_top = dpow.mul(&lc_inv, ctx)?.mul(&lead, ctx)?;
        let next = psi.sub(&h_frac.mul(&phi_top, ctx)?, ctx)?;
        debug_assert!(
            next.is_zero() || next.num().dgamma_degree(gamma) < t1 as i64,
            "division step must lower the D_gamma degree"
        );
        psi = next;
        phi = phi.add(&phi_top, ctx)?;
    }
    Ok((phi, psi))
}

/// Everything needed to map a solution of the emitted (eliminated) system
/// back to a solution of the trapezoid's original input system.
#[derive(Clone, Debug)]
pub struct EliminationRecord {
    pub gamma: usize,
    /// Context of the stage input (the trapezoid's context).
    pub ctx: FractionContext,
    pub normalization: NormalizationRecord,
    inverse_change: BasisChange,
    /// Column permutation of the trapezoid: `col_perm[i]` is the original
    /// unknown index of permuted column `i`.
    pub col_perm: Vec<usize>,
    /// Unknown count of the trapezoid system.
    pub q: usize,
    /// Per trapezoid column, the allowed `D_gamma`-degree of its unknown
    /// (`-1` forces that unknown to zero).
    pub caps: Vec<i64>,
    /// Emitted column -> (trapezoid column, `D_gamma` power).
    pub layout: Vec<(usize, u32)>,
    /// Degrees at which the per-column operator relations were found.
    pub syzygy_degrees: Vec<i64>,
}

impl EliminationRecord {
    /// Lifts a solution of the emitted system to one of the trapezoid's
    /// input system: regroups the level unknowns into `D_gamma`-polynomial
    /// fractions, undoes the normalizing coordinate change, and undoes the
    /// trapezoid column permutation.
    pub fn back_substitute(&self, psi: &[OreFraction]) -> Result<Vec<OreFraction>, SolveError> {
        assert_eq!(psi.len(), self.layout.len());
        let m = self.ctx.m();
        let field = self.ctx.field();
        let mut grouped = vec![OreFraction::zero(&self.ctx); self.q];
        for (col, &(jp, s)) in self.layout.iter().enumerate() {
            if psi[col].is_zero() {
                continue;
            }
            // Lift into the wider stage context, then prepend D_gamma^s.
            let lifted = OreFraction::new(psi[col].num().clone(), psi[col].den().clone(), &self.ctx)?;
            let dpow = WeylOp::var_d(self.gamma, m, field).pow(s);
            let term = lifted.left_mul_op(&dpow, &self.ctx)?;
            grouped[jp] = grouped[jp].add(&term, &self.ctx)?;
        }
        let mut out = vec![OreFraction::zero(&self.ctx); self.q];
        for (i, w) in grouped.into_iter().enumerate() {
            let num = self.inverse_change.apply(w.num());
            let den = self.inverse_change.apply(w.den());
            out[self.col_perm[i]] = OreFraction::new(num, den, &self.ctx)?;
        }
        Ok(out)
    }
}

/// Eliminates `D_gamma` from a trapezoidal system: produces an equivalent
/// linear system whose coefficients live in the numerator algebra without
/// `gamma`, together with the record for mapping solutions back. The two
/// systems are solvable simultaneously.
pub fn eliminate_gamma(
    trap: &TrapezoidSystem,
    gamma: usize,
    seed: u64,
) -> Result<(EliminationRecord, LinearSystem), SolveError> {
    let ctx = trap.ctx;
    let m = ctx.m();
    let field = ctx.field();
    let ka = ctx.ka();
    let kd = ctx.kd();
    assert!(ka.contains(gamma) && !kd.contains(gamma));
    let r = trap.r;
    let q = trap.q;
    let nfree = q - r;
    let deg_kind = DegreeKind::DegWith(ka);
    let d_entry = trap
        .diag
        .iter()
        .chain(trap.rest.iter().flatten())
        .map(|g| g.degree(&deg_kind))
        .max()
        .unwrap_or(-1)
        .max(0) as u64;
    // Per free column i: a relation diag_j * h_j + rest[j][i] * h = 0 for
    // all j, with h automatically nonzero (h = 0 would force all h_j = 0
    // because the diagonal entries are nonzero and the algebra is a domain).
    let mut hs: Vec<WeylOp> = Vec::with_capacity(nfree);
    let mut syzygy_degrees = Vec::with_capacity(nfree);
    for i in 0..nfree {
        if r == 0 {
            hs.push(WeylOp::one(m, field));
            syzygy_degrees.push(0);
            continue;
        }
        let cap = bounds::clamp_degree(&bounds::syzygy_degree_bound(
            m,
            ka.len(),
            r + 1,
            d_entry,
        ));
        let unknowns = (0..=r)
            .map(|_| AnsatzUnknown {
                dvars: ka,
                cap: None,
            })
            .collect();
        let mut solver = OperatorSolver::new(m, field, unknowns);
        for j in 0..r {
            solver.add_equation(
                vec![
                    (j, trap.diag[j].clone(), Side::Right),
                    (r, trap.rest[j][i].clone(), Side::Right),
                ],
                WeylOp::zero(m, field),
            );
        }
        let (mut u, deg) = solver.search_kernel(cap, None).ok_or(OreError::SearchExhausted {
            what: "elimination relation",
            cap,
        })?;
        let h = u.pop().expect("one unknown per element");
        debug_assert!(!h.is_zero());
        hs.push(h);
        syzygy_degrees.push(deg);
    }
    // Normalize the relations together with the pivots — the degree caps
    // below need both.
    let family: Vec<WeylOp> = hs.iter().chain(trap.diag.iter()).cloned().collect();
    let (normalization, _) = normalize_family(&family, gamma, &ka, &kd, seed)?;
    let vars = ka.minus(&kd).to_vec();
    let change = BasisChange::new(m, field, &vars, &normalization.omega)?;
    let inv_omega = normalization
        .omega
        .inverse()
        .expect("normalizing matrix is invertible");
    let inverse_change = BasisChange::new(m, field, &vars, &inv_omega)?;
    let diag_t: Vec<WeylOp> = trap.diag.iter().map(|g| change.apply(g)).collect();
    let rest_t: Vec<Vec<WeylOp>> = trap
        .rest
        .iter()
        .map(|row| row.iter().map(|g| change.apply(g)).collect())
        .collect();
    let rhs_t: Vec<WeylOp> = trap.rhs.iter().map(|f| change.apply(f)).collect();
    let hs_t: Vec<WeylOp> = hs.iter().map(|h| change.apply(h)).collect();
    // Degree caps: a free unknown can be replaced by its remainder under
    // right division by the (normalized) relation operator, so its
    // D_gamma-degree drops below that of the relation; a pivot unknown's
    // degree is then forced by its equation, because multiplication by a
    // normalized pivot adds D_gamma-degrees exactly.
    let mut caps = vec![-1i64; q];
    for i in 0..nfree {
        caps[r + i] = hs_t[i].dgamma_degree(gamma) - 1;
    }
    for j in 0..r {
        let mut rhs_side = rhs_t[j].dgamma_degree(gamma);
        for i in 0..nfree {
            if caps[r + i] < 0 || rest_t[j][i].is_zero() {
                continue;
            }
            rhs_side = rhs_side.max(rest_t[j][i].dgamma_degree(gamma) + caps[r + i]);
        }
        caps[j] = (rhs_side - diag_t[j].dgamma_degree(gamma)).max(-1);
    }
    let mut layout: Vec<(usize, u32)> = Vec::new();
    for jp in 0..q {
        for s in 0..=caps[jp].max(-1) {
            layout.push((jp, s as u32));
        }
    }
    // Expand coefficient * D_gamma^s and equate left D_gamma powers.
    let mut coeff_rows: BTreeMap<(usize, u32), Vec<(usize, WeylOp)>> = BTreeMap::new();
    let mut rhs_rows: BTreeMap<(usize, u32), WeylOp> = BTreeMap::new();
    for j in 0..r {
        for (l, f_l) in rhs_t[j].gamma_decompose(gamma) {
            rhs_rows.insert((j, l), f_l);
        }
        for (col, &(jp, s)) in layout.iter().enumerate() {
            let coeff = if jp == j {
                &diag_t[j]
            } else if jp >= r {
                &rest_t[j][jp - r]
            } else {
                continue;
            };
            if coeff.is_zero() {
                continue;
            }
            let prod = coeff.mul(&WeylOp::var_d(gamma, m, field).pow(s));
            for (l, e) in prod.gamma_decompose(gamma) {
                coeff_rows.entry((j, l)).or_default().push((col, e));
            }
        }
    }
    let mut keys: Vec<(usize, u32)> = coeff_rows
        .keys()
        .chain(rhs_rows.keys())
        .cloned()
        .collect();
    keys.sort();
    keys.dedup();
    let ncols = layout.len();
    let mut rows: Vec<Vec<WeylOp>> = Vec::with_capacity(keys.len());
    let mut rhs: Vec<WeylOp> = Vec::with_capacity(keys.len());
    for key in &keys {
        let mut row = vec![WeylOp::zero(m, field); ncols];
        if let Some(entries) = coeff_rows.get(key) {
            for (col, e) in entries {
                row[*col] = row[*col].add(e);
            }
        }
        rows.push(row);
        rhs.push(rhs_rows.get(key).cloned().unwrap_or_else(|| WeylOp::zero(m, field)));
    }
    let ka_next = ka.minus(&VarSet::from_indices(m, &[gamma]));
    let ctx_next = FractionContext::new(m, field, ka_next, kd)?;
    let a = if rows.is_empty() {
        OpMatrix::zero(0, ncols, m, field)
    } else {
        OpMatrix::from_rows(rows, m, field)?
    };
    let sys = LinearSystem::new(a, rhs, ctx_next)?;
    let record = EliminationRecord {
        gamma,
        ctx,
        normalization,
        inverse_change,
        col_perm: trap.col_perm.clone(),
        q,
        caps,
        layout,
        syzygy_degrees,
    };
    Ok((record, sys))
}

/// Solves a system whose numerator and denominator algebras coincide, by
/// Gauss–Jordan elimination over the skew fraction field. Complete: returns
/// `Solved` with a verified solution or a certified `Unsolvable`.
pub fn base_solve_skew(sys: &LinearSystem) -> Result<SolveOutcome, SolveError> {
    let ctx = sys.ctx;
    assert_eq!(ctx.ka(), ctx.kd(), "base solver needs matching algebras");
    let mut fm = FractionMatrix::from_op_matrix(&sys.a, &ctx)?;
    let mut rhs: Vec<OreFraction> = sys
        .rhs
        .iter()
        .map(|f| OreFraction::embed(f, &ctx))
        .collect::<Result<_, _>>()?;
    let pivots = fm.eliminate_jordan(&mut rhs)?;
    let mut cert = StageCertificate {
        stage: "skew-field elimination".into(),
        equations: sys.p(),
        unknowns: sys.q(),
        max_entry_degree: sys.entry_degree(),
        detail: format!("rank {}", pivots.len()),
    };
    let mut is_pivot_row = vec![false; sys.p()];
    for &(pr, _) in &pivots {
        is_pivot_row[pr] = true;
    }
    for row in 0..sys.p() {
        if !is_pivot_row[row] && !rhs[row].is_zero() {
            cert.detail.push_str("; dependent equation with nonzero right side");
            return Ok(SolveOutcome::unsolvable(vec![cert]));
        }
    }
    let mut sol = vec![OreFraction::zero(&ctx); sys.q()];
    for &(pr, pc) in &pivots {
        sol[pc] = fm.get(pr, pc).inverse(&ctx)?.mul(&rhs[pr], &ctx)?;
    }
    Ok(SolveOutcome {
        status: SolveStatus::Solved,
        solution: Some(sol),
        certificates: vec![cert],
    })
}

/// Exact verification: every residual of the candidate vanishes.
pub fn verify_solution(sys: &LinearSystem, sol: &[OreFraction]) -> Result<bool, OreError> {
    Ok(sys.residuals(sol)?.iter().all(OreFraction::is_zero))
}

/// Decides solvability over the fraction algebra of the system's context by
/// the constructive elimination pipeline, and produces a verified solution
/// in the solvable case. `Unsolvable` is certified (every stage preserves
/// solvability in both directions); `UndecidedAtCap` occurs only when the
/// budget is exhausted.
pub fn decide_solve(
    sys: &LinearSystem,
    seed: u64,
    budget: &SolveBudget,
) -> Result<SolveOutcome, SolveError> {
    let mut certificates: Vec<StageCertificate> = Vec::new();
    let mut records: Vec<EliminationRecord> = Vec::new();
    let mut cur = sys.clone();
    let mut stage_idx = 0u64;
    let base_solution: Vec<OreFraction> = loop {
        if cur.entry_degree() > budget.max_entry_degree
            || cur.p().saturating_mul(cur.q().max(1)) > budget.max_cells
        {
            certificates.push(StageCertificate {
                stage: "budget".into(),
                equations: cur.p(),
                unknowns: cur.q(),
                max_entry_degree: cur.entry_degree(),
                detail: format!(
                    "exceeded budget (degree cap {}, cell cap {})",
                    budget.max_entry_degree, budget.max_cells
                ),
            });
            return Ok(SolveOutcome::undecided(certificates));
        }
        let ctx = cur.ctx;
        if ctx.ka() == ctx.kd() {
            let mut base = base_solve_skew(&cur)?;
            certificates.append(&mut base.certificates);
            match base.status {
                SolveStatus::Solved => break base.solution.expect("solved outcome has a solution"),
                _ => {
                    return Ok(SolveOutcome {
                        status: base.status,
                        solution: None,
                        certificates,
                    })
                }
            }
        }
        let gamma = ctx
            .ka()
            .minus(&ctx.kd())
            .iter()
            .next()
            .expect("nonempty difference in the recursive case");
        let trap = match trapezoid_reduce(&cur)? {
            TrapezoidOutcome::Inconsistent => {
                certificates.push(StageCertificate {
                    stage: "trapezoid".into(),
                    equations: cur.p(),
                    unknowns: cur.q(),
                    max_entry_degree: cur.entry_degree(),
                    detail: "dependent equation with nonzero right side".into(),
                });
                return Ok(SolveOutcome::unsolvable(certificates));
            }
            TrapezoidOutcome::Reduced(t) => t,
        };
        certificates.push(StageCertificate {
            stage: "trapezoid".into(),
            equations: trap.r,
            unknowns: trap.q,
            max_entry_degree: cur.entry_degree(),
            detail: format!("rank {}", trap.r),
        });
        if trap.r == 0 {
            // No constraints left (consistency already checked): zero works.
            break vec![OreFraction::zero(&ctx); cur.q()];
        }
        let (record, next) = eliminate_gamma(
            &trap,
            gamma,
            seed.wrapping_add(stage_idx.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        )?;
        certificates.push(StageCertificate {
            stage: format!("eliminate d{gamma}"),
            equations: next.p(),
            unknowns: next.q(),
            max_entry_degree: next.entry_degree(),
            detail: format!(
                "caps {:?}; relation degrees {:?}; transform attempts {}; a priori size bound {}",
                record.caps,
                record.syzygy_degrees,
                record.normalization.attempts,
                bounds::elimination_system_bound(
                    ctx.m(),
                    trap.r,
                    cur.entry_degree().max(0) as u64
                )
            ),
        });
        records.push(record);
        cur = next;
        stage_idx += 1;
    };
    let mut sol = base_solution;
    for record in records.iter().rev() {
        sol = record.back_substitute(&sol)?;
    }
    if !verify_solution(sys, &sol)? {
        return Err(SolveError::VerificationFailed);
    }
    let sol_degree = sol.iter().map(OreFraction::rep_degree).max().unwrap_or(-1);
    certificates.push(StageCertificate {
        stage: "solution".into(),
        equations: sys.p(),
        unknowns: sys.q(),
        max_entry_degree: sol_degree,
        detail: format!(
            "verified exactly; a priori degree bound {}",
            bounds::solution_degree_bound(
                sys.ctx.m(),
                sys.ctx.kd().len(),
                sys.entry_degree().max(0) as u64,
                sys.p(),
                sys.q(),
            )
        ),
    });
    Ok(SolveOutcome {
        status: SolveStatus::Solved,
        solution: Some(sol),
        certificates,
    })
}

/// The default incremental degree schedule for [`ansatz_solve`].
pub fn default_schedule() -> Vec<i64> {
    (0..=8).collect()
}

/// Searches for a shared-denominator solution `v_i = c_i * b^-1` with all
/// representative degrees bounded by each scheduled degree in turn. The
/// matching conditions are scalar-linear in the coefficients of `c_i` and
/// `b`; a kernel element with `b != 0` yields a solution (such elements are
/// found by scanning a kernel basis, since the `b = 0` vectors form a
/// subspace). Exhausting the schedule is conclusive only past the
/// theoretical degree bound.
pub fn ansatz_solve(sys: &LinearSystem, schedule: &[i64]) -> Result<SolveOutcome, SolveError> {
    let ctx = sys.ctx;
    let m = ctx.m();
    let field = ctx.field();
    let p = sys.q();
    let d = sys.entry_degree().max(0) as u64;
    let r_bound = sys.p().min(sys.q()).max(1);
    let full_cap = bounds::clamp_degree(&bounds::ansatz_degree_bound(
        m,
        ctx.kd().len(),
        p,
        d,
        r_bound,
    ));
    let mut unknowns: Vec<AnsatzUnknown> = (0..p)
        .map(|_| AnsatzUnknown {
            dvars: ctx.ka(),
            cap: None,
        })
        .collect();
    unknowns.push(AnsatzUnknown {
        dvars: ctx.kd(),
        cap: None,
    });
    let mut solver = OperatorSolver::new(m, field, unknowns);
    for j in 0..sys.p() {
        let mut terms: Vec<(usize, WeylOp, Side)> = (0..p)
            .map(|i| (i, sys.a.get(j, i).clone(), Side::Right))
            .collect();
        terms.push((p, sys.rhs[j].neg(), Side::Right));
        solver.add_equation(terms, WeylOp::zero(m, field));
    }
    let mut tried = Vec::new();
    for &deg in schedule {
        tried.push(deg);
        if let Some(ops) = solver.kernel_with_support(deg, p) {
            let b = ops[p].clone();
            let sol: Vec<OreFraction> = ops[..p]
                .iter()
                .map(|c| OreFraction::new(c.clone(), b.clone(), &ctx))
                .collect::<Result<_, _>>()?;
            if !verify_solution(sys, &sol)? {
                return Err(SolveError::VerificationFailed);
            }
            let cert = StageCertificate {
                stage: "ansatz".into(),
                equations: sys.p(),
                unknowns: p + 1,
                max_entry_degree: deg,
                detail: format!(
                    "shared denominator found at degree {deg}; a priori cap {full_cap}"
                ),
            };
            return Ok(SolveOutcome {
                status: SolveStatus::Solved,
                solution: Some(sol),
                certificates: vec![cert],
            });
        }
    }
    let max_tried = tried.iter().copied().max().unwrap_or(-1);
    let cert = StageCertificate {
        stage: "ansatz".into(),
        equations: sys.p(),
        unknowns: p + 1,
        max_entry_degree: max_tried,
        detail: format!(
            "no admissible kernel element through degree {max_tried}; a priori cap {full_cap}"
        ),
    };
    if max_tried >= full_cap {
        Ok(SolveOutcome::unsolvable(vec![cert]))
    } else {
        Ok(SolveOutcome::undecided(vec![cert]))
    }
}
