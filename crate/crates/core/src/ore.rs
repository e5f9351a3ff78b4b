//! Ore fractions over Weyl subalgebras, and the linear-ansatz engine that
//! powers every operator-coefficient search in the crate.
//!
//! A fraction context fixes the ambient algebra `A_m^(Ka)` for numerators
//! and the smaller algebra `A_m^(Kd)` (with `Kd` a subset of `Ka`) whose
//! nonzero elements serve as denominators. Elements of the fraction algebra
//! are kept in right-fraction form `num * den^-1`.
//!
//! All arithmetic reduces to finding operator tuples satisfying linear
//! conditions: common right/left multiples of denominators (for addition),
//! denominator swaps (for multiplication), and two-sided witnesses (for
//! equality). Each search is a degree-incremental linear ansatz over the
//! scalar field, capped by the explicit bounds in [`crate::bounds`], so
//! every operation is a terminating decision procedure.

use crate::bounds;
use crate::linalg::ScalarMatrix;
use crate::scalar::{FieldScalar, FieldTag};
use crate::weyl::{DegreeKind, Monomial, VarSet, WeylOp};
use std::collections::BTreeMap;
use std::fmt;

/// Errors surfaced by fraction arithmetic and ansatz searches.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OreError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("operand has derivations outside the {role} algebra")]
    MembershipViolation { role: &'static str },
    #[error("denominator set must be contained in the numerator set")]
    BadContext,
    #[error("operands belong to different fraction contexts")]
    ContextMismatch,
    #[error("{what} search exhausted its degree bound {cap}")]
    SearchExhausted { what: &'static str, cap: i64 },
    #[error("equality undecided at user degree cap {cap}")]
    UndecidedAtCap { cap: i64 },
}

/// On which side of the coefficient an unknown sits in an ansatz term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Term is `unknown * coeff`.
    Left,
    /// Term is `coeff * unknown`.
    Right,
}

/// One unknown operator in an ansatz: its allowed derivation set and an
/// optional individual degree cap (`Some(-1)` forces the unknown to zero).
#[derive(Clone, Debug)]
pub struct AnsatzUnknown {
    pub dvars: VarSet,
    pub cap: Option<i64>,
}

/// One linear equation `sum_i coeff_i <> u_i = rhs`, where each term places
/// its unknown on the recorded side of the coefficient.
#[derive(Clone, Debug)]
pub struct AnsatzEquation {
    pub terms: Vec<(usize, WeylOp, Side)>,
    pub rhs: WeylOp,
}

/// A system of linear operator equations solved by degree-incremental
/// ansatz: each unknown is expanded over the monomials of its algebra up to
/// the current search degree, and the equations become a scalar linear
/// system with one row per normal-ordered result monomial.
pub struct OperatorSolver {
    m: usize,
    field: FieldTag,
    pub unknowns: Vec<AnsatzUnknown>,
    pub equations: Vec<AnsatzEquation>,
}

/// Scalar matrix together with the column layout of an assembled ansatz.
struct Assembled {
    matrix: ScalarMatrix,
    /// Per-unknown monomial bases; column blocks in order.
    bases: Vec<Vec<Monomial>>,
    /// Starting column of each unknown's block.
    offsets: Vec<usize>,
}

impl OperatorSolver {
    pub fn new(m: usize, field: FieldTag, unknowns: Vec<AnsatzUnknown>) -> Self {
        OperatorSolver {
            m,
            field,
            unknowns,
            equations: Vec::new(),
        }
    }

    pub fn add_equation(&mut self, terms: Vec<(usize, WeylOp, Side)>, rhs: WeylOp) {
        self.equations.push(AnsatzEquation { terms, rhs });
    }

    fn assemble(&self, degree: i64) -> Assembled {
        let mut bases = Vec::with_capacity(self.unknowns.len());
        let mut offsets = Vec::with_capacity(self.unknowns.len());
        let mut total = 0usize;
        for u in &self.unknowns {
            let d = match u.cap {
                Some(c) => degree.min(c),
                None => degree,
            };
            let basis = Monomial::enumerate(self.m, &u.dvars, d);
            offsets.push(total);
            total += basis.len();
            bases.push(basis);
        }
        // Row keys: (equation index, result monomial), in sorted order for
        // a deterministic matrix. Only homogeneous systems reach this
        // point; inhomogeneous ones are homogenized first.
        let mut cells: BTreeMap<(usize, Monomial), BTreeMap<usize, FieldScalar>> = BTreeMap::new();
        for (eq_idx, eq) in self.equations.iter().enumerate() {
            assert!(eq.rhs.is_zero(), "assemble expects homogenized equations");
            for (u_idx, coeff, side) in &eq.terms {
                for (b_idx, mono) in bases[*u_idx].iter().enumerate() {
                    let mono_op = WeylOp::from_monomial(mono.clone(), FieldScalar::one(self.field));
                    let prod = match side {
                        Side::Right => coeff.mul(&mono_op),
                        Side::Left => mono_op.mul(coeff),
                    };
                    let col = offsets[*u_idx] + b_idx;
                    for (rm, c) in prod.terms() {
                        let entry = cells
                            .entry((eq_idx, rm.clone()))
                            .or_default()
                            .entry(col)
                            .or_insert_with(|| FieldScalar::zero(self.field));
                        *entry = entry.add(c);
                    }
                }
            }
        }
        let rows: Vec<Vec<(usize, FieldScalar)>> = cells
            .into_values()
            .map(|row| {
                row.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Assembled {
            matrix: ScalarMatrix::from_sparse_rows(rows, total, self.field),
            bases,
            offsets,
        }
    }

    fn vector_to_ops(&self, asm: &Assembled, v: &[FieldScalar]) -> Vec<WeylOp> {
        let mut out = Vec::with_capacity(self.unknowns.len());
        for (u_idx, basis) in asm.bases.iter().enumerate() {
            let mut op = WeylOp::zero(self.m, self.field);
            for (b_idx, mono) in basis.iter().enumerate() {
                let c = &v[asm.offsets[u_idx] + b_idx];
                if !c.is_zero() {
                    op = op.add(&WeylOp::from_monomial(mono.clone(), c.clone()));
                }
            }
            out.push(op);
        }
        out
    }

    /// Any nonzero solution of the homogeneous system at the given degree
    /// (all `rhs` fields must be zero).
    pub fn kernel_at_degree(&self, degree: i64) -> Option<Vec<WeylOp>> {
        let asm = self.assemble(degree);
        let v = asm.matrix.kernel_vector()?;
        Some(self.vector_to_ops(&asm, &v))
    }

    /// A homogeneous solution whose component `unknown` is nonzero, if the
    /// kernel contains one at this degree.
    pub fn kernel_with_support(&self, degree: i64, unknown: usize) -> Option<Vec<WeylOp>> {
        let asm = self.assemble(degree);
        let lo = asm.offsets[unknown];
        let hi = lo + asm.bases[unknown].len();
        let v = asm.matrix.kernel_vector_with_support(lo..hi)?;
        Some(self.vector_to_ops(&asm, &v))
    }

    /// Searches degrees `0..=cap` for a nonzero homogeneous solution,
    /// optionally requiring a designated component to be nonzero.
    pub fn search_kernel(&self, cap: i64, support: Option<usize>) -> Option<(Vec<WeylOp>, i64)> {
        for d in 0..=cap.max(0) {
            let hit = match support {
                Some(u) => self.kernel_with_support(d, u),
                None => self.kernel_at_degree(d),
            };
            if let Some(ops) = hit {
                return Some((ops, d));
            }
        }
        None
    }

    /// Solves the inhomogeneous system at the given degree by homogenizing:
    /// a phantom degree-0 unknown multiplies every right-hand side, and a
    /// kernel vector with nonzero (hence scalar) phantom component is
    /// rescaled into a genuine solution.
    pub fn solve_at_degree(&self, degree: i64) -> Option<Vec<WeylOp>> {
        if self.equations.iter().all(|e| e.rhs.is_zero()) {
            // Degenerate: the zero tuple solves it.
            let asm = self.assemble(degree);
            let zero = vec![FieldScalar::zero(self.field); asm.matrix.cols()];
            return Some(self.vector_to_ops(&asm, &zero));
        }
        let mut hom = OperatorSolver::new(self.m, self.field, self.unknowns.clone());
        hom.unknowns.push(AnsatzUnknown {
            dvars: VarSet::empty(self.m),
            cap: Some(0),
        });
        let phantom = hom.unknowns.len() - 1;
        for eq in &self.equations {
            let mut terms = eq.terms.clone();
            if !eq.rhs.is_zero() {
                terms.push((phantom, eq.rhs.neg(), Side::Right));
            }
            hom.add_equation(terms, WeylOp::zero(self.m, self.field));
        }
        let ops = hom.kernel_with_support(degree, phantom)?;
        let scale = ops[phantom]
            .coefficient(&Monomial::unit(self.m))
            .inv()
            .expect("phantom component is a nonzero scalar");
        Some(ops[..phantom].iter().map(|op| op.scale(&scale)).collect())
    }

    /// Searches degrees `0..=cap` for an inhomogeneous solution.
    pub fn search_solution(&self, cap: i64) -> Option<(Vec<WeylOp>, i64)> {
        for d in 0..=cap.max(0) {
            if let Some(ops) = self.solve_at_degree(d) {
                return Some((ops, d));
            }
        }
        None
    }
}

/// Finds a nonzero tuple `(c_1..c_p)` with `sum_i b_i c_i = 0` (side
/// `Right`) or `sum_i c_i b_i = 0` (side `Left`), all `c_i` ranging over
/// `A_m^(K)`. Returns the tuple and the degree at which it was found.
/// `None` if no syzygy exists up to the bound (e.g. a single nonzero
/// element, or a cap below the minimal degree).
pub fn syzygy_search(
    elems: &[WeylOp],
    k: &VarSet,
    side: Side,
    max_degree: Option<i64>,
) -> Option<(Vec<WeylOp>, i64)> {
    assert!(!elems.is_empty());
    let m = k.m();
    let field = elems[0].field();
    let d = elems
        .iter()
        .map(|b| b.degree(&DegreeKind::DegWith(*k)).max(0) as u64)
        .max()
        .unwrap_or(0);
    let cap = bounds::clamp_degree(&bounds::syzygy_degree_bound(m, k.len(), elems.len(), d));
    let cap = max_degree.map_or(cap, |u| u.min(cap));
    let unknowns = elems
        .iter()
        .map(|_| AnsatzUnknown {
            dvars: *k,
            cap: None,
        })
        .collect();
    let mut solver = OperatorSolver::new(m, field, unknowns);
    solver.add_equation(
        elems
            .iter()
            .enumerate()
            .map(|(i, b)| (i, b.clone(), side))
            .collect(),
        WeylOp::zero(m, field),
    );
    solver.search_kernel(cap, None)
}

/// Finds cofactors making all products agree: side `Right` returns
/// `(c_1..c_p)` with `b_1 c_1 = ... = b_p c_p != 0`; side `Left` the same
/// with the cofactors on the left. All inputs must be nonzero elements of
/// `A_m^(K)`; the cofactors are sought in `A_m^(K)`.
pub fn common_multiple(
    elems: &[WeylOp],
    k: &VarSet,
    side: Side,
) -> Result<(Vec<WeylOp>, WeylOp), OreError> {
    assert!(!elems.is_empty());
    let m = k.m();
    let field = elems[0].field();
    for b in elems {
        if b.is_zero() {
            return Err(OreError::ZeroDenominator);
        }
        if !b.in_subalgebra(k) {
            return Err(OreError::MembershipViolation {
                role: "denominator",
            });
        }
    }
    if elems.len() == 1 {
        let one = WeylOp::one(m, field);
        return Ok((vec![one], elems[0].clone()));
    }
    let d = elems
        .iter()
        .map(|b| b.degree(&DegreeKind::DegWith(*k)).max(0) as u64)
        .max()
        .unwrap_or(0);
    let cap = bounds::clamp_degree(&bounds::syzygy_degree_bound(m, k.len(), elems.len(), d));
    let unknowns = elems
        .iter()
        .map(|_| AnsatzUnknown {
            dvars: *k,
            cap: None,
        })
        .collect();
    let mut solver = OperatorSolver::new(m, field, unknowns);
    for j in 0..elems.len() - 1 {
        // b_j c_j - b_{j+1} c_{j+1} = 0 (or the left-sided mirror).
        solver.add_equation(
            vec![
                (j, elems[j].clone(), side),
                (j + 1, elems[j + 1].neg(), side),
            ],
            WeylOp::zero(m, field),
        );
    }
    // Any nonzero chain solution has every cofactor nonzero: a zero
    // cofactor forces the common product to be zero, and these algebras
    // have no zero divisors.
    let (cofactors, _) = solver
        .search_kernel(cap, None)
        .ok_or(OreError::SearchExhausted {
            what: "common multiple",
            cap,
        })?;
    let value = match side {
        Side::Right => elems[0].mul(&cofactors[0]),
        Side::Left => cofactors[0].mul(&elems[0]),
    };
    debug_assert!(!value.is_zero());
    Ok((cofactors, value))
}

/// The context of a fraction algebra: numerators range over `A_m^(Ka)`,
/// denominators over the nonzero elements of `A_m^(Kd)`, `Kd ⊆ Ka`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FractionContext {
    m: usize,
    field: FieldTag,
    ka: VarSet,
    kd: VarSet,
}

impl FractionContext {
    pub fn new(m: usize, field: FieldTag, ka: VarSet, kd: VarSet) -> Result<Self, OreError> {
        if !kd.is_subset_of(&ka) {
            return Err(OreError::BadContext);
        }
        Ok(FractionContext { m, field, ka, kd })
    }

    /// Full context: `Ka = Kd = {1..m}` — the classical skew fraction field.
    pub fn full(m: usize, field: FieldTag) -> Self {
        FractionContext {
            m,
            field,
            ka: VarSet::full(m),
            kd: VarSet::full(m),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn field(&self) -> FieldTag {
        self.field
    }
    pub fn ka(&self) -> VarSet {
        self.ka
    }
    pub fn kd(&self) -> VarSet {
        self.kd
    }

    /// The context over the same denominators with numerators restricted to
    /// a smaller derivation set (used when a derivation is eliminated).
    pub fn restrict_ka(&self, ka: VarSet) -> Result<Self, OreError> {
        FractionContext::new(self.m, self.field, ka, self.kd)
    }
}

/// A right fraction `num * den^-1` in the algebra of a [`FractionContext`].
/// Canonical conventions: a zero numerator forces denominator `1`, and the
/// graded-lex leading coefficient of the denominator is normalized to `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreFraction {
    num: WeylOp,
    den: WeylOp,
}

impl OreFraction {
    pub fn new(num: WeylOp, den: WeylOp, ctx: &FractionContext) -> Result<Self, OreError> {
        if den.is_zero() {
            return Err(OreError::ZeroDenominator);
        }
        if !num.in_subalgebra(&ctx.ka) {
            return Err(OreError::MembershipViolation { role: "numerator" });
        }
        if !den.in_subalgebra(&ctx.kd) {
            return Err(OreError::MembershipViolation {
                role: "denominator",
            });
        }
        if num.is_zero() {
            return Ok(OreFraction {
                num,
                den: WeylOp::one(ctx.m, ctx.field),
            });
        }
        let lead = den
            .coefficient(den.leading_monomial().expect("nonzero denominator"));
        let s = lead.inv().expect("leading coefficient nonzero");
        Ok(OreFraction {
            num: num.scale(&s),
            den: den.scale(&s),
        })
    }

    pub fn embed(op: &WeylOp, ctx: &FractionContext) -> Result<Self, OreError> {
        OreFraction::new(op.clone(), WeylOp::one(ctx.m, ctx.field), ctx)
    }

    pub fn zero(ctx: &FractionContext) -> Self {
        OreFraction {
            num: WeylOp::zero(ctx.m, ctx.field),
            den: WeylOp::one(ctx.m, ctx.field),
        }
    }

    pub fn one(ctx: &FractionContext) -> Self {
        OreFraction {
            num: WeylOp::one(ctx.m, ctx.field),
            den: WeylOp::one(ctx.m, ctx.field),
        }
    }

    pub fn num(&self) -> &WeylOp {
        &self.num
    }
    pub fn den(&self) -> &WeylOp {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Largest Bernstein degree among numerator and denominator.
    pub fn rep_degree(&self) -> i64 {
        self.num
            .degree(&DegreeKind::Bernstein)
            .max(self.den.degree(&DegreeKind::Bernstein))
    }

    pub fn neg(&self) -> Self {
        OreFraction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, s: &FieldScalar) -> Self {
        if s.is_zero() {
            return OreFraction {
                num: WeylOp::zero(self.num.m(), self.num.field()),
                den: WeylOp::one(self.num.m(), self.num.field()),
            };
        }
        OreFraction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Sum via a common right multiple of the denominators:
    /// `a b^-1 + c d^-1 = (a u + c v) e^-1` where `b u = d v = e`.
    pub fn add(&self, rhs: &Self, ctx: &FractionContext) -> Result<Self, OreError> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        let (cof, e) = common_multiple(
            &[self.den.clone(), rhs.den.clone()],
            &ctx.kd,
            Side::Right,
        )?;
        let num = self.num.mul(&cof[0]).add(&rhs.num.mul(&cof[1]));
        OreFraction::new(num, e, ctx)
    }

    pub fn sub(&self, rhs: &Self, ctx: &FractionContext) -> Result<Self, OreError> {
        self.add(&rhs.neg(), ctx)
    }

    /// Product via a denominator swap:
    /// `(a b^-1)(c d^-1) = (a alpha)(d beta)^-1` where `b alpha = c beta`.
    pub fn mul(&self, rhs: &Self, ctx: &FractionContext) -> Result<Self, OreError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(OreFraction::zero(ctx));
        }
        let (alpha, beta) = swap_denominator(&self.den, &rhs.num, ctx)?;
        OreFraction::new(self.num.mul(&alpha), rhs.den.mul(&beta), ctx)
    }

    /// Left action of an operator: `op * (a b^-1) = (op a) b^-1`.
    pub fn left_mul_op(&self, op: &WeylOp, ctx: &FractionContext) -> Result<Self, OreError> {
        OreFraction::new(op.mul(&self.num), self.den.clone(), ctx)
    }

    /// Inverse `(n d^-1)^-1 = d n^-1`. Only legal when the numerator is an
    /// admissible denominator, i.e. nonzero and inside `A_m^(Kd)` — always
    /// the case in a full context (`Ka = Kd`).
    pub fn inverse(&self, ctx: &FractionContext) -> Result<Self, OreError> {
        if self.num.is_zero() {
            return Err(OreError::ZeroDenominator);
        }
        OreFraction::new(self.den.clone(), self.num.clone(), ctx)
    }

    /// Right division `self * rhs^-1` (see [`Self::inverse`]).
    pub fn div(&self, rhs: &Self, ctx: &FractionContext) -> Result<Self, OreError> {
        self.mul(&rhs.inverse(ctx)?, ctx)
    }
}

impl fmt::Display for OreFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.num_terms() == 1 && self.den.coefficient(&Monomial::unit(self.den.m())).is_one()
        {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({}) * ({})^-1", self.num, self.den)
        } else {
            write!(f, "{} * ({})^-1", self.num, self.den)
        }
    }
}

/// Rewrites `den^-1 * num` in right-fraction form: finds `alpha` in
/// `A_m^(Ka)` and `beta` nonzero in `A_m^(Kd)` with `den * alpha = num *
/// beta`, so that `den^-1 num = alpha beta^-1`. When `num = 0` returns
/// `(0, 1)`.
pub fn swap_denominator(
    den: &WeylOp,
    num: &WeylOp,
    ctx: &FractionContext,
) -> Result<(WeylOp, WeylOp), OreError> {
    if den.is_zero() {
        return Err(OreError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok((
            WeylOp::zero(ctx.m, ctx.field),
            WeylOp::one(ctx.m, ctx.field),
        ));
    }
    if !num.in_subalgebra(&ctx.ka) {
        return Err(OreError::MembershipViolation { role: "numerator" });
    }
    if !den.in_subalgebra(&ctx.kd) {
        return Err(OreError::MembershipViolation {
            role: "denominator",
        });
    }
    let e = num.degree(&DegreeKind::OrdOutside(ctx.kd)).max(0) as u64;
    let f = ctx.ka.minus(&ctx.kd).len() as u64;
    let dmax = num
        .degree(&DegreeKind::DegWith(ctx.kd))
        .max(den.degree(&DegreeKind::DegWith(ctx.kd)))
        .max(0) as u64;
    let cap = bounds::clamp_degree(&bounds::swap_degree_bound(
        ctx.m,
        ctx.kd.len(),
        e,
        f,
        dmax,
    ));
    let mut solver = OperatorSolver::new(
        ctx.m,
        ctx.field,
        vec![
            AnsatzUnknown {
                dvars: ctx.ka,
                cap: None,
            },
            AnsatzUnknown {
                dvars: ctx.kd,
                cap: None,
            },
        ],
    );
    // den * alpha - num * beta = 0; any nonzero solution has beta != 0,
    // since beta = 0 forces den * alpha = 0 and thus alpha = 0.
    solver.add_equation(
        vec![
            (0, den.clone(), Side::Right),
            (1, num.neg(), Side::Right),
        ],
        WeylOp::zero(ctx.m, ctx.field),
    );
    let (ops, _) = solver
        .search_kernel(cap, None)
        .ok_or(OreError::SearchExhausted {
            what: "denominator swap",
            cap,
        })?;
    let [alpha, beta] = <[WeylOp; 2]>::try_from(ops).expect("two unknowns");
    debug_assert!(!beta.is_zero());
    Ok((alpha, beta))
}

/// Puts a family of fractions over one shared right denominator: returns
/// `(nums, den)` with `fracs[i] = nums[i] * den^-1`.
pub fn shared_right_denominator(
    fracs: &[OreFraction],
    ctx: &FractionContext,
) -> Result<(Vec<WeylOp>, WeylOp), OreError> {
    if fracs.iter().all(|f| f.is_zero()) {
        return Ok((
            fracs.iter().map(|_| WeylOp::zero(ctx.m, ctx.field)).collect(),
            WeylOp::one(ctx.m, ctx.field),
        ));
    }
    let dens: Vec<WeylOp> = fracs.iter().map(|f| f.den.clone()).collect();
    let (cof, e) = common_multiple(&dens, &ctx.kd, Side::Right)?;
    let nums = fracs
        .iter()
        .zip(&cof)
        .map(|(f, c)| f.num.mul(c))
        .collect();
    Ok((nums, e))
}

/// Decides equality of two fractions by searching for a left-clearing
/// witness pair `(beta, alpha)` with `beta * num_u = alpha * den_u` and
/// `beta * num_v = alpha * den_v`; any nonzero such pair has `beta != 0`
/// and certifies `u = v`. The search is complete at the default cap, so
/// exhausting it proves inequality; a smaller user cap can leave the
/// question undecided.
pub fn fraction_equal_witness(
    u: &OreFraction,
    v: &OreFraction,
    ctx: &FractionContext,
    user_cap: Option<i64>,
) -> Result<Option<(WeylOp, WeylOp)>, OreError> {
    let dmax = u.rep_degree().max(v.rep_degree()).max(0) as u64;
    let default_cap =
        bounds::clamp_degree(&bounds::equality_witness_bound(ctx.m, ctx.kd.len(), dmax));
    let cap = user_cap.map_or(default_cap, |c| c.min(default_cap));
    let mut solver = OperatorSolver::new(
        ctx.m,
        ctx.field,
        vec![
            AnsatzUnknown {
                dvars: ctx.ka,
                cap: None,
            },
            AnsatzUnknown {
                dvars: ctx.ka,
                cap: None,
            },
        ],
    );
    solver.add_equation(
        vec![
            (0, u.num.clone(), Side::Left),
            (1, u.den.neg(), Side::Left),
        ],
        WeylOp::zero(ctx.m, ctx.field),
    );
    solver.add_equation(
        vec![
            (0, v.num.clone(), Side::Left),
            (1, v.den.neg(), Side::Left),
        ],
        WeylOp::zero(ctx.m, ctx.field),
    );
    match solver.search_kernel(cap, None) {
        Some((ops, _)) => {
            let [beta, alpha] = <[WeylOp; 2]>::try_from(ops).expect("two unknowns");
            debug_assert!(!beta.is_zero());
            Ok(Some((beta, alpha)))
        }
        None if cap >= default_cap => Ok(None),
        None => Err(OreError::UndecidedAtCap { cap }),
    }
}

/// Equality of two fractions (see [`fraction_equal_witness`]).
pub fn fraction_equal(
    u: &OreFraction,
    v: &OreFraction,
    ctx: &FractionContext,
    user_cap: Option<i64>,
) -> Result<bool, OreError> {
    Ok(fraction_equal_witness(u, v, ctx, user_cap)?.is_some())
}
