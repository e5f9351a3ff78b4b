//! Matrices of Weyl operators and of Ore fractions, and the reduction of a
//! linear operator system to trapezoidal form.
//!
//! The pipeline implemented here:
//!
//! 1. compute the rank and a pivot placement of the coefficient matrix by
//!    Gaussian elimination over the full skew fraction field;
//! 2. permute rows and columns so the pivots fill the leading block;
//! 3. build a *left quasi-inverse* of the leading block: an operator matrix
//!    `C1` with `C1 * G1 = diag(t_1..t_r)`, all `t_j` nonzero — this is the
//!    step that certifies nonsingularity without leaving the algebra;
//! 4. annihilate the rows below the block with fraction coefficients and
//!    check that the corresponding right-hand sides vanish; a nonzero
//!    residue proves the system unsolvable over the fraction algebra.
//!
//! The resulting trapezoidal system has operator entries again and the same
//! solution set as the input.

use crate::ore::{
    AnsatzUnknown, FractionContext, OperatorSolver, OreError, OreFraction, Side,
};
use crate::weyl::{DegreeKind, VarSet, WeylOp};
use crate::{bounds, scalar::FieldTag};

/// Errors from matrix-level operations.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix shapes are incompatible")]
    ShapeMismatch,
    #[error("entry has derivations outside the ambient algebra")]
    Membership,
    #[error("matrix is singular over the skew fraction field")]
    SingularInput,
    #[error("rank certificate violated during block reduction")]
    RankViolation,
    #[error(transparent)]
    Ore(#[from] OreError),
}

/// A dense rectangular matrix of Weyl operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpMatrix {
    m: usize,
    field: FieldTag,
    rows: usize,
    cols: usize,
    data: Vec<Vec<WeylOp>>,
}

impl OpMatrix {
    pub fn from_rows(data: Vec<Vec<WeylOp>>, m: usize, field: FieldTag) -> Result<Self, MatrixError> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        for row in &data {
            if row.len() != cols {
                return Err(MatrixError::ShapeMismatch);
            }
            for e in row {
                if e.m() != m || e.field() != field {
                    return Err(MatrixError::ShapeMismatch);
                }
            }
        }
        Ok(OpMatrix {
            m,
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zero(rows: usize, cols: usize, m: usize, field: FieldTag) -> Self {
        OpMatrix {
            m,
            field,
            rows,
            cols,
            data: vec![vec![WeylOp::zero(m, field); cols]; rows],
        }
    }

    pub fn identity(n: usize, m: usize, field: FieldTag) -> Self {
        let data = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            WeylOp::one(m, field)
                        } else {
                            WeylOp::zero(m, field)
                        }
                    })
                    .collect()
            })
            .collect();
        OpMatrix {
            m,
            field,
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &WeylOp {
        &self.data[r][c]
    }

    pub fn row(&self, r: usize) -> &[WeylOp] {
        &self.data[r]
    }

    pub fn entries(&self) -> impl Iterator<Item = &WeylOp> {
        self.data.iter().flatten()
    }

    /// Noncommutative matrix product.
    pub fn mul(&self, rhs: &OpMatrix) -> Result<OpMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch);
        }
        let mut data = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(rhs.cols);
            for j in 0..rhs.cols {
                let mut acc = WeylOp::zero(self.m, self.field);
                for k in 0..self.cols {
                    acc = acc.add(&self.data[i][k].mul(&rhs.data[k][j]));
                }
                row.push(acc);
            }
            data.push(row);
        }
        OpMatrix::from_rows(data, self.m, self.field)
    }

    /// Submatrix by explicit row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> OpMatrix {
        let data = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.data[r][c].clone()).collect())
            .collect();
        OpMatrix {
            m: self.m,
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn in_subalgebra(&self, k: &VarSet) -> bool {
        self.entries().all(|e| e.in_subalgebra(k))
    }

    /// Maximum degree of the given kind over all entries; `-1` if all zero.
    pub fn max_degree(&self, kind: &DegreeKind) -> i64 {
        self.entries().map(|e| e.degree(kind)).max().unwrap_or(-1)
    }
}

/// A linear system `sum_i A[j][i] * V_i = rhs[j]` with coefficients and
/// right-hand sides in `A_m^(Ka)`, solved for `V_i` in the fraction algebra
/// of the context.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub ctx: FractionContext,
    pub a: OpMatrix,
    pub rhs: Vec<WeylOp>,
}

impl LinearSystem {
    pub fn new(a: OpMatrix, rhs: Vec<WeylOp>, ctx: FractionContext) -> Result<Self, MatrixError> {
        if rhs.len() != a.rows() {
            return Err(MatrixError::ShapeMismatch);
        }
        let ka = ctx.ka();
        if !a.in_subalgebra(&ka) || rhs.iter().any(|f| !f.in_subalgebra(&ka)) {
            return Err(MatrixError::Membership);
        }
        Ok(LinearSystem { ctx, a, rhs })
    }

    /// Number of equations.
    pub fn p(&self) -> usize {
        self.a.rows()
    }
    /// Number of unknowns.
    pub fn q(&self) -> usize {
        self.a.cols()
    }

    /// Max `DegWith(Ka)` degree over coefficients and right-hand sides.
    pub fn entry_degree(&self) -> i64 {
        let kind = DegreeKind::DegWith(self.ctx.ka());
        self.a
            .max_degree(&kind)
            .max(self.rhs.iter().map(|f| f.degree(&kind)).max().unwrap_or(-1))
    }

    /// Evaluates the residual `sum_i A[j][i] v_i - rhs[j]` for a candidate
    /// solution; the system is solved exactly when all residuals are zero.
    pub fn residuals(&self, v: &[OreFraction]) -> Result<Vec<OreFraction>, OreError> {
        assert_eq!(v.len(), self.q());
        let mut out = Vec::with_capacity(self.p());
        for j in 0..self.p() {
            let mut acc = OreFraction::zero(&self.ctx);
            for (i, vi) in v.iter().enumerate() {
                let term = vi.left_mul_op(self.a.get(j, i), &self.ctx)?;
                acc = acc.add(&term, &self.ctx)?;
            }
            let f = OreFraction::embed(&self.rhs[j], &self.ctx)?;
            out.push(acc.sub(&f, &self.ctx)?);
        }
        Ok(out)
    }
}

/// A dense matrix of Ore fractions over one context, with Gaussian
/// elimination over the skew fraction field (requires `Ka = Kd` so that
/// every nonzero entry is invertible).
#[derive(Clone, Debug)]
pub struct FractionMatrix {
    ctx: FractionContext,
    data: Vec<Vec<OreFraction>>,
}

impl FractionMatrix {
    pub fn from_op_matrix(a: &OpMatrix, ctx: &FractionContext) -> Result<Self, MatrixError> {
        let data = a
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| OreFraction::embed(e, ctx))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FractionMatrix { ctx: *ctx, data })
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }
    pub fn cols(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }
    pub fn get(&self, r: usize, c: usize) -> &OreFraction {
        &self.data[r][c]
    }

    /// Forward elimination over the skew field; returns the pivot positions
    /// `(row, col)` in elimination order. Pivots are chosen to minimize the
    /// combined Bernstein degree of the representation (then smallest row,
    /// then column), which keeps intermediate fractions small.
    pub fn eliminate(&mut self) -> Result<Vec<(usize, usize)>, OreError> {
        self.run_elimination(false, None)
    }

    /// Gauss–Jordan elimination carrying a right-hand side through the same
    /// row operations. Afterwards each pivot row holds its pivot as the only
    /// entry among pivot columns, and every non-pivot row is entirely zero,
    /// so a row's solvability is read off its `rhs` entry directly.
    pub fn eliminate_jordan(
        &mut self,
        rhs: &mut [OreFraction],
    ) -> Result<Vec<(usize, usize)>, OreError> {
        assert_eq!(rhs.len(), self.rows());
        self.run_elimination(true, Some(rhs))
    }

    fn run_elimination(
        &mut self,
        jordan: bool,
        mut rhs: Option<&mut [OreFraction]>,
    ) -> Result<Vec<(usize, usize)>, OreError> {
        assert_eq!(self.ctx.ka(), self.ctx.kd(), "elimination needs a full context");
        let rows = self.rows();
        let cols = self.cols();
        let mut used_rows = vec![false; rows];
        let mut used_cols = vec![false; cols];
        let mut pivots = Vec::new();
        loop {
            let mut best: Option<(i64, usize, usize)> = None;
            for r in 0..rows {
                if used_rows[r] {
                    continue;
                }
                for c in 0..cols {
                    if used_cols[c] || self.data[r][c].is_zero() {
                        continue;
                    }
                    let w = self.data[r][c].rep_degree();
                    if best.map_or(true, |(bw, br, bc)| (w, r, c) < (bw, br, bc)) {
                        best = Some((w, r, c));
                    }
                }
            }
            let Some((_, pr, pc)) = best else {
                return Ok(pivots);
            };
            used_rows[pr] = true;
            used_cols[pc] = true;
            pivots.push((pr, pc));
            let pivot_inv = self.data[pr][pc].inverse(&self.ctx)?;
            for r in 0..rows {
                let receives = if jordan { r != pr } else { !used_rows[r] };
                if !receives || self.data[r][pc].is_zero() {
                    continue;
                }
                let factor = self.data[r][pc].mul(&pivot_inv, &self.ctx)?;
                for c in 0..cols {
                    if used_cols[c] && c != pc {
                        continue;
                    }
                    let t = factor.mul(&self.data[pr][c], &self.ctx)?;
                    self.data[r][c] = self.data[r][c].sub(&t, &self.ctx)?;
                }
                if let Some(v) = rhs.as_deref_mut() {
                    let t = factor.mul(&v[pr], &self.ctx)?;
                    v[r] = v[r].sub(&t, &self.ctx)?;
                }
            }
        }
    }
}

/// Pivot positions of the coefficient matrix over the full skew fraction
/// field, in elimination order.
pub fn skew_pivots(a: &OpMatrix) -> Result<Vec<(usize, usize)>, MatrixError> {
    let full = FractionContext::full(a.m(), a.field());
    let mut fm = FractionMatrix::from_op_matrix(a, &full)?;
    Ok(fm.eliminate()?)
}

/// Rank of an operator matrix over the full skew fraction field.
pub fn skew_rank(a: &OpMatrix) -> Result<usize, MatrixError> {
    Ok(skew_pivots(a)?.len())
}

/// Left quasi-inverse of a square operator matrix `B` over `A_m^(K)`:
/// returns `(C, t)` with `C * B = diag(t_1..t_p)` and every `t_j` nonzero.
/// Row `j` of `C` is a left syzygy of all columns of `B` except column `j`;
/// if `B` is singular over the skew field, some diagonal entry necessarily
/// vanishes (the diagonal product has rank at most `rank B`), which is
/// reported as [`MatrixError::SingularInput`].
pub fn left_quasi_inverse(
    b: &OpMatrix,
    k: &VarSet,
) -> Result<(OpMatrix, Vec<WeylOp>), MatrixError> {
    let p = b.rows();
    if p != b.cols() {
        return Err(MatrixError::ShapeMismatch);
    }
    if !b.in_subalgebra(k) {
        return Err(MatrixError::Membership);
    }
    let m = b.m();
    let field = b.field();
    if p == 0 {
        return Ok((OpMatrix::identity(0, m, field), Vec::new()));
    }
    let d = b.max_degree(&DegreeKind::DegWith(*k)).max(0) as u64;
    let cap = bounds::clamp_degree(&bounds::syzygy_degree_bound(m, k.len(), p, d));
    let mut c_rows = Vec::with_capacity(p);
    let mut diag = Vec::with_capacity(p);
    for i in 0..p {
        let unknowns = (0..p)
            .map(|_| AnsatzUnknown {
                dvars: *k,
                cap: None,
            })
            .collect();
        let mut solver = OperatorSolver::new(m, field, unknowns);
        for j in 0..p {
            if j == i {
                continue;
            }
            // sum_l u_l B[l][j] = 0.
            solver.add_equation(
                (0..p).map(|l| (l, b.get(l, j).clone(), Side::Left)).collect(),
                WeylOp::zero(m, field),
            );
        }
        let (u, _) = solver
            .search_kernel(cap, None)
            .ok_or(MatrixError::Ore(OreError::SearchExhausted {
                what: "quasi-inverse row",
                cap,
            }))?;
        let mut t = WeylOp::zero(m, field);
        for (l, ul) in u.iter().enumerate() {
            t = t.add(&ul.mul(b.get(l, i)));
        }
        if t.is_zero() {
            return Err(MatrixError::SingularInput);
        }
        diag.push(t);
        c_rows.push(u);
    }
    Ok((OpMatrix::from_rows(c_rows, m, field)?, diag))
}

/// The trapezoidal form of a linear system: after the recorded row and
/// column permutations, the leading `r` equations read
/// `diag[j] * W_j + sum_i rest[j][i] * W_{r+i} = rhs[j]`,
/// where `W_i = V_{col_perm[i]}`, and the remaining equations are zero.
/// The solution set over the fraction algebra equals that of the original
/// system.
#[derive(Clone, Debug)]
pub struct TrapezoidSystem {
    pub ctx: FractionContext,
    pub r: usize,
    pub q: usize,
    pub diag: Vec<WeylOp>,
    pub rest: Vec<Vec<WeylOp>>,
    pub rhs: Vec<WeylOp>,
    /// `row_perm[j]` is the original equation index of permuted row `j`.
    pub row_perm: Vec<usize>,
    /// `col_perm[i]` is the original unknown index of permuted column `i`.
    pub col_perm: Vec<usize>,
}

/// Result of a trapezoid reduction: either the reduced system, or a proof
/// of unsolvability (a dependent equation with nonvanishing right side).
#[derive(Clone, Debug)]
pub enum TrapezoidOutcome {
    Reduced(TrapezoidSystem),
    Inconsistent,
}

/// Reduces a linear system to trapezoidal form (see module docs).
pub fn trapezoid_reduce(sys: &LinearSystem) -> Result<TrapezoidOutcome, MatrixError> {
    let m = sys.ctx.m();
    let field = sys.ctx.field();
    let p = sys.p();
    let q = sys.q();
    let pivots = skew_pivots(&sys.a)?;
    let r = pivots.len();
    let mut row_perm: Vec<usize> = pivots.iter().map(|&(pr, _)| pr).collect();
    let mut col_perm: Vec<usize> = pivots.iter().map(|&(_, pc)| pc).collect();
    for i in 0..p {
        if !row_perm.contains(&i) {
            row_perm.push(i);
        }
    }
    for i in 0..q {
        if !col_perm.contains(&i) {
            col_perm.push(i);
        }
    }
    let g = sys.a.select(&row_perm, &col_perm);
    let f: Vec<WeylOp> = row_perm.iter().map(|&j| sys.rhs[j].clone()).collect();
    // Quasi-inverse of the leading r x r block, over the numerator algebra.
    let lead_rows: Vec<usize> = (0..r).collect();
    let g1 = g.select(&lead_rows, &lead_rows);
    let (c1, diag) = left_quasi_inverse(&g1, &sys.ctx.ka())?;
    // Annihilate the bottom rows over fractions of the numerator algebra
    // and check consistency of the dependent right-hand sides.
    let ka_full = FractionContext::new(m, field, sys.ctx.ka(), sys.ctx.ka())
        .expect("Ka within Ka is a valid context");
    for t in r..p {
        // c2_row = -G[t][..r] * diag^-1 * C1, an r-vector of fractions.
        let mut c2_row = Vec::with_capacity(r);
        for l in 0..r {
            let mut acc = OreFraction::zero(&ka_full);
            for j in 0..r {
                if g.get(t, j).is_zero() || c1.get(j, l).is_zero() {
                    continue;
                }
                let term = OreFraction::new(g.get(t, j).clone(), diag[j].clone(), &ka_full)?
                    .mul(&OreFraction::embed(c1.get(j, l), &ka_full)?, &ka_full)?;
                acc = acc.add(&term, &ka_full)?;
            }
            c2_row.push(acc.neg());
        }
        // Residual of permuted row t under the transform: the coefficient
        // part vanishes identically when r is the true rank; verify it, and
        // test the right-hand side.
        for i in 0..q {
            let mut acc = OreFraction::embed(g.get(t, i), &ka_full)?;
            for l in 0..r {
                let term = c2_row[l].mul(&OreFraction::embed(g.get(l, i), &ka_full)?, &ka_full)?;
                acc = acc.add(&term, &ka_full)?;
            }
            if !acc.is_zero() {
                return Err(MatrixError::RankViolation);
            }
        }
        let mut resid = OreFraction::embed(&f[t], &ka_full)?;
        for l in 0..r {
            let term = c2_row[l].mul(&OreFraction::embed(&f[l], &ka_full)?, &ka_full)?;
            resid = resid.add(&term, &ka_full)?;
        }
        if !resid.is_zero() {
            return Ok(TrapezoidOutcome::Inconsistent);
        }
    }
    // Leading rows: C1 * (G1 | G_right) = (diag | C1 * G_right).
    let free_cols: Vec<usize> = (r..q).collect();
    let g_right = g.select(&lead_rows, &free_cols);
    let rest_mat = c1.mul(&g_right)?;
    let mut new_rhs = Vec::with_capacity(r);
    for j in 0..r {
        let mut acc = WeylOp::zero(m, field);
        for l in 0..r {
            acc = acc.add(&c1.get(j, l).mul(&f[l]));
        }
        new_rhs.push(acc);
    }
    let rest = (0..r).map(|j| rest_mat.row(j).to_vec()).collect();
    Ok(TrapezoidOutcome::Reduced(TrapezoidSystem {
        ctx: sys.ctx,
        r,
        q,
        diag,
        rest,
        rhs: new_rhs,
        row_perm,
        col_perm,
    }))
}

impl TrapezoidSystem {
    /// Reassembles the trapezoid as a plain linear system over the same
    /// context (the `r` nontrivial equations, unknowns in permuted order).
    pub fn as_linear_system(&self) -> Result<LinearSystem, MatrixError> {
        let m = self.ctx.m();
        let field = self.ctx.field();
        let mut rows = Vec::with_capacity(self.r);
        for j in 0..self.r {
            let mut row = vec![WeylOp::zero(m, field); self.q];
            row[j] = self.diag[j].clone();
            for (i, e) in self.rest[j].iter().enumerate() {
                row[self.r + i] = e.clone();
            }
            rows.push(row);
        }
        LinearSystem::new(
            OpMatrix::from_rows(rows, m, field)?,
            self.rhs.clone(),
            self.ctx,
        )
    }

    /// Translates a solution of the trapezoid (in permuted unknown order)
    /// back to the original unknown order.
    pub fn unpermute(&self, w: &[OreFraction]) -> Vec<OreFraction> {
        assert_eq!(w.len(), self.q);
        let mut out = vec![None; self.q];
        for (i, wi) in w.iter().enumerate() {
            out[self.col_perm[i]] = Some(wi.clone());
        }
        out.into_iter().map(Option::unwrap).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldScalar;

    fn x(i: usize, m: usize) -> WeylOp {
        WeylOp::var_x(i, m, FieldTag::Q)
    }
    fn d(i: usize, m: usize) -> WeylOp {
        WeylOp::var_d(i, m, FieldTag::Q)
    }
    fn c(n: i64, m: usize) -> WeylOp {
        WeylOp::constant(FieldScalar::from_i64(n, FieldTag::Q), m)
    }

    fn mat(rows: Vec<Vec<WeylOp>>, m: usize) -> OpMatrix {
        OpMatrix::from_rows(rows, m, FieldTag::Q).unwrap()
    }

    #[test]
    fn operator_matrix_product() {
        let a = mat(vec![vec![d(1, 1)]], 1);
        let b = mat(vec![vec![x(1, 1)]], 1);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.get(0, 0), &x(1, 1).mul(&d(1, 1)).add(&c(1, 1)));
    }

    #[test]
    fn quasi_inverse_of_two_by_two() {
        // B = [[d, x], [1, 1]]: C B = diag(d - x, x - d).
        let b = mat(vec![vec![d(1, 1), x(1, 1)], vec![c(1, 1), c(1, 1)]], 1);
        let k = VarSet::full(1);
        let (cmat, diag) = left_quasi_inverse(&b, &k).unwrap();
        assert_eq!(diag[0], d(1, 1).sub(&x(1, 1)));
        assert_eq!(diag[1], x(1, 1).sub(&d(1, 1)));
        // Exact verification of C B = diag.
        let prod = cmat.mul(&b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    assert_eq!(prod.get(i, j), &diag[i]);
                } else {
                    assert!(prod.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn quasi_inverse_detects_singularity() {
        // Rows are left-dependent: (d, d) = d * (1, 1).
        let b = mat(vec![vec![d(1, 1), d(1, 1)], vec![c(1, 1), c(1, 1)]], 1);
        let k = VarSet::full(1);
        assert_eq!(left_quasi_inverse(&b, &k).unwrap_err(), MatrixError::SingularInput);
    }

    #[test]
    fn quasi_inverse_of_one_by_one() {
        let b = mat(vec![vec![x(1, 1)]], 1);
        let (cmat, diag) = left_quasi_inverse(&b, &VarSet::full(1)).unwrap();
        assert_eq!(cmat.get(0, 0), &c(1, 1));
        assert_eq!(diag[0], x(1, 1));
        let zero = mat(vec![vec![c(0, 1)]], 1);
        assert_eq!(
            left_quasi_inverse(&zero, &VarSet::full(1)).unwrap_err(),
            MatrixError::SingularInput
        );
    }

    #[test]
    fn skew_rank_examples() {
        let full = mat(vec![vec![d(1, 1), x(1, 1)], vec![c(1, 1), c(1, 1)]], 1);
        assert_eq!(skew_rank(&full).unwrap(), 2);
        let dependent = mat(vec![vec![d(1, 1), d(1, 1)], vec![c(1, 1), c(1, 1)]], 1);
        assert_eq!(skew_rank(&dependent).unwrap(), 1);
        let zero = mat(vec![vec![c(0, 1), c(0, 1)]], 1);
        assert_eq!(skew_rank(&zero).unwrap(), 0);
    }

    #[test]
    fn skew_pivot_heuristic_prefers_low_degree() {
        let a = mat(vec![vec![x(1, 1), c(1, 1)], vec![c(1, 1), c(0, 1)]], 1);
        let pivots = skew_pivots(&a).unwrap();
        assert_eq!(pivots.len(), 2);
        // Lowest-degree candidates are the two constants; ties resolve by
        // row then column, so (0, 1) is eliminated first.
        assert_eq!(pivots[0], (0, 1));
        assert_eq!(pivots[1], (1, 0));
    }

    #[test]
    fn trapezoid_single_equation() {
        let ctx = FractionContext::full(1, FieldTag::Q);
        let sys = LinearSystem::new(mat(vec![vec![x(1, 1)]], 1), vec![c(1, 1)], ctx).unwrap();
        match trapezoid_reduce(&sys).unwrap() {
            TrapezoidOutcome::Reduced(t) => {
                assert_eq!(t.r, 1);
                assert_eq!(t.q, 1);
                assert_eq!(t.diag[0], x(1, 1));
                assert_eq!(t.rhs[0], c(1, 1));
            }
            TrapezoidOutcome::Inconsistent => panic!("consistent system"),
        }
    }

    #[test]
    fn trapezoid_detects_inconsistency() {
        // x V = 1 and x V = 0 cannot both hold.
        let ctx = FractionContext::full(1, FieldTag::Q);
        let sys = LinearSystem::new(
            mat(vec![vec![x(1, 1)], vec![x(1, 1)]], 1),
            vec![c(1, 1), c(0, 1)],
            ctx,
        )
        .unwrap();
        assert!(matches!(
            trapezoid_reduce(&sys).unwrap(),
            TrapezoidOutcome::Inconsistent
        ));
        // The same dependent pair with matching right sides reduces fine.
        let ok = LinearSystem::new(
            mat(vec![vec![x(1, 1)], vec![x(1, 1)]], 1),
            vec![c(1, 1), c(1, 1)],
            ctx,
        )
        .unwrap();
        match trapezoid_reduce(&ok).unwrap() {
            TrapezoidOutcome::Reduced(t) => assert_eq!(t.r, 1),
            TrapezoidOutcome::Inconsistent => panic!("consistent system"),
        }
    }

    #[test]
    fn trapezoid_full_rank_two_by_two() {
        let ctx = FractionContext::full(1, FieldTag::Q);
        let sys = LinearSystem::new(
            mat(vec![vec![d(1, 1), x(1, 1)], vec![c(1, 1), c(1, 1)]], 1),
            vec![c(0, 1), c(1, 1)],
            ctx,
        )
        .unwrap();
        match trapezoid_reduce(&sys).unwrap() {
            TrapezoidOutcome::Reduced(t) => {
                assert_eq!(t.r, 2);
                assert!(t.diag.iter().all(|g| !g.is_zero()));
                assert!(t.rest.iter().all(|row| row.is_empty()));
                // The reduced equations are left-combinations of the
                // original ones, so any solution of the original system
                // satisfies them; spot-check solvability is preserved via
                // the residual of the solution of the trapezoid later in
                // the solver tests.
            }
            TrapezoidOutcome::Inconsistent => panic!("consistent system"),
        }
    }

    #[test]
    fn trapezoid_with_free_column() {
        // One equation, two unknowns: x V1 + d V2 = 1.
        let ctx = FractionContext::full(1, FieldTag::Q);
        let sys = LinearSystem::new(
            mat(vec![vec![x(1, 1), d(1, 1)]], 1),
            vec![c(1, 1)],
            ctx,
        )
        .unwrap();
        match trapezoid_reduce(&sys).unwrap() {
            TrapezoidOutcome::Reduced(t) => {
                assert_eq!(t.r, 1);
                assert_eq!(t.q, 2);
                assert_eq!(t.rest[0].len(), 1);
                // Pivot column is the x entry (lower degree ties: both
                // degree 1 — row 0, col 0 wins).
                assert_eq!(t.col_perm, vec![0, 1]);
            }
            TrapezoidOutcome::Inconsistent => panic!("consistent system"),
        }
    }

    #[test]
    fn trapezoid_zero_matrix() {
        let ctx = FractionContext::full(1, FieldTag::Q);
        let zero_sys = LinearSystem::new(mat(vec![vec![c(0, 1)]], 1), vec![c(1, 1)], ctx).unwrap();
        assert!(matches!(
            trapezoid_reduce(&zero_sys).unwrap(),
            TrapezoidOutcome::Inconsistent
        ));
        let trivial = LinearSystem::new(mat(vec![vec![c(0, 1)]], 1), vec![c(0, 1)], ctx).unwrap();
        match trapezoid_reduce(&trivial).unwrap() {
            TrapezoidOutcome::Reduced(t) => assert_eq!(t.r, 0),
            TrapezoidOutcome::Inconsistent => panic!("trivial system"),
        }
    }

    #[test]
    fn fraction_matrix_elimination_counts_rank() {
        let ctx = FractionContext::full(1, FieldTag::Q);
        let a = mat(
            vec![
                vec![d(1, 1), x(1, 1), c(1, 1)],
                vec![d(1, 1), x(1, 1), c(1, 1)],
            ],
            1,
        );
        let mut fm = FractionMatrix::from_op_matrix(&a, &ctx).unwrap();
        assert_eq!(fm.eliminate().unwrap().len(), 1);
    }

    #[test]
    fn residuals_flag_wrong_candidates() {
        let ctx = FractionContext::full(1, FieldTag::Q);
        let sys = LinearSystem::new(mat(vec![vec![x(1, 1)]], 1), vec![x(1, 1)], ctx).unwrap();
        let good = vec![OreFraction::one(&ctx)];
        assert!(sys.residuals(&good).unwrap().iter().all(|r| r.is_zero()));
        let bad = vec![OreFraction::zero(&ctx)];
        assert!(!sys.residuals(&bad).unwrap().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn membership_enforced_by_system() {
        let m = 2;
        let ctx = FractionContext::new(
            m,
            FieldTag::Q,
            VarSet::from_indices(m, &[1]),
            VarSet::from_indices(m, &[1]),
        )
        .unwrap();
        let bad = OpMatrix::from_rows(vec![vec![d(2, m)]], m, FieldTag::Q).unwrap();
        assert_eq!(
            LinearSystem::new(bad, vec![c(0, m)], ctx).unwrap_err(),
            MatrixError::Membership
        );
    }
}
