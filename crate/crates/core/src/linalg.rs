//! Exact linear algebra over [`FieldScalar`].
//!
//! Matrices are stored as sparse rows (the ansatz builders upstream produce
//! very sparse systems). Two elimination routes are provided:
//!
//! * a reference route: Gaussian elimination in exact field arithmetic with
//!   full pivoting on a coefficient-size weight, used for small matrices and
//!   as the cross-check oracle in tests;
//! * a fast route for large rational matrices: elimination modulo a sequence
//!   of 31-bit primes, Chinese remaindering, rational reconstruction, and an
//!   *exact* verification of every reconstructed vector.
//!
//! The fast route is certified, not heuristic: the rank of a reduction mod p
//! never exceeds the rank over `Q`, so once `cols - rank_p` reconstructed
//! kernel vectors verify exactly they are provably a full kernel basis, and
//! `rank_p = cols` proves the kernel is trivial. When reconstruction fails
//! (bad primes), more primes are added; as a last resort the reference route
//! decides.

use crate::scalar::{FieldScalar, FieldTag, ScalarError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sparse-row matrix over an exact field.
#[derive(Clone, Debug)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    field: FieldTag,
    /// Per row: `(column, value)` pairs, sorted by column, no explicit zeros.
    data: Vec<Vec<(usize, FieldScalar)>>,
}

/// Outcome of solving `M x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolve {
    Solution(Vec<FieldScalar>),
    Inconsistent,
}

impl ScalarMatrix {
    pub fn zero(rows: usize, cols: usize, field: FieldTag) -> Self {
        ScalarMatrix {
            rows,
            cols,
            field,
            data: vec![Vec::new(); rows],
        }
    }

    /// Builds from dense rows. All entries must share `field`.
    pub fn from_rows(rows: Vec<Vec<FieldScalar>>, field: FieldTag) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .into_iter()
            .map(|r| {
                assert!(r.len() == cols, "ragged rows");
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .inspect(|(_, v)| assert!(v.field() == field, "field mismatch in matrix"))
                    .collect()
            })
            .collect::<Vec<_>>();
        ScalarMatrix {
            rows: data.len(),
            cols,
            field,
            data,
        }
    }

    /// Builds from sparse rows (each sorted by column, zero-free).
    pub fn from_sparse_rows(
        rows: Vec<Vec<(usize, FieldScalar)>>,
        cols: usize,
        field: FieldTag,
    ) -> Self {
        for r in &rows {
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0), "unsorted sparse row");
            debug_assert!(r.iter().all(|(c, v)| *c < cols && !v.is_zero()));
        }
        ScalarMatrix {
            rows: rows.len(),
            cols,
            field,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> FieldScalar {
        self.data[r]
            .iter()
            .find(|(col, _)| *col == c)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| FieldScalar::zero(self.field))
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldScalar) {
        assert!(v.field() == self.field);
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => {
                if v.is_zero() {
                    row.remove(i);
                } else {
                    row[i].1 = v;
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    row.insert(i, (c, v));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        ScalarMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data,
        }
    }

    /// `M · x` for a dense vector.
    pub fn apply(&self, x: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = FieldScalar::zero(self.field);
                for (c, v) in row {
                    acc = acc.add(&v.mul(&x[*c]));
                }
                acc
            })
            .collect()
    }

    fn is_small(&self) -> bool {
        self.rows.max(self.cols) <= 64 || self.rows * self.cols <= 4096
    }

    /// A basis of `{x : Mx = 0}`. Basis vectors are normalized: over `Q`
    /// they are primitive integer vectors with positive first nonzero entry.
    pub fn nullspace(&self) -> Vec<Vec<FieldScalar>> {
        match self.field {
            FieldTag::Q if !self.is_small() => {
                if let Some(basis) = self.modular_nullspace(None) {
                    return basis;
                }
                self.exact_nullspace()
            }
            _ => self.exact_nullspace(),
        }
    }

    /// One nonzero kernel vector, or `None` if the kernel is trivial.
    pub fn kernel_vector(&self) -> Option<Vec<FieldScalar>> {
        match self.field {
            FieldTag::Q if !self.is_small() => {
                if let Some(mut basis) = self.modular_nullspace(Some(1)) {
                    return basis.drain(..).next();
                }
                self.exact_nullspace().into_iter().next()
            }
            _ => self.exact_nullspace().into_iter().next(),
        }
    }

    /// A kernel vector with a nonzero coordinate among `support`, if one
    /// exists. The kernel elements vanishing on `support` form a subspace,
    /// so it suffices to inspect any basis.
    pub fn kernel_vector_with_support(
        &self,
        support: std::ops::Range<usize>,
    ) -> Option<Vec<FieldScalar>> {
        let basis = self.nullspace();
        basis
            .into_iter()
            .find(|v| v[support.clone()].iter().any(|x| !x.is_zero()))
    }

    /// Rank via the reference elimination (exact; intended for small inputs).
    pub fn rank(&self) -> usize {
        self.exact_rref().pivots.len()
    }

    /// Solves `M x = b` by exact elimination; free variables are set to zero.
    pub fn solve(&self, rhs: &[FieldScalar]) -> LinearSolve {
        assert_eq!(rhs.len(), self.rows);
        let mut work: Vec<Vec<FieldScalar>> = self
            .data
            .iter()
            .map(|row| {
                let mut dense = vec![FieldScalar::zero(self.field); self.cols + 1];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect();
        for (r, b) in rhs.iter().enumerate() {
            work[r][self.cols] = b.clone();
        }
        let rref = rref_in_place(&mut work, self.cols, self.field);
        // A row with zero coefficients but nonzero right-hand side.
        for row in &work {
            if row[..self.cols].iter().all(|v| v.is_zero()) && !row[self.cols].is_zero() {
                return LinearSolve::Inconsistent;
            }
        }
        let mut x = vec![FieldScalar::zero(self.field); self.cols];
        for &(r, c) in &rref.pivots {
            x[c] = work[r][self.cols].clone();
        }
        LinearSolve::Solution(x)
    }

    /// Inverse of a square matrix, if non-singular.
    pub fn inverse(&self) -> Option<ScalarMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut work: Vec<Vec<FieldScalar>> = self
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut dense = vec![FieldScalar::zero(self.field); 2 * n];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense[n + r] = FieldScalar::one(self.field);
                dense
            })
            .collect();
        let rref = rref_in_place(&mut work, n, self.field);
        if rref.pivots.len() < n {
            return None;
        }
        let mut inv = vec![vec![FieldScalar::zero(self.field); n]; n];
        for &(r, c) in &rref.pivots {
            // Row r expresses e_c; its right half is row c of the inverse.
            for j in 0..n {
                inv[c][j] = work[r][n + j].clone();
            }
        }
        Some(ScalarMatrix::from_rows(inv, self.field))
    }

    // ------------------------------------------------------------------
    // Reference route: exact elimination.
    // ------------------------------------------------------------------

    fn exact_rref(&self) -> Rref {
        let mut work: Vec<Vec<FieldScalar>> = self
            .data
            .iter()
            .map(|row| {
                let mut dense = vec![FieldScalar::zero(self.field); self.cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect();
        rref_in_place(&mut work, self.cols, self.field)
    }

    fn exact_nullspace(&self) -> Vec<Vec<FieldScalar>> {
        let mut work: Vec<Vec<FieldScalar>> = self
            .data
            .iter()
            .map(|row| {
                let mut dense = vec![FieldScalar::zero(self.field); self.cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect();
        let rref = rref_in_place(&mut work, self.cols, self.field);
        let mut pivot_of_col = vec![None; self.cols];
        for &(r, c) in &rref.pivots {
            pivot_of_col[c] = Some(r);
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_of_col[f].is_some() {
                continue;
            }
            let mut v = vec![FieldScalar::zero(self.field); self.cols];
            v[f] = FieldScalar::one(self.field);
            for &(r, c) in &rref.pivots {
                v[c] = work[r][f].neg();
            }
            normalize_vector(&mut v, self.field);
            basis.push(v);
        }
        basis
    }

    // ------------------------------------------------------------------
    // Fast route: modular elimination + rational reconstruction.
    // ------------------------------------------------------------------

    /// Certified nullspace basis over `Q` via modular elimination. Returns
    /// `None` if reconstruction keeps failing (caller falls back to the
    /// reference route). `limit` truncates the basis (for single-vector
    /// queries).
    fn modular_nullspace(&self, limit: Option<usize>) -> Option<Vec<Vec<FieldScalar>>> {
        let int_rows = self.integer_rows();
        let mut primes = PrimeSeq::new();
        let mut runs: Vec<modp::Run> = Vec::new();
        // Establish a consensus rank/pivot profile, adding primes as needed.
        for _ in 0..3 {
            let p = primes.next_prime();
            runs.push(modp::run(&int_rows, self.cols, p));
        }
        for _round in 0..24 {
            let best_rank = runs.iter().map(|r| r.rank).max().unwrap();
            if best_rank == self.cols {
                // rank mod p <= rank over Q, so the kernel is provably trivial.
                return Some(Vec::new());
            }
            // Among maximal-rank runs, the lexicographically earliest pivot
            // profile is the one a good prime produces.
            let profile = runs
                .iter()
                .filter(|r| r.rank == best_rank)
                .map(|r| r.pivot_cols.clone())
                .min()
                .unwrap();
            let agreeing: Vec<&modp::Run> = runs
                .iter()
                .filter(|r| r.rank == best_rank && r.pivot_cols == profile)
                .collect();
            let free_cols: Vec<usize> =
                (0..self.cols).filter(|c| !profile.contains(c)).collect();
            let wanted = limit.unwrap_or(free_cols.len()).min(free_cols.len());
            let mut basis = Vec::new();
            let mut all_ok = true;
            for &f in free_cols.iter().take(wanted) {
                let residues: Vec<(Vec<u64>, u64)> = agreeing
                    .iter()
                    .map(|run| (run.kernel_vector(f), run.prime))
                    .collect();
                match reconstruct_vector(&residues) {
                    Some(v) if self.verify_kernel(&int_rows, &v) => {
                        let mut v: Vec<FieldScalar> =
                            v.into_iter().map(FieldScalar::Rat).collect();
                        normalize_vector(&mut v, FieldTag::Q);
                        basis.push(v);
                    }
                    _ => {
                        all_ok = false;
                        break;
                    }
                }
            }
            if all_ok {
                // Every vector verified exactly, and `cols - rank_p` of them
                // exist, so this is a complete basis (see module docs).
                return Some(basis);
            }
            // Heights too large or unlucky primes: widen the modulus.
            for _ in 0..2 {
                let p = primes.next_prime();
                runs.push(modp::run(&int_rows, self.cols, p));
            }
        }
        None
    }

    /// Row-wise denominator-cleared copy (kernel is unchanged by row scaling).
    fn integer_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        self.data
            .iter()
            .map(|row| {
                let mut lcm = BigInt::one();
                for (_, v) in row {
                    let r = v.as_rational().expect("modular route requires Q");
                    lcm = num_integer::lcm(lcm, r.denom().clone());
                }
                row.iter()
                    .map(|(c, v)| {
                        let r = v.as_rational().unwrap();
                        (*c, r.numer() * (&lcm / r.denom()))
                    })
                    .collect()
            })
            .collect()
    }

    fn verify_kernel(&self, int_rows: &[Vec<(usize, BigInt)>], v: &[BigRational]) -> bool {
        // Clear the candidate to an integer vector, then exact sparse dots.
        let mut lcm = BigInt::one();
        for x in v {
            lcm = num_integer::lcm(lcm, x.denom().clone());
        }
        let w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        if w.iter().all(|x| x.is_zero()) {
            return false;
        }
        int_rows.iter().all(|row| {
            let mut acc = BigInt::zero();
            for (c, a) in row {
                acc += a * &w[*c];
            }
            acc.is_zero()
        })
    }
}

struct Rref {
    /// `(row, col)` pivot pairs in selection order.
    pivots: Vec<(usize, usize)>,
}

/// Gauss-Jordan elimination in place over the first `cols` columns (extra
/// columns ride along, e.g. right-hand sides). Full pivoting on the scalar
/// weight keeps intermediate rationals small.
fn rref_in_place(work: &mut [Vec<FieldScalar>], cols: usize, _field: FieldTag) -> Rref {
    let rows = work.len();
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(usize, usize, u64)> = None;
        for r in 0..rows {
            if row_used[r] {
                continue;
            }
            for c in 0..cols {
                if col_used[c] || work[r][c].is_zero() {
                    continue;
                }
                let w = work[r][c].weight();
                if best.map_or(true, |(_, _, bw)| w < bw) {
                    best = Some((r, c, w));
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        row_used[pr] = true;
        col_used[pc] = true;
        let inv = work[pr][pc].inv().expect("pivot nonzero");
        for v in work[pr].iter_mut() {
            if !v.is_zero() {
                *v = v.mul(&inv);
            }
        }
        let pivot_row = work[pr].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for (j, v) in row.iter_mut().enumerate() {
                if !pivot_row[j].is_zero() {
                    *v = v.sub(&f.mul(&pivot_row[j]));
                }
            }
        }
        pivots.push((pr, pc));
    }
    Rref { pivots }
}

/// Scales a `Q`-vector to a primitive integer vector whose first nonzero
/// entry is positive; normalizes the leading entry to 1 over `F_p`.
fn normalize_vector(v: &mut [FieldScalar], field: FieldTag) {
    match field {
        FieldTag::Q => {
            let mut lcm = BigInt::one();
            let mut gcd = BigInt::zero();
            for x in v.iter() {
                let r = x.as_rational().unwrap();
                if !r.is_zero() {
                    lcm = num_integer::lcm(lcm, r.denom().clone());
                }
            }
            let ints: Vec<BigInt> = v
                .iter()
                .map(|x| {
                    let r = x.as_rational().unwrap();
                    r.numer() * (&lcm / r.denom())
                })
                .collect();
            for x in &ints {
                gcd = num_integer::gcd(gcd, x.clone());
            }
            if gcd.is_zero() {
                return;
            }
            let sign = ints
                .iter()
                .find(|x| !x.is_zero())
                .map_or(BigInt::one(), |x| {
                    if x.is_negative() {
                        -BigInt::one()
                    } else {
                        BigInt::one()
                    }
                });
            let div = gcd * sign;
            for (slot, x) in v.iter_mut().zip(ints) {
                *slot = FieldScalar::Rat(BigRational::from_integer(x / &div));
            }
        }
        FieldTag::Fp(_) => {
            if let Some(first) = v.iter().find(|x| !x.is_zero()).cloned() {
                let inv = first.inv().unwrap();
                for x in v.iter_mut() {
                    if !x.is_zero() {
                        *x = x.mul(&inv);
                    }
                }
            }
        }
    }
}

/// Deterministic descending sequence of 31-bit primes used by the fast route.
struct PrimeSeq {
    next: u64,
}

impl PrimeSeq {
    fn new() -> Self {
        PrimeSeq { next: (1 << 31) - 1 }
    }
    fn next_prime(&mut self) -> u64 {
        while !crate::scalar::is_prime_u64(self.next) {
            self.next -= 2;
        }
        let p = self.next;
        self.next -= 2;
        p
    }
}

/// Incremental CRT + rational reconstruction of one vector from residues
/// modulo pairwise-distinct primes.
fn reconstruct_vector(residues: &[(Vec<u64>, u64)]) -> Option<Vec<BigRational>> {
    let n = residues[0].0.len();
    let mut modulus = BigInt::one();
    let mut combined = vec![BigInt::zero(); n];
    for (vec, p) in residues {
        let pb = BigInt::from(*p);
        if modulus.is_one() {
            combined = vec.iter().map(|&x| BigInt::from(x)).collect();
        } else {
            // x = a + m * ((b - a) * m^-1 mod p)
            let m_inv = mod_inv_big(&modulus, &pb)?;
            for (acc, &b) in combined.iter_mut().zip(vec.iter()) {
                let diff = (BigInt::from(b) - &*acc) % &pb;
                let t = (diff * &m_inv) % &pb;
                let t = ((t % &pb) + &pb) % &pb;
                *acc += &modulus * t;
            }
        }
        modulus *= pb;
    }
    combined
        .iter()
        .map(|x| rational_reconstruct(x, &modulus))
        .collect()
}

fn mod_inv_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = num_integer::Integer::extended_gcd(&(((a % m) + m) % m), m);
    if e.gcd.is_one() {
        Some(((e.x % m) + m) % m)
    } else {
        None
    }
}

/// Wang's algorithm: the unique `n/d` with `|n|, d <= sqrt(m/2)` congruent
/// to `x` mod `m`, if it exists.
fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u8).sqrt();
    let (mut r0, mut r1) = (m.clone(), ((x % m) + m) % m);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if t1.is_negative() {
        r1 = -r1;
        t1 = -t1;
    }
    if num_integer::gcd(r1.clone(), t1.clone()).is_one() {
        Some(BigRational::new(r1, t1))
    } else {
        None
    }
}

/// Elimination modulo a single prime.
mod modp {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    /// Barrett reducer for `p < 2^31`; inputs up to `2^63`.
    #[derive(Clone, Copy)]
    pub struct Prime {
        pub p: u64,
        magic: u64, // floor(2^64 / p)
    }

    impl Prime {
        pub fn new(p: u64) -> Self {
            assert!(p < (1 << 31));
            Prime {
                p,
                magic: u64::MAX / p,
            }
        }
        #[inline]
        pub fn reduce(&self, t: u64) -> u64 {
            let q = ((t as u128 * self.magic as u128) >> 64) as u64;
            let mut r = t.wrapping_sub(q.wrapping_mul(self.p));
            while r >= self.p {
                r -= self.p;
            }
            r
        }
        #[inline]
        pub fn mul(&self, a: u64, b: u64) -> u64 {
            self.reduce(a * b)
        }
        pub fn inv(&self, a: u64) -> u64 {
            // Fermat; p is prime and a != 0.
            let mut acc = 1u64;
            let mut base = a % self.p;
            let mut e = self.p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul(acc, base);
                }
                base = self.mul(base, base);
                e >>= 1;
            }
            acc
        }
    }

    /// Result of a Gauss-Jordan pass mod one prime.
    pub struct Run {
        pub prime: u64,
        pub rank: usize,
        pub pivot_cols: Vec<usize>,
        ctx: Prime,
        /// Fully reduced pivot rows, aligned with `pivot_cols`.
        rows: Vec<Vec<u64>>,
    }

    impl Run {
        /// Kernel vector for a free column: unit there, back-filled pivots.
        pub fn kernel_vector(&self, free_col: usize) -> Vec<u64> {
            let cols = self.rows.first().map_or(free_col + 1, Vec::len);
            let mut v = vec![0u64; cols];
            v[free_col] = 1;
            for (row, &c) in self.rows.iter().zip(&self.pivot_cols) {
                let x = row[free_col];
                v[c] = if x == 0 { 0 } else { self.ctx.p - x };
            }
            v
        }
    }

    /// Reduces integer rows mod `p` and runs deterministic Gauss-Jordan
    /// (columns left to right, first available row as pivot).
    pub fn run(int_rows: &[Vec<(usize, BigInt)>], cols: usize, p: u64) -> Run {
        let ctx = Prime::new(p);
        let pb = BigInt::from(p);
        let mut work: Vec<Vec<u64>> = int_rows
            .iter()
            .map(|row| {
                let mut dense = vec![0u64; cols];
                for (c, v) in row {
                    dense[*c] = (((v % &pb) + &pb) % &pb).to_u64().unwrap();
                }
                dense
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut pivot_rows = Vec::new();
        let mut used = vec![false; work.len()];
        for c in 0..cols {
            let Some(pr) = (0..work.len()).find(|&r| !used[r] && work[r][c] != 0) else {
                continue;
            };
            used[pr] = true;
            let inv = ctx.inv(work[pr][c]);
            for x in work[pr].iter_mut() {
                if *x != 0 {
                    *x = ctx.mul(*x, inv);
                }
            }
            let pivot = std::mem::take(&mut work[pr]);
            for (r, row) in work.iter_mut().enumerate() {
                if r == pr || row.is_empty() || row[c] == 0 {
                    continue;
                }
                let f = row[c];
                // row <- row - f * pivot, fused Barrett reduction.
                for (x, &pv) in row.iter_mut().zip(pivot.iter()) {
                    if pv != 0 {
                        *x = ctx.reduce(*x + f * (p - pv));
                    }
                }
            }
            work[pr] = pivot;
            pivot_cols.push(c);
            pivot_rows.push(pr);
        }
        let rows = pivot_rows.iter().map(|&r| work[r].clone()).collect();
        Run {
            prime: p,
            rank: pivot_cols.len(),
            pivot_cols,
            ctx,
            rows,
        }
    }
}

/// Monte Carlo rank of a matrix of multivariate polynomials over `Q(X)`,
/// by evaluating at random integer points (Schwartz-Zippel). The entry
/// callback receives `(row, col, point)` and must return the specialized
/// scalar. The result is a lower bound on the generic rank that is exact
/// with overwhelming probability; it never exceeds `min(rows, cols)`.
pub fn rank_specialized<F>(
    rows: usize,
    cols: usize,
    nvars: usize,
    eval: F,
    trials: u32,
    seed: u64,
) -> Result<usize, ScalarError>
where
    F: Fn(usize, usize, &[FieldScalar]) -> FieldScalar,
{
    const COORD_BOUND: i64 = 1 << 16;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0usize;
    for _ in 0..trials.max(1) {
        let point: Vec<FieldScalar> = (0..nvars)
            .map(|_| FieldScalar::from_i64(rng.gen_range(-COORD_BOUND..=COORD_BOUND), FieldTag::Q))
            .collect();
        let mut mat_rows = Vec::with_capacity(rows);
        for r in 0..rows {
            let mut row = Vec::new();
            for c in 0..cols {
                let v = eval(r, c, &point);
                if v.field() != FieldTag::Q {
                    return Err(ScalarError::CharPUnsupported);
                }
                if !v.is_zero() {
                    row.push((c, v));
                }
            }
            mat_rows.push(row);
        }
        let m = ScalarMatrix::from_sparse_rows(mat_rows, cols, FieldTag::Q);
        let r = rank_modular(&m);
        best = best.max(r);
        if best == rows.min(cols) {
            break;
        }
    }
    Ok(best)
}

/// Cumulative rank profile of a rational matrix: entry `p` is the rank of
/// the submatrix formed by the first `p` columns (so the last entry is the
/// rank). Computed modulo the `prime_index`-th default prime — a lower
/// bound on the rational profile, exact with overwhelming probability;
/// callers wanting more confidence combine profiles for several indices
/// pointwise.
pub fn prefix_rank_profile(m: &ScalarMatrix, prime_index: usize) -> Vec<usize> {
    let int_rows = m.integer_rows();
    let mut primes = PrimeSeq::new();
    for _ in 0..prime_index {
        primes.next_prime();
    }
    let run = modp::run(&int_rows, m.cols(), primes.next_prime());
    let mut is_pivot = vec![false; m.cols()];
    for &c in &run.pivot_cols {
        is_pivot[c] = true;
    }
    let mut profile = vec![0usize; m.cols() + 1];
    for p in 1..=m.cols() {
        profile[p] = profile[p - 1] + usize::from(is_pivot[p - 1]);
    }
    profile
}

/// Rank of a rational matrix as the maximum over two reductions mod large
/// primes (a fast lower bound, exact whp; used by the specialization rank).
pub(crate) fn rank_modular(m: &ScalarMatrix) -> usize {
    let int_rows = m.integer_rows();
    let mut primes = PrimeSeq::new();
    let r1 = modp::run(&int_rows, m.cols(), primes.next_prime()).rank;
    if r1 == m.rows().min(m.cols()) {
        return r1;
    }
    let r2 = modp::run(&int_rows, m.cols(), primes.next_prime()).rank;
    r1.max(r2)
}
