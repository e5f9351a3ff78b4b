//! Normal-ordered operators in the Weyl algebra `A_m` over an exact field.
//!
//! `A_m` is generated by `X_1..X_m, D_1..D_m` subject to
//!
//! * `X_i X_j = X_j X_i`, `D_i D_j = D_j D_i`,
//! * `D_i X_i = X_i D_i + 1`, `D_i X_j = X_j D_i` for `i != j`.
//!
//! Every element is kept in normal order (all `X` powers to the left of all
//! `D` powers) as a sparse sum of monomials `X^a D^b`. Products are expanded
//! with the closed-form commutation rule
//!
//! ```text
//! D_i^s X_i^j = sum_k  C(s,k) * j(j-1)...(j-k+1) * X_i^{j-k} D_i^{s-k}
//! ```
//!
//! The subalgebra `A_m^(K)` consists of the operators whose derivations all
//! lie in the index set `K` (all `X` variables are always allowed).

use crate::linalg::ScalarMatrix;
use crate::scalar::{binomial, falling, scalar_from_biguint, FieldScalar, FieldTag};
use num_traits::Signed;
use std::collections::BTreeMap;
use std::fmt;

/// Errors surfaced by operator-level computations.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("operation requires characteristic zero")]
    CharPUnsupported,
    #[error("basis transformation matrix is singular")]
    SingularOmega,
    #[error("operand is not a polynomial (contains derivations)")]
    NotPolynomial,
    #[error("a derivation index set is required for this degree kind")]
    MissingK,
}

/// A subset of the variable indices `{1, ..., m}` (1-based), stored as a
/// bitmask. Used for the derivation sets `K` defining subalgebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet {
    m: usize,
    mask: u64,
}

impl VarSet {
    pub fn empty(m: usize) -> Self {
        assert!(m <= 64);
        VarSet { m, mask: 0 }
    }

    pub fn full(m: usize) -> Self {
        assert!(m <= 64);
        VarSet {
            m,
            mask: if m == 64 { !0 } else { (1u64 << m) - 1 },
        }
    }

    /// Builds from 1-based indices; panics on out-of-range entries.
    pub fn from_indices(m: usize, indices: &[usize]) -> Self {
        let mut s = VarSet::empty(m);
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i >= 1 && i <= self.m, "variable index {i} out of 1..={}", self.m);
        self.mask |= 1 << (i - 1);
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.m && self.mask & (1 << (i - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        assert_eq!(self.m, other.m);
        VarSet {
            m: self.m,
            mask: self.mask | other.mask,
        }
    }

    pub fn minus(&self, other: &VarSet) -> VarSet {
        assert_eq!(self.m, other.m);
        VarSet {
            m: self.m,
            mask: self.mask & !other.mask,
        }
    }

    pub fn complement(&self) -> VarSet {
        VarSet {
            m: self.m,
            mask: VarSet::full(self.m).mask & !self.mask,
        }
    }

    pub fn is_subset_of(&self, other: &VarSet) -> bool {
        self.m == other.m && self.mask & !other.mask == 0
    }

    /// Ascending 1-based indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.m).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A normal-ordered monomial `X^xexp D^dexp`; both exponent vectors have
/// length `m`. Ordered graded-lexicographically: first by total degree,
/// then lexicographically on `(xexp, dexp)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub xexp: Vec<u32>,
    pub dexp: Vec<u32>,
}

impl Monomial {
    pub fn unit(m: usize) -> Self {
        Monomial {
            xexp: vec![0; m],
            dexp: vec![0; m],
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.xexp.iter().map(|&e| e as u64).sum::<u64>()
            + self.dexp.iter().map(|&e| e as u64).sum::<u64>()
    }

    pub fn is_unit(&self) -> bool {
        self.xexp.iter().all(|&e| e == 0) && self.dexp.iter().all(|&e| e == 0)
    }

    /// All monomials of total degree at most `max_deg` whose derivations lie
    /// in `dvars`, in ascending graded-lex order.
    pub fn enumerate(m: usize, dvars: &VarSet, max_deg: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if max_deg < 0 {
            return out;
        }
        let dlist = dvars.to_vec();
        let slots = m + dlist.len();
        let mut exps = vec![0u32; slots];
        fn rec(
            slot: usize,
            left: u32,
            exps: &mut Vec<u32>,
            m: usize,
            dlist: &[usize],
            out: &mut Vec<Monomial>,
        ) {
            if slot == exps.len() {
                let mut mono = Monomial::unit(m);
                mono.xexp.copy_from_slice(&exps[..m]);
                for (j, &d) in dlist.iter().enumerate() {
                    mono.dexp[d - 1] = exps[m + j];
                }
                out.push(mono);
                return;
            }
            for e in 0..=left {
                exps[slot] = e;
                rec(slot + 1, left - e, exps, m, dlist, out);
            }
            exps[slot] = 0;
        }
        rec(0, max_deg as u32, &mut exps, m, &dlist, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.xexp.cmp(&other.xexp))
            .then_with(|| self.dexp.cmp(&other.dexp))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Which filtration degree to take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeKind {
    /// Total degree in all `X` and `D` variables.
    Bernstein,
    /// Total degree in all `D` variables.
    OrdD,
    /// Total degree in the derivations *outside* the given set.
    OrdOutside(VarSet),
    /// Total degree in all `X` variables plus the derivations *inside* the set.
    DegWith(VarSet),
}

/// A normal-ordered element of `A_m`: sparse terms with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylOp {
    m: usize,
    field: FieldTag,
    terms: BTreeMap<Monomial, FieldScalar>,
}

impl WeylOp {
    pub fn zero(m: usize, field: FieldTag) -> Self {
        WeylOp {
            m,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: usize, field: FieldTag) -> Self {
        WeylOp::constant(FieldScalar::one(field), m)
    }

    pub fn constant(c: FieldScalar, m: usize) -> Self {
        let field = c.field();
        let mut op = WeylOp::zero(m, field);
        if !c.is_zero() {
            op.terms.insert(Monomial::unit(m), c);
        }
        op
    }

    /// The generator `X_i` (1-based).
    pub fn var_x(i: usize, m: usize, field: FieldTag) -> Self {
        assert!(i >= 1 && i <= m);
        let mut mono = Monomial::unit(m);
        mono.xexp[i - 1] = 1;
        WeylOp::from_monomial(mono, FieldScalar::one(field))
    }

    /// The generator `D_i` (1-based).
    pub fn var_d(i: usize, m: usize, field: FieldTag) -> Self {
        assert!(i >= 1 && i <= m);
        let mut mono = Monomial::unit(m);
        mono.dexp[i - 1] = 1;
        WeylOp::from_monomial(mono, FieldScalar::one(field))
    }

    pub fn from_monomial(mono: Monomial, coeff: FieldScalar) -> Self {
        let m = mono.xexp.len();
        let field = coeff.field();
        let mut op = WeylOp::zero(m, field);
        if !coeff.is_zero() {
            op.terms.insert(mono, coeff);
        }
        op
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn field(&self) -> FieldTag {
        self.field
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> FieldScalar {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| FieldScalar::zero(self.field))
    }

    /// Graded-lex-largest monomial, if nonzero.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    fn insert(&mut self, mono: Monomial, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &WeylOp) -> WeylOp {
        assert_eq!(self.m, rhs.m);
        assert_eq!(self.field, rhs.field);
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.insert(mono.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> WeylOp {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, rhs: &WeylOp) -> WeylOp {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &FieldScalar) -> WeylOp {
        assert_eq!(s.field(), self.field);
        let mut out = WeylOp::zero(self.m, self.field);
        if s.is_zero() {
            return out;
        }
        for (mono, c) in &self.terms {
            out.terms.insert(mono.clone(), c.mul(s));
        }
        out
    }

    /// Noncommutative product, expanded into normal order.
    pub fn mul(&self, rhs: &WeylOp) -> WeylOp {
        assert_eq!(self.m, rhs.m);
        assert_eq!(self.field, rhs.field);
        let mut out = WeylOp::zero(self.m, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let c = c1.mul(c2);
                mul_monomials(m1, m2, &c, self.field, &mut out);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> WeylOp {
        let mut acc = WeylOp::one(self.m, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Filtration degree of the given kind; `-1` for the zero operator.
    pub fn degree(&self, kind: &DegreeKind) -> i64 {
        self.terms
            .keys()
            .map(|mono| match kind {
                DegreeKind::Bernstein => mono.total_degree() as i64,
                DegreeKind::OrdD => mono.dexp.iter().map(|&e| e as i64).sum(),
                DegreeKind::OrdOutside(k) => (1..=self.m)
                    .filter(|i| !k.contains(*i))
                    .map(|i| mono.dexp[i - 1] as i64)
                    .sum(),
                DegreeKind::DegWith(k) => {
                    mono.xexp.iter().map(|&e| e as i64).sum::<i64>()
                        + (1..=self.m)
                            .filter(|i| k.contains(*i))
                            .map(|i| mono.dexp[i - 1] as i64)
                            .sum::<i64>()
                }
            })
            .max()
            .unwrap_or(-1)
    }

    /// Degree in the single derivation `D_gamma`; `-1` for zero.
    pub fn dgamma_degree(&self, gamma: usize) -> i64 {
        self.terms
            .keys()
            .map(|mono| mono.dexp[gamma - 1] as i64)
            .max()
            .unwrap_or(-1)
    }

    /// The set of variables whose derivation actually occurs.
    pub fn derivation_support(&self) -> VarSet {
        let mut s = VarSet::empty(self.m);
        for mono in self.terms.keys() {
            for i in 1..=self.m {
                if mono.dexp[i - 1] > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    /// Whether all derivations lie in `K`, i.e. the operator is in `A_m^(K)`.
    pub fn in_subalgebra(&self, k: &VarSet) -> bool {
        self.derivation_support().is_subset_of(k)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|mono| mono.dexp.iter().all(|&e| e == 0))
    }

    /// Writes `h = sum_s D_gamma^s h_s` with every `h_s` free of `D_gamma`
    /// (coefficients on the *right* of the `D_gamma` powers). Returns the
    /// nonzero levels `(s, h_s)` in ascending order of `s`.
    pub fn gamma_decompose(&self, gamma: usize) -> Vec<(u32, WeylOp)> {
        assert!(gamma >= 1 && gamma <= self.m);
        let g = gamma - 1;
        let mut levels: BTreeMap<u32, WeylOp> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let j = mono.xexp[g];
            let s = mono.dexp[g];
            // X^j D^s = sum_k (-1)^k C(s,k) j(j-1)..(j-k+1) D^{s-k} X^{j-k}
            for k in 0..=j.min(s) {
                let mut factor = scalar_from_biguint(
                    &(binomial(s as u64, k as u64) * falling(j as u64, k as u64)),
                    self.field,
                );
                if k % 2 == 1 {
                    factor = factor.neg();
                }
                let coeff = c.mul(&factor);
                if coeff.is_zero() {
                    continue;
                }
                let mut rest = mono.clone();
                rest.xexp[g] = j - k;
                rest.dexp[g] = 0;
                levels
                    .entry(s - k)
                    .or_insert_with(|| WeylOp::zero(self.m, self.field))
                    .insert(rest, coeff);
            }
        }
        levels.retain(|_, h| !h.is_zero());
        levels.into_iter().collect()
    }

    /// Reassembles `sum_s D_gamma^s h_s`; inverse of [`Self::gamma_decompose`].
    pub fn gamma_recompose(
        levels: &[(u32, WeylOp)],
        gamma: usize,
        m: usize,
        field: FieldTag,
    ) -> WeylOp {
        let d = WeylOp::var_d(gamma, m, field);
        let mut acc = WeylOp::zero(m, field);
        for (s, h) in levels {
            acc = acc.add(&d.pow(*s).mul(h));
        }
        acc
    }

    /// Leading coefficient of the `D_gamma` expansion (the top level), and
    /// its level. `None` for the zero operator.
    pub fn gamma_leading(&self, gamma: usize) -> Option<(u32, WeylOp)> {
        self.gamma_decompose(gamma).into_iter().next_back()
    }

    /// Formal adjoint: `X_i -> X_i`, `D_i -> -D_i`, extended as an
    /// anti-automorphism (`adjoint(ab) = adjoint(b) adjoint(a)`).
    pub fn adjoint(&self) -> WeylOp {
        let mut out = WeylOp::zero(self.m, self.field);
        for (mono, c) in &self.terms {
            // adjoint(X^a D^b) = (-1)^{|b|} D^b X^a, reordered.
            let dtotal: u32 = mono.dexp.iter().sum();
            let mut coeff = c.clone();
            if dtotal % 2 == 1 {
                coeff = coeff.neg();
            }
            let dmono = Monomial {
                xexp: vec![0; self.m],
                dexp: mono.dexp.clone(),
            };
            let xmono = Monomial {
                xexp: mono.xexp.clone(),
                dexp: vec![0; self.m],
            };
            mul_monomials(&dmono, &xmono, &coeff, self.field, &mut out);
        }
        out
    }

    /// Applies the operator to a polynomial (an element with no derivations):
    /// `X_i` acts by multiplication, `D_i` by partial derivative.
    /// Characteristic zero only.
    pub fn apply_to(&self, f: &WeylOp) -> Result<WeylOp, WeylError> {
        if self.field != FieldTag::Q {
            return Err(WeylError::CharPUnsupported);
        }
        if !f.is_polynomial() {
            return Err(WeylError::NotPolynomial);
        }
        assert_eq!(self.m, f.m);
        let mut out = WeylOp::zero(self.m, self.field);
        for (mono, c) in &self.terms {
            for (fm, fc) in &f.terms {
                // D^b X^u -> falling factorials; zero if any u_i < b_i.
                let mut coeff = c.mul(fc);
                let mut ok = true;
                let mut newexp = fm.xexp.clone();
                for i in 0..self.m {
                    let b = mono.dexp[i];
                    let u = fm.xexp[i];
                    if b > u {
                        ok = false;
                        break;
                    }
                    if b > 0 {
                        coeff =
                            coeff.mul(&scalar_from_biguint(&falling(u as u64, b as u64), self.field));
                        newexp[i] = u - b;
                    }
                }
                if !ok || coeff.is_zero() {
                    continue;
                }
                for i in 0..self.m {
                    newexp[i] += mono.xexp[i];
                }
                out.insert(
                    Monomial {
                        xexp: newexp,
                        dexp: vec![0; self.m],
                    },
                    coeff,
                );
            }
        }
        Ok(out)
    }

    /// Evaluates a polynomial at a point.
    pub fn eval_polynomial(&self, point: &[FieldScalar]) -> Result<FieldScalar, WeylError> {
        if !self.is_polynomial() {
            return Err(WeylError::NotPolynomial);
        }
        assert_eq!(point.len(), self.m);
        let mut acc = FieldScalar::zero(self.field);
        for (mono, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.m {
                for _ in 0..mono.xexp[i] {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

/// Multiplies two normal-ordered monomials and accumulates the expansion
/// into `out`: `(X^a D^b)(X^u D^v) = X^a (D^b X^u) D^v`.
fn mul_monomials(m1: &Monomial, m2: &Monomial, coeff: &FieldScalar, field: FieldTag, out: &mut WeylOp) {
    let m = m1.xexp.len();
    // Variables where a commutation actually happens.
    let active: Vec<usize> = (0..m)
        .filter(|&i| m1.dexp[i] > 0 && m2.xexp[i] > 0)
        .collect();
    let mut choice = vec![0u32; active.len()];
    loop {
        // Contribution for this choice of contraction orders k_i.
        let mut factor = num_bigint::BigUint::from(1u32);
        for (slot, &i) in active.iter().enumerate() {
            let k = choice[slot] as u64;
            factor *= binomial(m1.dexp[i] as u64, k) * falling(m2.xexp[i] as u64, k);
        }
        let c = coeff.mul(&scalar_from_biguint(&factor, field));
        if !c.is_zero() {
            let mut mono = Monomial::unit(m);
            for i in 0..m {
                mono.xexp[i] = m1.xexp[i] + m2.xexp[i];
                mono.dexp[i] = m1.dexp[i] + m2.dexp[i];
            }
            for (slot, &i) in active.iter().enumerate() {
                mono.xexp[i] -= choice[slot];
                mono.dexp[i] -= choice[slot];
            }
            out.insert(mono, c);
        }
        // Odometer over 0..=min(b_i, u_i) per active variable.
        let mut slot = 0;
        loop {
            if slot == active.len() {
                return;
            }
            let i = active[slot];
            if choice[slot] < m1.dexp[i].min(m2.xexp[i]) {
                choice[slot] += 1;
                break;
            }
            choice[slot] = 0;
            slot += 1;
        }
    }
}

/// A linear change of the transformed basis pairs `(X_v, D_v)` for `v` in
/// `vars`: `D_v -> sum_w Omega[v][w] D_w` and `X_v -> sum_w (Omega^T)^{-1}[v][w] X_w`,
/// extended to an algebra automorphism fixing the remaining generators.
/// This preserves the defining relations, the Bernstein filtration, and the
/// filtrations `OrdOutside(K)` / `DegWith(K)` for any `K` disjoint from `vars`.
#[derive(Clone, Debug)]
pub struct BasisChange {
    m: usize,
    field: FieldTag,
    vars: Vec<usize>,
    ximg: Vec<WeylOp>,
    dimg: Vec<WeylOp>,
}

impl BasisChange {
    /// `omega` is square of size `vars.len()`, over the operator field.
    pub fn new(
        m: usize,
        field: FieldTag,
        vars: &[usize],
        omega: &ScalarMatrix,
    ) -> Result<Self, WeylError> {
        let k = vars.len();
        assert_eq!(omega.rows(), k);
        assert_eq!(omega.cols(), k);
        let xmat = omega.transpose().inverse().ok_or(WeylError::SingularOmega)?;
        let mut ximg = Vec::with_capacity(k);
        let mut dimg = Vec::with_capacity(k);
        for r in 0..k {
            let mut xi = WeylOp::zero(m, field);
            let mut di = WeylOp::zero(m, field);
            for (c, &v) in vars.iter().enumerate() {
                xi = xi.add(&WeylOp::var_x(v, m, field).scale(&xmat.get(r, c)));
                di = di.add(&WeylOp::var_d(v, m, field).scale(&omega.get(r, c)));
            }
            ximg.push(xi);
            dimg.push(di);
        }
        Ok(BasisChange {
            m,
            field,
            vars: vars.to_vec(),
            ximg,
            dimg,
        })
    }

    pub fn apply(&self, op: &WeylOp) -> WeylOp {
        assert_eq!(op.m, self.m);
        let slot_of = |i: usize| self.vars.iter().position(|&v| v == i);
        let mut out = WeylOp::zero(self.m, self.field);
        for (mono, c) in &op.terms {
            // X images commute among themselves, as do D images, and the
            // X part stays left of the D part; so expand the two halves
            // independently and concatenate.
            let mut xpart = WeylOp::one(self.m, self.field);
            let mut dpart = WeylOp::one(self.m, self.field);
            for i in 1..=self.m {
                let (xe, de) = (mono.xexp[i - 1], mono.dexp[i - 1]);
                if xe > 0 {
                    let factor = match slot_of(i) {
                        Some(s) => self.ximg[s].pow(xe),
                        None => WeylOp::var_x(i, self.m, self.field).pow(xe),
                    };
                    xpart = xpart.mul(&factor);
                }
                if de > 0 {
                    let factor = match slot_of(i) {
                        Some(s) => self.dimg[s].pow(de),
                        None => WeylOp::var_d(i, self.m, self.field).pow(de),
                    };
                    dpart = dpart.mul(&factor);
                }
            }
            out = out.add(&xpart.mul(&dpart).scale(c));
        }
        out
    }
}

/// One-shot basis transformation of a single operator (see [`BasisChange`]).
pub fn omega_transform(
    op: &WeylOp,
    omega: &ScalarMatrix,
    vars: &[usize],
) -> Result<WeylOp, WeylError> {
    Ok(BasisChange::new(op.m, op.field, vars, omega)?.apply(op))
}

impl fmt::Display for WeylOp {
    /// Normal-ordered, graded-lex descending, explicit `*` between factors.
    /// The output is re-parseable by the CLI expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (mono, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c {
                FieldScalar::Rat(r) if r.is_negative() => (true, FieldScalar::Rat(-r)),
                other => (false, other.clone()),
            };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            // A leading negative term keeps an explicit magnitude ("-1*x1",
            // not "-x1"): the expression grammar only admits '-' inside a
            // rational literal or as a binary operator.
            if !mag.is_one() || mono.is_unit() || (n == 0 && neg) {
                factors.push(format!("{mag}"));
            }
            for i in 0..self.m {
                match mono.xexp[i] {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    e => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            for i in 0..self.m {
                match mono.dexp[i] {
                    0 => {}
                    1 => factors.push(format!("d{}", i + 1)),
                    e => factors.push(format!("d{}^{}", i + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Monte Carlo rank over `Q(X)` of a matrix of polynomial entries, via
/// integer specialization (see [`crate::linalg::rank_specialized`]).
pub fn poly_matrix_rank(
    entries: &[Vec<WeylOp>],
    trials: u32,
    seed: u64,
) -> Result<usize, WeylError> {
    let rows = entries.len();
    let cols = entries.first().map_or(0, Vec::len);
    let nvars = entries
        .first()
        .and_then(|r| r.first())
        .map_or(0, |op| op.m());
    for row in entries {
        for e in row {
            if !e.is_polynomial() {
                return Err(WeylError::NotPolynomial);
            }
            if e.field() != FieldTag::Q {
                return Err(WeylError::CharPUnsupported);
            }
        }
    }
    crate::linalg::rank_specialized(
        rows,
        cols,
        nvars,
        |r, c, pt| entries[r][c].eval_polynomial(pt).unwrap(),
        trials,
        seed,
    )
    .map_err(|_| WeylError::CharPUnsupported)
}
