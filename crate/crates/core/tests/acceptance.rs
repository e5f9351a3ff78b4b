//! Acceptance suite: one test per published criterion, each printing a
//! single `ACCEPT C<n> ...: PASS`/`FAIL` line (run with `--nocapture` to
//! see them). All randomness is seeded, so the corpus is reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weylq_core::bounds;
use weylq_core::hilbert::{bezout_check, HilbertError};
use weylq_core::matrix::{left_quasi_inverse, trapezoid_reduce, TrapezoidOutcome};
use weylq_core::ore::{fraction_equal, syzygy_search, Side};
use weylq_core::solve::{
    ansatz_solve, decide_solve, default_schedule, eliminate_gamma, verify_solution,
};
use weylq_core::{
    DegreeKind, FieldScalar, FieldTag, FractionContext, LinearSystem, ModulePresentation,
    Monomial, OpMatrix, OreFraction, SolveBudget, SolveStatus, VarSet, WeylOp,
};

const FIELD: FieldTag = FieldTag::Q;

/// Runs one criterion body and prints its verdict line.
fn report<F>(label: &str, f: F)
where
    F: FnOnce() + std::panic::UnwindSafe,
{
    let start = std::time::Instant::now();
    match std::panic::catch_unwind(f) {
        Ok(()) => println!("ACCEPT {label}: PASS ({:.1?})", start.elapsed()),
        Err(e) => {
            println!("ACCEPT {label}: FAIL ({:.1?})", start.elapsed());
            std::panic::resume_unwind(e);
        }
    }
}

fn rng_for(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xACCE_0000 + tag)
}

fn d(i: usize, m: usize) -> WeylOp {
    WeylOp::var_d(i, m, FIELD)
}

fn x(i: usize, m: usize) -> WeylOp {
    WeylOp::var_x(i, m, FIELD)
}

fn one(m: usize) -> WeylOp {
    WeylOp::one(m, FIELD)
}

/// Random operator over `A_m^(K)` with total degree at most `max_deg`; may
/// cancel to zero.
fn random_op(rng: &mut ChaCha8Rng, m: usize, k: &VarSet, max_deg: i64, max_terms: usize) -> WeylOp {
    let basis = Monomial::enumerate(m, k, max_deg);
    let mut op = WeylOp::zero(m, FIELD);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mono = basis[rng.gen_range(0..basis.len())].clone();
        let c = loop {
            let c: i64 = rng.gen_range(-9..=9);
            if c != 0 {
                break c;
            }
        };
        op = op.add(&WeylOp::from_monomial(mono, FieldScalar::from_i64(c, FIELD)));
    }
    op
}

fn random_nonzero(
    rng: &mut ChaCha8Rng,
    m: usize,
    k: &VarSet,
    max_deg: i64,
    max_terms: usize,
) -> WeylOp {
    loop {
        let op = random_op(rng, m, k, max_deg, max_terms);
        if !op.is_zero() {
            return op;
        }
    }
}

fn random_subset(rng: &mut ChaCha8Rng, m: usize) -> VarSet {
    let mut k = VarSet::empty(m);
    for i in 1..=m {
        if rng.gen_bool(0.5) {
            k.insert(i);
        }
    }
    k
}

#[test]
fn criterion_1_multiplication_action_oracle() {
    report("C1 multiplication vs polynomial action (500 pairs)", || {
        let mut rng = rng_for(1);
        for iter in 0..500 {
            let m = rng.gen_range(1..=3);
            let full = VarSet::full(m);
            let polys = VarSet::empty(m);
            let a = random_op(&mut rng, m, &full, 4, 4);
            let b = random_op(&mut rng, m, &full, 4, 4);
            let ab = a.mul(&b);
            for _ in 0..5 {
                let f = random_op(&mut rng, m, &polys, 3, 3);
                let composed = ab.apply_to(&f).unwrap();
                let stepwise = a.apply_to(&b.apply_to(&f).unwrap()).unwrap();
                assert_eq!(composed, stepwise, "iteration {iter}");
            }
        }
    });
}

#[test]
fn criterion_2_syzygy_degree_bound() {
    report("C2 syzygy existence within the degree bound (100 instances)", || {
        let mut rng = rng_for(2);
        for iter in 0..100 {
            let m = rng.gen_range(1..=2);
            let k = random_subset(&mut rng, m);
            let p = rng.gen_range(2..=3);
            let elems: Vec<WeylOp> = (0..p)
                .map(|_| random_nonzero(&mut rng, m, &k, 2, 3))
                .collect();
            let dmax = elems
                .iter()
                .map(|b| b.degree(&DegreeKind::DegWith(k)).max(0) as u64)
                .max()
                .unwrap();
            let cap = bounds::clamp_degree(&bounds::syzygy_degree_bound(m, k.len(), p, dmax));
            let (cofs, deg) = syzygy_search(&elems, &k, Side::Right, None)
                .unwrap_or_else(|| panic!("no syzygy found in instance {iter}"));
            assert!(deg <= cap, "instance {iter}: degree {deg} above bound {cap}");
            assert!(cofs.iter().any(|c| !c.is_zero()), "instance {iter}");
            let mut acc = WeylOp::zero(m, FIELD);
            for (b, c) in elems.iter().zip(&cofs) {
                assert!(c.in_subalgebra(&k), "instance {iter}");
                acc = acc.add(&b.mul(c));
            }
            assert!(acc.is_zero(), "instance {iter}: combination is nonzero");
        }
    });
}

#[test]
fn criterion_3_fraction_algebra_laws() {
    report("C3 fraction laws (200 instances)", || {
        let mut rng = rng_for(3);
        for iter in 0..200 {
            // One variable keeps every equality-witness search quadratic in
            // the candidate degree; the laws themselves are the same in any
            // dimension, while with all four generators of A_2 in play the
            // searches on sums and products grow beyond a test budget.
            let m = 1;
            let kd = random_subset(&mut rng, m);
            let ctx = FractionContext::new(m, FIELD, VarSet::full(m), kd).unwrap();
            let num = random_op(&mut rng, m, &VarSet::full(m), 2, 3);
            let den = random_nonzero(&mut rng, m, &kd, 2, 2);
            let u = OreFraction::new(num.clone(), den.clone(), &ctx).unwrap();
            assert!(fraction_equal(&u, &u, &ctx, None).unwrap(), "instance {iter}");
            // Right common factors leave the fraction unchanged.
            let c = random_nonzero(&mut rng, m, &kd, 1, 2);
            let u2 = OreFraction::new(num.mul(&c), den.mul(&c), &ctx).unwrap();
            assert!(fraction_equal(&u, &u2, &ctx, None).unwrap(), "instance {iter}");
            assert!(fraction_equal(&u2, &u, &ctx, None).unwrap(), "instance {iter}");
            // Sums and products respect that equality.
            let g = OreFraction::new(
                random_op(&mut rng, m, &VarSet::full(m), 2, 2),
                random_nonzero(&mut rng, m, &kd, 1, 2),
                &ctx,
            )
            .unwrap();
            let sums = (u.add(&g, &ctx).unwrap(), u2.add(&g, &ctx).unwrap());
            assert!(fraction_equal(&sums.0, &sums.1, &ctx, None).unwrap(), "instance {iter}");
            let prods = (u.mul(&g, &ctx).unwrap(), u2.mul(&g, &ctx).unwrap());
            assert!(fraction_equal(&prods.0, &prods.1, &ctx, None).unwrap(), "instance {iter}");
        }
    });
}

#[test]
fn criterion_4_quasi_inverse() {
    report("C4 quasi-inverse diagonalization (50 matrices)", || {
        let mut rng = rng_for(4);
        let mut done = 0;
        let mut attempts = 0;
        while done < 50 {
            attempts += 1;
            assert!(attempts < 500, "too many singular draws");
            let m = rng.gen_range(1..=2);
            let k = random_subset(&mut rng, m);
            // The row searches sweep monomial spaces in m + |K| generators;
            // shrink the matrix size and entry degree as that count grows so
            // the corpus stays within the runtime budget.
            let (p, deg) = match m + k.len() {
                0..=2 => (rng.gen_range(2..=3), 2),
                3 => {
                    let p = rng.gen_range(2..=3);
                    (p, if p == 3 { 1 } else { 2 })
                }
                _ => (2, 1),
            };
            let rows: Vec<Vec<WeylOp>> = (0..p)
                .map(|_| (0..p).map(|_| random_op(&mut rng, m, &k, deg, 2)).collect())
                .collect();
            let b = OpMatrix::from_rows(rows, m, FIELD).unwrap();
            let (c, diag) = match left_quasi_inverse(&b, &k) {
                Ok(out) => out,
                Err(_) => continue, // singular draw: outside the corpus
            };
            let product = c.mul(&b).unwrap();
            for i in 0..p {
                assert!(!diag[i].is_zero(), "attempt {attempts}");
                for j in 0..p {
                    let expected = if i == j { diag[i].clone() } else { WeylOp::zero(m, FIELD) };
                    assert_eq!(*product.get(i, j), expected, "attempt {attempts} ({i},{j})");
                }
            }
            let dmax = b.max_degree(&DegreeKind::DegWith(k)).max(0) as u64;
            let cap = bounds::clamp_degree(&bounds::syzygy_degree_bound(m, k.len(), p, dmax));
            assert!(
                c.max_degree(&DegreeKind::DegWith(k)) <= cap,
                "attempt {attempts}: cofactor degree above bound {cap}"
            );
            done += 1;
        }
    });
}

/// Builds a random linear system. Elimination over both generators of `A_2`
/// compounds fraction-representative degrees stage by stage, so the
/// two-variable instances are kept small (and their matrices effectively
/// rank one) while every `K_den` split is still visited; one-variable
/// instances roam freely over the full shape range.
fn random_system(rng: &mut ChaCha8Rng) -> LinearSystem {
    let m = rng.gen_range(1..=2);
    let kd = random_subset(rng, m);
    let full = VarSet::full(m);
    let (eq_max, unk_max): (usize, usize) = if m == 1 {
        (3, 3)
    } else if kd == full {
        (1, 1)
    } else {
        (2, 2)
    };
    let mut eqs = rng.gen_range(1..=eq_max);
    let mut unks = rng.gen_range(1..=unk_max);
    if m == 2 && eqs == 2 && unks == 2 {
        if rng.gen_bool(0.5) {
            eqs = 1;
        } else {
            unks = 1;
        }
    }
    // Degree-2 entries are reserved for shapes of rank at most two: a third
    // elimination stage on top of degree-2 denominators is where the
    // compounding turns into minutes.
    let deg_cap: i64 = if m == 2 && kd != full {
        1
    } else if eqs.max(unks) >= 3 {
        1
    } else {
        2
    };
    let ctx = FractionContext::new(m, FIELD, full, kd).unwrap();
    let entry = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.25) {
            WeylOp::zero(m, FIELD)
        } else {
            let deg = (*[0, 1, 1, 2].get(rng.gen_range(0..4)).unwrap()).min(deg_cap);
            random_op(rng, m, &full, deg, 2)
        }
    };
    let rows: Vec<Vec<WeylOp>> =
        (0..eqs).map(|_| (0..unks).map(|_| entry(rng)).collect()).collect();
    let rhs: Vec<WeylOp> = (0..eqs).map(|_| entry(rng)).collect();
    let a = OpMatrix::from_rows(rows, m, FIELD).unwrap();
    LinearSystem::new(a, rhs, ctx).unwrap()
}

#[test]
fn criterion_5_solver_cross_validation() {
    report("C5 solver cross-validation (3 fixtures + 50 systems)", || {
        let budget = SolveBudget::default();
        let schedule = default_schedule();

        // Fixture: d1 * V = 1 admits no polynomial-denominator solution.
        let m = 1;
        let empty = VarSet::empty(m);
        let ctx0 = FractionContext::new(m, FIELD, VarSet::full(m), empty).unwrap();
        let sys = LinearSystem::new(
            OpMatrix::from_rows(vec![vec![d(1, m)]], m, FIELD).unwrap(),
            vec![one(m)],
            ctx0,
        )
        .unwrap();
        assert_eq!(decide_solve(&sys, 5, &budget).unwrap().status, SolveStatus::Unsolvable);

        // Fixture: x1 * V = 1 is solved by the inverse of x1.
        let sys = LinearSystem::new(
            OpMatrix::from_rows(vec![vec![x(1, m)]], m, FIELD).unwrap(),
            vec![one(m)],
            ctx0,
        )
        .unwrap();
        let out = decide_solve(&sys, 5, &budget).unwrap();
        assert_eq!(out.status, SolveStatus::Solved);
        let sol = out.solution.unwrap();
        let expected = OreFraction::new(one(m), x(1, m), &ctx0).unwrap();
        assert!(fraction_equal(&sol[0], &expected, &ctx0, None).unwrap());

        // Fixture: the same equation is solvable once d1 may appear in
        // denominators.
        let ctx1 = FractionContext::full(m, FIELD);
        let sys = LinearSystem::new(
            OpMatrix::from_rows(vec![vec![d(1, m)]], m, FIELD).unwrap(),
            vec![one(m)],
            ctx1,
        )
        .unwrap();
        assert_eq!(decide_solve(&sys, 5, &budget).unwrap().status, SolveStatus::Solved);

        // Random corpus: the two solvers must never contradict each other,
        // solutions must verify exactly, and the variable-elimination stage
        // must preserve the verdict.
        let mut rng = rng_for(5);
        for iter in 0..50 {
            let sys = random_system(&mut rng);
            let elim = decide_solve(&sys, iter, &budget).unwrap();
            let ansatz = ansatz_solve(&sys, &schedule).unwrap();
            let contradiction = matches!(
                (elim.status, ansatz.status),
                (SolveStatus::Solved, SolveStatus::Unsolvable)
                    | (SolveStatus::Unsolvable, SolveStatus::Solved)
            );
            assert!(!contradiction, "instance {iter}: solvers disagree");
            for out in [&elim, &ansatz] {
                if let Some(sol) = &out.solution {
                    assert!(verify_solution(&sys, sol).unwrap(), "instance {iter}");
                }
            }
            let ka = sys.ctx.ka();
            let kd = sys.ctx.kd();
            let outside = ka.minus(&kd);
            if outside.is_empty() {
                continue;
            }
            let gamma = outside.iter().next().unwrap();
            match trapezoid_reduce(&sys).unwrap() {
                TrapezoidOutcome::Inconsistent => {
                    assert_eq!(elim.status, SolveStatus::Unsolvable, "instance {iter}");
                }
                TrapezoidOutcome::Reduced(trap) => {
                    if trap.r == 0 {
                        continue;
                    }
                    let (_, reduced) = eliminate_gamma(&trap, gamma, iter).unwrap();
                    let after = decide_solve(&reduced, iter, &budget).unwrap();
                    if elim.status != SolveStatus::UndecidedAtCap
                        && after.status != SolveStatus::UndecidedAtCap
                    {
                        assert_eq!(after.status, elim.status, "instance {iter}");
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_6_hilbert_kolchin_fixtures() {
    report("C6 module invariant fixtures", || {
        // All first-order derivations: invariants (0, 1).
        for m in 1..=3 {
            let gens: Vec<Vec<WeylOp>> = (1..=m).map(|i| vec![d(i, m)]).collect();
            let l = ModulePresentation::new(gens, m, FIELD).unwrap();
            let rep = bezout_check(&l, 6, 0).unwrap();
            assert_eq!((rep.t, rep.l.to_string().as_str()), (0, "1"), "m={m}");
        }
        // A single power of d1: invariants (0, k).
        for k in 1..=4u32 {
            let l = ModulePresentation::new(vec![vec![d(1, 1).pow(k)]], 1, FIELD).unwrap();
            let rep = bezout_check(&l, 6, 0).unwrap();
            assert_eq!(rep.t, 0, "k={k}");
            assert_eq!(rep.l.to_string(), k.to_string(), "k={k}");
        }
        // One derivation in two variables: invariants (1, 1) and the
        // expected linear growth.
        let l = ModulePresentation::new(vec![vec![d(1, 2)]], 2, FIELD).unwrap();
        let rep = bezout_check(&l, 6, 0).unwrap();
        assert_eq!((rep.t, rep.l.to_string().as_str()), (1, "1"));
        for (z, v) in &rep.hf {
            assert_eq!(*v, z + 1);
        }
    });
}

#[test]
fn criterion_7_leading_coefficient_bound() {
    report("C7 leading-coefficient bound on random presentations (30)", || {
        let mut rng = rng_for(7);
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 30 {
            attempts += 1;
            assert!(attempts < 300, "too many non-stabilizing draws");
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=2);
            let s = rng.gen_range(1..=3);
            let gens: Vec<Vec<WeylOp>> = (0..s)
                .map(|_| loop {
                    let row: Vec<WeylOp> = (0..n)
                        .map(|_| {
                            if rng.gen_bool(0.25) {
                                WeylOp::zero(m, FIELD)
                            } else {
                                random_order_capped(&mut rng, m, 2, 2)
                            }
                        })
                        .collect();
                    if row.iter().any(|w| !w.is_zero()) {
                        break row;
                    }
                })
                .collect();
            let l = ModulePresentation::new(gens, m, FIELD).unwrap();
            match bezout_check(&l, 8, attempts) {
                Ok(rep) => {
                    assert!(
                        rep.bounds.satisfied,
                        "attempt {attempts}: bound violated (t={}, l={}, bound={}, kolchin={:?})",
                        rep.t, rep.l, rep.bounds.bezout, rep.bounds.kolchin_sum
                    );
                    checked += 1;
                }
                Err(HilbertError::NotStabilized(_)) => continue,
                Err(e) => panic!("attempt {attempts}: {e}"),
            }
        }
    });
}

/// Random operator with derivation order and polynomial degree capped
/// separately (1 or 2 terms).
fn random_order_capped(rng: &mut ChaCha8Rng, m: usize, xcap: u32, dcap: u32) -> WeylOp {
    let mut op = WeylOp::zero(m, FIELD);
    for _ in 0..rng.gen_range(1..=2) {
        let mut mono = Monomial::unit(m);
        for _ in 0..rng.gen_range(0..=xcap) {
            mono.xexp[rng.gen_range(0..m)] += 1;
        }
        for _ in 0..rng.gen_range(0..=dcap) {
            mono.dexp[rng.gen_range(0..m)] += 1;
        }
        let c = loop {
            let c: i64 = rng.gen_range(-5..=5);
            if c != 0 {
                break c;
            }
        };
        op = op.add(&WeylOp::from_monomial(mono, FieldScalar::from_i64(c, FIELD)));
    }
    op
}

#[test]
fn criterion_8_degree_bound_spot_values() {
    report("C8 closed-form bound spot values", || {
        assert_eq!(
            bounds::solution_degree_bound(1, 0, 1, 1, 1),
            65536u32.into()
        );
        assert_eq!(bounds::syzygy_degree_bound(1, 1, 2, 1), 4u32.into());
        assert_eq!(bounds::bezout_bound(1, 1, 2, 1, 1), 256u32.into());
    });
}
