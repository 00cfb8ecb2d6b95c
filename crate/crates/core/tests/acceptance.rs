//! Acceptance suite. Each test runs one criterion end to end, exactly (no
//! numeric tolerances anywhere), inside its stated runtime budget, and
//! prints one pass/fail line (visible with `--nocapture`).
//!
//! The criteria serialize on a global lock so the runtime budgets are
//! honest on small machines.

use covpic_core::binary::{
    assignment_from_form, discriminant, equivariance_weight_check, generic_form, BinaryForm, Mat2,
};
use covpic_core::elimination::{
    apply_g, apply_h, build_elimination_family, check_lambda_structure, random_far_point,
    scale_point, EliminationData, FarPoint,
};
use covpic_core::lattice::{smith_normal_form, AbelianGroup, IntMatrix};
use covpic_core::num_bigint::BigInt;
use covpic_core::num_rational::BigRational;
use covpic_core::num_traits::{One, Signed, Zero};
use covpic_core::picard::{divisor_relation_matrix, picard_group, unit_count_check, CoverParams};
use covpic_core::poly::VarFamily;
use covpic_core::rat::{pow_rational, random_rational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

static SERIAL: Mutex<()> = Mutex::new(());

/// Runs a criterion body under the global lock and asserts its budget.
fn criterion<F: FnOnce()>(number: u32, label: &str, budget: Duration, body: F) {
    let _guard = SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
    let start = Instant::now();
    body();
    let elapsed = start.elapsed();
    println!("criterion {number} ({label}): PASS in {elapsed:?} (budget {budget:?})");
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
}

/// Elimination data for every n in 3..=rd+1, built once per (r, d).
fn family(r: u32, d: u32) -> &'static [EliminationData] {
    static F23: OnceLock<Vec<EliminationData>> = OnceLock::new();
    static F24: OnceLock<Vec<EliminationData>> = OnceLock::new();
    static F32: OnceLock<Vec<EliminationData>> = OnceLock::new();
    let cell = match (r, d) {
        (2, 3) => &F23,
        (2, 4) => &F24,
        (3, 2) => &F32,
        _ => panic!("family not cached for (r, d) = ({r}, {d})"),
    };
    cell.get_or_init(|| build_elimination_family(r, d, r * d + 1).expect("family builds"))
        .as_slice()
}

// ---- Criterion 1: golden table ----

#[test]
fn criterion_1_golden_table() {
    criterion(1, "golden table", Duration::from_secs(1), || {
        let expect = |r: u32, g: u32, n: u32, want: &str| {
            let params = CoverParams::new(r, g, n).expect("valid parameters");
            let result = picard_group(&params).expect("assembly succeeds");
            assert_eq!(result.group.render(), want, "Pic at r={r} g={g} n={n}");
        };
        expect(2, 2, 0, "Z/10");
        expect(2, 2, 1, "Z (+) Z/10");
        expect(2, 2, 2, "Z^2 (+) Z/10");
        for n in 3..=10 {
            expect(2, 2, n, &format!("Z^{n} (+) Z/20"));
        }
        expect(2, 3, 1, "Z (+) Z/28");
        expect(2, 4, 2, "Z^2 (+) Z/18");
        for n in 3..=10 {
            expect(2, 3, n, &format!("Z^{n} (+) Z/28"));
        }
        expect(3, 4, 5, "Z^15 (+) Z/30");
    });
}

// ---- Criterion 2: lattice pipeline vs the closed-form theorem ----

/// The closed-form answer, written out independently of the library:
/// free rank 0 / 1 / r / (r-2)C(n,2)+n for n = 0 / 1 / 2 / >= 3, torsion
/// cyclic of order r(rd-1) gcd(d,2) for n <= 2 and 2r(rd-1) for n >= 3.
fn theorem_formula(r: u64, d: u64, n: u64) -> (usize, u64) {
    let rd = r * d;
    let base = r * (rd - 1);
    let torsion = if n >= 3 || d % 2 == 0 { 2 * base } else { base };
    let free = match n {
        0 => 0,
        1 => 1,
        2 => r as usize,
        _ => (r as usize - 2) * (n as usize * (n as usize - 1) / 2) + n as usize,
    };
    (free, torsion)
}

#[test]
fn criterion_2_lattice_vs_closed_form() {
    criterion(2, "lattice pipeline vs closed form", Duration::from_secs(5), || {
        let mut cases = 0;
        for r in [2u32, 3, 4] {
            for g in 2..=12u32 {
                let Ok(base) = CoverParams::new(r, g, 0) else {
                    continue;
                };
                let rd = base.rd();
                for n in 0..=rd + 1 {
                    let params = base.with_n(n);
                    let (free, torsion) =
                        theorem_formula(u64::from(r), u64::from(params.d()), u64::from(n));
                    let expected = AbelianGroup::new(free, vec![BigInt::from(torsion)]);
                    let result = picard_group(&params).expect("assembly succeeds");
                    assert_eq!(
                        result.group, expected,
                        "full group differs at r={r} g={g} n={n}"
                    );
                    // The far part carries the torsion and the n <= 2 free rank.
                    let far = params.picard_far();
                    assert_eq!(far.torsion, expected.torsion, "far torsion at r={r} g={g} n={n}");
                    let far_free = match n {
                        0 => 0,
                        1 | 2 => 1,
                        _ => 0,
                    };
                    assert_eq!(far.free_rank, far_free, "far free rank at r={r} g={g} n={n}");
                    cases += 1;
                }
            }
        }
        assert!(cases > 100, "grid unexpectedly small: {cases}");
    });
}

// ---- Criterion 3: elimination round trip with an independent oracle ----

/// Exact Gaussian elimination with partial pivoting, independent of the
/// recursion under test.
fn gaussian_solve(
    mut matrix: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = matrix.len();
    for col in 0..n {
        let pivot_row = (col..n).find(|&row| !matrix[row][col].is_zero())?;
        matrix.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let pivot = matrix[col][col].clone();
        for entry in matrix[col].iter_mut() {
            *entry /= &pivot;
        }
        rhs[col] /= &pivot;
        for row in 0..n {
            if row != col && !matrix[row][col].is_zero() {
                let factor = matrix[row][col].clone();
                for j in 0..n {
                    let delta = &factor * &matrix[col][j];
                    matrix[row][j] -= delta;
                }
                let delta = &factor * &rhs[col];
                rhs[row] -= delta;
            }
        }
    }
    Some(rhs)
}

/// Solves the rd+1 linear conditions on the coefficients directly:
/// a_0 = s_2^r, a_rd = s_1^r, sum a_i = s_3^r, sum a_i p_k^i = t_k^r, and
/// the free coefficients pinned to the point's values.
fn oracle_coefficients(r: u32, rd: u32, pt: &FarPoint) -> Option<Vec<BigRational>> {
    let size = rd as usize + 1;
    let mut matrix = Vec::with_capacity(size);
    let mut rhs = Vec::with_capacity(size);
    let r_exp = i64::from(r);
    let mut push_row = |row: Vec<BigRational>, value: BigRational| {
        matrix.push(row);
        rhs.push(value);
    };
    let unit_row = |j: usize| {
        let mut row = vec![BigRational::zero(); size];
        row[j] = BigRational::one();
        row
    };
    push_row(unit_row(0), pow_rational(&pt.s[1], r_exp));
    push_row(unit_row(rd as usize), pow_rational(&pt.s[0], r_exp));
    push_row(
        vec![BigRational::one(); size],
        pow_rational(&pt.s[2], r_exp),
    );
    for (p, t) in pt.p.iter().zip(&pt.t) {
        let row: Vec<BigRational> = (0..size).map(|i| pow_rational(p, i as i64)).collect();
        push_row(row, pow_rational(t, r_exp));
    }
    for (i, value) in pt.a.iter().enumerate() {
        push_row(unit_row(i + 1), value.clone());
    }
    assert_eq!(matrix.len(), size, "the conditions form a square system");
    gaussian_solve(matrix, rhs)
}

#[test]
fn criterion_3_elimination_round_trip() {
    criterion(3, "elimination round trip", Duration::from_secs(60), || {
        for (r, d) in [(2u32, 3u32), (2, 4), (3, 2)] {
            for data in family(r, d) {
                let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
                for trial in 0..20 {
                    let pt = random_far_point(data, &mut rng);
                    let cp = apply_g(data, &pt).expect("section evaluates");
                    cp.check_constraints(r).unwrap_or_else(|e| {
                        panic!("constraints fail at r={r} d={d} n={} trial {trial}: {e}", data.n())
                    });
                    let back = apply_h(data, &cp).expect("projection succeeds");
                    assert_eq!(back, pt, "round trip at r={r} d={d} n={}", data.n());
                    let oracle = oracle_coefficients(r, data.rd(), &pt)
                        .expect("oracle system is nonsingular on the valid locus");
                    assert_eq!(
                        cp.form.coeffs(),
                        &oracle[..],
                        "oracle coefficients differ at r={r} d={d} n={} trial {trial}",
                        data.n()
                    );
                }
            }
        }
    });
}

// ---- Criterion 4: lemma property suite ----

#[test]
fn criterion_4_lemma_properties() {
    criterion(4, "lemma property suite", Duration::from_secs(60), || {
        for (r, d) in [(2u32, 3u32), (2, 4), (3, 2)] {
            for data in family(r, d) {
                let n = data.n();
                // Weighted homogeneity of degree r under (a: r, s/t: 1).
                let mut weights = BTreeMap::new();
                weights.insert(VarFamily::A, i64::from(r));
                weights.insert(VarFamily::S, 1);
                weights.insert(VarFamily::T, 1);
                weights.insert(VarFamily::P, 0);
                for (i, phi) in data.phi().iter().enumerate() {
                    assert!(
                        phi.numerator().weighted_degree_check(&weights, i64::from(r)),
                        "phi[{i}] inhomogeneous at r={r} d={d} n={n}"
                    );
                }
                // lambda_0 is identically 1.
                assert!(
                    data.lambda()[0].as_poly().is_some_and(|p| p.is_one()),
                    "lambda_0 differs from 1 at r={r} d={d} n={n}"
                );
                // lambda_tilde: degree, constant term 1, exact root set by
                // symbolic division, at every solved index.
                for i in 1..data.lambda().len() {
                    check_lambda_structure(data, i).unwrap_or_else(|msg| {
                        panic!("lambda structure fails at r={r} d={d} n={n} index {i}: {msg}")
                    });
                }
            }
        }
    });
}

// ---- Criterion 5: discriminant equivariance ----

#[test]
fn criterion_5_discriminant_equivariance() {
    criterion(5, "discriminant equivariance", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
        for m in [4usize, 6] {
            for _ in 0..10 {
                let form = BinaryForm::new(
                    (0..=m).map(|_| random_rational(&mut rng, 20)).collect(),
                );
                for _ in 0..10 {
                    let a = loop {
                        let candidate = Mat2::new(
                            random_rational(&mut rng, 10),
                            random_rational(&mut rng, 10),
                            random_rational(&mut rng, 10),
                            random_rational(&mut rng, 10),
                        );
                        if !candidate.det().is_zero() {
                            break candidate;
                        }
                    };
                    assert!(
                        equivariance_weight_check(&form, &a).expect("valid inputs"),
                        "equivariance fails at degree {m}"
                    );
                }
            }
        }
    });
}

// ---- Criterion 6: the weight of the discriminant divisor ----

#[test]
fn criterion_6_delta_weight() {
    criterion(6, "discriminant divisor weight", Duration::from_secs(120), || {
        // Both grids have rd = 6: expand the symbolic degree-6 discriminant
        // once and evaluate the composition with the section map.
        let symbolic = discriminant(&generic_form(6)).expect("degree 6");
        for (r, d) in [(2u32, 3u32), (3, 2)] {
            let rd = r * d;
            let weight = -2 * i64::from(rd) * (i64::from(rd) - 1);
            for data in family(r, d) {
                let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
                for _ in 0..10 {
                    let pt = random_far_point(data, &mut rng);
                    let cp = apply_g(data, &pt).expect("section evaluates");
                    let value = symbolic
                        .eval(&assignment_from_form(&cp.form))
                        .expect("full assignment");
                    // Dual route: the numeric Sylvester determinant agrees.
                    assert_eq!(value, discriminant(&cp.form).expect("degree 6"));
                    for _ in 0..5 {
                        let alpha = loop {
                            let candidate = random_rational(&mut rng, 10);
                            if !candidate.is_zero() {
                                break candidate;
                            }
                        };
                        let scaled = scale_point(data, &pt, &alpha);
                        let cp_scaled = apply_g(data, &scaled).expect("section evaluates");
                        let scaled_value = symbolic
                            .eval(&assignment_from_form(&cp_scaled.form))
                            .expect("full assignment");
                        assert_eq!(
                            scaled_value,
                            pow_rational(&alpha, weight) * &value,
                            "weight fails at r={r} d={d} n={}",
                            data.n()
                        );
                    }
                }
            }
        }
    });
}

// ---- Criterion 7: relation-lattice ranks ----

#[test]
fn criterion_7_relation_ranks() {
    criterion(7, "relation-lattice ranks", Duration::from_secs(5), || {
        for r in [2u32, 3, 4] {
            for n in 3..=10u32 {
                let matrix = divisor_relation_matrix(r, n);
                let snf = smith_normal_form(&matrix);
                let n_usize = n as usize;
                let pairs = n_usize * (n_usize - 1) / 2;
                assert_eq!(
                    snf.rank(),
                    pairs - n_usize,
                    "rank differs at r={r} n={n}"
                );
                assert!(
                    snf.invariant_factors().iter().all(|f| f.is_one()),
                    "quotient has torsion at r={r} n={n}"
                );
                assert_eq!(
                    matrix.ncols() - snf.rank(),
                    (r as usize - 2) * pairs + n_usize,
                    "free quotient rank differs at r={r} n={n}"
                );
            }
        }
        for n in 3..=10 {
            assert!(unit_count_check(n), "unit count fails at n={n}");
        }
    });
}

// ---- Criterion 8: Smith normal form property suite ----

#[test]
fn criterion_8_smith_normal_form_suite() {
    criterion(8, "Smith normal form suite", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
        for trial in 0..200 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let mut m = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, BigInt::from(rng.gen_range(-50i64..=50)));
                }
            }
            let snf = smith_normal_form(&m);
            assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d, "U M V != D at trial {trial}");
            assert_eq!(snf.u.determinant().abs(), BigInt::one(), "U not unimodular");
            assert_eq!(snf.v.determinant().abs(), BigInt::one(), "V not unimodular");
            let diag: Vec<BigInt> = (0..rows.min(cols))
                .map(|i| snf.d.get(i, i).clone())
                .collect();
            for i in 0..rows {
                for j in 0..cols {
                    if i != j {
                        assert!(snf.d.get(i, j).is_zero(), "off-diagonal at trial {trial}");
                    }
                }
            }
            for w in diag.windows(2) {
                if w[0].is_zero() {
                    assert!(w[1].is_zero(), "zero ordering at trial {trial}");
                } else {
                    assert!(
                        (&w[1] % &w[0]).is_zero(),
                        "divisibility chain fails at trial {trial}: {diag:?}"
                    );
                }
            }
            if rows == cols {
                let det = m.determinant().abs();
                if !det.is_zero() {
                    let product: BigInt = snf.invariant_factors().iter().product();
                    assert_eq!(det, product, "det vs factor product at trial {trial}");
                }
            }
        }
    });
}
