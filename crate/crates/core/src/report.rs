//! Seeded verification suites shared by the CLI `verify` subcommands and the
//! test suites. Each suite returns a list of named pass/fail checks;
//! failures are reported, never thrown.

use crate::binary::{
    discriminant, equivariance_weight_check, form_mul, generic_form, gl2_action, x_power_form,
    BinaryForm, Mat2, NumericForm,
};
use crate::lattice::{ambient_quotient, smith_normal_form, IntMatrix};
use crate::poly::VarFamily;
use crate::rat::random_rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

/// One named check inside a verification report.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// A titled collection of checks with the seed echoed for reproducibility.
#[derive(Debug, Clone)]
pub struct Report {
    pub title: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn random_invertible_mat2<R: Rng>(rng: &mut R, bound: i64) -> Mat2 {
    loop {
        let m = Mat2::new(
            random_rational(rng, bound),
            random_rational(rng, bound),
            random_rational(rng, bound),
            random_rational(rng, bound),
        );
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn random_form<R: Rng>(rng: &mut R, degree: usize, bound: i64) -> NumericForm {
    BinaryForm::new((0..=degree).map(|_| random_rational(rng, bound)).collect())
}

/// Discriminant suite: symbolic homogeneity of degree 2(m-1) for small m,
/// the equivariance weight at random forms and matrices, vanishing on
/// forms with a square factor, and the left group-action law.
pub fn discriminant_report(max_symbolic_degree: usize, trials: u32, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // Symbolic expansion is only performed for m <= 8; larger degrees are
    // covered by the evaluation-based checks below.
    let top = max_symbolic_degree.min(8).max(2);
    let mut weights = BTreeMap::new();
    weights.insert(VarFamily::A, 1);
    let mut homogeneous = true;
    let mut detail = String::new();
    for m in 2..=top {
        let disc = discriminant(&generic_form(m)).expect("degree >= 2");
        let expected = 2 * (m as i64 - 1);
        if !disc.weighted_degree_check(&weights, expected) {
            homogeneous = false;
            detail = format!("degree {m}: symbolic discriminant is not homogeneous of degree {expected}");
            break;
        }
    }
    checks.push(CheckResult::new(
        "symbolic discriminant homogeneity of degree 2(m-1)",
        homogeneous,
        if homogeneous {
            format!("verified for m in 2..={top}")
        } else {
            detail
        },
    ));

    // Equivariance: disc(A.f) = (det A)^{-m(m-1)} disc(f), exactly.
    let mut equivariant = true;
    let mut detail = String::new();
    'outer: for m in [4usize, 6] {
        for trial in 0..trials {
            let f = random_form(&mut rng, m, 20);
            let a = random_invertible_mat2(&mut rng, 10);
            match equivariance_weight_check(&f, &a) {
                Ok(true) => {}
                Ok(false) => {
                    equivariant = false;
                    detail = format!("degree {m}, trial {trial}: weights disagree");
                    break 'outer;
                }
                Err(e) => {
                    equivariant = false;
                    detail = format!("degree {m}, trial {trial}: {e}");
                    break 'outer;
                }
            }
        }
    }
    checks.push(CheckResult::new(
        "equivariance disc(A.f) = (det A)^{-m(m-1)} disc(f)",
        equivariant,
        if equivariant {
            format!("{trials} trials each for m = 4 and m = 6")
        } else {
            detail
        },
    ));

    // Vanishing on (ax + by)^2 g, plus the x^m corner case.
    let mut vanishes = true;
    let mut detail = String::new();
    for trial in 0..trials.max(20) {
        let degree = 4 + (trial as usize % 3);
        let (alpha, beta) = loop {
            let a = random_rational(&mut rng, 10);
            let b = random_rational(&mut rng, 10);
            if !a.is_zero() || !b.is_zero() {
                break (a, b);
            }
        };
        let square = form_mul(
            &BinaryForm::new(vec![alpha.clone(), beta.clone()]),
            &BinaryForm::new(vec![alpha, beta]),
        );
        let g = random_form(&mut rng, degree - 2, 10);
        let f = form_mul(&square, &g);
        match discriminant(&f) {
            Ok(d) if d.is_zero() => {}
            Ok(_) => {
                vanishes = false;
                detail = format!("trial {trial}: discriminant of a square-factor form is nonzero");
                break;
            }
            Err(e) => {
                vanishes = false;
                detail = format!("trial {trial}: {e}");
                break;
            }
        }
    }
    if vanishes {
        for m in 2..=6 {
            if !discriminant(&x_power_form(m)).unwrap().is_zero() {
                vanishes = false;
                detail = format!("disc(x^{m}) is nonzero");
                break;
            }
        }
    }
    checks.push(CheckResult::new(
        "discriminant vanishes exactly on square factors",
        vanishes,
        if vanishes {
            "square-factor forms and x^m all vanish".to_string()
        } else {
            detail
        },
    ));

    // Left action: (AB).f = A.(B.f).
    let mut action_ok = true;
    let mut detail = String::new();
    for trial in 0..trials {
        let f = random_form(&mut rng, 5, 10);
        let a = random_invertible_mat2(&mut rng, 8);
        let b = random_invertible_mat2(&mut rng, 8);
        let lhs = gl2_action(&a.mul(&b), &f).unwrap();
        let rhs = gl2_action(&a, &gl2_action(&b, &f).unwrap()).unwrap();
        if lhs != rhs {
            action_ok = false;
            detail = format!("trial {trial}: (AB).f differs from A.(B.f)");
            break;
        }
    }
    checks.push(CheckResult::new(
        "substitution is a left group action",
        action_ok,
        if action_ok {
            format!("{trials} trials")
        } else {
            detail
        },
    ));

    Report {
        title: "discriminant".to_string(),
        seed,
        checks,
    }
}

/// A random matrix with the acceptance-suite shape limits.
pub fn random_int_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let mut m = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, BigInt::from(rng.gen_range(-bound..=bound)));
        }
    }
    m
}

fn snf_contract_holds(m: &IntMatrix) -> Result<(), String> {
    let snf = smith_normal_form(m);
    if snf.u.mul(m).mul(&snf.v) != snf.d {
        return Err("U*M*V differs from D".to_string());
    }
    if snf.u.determinant().abs() != BigInt::one() {
        return Err("U is not unimodular".to_string());
    }
    if snf.v.determinant().abs() != BigInt::one() {
        return Err("V is not unimodular".to_string());
    }
    for i in 0..snf.d.nrows() {
        for j in 0..snf.d.ncols() {
            if i != j && !snf.d.get(i, j).is_zero() {
                return Err("D is not diagonal".to_string());
            }
        }
    }
    let diag: Vec<BigInt> = (0..snf.d.nrows().min(snf.d.ncols()))
        .map(|i| snf.d.get(i, i).clone())
        .collect();
    for w in diag.windows(2) {
        if w[0].is_zero() {
            if !w[1].is_zero() {
                return Err("zero invariant factor before a nonzero one".to_string());
            }
        } else if !(&w[1] % &w[0]).is_zero() {
            return Err(format!("divisibility chain fails: {diag:?}"));
        }
    }
    if diag.iter().any(|d| d.is_negative()) {
        return Err("negative diagonal entry".to_string());
    }
    if m.nrows() == m.ncols() {
        let det = m.determinant().abs();
        let product: BigInt = snf.invariant_factors().iter().product();
        // For singular square matrices the product runs over fewer factors.
        if !det.is_zero() && det != product {
            return Err(format!("|det| = {det} differs from the factor product {product}"));
        }
    }
    Ok(())
}

/// Lattice suite: the Smith normal form contract on seeded random matrices,
/// |det| as the invariant-factor product, quotient invariance under
/// unimodular re-generation, and the parity dichotomy of the quotient of
/// Z^2 by r(rd-1)(d, 2).
pub fn lattice_report(trials: u32, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut contract_ok = true;
    let mut detail = String::new();
    for trial in 0..trials {
        let m = random_int_matrix(&mut rng, 8, 50);
        if let Err(msg) = snf_contract_holds(&m) {
            contract_ok = false;
            detail = format!("trial {trial}: {msg}");
            break;
        }
    }
    checks.push(CheckResult::new(
        "Smith normal form contract on random matrices",
        contract_ok,
        if contract_ok {
            format!("{trials} matrices up to 8x8, entries in [-50, 50]")
        } else {
            detail
        },
    ));

    // Quotient invariance under unimodular re-generation of the subgroup.
    let mut invariant = true;
    let mut detail = String::new();
    for trial in 0..trials.min(50) {
        let k = rng.gen_range(1..=4usize);
        let gens: Vec<Vec<BigInt>> = (0..rng.gen_range(1..=4usize))
            .map(|_| {
                (0..k)
                    .map(|_| BigInt::from(rng.gen_range(-20i64..=20)))
                    .collect()
            })
            .collect();
        let q1 = ambient_quotient(k, &gens);
        // Replace gens by W * gens for a random small unimodular W.
        let w = random_unimodular(&mut rng, gens.len());
        let mixed: Vec<Vec<BigInt>> = (0..gens.len())
            .map(|i| {
                (0..k)
                    .map(|c| {
                        (0..gens.len())
                            .map(|j| w.get(i, j) * &gens[j][c])
                            .sum::<BigInt>()
                    })
                    .collect()
            })
            .collect();
        let q2 = ambient_quotient(k, &mixed);
        if q1 != q2 {
            invariant = false;
            detail = format!("trial {trial}: {q1} vs {q2}");
            break;
        }
    }
    checks.push(CheckResult::new(
        "quotients are invariant under unimodular re-generation",
        invariant,
        if invariant {
            "generator mixing preserved every invariant factor".to_string()
        } else {
            detail
        },
    ));

    // Parity dichotomy: Z^2 / <r(rd-1) (d, 2)> for the test grid.
    let mut parity_ok = true;
    let mut detail = String::new();
    'grid: for r in [2u32, 3, 4] {
        for d in 1u32..=8 {
            let rd = u64::from(r * d);
            if rd < 2 {
                continue;
            }
            let base = u64::from(r) * (rd - 1);
            let gen = vec![
                BigInt::from(base * u64::from(d)),
                BigInt::from(base * 2),
            ];
            let quotient = ambient_quotient(2, &[gen]);
            let expected_torsion = if d % 2 == 0 { 2 * base } else { base };
            let expected = crate::lattice::AbelianGroup::new(
                1,
                vec![BigInt::from(expected_torsion)],
            );
            if quotient != expected {
                parity_ok = false;
                detail = format!("r={r}, d={d}: got {quotient}, expected {expected}");
                break 'grid;
            }
        }
    }
    checks.push(CheckResult::new(
        "parity dichotomy of Z^2 / <r(rd-1)(d,2)>",
        parity_ok,
        if parity_ok {
            "torsion doubles exactly when d is even".to_string()
        } else {
            detail
        },
    ));

    Report {
        title: "lattice".to_string(),
        seed,
        checks,
    }
}

/// A random unimodular matrix: a product of a few elementary row operations.
fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut w = IntMatrix::identity(n);
    if n < 2 {
        return w;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = BigInt::from(rng.gen_range(-3i64..=3));
        for col in 0..n {
            let v = w.get(i, col) + &c * w.get(j, col);
            w.set(i, col, v);
        }
    }
    w
}

/// Elimination suite wrapper returning the shared report shape.
pub fn elimination_report(r: u32, d: u32, n: u32, trials: u32, seed: u64) -> Result<Report, crate::elimination::ElimError> {
    let data = crate::elimination::build_elimination(r, d, n)?;
    let inner = crate::elimination::verify_elimination(&data, trials, seed);
    Ok(Report {
        title: format!("elimination r={r} d={d} n={n}"),
        seed,
        checks: inner
            .checks
            .into_iter()
            .map(|c| CheckResult::new(c.name, c.passed, c.detail))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_suite_passes() {
        let report = discriminant_report(6, 5, 3);
        assert!(report.all_passed(), "{:#?}", report.checks);
    }

    #[test]
    fn lattice_suite_passes() {
        let report = lattice_report(30, 5);
        assert!(report.all_passed(), "{:#?}", report.checks);
    }

    #[test]
    fn elimination_suite_passes() {
        let report = elimination_report(2, 3, 4, 5, 1).unwrap();
        assert!(report.all_passed(), "{:#?}", report.checks);
    }
}
