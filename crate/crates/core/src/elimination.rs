//! The coefficient-elimination recursion behind the second presentation.
//!
//! For 3 <= n <= rd+1, the constraints f(0,1) = s_1^r, f(1,0) = s_2^r,
//! f(1,1) = s_3^r, f(1,p_i) = t_i^r determine the trailing coefficients
//! a_{rd+2-n}, ..., a_{rd-1} of a degree-rd form as rational functions
//! phi_{n-3}, ..., phi_0 of the free data. Each inductive step isolates one
//! coefficient from a relation in which it occurs linearly:
//! a_{rd+2-n} * lambda_{n-3} = psi_{n-3}, with
//! lambda_{n-3} = p_{n-3}^{rd+2-n} * lambda_tilde and lambda_tilde a
//! polynomial of degree n-3 in p_{n-3} with constant term 1 whose roots are
//! exactly 1, p_1, ..., p_{n-4}. That structure is re-verified symbolically
//! at every step and the factored form it yields keeps all denominators
//! products of linear p-factors.

use crate::binary::NumericForm;
use crate::fraction::{FactoredRational, FractionError};
use crate::poly::{Assignment, Monomial, MultiPoly, VarFamily, VarId};
use crate::rat::{pow_rational, random_rational};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Errors from the elimination machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElimError {
    /// n outside 3..=rd+1.
    OutOfRange { n: u32, rd: u32 },
    /// r < 2 or d < 1.
    InvalidParams { r: u32, d: u32 },
    /// A solved coefficient occurred nonlinearly (never expected).
    NonlinearOccurrence { var: VarId },
    /// The verified lambda structure failed (never expected).
    StructureCheck(String),
    /// A lambda denominator vanished at an evaluation point outside the
    /// valid locus (treated as a defect).
    DenominatorVanished,
    /// A point violates the defining equations or the point-locus rules.
    ConstraintViolated(String),
    /// An unassigned variable during evaluation.
    Missing(VarId),
}

impl fmt::Display for ElimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElimError::OutOfRange { n, rd } => {
                write!(f, "n = {n} outside the valid range 3..={}", rd + 1)
            }
            ElimError::InvalidParams { r, d } => write!(f, "invalid parameters r = {r}, d = {d}"),
            ElimError::NonlinearOccurrence { var } => {
                write!(f, "coefficient {var} occurs nonlinearly")
            }
            ElimError::StructureCheck(msg) => write!(f, "structure check failed: {msg}"),
            ElimError::DenominatorVanished => write!(f, "denominator vanished at the point"),
            ElimError::ConstraintViolated(msg) => write!(f, "constraint violated: {msg}"),
            ElimError::Missing(v) => write!(f, "unassigned variable {v}"),
        }
    }
}

impl std::error::Error for ElimError {}

impl From<FractionError> for ElimError {
    fn from(e: FractionError) -> Self {
        match e {
            FractionError::DenominatorVanished => ElimError::DenominatorVanished,
            FractionError::Missing(v) => ElimError::Missing(v),
            other => ElimError::StructureCheck(other.to_string()),
        }
    }
}

/// The solved coefficient functions for given (r, d, n): for i = 0..=n-3,
/// the coefficient a_{rd-1-i} equals phi_i = psi_i / lambda_i.
#[derive(Debug, Clone)]
pub struct EliminationData {
    r: u32,
    d: u32,
    n: u32,
    /// phi[i] is the solved value of a_{rd-1-i}.
    phi: Vec<FactoredRational>,
    /// lambda[i]; lambda[0] is identically 1.
    lambda: Vec<FactoredRational>,
    /// psi[i] = phi[i] * lambda[i].
    psi: Vec<FactoredRational>,
}

impl EliminationData {
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn rd(&self) -> u32 {
        self.r * self.d
    }
    /// Number of free coefficients a_1..a_{rd+1-n}.
    pub fn free_coeff_count(&self) -> u32 {
        self.rd() + 1 - self.n
    }
    pub fn phi(&self) -> &[FactoredRational] {
        &self.phi
    }
    pub fn lambda(&self) -> &[FactoredRational] {
        &self.lambda
    }
    pub fn psi(&self) -> &[FactoredRational] {
        &self.psi
    }
}

/// A solved coefficient, stored as a sparse vector over the monomials it is
/// linear in (single a-variables and degree-r monomials in s/t), with
/// p-rational coefficients. This is the shape the structure theorem gives,
/// and it keeps every recursion operation inside p-only arithmetic.
type CoeffVector = BTreeMap<Monomial, FactoredRational>;

fn vector_insert(vector: &mut CoeffVector, key: Monomial, value: FactoredRational) {
    if value.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match vector.entry(key) {
        Entry::Vacant(e) => {
            e.insert(value);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().add(&value);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// The recursion state.
struct RecursionState {
    r: u32,
    d: u32,
    /// phis[j] is the coefficient vector of phi_j.
    phis: Vec<CoeffVector>,
    /// lambda[i] per solved index, in reduced form.
    lambda: Vec<FactoredRational>,
}

impl RecursionState {
    /// Assembles a coefficient vector into a single rational function.
    fn assemble(vector: &CoeffVector) -> FactoredRational {
        let mut total = FactoredRational::zero();
        for (monomial, coeff) in vector {
            let monomial_poly = MultiPoly::term(num_traits::One::one(), monomial.clone());
            total = total.add(&coeff.mul_poly(&monomial_poly));
        }
        total
    }

    /// Snapshot the state as public elimination data for the current level.
    fn snapshot(&self, n: u32) -> EliminationData {
        let phi: Vec<FactoredRational> = self.phis.iter().map(Self::assemble).collect();
        let psi = phi
            .iter()
            .zip(&self.lambda)
            .map(|(f, l)| f.mul(l).reduce())
            .collect();
        EliminationData {
            r: self.r,
            d: self.d,
            n,
            phi,
            lambda: self.lambda.clone(),
            psi,
        }
    }
}

/// Builds the full recursion for (r, d, n).
pub fn build_elimination(r: u32, d: u32, n: u32) -> Result<EliminationData, ElimError> {
    let mut family = build_family(r, d, n, false)?;
    Ok(family.pop().expect("at least the requested level"))
}

/// Builds the data for every n' in 3..=n in one recursion pass (the level-m
/// state of the recursion is exactly the data for n' = m).
pub fn build_elimination_family(r: u32, d: u32, n: u32) -> Result<Vec<EliminationData>, ElimError> {
    build_family(r, d, n, true)
}

fn build_family(r: u32, d: u32, n: u32, keep_all: bool) -> Result<Vec<EliminationData>, ElimError> {
    if r < 2 || d < 1 {
        return Err(ElimError::InvalidParams { r, d });
    }
    let rd = r * d;
    if n < 3 || n > rd + 1 {
        return Err(ElimError::OutOfRange { n, rd });
    }
    // Base level: phi_0 = s_3^r - s_2^r - sum a_i - s_1^r as a vector.
    let mut base_vector = CoeffVector::new();
    vector_insert(
        &mut base_vector,
        Monomial::from_pairs(&[(VarId::s(3), r)]),
        FactoredRational::one(),
    );
    vector_insert(
        &mut base_vector,
        Monomial::from_pairs(&[(VarId::s(2), r)]),
        FactoredRational::one().neg(),
    );
    vector_insert(
        &mut base_vector,
        Monomial::from_pairs(&[(VarId::s(1), r)]),
        FactoredRational::one().neg(),
    );
    for i in 1..=rd - 2 {
        vector_insert(
            &mut base_vector,
            Monomial::var(VarId::a(i)),
            FactoredRational::one().neg(),
        );
    }
    let mut state = RecursionState {
        r,
        d,
        phis: vec![base_vector],
        lambda: vec![FactoredRational::one()],
    };
    let mut family = Vec::new();
    if keep_all || n == 3 {
        family.push(state.snapshot(3));
    }
    for level in 4..=n {
        inductive_step(r, rd, level, &mut state)?;
        if keep_all || level == n {
            family.push(state.snapshot(level));
        }
    }
    Ok(family)
}

/// One step of the recursion: isolates a_{rd+2-level} from the relation
/// t_{level-3}^r = f(1, p_{level-3}) and substitutes the solved value into
/// every lower phi.
fn inductive_step(r: u32, rd: u32, level: u32, state: &mut RecursionState) -> Result<(), ElimError> {
    let _t0 = std::time::Instant::now();
    let top = level - 3;
    let astar = Monomial::var(VarId::a(rd + 2 - level));
    let p_id = VarId::p(top);
    let p_poly = MultiPoly::var(p_id);
    let exponent = rd + 2 - level;

    // Nonlinearity in the solved coefficient would show up as a monomial
    // mixing astar with other variables; the vectors are keyed by single
    // a-variables and pure s/t-monomials, so the split is a lookup.
    let linear_parts: Vec<FactoredRational> = state
        .phis
        .iter()
        .map(|v| v.get(&astar).cloned().unwrap_or_else(FactoredRational::zero))
        .collect();

    // lambda = p^{rd+2-level} + sum_j (coefficient of astar in phi_j) p^{rd-1-j}.
    let mut lam = FactoredRational::from_poly(p_poly.pow(exponent));
    for (j, lin) in linear_parts.iter().enumerate() {
        lam = lam.add(&lin.mul_by_factor(&p_poly, rd - 1 - j as u32));
    }

    // psi as a coefficient vector:
    // t^r - s_2^r - sum_i a_i p^i - s_1^r p^rd - sum_j (phi_j - astar part) p^{rd-1-j}.
    let mut psi = CoeffVector::new();
    vector_insert(
        &mut psi,
        Monomial::from_pairs(&[(VarId::t(top), r)]),
        FactoredRational::one(),
    );
    vector_insert(
        &mut psi,
        Monomial::from_pairs(&[(VarId::s(2), r)]),
        FactoredRational::one().neg(),
    );
    vector_insert(
        &mut psi,
        Monomial::from_pairs(&[(VarId::s(1), r)]),
        FactoredRational::from_poly(p_poly.pow(rd)).neg(),
    );
    for i in 1..=rd + 1 - level {
        vector_insert(
            &mut psi,
            Monomial::var(VarId::a(i)),
            FactoredRational::from_poly(p_poly.pow(i)).neg(),
        );
    }
    for (j, phi_j) in state.phis.iter().enumerate() {
        let shift = rd - 1 - j as u32;
        for (monomial, coeff) in phi_j {
            if monomial == &astar {
                continue;
            }
            vector_insert(
                &mut psi,
                monomial.clone(),
                coeff.mul_by_factor(&p_poly, shift).neg(),
            );
        }
    }

    // Verified structure of lambda: numerator p^{rd+2-level} * lambda_tilde
    // with lambda_tilde of degree level-3 in p, constant term 1, and root set
    // exactly {1, p_1, ..., p_{level-4}}; its leading coefficient is then
    // pinned by the constant term: quotient * prod p_j = (+-) den(lambda).
    let den_exp = lam.denominator_poly();
    let tilde = lam
        .numerator()
        .div_exact(&p_poly.pow(exponent))
        .ok_or_else(|| {
            ElimError::StructureCheck(format!(
                "lambda numerator not divisible by p_{top}^{exponent}"
            ))
        })?;
    if tilde.degree_in(p_id) != top {
        return Err(ElimError::StructureCheck(format!(
            "lambda_tilde has degree {} in p_{top}, expected {top}",
            tilde.degree_in(p_id)
        )));
    }
    if tilde.coeff_of_power(p_id, 0) != den_exp {
        return Err(ElimError::StructureCheck(format!(
            "lambda_tilde at level {level} does not have constant term 1"
        )));
    }
    let mut root_factors: Vec<MultiPoly> = vec![p_poly.sub(&MultiPoly::one())];
    for j in 1..top {
        root_factors.push(p_poly.sub(&MultiPoly::var(VarId::p(j))));
    }
    let mut quotient = tilde;
    for factor in &root_factors {
        quotient = quotient.div_exact(factor).ok_or_else(|| {
            ElimError::StructureCheck(format!(
                "lambda_tilde at level {level} is not divisible by {factor}"
            ))
        })?;
    }
    if quotient.degree_in(p_id) != 0 {
        return Err(ElimError::StructureCheck(format!(
            "lambda_tilde quotient at level {level} still involves p_{top}"
        )));
    }
    let mut pj_poly = MultiPoly::one();
    for j in 1..top {
        pj_poly = pj_poly.mul(&MultiPoly::var(VarId::p(j)));
    }
    let q_pj = quotient.mul(&pj_poly);
    let sign_positive = if q_pj == den_exp {
        true
    } else if q_pj == den_exp.neg() {
        false
    } else {
        return Err(ElimError::StructureCheck(format!(
            "lambda_tilde leading coefficient at level {level} is not fixed by the constant term"
        )));
    };

    // phi_top = psi / lambda, componentwise:
    // 1/lambda = (+-) prod p_j / (p^{rd+2-level} (p-1) prod (p - p_j)).
    let divide_by_lambda = |c: &FactoredRational| -> Result<FactoredRational, ElimError> {
        let mut out = c.clone();
        for j in 1..top {
            out = out.mul_by_factor(&MultiPoly::var(VarId::p(j)), 1);
        }
        if !sign_positive {
            out = out.neg();
        }
        out = out.div_by_factor(&p_poly, exponent)?;
        for factor in &root_factors {
            out = out.div_by_factor(factor, 1)?;
        }
        Ok(out.reduce())
    };
    eprintln!("  level {level}: lam+psi+checks {:?}", _t0.elapsed());
    let _t1 = std::time::Instant::now();
    let mut phi_top = CoeffVector::new();
    for (monomial, coeff) in &psi {
        vector_insert(&mut phi_top, monomial.clone(), divide_by_lambda(coeff)?);
    }
    eprintln!("  level {level}: divide psi by lambda {:?}", _t1.elapsed());
    let _t2 = std::time::Instant::now();

    // Lower updates: phi_j <- (coefficient of astar) * phi_top + rest.
    for (j, lin) in linear_parts.iter().enumerate() {
        let mut updated = state.phis[j].clone();
        updated.remove(&astar);
        if !lin.is_zero() {
            for (monomial, coeff) in &phi_top {
                vector_insert(&mut updated, monomial.clone(), lin.mul(coeff).reduce());
            }
        }
        state.phis[j] = updated;
    }
    eprintln!("  level {level}: lower updates {:?}", _t2.elapsed());
    state.phis.push(phi_top);

    // The reduced lambda: (+-) p^e (p-1) prod (p - p_j) / prod p_j.
    let mut lam_num = p_poly.pow(exponent);
    for factor in &root_factors {
        lam_num = lam_num.mul(factor);
    }
    if !sign_positive {
        lam_num = lam_num.neg();
    }
    let lam_factors: Vec<(MultiPoly, u32)> = (1..top)
        .map(|j| (MultiPoly::var(VarId::p(j)), 1))
        .collect();
    state.lambda.push(FactoredRational::new(lam_num, &lam_factors)?);
    Ok(())
}

/// A point of the free parameter space: the free coefficients a_1..a_{rd+1-n},
/// pairwise-distinct marked points p_i avoiding 0 and 1, the section values
/// s_1, s_2, s_3 and t_1..t_{n-3}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarPoint {
    pub a: Vec<BigRational>,
    pub p: Vec<BigRational>,
    pub s: [BigRational; 3],
    pub t: Vec<BigRational>,
}

impl FarPoint {
    /// Checks the point-locus rules: p-values pairwise distinct, none 0 or 1.
    pub fn check(&self) -> Result<(), ElimError> {
        for (i, pi) in self.p.iter().enumerate() {
            if pi.is_zero() || pi.is_one() {
                return Err(ElimError::ConstraintViolated(format!(
                    "p_{} is {} (must avoid 0 and 1)",
                    i + 1,
                    pi
                )));
            }
            for pj in &self.p[..i] {
                if pi == pj {
                    return Err(ElimError::ConstraintViolated(format!(
                        "marked points collide at {pi}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The evaluation assignment for this point.
    pub fn assignment(&self) -> Assignment {
        let mut sigma = Assignment::new();
        for (i, v) in self.a.iter().enumerate() {
            sigma.insert(VarId::a(i as u32 + 1), v.clone());
        }
        for (i, v) in self.p.iter().enumerate() {
            sigma.insert(VarId::p(i as u32 + 1), v.clone());
        }
        for (i, v) in self.s.iter().enumerate() {
            sigma.insert(VarId::s(i as u32 + 1), v.clone());
        }
        for (i, v) in self.t.iter().enumerate() {
            sigma.insert(VarId::t(i as u32 + 1), v.clone());
        }
        sigma
    }
}

/// A constrained point: the degree-rd form together with the section data it
/// must match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedPoint {
    pub form: NumericForm,
    pub p: Vec<BigRational>,
    pub s: [BigRational; 3],
    pub t: Vec<BigRational>,
}

impl ConstrainedPoint {
    /// Verifies f(0,1) = s_1^r, f(1,0) = s_2^r, f(1,1) = s_3^r and
    /// f(1, p_i) = t_i^r, exactly.
    pub fn check_constraints(&self, r: u32) -> Result<(), ElimError> {
        let one = BigRational::one();
        let zero = BigRational::zero();
        let checks: [(BigRational, BigRational, &BigRational, &str); 3] = [
            (zero.clone(), one.clone(), &self.s[0], "f(0,1) = s_1^r"),
            (one.clone(), zero.clone(), &self.s[1], "f(1,0) = s_2^r"),
            (one.clone(), one.clone(), &self.s[2], "f(1,1) = s_3^r"),
        ];
        for (x, y, root, label) in checks {
            if self.form.eval(&x, &y) != pow_rational(root, i64::from(r)) {
                return Err(ElimError::ConstraintViolated(label.to_string()));
            }
        }
        for (pi, ti) in self.p.iter().zip(&self.t) {
            if self.form.eval(&one, pi) != pow_rational(ti, i64::from(r)) {
                return Err(ElimError::ConstraintViolated(format!(
                    "f(1,{pi}) = t^r fails"
                )));
            }
        }
        Ok(())
    }
}

/// The section map: evaluates the solved coefficients at a free point and
/// assembles the full coefficient list
/// (s_2^r, a_1, ..., a_{rd+1-n}, phi_{n-3}, ..., phi_0, s_1^r).
pub fn apply_g(data: &EliminationData, pt: &FarPoint) -> Result<ConstrainedPoint, ElimError> {
    pt.check()?;
    let rd = data.rd() as usize;
    let n = data.n as usize;
    if pt.a.len() != rd + 1 - n || pt.p.len() != n - 3 || pt.t.len() != n - 3 {
        return Err(ElimError::ConstraintViolated(format!(
            "point shape mismatch: expected {} free coefficients and {} marked points",
            rd + 1 - n,
            n - 3
        )));
    }
    let sigma = pt.assignment();
    let r_exp = i64::from(data.r);
    let mut coeffs = vec![BigRational::zero(); rd + 1];
    coeffs[0] = pow_rational(&pt.s[1], r_exp);
    coeffs[rd] = pow_rational(&pt.s[0], r_exp);
    for (i, v) in pt.a.iter().enumerate() {
        coeffs[i + 1] = v.clone();
    }
    for (i, phi_i) in data.phi.iter().enumerate() {
        coeffs[rd - 1 - i] = phi_i.eval(&sigma)?;
    }
    Ok(ConstrainedPoint {
        form: NumericForm::new(coeffs),
        p: pt.p.clone(),
        s: pt.s.clone(),
        t: pt.t.clone(),
    })
}

/// The projection: checks the defining equations and drops the solved
/// coefficients, keeping (a_1, ..., a_{rd+1-n}, p, s, t).
pub fn apply_h(data: &EliminationData, cp: &ConstrainedPoint) -> Result<FarPoint, ElimError> {
    if cp.form.degree() != data.rd() as usize {
        return Err(ElimError::ConstraintViolated(format!(
            "form degree {} does not match rd = {}",
            cp.form.degree(),
            data.rd()
        )));
    }
    cp.check_constraints(data.r)?;
    let pt = FarPoint {
        a: cp.form.coeffs()[1..=data.free_coeff_count() as usize].to_vec(),
        p: cp.p.clone(),
        s: cp.s.clone(),
        t: cp.t.clone(),
    };
    pt.check()?;
    Ok(pt)
}

/// The weighted scaling on free points: a_i by alpha^{-rd}, the section
/// values by alpha^{-d}, marked points unchanged.
pub fn scale_point(data: &EliminationData, pt: &FarPoint, alpha: &BigRational) -> FarPoint {
    let a_scale = pow_rational(alpha, -i64::from(data.rd()));
    let s_scale = pow_rational(alpha, -i64::from(data.d));
    FarPoint {
        a: pt.a.iter().map(|v| v * &a_scale).collect(),
        p: pt.p.clone(),
        s: [
            &pt.s[0] * &s_scale,
            &pt.s[1] * &s_scale,
            &pt.s[2] * &s_scale,
        ],
        t: pt.t.iter().map(|v| v * &s_scale).collect(),
    }
}

/// A random valid free point with numerators and denominators bounded by 100,
/// rejection-sampled away from the forbidden locus.
pub fn random_far_point<R: Rng>(data: &EliminationData, rng: &mut R) -> FarPoint {
    const BOUND: i64 = 100;
    let a = (0..data.free_coeff_count())
        .map(|_| random_rational(rng, BOUND))
        .collect();
    let mut p: Vec<BigRational> = Vec::new();
    while p.len() < (data.n - 3) as usize {
        let candidate = random_rational(rng, BOUND);
        if candidate.is_zero() || candidate.is_one() || p.contains(&candidate) {
            continue;
        }
        p.push(candidate);
    }
    let s = [
        random_rational(rng, BOUND),
        random_rational(rng, BOUND),
        random_rational(rng, BOUND),
    ];
    let t = (0..data.n - 3).map(|_| random_rational(rng, BOUND)).collect();
    FarPoint { a, p, s, t }
}

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

/// Verification report for one (r, d, n).
#[derive(Debug, Clone)]
pub struct EliminationReport {
    pub r: u32,
    pub d: u32,
    pub n: u32,
    pub trials: u32,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl EliminationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the property checks: weighted homogeneity of every phi numerator,
/// the lambda_tilde structure (degree, constant term 1, exact root set, by
/// symbolic substitution and division), round trips at seeded random points,
/// and lambda_0 == 1. Failures are reported, not thrown.
pub fn verify_elimination(data: &EliminationData, trials: u32, seed: u64) -> EliminationReport {
    use rand::SeedableRng;
    let mut checks = Vec::new();
    let r = data.r;

    // (i) Weighted homogeneity of degree r under (a: r, s: 1, t: 1, p: 0).
    let mut weights = BTreeMap::new();
    weights.insert(VarFamily::A, i64::from(r));
    weights.insert(VarFamily::S, 1);
    weights.insert(VarFamily::T, 1);
    weights.insert(VarFamily::P, 0);
    let mut homogeneous = true;
    let mut detail = String::new();
    for (i, phi_i) in data.phi.iter().enumerate() {
        if !phi_i
            .numerator()
            .weighted_degree_check(&weights, i64::from(r))
        {
            homogeneous = false;
            detail = format!("phi[{i}] numerator is not homogeneous of weighted degree {r}");
            break;
        }
    }
    checks.push(CheckResult::new(
        "weighted homogeneity of phi numerators",
        homogeneous,
        if homogeneous {
            format!("all {} numerators have weighted degree {r}", data.phi.len())
        } else {
            detail
        },
    ));

    // (ii) lambda structure for every level above the base.
    let mut structure_ok = true;
    let mut structure_detail = String::new();
    for i in 1..data.lambda.len() {
        if let Err(msg) = check_lambda_structure(data, i) {
            structure_ok = false;
            structure_detail = msg;
            break;
        }
    }
    checks.push(CheckResult::new(
        "lambda_tilde degree, constant term, and root set",
        structure_ok,
        if structure_ok {
            format!("verified for indices 1..={}", data.lambda.len() - 1)
        } else {
            structure_detail
        },
    ));

    // (iii) Round trips at seeded random points.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut round_trip_ok = true;
    let mut round_trip_detail = format!("{trials} random points");
    for trial in 0..trials {
        let pt = random_far_point(data, &mut rng);
        match apply_g(data, &pt) {
            Ok(cp) => {
                if let Err(e) = cp.check_constraints(r) {
                    round_trip_ok = false;
                    round_trip_detail = format!("trial {trial}: constraints fail: {e}");
                    break;
                }
                match apply_h(data, &cp) {
                    Ok(back) if back == pt => {}
                    Ok(_) => {
                        round_trip_ok = false;
                        round_trip_detail = format!("trial {trial}: projection differs");
                        break;
                    }
                    Err(e) => {
                        round_trip_ok = false;
                        round_trip_detail = format!("trial {trial}: projection failed: {e}");
                        break;
                    }
                }
            }
            Err(e) => {
                round_trip_ok = false;
                round_trip_detail = format!("trial {trial}: section failed: {e}");
                break;
            }
        }
    }
    checks.push(CheckResult::new(
        "round trips h(g(point)) = point with exact constraints",
        round_trip_ok,
        round_trip_detail,
    ));

    // (iv) lambda_0 == 1.
    let lambda0_ok = data.lambda[0] == FactoredRational::one();
    checks.push(CheckResult::new(
        "lambda_0 is identically 1",
        lambda0_ok,
        if lambda0_ok { "exact" } else { "mismatch" },
    ));

    EliminationReport {
        r: data.r,
        d: data.d,
        n: data.n,
        trials,
        seed,
        checks,
    }
}

/// Re-derives the lambda_tilde structure for `lambda[i]`: degree i in p_i,
/// constant term 1 (symbolic substitution p_i := 0), vanishing at 1 and at
/// each lower p_j (symbolic substitution), and exact root set by division.
pub fn check_lambda_structure(data: &EliminationData, i: usize) -> Result<(), String> {
    let rd = data.rd();
    let p_id = VarId::p(i as u32);
    let p_poly = MultiPoly::var(p_id);
    let lam = &data.lambda[i];
    let exponent = rd - 1 - i as u32;
    let tilde_num = lam
        .numerator()
        .div_exact(&p_poly.pow(exponent))
        .ok_or_else(|| format!("lambda[{i}] is not divisible by p_{i}^{exponent}"))?;
    if tilde_num.degree_in(p_id) != i as u32 {
        return Err(format!(
            "lambda_tilde[{i}] has p-degree {}, expected {i}",
            tilde_num.degree_in(p_id)
        ));
    }
    // Constant term 1: substituting p_i := 0 must leave exactly the
    // denominator product.
    if tilde_num.substitute(p_id, &MultiPoly::zero()) != lam.denominator_poly() {
        return Err(format!("lambda_tilde[{i}] constant term differs from 1"));
    }
    // Vanishing at each claimed root, by substitution.
    if !tilde_num.substitute(p_id, &MultiPoly::one()).is_zero() {
        return Err(format!("lambda_tilde[{i}] does not vanish at p = 1"));
    }
    for j in 1..i {
        let root = MultiPoly::var(VarId::p(j as u32));
        if !tilde_num.substitute(p_id, &root).is_zero() {
            return Err(format!("lambda_tilde[{i}] does not vanish at p = p_{j}"));
        }
    }
    // Exactness of the root set, by symbolic division.
    let mut quotient = tilde_num;
    quotient = quotient
        .div_exact(&p_poly.sub(&MultiPoly::one()))
        .ok_or_else(|| format!("lambda_tilde[{i}]: (p - 1) does not divide"))?;
    for j in 1..i {
        let factor = p_poly.sub(&MultiPoly::var(VarId::p(j as u32)));
        quotient = quotient
            .div_exact(&factor)
            .ok_or_else(|| format!("lambda_tilde[{i}]: (p - p_{j}) does not divide"))?;
    }
    if quotient.degree_in(p_id) != 0 {
        return Err(format!("lambda_tilde[{i}] has extra p_{i} content"));
    }
    Ok(())
}
