//! Binary forms, Sylvester resultants, discriminants, and the GL2 action.
//!
//! A form of degree m is f(x,y) = sum_{i=0}^{m} a_i x^{m-i} y^i, stored as its
//! coefficient sequence a_0..a_m. Coefficients are either exact rationals
//! (numeric mode) or polynomials in the a-variables (symbolic mode); both
//! implement [`Coeff`].

use crate::poly::{Monomial, MultiPoly, VarId};
use crate::rat::pow_rational;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Errors from form operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormError {
    /// Declared degree does not match the coefficient count.
    DegreeMismatch { declared: usize, coeffs: usize },
    /// The discriminant needs degree at least 2.
    DegreeTooSmall { degree: usize },
    /// A substitution matrix with zero determinant.
    SingularMatrix,
}

impl fmt::Display for FormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormError::DegreeMismatch { declared, coeffs } => write!(
                f,
                "declared degree {declared} needs {} coefficients, got {coeffs}",
                declared + 1
            ),
            FormError::DegreeTooSmall { degree } => {
                write!(f, "discriminant needs degree >= 2, got {degree}")
            }
            FormError::SingularMatrix => write!(f, "singular substitution matrix"),
        }
    }
}

impl std::error::Error for FormError {}

/// The coefficient operations the resultant machinery needs. `ref_div_exact`
/// backs fraction-free (Bareiss) elimination: the divisions it performs are
/// guaranteed exact for minors of an integral matrix.
pub trait Coeff: Clone + PartialEq + Zero + One {
    fn ref_add(&self, other: &Self) -> Self;
    fn ref_sub(&self, other: &Self) -> Self;
    fn ref_mul(&self, other: &Self) -> Self;
    fn ref_neg(&self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
    fn ref_div_exact(&self, other: &Self) -> Option<Self>;
}

impl Coeff for BigRational {
    fn ref_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ref_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ref_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ref_neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
    fn ref_div_exact(&self, other: &Self) -> Option<Self> {
        (!Zero::is_zero(other)).then(|| self / other)
    }
}

impl Coeff for MultiPoly {
    fn ref_add(&self, other: &Self) -> Self {
        MultiPoly::add(self, other)
    }
    fn ref_sub(&self, other: &Self) -> Self {
        MultiPoly::sub(self, other)
    }
    fn ref_mul(&self, other: &Self) -> Self {
        MultiPoly::mul(self, other)
    }
    fn ref_neg(&self) -> Self {
        MultiPoly::neg(self)
    }
    fn scale(&self, r: &BigRational) -> Self {
        MultiPoly::scale(self, r)
    }
    fn ref_div_exact(&self, other: &Self) -> Option<Self> {
        MultiPoly::div_exact(self, other)
    }
}

/// A binary form of degree m with coefficients a_0..a_m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm<C: Coeff> {
    coeffs: Vec<C>,
}

/// Numeric form over exact rationals.
pub type NumericForm = BinaryForm<BigRational>;
/// Symbolic form with polynomial coefficients.
pub type SymbolicForm = BinaryForm<MultiPoly>;

impl<C: Coeff> BinaryForm<C> {
    /// Builds a form of degree `coeffs.len() - 1`; at least one coefficient.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    /// d/dx, read as a form of degree m-1: coefficients (m-i)*a_i, i=0..m-1.
    pub fn partial_x(&self) -> Vec<C> {
        let m = self.degree();
        (0..m)
            .map(|i| {
                self.coeffs[i].scale(&BigRational::from_integer(((m - i) as u64).into()))
            })
            .collect()
    }

    /// d/dy, read as a form of degree m-1: coefficients (i+1)*a_{i+1}, i=0..m-1.
    pub fn partial_y(&self) -> Vec<C> {
        let m = self.degree();
        (0..m)
            .map(|i| {
                self.coeffs[i + 1].scale(&BigRational::from_integer(((i + 1) as u64).into()))
            })
            .collect()
    }
}

impl NumericForm {
    /// f(x0, y0), exactly.
    pub fn eval(&self, x0: &BigRational, y0: &BigRational) -> BigRational {
        let m = self.degree();
        let mut total = BigRational::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            total += a * pow_rational(x0, (m - i) as i64) * pow_rational(y0, i as i64);
        }
        total
    }
}

/// The generic symbolic form of degree m: coefficients a_0..a_m as variables.
pub fn generic_form(m: usize) -> SymbolicForm {
    BinaryForm::new(
        (0..=m)
            .map(|i| MultiPoly::var(VarId::a(i as u32)))
            .collect(),
    )
}

/// Sylvester resultant of two univariate polynomials given by coefficient
/// sequences in descending power order, with declared degrees. The matrix has
/// m2 shifted rows of f followed by m1 shifted rows of g; the determinant is
/// computed by fraction-free elimination.
pub fn sylvester_resultant<C: Coeff>(
    f: &[C],
    deg_f: usize,
    g: &[C],
    deg_g: usize,
) -> Result<C, FormError> {
    if f.len() != deg_f + 1 {
        return Err(FormError::DegreeMismatch {
            declared: deg_f,
            coeffs: f.len(),
        });
    }
    if g.len() != deg_g + 1 {
        return Err(FormError::DegreeMismatch {
            declared: deg_g,
            coeffs: g.len(),
        });
    }
    if deg_f == 0 && deg_g == 0 {
        return Ok(C::one());
    }
    let size = deg_f + deg_g;
    let mut matrix = vec![vec![C::zero(); size]; size];
    for shift in 0..deg_g {
        for (j, c) in f.iter().enumerate() {
            matrix[shift][shift + j] = c.clone();
        }
    }
    for shift in 0..deg_f {
        for (j, c) in g.iter().enumerate() {
            matrix[deg_g + shift][shift + j] = c.clone();
        }
    }
    Ok(bareiss_determinant(matrix))
}

/// Fraction-free determinant. Intermediate entries are minors of the input,
/// so every division is exact.
fn bareiss_determinant<C: Coeff>(mut m: Vec<Vec<C>>) -> C {
    let n = m.len();
    if n == 0 {
        return C::one();
    }
    let mut sign_flip = false;
    let mut prev_pivot = C::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return C::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let numerator = m[i][j]
                    .ref_mul(&m[k][k])
                    .ref_sub(&m[i][k].ref_mul(&m[k][j]));
                m[i][j] = numerator
                    .ref_div_exact(&prev_pivot)
                    .expect("fraction-free elimination divides exactly");
            }
            m[i][k] = C::zero();
        }
        prev_pivot = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.ref_neg()
    } else {
        det
    }
}

/// Discriminant of a binary form: Res(df/dx, df/dy) via the Sylvester
/// determinant. Symbolically homogeneous of degree 2(m-1) in the
/// coefficients; vanishes exactly when the form has a repeated root.
///
/// The determinant is expanded column-by-column with memoization, which
/// exploits the banded Sylvester shape and is division-free (intermediates
/// are minors); it agrees with `sylvester_resultant` exactly.
pub fn discriminant<C: Coeff>(form: &BinaryForm<C>) -> Result<C, FormError> {
    let m = form.degree();
    if m < 2 {
        return Err(FormError::DegreeTooSmall { degree: m });
    }
    let fx = form.partial_x();
    let fy = form.partial_y();
    let size = 2 * (m - 1);
    let mut rows: Vec<(usize, &[C])> = Vec::with_capacity(size);
    for shift in 0..m - 1 {
        rows.push((shift, &fx));
    }
    for shift in 0..m - 1 {
        rows.push((shift, &fy));
    }
    Ok(banded_determinant(&rows, size))
}

/// Determinant of a square matrix whose rows have contiguous support,
/// given as (start column, entries). Columns are consumed left to right;
/// the memo key is the set of rows already matched.
fn banded_determinant<C: Coeff>(rows: &[(usize, &[C])], size: usize) -> C {
    assert!(size <= 64, "banded determinant limited to 64 rows");
    assert_eq!(rows.len(), size);
    let full: u64 = if size == 64 { !0 } else { (1 << size) - 1 };
    let mut memo: std::collections::HashMap<(usize, u64), C> = std::collections::HashMap::new();

    fn rec<C: Coeff>(
        col: usize,
        mask: u64,
        rows: &[(usize, &[C])],
        size: usize,
        full: u64,
        memo: &mut std::collections::HashMap<(usize, u64), C>,
    ) -> C {
        if col == size {
            return if mask == full { C::one() } else { C::zero() };
        }
        if let Some(cached) = memo.get(&(col, mask)) {
            return cached.clone();
        }
        let mut total = C::zero();
        let mut unused_before = 0usize;
        for (r, (start, entries)) in rows.iter().enumerate() {
            if mask & (1 << r) != 0 {
                continue;
            }
            if *start <= col && col < start + entries.len() {
                let entry = &entries[col - start];
                if !entry.is_zero() {
                    let sub = rec(col + 1, mask | (1 << r), rows, size, full, memo);
                    if !sub.is_zero() {
                        let term = entry.ref_mul(&sub);
                        total = if unused_before % 2 == 0 {
                            total.ref_add(&term)
                        } else {
                            total.ref_sub(&term)
                        };
                    }
                }
            }
            unused_before += 1;
        }
        memo.insert((col, mask), total.clone());
        total
    }

    rec(0, 0, rows, size, full, &mut memo)
}

/// A 2x2 matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub entries: [[BigRational; 2]; 2],
}

impl Mat2 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Mat2 {
            entries: [[a, b], [c, d]],
        }
    }

    pub fn identity() -> Self {
        Mat2::new(
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::one(),
        )
    }

    pub fn diagonal(a: BigRational, d: BigRational) -> Self {
        Mat2::new(a, BigRational::zero(), BigRational::zero(), d)
    }

    pub fn det(&self) -> BigRational {
        &self.entries[0][0] * &self.entries[1][1] - &self.entries[0][1] * &self.entries[1][0]
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let e = &self.entries;
        let f = &other.entries;
        Mat2::new(
            &e[0][0] * &f[0][0] + &e[0][1] * &f[1][0],
            &e[0][0] * &f[0][1] + &e[0][1] * &f[1][1],
            &e[1][0] * &f[0][0] + &e[1][1] * &f[1][0],
            &e[1][0] * &f[0][1] + &e[1][1] * &f[1][1],
        )
    }

    pub fn inverse(&self) -> Result<Mat2, FormError> {
        let det = self.det();
        if det.is_zero() {
            return Err(FormError::SingularMatrix);
        }
        let e = &self.entries;
        Ok(Mat2::new(
            &e[1][1] / &det,
            -&e[0][1] / &det,
            -&e[1][0] / &det,
            &e[0][0] / &det,
        ))
    }
}

/// The substitution action (A . f)(x, y) = f(A^{-1}(x, y)), exactly.
/// Left group action: (AB).f = A.(B.f).
pub fn gl2_action(a: &Mat2, form: &NumericForm) -> Result<NumericForm, FormError> {
    let inv = a.inverse()?;
    let m = form.degree();
    let e = &inv.entries;
    // X = e00*x + e01*y, Y = e10*x + e11*y; expand sum a_i X^{m-i} Y^i.
    let x_pows = power_table(&e[0][0], &e[0][1], m);
    let y_pows = power_table(&e[1][0], &e[1][1], m);
    let mut coeffs = vec![BigRational::zero(); m + 1];
    for (i, a_i) in form.coeffs().iter().enumerate() {
        if a_i.is_zero() {
            continue;
        }
        // X^{m-i} has coefficients x_pows[m-i][k] of x^{m-i-k} y^k.
        for (k1, c1) in x_pows[m - i].iter().enumerate() {
            for (k2, c2) in y_pows[i].iter().enumerate() {
                coeffs[k1 + k2] += a_i * c1 * c2;
            }
        }
    }
    Ok(BinaryForm::new(coeffs))
}

/// Coefficient rows of (u*x + v*y)^k for k = 0..=m, each row indexed by the
/// y-power.
fn power_table(u: &BigRational, v: &BigRational, m: usize) -> Vec<Vec<BigRational>> {
    let mut rows: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for k in 1..=m {
        let prev = &rows[k - 1];
        let mut row = vec![BigRational::zero(); k + 1];
        for (j, c) in prev.iter().enumerate() {
            row[j] += c * u;
            row[j + 1] += c * v;
        }
        rows.push(row);
    }
    rows
}

/// Checks disc(A.f) = (det A)^{-m(m-1)} * disc(f), exactly.
pub fn equivariance_weight_check(form: &NumericForm, a: &Mat2) -> Result<bool, FormError> {
    let m = form.degree();
    if m < 2 {
        return Err(FormError::DegreeTooSmall { degree: m });
    }
    if a.det().is_zero() {
        return Err(FormError::SingularMatrix);
    }
    let lhs = discriminant(&gl2_action(a, form)?)?;
    let weight = -((m as i64) * (m as i64 - 1));
    let rhs = discriminant(form)? * pow_rational(&a.det(), weight);
    Ok(lhs == rhs)
}

/// Evaluates a symbolic discriminant-style polynomial at a numeric form:
/// assigns a_i := coefficient i.
pub fn assignment_from_form(form: &NumericForm) -> crate::poly::Assignment {
    form.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (VarId::a(i as u32), c.clone()))
        .collect()
}

/// The monomial-free helper used by tests: a numeric form with integer
/// coefficients.
pub fn form_from_ints(coeffs: &[i64]) -> NumericForm {
    BinaryForm::new(
        coeffs
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect(),
    )
}

/// x^m as a numeric form.
pub fn x_power_form(m: usize) -> NumericForm {
    let mut coeffs = vec![BigRational::zero(); m + 1];
    coeffs[0] = BigRational::one();
    NumericForm::new(coeffs)
}

/// Multiplies two numeric forms (degree adds).
pub fn form_mul(f: &NumericForm, g: &NumericForm) -> NumericForm {
    let mut coeffs = vec![BigRational::zero(); f.degree() + g.degree() + 1];
    for (i, a) in f.coeffs().iter().enumerate() {
        for (j, b) in g.coeffs().iter().enumerate() {
            coeffs[i + j] += a * b;
        }
    }
    BinaryForm::new(coeffs)
}

/// A symbolic monomial helper for building symbolic forms in tests.
pub fn symbolic_coeff_monomial(v: VarId) -> MultiPoly {
    MultiPoly::term(BigRational::one(), Monomial::var(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn resultant_of_distinct_linear_forms() {
        // f = x - 1, g = x - 2 as degree-1 polynomials: the 2x2 Sylvester
        // determinant is 1*(-2) - (-1)*1 = -1, the root difference.
        let f = [rat(1, 1), rat(-1, 1)];
        let g = [rat(1, 1), rat(-2, 1)];
        assert_eq!(sylvester_resultant(&f, 1, &g, 1).unwrap(), rat(-1, 1));
    }

    #[test]
    fn resultant_with_shared_root_vanishes() {
        // f = g.
        let f = [rat(1, 1), rat(-1, 1)];
        assert_eq!(sylvester_resultant(&f, 1, &f, 1).unwrap(), rat(0, 1));
        // f = x^2 - 1, g = x - 1 share the root 1; by hand the 3x3
        // determinant |1 0 -1; 1 -1 0; 0 1 -1| = 0.
        let f = [rat(1, 1), rat(0, 1), rat(-1, 1)];
        let g = [rat(1, 1), rat(-1, 1)];
        assert_eq!(sylvester_resultant(&f, 2, &g, 1).unwrap(), rat(0, 1));
    }

    #[test]
    fn resultant_rejects_degree_mismatch() {
        let f = [rat(1, 1)];
        let g = [rat(1, 1), rat(1, 1)];
        assert!(matches!(
            sylvester_resultant(&f, 1, &g, 1),
            Err(FormError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn quadratic_discriminant_symbolic() {
        // disc(a x^2 + b xy + c y^2) = Res(2ax + by, bx + 2cy) = 4ac - b^2,
        // the 2x2 Sylvester determinant by hand. Here a, b, c are a_0, a_1, a_2.
        let form = generic_form(2);
        let disc = discriminant(&form).unwrap();
        let a = MultiPoly::var(VarId::a(0));
        let b = MultiPoly::var(VarId::a(1));
        let c = MultiPoly::var(VarId::a(2));
        let want = a.mul(&c).scale(&rat(4, 1)).sub(&b.mul(&b));
        assert_eq!(disc, want);
    }

    #[test]
    fn repeated_root_discriminant_vanishes() {
        for m in 2..=6 {
            assert_eq!(discriminant(&x_power_form(m)).unwrap(), rat(0, 1));
        }
    }

    #[test]
    fn banded_expansion_agrees_with_fraction_free_elimination() {
        // Two independent routes to the same Sylvester determinant.
        for m in 2..=5usize {
            let form = generic_form(m);
            let via_expansion = discriminant(&form).unwrap();
            let via_bareiss =
                sylvester_resultant(&form.partial_x(), m - 1, &form.partial_y(), m - 1).unwrap();
            assert_eq!(via_expansion, via_bareiss, "degree {m}");
        }
        let f = form_from_ints(&[3, -1, 0, 7, 2, -5, 1]);
        let via_expansion = discriminant(&f).unwrap();
        let via_bareiss =
            sylvester_resultant(&f.partial_x(), 5, &f.partial_y(), 5).unwrap();
        assert_eq!(via_expansion, via_bareiss);
    }

    #[test]
    fn identity_acts_trivially() {
        let f = form_from_ints(&[1, 2, 3, 4]);
        assert_eq!(gl2_action(&Mat2::identity(), &f).unwrap(), f);
    }

    #[test]
    fn scalar_matrix_scales_by_power_of_degree() {
        // A = diag(a, a): A.f = a^{-m} f.
        let f = form_from_ints(&[1, -2, 0, 5]);
        let a = rat(3, 2);
        let mat = Mat2::diagonal(a.clone(), a.clone());
        let acted = gl2_action(&mat, &f).unwrap();
        let scaling = pow_rational(&a, -3);
        for i in 0..=3 {
            assert_eq!(acted.coeff(i), &(f.coeff(i) * &scaling));
        }
    }

    #[test]
    fn antidiagonal_swap_reverses_coefficients() {
        // A = [[0,1],[1,0]] swaps x and y; A^{-1} = A, so the coefficient
        // sequence of the degree-3 form reverses. Direct substitution check.
        let f = form_from_ints(&[1, 2, 3, 4]);
        let swap = Mat2::new(rat(0, 1), rat(1, 1), rat(1, 1), rat(0, 1));
        let acted = gl2_action(&swap, &f).unwrap();
        assert_eq!(acted, form_from_ints(&[4, 3, 2, 1]));
    }

    #[test]
    fn singular_matrix_rejected() {
        let f = form_from_ints(&[1, 0, 1]);
        let singular = Mat2::new(rat(1, 1), rat(2, 1), rat(2, 1), rat(4, 1));
        assert!(matches!(
            gl2_action(&singular, &f),
            Err(FormError::SingularMatrix)
        ));
    }

    #[test]
    fn equivariance_hand_example() {
        // f = x^2 + y^2, disc = 4; A = diag(2,3): A.f = x^2/4 + y^2/9 with
        // disc = 4/36 = 1/9, and (det A)^{-2} * 4 = 4/36 as well.
        let f = form_from_ints(&[1, 0, 1]);
        assert_eq!(discriminant(&f).unwrap(), rat(4, 1));
        let a = Mat2::diagonal(rat(2, 1), rat(3, 1));
        let acted = gl2_action(&a, &f).unwrap();
        assert_eq!(discriminant(&acted).unwrap(), rat(1, 9));
        assert!(equivariance_weight_check(&f, &a).unwrap());
        assert!(equivariance_weight_check(&f, &Mat2::identity()).unwrap());
    }

    #[test]
    fn gl2_action_is_exact_on_eval() {
        // (A.f)(x, y) = f(A^{-1}(x, y)) at sample points.
        let f = form_from_ints(&[2, -1, 3, 0, 7]);
        let a = Mat2::new(rat(2, 1), rat(1, 3), rat(-1, 1), rat(1, 2));
        let acted = gl2_action(&a, &f).unwrap();
        let inv = a.inverse().unwrap();
        for (x0, y0) in [(rat(1, 1), rat(2, 1)), (rat(-3, 2), rat(5, 7))] {
            let xi = &inv.entries[0][0] * &x0 + &inv.entries[0][1] * &y0;
            let yi = &inv.entries[1][0] * &x0 + &inv.entries[1][1] * &y0;
            assert_eq!(acted.eval(&x0, &y0), f.eval(&xi, &yi));
        }
    }
}
