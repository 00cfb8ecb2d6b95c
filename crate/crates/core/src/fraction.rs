//! Rational functions with factored denominators.
//!
//! A `FactoredRational` is a polynomial numerator over a product of
//! denominator factors, each a primitive polynomial in p-variables only.
//! Cancellation is attempted only against exactly matching factors; no
//! multivariate gcd is ever computed. Full reduction, where needed, is
//! checked by evaluation (`agree_at`).

use crate::poly::{Assignment, EvalError, MultiPoly, VarFamily, VarId};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Errors from fraction construction and evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractionError {
    /// A denominator factor vanished at the evaluation point.
    DenominatorVanished,
    /// A denominator factor involves a variable outside the p-family.
    NonPDenominator,
    /// Division by a fraction with zero numerator.
    DivisionByZero,
    /// An unassigned variable was hit during evaluation.
    Missing(VarId),
}

impl fmt::Display for FractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FractionError::DenominatorVanished => write!(f, "denominator vanished"),
            FractionError::NonPDenominator => {
                write!(f, "denominator factor involves a non-p variable")
            }
            FractionError::DivisionByZero => write!(f, "division by zero"),
            FractionError::Missing(v) => write!(f, "unassigned variable {v}"),
        }
    }
}

impl std::error::Error for FractionError {}

impl From<EvalError> for FractionError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::MissingVariable(v) => FractionError::Missing(v),
        }
    }
}

fn is_p_only(p: &MultiPoly) -> bool {
    p.variables().iter().all(|v| v.family == VarFamily::P)
}

/// numerator / prod(factor^multiplicity), denominator factors primitive and
/// in p-variables only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredRational {
    num: MultiPoly,
    den: BTreeMap<MultiPoly, u32>,
}

impl FactoredRational {
    pub fn zero() -> Self {
        FactoredRational {
            num: MultiPoly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        FactoredRational::from_poly(MultiPoly::one())
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        FactoredRational {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn from_var(v: VarId) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    /// Builds `num / prod(factors)`, normalizing factors to primitive form and
    /// folding the scalar adjustments into the numerator.
    pub fn new(num: MultiPoly, factors: &[(MultiPoly, u32)]) -> Result<Self, FractionError> {
        let mut result = Self::from_poly(num);
        for (f, mult) in factors {
            result = result.div_by_factor(f, *mult)?;
        }
        Ok(result)
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&MultiPoly, u32)> {
        self.den.iter().map(|(f, &m)| (f, m))
    }

    pub fn denominator_poly(&self) -> MultiPoly {
        let mut d = MultiPoly::one();
        for (f, &m) in &self.den {
            d = d.mul(&f.pow(m));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The numerator, provided the denominator is trivial.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
        }
        self.den.retain(|_, m| *m > 0);
        self
    }

    fn den_union(a: &BTreeMap<MultiPoly, u32>, b: &BTreeMap<MultiPoly, u32>) -> BTreeMap<MultiPoly, u32> {
        let mut union = a.clone();
        for (f, &m) in b {
            let e = union.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        union
    }

    /// prod over `target` factors of factor^(target_mult - have_mult).
    fn cofactor(target: &BTreeMap<MultiPoly, u32>, have: &BTreeMap<MultiPoly, u32>) -> MultiPoly {
        let mut c = MultiPoly::one();
        for (f, &m) in target {
            let h = have.get(f).copied().unwrap_or(0);
            if m > h {
                c = c.mul(&f.pow(m - h));
            }
        }
        c
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = Self::den_union(&self.den, &other.den);
        let n1 = self.num.mul(&Self::cofactor(&den, &self.den));
        let n2 = other.num.mul(&Self::cofactor(&den, &other.den));
        FactoredRational {
            num: n1.add(&n2),
            den,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FactoredRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FactoredRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::build_cancelled(
            vec![self.num.clone(), other.num.clone()],
            Self::merge(&self.den, &other.den),
        )
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    fn merge(a: &BTreeMap<MultiPoly, u32>, b: &BTreeMap<MultiPoly, u32>) -> BTreeMap<MultiPoly, u32> {
        let mut merged = a.clone();
        for (f, &m) in b {
            *merged.entry(f.clone()).or_insert(0) += m;
        }
        merged
    }

    /// Multiplies out a list of numerator polynomials over a denominator
    /// factor multiset, cancelling numerator factors that exactly match a
    /// denominator factor (after primitive normalization).
    fn build_cancelled(num_factors: Vec<MultiPoly>, den: BTreeMap<MultiPoly, u32>) -> Self {
        let mut den = den;
        let mut scalar = BigRational::one();
        let mut remaining: Vec<MultiPoly> = Vec::new();
        for nf in num_factors {
            if nf.is_zero() {
                return Self::zero();
            }
            let (s, prim) = nf.primitive_normal();
            scalar *= s;
            match den.get_mut(&prim) {
                Some(m) if *m > 0 => {
                    *m -= 1;
                    if *m == 0 {
                        den.remove(&prim);
                    }
                }
                _ => remaining.push(prim),
            }
        }
        let mut num = MultiPoly::constant(scalar);
        for f in remaining {
            num = num.mul(&f);
        }
        FactoredRational { num, den }.normalized()
    }

    /// Cancels denominator factors that divide the numerator exactly
    /// (single-divisor exact division against the known factors; no gcd).
    /// Value-preserving.
    pub fn reduce(&self) -> Self {
        if self.num.is_zero() || self.den.is_empty() {
            return self.clone();
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let factors: Vec<(MultiPoly, u32)> = den.iter().map(|(f, &m)| (f.clone(), m)).collect();
        for (f, m) in factors {
            let mut remaining = m;
            while remaining > 0 {
                match num.div_exact(&f) {
                    Some(q) => {
                        num = q;
                        remaining -= 1;
                    }
                    None => break,
                }
            }
            if remaining == 0 {
                den.remove(&f);
            } else {
                den.insert(f, remaining);
            }
        }
        FactoredRational { num, den }.normalized()
    }

    /// Multiplies by `factor^mult`, cancelling against matching denominator
    /// factors before any polynomial multiplication happens.
    pub fn mul_by_factor(&self, factor: &MultiPoly, mult: u32) -> Self {
        if mult == 0 {
            return self.clone();
        }
        if factor.is_zero() {
            return Self::zero();
        }
        let (s, prim) = factor.primitive_normal();
        let mut den = self.den.clone();
        let have = den.get(&prim).copied().unwrap_or(0);
        let cancel = have.min(mult);
        if cancel > 0 {
            if have == cancel {
                den.remove(&prim);
            } else {
                den.insert(prim.clone(), have - cancel);
            }
        }
        let mut num = self
            .num
            .scale(&crate::rat::pow_rational(&s, i64::from(mult)));
        if mult > cancel {
            num = num.mul(&prim.pow(mult - cancel));
        }
        FactoredRational { num, den }.normalized()
    }

    /// Divides by `factor^mult`; the factor must be a nonzero polynomial in
    /// p-variables only. An exactly matching numerator is cancelled.
    pub fn div_by_factor(&self, factor: &MultiPoly, mult: u32) -> Result<Self, FractionError> {
        if factor.is_zero() {
            return Err(FractionError::DivisionByZero);
        }
        if !is_p_only(factor) {
            return Err(FractionError::NonPDenominator);
        }
        if mult == 0 {
            return Ok(self.clone());
        }
        let (scale, prim) = factor.primitive_normal();
        if prim.is_one() {
            // Pure scalar factor.
            return Ok(self.scale(&crate::rat::pow_rational(&scale, -i64::from(mult))));
        }
        let mut den = self.den.clone();
        *den.entry(prim).or_insert(0) += mult;
        let num = self
            .num
            .scale(&crate::rat::pow_rational(&scale, -i64::from(mult)));
        Ok(Self::build_cancelled(vec![num], den))
    }

    /// Divides by another fraction whose numerator is a polynomial in
    /// p-variables only (the case needed when dividing by a solved leading
    /// coefficient).
    pub fn div(&self, other: &Self) -> Result<Self, FractionError> {
        if other.num.is_zero() {
            return Err(FractionError::DivisionByZero);
        }
        let flipped_num: Vec<MultiPoly> = std::iter::once(self.num.clone())
            .chain(
                other
                    .den
                    .iter()
                    .flat_map(|(f, &m)| std::iter::repeat(f.clone()).take(m as usize)),
            )
            .collect();
        let with_den = Self::build_cancelled(flipped_num, self.den.clone());
        with_den.div_by_factor(&other.num, 1)
    }

    /// Substitutes a fraction for `var` in a polynomial (Horner in `var`).
    /// Denominator factors only accumulate from `value`'s denominator.
    pub fn substitute_into(poly: &MultiPoly, var: VarId, value: &Self) -> Self {
        let parts = poly.as_univariate_in(var);
        let Some(&max_e) = parts.keys().next_back() else {
            return Self::zero();
        };
        let mut result = Self::zero();
        for e in (0..=max_e).rev() {
            result = result.mul(value);
            if let Some(c) = parts.get(&e) {
                result = result.add(&Self::from_poly(c.clone()));
            }
        }
        result
    }

    /// Substitutes a fraction for `var` in this fraction. The denominator
    /// must not involve `var` (denominators are p-only; `var` is checked).
    pub fn substitute(&self, var: VarId, value: &Self) -> Self {
        debug_assert!(
            self.den.keys().all(|f| f.degree_in(var) == 0),
            "substitution variable occurs in a denominator factor"
        );
        let num_sub = Self::substitute_into(&self.num, var, value);
        FactoredRational {
            num: num_sub.num,
            den: Self::merge(&num_sub.den, &self.den),
        }
        .normalized()
    }

    /// Exact evaluation; fails if a denominator factor vanishes.
    pub fn eval(&self, sigma: &Assignment) -> Result<BigRational, FractionError> {
        let mut value = self.num.eval(sigma)?;
        for (f, &m) in &self.den {
            let fv = f.eval(sigma)?;
            if fv.is_zero() {
                return Err(FractionError::DenominatorVanished);
            }
            value /= crate::rat::pow_rational(&fv, i64::from(m));
        }
        Ok(value)
    }

    /// Splits the numerator as linear in `var`: returns (coefficient of var,
    /// part without var), both over this fraction's denominator. `None` if the
    /// numerator has degree > 1 in `var`.
    pub fn split_linear(&self, var: VarId) -> Option<(Self, Self)> {
        if self.num.degree_in(var) > 1 {
            return None;
        }
        let lin = FactoredRational {
            num: self.num.coeff_of_power(var, 1),
            den: self.den.clone(),
        }
        .normalized();
        let cst = FactoredRational {
            num: self.num.coeff_of_power(var, 0),
            den: self.den.clone(),
        }
        .normalized();
        Some((lin, cst))
    }

    /// Evaluation-based equality at the given sample points; points where
    /// either denominator vanishes are skipped. This is the reduction check
    /// that replaces symbolic gcd.
    pub fn agree_at(&self, other: &Self, samples: &[Assignment]) -> bool {
        let mut compared = 0;
        for sigma in samples {
            match (self.eval(sigma), other.eval(sigma)) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        return false;
                    }
                    compared += 1;
                }
                (Err(FractionError::DenominatorVanished), _)
                | (_, Err(FractionError::DenominatorVanished)) => continue,
                _ => return false,
            }
        }
        compared > 0
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ", self.num)?;
        for (i, (factor, &m)) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if m == 1 {
                write!(f, "({factor})")?;
            } else {
                write!(f, "({factor})^{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn substitute_polynomial_value_stays_polynomial() {
        // a_1 + s_1 with a_1 := s_2^2 / 1.
        let p = MultiPoly::var(VarId::a(1)).add(&MultiPoly::var(VarId::s(1)));
        let v = FactoredRational::from_poly(MultiPoly::var(VarId::s(2)).pow(2));
        let got = FactoredRational::substitute_into(&p, VarId::a(1), &v);
        let want = MultiPoly::var(VarId::s(2))
            .pow(2)
            .add(&MultiPoly::var(VarId::s(1)));
        assert_eq!(got.as_poly(), Some(&want));
    }

    #[test]
    fn substitute_fraction_checked_by_evaluation() {
        // a_1*p_1 with a_1 := t_1/p_1: the numerator factor p_1 exactly
        // matches the denominator and cancels, leaving t_1; equality with
        // t_1 is also confirmed at 5 sample points.
        let p = MultiPoly::var(VarId::a(1)).mul(&MultiPoly::var(VarId::p(1)));
        let v = FactoredRational::new(
            MultiPoly::var(VarId::t(1)),
            &[(MultiPoly::var(VarId::p(1)), 1)],
        )
        .unwrap();
        let got = FactoredRational::substitute_into(&p, VarId::a(1), &v);
        assert_eq!(got.as_poly(), Some(&MultiPoly::var(VarId::t(1))));

        let t1 = FactoredRational::from_var(VarId::t(1));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<Assignment> = (0..5)
            .map(|_| {
                let mut sigma = Assignment::new();
                sigma.insert(VarId::p(1), rat(rng.gen_range(2..50), rng.gen_range(1..10)));
                sigma.insert(VarId::t(1), rat(rng.gen_range(-50..50), rng.gen_range(1..10)));
                sigma
            })
            .collect();
        assert!(got.agree_at(&t1, &samples));
    }

    #[test]
    fn exact_factor_cancellation_in_multiplication() {
        // (x / p_1) * p_1 cancels to x.
        let f = FactoredRational::new(
            MultiPoly::var(VarId::x()),
            &[(MultiPoly::var(VarId::p(1)), 1)],
        )
        .unwrap();
        let g = f.mul_poly(&MultiPoly::var(VarId::p(1)));
        assert_eq!(g.as_poly(), Some(&MultiPoly::var(VarId::x())));
    }

    #[test]
    fn scaled_factors_normalize_to_primitive() {
        // Dividing by 3*(p_1 - 1) stores the primitive factor p_1 - 1 and
        // folds the 1/3 into the numerator.
        let three_p_minus_3 = MultiPoly::var(VarId::p(1))
            .scale(&rat(3, 1))
            .sub(&MultiPoly::from_int(3));
        let f = FactoredRational::new(MultiPoly::var(VarId::x()), &[(three_p_minus_3, 1)]).unwrap();
        let expected_factor = MultiPoly::var(VarId::p(1)).sub(&MultiPoly::one());
        let factors: Vec<_> = f.denominator_factors().collect();
        assert_eq!(factors, vec![(&expected_factor, 1)]);
        assert_eq!(f.numerator(), &MultiPoly::var(VarId::x()).scale(&rat(1, 3)));
    }

    #[test]
    fn non_p_denominator_rejected() {
        let err = FactoredRational::new(
            MultiPoly::one(),
            &[(MultiPoly::var(VarId::a(1)), 1)],
        )
        .unwrap_err();
        assert_eq!(err, FractionError::NonPDenominator);
    }

    #[test]
    fn addition_uses_common_denominator() {
        // 1/p_1 + 1/(p_1 - 1) = (2p_1 - 1) / (p_1 (p_1 - 1)).
        let p1 = MultiPoly::var(VarId::p(1));
        let a = FactoredRational::new(MultiPoly::one(), &[(p1.clone(), 1)]).unwrap();
        let b = FactoredRational::new(
            MultiPoly::one(),
            &[(p1.sub(&MultiPoly::one()), 1)],
        )
        .unwrap();
        let sum = a.add(&b);
        let mut sigma = Assignment::new();
        sigma.insert(VarId::p(1), rat(5, 1));
        assert_eq!(sum.eval(&sigma).unwrap(), rat(1, 5) + rat(1, 4));
        assert_eq!(sum.denominator_factors().count(), 2);
    }

    #[test]
    fn denominator_vanishes_at_root() {
        let f = FactoredRational::new(
            MultiPoly::one(),
            &[(MultiPoly::var(VarId::p(1)), 1)],
        )
        .unwrap();
        let mut sigma = Assignment::new();
        sigma.insert(VarId::p(1), rat(0, 1));
        assert_eq!(f.eval(&sigma), Err(FractionError::DenominatorVanished));
    }
}
