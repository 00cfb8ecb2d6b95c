//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! `MultiPoly` stores terms as a `BTreeMap` from `Monomial` to nonzero
//! `BigRational` coefficient. The map order is graded lexicographic over the
//! variable order A < P < S < T < X < Y (then by index), so equal polynomials
//! have identical representations and serialization is deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Variable families, in canonical order.
///
/// `A` holds form coefficients, `P` marked-point coordinates, `S`/`T` root
/// values at the three fixed sections and at the moving points, `X`/`Y` the
/// form variables themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarFamily {
    A,
    P,
    S,
    T,
    X,
    Y,
}

impl VarFamily {
    pub const ALL: [VarFamily; 6] = [
        VarFamily::A,
        VarFamily::P,
        VarFamily::S,
        VarFamily::T,
        VarFamily::X,
        VarFamily::Y,
    ];

    fn letter(self) -> char {
        match self {
            VarFamily::A => 'a',
            VarFamily::P => 'p',
            VarFamily::S => 's',
            VarFamily::T => 't',
            VarFamily::X => 'x',
            VarFamily::Y => 'y',
        }
    }
}

/// An indexed variable, e.g. `a_3`, `p_1`, `s_2`, `t_4`, `x`, `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub family: VarFamily,
    pub index: u32,
}

impl VarId {
    pub fn new(family: VarFamily, index: u32) -> Self {
        if family == VarFamily::S {
            assert!((1..=3).contains(&index), "s-variables are s_1, s_2, s_3");
        }
        VarId { family, index }
    }

    pub fn a(index: u32) -> Self {
        Self::new(VarFamily::A, index)
    }
    pub fn p(index: u32) -> Self {
        Self::new(VarFamily::P, index)
    }
    pub fn s(index: u32) -> Self {
        Self::new(VarFamily::S, index)
    }
    pub fn t(index: u32) -> Self {
        Self::new(VarFamily::T, index)
    }
    pub fn x() -> Self {
        Self::new(VarFamily::X, 0)
    }
    pub fn y() -> Self {
        Self::new(VarFamily::Y, 0)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            VarFamily::X | VarFamily::Y if self.index == 0 => {
                write!(f, "{}", self.family.letter())
            }
            _ => write!(f, "{}_{}", self.family.letter(), self.index),
        }
    }
}

/// A monomial: finite map from variables to positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exponents: BTreeMap<VarId, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        let mut exponents = BTreeMap::new();
        exponents.insert(v, 1);
        Monomial { exponents }
    }

    pub fn from_pairs(pairs: &[(VarId, u32)]) -> Self {
        let mut exponents = BTreeMap::new();
        for &(v, e) in pairs {
            if e > 0 {
                *exponents.entry(v).or_insert(0) += e;
            }
        }
        Monomial { exponents }
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent_of(&self, v: VarId) -> u32 {
        self.exponents.get(&v).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.exponents.values().map(|&e| u64::from(e)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &u32)> {
        self.exponents.iter()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exponents = self.exponents.clone();
        for (&v, &e) in &other.exponents {
            *exponents.entry(v).or_insert(0) += e;
        }
        Monomial { exponents }
    }

    /// Componentwise quotient, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exponents = self.exponents.clone();
        for (&v, &e) in &other.exponents {
            let have = exponents.get_mut(&v)?;
            if *have < e {
                return None;
            }
            *have -= e;
            if *have == 0 {
                exponents.remove(&v);
            }
        }
        Some(Monomial { exponents })
    }

    /// Drops `var` from the monomial, returning its exponent.
    fn without(&self, var: VarId) -> (u32, Monomial) {
        let mut exponents = self.exponents.clone();
        let e = exponents.remove(&var).unwrap_or(0);
        (e, Monomial { exponents })
    }
}

// Graded lexicographic: total degree first, then the earliest variable with
// differing exponent decides (higher exponent is larger).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut it1 = self.exponents.iter();
        let mut it2 = other.exponents.iter();
        let (mut cur1, mut cur2) = (it1.next(), it2.next());
        loop {
            match (cur1, cur2) {
                (None, None) => return Ordering::Equal,
                // Remaining variables in one monomial only: it has positive
                // exponent at a position where the other has zero.
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((v1, e1)), Some((v2, e2))) => match v1.cmp(v2) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match e1.cmp(e2) {
                        Ordering::Equal => {
                            cur1 = it1.next();
                            cur2 = it2.next();
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Errors from evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    MissingVariable(VarId),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::MissingVariable(v) => write!(f, "unassigned variable {v}"),
        }
    }
}

impl std::error::Error for EvalError {}

/// A variable assignment for evaluation.
pub type Assignment = BTreeMap<VarId, BigRational>;

/// Sparse multivariate polynomial over the rationals, in canonical form:
/// no zero coefficients are stored, and terms are kept in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: VarId) -> Self {
        Self::term(BigRational::one(), Monomial::var(v))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(&v, _)| v))
            .collect()
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        MultiPoly { terms }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), -c.clone());
        }
        MultiPoly { terms }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        // Collect, sort, and merge; cheaper than per-pair map inserts.
        let mut pairs: Vec<(Monomial, BigRational)> =
            Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                pairs.push((m1.mul(m2), c1 * c2));
            }
        }
        pairs.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut terms = BTreeMap::new();
        let mut pending: Option<(Monomial, BigRational)> = None;
        for (m, c) in pairs {
            match &mut pending {
                Some((pm, pc)) if *pm == m => {
                    *pc += c;
                }
                _ => {
                    if let Some((pm, pc)) = pending.take() {
                        if !pc.is_zero() {
                            terms.insert(pm, pc);
                        }
                    }
                    pending = Some((m, c));
                }
            }
        }
        if let Some((pm, pc)) = pending {
            if !pc.is_zero() {
                terms.insert(pm, pc);
            }
        }
        MultiPoly { terms }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, coeff)| (m.clone(), coeff * c))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact evaluation. Errors if a variable of the polynomial is unassigned.
    ///
    /// Denominators are cleared up front (one power table per variable plus
    /// the coefficient-denominator lcm), so the inner loop is pure integer
    /// arithmetic with a single rational reduction at the end.
    pub fn eval(&self, assignment: &Assignment) -> Result<BigRational, EvalError> {
        use num_integer::Integer;
        if self.terms.is_empty() {
            return Ok(BigRational::zero());
        }
        // Power tables n_v^e and d_v^e for e up to the degree in v.
        let mut tables: BTreeMap<VarId, (Vec<BigInt>, Vec<BigInt>)> = BTreeMap::new();
        for v in self.variables() {
            let x = assignment.get(&v).ok_or(EvalError::MissingVariable(v))?;
            let cap = self.degree_in(v) as usize;
            let mut numers = Vec::with_capacity(cap + 1);
            let mut denoms = Vec::with_capacity(cap + 1);
            numers.push(BigInt::one());
            denoms.push(BigInt::one());
            for e in 1..=cap {
                numers.push(&numers[e - 1] * x.numer());
                denoms.push(&denoms[e - 1] * x.denom());
            }
            tables.insert(v, (numers, denoms));
        }
        let mut coeff_denom_lcm = BigInt::one();
        for c in self.terms.values() {
            coeff_denom_lcm = coeff_denom_lcm.lcm(c.denom());
        }
        // total * clear = sum over terms of
        //   (c * lcm) * prod_v n_v^{e_v} d_v^{cap_v - e_v},
        // with clear = lcm * prod_v d_v^{cap_v}.
        let mut numerator = BigInt::zero();
        for (m, c) in &self.terms {
            let mut value = c.numer() * (&coeff_denom_lcm / c.denom());
            for (v, (numers, denoms)) in &tables {
                let e = m.exponent_of(*v) as usize;
                let cap = numers.len() - 1;
                if e > 0 {
                    value *= &numers[e];
                }
                if e < cap {
                    value *= &denoms[cap - e];
                }
            }
            numerator += value;
        }
        let mut clear = coeff_denom_lcm;
        for (numers, denoms) in tables.values() {
            clear *= &denoms[numers.len() - 1];
        }
        Ok(BigRational::new(numerator, clear))
    }

    /// Degree in a single variable (zero polynomial gives 0).
    pub fn degree_in(&self, var: VarId) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent_of(var))
            .max()
            .unwrap_or(0)
    }

    /// Writes the polynomial as a univariate in `var`: exponent -> coefficient
    /// polynomial (in the remaining variables).
    pub fn as_univariate_in(&self, var: VarId) -> BTreeMap<u32, MultiPoly> {
        let mut result: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.without(var);
            let entry = result.entry(e).or_default();
            Self::insert_term(&mut entry.terms, rest, c.clone());
        }
        result.retain(|_, p| !p.is_zero());
        result
    }

    /// Coefficient polynomial of `var^k`.
    pub fn coeff_of_power(&self, var: VarId, k: u32) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.without(var);
            if e == k {
                Self::insert_term(&mut terms, rest, c.clone());
            }
        }
        MultiPoly { terms }
    }

    /// Substitutes a polynomial value for `var` (Horner in `var`).
    pub fn substitute(&self, var: VarId, value: &MultiPoly) -> MultiPoly {
        let parts = self.as_univariate_in(var);
        let Some(&max_e) = parts.keys().next_back() else {
            return MultiPoly::zero();
        };
        let mut result = MultiPoly::zero();
        for e in (0..=max_e).rev() {
            result = result.mul(value);
            if let Some(c) = parts.get(&e) {
                result = result.add(c);
            }
        }
        result
    }

    /// Exact division: returns `q` with `self = q * divisor`, or `None` when
    /// the division is not exact. Single-divisor elimination on leading terms;
    /// sound because graded-lex leading monomials are multiplicative.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (dm, dc) = divisor.leading_term().unwrap();
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((rm, rc)) = rem
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            for (m2, c2) in &divisor.terms {
                Self::insert_term(&mut rem, qm.mul(m2), -(&qc * c2));
            }
            Self::insert_term(&mut quot, qm, qc);
        }
        Some(MultiPoly { terms: quot })
    }

    /// Total degree after weighting each family; `None` for the zero polynomial.
    /// Panics if a family occurring in the polynomial has no weight.
    pub fn weighted_degrees(&self, weights: &BTreeMap<VarFamily, i64>) -> BTreeSet<i64> {
        let mut degrees = BTreeSet::new();
        for m in self.terms.keys() {
            let mut d = 0i64;
            for (&v, &e) in m.iter() {
                let w = weights
                    .get(&v.family)
                    .unwrap_or_else(|| panic!("no weight for family {:?}", v.family));
                d += w * i64::from(e);
            }
            degrees.insert(d);
        }
        degrees
    }

    /// True iff every monomial has weighted degree `expected`
    /// (vacuously true for the zero polynomial).
    pub fn weighted_degree_check(
        &self,
        weights: &BTreeMap<VarFamily, i64>,
        expected: i64,
    ) -> bool {
        let degrees = self.weighted_degrees(weights);
        degrees.is_empty() || (degrees.len() == 1 && degrees.contains(&expected))
    }

    /// Splits into (rational scale, primitive part): integer coprime
    /// coefficients with positive leading coefficient. Zero maps to (0, 0).
    pub fn primitive_normal(&self) -> (BigRational, MultiPoly) {
        if self.is_zero() {
            return (BigRational::zero(), MultiPoly::zero());
        }
        use num_integer::Integer;
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let mut scale = BigRational::new(numer_gcd, denom_lcm);
        let mut prim = self.scale(&scale.recip());
        if prim
            .leading_term()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            prim = prim.neg();
            scale = -scale;
        }
        (scale, prim)
    }
}

impl std::ops::Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        MultiPoly::add(&self, &rhs)
    }
}

impl std::ops::Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        MultiPoly::mul(&self, &rhs)
    }
}

impl num_traits::Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl num_traits::One for MultiPoly {
    fn one() -> Self {
        MultiPoly::constant(BigRational::one())
    }
    fn is_one(&self) -> bool {
        MultiPoly::is_one(self)
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

// ---- Text format ----
//
// Terms are printed leading-term first in the canonical order, each as
// `c*a_1^2*p_3` with `c` an integer or `num/den`; separators are ` + ` / ` - `.

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{abs}")?;
            for (v, &e) in m.iter() {
                if e == 1 {
                    write!(f, "*{v}")?;
                } else {
                    write!(f, "*{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Parse errors for the text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

impl FromStr for MultiPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            chars: s.chars().collect(),
            pos: 0,
        };
        let poly = p.parse_sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(ParseError(format!("trailing input at byte {}", p.pos)));
        }
        Ok(poly)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse_sum(&mut self) -> Result<MultiPoly, ParseError> {
        let mut result = MultiPoly::zero();
        let mut first = true;
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') => {
                    self.pos += 1;
                    -1
                }
                None if first => return Err(ParseError("empty input".into())),
                None => break,
                Some(_) if first => 1,
                Some(c) => {
                    return Err(ParseError(format!("expected '+' or '-', found '{c}'")));
                }
            };
            let term = self.parse_term()?;
            result = if sign > 0 {
                result.add(&term)
            } else {
                result.sub(&term)
            };
            first = false;
            self.skip_ws();
            if self.pos == self.chars.len() {
                break;
            }
        }
        Ok(result)
    }

    fn parse_term(&mut self) -> Result<MultiPoly, ParseError> {
        self.skip_ws();
        let mut coeff = BigRational::one();
        let mut mono_pairs: Vec<(VarId, u32)> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.parse_rational()?;
                    coeff *= n;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let (v, e) = self.parse_var_power()?;
                    mono_pairs.push((v, e));
                }
                _ => return Err(ParseError("expected a coefficient or variable".into())),
            }
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(MultiPoly::term(coeff, Monomial::from_pairs(&mono_pairs)))
    }

    fn parse_uint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError("expected digits".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>()
            .map_err(|e| ParseError(format!("bad integer {s}: {e}")))
    }

    fn parse_rational(&mut self) -> Result<BigRational, ParseError> {
        let numer = self.parse_uint()?;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            let denom = self.parse_uint()?;
            if denom.is_zero() {
                return Err(ParseError("zero denominator".into()));
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    fn parse_var_power(&mut self) -> Result<(VarId, u32), ParseError> {
        let letter = self.peek().unwrap();
        self.pos += 1;
        let family = match letter {
            'a' => VarFamily::A,
            'p' => VarFamily::P,
            's' => VarFamily::S,
            't' => VarFamily::T,
            'x' => VarFamily::X,
            'y' => VarFamily::Y,
            _ => return Err(ParseError(format!("unknown variable letter '{letter}'"))),
        };
        let index = if self.peek() == Some('_') {
            self.pos += 1;
            let n = self.parse_uint()?;
            u32::try_from(n.clone())
                .map_err(|_| ParseError(format!("variable index {n} out of range")))?
        } else {
            match family {
                VarFamily::X | VarFamily::Y => 0,
                _ => return Err(ParseError(format!("variable '{letter}' needs an index"))),
            }
        };
        if family == VarFamily::S && !(1..=3).contains(&index) {
            return Err(ParseError(format!("s_{index} is out of range")));
        }
        self.skip_ws();
        let exp = if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.parse_uint()?;
            u32::try_from(n.clone())
                .map_err(|_| ParseError(format!("exponent {n} out of range")))?
        } else {
            1
        };
        Ok((VarId { family, index }, exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn x() -> MultiPoly {
        MultiPoly::var(VarId::x())
    }
    fn y() -> MultiPoly {
        MultiPoly::var(VarId::y())
    }

    #[test]
    fn additive_inverse_is_zero() {
        assert!(x().sub(&x()).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        // (x+y)(x-y) = x^2 - y^2, expanded by hand: x^2 - xy + xy - y^2.
        let lhs = x().add(&y()).mul(&x().sub(&y()));
        let rhs = x().mul(&x()).sub(&y().mul(&y()));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.num_terms(), 2);
    }

    #[test]
    fn power_of_variable() {
        let s1 = MultiPoly::var(VarId::s(1));
        assert_eq!(s1.pow(2), s1.mul(&s1));
    }

    #[test]
    fn eval_difference_of_squares() {
        // x^2 - y^2 at (3, 1) is 9 - 1 = 8.
        let p = x().mul(&x()).sub(&y().mul(&y()));
        let mut sigma = Assignment::new();
        sigma.insert(VarId::x(), rat(3, 1));
        sigma.insert(VarId::y(), rat(1, 1));
        assert_eq!(p.eval(&sigma).unwrap(), rat(8, 1));
    }

    #[test]
    fn eval_zero_poly_empty_assignment() {
        assert_eq!(MultiPoly::zero().eval(&Assignment::new()).unwrap(), rat(0, 1));
    }

    #[test]
    fn eval_power() {
        // s_1^3 at s_1 = 2 is 8.
        let p = MultiPoly::var(VarId::s(1)).pow(3);
        let mut sigma = Assignment::new();
        sigma.insert(VarId::s(1), rat(2, 1));
        assert_eq!(p.eval(&sigma).unwrap(), rat(8, 1));
    }

    #[test]
    fn eval_missing_variable() {
        let p = x();
        assert_eq!(
            p.eval(&Assignment::new()),
            Err(EvalError::MissingVariable(VarId::x()))
        );
    }

    #[test]
    fn substitute_polynomial_value() {
        // a_1 + s_1 with a_1 := s_2^2 gives s_2^2 + s_1.
        let p = MultiPoly::var(VarId::a(1)).add(&MultiPoly::var(VarId::s(1)));
        let v = MultiPoly::var(VarId::s(2)).pow(2);
        let got = p.substitute(VarId::a(1), &v);
        let want = MultiPoly::var(VarId::s(2))
            .pow(2)
            .add(&MultiPoly::var(VarId::s(1)));
        assert_eq!(got, want);
    }

    #[test]
    fn substitute_absent_variable() {
        let p = x();
        assert_eq!(p.substitute(VarId::y(), &MultiPoly::from_int(7)), p);
    }

    #[test]
    fn weighted_degree_examples() {
        // a_1 + s_1^2 is homogeneous of degree 2 under (A:2, S:1).
        let mut weights = BTreeMap::new();
        weights.insert(VarFamily::A, 2);
        weights.insert(VarFamily::S, 1);
        let p = MultiPoly::var(VarId::a(1)).add(&MultiPoly::var(VarId::s(1)).pow(2));
        assert!(p.weighted_degree_check(&weights, 2));

        // a_1 + s_1 mixes degrees 2 and 1.
        let q = MultiPoly::var(VarId::a(1)).add(&MultiPoly::var(VarId::s(1)));
        assert!(!q.weighted_degree_check(&weights, 2));

        // The zero polynomial is vacuously homogeneous of any degree.
        assert!(MultiPoly::zero().weighted_degree_check(&weights, 17));
    }

    #[test]
    fn exact_division() {
        // (x^2 - y^2) / (x - y) = x + y.
        let p = x().mul(&x()).sub(&y().mul(&y()));
        let d = x().sub(&y());
        assert_eq!(p.div_exact(&d), Some(x().add(&y())));
        // x^2 + y^2 is not divisible by x - y.
        let q = x().mul(&x()).add(&y().mul(&y()));
        assert_eq!(q.div_exact(&d), None);
    }

    #[test]
    fn primitive_normalization() {
        // 4/6*x - 2/6*y = (1/3)*(2x - y).
        let p = x().scale(&rat(4, 6)).sub(&y().scale(&rat(2, 6)));
        let (scale, prim) = p.primitive_normal();
        assert_eq!(scale, rat(1, 3));
        assert_eq!(prim, x().scale(&rat(2, 1)).sub(&y()));
        assert_eq!(prim.scale(&scale), p);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = MultiPoly::var(VarId::a(1))
            .pow(2)
            .scale(&rat(3, 4))
            .sub(&MultiPoly::var(VarId::p(3)))
            .add(&MultiPoly::from_int(5));
        let s = p.to_string();
        assert_eq!(s.parse::<MultiPoly>().unwrap(), p);
        assert_eq!(s, "3/4*a_1^2 - 1*p_3 + 5");
    }

    #[test]
    fn parse_accepts_whitespace_and_plain_vars() {
        let p: MultiPoly = "  2 * a_1 ^ 2  -  x  + 1/2 ".parse().unwrap();
        let want = MultiPoly::var(VarId::a(1))
            .pow(2)
            .scale(&rat(2, 1))
            .sub(&x())
            .add(&MultiPoly::constant(rat(1, 2)));
        assert_eq!(p, want);
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        // deg first: x < x^2; within equal degree, earlier variable with the
        // higher exponent wins: x^2 > x*y > y^2 (x sorts before y).
        let x2 = Monomial::from_pairs(&[(VarId::x(), 2)]);
        let xy = Monomial::from_pairs(&[(VarId::x(), 1), (VarId::y(), 1)]);
        let y2 = Monomial::from_pairs(&[(VarId::y(), 2)]);
        let x1 = Monomial::var(VarId::x());
        assert!(x1 < x2);
        assert!(x2 > xy);
        assert!(xy > y2);
    }
}
