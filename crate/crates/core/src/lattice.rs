//! Exact integer linear algebra: Smith normal form with tracked unimodular
//! factors, congruence sublattices, and quotients as finitely generated
//! abelian groups in invariant-factor form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Errors from lattice operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// A quotient generator lies outside the sublattice.
    NotInSublattice { generator: Vec<BigInt> },
    /// Dimension mismatch between an argument and the ambient rank.
    DimensionMismatch { expected: usize, got: usize },
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotInSublattice { generator } => {
                write!(f, "generator {generator:?} is not in the sublattice")
            }
            LatticeError::DimensionMismatch { expected, got } => {
                write!(f, "expected dimension {expected}, got {got}")
            }
        }
    }
}

impl std::error::Error for LatticeError {}

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Vertical concatenation (same column count).
    pub fn stack(&self, below: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, below.cols, "dimension mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        IntMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let numerator = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    let (q, r) = numerator.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division is exact");
                    m[i][j] = q;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    /// Rank over the rationals, via the Smith normal form.
    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// U * M * V = D with U, V unimodular and D diagonal satisfying d_1 | d_2 | ...
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by elimination with minimal-absolute-value pivots.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut b = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    // Elementary operations, mirrored on u (rows) and v (columns) so that
    // u * m * v = b stays invariant.
    fn swap_rows(b: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
        for c in 0..b.ncols() {
            let (x, y) = (b.get(i, c).clone(), b.get(j, c).clone());
            b.set(i, c, y);
            b.set(j, c, x);
        }
        for c in 0..u.ncols() {
            let (x, y) = (u.get(i, c).clone(), u.get(j, c).clone());
            u.set(i, c, y);
            u.set(j, c, x);
        }
    }
    fn swap_cols(b: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
        for r in 0..b.nrows() {
            let (x, y) = (b.get(r, i).clone(), b.get(r, j).clone());
            b.set(r, i, y);
            b.set(r, j, x);
        }
        for r in 0..v.nrows() {
            let (x, y) = (v.get(r, i).clone(), v.get(r, j).clone());
            v.set(r, i, y);
            v.set(r, j, x);
        }
    }
    // row i += q * row j
    fn add_row(b: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize, q: &BigInt) {
        for c in 0..b.ncols() {
            let val = b.get(i, c) + q * b.get(j, c);
            b.set(i, c, val);
        }
        for c in 0..u.ncols() {
            let val = u.get(i, c) + q * u.get(j, c);
            u.set(i, c, val);
        }
    }
    // col i += q * col j
    fn add_col(b: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize, q: &BigInt) {
        for r in 0..b.nrows() {
            let val = b.get(r, i) + q * b.get(r, j);
            b.set(r, i, val);
        }
        for r in 0..v.nrows() {
            let val = v.get(r, i) + q * v.get(r, j);
            v.set(r, i, val);
        }
    }
    fn negate_row(b: &mut IntMatrix, u: &mut IntMatrix, i: usize) {
        for c in 0..b.ncols() {
            let val = -b.get(i, c).clone();
            b.set(i, c, val);
        }
        for c in 0..u.ncols() {
            let val = -u.get(i, c).clone();
            u.set(i, c, val);
        }
    }

    let steps = rows.min(cols);
    for k in 0..steps {
        'pivot: loop {
            // Minimal nonzero |entry| in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !b.get(i, j).is_zero()
                        && best
                            .map(|(bi, bj)| b.get(i, j).abs() < b.get(bi, bj).abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivot; // trailing block is zero
            };
            if pi != k {
                swap_rows(&mut b, &mut u, k, pi);
            }
            if pj != k {
                swap_cols(&mut b, &mut v, k, pj);
            }

            // Reduce column k below the pivot.
            let mut dirty = false;
            for i in k + 1..rows {
                if !b.get(i, k).is_zero() {
                    let q = -(b.get(i, k) / b.get(k, k));
                    add_row(&mut b, &mut u, i, k, &q);
                    if !b.get(i, k).is_zero() {
                        dirty = true; // remainder smaller than pivot remains
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Reduce row k to the right of the pivot.
            for j in k + 1..cols {
                if !b.get(k, j).is_zero() {
                    let q = -(b.get(k, j) / b.get(k, k));
                    add_col(&mut b, &mut v, j, k, &q);
                    if !b.get(k, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let pivot = b.get(k, k).clone();
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(b.get(i, j) % &pivot).is_zero() {
                        add_row(&mut b, &mut u, k, i, &BigInt::one());
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if b.get(k, k).is_negative() {
            negate_row(&mut b, &mut u, k);
        }
    }

    SmithNormalForm { u, d: b, v }
}

/// Solves M x = rhs over the integers via the Smith normal form; `None` when
/// no integer solution exists.
pub fn solve_integer(m: &IntMatrix, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.nrows(), rhs.len(), "dimension mismatch");
    let snf = smith_normal_form(m);
    // M = U^{-1} D V^{-1}, so M x = rhs iff D (V^{-1} x) = U rhs.
    let urhs: Vec<BigInt> = (0..m.nrows())
        .map(|i| {
            (0..m.nrows())
                .map(|j| snf.u.get(i, j) * &rhs[j])
                .sum::<BigInt>()
        })
        .collect();
    let mut z = vec![BigInt::zero(); m.ncols()];
    for i in 0..m.nrows() {
        let d = if i < m.ncols() {
            snf.d.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !urhs[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = urhs[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    // x = V z
    let x: Vec<BigInt> = (0..m.ncols())
        .map(|i| {
            (0..m.ncols())
                .map(|j| snf.v.get(i, j) * &z[j])
                .sum::<BigInt>()
        })
        .collect();
    Some(x)
}

/// A finite-rank sublattice of Z^ambient_rank, given by a row basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterLattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl CharacterLattice {
    /// The full lattice Z^n.
    pub fn full(ambient_rank: usize) -> Self {
        CharacterLattice {
            ambient_rank,
            basis: IntMatrix::identity(ambient_rank),
        }
    }

    pub fn from_basis(ambient_rank: usize, basis: IntMatrix) -> Self {
        assert_eq!(basis.ncols(), ambient_rank, "basis width mismatch");
        assert_eq!(
            basis.rank(),
            basis.nrows(),
            "basis rows must be linearly independent"
        );
        CharacterLattice { ambient_rank, basis }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the row basis, when `v` lies in the sublattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.ambient_rank {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ambient_rank,
                got: v.len(),
            });
        }
        solve_integer(&self.basis.transpose(), v).ok_or(LatticeError::NotInSublattice {
            generator: v.to_vec(),
        })
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_ok()
    }

    /// Index in the ambient lattice, for full-rank sublattices.
    pub fn index_in_ambient(&self) -> BigInt {
        assert_eq!(
            self.rank(),
            self.ambient_rank,
            "index is finite only for full-rank sublattices"
        );
        self.basis.determinant().abs()
    }
}

/// The sublattice { v : c . v = 0 mod m for each congruence (c, m) }, computed
/// from the integer kernel of [C | diag(m)].
pub fn congruence_sublattice(
    ambient_rank: usize,
    congruences: &[(Vec<BigInt>, BigInt)],
) -> CharacterLattice {
    if congruences.is_empty() {
        return CharacterLattice::full(ambient_rank);
    }
    let q = congruences.len();
    for (c, m) in congruences {
        assert_eq!(c.len(), ambient_rank, "congruence width mismatch");
        assert!(m >= &BigInt::one(), "moduli must be >= 1");
    }
    let mut system = IntMatrix::zero(q, ambient_rank + q);
    for (i, (c, m)) in congruences.iter().enumerate() {
        for (j, cj) in c.iter().enumerate() {
            system.set(i, j, cj.clone());
        }
        system.set(i, ambient_rank + i, m.clone());
    }
    // Kernel basis: columns of V past the rank. Solutions (v, w) with
    // C v + diag(m) w = 0 project bijectively onto the sublattice.
    let snf = smith_normal_form(&system);
    let rank = snf.rank();
    let mut rows = Vec::new();
    for j in rank..ambient_rank + q {
        let row: Vec<BigInt> = (0..ambient_rank).map(|i| snf.v.get(i, j).clone()).collect();
        rows.push(row);
    }
    debug_assert_eq!(rows.len(), ambient_rank, "congruence kernel has full rank");
    CharacterLattice::from_basis(ambient_rank, IntMatrix::from_bigint_rows(rows))
}

/// A finitely generated abelian group Z^free_rank + sum Z/d_i in
/// invariant-factor form: d_1 | d_2 | ..., every d_i >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        let mut torsion = Vec::new();
        if order >= 2 {
            torsion.push(BigInt::from(order));
        }
        AbelianGroup {
            free_rank: 0,
            torsion,
        }
    }

    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let torsion: Vec<BigInt> = torsion
            .into_iter()
            .filter(|d| d > &BigInt::one())
            .collect();
        for w in torsion.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "invariant factors must form a chain");
        }
        AbelianGroup { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        // Recompute the invariant-factor chain of the combined torsion.
        let mut factors: Vec<BigInt> = self
            .torsion
            .iter()
            .chain(other.torsion.iter())
            .cloned()
            .collect();
        // Repeatedly replace pairs by (gcd, lcm) until the chain holds.
        loop {
            factors.sort();
            let mut changed = false;
            for i in 0..factors.len().saturating_sub(1) {
                for j in i + 1..factors.len() {
                    if !(&factors[j] % &factors[i]).is_zero() {
                        let g = factors[i].gcd(&factors[j]);
                        let l = factors[i].lcm(&factors[j]);
                        factors[i] = g;
                        factors[j] = l;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        AbelianGroup::new(self.free_rank + other.free_rank, factors)
    }

    /// Renders as `Z^k (+) Z/d1 (+) Z/d2 ...`; the trivial group is `0`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" (+) ")
        }
    }

    /// JSON form `{"free_rank": k, "torsion": [d1, d2, ...]}`.
    pub fn to_json(&self) -> String {
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        format!(
            "{{\"free_rank\": {}, \"torsion\": [{}]}}",
            self.free_rank,
            torsion.join(", ")
        )
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// The quotient L / <gens> in invariant-factor form. Every generator must lie
/// in L; generators are expressed in L's basis and the coordinate matrix is
/// put in Smith normal form.
pub fn lattice_quotient(
    lattice: &CharacterLattice,
    gens: &[Vec<BigInt>],
) -> Result<AbelianGroup, LatticeError> {
    let rank = lattice.rank();
    if gens.is_empty() {
        return Ok(AbelianGroup::free(rank));
    }
    let mut coord_rows = Vec::new();
    for g in gens {
        coord_rows.push(lattice.coordinates(g)?);
    }
    let coords = IntMatrix::from_bigint_rows(coord_rows);
    let snf = smith_normal_form(&coords);
    let factors = snf.invariant_factors();
    Ok(AbelianGroup::new(rank - factors.len(), factors))
}

/// Convenience: quotient of the full lattice Z^n.
pub fn ambient_quotient(ambient_rank: usize, gens: &[Vec<BigInt>]) -> AbelianGroup {
    lattice_quotient(&CharacterLattice::full(ambient_rank), gens)
        .expect("every vector lies in the full lattice")
}

pub fn bigint_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
