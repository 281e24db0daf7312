//! Exact integer matrices: Smith normal form, signed determinants, and a
//! gcd-of-minors oracle used to cross-check the elimination engine.
//!
//! Entries are arbitrary-precision integers throughout; elimination blows up
//! intermediate values well past 64 bits even on small inputs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense matrix of arbitrary-precision signed integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimensions must be positive".into(),
            ));
        }
        Ok(IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged row lengths".into()));
        }
        let mut m = Self::zeros(r, c)?;
        m.data = rows.into_iter().flatten().collect();
        Ok(m)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
            .expect("dimensions already validated")
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|l| self.get(i, l) * rhs.get(l, j)).sum()
        })
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<IntMatrix> {
        IntMatrix::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self.get(row_idx[i], col_idx[j]).clone()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub fn add_row_multiple(&mut self, src: usize, dst: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * self.get(src, j);
            let v = self.get(dst, j) + delta;
            self.set(dst, j, v);
        }
    }

    /// col[dst] += factor * col[src]
    pub fn add_col_multiple(&mut self, src: usize, dst: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * self.get(i, src);
            let v = self.get(i, dst) + delta;
            self.set(i, dst, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self.get(i, j).to_string())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Invariant factors of a matrix, its rank, and the sign of its determinant
/// (for square inputs; `None` otherwise, `0` when singular).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    invariant_factors: Vec<BigInt>,
    rank: usize,
    det_sign: Option<i8>,
}

impl SnfResult {
    pub fn new(invariant_factors: Vec<BigInt>, det_sign: Option<i8>) -> Self {
        let rank = invariant_factors.len();
        SnfResult {
            invariant_factors,
            rank,
            det_sign,
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn det_sign(&self) -> Option<i8> {
        self.det_sign
    }

    /// Factors as a space-separated decimal line, e.g. "1 1 3".
    pub fn factors_line(&self) -> String {
        self.invariant_factors
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn divisibility_chain_holds(&self) -> bool {
        self.invariant_factors
            .windows(2)
            .all(|w| (&w[1] % &w[0]).is_zero())
            && self.invariant_factors.iter().all(|f| f.is_positive())
    }

    pub fn to_json_string(&self) -> String {
        let factors = self
            .invariant_factors
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let sign = match self.det_sign {
            Some(s) => s.to_string(),
            None => "null".into(),
        };
        format!(
            "{{\"factors\":[{factors}],\"rank\":{},\"det_sign\":{sign}}}",
            self.rank
        )
    }
}

/// Smith normal form by elimination.
///
/// Repeatedly moves a minimum-magnitude pivot to the diagonal, reduces its
/// row and column with Euclidean steps, and finishes with the pairwise
/// gcd/lcm pass that restores the divisibility chain. The determinant sign
/// is computed separately by fraction-free elimination so the two can
/// cross-check each other.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let mut a = m.clone();
    let (r, c) = (a.rows, a.cols);
    let steps = r.min(c);
    let mut diag: Vec<BigInt> = Vec::with_capacity(steps);
    for t in 0..steps {
        while let Some((pi, pj)) = min_abs_pivot(&a, t) {
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t) / a.get(t, t);
                if !q.is_zero() {
                    a.add_row_multiple(t, i, &-q);
                }
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // Remainders are strictly smaller than the pivot, so the
                // re-picked pivot shrinks and the loop terminates.
                continue;
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j) / a.get(t, t);
                if !q.is_zero() {
                    a.add_col_multiple(t, j, &-q);
                }
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(t, t).is_zero() {
            break;
        }
        diag.push(a.get(t, t).abs());
    }
    let factors = divisibility_fixup(diag);
    let det_sign = if m.is_square() {
        Some(match determinant(m).expect("square").sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        })
    } else {
        None
    };
    SnfResult::new(factors, det_sign)
}

fn min_abs_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) if v.abs() < a.get(bi, bj).abs() => best = Some((i, j)),
                _ => {}
            }
        }
    }
    best
}

/// Pairwise (gcd, lcm) replacement until every earlier factor divides every
/// later one. The multiset of prime-power contents is preserved, so the
/// fixpoint is the invariant-factor chain of the diagonal.
fn divisibility_fixup(mut diag: Vec<BigInt>) -> Vec<BigInt> {
    let len = diag.len();
    loop {
        let mut changed = false;
        for i in 0..len {
            for j in i + 1..len {
                if !(&diag[j] % &diag[i]).is_zero() {
                    let g = diag[i].gcd(&diag[j]);
                    let l = &diag[i] / &g * &diag[j];
                    diag[i] = g;
                    diag[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            return diag;
        }
    }
}

/// Exact signed determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for t in 0..n {
        let Some(p) = (t..n).find(|&i| !a.get(i, t).is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != t {
            a.swap_rows(t, p);
            sign = -sign;
        }
        for i in t + 1..n {
            for j in t + 1..n {
                let num = a.get(t, t) * a.get(i, j) - a.get(i, t) * a.get(t, j);
                debug_assert!((&num % &prev).is_zero(), "fraction-free step not exact");
                a.set(i, j, num / &prev);
            }
        }
        prev = a.get(t, t).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    Ok(if sign < 0 { -d } else { d })
}

/// Largest dimension the gcd-of-minors oracle accepts.
pub const MINOR_ORACLE_LIMIT: usize = 9;

/// Invariant factors by determinantal divisors: d_i is the gcd of all i-by-i
/// minors and f_i = d_i / d_{i-1}. Exponential in the matrix size; this is
/// a test oracle, independent of the elimination path of [`snf`].
pub fn gcd_of_minors_snf(m: &IntMatrix) -> Result<SnfResult> {
    if m.rows > MINOR_ORACLE_LIMIT || m.cols > MINOR_ORACLE_LIMIT {
        return Err(Error::TooLarge(format!(
            "gcd-of-minors oracle handles at most {MINOR_ORACLE_LIMIT}x{MINOR_ORACLE_LIMIT}, got {}x{}",
            m.rows, m.cols
        )));
    }
    let mut factors = Vec::new();
    let mut d_prev = BigInt::one();
    for size in 1..=m.rows.min(m.cols) {
        let mut g = BigInt::zero();
        // d_{size-1} divides every size-minor, so the gcd can stop early
        // once it reaches d_prev.
        'scan: for rows_sel in Combinations::new(m.rows, size) {
            for cols_sel in Combinations::new(m.cols, size) {
                let minor = determinant(&m.submatrix(&rows_sel, &cols_sel)?)?;
                g = g.gcd(&minor);
                if g == d_prev {
                    break 'scan;
                }
            }
        }
        if g.is_zero() {
            break;
        }
        factors.push(&g / &d_prev);
        d_prev = g;
    }
    let det_sign = if m.is_square() {
        Some(match determinant(m)?.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        })
    } else {
        None
    };
    Ok(SnfResult::new(factors, det_sign))
}

/// True iff the determinant is +1 or -1.
pub fn is_unimodular(m: &IntMatrix) -> Result<bool> {
    Ok(determinant(m)?.abs().is_one())
}

/// Iterator over k-element index subsets of 0..n, ascending.
struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - (k - i) {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
