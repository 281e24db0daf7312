//! Closed forms for the invariants of k-distance matrices of k-trees, the
//! witness matrices behind them, and the elementary-operation reduction to
//! arrow form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::ktree::KTree;
use crate::linalg::{snf, IntMatrix};

/// Predicted invariant factors of the k-distance matrix of any k-tree on n
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedSpectrum {
    pub k: usize,
    pub n: usize,
    factors: Vec<BigInt>,
}

impl PredictedSpectrum {
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn factors_line(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Invariant factors of D^k for a k-tree on n vertices.
///
/// n = k gives the one-entry zero matrix (no factors); n = k+1 gives k ones
/// followed by k; n >= k+2 gives (k-1)(n-k)+2 ones, then n-k-2 copies of
/// k+1, then k(k+1)(n-k).
pub fn predicted_snf(k: usize, n: usize) -> Result<PredictedSpectrum> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if n < k {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is below the smallest k-tree order {k}"
        )));
    }
    let mut factors = Vec::new();
    if n == k {
        // one-entry zero matrix
    } else if n == k + 1 {
        factors.extend(std::iter::repeat_n(BigInt::one(), k));
        factors.push(BigInt::from(k));
    } else {
        let ones = (k - 1) * (n - k) + 2;
        factors.extend(std::iter::repeat_n(BigInt::one(), ones));
        factors.extend(std::iter::repeat_n(BigInt::from(k + 1), n - k - 2));
        factors.push(BigInt::from(k * (k + 1) * (n - k)));
    }
    Ok(PredictedSpectrum { k, n, factors })
}

/// Determinant of D^k for a k-tree on n >= k+1 vertices:
/// (-1)^(k(n-k)) * k * (k+1)^(n-k-1) * (n-k).
pub fn predicted_det(k: usize, n: usize) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if n < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "determinant prediction needs n >= {}, got {n}",
            k + 1
        )));
    }
    let magnitude =
        BigInt::from(k) * BigInt::from(k + 1).pow((n - k - 1) as u32) * BigInt::from(n - k);
    Ok(if (k * (n - k)) % 2 == 1 {
        -magnitude
    } else {
        magnitude
    })
}

/// The k-by-k block with -2 on the diagonal and -1 elsewhere; k = 1 gives
/// the scalar [-2].
pub fn mk_matrix(k: usize) -> Result<IntMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    IntMatrix::from_fn(k, k, |i, j| {
        if i == j {
            BigInt::from(-2)
        } else {
            BigInt::from(-1)
        }
    })
}

/// Invariant factors of [`mk_matrix`]: k-1 ones followed by k+1.
pub fn mk_snf(k: usize) -> Result<Vec<BigInt>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut factors: Vec<BigInt> = std::iter::repeat_n(BigInt::one(), k - 1).collect();
    factors.push(BigInt::from(k + 1));
    Ok(factors)
}

/// The unimodular witnesses that diagonalize [`mk_matrix`] for k >= 2:
/// P * M_k * Q = diag(1, ..., 1, k+1), det(P) = 1, det(Q) = (-1)^k.
pub fn pm_qm_matrices(k: usize) -> Result<(IntMatrix, IntMatrix)> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "the witness pair is defined for k >= 2".into(),
        ));
    }
    let p = IntMatrix::from_fn(k, k, |i, j| {
        if i == k - 1 {
            if j == k - 1 {
                BigInt::one()
            } else {
                BigInt::from(-(k as i64))
            }
        } else if i == j {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })?;
    let q = IntMatrix::from_fn(k, k, |i, j| {
        if i == k - 1 {
            if j == k - 1 {
                BigInt::from(-(k as i64))
            } else {
                BigInt::from(-((k as i64) - 1))
            }
        } else if i == j && j != k - 1 {
            BigInt::zero()
        } else {
            BigInt::one()
        }
    })?;
    Ok((p, q))
}

/// The order-(m+1) matrix with `c` in the corner, `b` along the border and
/// `a` on the remaining diagonal.
pub fn bordered_matrix(a: i64, b: i64, c: i64, m: usize) -> Result<IntMatrix> {
    if m < 2 {
        return Err(Error::InvalidArgument("m must be at least 2".into()));
    }
    IntMatrix::from_fn(m + 1, m + 1, |i, j| {
        if i == 0 && j == 0 {
            BigInt::from(c)
        } else if i == 0 || j == 0 {
            BigInt::from(b)
        } else if i == j {
            BigInt::from(a)
        } else {
            BigInt::zero()
        }
    })
}

/// Closed-form invariant factors of [`bordered_matrix`] for a != 0:
/// (g1, g2/g1, a, ..., a, |a(ac - m b^2)| / g2) with g1 = gcd(a, b, c) and
/// g2 = gcd(a^2, b^2, ca, ba), normalized into a divisibility chain.
///
/// A singular border (ac = m b^2) falls back to the elimination engine and
/// reports the reduced rank.
pub fn bordered_snf(a: i64, b: i64, c: i64, m: usize) -> Result<Vec<BigInt>> {
    if a == 0 {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    if m < 2 {
        return Err(Error::InvalidArgument("m must be at least 2".into()));
    }
    let (a_big, b_big, c_big) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let pivot = &a_big * &c_big - BigInt::from(m as i64) * &b_big * &b_big;
    if pivot.is_zero() {
        let r = snf(&bordered_matrix(a, b, c, m)?);
        return Ok(r.invariant_factors().to_vec());
    }
    let g1 = a_big.gcd(&b_big).gcd(&c_big);
    let g2 = (&a_big * &a_big)
        .gcd(&(&b_big * &b_big))
        .gcd(&(&c_big * &a_big))
        .gcd(&(&b_big * &a_big));
    let last = (&a_big * &pivot).abs() / &g2;
    let mut factors = vec![g1.clone(), &g2 / &g1];
    factors.extend(std::iter::repeat_n(a_big.abs(), m - 2));
    factors.push(last);
    Ok(chain_normalize(factors))
}

fn chain_normalize(mut factors: Vec<BigInt>) -> Vec<BigInt> {
    let len = factors.len();
    loop {
        let mut changed = false;
        for i in 0..len {
            for j in i + 1..len {
                if !(&factors[j] % &factors[i]).is_zero() {
                    let g = factors[i].gcd(&factors[j]);
                    let l = &factors[i] / &g * &factors[j];
                    factors[i] = g;
                    factors[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            return factors;
        }
    }
}

/// The order k(n-k)+1 matrix with a zero corner, all-ones border, and n-k
/// diagonal copies of [`mk_matrix`]. Its invariant factors equal
/// [`predicted_snf`] of (k, n).
pub fn arrow_matrix(k: usize, n: usize) -> Result<IntMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if n < k + 2 {
        return Err(Error::InvalidArgument(format!(
            "arrow form needs n >= {}, got {n}",
            k + 2
        )));
    }
    let order = k * (n - k) + 1;
    IntMatrix::from_fn(order, order, |i, j| {
        if i == 0 && j == 0 {
            BigInt::zero()
        } else if i == 0 || j == 0 {
            BigInt::one()
        } else if (i - 1) / k == (j - 1) / k {
            if i == j {
                BigInt::from(-2)
            } else {
                BigInt::from(-1)
            }
        } else {
            BigInt::zero()
        }
    })
}

/// One recorded elementary operation; every operation used by
/// [`reduce_to_arrow`] adds a -1 multiple of one row/column to another, so
/// each has determinant 1. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryOp {
    AddRowMultiple { src: usize, dst: usize, factor: i64 },
    AddColMultiple { src: usize, dst: usize, factor: i64 },
}

impl ElementaryOp {
    pub fn apply(&self, m: &mut IntMatrix) {
        match *self {
            ElementaryOp::AddRowMultiple { src, dst, factor } => {
                m.add_row_multiple(src, dst, &BigInt::from(factor))
            }
            ElementaryOp::AddColMultiple { src, dst, factor } => {
                m.add_col_multiple(src, dst, &BigInt::from(factor))
            }
        }
    }
}

/// Result of the trace-backwards reduction: the arrow-form matrix together
/// with the recorded unimodular operations that produced it.
#[derive(Debug, Clone)]
pub struct ArrowReduction {
    pub matrix: IntMatrix,
    pub ops: Vec<ElementaryOp>,
}

impl ArrowReduction {
    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    /// Replays the recorded operations on `start`; the result must equal
    /// the reduced matrix.
    pub fn replay(&self, start: &IntMatrix) -> IntMatrix {
        let mut m = start.clone();
        for op in &self.ops {
            op.apply(&mut m);
        }
        m
    }
}

/// Replays the construction trace backwards on D^k(t): for each attachment,
/// the target clique's column and row are subtracted from the k newest
/// columns and rows; finally the first row and column are subtracted from
/// rows and columns 2..k+1. Uses 2k(n-k-1) + 2k operations and lands
/// exactly on [`arrow_matrix`].
pub fn reduce_to_arrow(d: &DistanceMatrix, t: &KTree) -> Result<ArrowReduction> {
    let k = t.k();
    let n = t.vertex_count();
    if n < k + 2 {
        return Err(Error::InvalidArgument(format!(
            "reduction needs n >= {}, got {n}",
            k + 2
        )));
    }
    if d.order() != t.registry_size() {
        return Err(Error::ContractViolation(format!(
            "matrix order {} does not match registry size {}",
            d.order(),
            t.registry_size()
        )));
    }
    if d.labels() != t.registry() {
        return Err(Error::ContractViolation(
            "matrix is not indexed by the registry of this k-tree".into(),
        ));
    }
    let mut m = d.matrix().clone();
    let mut ops = Vec::with_capacity(2 * k * (n - k));
    let mut frontier = d.order();
    for step in t.trace().iter().rev() {
        let i = step.target() - 1;
        for r in frontier - k..frontier {
            if !m.get(r, i).is_one() {
                return Err(Error::ContractViolation(format!(
                    "entry ({r}, {i}) should be 1 before reduction; matrix does not \
                     match the trace"
                )));
            }
        }
        for col in frontier - k..frontier {
            m.add_col_multiple(i, col, &BigInt::from(-1));
            ops.push(ElementaryOp::AddColMultiple {
                src: i,
                dst: col,
                factor: -1,
            });
        }
        for row in frontier - k..frontier {
            m.add_row_multiple(i, row, &BigInt::from(-1));
            ops.push(ElementaryOp::AddRowMultiple {
                src: i,
                dst: row,
                factor: -1,
            });
        }
        frontier -= k;
    }
    for row in 1..=k {
        m.add_row_multiple(0, row, &BigInt::from(-1));
        ops.push(ElementaryOp::AddRowMultiple {
            src: 0,
            dst: row,
            factor: -1,
        });
    }
    for col in 1..=k {
        m.add_col_multiple(0, col, &BigInt::from(-1));
        ops.push(ElementaryOp::AddColMultiple {
            src: 0,
            dst: col,
            factor: -1,
        });
    }
    Ok(ArrowReduction { matrix: m, ops })
}
