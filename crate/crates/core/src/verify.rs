//! Exhaustive sweeps over all non-isomorphic k-trees at desk scale,
//! comparing computed invariants against the closed forms and checking the
//! two matrix-construction routes against each other.
//!
//! Failures are report content, never panics: a sweep always completes and
//! the caller decides what a mismatch means.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distance::{d_distance_matrix, permutation_conjugate, recursive_distance_matrix};
use crate::error::{Error, Result};
use crate::io::matrix_to_text;
use crate::ktree::{generate_all, KTree};
use crate::linalg::{determinant, snf};
use crate::pool::run_parallel;
use crate::theory::{arrow_matrix, predicted_det, predicted_snf, reduce_to_arrow};

fn trace_of(t: &KTree) -> Vec<usize> {
    t.trace().iter().map(|s| s.target()).collect()
}

/// One mismatch against the closed forms, with everything needed to
/// reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremMismatch {
    pub n: usize,
    pub trace: Vec<usize>,
    pub computed_factors: String,
    pub predicted_factors: String,
    pub computed_det: String,
    pub predicted_det: String,
    pub snf_ok: bool,
    pub det_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremLevel {
    pub n: usize,
    pub class_count: usize,
    /// Comparisons happen only when the sweep dimension equals k.
    pub checked: bool,
    pub mismatches: Vec<TheoremMismatch>,
}

/// Per-(k, n) record of computed invariants versus the predicted ones.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub k: usize,
    pub d: usize,
    pub nmax: usize,
    pub levels: Vec<TheoremLevel>,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.levels.iter().all(|l| l.mismatches.is_empty())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "theorem sweep: k={} d={} nmax={}\n",
            self.k, self.d, self.nmax
        ));
        for level in &self.levels {
            let status = if !level.checked {
                "computed (unchecked: d < k)".to_string()
            } else if level.mismatches.is_empty() {
                "PASS".to_string()
            } else {
                format!("FAIL ({} mismatches)", level.mismatches.len())
            };
            out.push_str(&format!(
                "n={:<3} classes={:<6} {}\n",
                level.n, level.class_count, status
            ));
            for m in &level.mismatches {
                out.push_str(&format!(
                    "  trace={:?}\n    snf computed  {}\n    snf predicted {}\n    det computed  {}\n    det predicted {}\n",
                    m.trace, m.computed_factors, m.predicted_factors, m.computed_det, m.predicted_det
                ));
            }
        }
        out.push_str(if self.pass() { "RESULT: PASS\n" } else { "RESULT: FAIL\n" });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Sweeps every isomorphism class of k-trees with k <= n <= nmax, computes
/// the d-distance matrix invariants, and (for d = k) compares them against
/// the closed forms, including the n = k and n = k+1 base cases.
pub fn verify_theorem(k: usize, nmax: usize, d: usize, jobs: usize) -> Result<TheoremReport> {
    if d == 0 || d > k {
        return Err(Error::InvalidArgument(format!(
            "sweep dimension d must satisfy 1 <= d <= k, got d={d} k={k}"
        )));
    }
    if nmax < k + 2 {
        return Err(Error::InvalidArgument(format!(
            "theorem sweep needs nmax >= {}, got {nmax}",
            k + 2
        )));
    }
    let levels = generate_all(k, nmax)?;
    let checked = d == k;
    let mut report_levels = Vec::with_capacity(levels.len());
    for (offset, classes) in levels.iter().enumerate() {
        let n = k + offset;
        let outcomes = run_parallel(jobs, classes, |t| {
            let dist = d_distance_matrix(t.graph(), d)?;
            let result = snf(dist.matrix());
            let det = determinant(dist.matrix())?;
            Ok::<_, Error>((trace_of(t), result, det))
        });
        let mut mismatches = Vec::new();
        if checked {
            let predicted = predicted_snf(k, n)?;
            let predicted_determinant = (n > k).then(|| predicted_det(k, n)).transpose()?;
            for outcome in outcomes {
                let (trace, result, det) = outcome?;
                let snf_ok = result.invariant_factors() == predicted.factors();
                let det_ok = match &predicted_determinant {
                    Some(p) => &det == p,
                    None => true,
                };
                if !(snf_ok && det_ok) {
                    mismatches.push(TheoremMismatch {
                        n,
                        trace,
                        computed_factors: result.factors_line(),
                        predicted_factors: predicted.factors_line(),
                        computed_det: det.to_string(),
                        predicted_det: predicted_determinant
                            .as_ref()
                            .map_or_else(|| "-".into(), |p| p.to_string()),
                        snf_ok,
                        det_ok,
                    });
                }
            }
        } else {
            for outcome in outcomes {
                outcome?;
            }
        }
        report_levels.push(TheoremLevel {
            n,
            class_count: classes.len(),
            checked,
            mismatches,
        });
    }
    Ok(TheoremReport {
        k,
        d,
        nmax,
        levels: report_levels,
    })
}

/// One distinct (invariant factors, determinant) value at a given order,
/// with a witness.
#[derive(Debug, Clone, Serialize)]
pub struct SurveyGroup {
    pub factors: String,
    pub det: String,
    pub class_count: usize,
    pub example_trace: Vec<usize>,
    /// Witness matrix in the shared text format; present when the order
    /// carries more than one distinct value.
    pub example_matrix: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyLevel {
    pub n: usize,
    pub class_count: usize,
    pub constant: bool,
    pub groups: Vec<SurveyGroup>,
}

/// Distinct SNF/determinant values of D^d per order n.
#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub k: usize,
    pub d: usize,
    pub nmax: usize,
    pub constant_for_all_orders: bool,
    pub levels: Vec<SurveyLevel>,
}

impl SurveyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "invariant survey: k={} d={} nmax={}\n",
            self.k, self.d, self.nmax
        ));
        for level in &self.levels {
            out.push_str(&format!(
                "n={:<3} classes={:<6} distinct={} {}\n",
                level.n,
                level.class_count,
                level.groups.len(),
                if level.constant { "constant" } else { "NON-CONSTANT" }
            ));
            for g in &level.groups {
                out.push_str(&format!(
                    "  {} classes: snf=[{}] det={} (e.g. trace={:?})\n",
                    g.class_count, g.factors, g.det, g.example_trace
                ));
                if let Some(m) = &g.example_matrix {
                    for line in m.lines() {
                        out.push_str(&format!("    {line}\n"));
                    }
                }
            }
        }
        out.push_str(&format!(
            "constant for all orders: {}\n",
            self.constant_for_all_orders
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Groups the (SNF, determinant) values of D^d over all k-tree classes per
/// order and flags whether the pair is constant at each order.
pub fn survey_snf(k: usize, d: usize, nmax: usize, jobs: usize) -> Result<SurveyReport> {
    if d == 0 || d > k {
        return Err(Error::InvalidArgument(format!(
            "survey dimension d must satisfy 1 <= d <= k, got d={d} k={k}"
        )));
    }
    if nmax < k {
        return Err(Error::InvalidArgument(format!(
            "survey needs nmax >= k, got nmax={nmax} k={k}"
        )));
    }
    let levels = generate_all(k, nmax)?;
    let mut report_levels = Vec::with_capacity(levels.len());
    let mut all_constant = true;
    for (offset, classes) in levels.iter().enumerate() {
        let n = k + offset;
        let outcomes = run_parallel(jobs, classes, |t| {
            let dist = d_distance_matrix(t.graph(), d)?;
            let result = snf(dist.matrix());
            let det = determinant(dist.matrix())?;
            Ok::<_, Error>((trace_of(t), result.factors_line(), det.to_string(), dist))
        });
        // Group in first-seen order; generation order is deterministic.
        let mut groups: Vec<SurveyGroup> = Vec::new();
        for outcome in outcomes {
            let (trace, factors, det, dist) = outcome?;
            match groups
                .iter_mut()
                .find(|g| g.factors == factors && g.det == det)
            {
                Some(g) => g.class_count += 1,
                None => groups.push(SurveyGroup {
                    factors,
                    det,
                    class_count: 1,
                    example_trace: trace,
                    example_matrix: Some(matrix_to_text(dist.matrix())),
                }),
            }
        }
        let constant = groups.len() <= 1;
        if !constant {
            all_constant = false;
        } else {
            for g in &mut groups {
                g.example_matrix = None;
            }
        }
        report_levels.push(SurveyLevel {
            n,
            class_count: classes.len(),
            constant,
            groups,
        });
    }
    Ok(SurveyReport {
        k,
        d,
        nmax,
        constant_for_all_orders: all_constant,
        levels: report_levels,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceFailure {
    pub n: usize,
    pub trace: Vec<usize>,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceLevel {
    pub n: usize,
    pub class_count: usize,
    /// Number of distinct (SNF, det) values across the order; 1 when the
    /// shared-invariant property holds.
    pub distinct_invariants: usize,
    pub failures: Vec<EquivalenceFailure>,
}

/// Structural checks tying the attachment recursion, the breadth-first
/// route, the arrow-form reduction and relabeling invariance together.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub k: usize,
    pub nmax: usize,
    pub seed: u64,
    pub conjugation_trials: usize,
    pub levels: Vec<EquivalenceLevel>,
}

impl EquivalenceReport {
    pub fn pass(&self) -> bool {
        self.levels
            .iter()
            .all(|l| l.failures.is_empty() && l.distinct_invariants <= 1)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "equivalence sweep: k={} nmax={} seed={} conjugation_trials={}\n",
            self.k, self.nmax, self.seed, self.conjugation_trials
        ));
        for level in &self.levels {
            let ok = level.failures.is_empty() && level.distinct_invariants <= 1;
            out.push_str(&format!(
                "n={:<3} classes={:<6} distinct_invariants={} {}\n",
                level.n,
                level.class_count,
                level.distinct_invariants,
                if ok { "PASS" } else { "FAIL" }
            ));
            for f in &level.failures {
                out.push_str(&format!(
                    "  {} failed for trace={:?}: {}\n",
                    f.check, f.trace, f.detail
                ));
            }
        }
        out.push_str(if self.pass() { "RESULT: PASS\n" } else { "RESULT: FAIL\n" });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Per class: the recursion identity (attachment route equals breadth-first
/// route), the reduction to arrow form with SNF preserved and the exact
/// operation count, and SNF invariance under seeded random relabelings.
/// Per order: all classes carry identical invariants.
pub fn verify_equivalence(
    k: usize,
    nmax: usize,
    jobs: usize,
    seed: u64,
    conjugation_trials: usize,
) -> Result<EquivalenceReport> {
    if nmax < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "equivalence sweep needs nmax >= {}, got {nmax}",
            k + 1
        )));
    }
    let levels = generate_all(k, nmax)?;
    let mut report_levels = Vec::with_capacity(levels.len());
    let mut class_base = 0u64;
    for (offset, classes) in levels.iter().enumerate() {
        let n = k + offset;
        if n < k + 1 {
            report_levels.push(EquivalenceLevel {
                n,
                class_count: classes.len(),
                distinct_invariants: 1,
                failures: Vec::new(),
            });
            continue;
        }
        let indexed: Vec<(u64, &KTree)> = classes
            .iter()
            .enumerate()
            .map(|(i, t)| (class_base + i as u64, t))
            .collect();
        class_base += classes.len() as u64;
        let outcomes = run_parallel(jobs, &indexed, |&(class_id, t)| {
            check_class(k, n, class_id, t, seed, conjugation_trials)
        });
        let mut failures = Vec::new();
        let mut invariants: Vec<(String, String)> = Vec::new();
        for outcome in outcomes {
            let (invariant, mut fails) = outcome?;
            failures.append(&mut fails);
            if !invariants.contains(&invariant) {
                invariants.push(invariant);
            }
        }
        report_levels.push(EquivalenceLevel {
            n,
            class_count: classes.len(),
            distinct_invariants: invariants.len(),
            failures,
        });
    }
    Ok(EquivalenceReport {
        k,
        nmax,
        seed,
        conjugation_trials,
        levels: report_levels,
    })
}

fn check_class(
    k: usize,
    n: usize,
    class_id: u64,
    t: &KTree,
    seed: u64,
    conjugation_trials: usize,
) -> Result<((String, String), Vec<EquivalenceFailure>)> {
    let trace = trace_of(t);
    let mut failures = Vec::new();
    let rec = recursive_distance_matrix(t);
    let bfs = d_distance_matrix(t.graph(), k)?;
    match bfs.reorder_to(t.registry()) {
        Ok(reindexed) if reindexed == rec => {}
        Ok(_) => failures.push(EquivalenceFailure {
            n,
            trace: trace.clone(),
            check: "recursion-identity".into(),
            detail: "attachment recursion and breadth-first search disagree".into(),
        }),
        Err(e) => failures.push(EquivalenceFailure {
            n,
            trace: trace.clone(),
            check: "recursion-identity".into(),
            detail: e.to_string(),
        }),
    }
    let result = snf(rec.matrix());
    let det = determinant(rec.matrix())?;

    if n >= k + 2 {
        match reduce_to_arrow(&rec, t) {
            Ok(reduction) => {
                let arrow = arrow_matrix(k, n)?;
                if reduction.matrix != arrow {
                    failures.push(EquivalenceFailure {
                        n,
                        trace: trace.clone(),
                        check: "arrow-reduction".into(),
                        detail: "reduced matrix differs from the arrow form".into(),
                    });
                }
                let expected_ops = 2 * k * (n - k - 1) + 2 * k;
                if reduction.op_count() != expected_ops {
                    failures.push(EquivalenceFailure {
                        n,
                        trace: trace.clone(),
                        check: "arrow-reduction".into(),
                        detail: format!(
                            "{} operations recorded, expected {expected_ops}",
                            reduction.op_count()
                        ),
                    });
                }
                if snf(&reduction.matrix).invariant_factors() != result.invariant_factors() {
                    failures.push(EquivalenceFailure {
                        n,
                        trace: trace.clone(),
                        check: "arrow-reduction".into(),
                        detail: "reduction changed the invariant factors".into(),
                    });
                }
            }
            Err(e) => failures.push(EquivalenceFailure {
                n,
                trace: trace.clone(),
                check: "arrow-reduction".into(),
                detail: e.to_string(),
            }),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ class_id.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    for _ in 0..conjugation_trials {
        let mut rho: Vec<usize> = (1..=rec.order()).collect();
        rho.shuffle(&mut rng);
        let conjugated = permutation_conjugate(&rec, &rho)?;
        if snf(conjugated.matrix()) != result {
            failures.push(EquivalenceFailure {
                n,
                trace: trace.clone(),
                check: "relabeling-invariance".into(),
                detail: format!("SNF changed under relabeling {rho:?}"),
            });
        }
    }
    let product: BigInt = result.invariant_factors().iter().product();
    if det.abs() != product {
        failures.push(EquivalenceFailure {
            n,
            trace: trace.clone(),
            check: "factor-product".into(),
            detail: "product of invariant factors differs from |det|".into(),
        });
    }
    Ok(((result.factors_line(), det.to_string()), failures))
}
