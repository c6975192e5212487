//! Turning batch sums into estimates of tour counts.
//!
//! Each replication yields one estimate `sum_c m_c * mean_weight(c)` over the
//! start classes `c` of size `m_c`. The reported point is the mean of the
//! replication estimates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{Alpha, BatchResult};

/// Neumaier's compensated sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantityKind {
    /// Directed open tours, `N`.
    OpenNumberings,
    /// Open tour diagrams, `T = N / 2`.
    OpenDiagrams,
    /// Geometrically distinct open tours, `G = N / 16`.
    OpenGeometric,
    /// Directed open tours whose ends are a knight move apart.
    ClosedNumberings,
    /// Closed tour diagrams, `D`.
    ClosedDiagrams,
    /// Open tours with exactly `k` rule violations, in geometric units when
    /// `geometric` is set and in numberings otherwise.
    ViolationClass { k: u32, geometric: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub kind: QuantityKind,
    pub board_side: usize,
    pub alpha: Alpha,
    pub point: f64,
    /// Standard deviation of a single replication's estimate: the spread
    /// replications are compared by, and the half-width unit of the interval.
    pub std_error: f64,
    /// `std_error / sqrt(replications)`, the uncertainty of `point` itself.
    pub std_error_of_mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples_total: u64,
    pub replications: u32,
    /// Smallest and largest single-replication estimate.
    pub replication_min: f64,
    pub replication_max: f64,
    /// Single-replication standard deviation implied by the within-batch
    /// sample variances; a cross-check on `std_error`.
    pub within_std_error: f64,
}

/// Default width of the confidence interval, in standard errors.
pub const DEFAULT_Z: f64 = 3.0;

pub fn confidence_interval(e: &Estimate, z: f64) -> (f64, f64) {
    (e.point - z * e.std_error, e.point + z * e.std_error)
}

impl Estimate {
    /// Multiplies point, spread and interval by `factor > 0`.
    fn scaled(mut self, factor: f64, kind: QuantityKind) -> Estimate {
        self.kind = kind;
        self.point *= factor;
        self.std_error *= factor;
        self.std_error_of_mean *= factor;
        self.ci_low *= factor;
        self.ci_high *= factor;
        self.replication_min *= factor;
        self.replication_max *= factor;
        self.within_std_error *= factor;
        self
    }
}

fn check_batches(batches: &[BatchResult]) -> Result<()> {
    let first = batches
        .first()
        .ok_or_else(|| Error::InvalidConfig("no batches to estimate from".into()))?;
    for b in batches {
        if b.board_side != first.board_side {
            return Err(Error::MismatchedBatches("board side"));
        }
        if b.alpha != first.alpha {
            return Err(Error::MismatchedBatches("alpha"));
        }
    }
    Ok(())
}

/// Shared estimator. `moments` picks `(sum of weights, sum of squares)` out
/// of a batch.
fn estimate_from(
    batches: &[BatchResult],
    kind: QuantityKind,
    moments: impl Fn(&BatchResult) -> (f64, f64),
) -> Result<Estimate> {
    check_batches(batches)?;
    let mut per_rep: BTreeMap<u32, CompensatedSum> = BTreeMap::new();
    let mut within_var = CompensatedSum::default();
    for b in batches {
        let (sum, sum_sq) = moments(b);
        let m = b.start_class.multiplicity as f64;
        let n = b.samples as f64;
        let mean = sum / n;
        per_rep.entry(b.replication).or_default().add(m * mean);
        let var_mean = ((sum_sq / n - mean * mean) / n).max(0.0);
        within_var.add(m * m * var_mean);
    }
    let reps: Vec<f64> = per_rep.values().map(CompensatedSum::value).collect();
    let r = reps.len() as f64;
    let point = reps.iter().copied().collect::<CompensatedSum>().value() / r;
    // Var(replication estimate) = sum over a replication's batches of
    // m^2 Var(mean weight); averaged over replications.
    let within_std_error = (within_var.value() / r).sqrt();
    let std_error = if reps.len() > 1 {
        let ss: CompensatedSum = reps.iter().map(|x| (x - point) * (x - point)).collect();
        (ss.value() / (r - 1.0)).sqrt()
    } else {
        within_std_error
    };
    let first = &batches[0];
    let mut e = Estimate {
        kind,
        board_side: first.board_side,
        alpha: first.alpha,
        point,
        std_error,
        std_error_of_mean: std_error / r.sqrt(),
        ci_low: 0.0,
        ci_high: 0.0,
        samples_total: batches.iter().map(|b| b.samples).sum(),
        replications: reps.len() as u32,
        replication_min: reps.iter().copied().fold(f64::INFINITY, f64::min),
        replication_max: reps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        within_std_error,
    };
    (e.ci_low, e.ci_high) = confidence_interval(&e, DEFAULT_Z);
    Ok(e)
}

/// Estimate of the directed open tours from the sampled start classes.
pub fn estimate_numberings(batches: &[BatchResult]) -> Result<Estimate> {
    estimate_from(batches, QuantityKind::OpenNumberings, |b| {
        (b.sum_weight, b.sum_weight_sq)
    })
}

pub fn estimate_closed_numberings(batches: &[BatchResult]) -> Result<Estimate> {
    estimate_from(batches, QuantityKind::ClosedNumberings, |b| {
        (b.sum_weight_closed, b.sum_weight_sq_closed)
    })
}

/// A cycle of `side^2` edges opens into `side^2` paths, each walked in two
/// directions.
///
/// Closed numberings from a square do not depend on the square, so batches
/// covering only some start squares are scaled up to the whole board.
pub fn estimate_closed_diagrams(batches: &[BatchResult]) -> Result<Estimate> {
    let e = estimate_closed_numberings(batches)?;
    let covered: BTreeMap<usize, u32> = batches
        .iter()
        .map(|b| (b.class_index, b.start_class.multiplicity))
        .collect();
    let covered = covered.values().sum::<u32>() as f64;
    Ok(e.scaled(1.0 / (2.0 * covered), QuantityKind::ClosedDiagrams))
}

pub fn to_diagrams(n: &Estimate) -> Result<Estimate> {
    expect_numberings(n)?;
    Ok(n.scaled(0.5, QuantityKind::OpenDiagrams))
}

/// `G = N / 16`. Exact on 8x8; elsewhere only if the caller asserts that no
/// tour is fixed by a symmetry or by reversal.
pub fn to_geometric(n: &Estimate, assume_trivial_stabilizer: bool) -> Result<Estimate> {
    expect_numberings(n)?;
    if n.board_side != 8 && !assume_trivial_stabilizer {
        return Err(Error::StabilizerAssumption(n.board_side));
    }
    Ok(n.scaled(1.0 / 16.0, QuantityKind::OpenGeometric))
}

fn expect_numberings(n: &Estimate) -> Result<()> {
    if n.kind != QuantityKind::OpenNumberings {
        return Err(Error::InvalidConfig(format!(
            "expected an open-numberings estimate, got {:?}",
            n.kind
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationHistogramEstimate {
    pub per_k: BTreeMap<u32, Estimate>,
}

impl ViolationHistogramEstimate {
    pub fn total(&self) -> f64 {
        self.per_k
            .values()
            .map(|e| e.point)
            .collect::<CompensatedSum>()
            .value()
    }

    /// Violation count with the largest estimated mass.
    pub fn argmax(&self) -> Option<u32> {
        self.per_k
            .iter()
            .max_by(|a, b| a.1.point.total_cmp(&b.1.point))
            .map(|(k, _)| *k)
    }

    /// Share of the total mass with `k` in `range`.
    pub fn mass_fraction(&self, range: std::ops::RangeInclusive<u32>) -> f64 {
        let inside: CompensatedSum = self
            .per_k
            .range(range)
            .map(|(_, e)| e.point)
            .collect();
        inside.value() / self.total()
    }
}

/// Per violation count `k = 0..=side^2 - 2`, the estimate restricted to
/// completed runs with exactly `k` violations. Geometric units on 8x8 (or
/// when the stabilizer assumption is made), numberings otherwise.
pub fn estimate_violation_histogram(
    batches: &[BatchResult],
    assume_trivial_stabilizer: bool,
) -> Result<ViolationHistogramEstimate> {
    check_batches(batches)?;
    let side = batches[0].board_side;
    let geometric = side == 8 || assume_trivial_stabilizer;
    let factor = if geometric { 1.0 / 16.0 } else { 1.0 };
    let ks = batches[0].sum_weight_by_violations.len();
    let mut per_k = BTreeMap::new();
    for k in 0..ks {
        let kind = QuantityKind::ViolationClass {
            k: k as u32,
            geometric,
        };
        let e = estimate_from(batches, kind, |b| {
            (
                b.sum_weight_by_violations[k],
                b.sum_weight_sq_by_violations[k],
            )
        })?;
        per_k.insert(k as u32, e.scaled(factor, kind));
    }
    Ok(ViolationHistogramEstimate { per_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{Square, StartClass};

    fn batch(rep: u32, class: usize, mult: u32, weights: &[f64]) -> BatchResult {
        let mut by_k = vec![0.0; 24];
        let mut by_k_sq = vec![0.0; 24];
        for (i, w) in weights.iter().enumerate() {
            by_k[i % 3] += w;
            by_k_sq[i % 3] += w * w;
        }
        BatchResult {
            board_side: 5,
            alpha: Alpha::Finite(1.0),
            class_index: class,
            start_class: StartClass {
                representative: Square::new(0, class as u8),
                multiplicity: mult,
            },
            replication: rep,
            samples: weights.len() as u64,
            successes: weights.iter().filter(|w| **w > 0.0).count() as u64,
            closed_successes: 0,
            sum_weight: weights.iter().sum(),
            sum_weight_sq: weights.iter().map(|w| w * w).sum(),
            sum_weight_closed: 0.0,
            sum_weight_sq_closed: 0.0,
            sum_weight_by_violations: by_k,
            sum_weight_sq_by_violations: by_k_sq,
            seed_used: 0,
        }
    }

    #[test]
    fn all_zero_batches_estimate_zero() {
        let bs = vec![batch(0, 0, 4, &[0.0; 10]), batch(1, 0, 4, &[0.0; 10])];
        let e = estimate_numberings(&bs).unwrap();
        assert_eq!(e.point, 0.0);
        assert_eq!(e.std_error, 0.0);
        assert_eq!((e.ci_low, e.ci_high), (0.0, 0.0));
    }

    #[test]
    fn point_is_mean_of_weighted_replications() {
        let bs = vec![
            batch(0, 0, 4, &[1.0, 3.0]),
            batch(0, 1, 8, &[2.0, 2.0]),
            batch(1, 0, 4, &[5.0, 1.0]),
            batch(1, 1, 8, &[0.0, 4.0]),
        ];
        let e = estimate_numberings(&bs).unwrap();
        // rep 0: 4*2 + 8*2 = 24; rep 1: 4*3 + 8*2 = 28.
        assert!((e.point - 26.0).abs() < 1e-12);
        let sd = (8.0f64).sqrt();
        assert!((e.std_error - sd).abs() < 1e-12);
        assert!((e.std_error_of_mean - sd / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!((e.replication_min, e.replication_max), (24.0, 28.0));
        assert!(e.ci_low <= e.point && e.point <= e.ci_high);
    }

    #[test]
    fn single_replication_falls_back_to_within_variance() {
        let e = estimate_numberings(&[batch(0, 0, 1, &[1.0, 3.0])]).unwrap();
        // mean 2, E[w^2] = 5, var of mean = (5 - 4) / 2.
        assert!((e.std_error - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mismatched_batches_are_rejected() {
        let mut other = batch(1, 0, 4, &[1.0]);
        other.alpha = Alpha::Finite(2.0);
        assert!(matches!(
            estimate_numberings(&[batch(0, 0, 4, &[1.0]), other]),
            Err(Error::MismatchedBatches("alpha"))
        ));
        let mut other = batch(1, 0, 4, &[1.0]);
        other.board_side = 6;
        assert!(estimate_numberings(&[batch(0, 0, 4, &[1.0]), other]).is_err());
        assert!(estimate_numberings(&[]).is_err());
    }

    #[test]
    fn geometric_conversion() {
        let mut e = estimate_numberings(&[batch(0, 0, 1, &[1.0, 3.0])]).unwrap();
        assert!(matches!(
            to_geometric(&e, false),
            Err(Error::StabilizerAssumption(5))
        ));
        let g = to_geometric(&e, true).unwrap();
        assert_eq!(g.kind, QuantityKind::OpenGeometric);
        assert_eq!(g.std_error, e.std_error / 16.0);
        e.board_side = 8;
        e.point = 1.9565e16;
        let g = to_geometric(&e, false).unwrap();
        assert!((g.point - 1.2228e15).abs() / 1.2228e15 < 1e-4);
        assert!(to_geometric(&g, true).is_err());
        assert_eq!(to_diagrams(&e).unwrap().point, e.point / 2.0);
    }

    #[test]
    fn interval_examples() {
        let mut e = estimate_numberings(&[batch(0, 0, 1, &[1.0])]).unwrap();
        e.point = 1.222801e15;
        e.std_error = 8.26e11;
        let (lo, hi) = confidence_interval(&e, 3.0);
        assert!((lo - 1.2203e15).abs() < 1e11 && (hi - 1.2253e15).abs() < 1e11);
        assert_eq!(confidence_interval(&e, 0.0), (e.point, e.point));
        e.std_error = 0.0;
        assert_eq!(confidence_interval(&e, 3.0), (e.point, e.point));
    }

    #[test]
    fn histogram_partitions_total() {
        let bs = vec![
            batch(0, 0, 4, &[1.0, 3.0, 7.0, 0.5]),
            batch(1, 0, 4, &[2.0, 0.0, 1.0, 9.0]),
        ];
        let total = estimate_numberings(&bs).unwrap().point;
        let h = estimate_violation_histogram(&bs, false).unwrap();
        assert!((h.total() - total).abs() <= 1e-9 * total);
        assert_eq!(h.per_k.len(), 24);
        assert!((h.mass_fraction(0..=23) - 1.0).abs() < 1e-12);
        let g = estimate_violation_histogram(&bs, true).unwrap();
        assert!((g.total() - total / 16.0).abs() <= 1e-9 * total);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }
}
