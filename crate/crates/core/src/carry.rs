//! Carry histograms of binary addition and the Tu-Deng statistic.
//!
//! For an instance (t, k) with 0 <= t < 2^k, the histogram counts, over
//! a in {0,..,t}, the weight change w(a + (2^k-1-t)) - w(a). Everything else
//! in this module is assembled from these histograms: the symmetrized
//! distribution over the carry-wrapping addition, the pair-set sizes
//! |S_{t,k}| behind the Tu-Deng inequality, and the exhaustive per-level
//! verification sweep.
//!
//! Two independent routes are kept side by side: definitional enumeration
//! (`beta_bruteforce`, `s_size_pair_oracle`, `circ_count_oracle`) and the
//! level-doubling recurrences (`LevelTables`), which build level k+1 from
//! level k in O(2^k * k) words.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use std::time::Instant;

use crate::budget::MemoryBudget;
use crate::digits::{hamming_weight, DigitContext};
use crate::error::{Error, Result};

/// Histogram of weight changes j -> count with support inside [-k, k].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaHistogram {
    k: u32,
    counts: Vec<u64>, // index j + k
}

impl DeltaHistogram {
    pub fn zeroed(k: u32) -> Self {
        DeltaHistogram {
            k,
            counts: vec![0; 2 * k as usize + 1],
        }
    }

    pub fn from_counts(k: u32, counts: Vec<u64>) -> Self {
        assert_eq!(counts.len(), 2 * k as usize + 1);
        DeltaHistogram { k, counts }
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Count at weight change j; zero outside [-k, k].
    #[inline]
    pub fn get(&self, j: i64) -> u64 {
        let idx = j + self.k as i64;
        if idx < 0 || idx as usize >= self.counts.len() {
            0
        } else {
            self.counts[idx as usize]
        }
    }

    #[inline]
    pub fn slots(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_mass(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum of counts at j >= j_min.
    pub fn upper_tail(&self, j_min: i64) -> u64 {
        (j_min..=self.k as i64).map(|j| self.get(j)).sum()
    }

    /// Sum of counts at j <= j_max.
    pub fn lower_tail(&self, j_max: i64) -> u64 {
        (-(self.k as i64)..=j_max).map(|j| self.get(j)).sum()
    }

    /// Nonzero entries as (j, count), ascending in j.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        let k = self.k as i64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (i as i64 - k, c))
    }
}

/// Histogram of w(a + 2^k-1-t) - w(a) over a in {0,..,t}, by enumeration.
///
/// This is the definitional oracle for the level tables; total mass is t+1.
pub fn beta_bruteforce(t: u64, k: u32) -> Result<DeltaHistogram> {
    let ctx = DigitContext::new(t, k)?;
    let comp = ctx.complement();
    let mut hist = DeltaHistogram::zeroed(k);
    for a in 0..=t {
        let j = hamming_weight(a + comp) as i64 - hamming_weight(a) as i64;
        hist.counts[(j + k as i64) as usize] += 1;
    }
    Ok(hist)
}

/// Both histogram families at a fixed level k: row t holds the histogram for
/// t, and the complemented family holds the histogram for 2^k-1-t. The four
/// doubling rules couple the two families, so both are carried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTables {
    k: u32,
    stride: usize,
    direct: Vec<u64>,
    complemented: Vec<u64>,
}

impl LevelTables {
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn rows(&self) -> u64 {
        1u64 << self.k
    }

    #[inline]
    pub fn beta_row(&self, t: u64) -> &[u64] {
        let s = self.stride;
        &self.direct[t as usize * s..(t as usize + 1) * s]
    }

    #[inline]
    pub fn beta_comp_row(&self, t: u64) -> &[u64] {
        let s = self.stride;
        &self.complemented[t as usize * s..(t as usize + 1) * s]
    }

    /// Count of weight change j in the histogram for t.
    #[inline]
    pub fn beta(&self, t: u64, j: i64) -> u64 {
        let idx = j + self.k as i64;
        if idx < 0 || idx >= self.stride as i64 {
            0
        } else {
            self.beta_row(t)[idx as usize]
        }
    }

    /// Count of weight change j in the histogram for 2^k-1-t.
    #[inline]
    pub fn beta_comp(&self, t: u64, j: i64) -> u64 {
        let idx = j + self.k as i64;
        if idx < 0 || idx >= self.stride as i64 {
            0
        } else {
            self.beta_comp_row(t)[idx as usize]
        }
    }

    pub fn beta_histogram(&self, t: u64) -> DeltaHistogram {
        DeltaHistogram::from_counts(self.k, self.beta_row(t).to_vec())
    }

    pub fn beta_comp_histogram(&self, t: u64) -> DeltaHistogram {
        DeltaHistogram::from_counts(self.k, self.beta_comp_row(t).to_vec())
    }

    /// |S_{t,k}| assembled from the tables: the strictly-positive tail of the
    /// histogram for t plus the strictly-negative tail of the histogram for
    /// its complement.
    pub fn tu_deng_count(&self, t: u64) -> u64 {
        let k = self.k as usize;
        let row = self.beta_row(t);
        let comp = self.beta_comp_row(t);
        let pos: u64 = row[k + 1..].iter().sum();
        let neg: u64 = comp[..k].iter().sum();
        pos + neg
    }

    /// Level 0: a single instance t = 0 whose histogram is a point mass at 0.
    pub fn base() -> LevelTables {
        LevelTables {
            k: 0,
            stride: 1,
            direct: vec![1],
            complemented: vec![1],
        }
    }

    /// Builds level k+1 from level k by the doubling rules; each output row
    /// reads at most two rows of the previous level, so the fill is
    /// parallelized over rows with a deterministic result.
    pub fn next_level(&self, budget: &MemoryBudget) -> Result<LevelTables> {
        let k1 = self.k + 1;
        budget.check_level(k1)?;
        let s0 = self.stride;
        let s1 = s0 + 2;
        let rows1 = 1usize << k1;

        let mut direct = vec![0u64; rows1 * s1];
        let mut complemented = vec![0u64; rows1 * s1];

        direct
            .par_chunks_mut(s1)
            .enumerate()
            .for_each(|(tp, out)| {
                let t = (tp / 2) as u64;
                if tp % 2 == 1 {
                    // odd index doubles the histogram in place
                    let prev = self.beta_row(t);
                    for i in 0..s0 {
                        out[i + 1] = 2 * prev[i];
                    }
                } else {
                    // even index shifts t up by one and t-1 down by one
                    let prev = self.beta_row(t);
                    for i in 0..s0 {
                        out[i + 2] = prev[i];
                    }
                    if t > 0 {
                        let prev_m1 = self.beta_row(t - 1);
                        for i in 0..s0 {
                            out[i] += prev_m1[i];
                        }
                    }
                }
            });

        let top = (1u64 << self.k) - 1;
        complemented
            .par_chunks_mut(s1)
            .enumerate()
            .for_each(|(tp, out)| {
                let t = (tp / 2) as u64;
                if tp % 2 == 0 {
                    let prev = self.beta_comp_row(t);
                    for i in 0..s0 {
                        out[i + 1] = 2 * prev[i];
                    }
                } else {
                    // t+1 row vanishes past the top of the level
                    let prev = self.beta_comp_row(t);
                    for i in 0..s0 {
                        out[i + 2] = prev[i];
                    }
                    if t < top {
                        let prev_p1 = self.beta_comp_row(t + 1);
                        for i in 0..s0 {
                            out[i] += prev_p1[i];
                        }
                    }
                }
            });

        Ok(LevelTables {
            k: k1,
            stride: s1,
            direct,
            complemented,
        })
    }
}

/// All levels 0..=k_max, each checked against the memory budget.
pub fn levels_dp(k_max: u32, budget: &MemoryBudget) -> Result<Vec<LevelTables>> {
    let mut levels = Vec::with_capacity(k_max as usize + 1);
    levels.push(LevelTables::base());
    for _ in 0..k_max {
        let next = levels.last().unwrap().next_level(budget)?;
        levels.push(next);
    }
    Ok(levels)
}

/// Streams levels 0..=k_max keeping only one level resident, calling `visit`
/// on each.
pub fn for_each_level(
    k_max: u32,
    budget: &MemoryBudget,
    mut visit: impl FnMut(&LevelTables) -> Result<()>,
) -> Result<()> {
    let mut current = LevelTables::base();
    visit(&current)?;
    for _ in 0..k_max {
        current = current.next_level(budget)?;
        visit(&current)?;
    }
    Ok(())
}

/// Builds just level k (earlier levels are dropped as the build streams up).
pub fn level_at(k: u32, budget: &MemoryBudget) -> Result<LevelTables> {
    let mut current = LevelTables::base();
    for _ in 0..k {
        current = current.next_level(budget)?;
    }
    Ok(current)
}

/// One Tu-Deng instance assembled from level tables: symmetrized histogram,
/// its strictly-positive tail, and the statistic P = tail / 2^k.
#[derive(Debug, Clone, PartialEq)]
pub struct TuDengInstance {
    pub context: DigitContext,
    /// gamma[j] = beta(t, j) + beta(2^k-1-t, -j)
    pub gamma: DeltaHistogram,
    /// Sum of gamma over j >= 1; equals |S_{t,k}| on the conjecture range.
    pub gamma_tail1: u64,
    /// Exact statistic gamma_tail1 / 2^k.
    pub p: BigRational,
}

pub fn tu_deng_instance(t: u64, k: u32, tables: &LevelTables) -> Result<TuDengInstance> {
    let context = DigitContext::new(t, k)?;
    if tables.k() != k {
        return Err(Error::LevelMismatch {
            table_k: tables.k(),
            requested_k: k,
        });
    }
    let mut gamma = DeltaHistogram::zeroed(k);
    for j in -(k as i64)..=k as i64 {
        gamma.counts[(j + k as i64) as usize] = tables.beta(t, j) + tables.beta_comp(t, -j);
    }
    let gamma_tail1 = gamma.upper_tail(1);
    debug_assert_eq!(gamma_tail1, tables.tu_deng_count(t));
    let p = BigRational::new(BigInt::from(gamma_tail1), BigInt::one() << k);
    Ok(TuDengInstance {
        context,
        gamma,
        gamma_tail1,
        p,
    })
}

/// |S_{t,k}| by pair enumeration: pairs (a, b) in {0,..,2^k-2}^2 with
/// a + b = t mod 2^k-1 and w(a) + w(b) < k. For each a the partner is
/// unique, so the loop is O(2^k).
pub fn s_size_pair_oracle(t: u64, k: u32) -> Result<u64> {
    DigitContext::new(t, k)?;
    let modulus = (1u64 << k) - 1;
    if modulus == 1 {
        // k = 1: only the pair (0, 0)
        return Ok(if t % modulus == 0 { 1 } else { 0 });
    }
    let target = t % modulus;
    let mut count = 0u64;
    for a in 0..modulus {
        let b = (target + modulus - a % modulus) % modulus;
        if hamming_weight(a) + hamming_weight(b) < k {
            count += 1;
        }
    }
    Ok(count)
}

/// |{a < 2^k : w(a circ+ t) < w(a)}|; equal to the pair count on the
/// conjecture range 1 <= t <= 2^k-2.
pub fn circ_count_oracle(t: u64, k: u32) -> Result<u64> {
    DigitContext::new(t, k)?;
    if t == 0 || t == (1u64 << k) - 1 {
        return Err(Error::TRangeRejected {
            t,
            requirement: "circular count needs 1 <= t <= 2^k-2",
        });
    }
    let modulus = (1u64 << k) - 1;
    let mut count = 0u64;
    for a in 0..1u64 << k {
        let sum = (a % modulus + t) % modulus;
        if hamming_weight(sum) < hamming_weight(a) {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of entries in row n of Pascal's triangle with 2-valuation exactly
/// j, via the carry identity nu2(C(n, i)) = w(i) + w(n-i) - w(n); no
/// binomials are materialized.
pub fn theta(j: u64, n: u64) -> u64 {
    let wn = hamming_weight(n) as u64;
    let mut count = 0u64;
    for i in 0..=n {
        let v = hamming_weight(i) as u64 + hamming_weight(n - i) as u64 - wn;
        if v == j {
            count += 1;
        }
    }
    count
}

/// Per-level summary of the exhaustive sweep over t in {1,..,2^k-2}.
#[derive(Debug, Clone, PartialEq)]
pub struct TuDengKReport {
    pub k: u32,
    pub epsilon: f64,
    /// Instances with P > 1/2; a nonzero value is a counterexample.
    pub violations: u64,
    pub max_gamma: u64,
    pub max_p: BigRational,
    /// Smallest t attaining max_p.
    pub argmax_t: u64,
    /// Count with P strictly inside (1/2 - epsilon, 1/2).
    pub window_inside: u64,
    pub window_outside: u64,
    /// window_outside * k / 2^k, the Chebyshev-side trend quantity.
    pub normalized_outside: f64,
    /// Sum of |S_{t,k}| over the swept range (first-moment summary).
    pub sum_gamma: u128,
    pub mean_p: BigRational,
    pub wall_time_ms: u128,
}

#[derive(Clone, Copy)]
struct Scan {
    violations: u64,
    inside: u64,
    max_gamma: u64,
    argmax_t: u64,
    sum_gamma: u128,
}

impl Scan {
    fn empty() -> Scan {
        Scan {
            violations: 0,
            inside: 0,
            max_gamma: 0,
            argmax_t: u64::MAX,
            sum_gamma: 0,
        }
    }

    fn merge(self, other: Scan) -> Scan {
        let (max_gamma, argmax_t) = match self.max_gamma.cmp(&other.max_gamma) {
            std::cmp::Ordering::Greater => (self.max_gamma, self.argmax_t),
            std::cmp::Ordering::Less => (other.max_gamma, other.argmax_t),
            std::cmp::Ordering::Equal => (self.max_gamma, self.argmax_t.min(other.argmax_t)),
        };
        Scan {
            violations: self.violations + other.violations,
            inside: self.inside + other.inside,
            max_gamma,
            argmax_t,
            sum_gamma: self.sum_gamma + other.sum_gamma,
        }
    }
}

/// Smallest integer g with g / 2^k > 1/2 - epsilon, computed exactly from
/// the binary value of epsilon.
fn inside_window_floor(k: u32, epsilon: f64) -> Result<BigInt> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let eps = BigRational::from_float(epsilon).ok_or(Error::EpsilonOutOfRange(epsilon))?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let bound = (half - eps) * BigRational::from_integer(BigInt::one() << k);
    Ok(bound.floor().to_integer() + 1)
}

/// Sweeps every t in {1,..,2^k-2} at level k and summarizes the statistic.
pub fn scan_level(tables: &LevelTables, epsilon: f64) -> Result<TuDengKReport> {
    let start = Instant::now();
    let k = tables.k();
    if k < 2 {
        return Err(Error::KOutOfRange {
            k,
            reason: "the sweep needs k >= 2",
        });
    }
    let half_count = 1u64 << (k - 1);
    let gamma_min_inside = inside_window_floor(k, epsilon)?;
    // the window floor fits u64 whenever it is reachable at all
    let gamma_min_inside_u64 = gamma_min_inside.to_u64().unwrap_or(u64::MAX);

    let top = (1u64 << k) - 1;
    let scan = (1..top)
        .into_par_iter()
        .fold(Scan::empty, |acc, t| {
            let gamma = tables.tu_deng_count(t);
            let mut next = acc;
            next.sum_gamma += gamma as u128;
            if gamma > half_count {
                next.violations += 1;
            }
            if gamma < half_count && gamma >= gamma_min_inside_u64 {
                next.inside += 1;
            }
            match gamma.cmp(&next.max_gamma) {
                std::cmp::Ordering::Greater => {
                    next.max_gamma = gamma;
                    next.argmax_t = t;
                }
                std::cmp::Ordering::Equal => next.argmax_t = next.argmax_t.min(t),
                std::cmp::Ordering::Less => {}
            }
            next
        })
        .reduce(Scan::empty, Scan::merge);

    let total = top - 1; // |{1,..,2^k-2}|
    let outside = total - scan.inside;
    let pow2k = BigInt::one() << k;
    let max_p = BigRational::new(BigInt::from(scan.max_gamma), pow2k.clone());
    let mean_p = BigRational::new(
        BigInt::from(scan.sum_gamma),
        BigInt::from(total) * pow2k,
    );
    Ok(TuDengKReport {
        k,
        epsilon,
        violations: scan.violations,
        max_gamma: scan.max_gamma,
        max_p,
        argmax_t: scan.argmax_t,
        window_inside: scan.inside,
        window_outside: outside,
        normalized_outside: outside as f64 * k as f64 / (1u64 << k) as f64,
        sum_gamma: scan.sum_gamma,
        mean_p,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

/// Builds level k and sweeps it.
pub fn verify_tu_deng(k: u32, epsilon: f64, budget: &MemoryBudget) -> Result<TuDengKReport> {
    let reports = verify_tu_deng_range(k, k, epsilon, budget)?;
    Ok(reports.into_iter().next().unwrap())
}

/// One streaming pass producing a report for every k in k_min..=k_max.
pub fn verify_tu_deng_range(
    k_min: u32,
    k_max: u32,
    epsilon: f64,
    budget: &MemoryBudget,
) -> Result<Vec<TuDengKReport>> {
    if k_min < 2 || k_min > k_max {
        return Err(Error::KOutOfRange {
            k: k_min,
            reason: "need 2 <= k_min <= k_max",
        });
    }
    inside_window_floor(k_min, epsilon)?; // reject bad epsilon before building
    let mut reports = Vec::with_capacity((k_max - k_min + 1) as usize);
    for_each_level(k_max, budget, |tables| {
        if tables.k() >= k_min {
            reports.push(scan_level(tables, epsilon)?);
        }
        Ok(())
    })?;
    Ok(reports)
}

/// Sum of |S_{t,k}| over t in {1,..,2^k-2} in closed form,
/// (2^{2k} - C(2k, k))/2 - 1.
pub fn s_size_total_closed_form(k: u32) -> BigInt {
    let four_k = BigInt::one() << (2 * k);
    let central = crate::moments::central_binomial(k as u64);
    (four_k - central) / 2 - 1
}

/// True when the histogram for (t, k) has its whole mass at j >= 1, which
/// happens once k >= 2k' for t < 2^{k'} - 1 (the low half no longer touches
/// the run of ones at the top of the complement).
pub fn saturated_mass(tables: &LevelTables, t: u64) -> bool {
    let k = tables.k() as usize;
    let row = tables.beta_row(t);
    let pos: u64 = row[k + 1..].iter().sum();
    pos == t + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::bit_complement;
    use num_traits::FromPrimitive;

    fn budget() -> MemoryBudget {
        MemoryBudget::default()
    }

    #[test]
    fn bruteforce_point_masses() {
        for k in 1..=8u32 {
            let h0 = beta_bruteforce(0, k).unwrap();
            assert_eq!(h0.get(k as i64), 1);
            assert_eq!(h0.total_mass(), 1);
            let top = (1u64 << k) - 1;
            let htop = beta_bruteforce(top, k).unwrap();
            assert_eq!(htop.get(0), 1u64 << k);
            assert_eq!(htop.total_mass(), 1u64 << k);
        }
    }

    #[test]
    fn bruteforce_small_example() {
        // (2, 2): enumerate a in {0,1,2}, complement = 1
        let h = beta_bruteforce(2, 2).unwrap();
        assert_eq!(h.get(1), 2);
        assert_eq!(h.get(0), 1);
        assert_eq!(h.total_mass(), 3);
        assert!(beta_bruteforce(4, 2).is_err());
    }

    #[test]
    fn base_level_shape() {
        let base = LevelTables::base();
        assert_eq!(base.k(), 0);
        assert_eq!(base.beta(0, 0), 1);
        assert_eq!(base.beta_comp(0, 0), 1);
    }

    #[test]
    fn levels_match_bruteforce_and_mass() {
        let levels = levels_dp(8, &budget()).unwrap();
        for tables in &levels {
            let k = tables.k();
            for t in 0..tables.rows() {
                if k >= 1 {
                    assert_eq!(
                        tables.beta_histogram(t),
                        beta_bruteforce(t, k).unwrap(),
                        "direct mismatch at t={t} k={k}"
                    );
                    let comp = bit_complement(t, k).unwrap();
                    assert_eq!(
                        tables.beta_comp_histogram(t),
                        beta_bruteforce(comp, k).unwrap(),
                        "complement mismatch at t={t} k={k}"
                    );
                }
                assert_eq!(tables.beta_histogram(t).total_mass(), t + 1);
            }
            // top row of the level is all mass at zero
            if k >= 1 {
                let top = tables.rows() - 1;
                assert_eq!(tables.beta(top, 0), 1u64 << k);
            }
        }
    }

    #[test]
    fn budget_error_surfaces() {
        let tiny = MemoryBudget::new(64);
        match levels_dp(8, &tiny) {
            Err(Error::MemoryBudget { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn tu_deng_small_instances() {
        let tables = level_at(2, &budget()).unwrap();
        let i1 = tu_deng_instance(1, 2, &tables).unwrap();
        assert_eq!(i1.gamma_tail1, 2);
        assert_eq!(i1.p, BigRational::from_f64(0.5).unwrap());
        let i2 = tu_deng_instance(2, 2, &tables).unwrap();
        assert_eq!(i2.gamma_tail1, 2);
        // t = 0 has tail 1 and P = 2^-k at every level
        for k in 1..=8u32 {
            let tables = level_at(k, &budget()).unwrap();
            let inst = tu_deng_instance(0, k, &tables).unwrap();
            assert_eq!(inst.gamma_tail1, 1);
            assert_eq!(
                inst.p,
                BigRational::new(BigInt::one(), BigInt::one() << k)
            );
            // the top instance carries tail 0 under the histogram convention
            let top = tu_deng_instance((1 << k) - 1, k, &tables).unwrap();
            assert_eq!(top.gamma_tail1, 0);
        }
        assert!(matches!(
            tu_deng_instance(1, 3, &tables),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn pair_oracle_examples() {
        assert_eq!(s_size_pair_oracle(1, 2).unwrap(), 2);
        for k in 1..=10 {
            assert_eq!(s_size_pair_oracle(0, k).unwrap(), 1);
            assert_eq!(s_size_pair_oracle((1 << k) - 1, k).unwrap(), 1);
        }
        assert!(s_size_pair_oracle(4, 2).is_err());
    }

    #[test]
    fn pair_oracle_total_matches_closed_form() {
        for k in 2..=8u32 {
            let total: u64 = (1..(1u64 << k) - 1)
                .map(|t| s_size_pair_oracle(t, k).unwrap())
                .sum();
            assert_eq!(BigInt::from(total), s_size_total_closed_form(k));
        }
    }

    #[test]
    fn circ_oracle_agrees_with_pairs() {
        for k in 2..=8u32 {
            for t in 1..(1u64 << k) - 1 {
                let pair = s_size_pair_oracle(t, k).unwrap();
                let circ = circ_count_oracle(t, k).unwrap();
                assert_eq!(pair, circ, "mismatch at t={t} k={k}");
                // the equivalent reformulation counts the complement side
                let keep = (0..1u64 << k)
                    .filter(|&a| {
                        let s = (a % ((1 << k) - 1) + t) % ((1 << k) - 1);
                        hamming_weight(s) >= hamming_weight(a)
                    })
                    .count() as u64;
                assert_eq!(keep + circ, 1 << k);
            }
        }
        assert!(circ_count_oracle(0, 4).is_err());
        assert!(circ_count_oracle(15, 4).is_err());
    }

    #[test]
    fn tables_tail_equals_oracles() {
        let levels = levels_dp(8, &budget()).unwrap();
        for tables in levels.iter().filter(|l| l.k() >= 2) {
            for t in 1..tables.rows() - 1 {
                assert_eq!(
                    tables.tu_deng_count(t),
                    s_size_pair_oracle(t, tables.k()).unwrap()
                );
            }
        }
    }

    #[test]
    fn theta_examples_and_identity() {
        assert_eq!(theta(0, 2), 2);
        for m in 0..=6u32 {
            assert_eq!(theta(0, (1 << m) - 1), 1 << m);
        }
        // beta(t, k, k - w(t) - j) = theta(j, t) with k = bitlen(t)
        for t in 0..64u64 {
            let k = (64 - t.leading_zeros()).max(1);
            let hist = beta_bruteforce(t, k).unwrap();
            let wt = hamming_weight(t) as i64;
            let mut mass = 0u64;
            for j in 0..=k as u64 + 1 {
                let expected = theta(j, t);
                assert_eq!(hist.get(k as i64 - wt - j as i64), expected);
                mass += expected;
            }
            assert_eq!(mass, t + 1);
        }
    }

    #[test]
    fn saturation_for_wide_levels() {
        for kp in 1..=4u32 {
            let k = 2 * kp + 1;
            let tables = level_at(k, &budget()).unwrap();
            for t in 0..(1u64 << kp) - 1 {
                assert!(saturated_mass(&tables, t), "t={t} k={k}");
            }
        }
    }

    #[test]
    fn verify_small_level() {
        let report = verify_tu_deng(2, 0.1, &budget()).unwrap();
        assert_eq!(report.violations, 0);
        assert_eq!(report.max_gamma, 2);
        assert_eq!(report.max_p, BigRational::from_f64(0.5).unwrap());
        assert_eq!(report.argmax_t, 1);
        assert_eq!(report.window_inside, 0);
        assert_eq!(report.window_outside, 2);
        assert_eq!(report.window_inside + report.window_outside, (1 << 2) - 2);
        assert_eq!(report.sum_gamma, 4);
        assert!(verify_tu_deng(2, 0.7, &budget()).is_err());
        assert!(verify_tu_deng(1, 0.1, &budget()).is_err());
    }

    #[test]
    fn range_reports_every_level() {
        let reports = verify_tu_deng_range(2, 6, 0.1, &budget()).unwrap();
        assert_eq!(reports.len(), 5);
        for (i, r) in reports.iter().enumerate() {
            assert_eq!(r.k, 2 + i as u32);
            assert_eq!(r.violations, 0);
            assert_eq!(r.window_inside + r.window_outside, (1u64 << r.k) - 2);
        }
    }
}
