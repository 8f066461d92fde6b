//! Densities of Hamming-weight changes under addition of a constant.
//!
//! For fixed t, the tail counts v_{t,k,j} = |{n < 2^k : w(n+t) - w(n) >= j}|
//! drive everything: the density c_t of {n : w(n+t) >= w(n)} is the
//! normalized count at j = 0 once the width k is large enough, and the
//! strict-inequality density behind the complementary conjecture is the
//! normalized count at j = 1 once it stabilizes.
//!
//! Counts are computed two ways: by direct enumeration
//! (`delta_distribution`, O(2^k)) and by the halving recurrence along the
//! binary expansion of t (`tail_counts`, O(k^2)), which makes sweeps over
//! t < 2^16 and widths past 60 bits cheap.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::digits::hamming_weight;
use crate::error::{Error, Result};

/// Raw tail counts for one (t, k): v[j] = |{n < 2^k : w(n+t) - w(n) >= j}|.
///
/// Stored for j in [-k, w(t)+1]; outside that range v is pinned at 2^k
/// (below, since the weight of n can drop by at most k) and 0 (above, since
/// the weight can grow by at most w(t)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaDistribution {
    t: u64,
    k: u32,
    weight: u32,
    counts: Vec<u64>, // index j + k, for j in [-k, weight+1]
}

impl DeltaDistribution {
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Raw count at index j.
    pub fn get(&self, j: i64) -> u64 {
        if j <= -(self.k as i64) {
            1u64 << self.k
        } else if j > self.weight as i64 {
            0
        } else {
            self.counts[(j + self.k as i64) as usize]
        }
    }

    /// Count normalized by 2^k.
    pub fn normalized(&self, j: i64) -> BigRational {
        BigRational::new(BigInt::from(self.get(j)), BigInt::one() << self.k)
    }
}

/// Tail counts by direct enumeration of all n < 2^k.
pub fn delta_distribution(t: u64, k: u32) -> Result<DeltaDistribution> {
    if k == 0 || k > 30 {
        return Err(Error::KOutOfRange {
            k,
            reason: "enumeration supports 1 <= k <= 30",
        });
    }
    if t > u64::MAX - (1u64 << k) {
        return Err(Error::TRangeRejected {
            t,
            requirement: "t + 2^k must fit in 64 bits",
        });
    }
    let weight = hamming_weight(t);
    let offset = k as i64;
    // histogram of the pointwise differences, then a suffix sum
    let mut hist = vec![0u64; k as usize + weight as usize + 2];
    for n in 0..1u64 << k {
        let d = hamming_weight(n + t) as i64 - hamming_weight(n) as i64;
        hist[(d + offset) as usize] += 1;
    }
    let mut counts = vec![0u64; hist.len()];
    let mut acc = 0u64;
    for i in (0..hist.len()).rev() {
        acc += hist[i];
        counts[i] = acc;
    }
    Ok(DeltaDistribution {
        t,
        k,
        weight,
        counts,
    })
}

/// Same tail counts from the halving recurrence; u128 counts support widths
/// up to 126 bits.
#[derive(Debug, Clone)]
pub struct TailCounts {
    t: u64,
    k: u32,
    weight: u32,
    counts: Vec<u128>, // index j + k, for j in [-k, weight]
}

pub const MAX_RECURRENCE_WIDTH: u32 = 126;

impl TailCounts {
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn get(&self, j: i64) -> u128 {
        if j <= -(self.k as i64) {
            1u128 << self.k
        } else if j > self.weight as i64 {
            0
        } else {
            self.counts[(j + self.k as i64) as usize]
        }
    }

    pub fn normalized(&self, j: i64) -> BigRational {
        BigRational::new(BigInt::from(self.get(j)), BigInt::one() << self.k)
    }

    fn width_zero(t: u64) -> TailCounts {
        let weight = hamming_weight(t);
        TailCounts {
            t,
            k: 0,
            weight,
            counts: vec![1; weight as usize + 1],
        }
    }

    /// v(2t, k+1, j) = 2 v(t, k, j)
    fn doubled(&self, t_out: u64) -> TailCounts {
        let k1 = self.k + 1;
        let weight = self.weight; // w(2t) = w(t)
        let mut counts = vec![0u128; k1 as usize + weight as usize + 1];
        for (idx, slot) in counts.iter_mut().enumerate() {
            let j = idx as i64 - k1 as i64;
            *slot = 2 * self.get(j);
        }
        TailCounts {
            t: t_out,
            k: k1,
            weight,
            counts,
        }
    }

    /// v(2t+1, k+1, j) = v(t, k, j-1) + v(t+1, k, j+1)
    fn combined(low: &TailCounts, high: &TailCounts, t_out: u64) -> TailCounts {
        debug_assert_eq!(low.k, high.k);
        let k1 = low.k + 1;
        let weight = low.weight + 1; // w(2t+1) = w(t) + 1
        let mut counts = vec![0u128; k1 as usize + weight as usize + 1];
        for (idx, slot) in counts.iter_mut().enumerate() {
            let j = idx as i64 - k1 as i64;
            *slot = low.get(j - 1) + high.get(j + 1);
        }
        TailCounts {
            t: t_out,
            k: k1,
            weight,
            counts,
        }
    }
}

/// Tail counts for (t, k) via the halving chain t, ceil/floor halves, .. down
/// to width zero. Only the pair (floor(t/2^i), floor(t/2^i)+1) is live per
/// step, so the whole build is O(k * (k + w(t))).
pub fn tail_counts(t: u64, k: u32) -> Result<TailCounts> {
    if k > MAX_RECURRENCE_WIDTH {
        return Err(Error::KOutOfRange {
            k,
            reason: "recurrence counts support k <= 126",
        });
    }
    let shifted = |i: u32| -> u64 {
        if i >= 64 {
            0
        } else {
            t >> i
        }
    };
    let mut low = TailCounts::width_zero(shifted(k));
    let mut high = TailCounts::width_zero(shifted(k).wrapping_add(1));
    for i in (0..k).rev() {
        let ti = shifted(i);
        let (new_low, new_high) = if ti % 2 == 0 {
            (
                low.doubled(ti),
                TailCounts::combined(&low, &high, ti + 1),
            )
        } else {
            (
                TailCounts::combined(&low, &high, ti),
                high.doubled(ti + 1),
            )
        };
        low = new_low;
        high = new_high;
    }
    Ok(low)
}

/// The two densities attached to t, evaluated exactly at finite width.
#[derive(Debug, Clone, PartialEq)]
pub struct CusickDensities {
    pub t: u64,
    /// w(t) + 1.
    pub alpha: u32,
    /// floor(log2 t) for t >= 1; 0 for t = 0.
    pub mu: u32,
    /// Width at which both reported counts have stabilized.
    pub k_used: u32,
    /// Density of {n : w(n+t) >= w(n)}.
    pub c: BigRational,
    /// Density of {n : w(n+t) > w(n)}.
    pub c_tilde: BigRational,
}

/// Exact densities for one t.
///
/// The j = 0 count is evaluated at width alpha + mu, where it is already
/// exact; the j = 1 count is walked upward from alpha + mu + 1 until two
/// consecutive widths agree, and the first agreeing width is recorded in
/// `k_used`.
pub fn c_density(t: u64) -> Result<CusickDensities> {
    if t == 0 {
        return Ok(CusickDensities {
            t: 0,
            alpha: 1,
            mu: 0,
            k_used: 0,
            c: BigRational::one(),
            c_tilde: BigRational::zero(),
        });
    }
    let alpha = hamming_weight(t) + 1;
    let mu = t.ilog2();
    let k0 = alpha + mu;
    if k0 + 2 > MAX_RECURRENCE_WIDTH {
        return Err(Error::StabilizationLimit {
            t,
            limit: MAX_RECURRENCE_WIDTH,
        });
    }
    let at_k0 = tail_counts(t, k0)?;
    let c = at_k0.normalized(0);
    debug_assert_eq!(tail_counts(t, k0 + 1)?.get(0), 2 * at_k0.get(0));

    let mut k = k0 + 1;
    let mut current = tail_counts(t, k)?;
    loop {
        if k + 1 > MAX_RECURRENCE_WIDTH {
            return Err(Error::StabilizationLimit {
                t,
                limit: MAX_RECURRENCE_WIDTH,
            });
        }
        let next = tail_counts(t, k + 1)?;
        if next.get(1) == 2 * current.get(1) {
            return Ok(CusickDensities {
                t,
                alpha,
                mu,
                k_used: k,
                c,
                c_tilde: current.normalized(1),
            });
        }
        current = next;
        k += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub rule: &'static str,
    pub k: u32,
    pub j: i64,
    pub lhs: u128,
    pub rhs: u128,
}

/// Result of checking, for one t, that normalized tail counts never grow
/// with the width and that the halving recurrences hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VMonotonicityReport {
    pub t: u64,
    pub k_max: u32,
    pub violations: Vec<MonotonicityViolation>,
}

impl VMonotonicityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that v_{t,k,j}/2^k is nonincreasing in k for j in
/// [-(k_max), w(t)+1], and that the even/odd halving rules hold for 2t and
/// 2t+1 at every width up to k_max.
pub fn check_v_monotonicity(t: u64, k_max: u32) -> Result<VMonotonicityReport> {
    if t > u64::MAX / 2 - 1 {
        return Err(Error::TRangeRejected {
            t,
            requirement: "2t+1 must fit in 64 bits",
        });
    }
    if k_max + 2 > MAX_RECURRENCE_WIDTH {
        return Err(Error::KOutOfRange {
            k: k_max,
            reason: "recurrence counts support k <= 124 here",
        });
    }
    let weight = hamming_weight(t) as i64;
    let mut violations = Vec::new();

    let at = |tt: u64, k: u32| tail_counts(tt, k);
    for k in 0..=k_max {
        let here = at(t, k)?;
        let up = at(t, k + 1)?;
        for j in -(k_max as i64 + 1)..=weight + 1 {
            // normalized comparison: v_{t,k,j}/2^k >= v_{t,k+1,j}/2^{k+1}
            if 2 * here.get(j) < up.get(j) {
                violations.push(MonotonicityViolation {
                    rule: "nonincreasing-in-k",
                    k,
                    j,
                    lhs: 2 * here.get(j),
                    rhs: up.get(j),
                });
            }
        }
        // doubling rule at 2t, combine rule at 2t+1
        let even = at(2 * t, k + 1)?;
        let odd = at(2 * t + 1, k + 1)?;
        let succ = at(t + 1, k)?;
        for j in -(k_max as i64 + 2)..=weight + 2 {
            if even.get(j) != 2 * here.get(j) {
                violations.push(MonotonicityViolation {
                    rule: "even-halving",
                    k: k + 1,
                    j,
                    lhs: even.get(j),
                    rhs: 2 * here.get(j),
                });
            }
            if odd.get(j) != here.get(j - 1) + succ.get(j + 1) {
                violations.push(MonotonicityViolation {
                    rule: "odd-halving",
                    k: k + 1,
                    j,
                    lhs: odd.get(j),
                    rhs: here.get(j - 1) + succ.get(j + 1),
                });
            }
        }
    }
    Ok(VMonotonicityReport {
        t,
        k_max,
        violations,
    })
}

/// Outcome of sweeping c and c-tilde over 1 <= t < t_max.
#[derive(Debug, Clone, PartialEq)]
pub struct CusickReport {
    pub t_max: u64,
    pub checked: u64,
    /// Instances failing c-tilde <= 1/2 < c.
    pub violations: u64,
    /// Minimum of c - 1/2 and the smallest t attaining it.
    pub min_c_margin: BigRational,
    pub min_c_margin_t: u64,
    /// Maximum of c-tilde - 1/2 and the smallest t attaining it.
    pub max_c_tilde_margin: BigRational,
    pub max_c_tilde_margin_t: u64,
    /// Largest stabilization width seen in the sweep.
    pub max_k_used: u32,
}

struct SweepAcc {
    violations: u64,
    min_c: Option<(BigRational, u64)>,
    max_ct: Option<(BigRational, u64)>,
    max_k_used: u32,
}

impl SweepAcc {
    fn empty() -> SweepAcc {
        SweepAcc {
            violations: 0,
            min_c: None,
            max_ct: None,
            max_k_used: 0,
        }
    }

    fn merge(mut self, other: SweepAcc) -> SweepAcc {
        self.violations += other.violations;
        self.min_c = merge_extreme(self.min_c, other.min_c, false);
        self.max_ct = merge_extreme(self.max_ct, other.max_ct, true);
        self.max_k_used = self.max_k_used.max(other.max_k_used);
        self
    }
}

fn merge_extreme(
    a: Option<(BigRational, u64)>,
    b: Option<(BigRational, u64)>,
    want_max: bool,
) -> Option<(BigRational, u64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            let ord = x.0.cmp(&y.0);
            let pick_x = match ord {
                std::cmp::Ordering::Equal => x.1 <= y.1,
                std::cmp::Ordering::Less => !want_max,
                std::cmp::Ordering::Greater => want_max,
            };
            Some(if pick_x { x } else { y })
        }
    }
}

/// Verifies c-tilde <= 1/2 < c for every t in {1,..,t_max-1} and reports the
/// extremal margins. Parallel over t with a deterministic reduction.
pub fn verify_cusick(t_max: u64) -> Result<CusickReport> {
    if t_max < 2 {
        return Err(Error::TRangeRejected {
            t: t_max,
            requirement: "t_max >= 2 so at least t = 1 is checked",
        });
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let acc = (1..t_max)
        .into_par_iter()
        .map(|t| -> Result<SweepAcc> {
            let d = c_density(t)?;
            let c_margin = &d.c - &half;
            let ct_margin = &d.c_tilde - &half;
            let bad = d.c <= half || d.c_tilde > half;
            Ok(SweepAcc {
                violations: bad as u64,
                min_c: Some((c_margin, t)),
                max_ct: Some((ct_margin, t)),
                max_k_used: d.k_used,
            })
        })
        .try_reduce(SweepAcc::empty, |a, b| Ok(a.merge(b)))?;

    let (min_c_margin, min_c_margin_t) = acc.min_c.expect("t_max >= 2 checks at least one t");
    let (max_c_tilde_margin, max_c_tilde_margin_t) = acc.max_ct.unwrap();
    Ok(CusickReport {
        t_max,
        checked: t_max - 1,
        violations: acc.violations,
        min_c_margin,
        min_c_margin_t,
        max_c_tilde_margin,
        max_c_tilde_margin_t,
        max_k_used: acc.max_k_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_t0_and_t1() {
        let d0 = delta_distribution(0, 6).unwrap();
        for j in -6..=0 {
            assert_eq!(d0.get(j), 64);
        }
        assert_eq!(d0.get(1), 0);
        // for t = 1 the count at nu2(n+1) >= l is 2^{k-l}
        for k in 1..=10u32 {
            let d = delta_distribution(1, k).unwrap();
            for l in 0..=k as i64 {
                // d(n,1) >= 1-l  <=>  nu2(n+1) <= l
                let v = d.get(1 - l);
                let expect = (1u64 << k) - if l < k as i64 { 1u64 << (k - 1 - l as u32) } else { 0 };
                assert_eq!(v, expect, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn doubling_in_t() {
        for t in 1..32u64 {
            for k in 1..=8u32 {
                let base = delta_distribution(t, k).unwrap();
                let doubled = delta_distribution(2 * t, k + 1).unwrap();
                for j in -(k as i64 + 1)..=hamming_weight(t) as i64 + 1 {
                    assert_eq!(doubled.get(j), 2 * base.get(j), "t={t} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn recurrence_matches_enumeration() {
        for t in 0..64u64 {
            for k in 1..=10u32 {
                let fast = tail_counts(t, k).unwrap();
                let slow = delta_distribution(t, k).unwrap();
                for j in -(k as i64) - 2..=hamming_weight(t) as i64 + 2 {
                    assert_eq!(
                        fast.get(j),
                        slow.get(j) as u128,
                        "t={t} k={k} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn density_examples() {
        let d0 = c_density(0).unwrap();
        assert_eq!(d0.c, BigRational::one());
        assert_eq!(d0.c_tilde, BigRational::zero());

        let d1 = c_density(1).unwrap();
        assert_eq!(d1.alpha, 2);
        assert_eq!(d1.mu, 0);
        assert_eq!(d1.c, BigRational::new(BigInt::from(3), BigInt::from(4)));
        assert_eq!(d1.c_tilde, BigRational::new(BigInt::one(), BigInt::from(2)));
        assert_eq!(d1.k_used, 3);
    }

    #[test]
    fn density_matches_enumeration_sweep() {
        for t in 1..128u64 {
            let d = c_density(t).unwrap();
            let k = (d.alpha + d.mu).max(d.k_used);
            let slow = delta_distribution(t, k).unwrap();
            assert_eq!(d.c, slow.normalized(0), "c mismatch at t={t}");
            assert_eq!(d.c_tilde, slow.normalized(1), "c-tilde mismatch at t={t}");
            // counting the complementary strict event partitions the window
            let drop = (1u64 << k) - slow.get(0);
            assert_eq!(
                d.c,
                BigRational::one()
                    - BigRational::new(BigInt::from(drop), BigInt::one() << k)
            );
        }
    }

    #[test]
    fn monotonicity_small_sweep() {
        for t in 0..64u64 {
            let report = check_v_monotonicity(t, 10).unwrap();
            assert!(report.ok(), "violations at t={t}: {:?}", report.violations);
        }
    }

    #[test]
    fn sweep_small_range() {
        let report = verify_cusick(256).unwrap();
        assert_eq!(report.checked, 255);
        assert_eq!(report.violations, 0);
        assert!(report.min_c_margin > BigRational::zero());
        assert!(report.max_c_tilde_margin <= BigRational::zero());
        assert!(verify_cusick(1).is_err());
    }
}
