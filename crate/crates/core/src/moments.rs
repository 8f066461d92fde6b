//! Moments of the Tu-Deng statistic over t: first-moment tables, the nine
//! quadratic product families, tail sums, exact variance, and the asymptotic
//! expansion evaluators they are compared against.
//!
//! Every table can be built two ways: level by level from three-term
//! recurrences (cheap, O(k^2) or O(k^3) per level) or as definitional sums
//! over the carry level tables (exponential, the oracle side). Accumulators
//! are arbitrary-precision throughout; normalized values stay exact
//! rationals until a float is explicitly requested.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::carry::LevelTables;
use crate::error::{Error, Result};

/// C(2n, n) by the multiplicative recurrence; exact at every step.
pub fn central_binomial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 1..=n {
        acc = acc * (4 * i - 2) / i;
    }
    acc
}

/// First-moment tables at one level k: column sums of the histogram families
/// and their joint tail sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentTable {
    k: u32,
    /// m[j + k] = sum over t < 2^k of the count at weight change j.
    m: Vec<BigInt>,
    /// Same sums for the complemented family, indexed by the negated change.
    m_tilde: Vec<BigInt>,
    /// tail[l] = sum over t of the joint tail at threshold k - l.
    tail: Vec<BigInt>,
}

impl MomentTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Column sum at weight change j (zero outside [-k, k]).
    pub fn m(&self, j: i64) -> BigInt {
        let idx = j + self.k as i64;
        if idx < 0 || idx as usize >= self.m.len() {
            BigInt::zero()
        } else {
            self.m[idx as usize].clone()
        }
    }

    pub fn m_tilde(&self, j: i64) -> BigInt {
        let idx = j + self.k as i64;
        if idx < 0 || idx as usize >= self.m_tilde.len() {
            BigInt::zero()
        } else {
            self.m_tilde[idx as usize].clone()
        }
    }

    /// Sum over t of the tail at threshold k - l; saturates for l >= 2k.
    pub fn tail(&self, l: i64) -> BigInt {
        if l < 0 {
            return BigInt::zero();
        }
        let idx = (l as usize).min(self.tail.len() - 1);
        self.tail[idx].clone()
    }

    /// The first moment of |S_{t,k}| summed over all t < 2^k, i.e. the tail
    /// at threshold 1.
    pub fn gamma_tail_sum(&self) -> BigInt {
        self.tail(self.k as i64 - 1)
    }

    fn from_columns(k: u32, m: Vec<BigInt>, m_tilde: Vec<BigInt>) -> MomentTable {
        let mut tail = Vec::with_capacity(2 * k as usize + 1);
        let mut acc = BigInt::zero();
        for l in 0..=2 * k as i64 {
            let j = k as i64 - l;
            let idx = (j + k as i64) as usize;
            acc += &m[idx] + &m_tilde[idx];
            tail.push(acc.clone());
        }
        MomentTable { k, m, m_tilde, tail }
    }
}

/// Builds levels 0..=k_max of the first-moment tables from the three-term
/// recurrences with their boundary corrections.
pub fn moment_tables(k_max: u32) -> Vec<MomentTable> {
    let mut out = Vec::with_capacity(k_max as usize + 1);
    out.push(MomentTable::from_columns(
        0,
        vec![BigInt::one()],
        vec![BigInt::one()],
    ));
    for k in 1..=k_max {
        let prev = out.last().unwrap();
        let len = 2 * k as usize + 1;
        let mut m = Vec::with_capacity(len);
        let mut m_tilde = Vec::with_capacity(len);
        let correction = BigInt::one() << (k - 1);
        for idx in 0..len {
            let j = idx as i64 - k as i64;
            let mut value = prev.m(j - 1) + prev.m(j) * 2 + prev.m(j + 1);
            if j == -1 {
                value -= &correction;
            }
            m.push(value);
            let mut value = prev.m_tilde(j - 1) + prev.m_tilde(j) * 2 + prev.m_tilde(j + 1);
            if j == 1 {
                value -= &correction;
            }
            m_tilde.push(value);
        }
        out.push(MomentTable::from_columns(k, m, m_tilde));
    }
    out
}

/// Definitional column sums over a built carry level (the oracle route).
pub fn moment_sums_from_level(tables: &LevelTables) -> MomentTable {
    let k = tables.k();
    let len = 2 * k as usize + 1;
    let mut m = vec![BigInt::zero(); len];
    let mut m_tilde = vec![BigInt::zero(); len];
    for t in 0..tables.rows() {
        let row = tables.beta_row(t);
        let comp = tables.beta_comp_row(t);
        for idx in 0..len {
            if row[idx] != 0 {
                m[idx] += row[idx];
            }
            // the complemented family is indexed by the negated change
            if comp[idx] != 0 {
                m_tilde[len - 1 - idx] += comp[idx];
            }
        }
    }
    MomentTable::from_columns(k, m, m_tilde)
}

/// (4^k - C(2k, k))/2 + 1: the closed form for the summed tail including the
/// pair-set convention at t = 2^k - 1 (whose pair count is 1 while its
/// histogram tail is 0, hence the +1 against `gamma_tail_sum`).
pub fn first_moment_closed_form(k: u32) -> BigInt {
    let four_k = BigInt::one() << (2 * k);
    (four_k - central_binomial(k as u64)) / 2 + 1
}

/// Square grid of arbitrary-precision values indexed by (l, m) in [0, 2k]^2;
/// reads outside the grid are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    size: usize,
    data: Vec<BigInt>,
}

impl Grid {
    fn zeroed(size: usize) -> Grid {
        Grid {
            size,
            data: vec![BigInt::zero(); size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, l: i64, m: i64) -> BigInt {
        if l < 0 || m < 0 || l >= self.size as i64 || m >= self.size as i64 {
            BigInt::zero()
        } else {
            self.data[l as usize * self.size + m as usize].clone()
        }
    }

    fn set(&mut self, l: usize, m: usize, value: BigInt) {
        self.data[l * self.size + m] = value;
    }

    fn add_at(&mut self, l: usize, m: usize, value: &BigInt) {
        self.data[l * self.size + m] += value;
    }
}

/// The nine quadratic product families at one level, plus the assembled
/// second-moment grid. Families pair the two histogram columns of products
/// beta * beta over neighbouring t (unprimed), direct * complemented
/// (primed) and complemented * complemented (triple-primed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondMomentTables {
    k: u32,
    pub a: Grid,
    pub b: Grid,
    pub c: Grid,
    pub a_prime: Grid,
    pub b_prime: Grid,
    pub c_prime: Grid,
    pub a_triple: Grid,
    pub b_triple: Grid,
    pub c_triple: Grid,
    m2: Grid,
}

impl SecondMomentTables {
    pub fn k(&self) -> u32 {
        self.k
    }

    /// The mixed family with the roles of the two columns exchanged; equal
    /// to the primed family transposed.
    pub fn a_double_prime(&self, l: i64, m: i64) -> BigInt {
        self.a_prime.get(m, l)
    }

    /// Second moment of the joint tails at thresholds (k - l, k - m).
    pub fn m2(&self, l: i64, m: i64) -> BigInt {
        if l < 0 || m < 0 {
            return BigInt::zero();
        }
        // tails saturate beyond the grid
        let cap = self.m2.size as i64 - 1;
        self.m2.get(l.min(cap), m.min(cap))
    }

    /// Second moment of |S_{t,k}| summed over all t < 2^k.
    pub fn gamma_tail_sq_sum(&self) -> BigInt {
        self.m2(self.k as i64 - 1, self.k as i64 - 1)
    }

    fn assemble_m2(k: u32, a: &Grid, ap: &Grid, at: &Grid) -> Grid {
        let size = 2 * k as usize + 1;
        let mut m2 = Grid::zeroed(size);
        for l in 0..size {
            for m in 0..size {
                // gamma tail products split into the four families
                let cell = a.get(l as i64, m as i64)
                    + ap.get(l as i64, m as i64)
                    + ap.get(m as i64, l as i64)
                    + at.get(l as i64, m as i64);
                let west = if l > 0 { m2.get(l as i64 - 1, m as i64) } else { BigInt::zero() };
                let north = if m > 0 { m2.get(l as i64, m as i64 - 1) } else { BigInt::zero() };
                let northwest = if l > 0 && m > 0 {
                    m2.get(l as i64 - 1, m as i64 - 1)
                } else {
                    BigInt::zero()
                };
                m2.set(l, m, cell + west + north - northwest);
            }
        }
        m2
    }
}

/// Builds levels 0..=k_max of all nine families from their recurrences.
pub fn second_moment_tables(k_max: u32) -> Vec<SecondMomentTables> {
    let mut out: Vec<SecondMomentTables> = Vec::with_capacity(k_max as usize + 1);

    let mut unit = Grid::zeroed(1);
    unit.set(0, 0, BigInt::one());
    let zero = Grid::zeroed(1);
    let base_m2 = SecondMomentTables::assemble_m2(0, &unit, &unit, &unit);
    out.push(SecondMomentTables {
        k: 0,
        a: unit.clone(),
        b: zero.clone(),
        c: zero.clone(),
        a_prime: unit.clone(),
        b_prime: zero.clone(),
        c_prime: zero.clone(),
        a_triple: unit,
        b_triple: zero.clone(),
        c_triple: zero,
        m2: base_m2,
    });

    for k in 1..=k_max {
        let p = out.last().unwrap();
        let size = 2 * k as usize + 1;
        let mut a = Grid::zeroed(size);
        let mut b = Grid::zeroed(size);
        let mut c = Grid::zeroed(size);
        let mut ap = Grid::zeroed(size);
        let mut bp = Grid::zeroed(size);
        let mut cp = Grid::zeroed(size);
        let mut at = Grid::zeroed(size);
        let mut bt = Grid::zeroed(size);
        let mut ct = Grid::zeroed(size);

        let ki = k as i64;
        for l in 0..size {
            for m in 0..size {
                let (li, mi) = (l as i64, m as i64);
                a.set(
                    l,
                    m,
                    p.a.get(li, mi)
                        + p.b.get(li - 2, mi)
                        + p.c.get(li, mi - 2)
                        + p.a.get(li - 2, mi - 2)
                        + p.a.get(li - 1, mi - 1) * 4,
                );
                b.set(
                    l,
                    m,
                    (p.a.get(li, mi - 1)
                        + p.b.get(li - 2, mi - 1)
                        + p.b.get(li - 1, mi)
                        + p.a.get(li - 1, mi - 2))
                        * 2,
                );
                c.set(
                    l,
                    m,
                    (p.a.get(li - 1, mi)
                        + p.c.get(li - 1, mi - 2)
                        + p.c.get(li, mi - 1)
                        + p.a.get(li - 2, mi - 1))
                        * 2,
                );
                ap.set(
                    l,
                    m,
                    (p.a_prime.get(li, mi - 1)
                        + p.b_prime.get(li - 2, mi - 1)
                        + p.a_prime.get(li - 1, mi - 2)
                        + p.b_prime.get(li - 1, mi))
                        * 2,
                );
                bp.set(
                    l,
                    m,
                    p.a_prime.get(li, mi - 2)
                        + p.b_prime.get(li - 2, mi - 2)
                        + p.b_prime.get(li, mi)
                        + p.c_prime.get(li - 2, mi)
                        + p.b_prime.get(li - 1, mi - 1) * 4,
                );
                cp.set(
                    l,
                    m,
                    (p.b_prime.get(li - 1, mi - 2)
                        + p.c_prime.get(li - 1, mi)
                        + p.b_prime.get(li, mi - 1)
                        + p.c_prime.get(li - 2, mi - 1))
                        * 2,
                );
                at.set(
                    l,
                    m,
                    p.a_triple.get(li - 1, mi - 1) * 4
                        + p.a_triple.get(li - 2, mi - 2)
                        + p.b_triple.get(li - 2, mi)
                        + p.c_triple.get(li, mi - 2)
                        + p.a_triple.get(li, mi),
                );
                bt.set(
                    l,
                    m,
                    (p.a_triple.get(li - 1, mi - 2)
                        + p.b_triple.get(li - 1, mi)
                        + p.b_triple.get(li - 2, mi - 1)
                        + p.a_triple.get(li, mi - 1))
                        * 2,
                );
                ct.set(
                    l,
                    m,
                    (p.a_triple.get(li - 2, mi - 1)
                        + p.c_triple.get(li, mi - 1)
                        + p.c_triple.get(li - 1, mi - 2)
                        + p.a_triple.get(li - 1, mi))
                        * 2,
                );
            }
        }

        // boundary corrections from the top row of the previous level
        let sq = BigInt::one() << (2 * (k - 1));
        let double_sq = BigInt::one() << (2 * k - 1);
        let idx = |v: i64| -> Option<usize> {
            if v >= 0 && v < size as i64 {
                Some(v as usize)
            } else {
                None
            }
        };
        if let (Some(l), Some(m)) = (idx(ki + 1), idx(ki + 1)) {
            let v = a.get(l as i64, m as i64) - &sq;
            a.set(l, m, v);
        }
        if let (Some(l), Some(m)) = (idx(ki), idx(ki + 1)) {
            let v = b.get(l as i64, m as i64) - &double_sq;
            b.set(l, m, v);
            let v = c.get(m as i64, l as i64) - &double_sq;
            c.set(m, l, v);
        }
        if let (Some(l), Some(m)) = (idx(ki - 1), idx(ki - 1)) {
            let v = at.get(l as i64, m as i64) - &sq;
            at.set(l, m, v);
        }
        if let (Some(l), Some(m)) = (idx(ki - 1), idx(ki)) {
            let v = bt.get(l as i64, m as i64) - &double_sq;
            bt.set(l, m, v);
            let v = ct.get(m as i64, l as i64) - &double_sq;
            ct.set(m, l, v);
        }

        let m2 = SecondMomentTables::assemble_m2(k, &a, &ap, &at);
        out.push(SecondMomentTables {
            k,
            a,
            b,
            c,
            a_prime: ap,
            b_prime: bp,
            c_prime: cp,
            a_triple: at,
            b_triple: bt,
            c_triple: ct,
            m2,
        });
    }
    out
}

/// Definitional product sums over a built carry level (the oracle route for
/// all nine families and the assembled grid).
pub fn second_moment_sums_from_level(tables: &LevelTables) -> SecondMomentTables {
    let k = tables.k();
    let size = 2 * k as usize + 1;
    let ki = k as i64;
    let mut a = Grid::zeroed(size);
    let mut b = Grid::zeroed(size);
    let mut c = Grid::zeroed(size);
    let mut ap = Grid::zeroed(size);
    let mut bp = Grid::zeroed(size);
    let mut cp = Grid::zeroed(size);
    let mut at = Grid::zeroed(size);
    let mut bt = Grid::zeroed(size);
    let mut ct = Grid::zeroed(size);

    let rows = tables.rows();
    let beta = |t: u64, l: i64| -> BigInt { BigInt::from(tables.beta(t, ki - l)) };
    let beta_c = |t: u64, m: i64| -> BigInt { BigInt::from(tables.beta_comp(t, -ki + m)) };

    for l in 0..size as i64 {
        for m in 0..size as i64 {
            let mut acc_a = BigInt::zero();
            let mut acc_b = BigInt::zero();
            let mut acc_c = BigInt::zero();
            let mut acc_ap = BigInt::zero();
            let mut acc_bp = BigInt::zero();
            let mut acc_cp = BigInt::zero();
            let mut acc_at = BigInt::zero();
            let mut acc_bt = BigInt::zero();
            let mut acc_ct = BigInt::zero();
            for t in 0..rows {
                acc_a += beta(t, l) * beta(t, m);
                acc_ap += beta(t, l) * beta_c(t, m);
                acc_at += beta_c(t, l) * beta_c(t, m);
                if t + 1 < rows {
                    acc_b += beta(t, l) * beta(t + 1, m);
                    acc_c += beta(t + 1, l) * beta(t, m);
                    acc_bp += beta(t, l) * beta_c(t + 1, m);
                    acc_bt += beta_c(t, l) * beta_c(t + 1, m);
                    acc_ct += beta_c(t + 1, l) * beta_c(t, m);
                    // c' pairs the predecessor with the successor complement
                    if t >= 1 {
                        acc_cp += beta(t - 1, l) * beta_c(t + 1, m);
                    }
                }
            }
            a.set(l as usize, m as usize, acc_a);
            b.set(l as usize, m as usize, acc_b);
            c.set(l as usize, m as usize, acc_c);
            ap.set(l as usize, m as usize, acc_ap);
            bp.set(l as usize, m as usize, acc_bp);
            cp.set(l as usize, m as usize, acc_cp);
            at.set(l as usize, m as usize, acc_at);
            bt.set(l as usize, m as usize, acc_bt);
            ct.set(l as usize, m as usize, acc_ct);
        }
    }
    let m2 = SecondMomentTables::assemble_m2(k, &a, &ap, &at);
    SecondMomentTables {
        k,
        a,
        b,
        c,
        a_prime: ap,
        b_prime: bp,
        c_prime: cp,
        a_triple: at,
        b_triple: bt,
        c_triple: ct,
        m2,
    }
}

/// Second moments assembled directly from per-instance tails (stronger
/// oracle than the family sums: no prefix-sum step shared with the fast
/// route).
pub fn second_moment_grid_from_tails(tables: &LevelTables) -> Grid {
    let k = tables.k();
    let size = 2 * k as usize + 1;
    let mut grid = Grid::zeroed(size);
    for t in 0..tables.rows() {
        // joint tails of the symmetrized histogram at each threshold
        let mut tails = vec![BigInt::zero(); size];
        let mut acc = 0u64;
        for l in 0..size as i64 {
            let j = k as i64 - l;
            acc += tables.beta(t, j) + tables.beta_comp(t, -j);
            tails[l as usize] = BigInt::from(acc);
        }
        for l in 0..size {
            for m in 0..size {
                let prod = &tails[l] * &tails[m];
                grid.add_at(l, m, &prod);
            }
        }
    }
    grid
}

/// Exact mean, second moment, variance and standard deviation of the
/// statistic over t in {1,..,2^k-2}.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceSummary {
    pub k: u32,
    pub mean: BigRational,
    pub second_moment: BigRational,
    pub variance: BigRational,
    pub sigma: f64,
    pub sigma_times_k: f64,
}

/// Variance from already-built tables at matching levels.
///
/// The random variable ranges over t in {1,..,2^k-2} while the tables sum
/// over all t < 2^k, so the two endpoint contributions (tail 1 at t = 0,
/// tail 0 at the top) are subtracted before normalizing.
pub fn variance_from_tables(
    first: &MomentTable,
    second: &SecondMomentTables,
) -> Result<VarianceSummary> {
    let k = first.k();
    if k != second.k() {
        return Err(Error::LevelMismatch {
            table_k: second.k(),
            requested_k: k,
        });
    }
    if k < 2 {
        return Err(Error::KOutOfRange {
            k,
            reason: "variance needs k >= 2 so the t-range is nonempty",
        });
    }
    let sum_tail = first.gamma_tail_sum() - BigInt::one();
    let sum_tail_sq = second.gamma_tail_sq_sum() - BigInt::one();
    let n = BigInt::from((1u64 << k) - 2);
    let mean = BigRational::new(sum_tail, &n * (BigInt::one() << k));
    let second_moment = BigRational::new(sum_tail_sq, n * (BigInt::one() << (2 * k)));
    let variance = &second_moment - &mean * &mean;
    debug_assert!(!variance.is_negative());
    let sigma = variance.to_f64().unwrap_or(f64::NAN).sqrt();
    Ok(VarianceSummary {
        k,
        mean,
        second_moment,
        variance,
        sigma,
        sigma_times_k: sigma * k as f64,
    })
}

/// Convenience wrapper building the tables for one k.
pub fn variance(k: u32) -> Result<VarianceSummary> {
    let first = moment_tables(k);
    let second = second_moment_tables(k);
    variance_from_tables(&first[k as usize], &second[k as usize])
}

/// Normalized exact first moment: the summed tail over 4^k.
pub fn first_moment_normalized(table: &MomentTable) -> BigRational {
    BigRational::new(table.gamma_tail_sum(), BigInt::one() << (2 * table.k()))
}

/// Normalized exact second moment: the summed squared tail over 8^k.
pub fn second_moment_normalized(tables: &SecondMomentTables) -> BigRational {
    BigRational::new(
        tables.gamma_tail_sq_sum(),
        BigInt::one() << (3 * tables.k()),
    )
}

/// Four-term expansion of the normalized first moment.
pub fn first_moment_expansion(k: u32) -> f64 {
    let kf = k as f64;
    let pi = std::f64::consts::PI;
    0.5 * (1.0 - 1.0 / (pi * kf).sqrt() + 1.0 / (8.0 * (pi * kf.powi(3)).sqrt())
        - 1.0 / (128.0 * (pi * kf.powi(5)).sqrt()))
}

/// Five-term expansion of the normalized second moment.
pub fn second_moment_expansion(k: u32) -> f64 {
    let kf = k as f64;
    let pi = std::f64::consts::PI;
    0.25 - 1.0 / (2.0 * (pi * kf).sqrt()) + 1.0 / (4.0 * pi * kf)
        + 1.0 / (16.0 * pi.sqrt() * kf.powf(1.5))
        + 17.0 / (72.0 * pi * kf * kf)
}

/// Limit of sigma_k * k: sqrt(43) / (12 sqrt(pi)).
pub fn sigma_limit() -> f64 {
    43f64.sqrt() / (12.0 * std::f64::consts::PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::MemoryBudget;
    use crate::carry::levels_dp;

    #[test]
    fn central_binomial_small() {
        let expect = [1u64, 2, 6, 20, 70, 252, 924, 3432];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(central_binomial(n as u64), BigInt::from(e));
        }
    }

    #[test]
    fn base_table() {
        let tables = moment_tables(0);
        assert_eq!(tables[0].m(0), BigInt::one());
        assert_eq!(tables[0].m(1), BigInt::zero());
        assert_eq!(tables[0].m_tilde(0), BigInt::one());
    }

    #[test]
    fn recurrence_matches_definitional_sums() {
        let budget = MemoryBudget::default();
        let levels = levels_dp(8, &budget).unwrap();
        let fast = moment_tables(8);
        for tables in &levels {
            let k = tables.k();
            let slow = moment_sums_from_level(tables);
            for j in -(k as i64)..=k as i64 {
                assert_eq!(fast[k as usize].m(j), slow.m(j), "m at k={k} j={j}");
                assert_eq!(
                    fast[k as usize].m_tilde(j),
                    slow.m_tilde(j),
                    "m_tilde at k={k} j={j}"
                );
            }
            for l in 0..=2 * k as i64 {
                assert_eq!(fast[k as usize].tail(l), slow.tail(l), "tail k={k} l={l}");
            }
        }
    }

    #[test]
    fn tilde_is_mirrored() {
        let tables = moment_tables(12);
        for table in &tables {
            for j in -(table.k() as i64)..=table.k() as i64 {
                assert_eq!(table.m_tilde(j), table.m(-j), "k={} j={j}", table.k());
            }
        }
    }

    #[test]
    fn column_mass() {
        // sum over j of m equals sum over t of (t+1)
        let tables = moment_tables(10);
        for table in &tables {
            let k = table.k();
            let mut mass = BigInt::zero();
            for j in -(k as i64)..=k as i64 {
                mass += table.m(j);
            }
            let expect = if k == 0 {
                BigInt::one()
            } else {
                (BigInt::one() << (k - 1)) * ((BigInt::one() << k) + 1)
            };
            assert_eq!(mass, expect, "k={k}");
        }
    }

    #[test]
    fn closed_form_values_and_offset() {
        assert_eq!(first_moment_closed_form(1), BigInt::from(2));
        assert_eq!(first_moment_closed_form(2), BigInt::from(6));
        let tables = moment_tables(10);
        for k in 1..=10u32 {
            let tail_sum = tables[k as usize].gamma_tail_sum();
            assert_eq!(
                first_moment_closed_form(k) - &tail_sum,
                BigInt::one(),
                "offset at k={k}"
            );
        }
        // the k=1 direct sum: tails 1 (t=0) and 0 (t=1)
        assert_eq!(tables[1].gamma_tail_sum(), BigInt::one());
    }

    #[test]
    fn second_moment_base_and_small_values() {
        let tables = second_moment_tables(2);
        assert_eq!(tables[0].a.get(0, 0), BigInt::one());
        assert_eq!(tables[0].b.get(0, 0), BigInt::zero());
        assert_eq!(tables[0].m2(0, 0), BigInt::from(4));
        // tails at k=2 are (1, 2, 2, 0), so the squared sum is 9
        assert_eq!(tables[2].gamma_tail_sq_sum(), BigInt::from(9));
        assert_eq!(tables[1].gamma_tail_sq_sum(), BigInt::one());
    }

    #[test]
    fn second_moment_recurrence_matches_sums() {
        let budget = MemoryBudget::default();
        let levels = levels_dp(6, &budget).unwrap();
        let fast = second_moment_tables(6);
        for tables in &levels {
            let k = tables.k() as usize;
            let slow = second_moment_sums_from_level(tables);
            let size = 2 * k as i64;
            for l in 0..=size {
                for m in 0..=size {
                    assert_eq!(fast[k].a.get(l, m), slow.a.get(l, m), "a k={k} l={l} m={m}");
                    assert_eq!(fast[k].b.get(l, m), slow.b.get(l, m), "b k={k} l={l} m={m}");
                    assert_eq!(fast[k].c.get(l, m), slow.c.get(l, m), "c k={k} l={l} m={m}");
                    assert_eq!(
                        fast[k].a_prime.get(l, m),
                        slow.a_prime.get(l, m),
                        "a' k={k} l={l} m={m}"
                    );
                    assert_eq!(
                        fast[k].b_prime.get(l, m),
                        slow.b_prime.get(l, m),
                        "b' k={k} l={l} m={m}"
                    );
                    assert_eq!(
                        fast[k].c_prime.get(l, m),
                        slow.c_prime.get(l, m),
                        "c' k={k} l={l} m={m}"
                    );
                    assert_eq!(
                        fast[k].a_triple.get(l, m),
                        slow.a_triple.get(l, m),
                        "a''' k={k} l={l} m={m}"
                    );
                    assert_eq!(
                        fast[k].b_triple.get(l, m),
                        slow.b_triple.get(l, m),
                        "b''' k={k} l={l} m={m}"
                    );
                    assert_eq!(
                        fast[k].c_triple.get(l, m),
                        slow.c_triple.get(l, m),
                        "c''' k={k} l={l} m={m}"
                    );
                    assert_eq!(fast[k].m2(l, m), slow.m2(l, m), "m2 k={k} l={l} m={m}");
                }
            }
            // the tails route is an independent assembly of the same grid
            let tails = second_moment_grid_from_tails(tables);
            for l in 0..=size {
                for m in 0..=size {
                    assert_eq!(fast[k].m2(l, m), tails.get(l, m), "tails k={k} l={l} m={m}");
                }
            }
        }
    }

    #[test]
    fn family_symmetries() {
        let tables = second_moment_tables(8);
        for t in &tables {
            let size = 2 * t.k() as i64;
            for l in 0..=size {
                for m in 0..=size {
                    assert_eq!(t.a.get(l, m), t.a.get(m, l));
                    assert_eq!(t.b.get(l, m), t.c.get(m, l));
                    assert_eq!(t.a_double_prime(l, m), t.a_prime.get(m, l));
                    assert_eq!(t.a_triple.get(l, m), t.a_triple.get(m, l));
                    assert_eq!(t.b_triple.get(l, m), t.c_triple.get(m, l));
                }
            }
        }
    }

    #[test]
    fn variance_small() {
        // at k=2 both swept instances have the same statistic
        let v = variance(2).unwrap();
        assert_eq!(v.variance, BigRational::zero());
        assert_eq!(v.sigma, 0.0);
        assert!(variance(1).is_err());
    }

    #[test]
    fn variance_matches_direct_enumeration() {
        let budget = MemoryBudget::default();
        let levels = levels_dp(8, &budget).unwrap();
        for tables in levels.iter().filter(|t| t.k() >= 2) {
            let k = tables.k();
            let n = (1u64 << k) - 2;
            let mut sum = BigInt::zero();
            let mut sum_sq = BigInt::zero();
            for t in 1..=n {
                let tail = BigInt::from(tables.tu_deng_count(t));
                sum += &tail;
                sum_sq += &tail * &tail;
            }
            let mean = BigRational::new(sum, BigInt::from(n) * (BigInt::one() << k));
            let second =
                BigRational::new(sum_sq, BigInt::from(n) * (BigInt::one() << (2 * k)));
            let direct_var = &second - &mean * &mean;
            let v = variance(k).unwrap();
            assert_eq!(v.mean, mean, "mean k={k}");
            assert_eq!(v.second_moment, second, "second k={k}");
            assert_eq!(v.variance, direct_var, "variance k={k}");
        }
    }

    #[test]
    fn expansion_limits() {
        assert!((first_moment_expansion(1_000_000) - 0.5).abs() < 1e-3);
        assert!((second_moment_expansion(1_000_000) - 0.25).abs() < 1e-3);
        assert!((sigma_limit() - 0.308).abs() < 1e-3);
    }
}
