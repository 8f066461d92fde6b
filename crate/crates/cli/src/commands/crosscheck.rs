//! Cross-validation suites: every fast path against its independent oracle,
//! with the first counterexample reported on mismatch.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde_json::json;

use carrystats::carry::{
    beta_bruteforce, circ_count_oracle, levels_dp, s_size_pair_oracle, s_size_total_closed_form,
    saturated_mass, theta, LevelTables,
};
use carrystats::cusick::{check_v_monotonicity, delta_distribution, tail_counts};
use carrystats::digits::{bit_complement, hamming_weight};
use carrystats::moments::{
    first_moment_closed_form, moment_sums_from_level, moment_tables,
    second_moment_grid_from_tails, second_moment_sums_from_level, second_moment_tables,
};
use carrystats::series::{
    block_sum_gf, complemented_first_moment_gf, diagonal_first_moment, first_moment_gf,
    second_moment_blocks, tail_sum_gf, SecondMomentSeries, TruncatedSeries,
};

use crate::report::ReportSink;
use crate::{Context, Outcome, ReportFormat};

struct Suite {
    name: &'static str,
    budget: String,
    cases: u64,
    mismatches: u64,
    first_counterexample: String,
    note: String,
}

impl Suite {
    fn status(&self) -> &'static str {
        if self.mismatches == 0 {
            "pass"
        } else {
            "fail"
        }
    }
}

/// Accumulates comparison outcomes and keeps the first failure.
struct Tally {
    cases: u64,
    mismatches: u64,
    first: String,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            cases: 0,
            mismatches: 0,
            first: String::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches += 1;
            if self.first.is_empty() {
                self.first = detail();
            }
        }
    }

    fn into_suite(self, name: &'static str, budget: String, note: String) -> Suite {
        Suite {
            name,
            budget,
            cases: self.cases,
            mismatches: self.mismatches,
            first_counterexample: self.first,
            note,
        }
    }
}

fn dp_vs_bruteforce(levels: &[LevelTables]) -> Suite {
    let mut tally = Tally::new();
    for tables in levels.iter().filter(|l| l.k() >= 1) {
        let k = tables.k();
        for t in 0..tables.rows() {
            let reference = beta_bruteforce(t, k).unwrap();
            tally.check(tables.beta_histogram(t) == reference, || {
                format!("direct row t={t} k={k}")
            });
            let comp = bit_complement(t, k).unwrap();
            let reference = beta_bruteforce(comp, k).unwrap();
            tally.check(tables.beta_comp_histogram(t) == reference, || {
                format!("complement row t={t} k={k}")
            });
        }
    }
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    tally.into_suite(
        "dp-vs-bruteforce",
        format!("k <= {k_max}, all t"),
        String::new(),
    )
}

fn histogram_mass(levels: &[LevelTables]) -> Suite {
    let mut tally = Tally::new();
    for tables in levels {
        let k = tables.k();
        for t in 0..tables.rows() {
            let mass: u64 = tables.beta_row(t).iter().sum();
            tally.check(mass == t + 1, || format!("mass t={t} k={k} got {mass}"));
        }
    }
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    tally.into_suite("histogram-mass", format!("k <= {k_max}, all t"), String::new())
}

fn complement_symmetry(levels: &[LevelTables]) -> Suite {
    let mut tally = Tally::new();
    for tables in levels.iter().filter(|l| l.k() >= 1) {
        let k = tables.k();
        for t in 0..tables.rows() {
            let comp = bit_complement(t, k).unwrap();
            tally.check(
                tables.beta_comp_row(t) == tables.beta_row(comp),
                || format!("complement family t={t} k={k}"),
            );
        }
    }
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    tally.into_suite(
        "complement-symmetry",
        format!("k <= {k_max}, all t"),
        String::new(),
    )
}

fn tail_oracle_agreement(levels: &[LevelTables]) -> Suite {
    let mut tally = Tally::new();
    for tables in levels.iter().filter(|l| l.k() >= 2) {
        let k = tables.k();
        let top = tables.rows() - 1;
        let rows: Vec<(u64, u64, u64, u64)> = (1..top)
            .into_par_iter()
            .map(|t| {
                (
                    t,
                    tables.tu_deng_count(t),
                    s_size_pair_oracle(t, k).unwrap(),
                    circ_count_oracle(t, k).unwrap(),
                )
            })
            .collect();
        for (t, tail, pair, circ) in rows {
            tally.check(tail == pair && pair == circ, || {
                format!("t={t} k={k}: tail={tail} pair={pair} circ={circ}")
            });
        }
    }
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    tally.into_suite(
        "tail-oracle-agreement",
        format!("2 <= k <= {k_max}, 1 <= t <= 2^k-2"),
        String::new(),
    )
}

fn pair_set_totals(levels: &[LevelTables]) -> Suite {
    let mut tally = Tally::new();
    for tables in levels.iter().filter(|l| l.k() >= 2) {
        let k = tables.k();
        let top = tables.rows() - 1;
        let middle: u64 = (1..top)
            .into_par_iter()
            .map(|t| s_size_pair_oracle(t, k).unwrap())
            .sum();
        tally.check(
            BigInt::from(middle) == s_size_total_closed_form(k),
            || format!("middle total at k={k}: {middle}"),
        );
        let full = BigInt::from(middle)
            + s_size_pair_oracle(0, k).unwrap()
            + s_size_pair_oracle(top, k).unwrap();
        tally.check(full == first_moment_closed_form(k), || {
            format!("full pair total at k={k}")
        });
    }
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    tally.into_suite(
        "pair-set-totals",
        format!("2 <= k <= {k_max}"),
        "middle range matches (2^2k - C(2k,k))/2 - 1; adding both endpoint pairs gives the +1 closed form".to_string(),
    )
}

fn saturation(levels: &[LevelTables]) -> Suite {
    let mut tally = Tally::new();
    for tables in levels.iter().filter(|l| l.k() >= 2) {
        let k = tables.k();
        let kp = k / 2;
        if kp == 0 {
            continue;
        }
        for t in 0..(1u64 << kp) - 1 {
            tally.check(saturated_mass(tables, t), || format!("t={t} k={k}"));
        }
    }
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    tally.into_suite(
        "tail-saturation",
        format!("k <= {k_max}, t < 2^(k/2) - 1"),
        "whole histogram mass sits at positive weight change once k >= 2k'".to_string(),
    )
}

fn theta_identity() -> Suite {
    let mut tally = Tally::new();
    for t in 0..1u64 << 10 {
        let k = (64 - t.leading_zeros()).max(1);
        let hist = beta_bruteforce(t, k).unwrap();
        let wt = hamming_weight(t) as i64;
        let mut mass = 0u64;
        for j in 0..=k as u64 + 1 {
            let expected = theta(j, t);
            mass += expected;
            tally.check(hist.get(k as i64 - wt - j as i64) == expected, || {
                format!("t={t} j={j}")
            });
        }
        tally.check(mass == t + 1, || format!("theta row mass t={t}"));
    }
    tally.into_suite(
        "theta-identity",
        "t < 2^10, j >= 0, k = bitlen(t)".to_string(),
        "valuation counts in Pascal row t equal histogram entries".to_string(),
    )
}

fn first_moment_tables_vs_sums(levels: &[LevelTables]) -> Suite {
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    let fast = moment_tables(k_max);
    let mut tally = Tally::new();
    for tables in levels {
        let k = tables.k();
        let slow = moment_sums_from_level(tables);
        for j in -(k as i64)..=k as i64 {
            tally.check(fast[k as usize].m(j) == slow.m(j), || {
                format!("m k={k} j={j}")
            });
            tally.check(fast[k as usize].m_tilde(j) == slow.m_tilde(j), || {
                format!("m~ k={k} j={j}")
            });
        }
        for l in 0..=2 * k as i64 {
            tally.check(fast[k as usize].tail(l) == slow.tail(l), || {
                format!("tail k={k} l={l}")
            });
        }
        // mirrored columns
        for j in -(k as i64)..=k as i64 {
            tally.check(
                fast[k as usize].m_tilde(j) == fast[k as usize].m(-j),
                || format!("mirror k={k} j={j}"),
            );
        }
    }
    tally.into_suite(
        "first-moment-tables",
        format!("k <= {k_max}"),
        "recurrence vs definitional sums, plus the mirrored-column identity".to_string(),
    )
}

fn second_moment_tables_vs_sums(
    levels: &[LevelTables],
    slow_sums: &[carrystats::moments::SecondMomentTables],
    k_cap: u32,
) -> Suite {
    let fast = second_moment_tables(k_cap);
    let mut tally = Tally::new();
    for tables in levels.iter().filter(|l| l.k() <= k_cap) {
        let k = tables.k() as usize;
        let slow = &slow_sums[k];
        let tails = second_moment_grid_from_tails(tables);
        let size = 2 * k as i64;
        for l in 0..=size {
            for m in 0..=size {
                let pairs = [
                    ("a", fast[k].a.get(l, m), slow.a.get(l, m)),
                    ("b", fast[k].b.get(l, m), slow.b.get(l, m)),
                    ("c", fast[k].c.get(l, m), slow.c.get(l, m)),
                    ("a'", fast[k].a_prime.get(l, m), slow.a_prime.get(l, m)),
                    ("b'", fast[k].b_prime.get(l, m), slow.b_prime.get(l, m)),
                    ("c'", fast[k].c_prime.get(l, m), slow.c_prime.get(l, m)),
                    ("a''", fast[k].a_double_prime(l, m), slow.a_double_prime(l, m)),
                    ("a'''", fast[k].a_triple.get(l, m), slow.a_triple.get(l, m)),
                    ("b'''", fast[k].b_triple.get(l, m), slow.b_triple.get(l, m)),
                    ("c'''", fast[k].c_triple.get(l, m), slow.c_triple.get(l, m)),
                ];
                for (family, got, want) in pairs {
                    tally.check(got == want, || format!("{family} k={k} l={l} m={m}"));
                }
                tally.check(fast[k].m2(l, m) == slow.m2(l, m), || {
                    format!("m2 k={k} l={l} m={m}")
                });
                tally.check(fast[k].m2(l, m) == tails.get(l, m), || {
                    format!("m2-tails k={k} l={l} m={m}")
                });
            }
        }
    }
    tally.into_suite(
        "second-moment-tables",
        format!("k <= {k_cap}, all (l, m)"),
        "nine families and the assembled grid vs two definitional routes".to_string(),
    )
}

fn family_symmetries(slow_sums: &[carrystats::moments::SecondMomentTables]) -> Suite {
    let mut tally = Tally::new();
    for sums in slow_sums {
        let k = sums.k();
        let size = 2 * k as i64;
        for l in 0..=size {
            for m in 0..=size {
                tally.check(sums.a.get(l, m) == sums.a.get(m, l), || {
                    format!("a symmetric k={k} l={l} m={m}")
                });
                tally.check(sums.b.get(l, m) == sums.c.get(m, l), || {
                    format!("b/c transpose k={k} l={l} m={m}")
                });
                tally.check(
                    sums.a_double_prime(l, m) == sums.a_prime.get(m, l),
                    || format!("a''/a' transpose k={k} l={l} m={m}"),
                );
            }
        }
    }
    let k_cap = slow_sums.last().map(|s| s.k()).unwrap_or(0);
    tally.into_suite(
        "family-symmetries",
        format!("k <= {k_cap}"),
        String::new(),
    )
}

fn first_moment_identity(levels: &[LevelTables]) -> Suite {
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    let tables = moment_tables(k_max);
    let diag = diagonal_first_moment(k_max);
    let g = tail_sum_gf()
        .expand(&[k_max as usize, k_max as usize])
        .unwrap();
    let mut tally = Tally::new();
    for k in 1..=k_max {
        let tail_sum = tables[k as usize].gamma_tail_sum();
        let closed_minus_one = first_moment_closed_form(k) - BigInt::one();
        tally.check(tail_sum == closed_minus_one, || {
            format!("closed form at k={k}")
        });
        tally.check(tail_sum == diag[k as usize], || format!("diagonal at k={k}"));
        let coeff = g
            .integer_coefficient(&[k as usize, k as usize - 1])
            .unwrap();
        tally.check(tail_sum == coeff, || format!("tail-sum coefficient at k={k}"));
    }
    tally.into_suite(
        "first-moment-identity",
        format!("1 <= k <= {k_max}"),
        "summed tail = (4^k - C(2k,k))/2 = [x^k y^(k-1)] of the tail-sum function = diagonal sequence"
            .to_string(),
    )
}

fn first_moment_offset(levels: &[LevelTables]) -> Suite {
    let k_max = levels.last().map(|l| l.k()).unwrap_or(0);
    let tables = moment_tables(k_max);
    let mut tally = Tally::new();
    for lv in levels.iter().filter(|l| l.k() >= 2) {
        let k = lv.k();
        let top = lv.rows() - 1;
        let offset = first_moment_closed_form(k) - tables[k as usize].gamma_tail_sum();
        tally.check(offset == BigInt::one(), || format!("offset at k={k}"));
        // the single diverging instance: pair count 1, histogram tail 0
        tally.check(s_size_pair_oracle(top, k).unwrap() == 1, || {
            format!("pair count at top instance, k={k}")
        });
        tally.check(lv.tu_deng_count(top) == 0, || {
            format!("histogram tail at top instance, k={k}")
        });
        tally.check(
            lv.tu_deng_count(0) == 1 && s_size_pair_oracle(0, k).unwrap() == 1,
            || format!("t=0 agreement, k={k}"),
        );
    }
    tally.into_suite(
        "first-moment-offset",
        format!("2 <= k <= {k_max}"),
        "the +1 between the closed form and the summed tails comes from t = 2^k-1, where the pair set has one element but the histogram tail is empty".to_string(),
    )
}

fn second_moment_triple(levels: &[LevelTables], series: &SecondMomentSeries) -> Suite {
    let k_cap = series.k_max();
    let fast = second_moment_tables(k_cap);
    let mut tally = Tally::new();
    for tables in levels.iter().filter(|l| l.k() >= 1 && l.k() <= k_cap) {
        let k = tables.k();
        let mut definitional = BigInt::from(0);
        for t in 0..tables.rows() {
            let tail = BigInt::from(tables.tu_deng_count(t));
            definitional += &tail * &tail;
        }
        let table_value = fast[k as usize].gamma_tail_sq_sum();
        let coeff = series.coefficient(k, k - 1, k - 1).unwrap();
        tally.check(definitional == table_value, || {
            format!("definitional vs tables at k={k}")
        });
        tally.check(table_value == coeff, || {
            format!("tables vs trivariate coefficient at k={k}")
        });
    }
    tally.into_suite(
        "second-moment-triple",
        format!("1 <= k <= {k_cap}"),
        "sum of squared tails = recurrence grid = trivariate coefficient".to_string(),
    )
}

fn gf_bivariate(k_cap: u32) -> Suite {
    let tables = moment_tables(k_cap);
    let bounds = [k_cap as usize, 2 * k_cap as usize];
    let f = first_moment_gf().expand(&bounds).unwrap();
    let ft = complemented_first_moment_gf().expand(&bounds).unwrap();
    let g = tail_sum_gf().expand(&bounds).unwrap();
    let mut tally = Tally::new();
    for k in 0..=k_cap as usize {
        for l in 0..=2 * k_cap as usize {
            let j = k as i64 - l as i64;
            tally.check(
                f.integer_coefficient(&[k, l]).unwrap() == tables[k].m(j),
                || format!("direct gf k={k} l={l}"),
            );
            tally.check(
                ft.integer_coefficient(&[k, l]).unwrap() == tables[k].m_tilde(j),
                || format!("complemented gf k={k} l={l}"),
            );
            tally.check(
                g.integer_coefficient(&[k, l]).unwrap() == tables[k].tail(l as i64),
                || format!("tail gf k={k} l={l}"),
            );
        }
    }
    tally.into_suite(
        "gf-bivariate",
        format!("k <= {k_cap}, l <= 2k"),
        String::new(),
    )
}

fn gf_trivariate_grid(series: &SecondMomentSeries) -> Suite {
    let k_cap = series.k_max();
    let fast = second_moment_tables(k_cap);
    let mut tally = Tally::new();
    for k in 0..=k_cap {
        for l in 0..=k {
            for m in 0..=k {
                tally.check(
                    series.coefficient(k, l, m).unwrap()
                        == fast[k as usize].m2(l as i64, m as i64),
                    || format!("k={k} l={l} m={m}"),
                );
            }
        }
    }
    tally.into_suite(
        "gf-trivariate-grid",
        format!("k <= {k_cap}, l, m <= k"),
        String::new(),
    )
}

fn functional_equations() -> Suite {
    let bounds = [10usize, 20usize];
    let vars: [&str; 2] = ["x", "y"];
    let one = TruncatedSeries::one(&vars, &bounds);
    let x = TruncatedSeries::variable(&vars, &bounds, 0);
    let y = TruncatedSeries::variable(&vars, &bounds, 1);
    let two = BigRational::from_integer(BigInt::from(2));
    let square = one.add(&y).unwrap().pow(2).unwrap();
    let geo = one.sub(&x.mul(&y).unwrap().scale(&two)).unwrap();

    let mut tally = Tally::new();
    let f = first_moment_gf().expand(&bounds).unwrap();
    let rhs = one
        .add(&x.mul(&square).unwrap().mul(&f).unwrap())
        .unwrap()
        .sub(&x.mul(&y).unwrap().mul(&y).unwrap().div(&geo).unwrap())
        .unwrap();
    tally.check(f == rhs, || "direct-family equation".to_string());

    let ft = complemented_first_moment_gf().expand(&bounds).unwrap();
    let rhs = one
        .add(&x.mul(&square).unwrap().mul(&ft).unwrap())
        .unwrap()
        .sub(&x.div(&geo).unwrap())
        .unwrap();
    tally.check(ft == rhs, || "complemented-family equation".to_string());

    let g = tail_sum_gf().expand(&bounds).unwrap();
    let lhs = g.mul(&one.sub(&y).unwrap()).unwrap();
    tally.check(lhs == f.add(&ft).unwrap(), || {
        "tail accumulation equation".to_string()
    });
    tally.into_suite(
        "functional-equations",
        "truncation x <= 10, y <= 20".to_string(),
        String::new(),
    )
}

fn four_block_sum() -> Suite {
    let bounds = [6usize, 6, 6];
    let vars: [&str; 3] = ["x", "y", "z"];
    let mut total = TruncatedSeries::zero(&vars, &bounds);
    for block in &second_moment_blocks() {
        total = total.add(&block.expand(&bounds).unwrap()).unwrap();
    }
    let mut tally = Tally::new();
    tally.check(
        total == block_sum_gf().expand(&bounds).unwrap(),
        || "assembled block sum".to_string(),
    );
    tally.into_suite(
        "four-block-sum",
        "truncation x, y, z <= 6".to_string(),
        "the four product blocks expanded separately sum to the assembled numerator".to_string(),
    )
}

fn v_monotonicity() -> Suite {
    let results: Vec<(u64, bool, String)> = (0..1u64 << 8)
        .into_par_iter()
        .map(|t| {
            // engine-side relations and monotonicity
            let report = check_v_monotonicity(t, 12).unwrap();
            if !report.ok() {
                let v = &report.violations[0];
                return (t, false, format!("t={t} rule={} k={} j={}", v.rule, v.k, v.j));
            }
            // engine vs enumeration
            let weight = hamming_weight(t) as i64;
            for k in 1..=12u32 {
                let fast = tail_counts(t, k).unwrap();
                let slow = delta_distribution(t, k).unwrap();
                for j in -(k as i64) - 1..=weight + 1 {
                    if fast.get(j) != slow.get(j) as u128 {
                        return (t, false, format!("engine vs enumeration t={t} k={k} j={j}"));
                    }
                }
            }
            (t, true, String::new())
        })
        .collect();
    let mut tally = Tally::new();
    for (t, ok, detail) in results {
        tally.check(ok, || format!("t={t}: {detail}"));
    }
    tally.into_suite(
        "v-monotonicity",
        "t < 2^8, k <= 12, j in [-13, w(t)+1]".to_string(),
        "normalized tail counts nonincreasing in width; halving recurrences; engine = enumeration"
            .to_string(),
    )
}

fn cusick_density_consistency() -> Suite {
    let results: Vec<(u64, bool, String)> = (1..1u64 << 10)
        .into_par_iter()
        .map(|t| {
            let d = carrystats::cusick::c_density(t).unwrap();
            let k = (d.alpha + d.mu).max(d.k_used);
            let slow = delta_distribution(t, k).unwrap();
            if d.c != slow.normalized(0) {
                return (t, false, "c vs enumeration".to_string());
            }
            if d.c_tilde != slow.normalized(1) {
                return (t, false, "c-tilde vs enumeration".to_string());
            }
            // partition: the weight-dropping event is the complement of c
            let drop = (1u64 << k) - slow.get(0);
            let complement =
                BigRational::one() - BigRational::new(BigInt::from(drop), BigInt::one() << k);
            if d.c != complement {
                return (t, false, "partition identity".to_string());
            }
            (t, true, String::new())
        })
        .collect();
    let mut tally = Tally::new();
    for (t, ok, detail) in results {
        tally.check(ok, || format!("t={t}: {detail}"));
    }
    tally.into_suite(
        "cusick-density-consistency",
        "1 <= t < 2^10, stabilized widths".to_string(),
        String::new(),
    )
}

pub fn run(ctx: &Context, sink: &mut ReportSink, k_max: u32) -> anyhow::Result<Outcome> {
    if !(2..=12).contains(&k_max) {
        anyhow::bail!("crosscheck brute-force legs support 2 <= k-max <= 12 (got {k_max})");
    }
    let trivariate_cap = k_max.min(8);
    let second_cap = k_max.min(10);

    let levels = levels_dp(k_max, &ctx.budget)?;
    let slow_sums: Vec<carrystats::moments::SecondMomentTables> = levels
        .iter()
        .filter(|l| l.k() <= second_cap)
        .map(second_moment_sums_from_level)
        .collect();
    let series = SecondMomentSeries::expand(trivariate_cap)
        .map_err(|e| anyhow::anyhow!("trivariate expansion failed: {e}"))?;

    let mut suites = Vec::new();
    let mut timed = |name: &str, suite: Suite| {
        eprintln!(
            "crosscheck: {name} {} ({} cases, {} mismatches)",
            suite.status(),
            suite.cases,
            suite.mismatches
        );
        suites.push(suite);
    };

    timed("dp-vs-bruteforce", dp_vs_bruteforce(&levels));
    timed("histogram-mass", histogram_mass(&levels));
    timed("complement-symmetry", complement_symmetry(&levels));
    timed("tail-oracle-agreement", tail_oracle_agreement(&levels));
    timed("pair-set-totals", pair_set_totals(&levels));
    timed("tail-saturation", saturation(&levels));
    timed("theta-identity", theta_identity());
    timed("first-moment-tables", first_moment_tables_vs_sums(&levels));
    timed(
        "second-moment-tables",
        second_moment_tables_vs_sums(&levels, &slow_sums, second_cap),
    );
    timed("family-symmetries", family_symmetries(&slow_sums));
    timed("first-moment-identity", first_moment_identity(&levels));
    timed("first-moment-offset", first_moment_offset(&levels));
    timed("second-moment-triple", second_moment_triple(&levels, &series));
    timed("gf-bivariate", gf_bivariate(second_cap));
    timed("gf-trivariate-grid", gf_trivariate_grid(&series));
    timed("functional-equations", functional_equations());
    timed("four-block-sum", four_block_sum());
    timed("v-monotonicity", v_monotonicity());
    timed("cusick-density-consistency", cusick_density_consistency());

    let all_pass = suites.iter().all(|s| s.mismatches == 0);

    match ctx.format {
        ReportFormat::Csv => {
            let header = [
                "suite",
                "budget",
                "cases",
                "mismatches",
                "status",
                "first_counterexample",
                "note",
            ];
            let rows: Vec<Vec<String>> = suites
                .iter()
                .map(|s| {
                    vec![
                        s.name.to_string(),
                        s.budget.clone(),
                        s.cases.to_string(),
                        s.mismatches.to_string(),
                        s.status().to_string(),
                        s.first_counterexample.clone(),
                        s.note.clone(),
                    ]
                })
                .collect();
            sink.write_csv(&header, &rows)?;
        }
        ReportFormat::Json => {
            let doc = json!({
                "kind": "crosscheck",
                "k_max": k_max,
                "trivariate_k_max": trivariate_cap,
                "all_pass": all_pass,
                "suites": suites
                    .iter()
                    .map(|s| {
                        json!({
                            "suite": s.name,
                            "budget": s.budget,
                            "cases": s.cases,
                            "mismatches": s.mismatches,
                            "status": s.status(),
                            "first_counterexample": s.first_counterexample,
                            "note": s.note,
                        })
                    })
                    .collect::<Vec<_>>(),
            });
            sink.write_json(&doc)?;
        }
    }

    Ok(if all_pass {
        Outcome::AllGood
    } else {
        Outcome::ViolationFound
    })
}
