//! The exhaustive Tu-Deng sweep: one report row per level k.

use serde_json::json;

use carrystats::carry::{for_each_level, scan_level, tu_deng_instance, TuDengKReport};

use crate::report::{fmt_f64, fmt_ratio, ratio_to_f64, ReportSink};
use crate::{Context, Outcome, ReportFormat};

struct PerInstanceRow {
    k: u32,
    t: u64,
    gamma: u64,
    p: String,
    p_float: f64,
}

pub fn run(
    ctx: &Context,
    sink: &mut ReportSink,
    k_min: u32,
    k_max: u32,
    epsilon: f64,
    dump_per_t: Option<u64>,
) -> anyhow::Result<Outcome> {
    if k_min < 2 || k_min > k_max {
        anyhow::bail!("need 2 <= k-min <= k-max (got {k_min}..{k_max})");
    }
    let mut reports: Vec<TuDengKReport> = Vec::new();
    let mut per_t: Vec<PerInstanceRow> = Vec::new();
    for_each_level(k_max, &ctx.budget, |tables| {
        let k = tables.k();
        if k < k_min {
            return Ok(());
        }
        let report = scan_level(tables, epsilon)?;
        eprintln!(
            "verify-tudeng: k={k} violations={} max_p={} wall={}ms",
            report.violations, report.max_p, report.wall_time_ms
        );
        if let Some(limit) = dump_per_t {
            let top = (1u64 << k) - 1;
            for t in 1..top.min(limit + 1) {
                let inst = tu_deng_instance(t, k, tables)?;
                per_t.push(PerInstanceRow {
                    k,
                    t,
                    gamma: inst.gamma_tail1,
                    p: fmt_ratio(&inst.p),
                    p_float: ratio_to_f64(&inst.p),
                });
            }
        }
        reports.push(report);
        Ok(())
    })?;

    let violations_total: u64 = reports.iter().map(|r| r.violations).sum();

    match ctx.format {
        ReportFormat::Csv => {
            let mut header = vec![
                "k",
                "epsilon",
                "violations",
                "max_p",
                "max_p_float",
                "argmax_t",
                "window_inside",
                "window_outside",
                "normalized_outside",
                "sum_gamma",
                "mean_p_float",
                "exact_arithmetic",
            ];
            if ctx.include_timings {
                header.push("wall_time_ms");
            }
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let mut row = vec![
                        r.k.to_string(),
                        fmt_f64(r.epsilon),
                        r.violations.to_string(),
                        fmt_ratio(&r.max_p),
                        fmt_f64(ratio_to_f64(&r.max_p)),
                        r.argmax_t.to_string(),
                        r.window_inside.to_string(),
                        r.window_outside.to_string(),
                        fmt_f64(r.normalized_outside),
                        r.sum_gamma.to_string(),
                        fmt_f64(ratio_to_f64(&r.mean_p)),
                        "true".to_string(),
                    ];
                    if ctx.include_timings {
                        row.push(r.wall_time_ms.to_string());
                    }
                    row
                })
                .collect();
            sink.write_csv(&header, &rows)?;
            if !per_t.is_empty() {
                let header = ["k", "t", "gamma_tail", "p", "p_float"];
                let rows: Vec<Vec<String>> = per_t
                    .iter()
                    .map(|r| {
                        vec![
                            r.k.to_string(),
                            r.t.to_string(),
                            r.gamma.to_string(),
                            r.p.clone(),
                            fmt_f64(r.p_float),
                        ]
                    })
                    .collect();
                sink.write_csv(&header, &rows)?;
            }
        }
        ReportFormat::Json => {
            let levels: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    let mut level = json!({
                        "k": r.k,
                        "violations": r.violations,
                        "max_p": fmt_ratio(&r.max_p),
                        "max_p_float": ratio_to_f64(&r.max_p),
                        "argmax_t": r.argmax_t,
                        "window_inside": r.window_inside,
                        "window_outside": r.window_outside,
                        "normalized_outside": r.normalized_outside,
                        "sum_gamma": r.sum_gamma.to_string(),
                        "mean_p": fmt_ratio(&r.mean_p),
                        "mean_p_float": ratio_to_f64(&r.mean_p),
                    });
                    if ctx.include_timings {
                        level["wall_time_ms"] = json!(r.wall_time_ms as u64);
                    }
                    level
                })
                .collect();
            let mut doc = json!({
                "kind": "verify-tudeng",
                "k_min": k_min,
                "k_max": k_max,
                "epsilon": epsilon,
                "exact_arithmetic": true,
                "violations_total": violations_total,
                "levels": levels,
            });
            if !per_t.is_empty() {
                doc["per_t"] = per_t
                    .iter()
                    .map(|r| {
                        json!({
                            "k": r.k,
                            "t": r.t,
                            "gamma_tail": r.gamma,
                            "p": r.p,
                            "p_float": r.p_float,
                        })
                    })
                    .collect();
            }
            sink.write_json(&doc)?;
        }
    }

    Ok(if violations_total == 0 {
        Outcome::AllGood
    } else {
        Outcome::ViolationFound
    })
}
