//! The Cusick density sweep: summary, extremal margins and leading sample
//! rows.

use serde_json::json;

use carrystats::cusick::{c_density, verify_cusick, CusickDensities};

use crate::report::{fmt_f64, fmt_ratio, ratio_to_f64, ReportSink};
use crate::{Context, Outcome, ReportFormat};

fn density_cells(d: &CusickDensities) -> Vec<String> {
    vec![
        d.t.to_string(),
        d.alpha.to_string(),
        d.mu.to_string(),
        d.k_used.to_string(),
        fmt_ratio(&d.c),
        fmt_f64(ratio_to_f64(&d.c)),
        fmt_ratio(&d.c_tilde),
        fmt_f64(ratio_to_f64(&d.c_tilde)),
    ]
}

fn density_json(d: &CusickDensities) -> serde_json::Value {
    json!({
        "t": d.t,
        "alpha": d.alpha,
        "mu": d.mu,
        "k_used": d.k_used,
        "c": fmt_ratio(&d.c),
        "c_float": ratio_to_f64(&d.c),
        "c_tilde": fmt_ratio(&d.c_tilde),
        "c_tilde_float": ratio_to_f64(&d.c_tilde),
    })
}

pub fn run(
    ctx: &Context,
    sink: &mut ReportSink,
    t_max: u64,
    dump_per_t: u64,
) -> anyhow::Result<Outcome> {
    if t_max < 2 {
        anyhow::bail!("need t-max >= 2 so at least t = 1 is checked");
    }
    let start = std::time::Instant::now();
    let report = verify_cusick(t_max)?;
    let wall_ms = start.elapsed().as_millis();
    eprintln!(
        "cusick: checked {} instances, violations={} wall={}ms",
        report.checked, report.violations, wall_ms
    );

    let min_c = c_density(report.min_c_margin_t)?;
    let max_ct = c_density(report.max_c_tilde_margin_t)?;
    let sample: Vec<CusickDensities> = (1..t_max.min(dump_per_t + 1))
        .map(c_density)
        .collect::<Result<_, _>>()?;

    match ctx.format {
        ReportFormat::Csv => {
            let mut header = vec![
                "record",
                "t_max",
                "checked",
                "violations",
                "t",
                "alpha",
                "mu",
                "k_used",
                "c",
                "c_float",
                "c_tilde",
                "c_tilde_float",
            ];
            if ctx.include_timings {
                header.push("wall_time_ms");
            }
            let pad = |mut row: Vec<String>| -> Vec<String> {
                if ctx.include_timings {
                    row.push(String::new());
                }
                row
            };
            let mut rows = Vec::new();
            let mut summary = vec![
                "summary".to_string(),
                t_max.to_string(),
                report.checked.to_string(),
                report.violations.to_string(),
            ];
            summary.extend(std::iter::repeat_with(String::new).take(8));
            if ctx.include_timings {
                summary.push(wall_ms.to_string());
            }
            rows.push(summary);
            let labelled = |label: &str, d: &CusickDensities| -> Vec<String> {
                let mut row = vec![
                    label.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                ];
                row.extend(density_cells(d));
                row
            };
            rows.push(pad(labelled("min-c-margin", &min_c)));
            rows.push(pad(labelled("max-c-tilde-margin", &max_ct)));
            for d in &sample {
                rows.push(pad(labelled("sample", d)));
            }
            sink.write_csv(&header, &rows)?;
        }
        ReportFormat::Json => {
            let mut doc = json!({
                "kind": "cusick",
                "t_max": t_max,
                "checked": report.checked,
                "violations": report.violations,
                "exact_arithmetic": true,
                "min_c_margin": {
                    "t": report.min_c_margin_t,
                    "value": fmt_ratio(&report.min_c_margin),
                    "value_float": ratio_to_f64(&report.min_c_margin),
                    "densities": density_json(&min_c),
                },
                "max_c_tilde_margin": {
                    "t": report.max_c_tilde_margin_t,
                    "value": fmt_ratio(&report.max_c_tilde_margin),
                    "value_float": ratio_to_f64(&report.max_c_tilde_margin),
                    "densities": density_json(&max_ct),
                },
                "max_k_used": report.max_k_used,
                "sample": sample.iter().map(density_json).collect::<Vec<_>>(),
            });
            if ctx.include_timings {
                doc["wall_time_ms"] = json!(wall_ms as u64);
            }
            sink.write_json(&doc)?;
        }
    }

    Ok(if report.violations == 0 {
        Outcome::AllGood
    } else {
        Outcome::ViolationFound
    })
}
