//! Exact normalized moments against their asymptotic expansions, plus the
//! rescaled standard deviation and its limit.

use serde_json::json;

use carrystats::moments::{
    first_moment_expansion, first_moment_normalized, moment_tables, second_moment_expansion,
    second_moment_normalized, second_moment_tables, sigma_limit, variance_from_tables,
};

use crate::report::{fmt_f64, ratio_to_f64, ReportSink};
use crate::{Context, Outcome, ReportFormat};

struct Row {
    k: u32,
    first_exact: f64,
    first_expansion: f64,
    second_exact: f64,
    second_expansion: f64,
    sigma: f64,
    sigma_times_k: f64,
}

impl Row {
    fn first_err(&self) -> f64 {
        (self.first_exact - self.first_expansion).abs()
    }

    fn second_err(&self) -> f64 {
        (self.second_exact - self.second_expansion).abs()
    }
}

pub fn run(ctx: &Context, sink: &mut ReportSink, k_max: u32) -> anyhow::Result<Outcome> {
    if k_max < 8 {
        anyhow::bail!("asymptotics needs k-max >= 8 (got {k_max})");
    }
    let first = moment_tables(k_max);
    let second = second_moment_tables(k_max);
    let limit = sigma_limit();

    let rows: Vec<Row> = (2..=k_max)
        .map(|k| -> anyhow::Result<Row> {
            let variance = variance_from_tables(&first[k as usize], &second[k as usize])?;
            Ok(Row {
                k,
                first_exact: ratio_to_f64(&first_moment_normalized(&first[k as usize])),
                first_expansion: first_moment_expansion(k),
                second_exact: ratio_to_f64(&second_moment_normalized(&second[k as usize])),
                second_expansion: second_moment_expansion(k),
                sigma: variance.sigma,
                sigma_times_k: variance.sigma_times_k,
            })
        })
        .collect::<Result<_, _>>()?;

    match ctx.format {
        ReportFormat::Csv => {
            let header = [
                "k",
                "first_exact",
                "first_expansion",
                "first_abs_err",
                "first_err_scaled",
                "second_exact",
                "second_expansion",
                "second_abs_err",
                "second_err_scaled",
                "sigma",
                "sigma_times_k",
                "sigma_limit_gap",
            ];
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let kf = r.k as f64;
                    vec![
                        r.k.to_string(),
                        fmt_f64(r.first_exact),
                        fmt_f64(r.first_expansion),
                        fmt_f64(r.first_err()),
                        fmt_f64(r.first_err() * kf.powf(3.5)),
                        fmt_f64(r.second_exact),
                        fmt_f64(r.second_expansion),
                        fmt_f64(r.second_err()),
                        fmt_f64(r.second_err() * kf.powf(2.5)),
                        fmt_f64(r.sigma),
                        fmt_f64(r.sigma_times_k),
                        fmt_f64((r.sigma_times_k - limit).abs()),
                    ]
                })
                .collect();
            sink.write_csv(&header, &body)?;
        }
        ReportFormat::Json => {
            let doc = json!({
                "kind": "asymptotics",
                "k_max": k_max,
                "sigma_limit": limit,
                "rows": rows
                    .iter()
                    .map(|r| {
                        let kf = r.k as f64;
                        json!({
                            "k": r.k,
                            "first_exact": r.first_exact,
                            "first_expansion": r.first_expansion,
                            "first_abs_err": r.first_err(),
                            "first_err_scaled": r.first_err() * kf.powf(3.5),
                            "second_exact": r.second_exact,
                            "second_expansion": r.second_expansion,
                            "second_abs_err": r.second_err(),
                            "second_err_scaled": r.second_err() * kf.powf(2.5),
                            "sigma": r.sigma,
                            "sigma_times_k": r.sigma_times_k,
                            "sigma_limit_gap": (r.sigma_times_k - limit).abs(),
                        })
                    })
                    .collect::<Vec<_>>(),
            });
            sink.write_json(&doc)?;
        }
    }
    Ok(Outcome::AllGood)
}
