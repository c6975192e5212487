use std::fmt::Write;

use ktour_core::stats::ViolationHistogramEstimate;
use ktour_core::{Alpha, Estimate};
use serde::Serialize;

use crate::args::Format;

pub const ROW_HEADER: &str =
    "alpha,min,point,max,std_error,cpu_seconds,quantity,ci_low,ci_high,samples,replications";

/// One line of an estimate or sweep table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub alpha: Alpha,
    pub min: f64,
    pub point: f64,
    pub max: f64,
    pub std_error: f64,
    /// Mean seconds per replication, only when timing was requested.
    pub cpu_seconds: Option<f64>,
    pub quantity: &'static str,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: u64,
    pub replications: u32,
}

impl ResultRow {
    pub fn new(quantity: &'static str, e: &Estimate, cpu_seconds: Option<f64>) -> Self {
        ResultRow {
            alpha: e.alpha,
            min: e.replication_min,
            point: e.point,
            max: e.replication_max,
            std_error: e.std_error,
            cpu_seconds,
            quantity,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
            samples: e.samples_total,
            replications: e.replications,
        }
    }
}

/// Six significant digits, `1.22280E+15` style.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.5E}");
    let (mantissa, exp) = s.split_once('E').expect("E format has an exponent");
    let exp: i32 = exp.parse().expect("E format exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

pub fn render_rows(rows: &[ResultRow], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut out = String::from(ROW_HEADER);
            out.push('\n');
            for r in rows {
                let cpu = r.cpu_seconds.map_or_else(|| "NA".to_string(), sci);
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.alpha,
                    sci(r.min),
                    sci(r.point),
                    sci(r.max),
                    sci(r.std_error),
                    cpu,
                    r.quantity,
                    sci(r.ci_low),
                    sci(r.ci_high),
                    r.samples,
                    r.replications
                )
                .unwrap();
            }
            out
        }
    }
}

#[derive(Serialize)]
struct HistogramRow {
    k: u32,
    point: f64,
    std_error: f64,
}

pub fn render_histogram(h: &ViolationHistogramEstimate, format: Format) -> String {
    let rows: Vec<HistogramRow> = h
        .per_k
        .iter()
        .map(|(&k, e)| HistogramRow {
            k,
            point: e.point,
            std_error: e.std_error,
        })
        .collect();
    match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = String::from("k,point,std_error\n");
            for r in rows {
                writeln!(out, "{},{},{}", r.k, sci(r.point), sci(r.std_error)).unwrap();
            }
            out
        }
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}
