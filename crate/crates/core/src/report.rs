//! Run configuration and the flat JSON records written by every command.
//!
//! Each output line is one JSON object carrying `format_version` and a
//! `record` tag. Readers reject unknown fields.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::FORMAT_VERSION;

/// Fully resolved parameters of one run. Embedded verbatim in the header
/// record so a run can be repeated from its output alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: String,
    /// Input graph file; when absent the graph is generated from `n`, `M`/`p`
    /// and `seed`.
    pub graph: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<u64>,
    pub p: Option<f64>,
    pub seed: u64,
    pub samples: u64,
    pub workers: usize,
    pub beta: f64,
    pub eps: f64,
    /// Half-width of the pointwise window, in standard deviations.
    pub window: f64,
    pub budget: u64,
    /// Dense-band margin for warnings.
    pub delta: f64,
    /// Use exhaustive enumeration instead of sampling.
    pub exact: bool,
    /// Outer subsets for the Stein estimates.
    pub outer: u64,
    pub t: Option<usize>,
    pub r: Option<u64>,
    /// Constant in the `C·r/n` interval bound.
    pub c: f64,
    pub grid: Vec<usize>,
    pub seeds: u32,
    pub metric: String,
    /// Output destinations are left out of records so that reruns into
    /// different directories stay byte-identical.
    #[serde(skip_serializing)]
    pub out_dir: Option<String>,
    #[serde(skip_serializing)]
    pub output: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: String::new(),
            graph: None,
            n: None,
            k: None,
            m: None,
            p: None,
            seed: 0,
            samples: 1_000_000,
            workers: 1,
            beta: 1.0 / 14.0,
            eps: 0.05,
            window: 2.0,
            budget: crate::exact::DEFAULT_BUDGET,
            delta: 0.1,
            exact: false,
            outer: 200,
            t: None,
            r: None,
            c: 4.0,
            grid: Vec::new(),
            seeds: 5,
            metric: "ks".into(),
            out_dir: None,
            output: None,
        }
    }
}

fn version() -> String {
    FORMAT_VERSION.to_string()
}

macro_rules! record {
    ($(#[$doc:meta])* $name:ident, $tag:literal { $($(#[$fa:meta])* $f:ident : $ty:ty),* $(,)? }) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            pub format_version: String,
            pub record: String,
            $($(#[$fa])* pub $f: $ty,)*
        }

        impl $name {
            pub const TAG: &'static str = $tag;

            #[allow(clippy::too_many_arguments)]
            pub fn new($($f: $ty),*) -> Self {
                $name { format_version: version(), record: $tag.into(), $($f,)* }
            }
        }
    };
}

record!(
    /// First line of every run.
    RunHeader, "header" { config: ExperimentConfig }
);

record!(
    StatsRecord, "stats" {
        n: u64,
        #[serde(rename = "M")]
        m: u64,
        pairs: u64,
        density: f64,
        mean_degree: f64,
        #[serde(rename = "V")]
        v: f64,
        #[serde(rename = "P")]
        p: u64,
        path_identity: bool,
        third_moment: f64,
        regular: bool,
    }
);

record!(
    /// One scalar statistic of one experiment.
    MetricRecord, "metric" {
        metric: String,
        value: f64,
        n: usize,
        k: usize,
        #[serde(rename = "M")]
        m: u64,
        /// `None` for exact distributions.
        samples: Option<u64>,
        window: Option<f64>,
        seed: Option<u64>,
    }
);

record!(
    SteinRecord, "stein" {
        n: usize,
        k: usize,
        #[serde(rename = "M")]
        m: u64,
        lambda: f64,
        #[serde(rename = "Sigma11")]
        sigma11: f64,
        sigma11_vs_lambda: f64,
        singular: bool,
        /// Largest drift error over the checked subsets, as an exact rational.
        drift_max_error: String,
        drift_subsets: u64,
        /// Relative error of Σ against enumeration, when within budget.
        sigma_rel_error: Option<f64>,
        #[serde(rename = "A_hat")]
        a_hat: Option<f64>,
        #[serde(rename = "A_se")]
        a_se: Option<f64>,
        #[serde(rename = "B_hat")]
        b_hat: Option<f64>,
        #[serde(rename = "B_se")]
        b_se: Option<f64>,
        #[serde(rename = "T_hat")]
        t_hat: Option<f64>,
        seed: u64,
    }
);

record!(
    ScheduleRecord, "schedule" {
        n: usize,
        beta: f64,
        eps: f64,
        j0: usize,
        a: u64,
        total_t: u64,
        all_valid: bool,
        a_in_target: bool,
        target_lo: f64,
        target_hi: f64,
    }
);

record!(
    WindowRecord, "window" {
        n: usize,
        k: usize,
        t: usize,
        lo: i64,
        hi: i64,
        mode: String,
        samples: u64,
        seed: u64,
        p: f64,
        proportion: f64,
        binomial_mass: f64,
        deviation: f64,
        draws: u64,
    }
);

record!(
    /// Least-squares fit of `ln(value)` on `ln(n)`.
    FitRecord, "fit" {
        metric: String,
        slope: f64,
        slope_se: f64,
        intercept: f64,
        points: usize,
    }
);

/// Any record, dispatched on its `record` tag.
#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    Header(RunHeader),
    Stats(StatsRecord),
    Metric(MetricRecord),
    Stein(SteinRecord),
    Schedule(ScheduleRecord),
    Window(WindowRecord),
    Fit(FitRecord),
}

fn typed<T: DeserializeOwned>(v: serde_json::Value) -> Result<T> {
    Ok(serde_json::from_value(v)?)
}

/// Parses and validates one JSON line.
pub fn parse_record(line: &str) -> Result<Record> {
    let v: serde_json::Value = serde_json::from_str(line)?;
    match v.get("format_version").and_then(|x| x.as_str()) {
        Some(FORMAT_VERSION) => {}
        other => return Err(Error::invalid(format!("unsupported format_version {other:?}"))),
    }
    let tag = v.get("record").and_then(|x| x.as_str()).unwrap_or_default().to_string();
    Ok(match tag.as_str() {
        RunHeader::TAG => Record::Header(typed(v)?),
        StatsRecord::TAG => Record::Stats(typed(v)?),
        MetricRecord::TAG => Record::Metric(typed(v)?),
        SteinRecord::TAG => Record::Stein(typed(v)?),
        ScheduleRecord::TAG => Record::Schedule(typed(v)?),
        WindowRecord::TAG => Record::Window(typed(v)?),
        FitRecord::TAG => Record::Fit(typed(v)?),
        other => return Err(Error::invalid(format!("unknown record type {other:?}"))),
    })
}

/// One JSON line, without the newline.
pub fn to_line<T: Serialize>(rec: &T) -> Result<String> {
    Ok(serde_json::to_string(rec)?)
}
