//! Connection counts and timings over the synthetic scenarios.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::arborescence::EnumOptions;
use crate::connections::find_connections_with;
use crate::error::{Error, Result};
use crate::naive::{naive_all_connections, NaiveLimits};
use crate::scenario::{generate_scenario, ScenarioKind};

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Grow,
    Naive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Grow => "grow",
            Method::Naive => "naive",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "grow" => Ok(Method::Grow),
            "naive" => Ok(Method::Naive),
            _ => Err(format!("unknown method '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub kind: ScenarioKind,
    pub n: usize,
    pub method: Method,
    pub count: u64,
    #[serde(rename = "elapsed_s")]
    pub elapsed: f64,
    /// False when the run hit the time limit (or was skipped because a
    /// smaller instance already did); `count` is then only a lower bound.
    pub completed: bool,
}

/// Counts connections of one scenario instance with one method.
pub fn run_cell(kind: ScenarioKind, n: usize, method: Method, time_limit: Duration) -> Result<BenchRecord> {
    let inst = generate_scenario(kind, n)?;
    let start = Instant::now();
    let deadline = start.checked_add(time_limit);
    let (count, completed) = match method {
        Method::Grow => {
            let opts = EnumOptions { limit: None, deadline };
            let (_, out) = find_connections_with(&inst.graph, &inst.matching, inst.exposed, opts, |_| {})?;
            (out.count, out.completed)
        }
        Method::Naive => {
            let limits = NaiveLimits { max_steps: None, deadline };
            match naive_all_connections(&inst.graph, &inst.matching, inst.exposed, &limits) {
                Ok(set) => (set.len() as u64, true),
                Err(Error::LimitExceeded(_)) => (0, false),
                Err(e) => return Err(e),
            }
        }
    };
    Ok(BenchRecord {
        kind,
        n,
        method,
        count,
        elapsed: start.elapsed().as_secs_f64(),
        completed,
    })
}

/// One record per `(n, method)`, ordered by `n` then method. Once a method
/// times out, larger `n` are not attempted for it and are reported as
/// incomplete with zero count and elapsed time.
pub fn run_bench(
    kind: ScenarioKind,
    n_from: usize,
    n_to: usize,
    methods: &[Method],
    time_limit: Duration,
) -> Result<Vec<BenchRecord>> {
    if n_from < 2 {
        return Err(Error::BadSize(n_from));
    }
    let mut methods = methods.to_vec();
    methods.sort_unstable();
    methods.dedup();
    let mut timed_out = vec![false; methods.len()];
    let mut out = Vec::new();
    for n in n_from..=n_to {
        for (mi, &method) in methods.iter().enumerate() {
            if timed_out[mi] {
                out.push(BenchRecord { kind, n, method, count: 0, elapsed: 0.0, completed: false });
                continue;
            }
            let rec = run_cell(kind, n, method, time_limit)?;
            timed_out[mi] = !rec.completed;
            out.push(rec);
        }
    }
    Ok(out)
}

/// Writes `kind,n,method,count,elapsed_s,completed` rows with a header.
pub fn write_csv<W: Write>(records: &[BenchRecord], w: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    for r in records {
        writer
            .serialize(r)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    writer.flush()?;
    Ok(())
}
