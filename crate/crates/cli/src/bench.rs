use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use cubic_tsp::generators::{cage, hc_rich_family, random_cubic};
use cubic_tsp::graph::WeightedMultigraph;
use cubic_tsp::recurrence::{eval_t, MAX_N};
use cubic_tsp::search::{solve, SearchConfig};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchKind {
    Random,
    Cage,
    Hc,
}

/// `a..b` or `a..b:step`, both ends inclusive, or a single value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl SizeRange {
    pub fn values(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.step)
    }
}

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a size: {t:?}"));
        let (range, step) = match s.split_once(':') {
            Some((r, st)) => (r, num(st)?),
            None => (s, 1),
        };
        let (start, end) = match range.split_once("..") {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(range)?, num(range)?),
        };
        if step == 0 || start > end {
            return Err(format!("empty size range {s:?}"));
        }
        Ok(SizeRange { start, end, step })
    }
}

impl fmt::Display for SizeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}:{}", self.start, self.end, self.step)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub instance_label: String,
    pub seed: u64,
    pub outcome: String,
    pub leaves: u64,
    pub branches_total: u64,
    pub a_total: u64,
    pub b_total: u64,
    pub d_total: u64,
    pub log2_branches: String,
    pub log2_t_bound: String,
    pub wall_ms: u64,
}

struct Job {
    label: String,
    graph: WeightedMultigraph,
    seed: u64,
}

/// splitmix64, to spread `(seed, size, rep)` over independent streams
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn jobs(kind: BenchKind, sizes: &SizeRange, reps: u32, seed: u64) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for size in sizes.values() {
        for rep in 0..reps {
            let job_seed = mix(seed ^ mix(size as u64) ^ mix(u64::from(rep) << 32));
            let (label, graph) = match kind {
                BenchKind::Random => (format!("random-{size}-{rep}"), random_cubic(size, job_seed)?),
                BenchKind::Cage => (format!("cage-{size}"), cage(size)?),
                BenchKind::Hc => (format!("hc-{size}"), hc_rich_family(size)?),
            };
            jobs.push(Job { label, graph, seed: job_seed });
        }
    }
    Ok(jobs)
}

fn log2_t(n: usize) -> String {
    if n > MAX_N {
        return String::new();
    }
    eval_t(n).map(|t| format!("{:.6}", t.log2)).unwrap_or_default()
}

/// Random kinds draw a fresh graph per rep; cages and the hc family repeat
/// the same graph with a fresh search seed.
pub fn run(kind: BenchKind, sizes: &SizeRange, reps: u32, seed: u64) -> Result<Vec<BenchRecord>> {
    let jobs = jobs(kind, sizes, reps, seed)?;
    jobs.into_par_iter()
        .map(|job| {
            let n = job.graph.vertex_count();
            let start = Instant::now();
            let r = solve(&job.graph, &SearchConfig { seed: job.seed, ..Default::default() })
                .with_context(|| format!("solving {}", job.label))?;
            let wall_ms = start.elapsed().as_millis() as u64;
            let s = r.stats;
            Ok(BenchRecord {
                n,
                instance_label: job.label,
                seed: job.seed,
                outcome: r.outcome.cost().map_or("none".to_string(), |c| c.to_string()),
                leaves: s.leaves,
                branches_total: s.branches,
                a_total: s.a_total,
                b_total: s.b_total,
                d_total: s.d_total,
                log2_branches: format!("{:.6}", (s.leaves.max(1) as f64).log2()),
                log2_t_bound: log2_t(n),
                wall_ms,
            })
        })
        .collect()
}

pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        if r.a_total + r.b_total + r.d_total != r.branches_total {
            bail!("branch counts of {} do not add up", r.instance_label);
        }
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
