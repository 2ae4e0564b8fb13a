//! Benchmark harness: build and query timings for each index variant next
//! to the BFS baseline.
//!
//! CSV columns, one row per (dataset, engine):
//!
//! | column          | meaning                                                  |
//! |-----------------|----------------------------------------------------------|
//! | `dataset`       | free-form name of the graph                              |
//! | `variant`       | `wkri`, `gwkri`, `lwkri` or `bfs`                        |
//! | `vertices`      | vertex count                                             |
//! | `edges`         | undirected edge count                                    |
//! | `cover_size`    | hop count of cover-based variants, empty otherwise       |
//! | `entries`       | total label entries including self-entries               |
//! | `bytes`         | size of the serialized index file                        |
//! | `build_s`       | median build time in seconds                             |
//! | `query_total_s` | median wall time of the whole batch; empty on timeout    |
//! | `query_avg_us`  | `query_total_s` divided by the batch size, microseconds  |
//!
//! Timings are medians over `repeat` runs with warm caches.

use std::fmt;
use std::io::Write;
use std::time::{Duration, Instant};

use crate::cover::TieBreak;
use crate::graph::WeightedGraph;
use crate::index::{LabelIndex, Variant};
use crate::par;
use crate::query::{batch_query, bfs_with, BfsScratch, Query};
use crate::Result;

pub const CSV_HEADER: &str = "dataset,variant,vertices,edges,cover_size,entries,bytes,build_s,query_total_s,query_avg_us";

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub dataset: String,
    pub variants: Vec<Variant>,
    pub repeat: usize,
    /// Per-batch budget for the BFS baseline.
    pub bfs_timeout: Duration,
    pub include_bfs: bool,
    /// Tie-break among equal degrees for orders and covers.
    pub tie_break: TieBreak,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            dataset: "graph".into(),
            variants: Variant::ALL.to_vec(),
            repeat: 3,
            bfs_timeout: Duration::from_secs(300),
            include_bfs: true,
            tie_break: TieBreak::AscendingId,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub variant: String,
    pub vertices: usize,
    pub edges: usize,
    pub cover_size: Option<usize>,
    pub entries: Option<usize>,
    pub bytes: Option<usize>,
    pub build_s: Option<f64>,
    /// `None` when the batch exceeded its timeout.
    pub query_total_s: Option<f64>,
    pub query_avg_us: Option<f64>,
    /// Answers that disagree with the supplied expected column.
    pub wrong_answers: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, variant: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.variant == variant)
    }

    pub fn write_csv<W: Write>(&self, mut out: W, header: bool) -> Result<()> {
        if header {
            writeln!(out, "{CSV_HEADER}")?;
        }
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.dataset,
                r.variant,
                r.vertices,
                r.edges,
                opt(r.cover_size),
                opt(r.entries),
                opt(r.bytes),
                opt(r.build_s.map(|s| format!("{s:.6}"))),
                opt(r.query_total_s.map(|s| format!("{s:.6}"))),
                opt(r.query_avg_us.map(|s| format!("{s:.3}"))),
            )?;
        }
        Ok(())
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:<6} {:>9} {:>9} {:>8} {:>12} {:>12} {:>10} {:>12} {:>10}",
            "dataset", "engine", "|V|", "|E|", "|M|", "entries", "bytes", "build s", "queries s", "avg us"
        )?;
        for r in &self.rows {
            let dash = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            writeln!(
                f,
                "{:<12} {:<6} {:>9} {:>9} {:>8} {:>12} {:>12} {:>10} {:>12} {:>10}",
                r.dataset,
                r.variant,
                r.vertices,
                r.edges,
                dash(r.cover_size.map(|x| x.to_string())),
                dash(r.entries.map(|x| x.to_string())),
                dash(r.bytes.map(|x| x.to_string())),
                dash(r.build_s.map(|s| format!("{s:.3}"))),
                // A timed-out baseline prints as "/".
                r.query_total_s.map(|s| format!("{s:.4}")).unwrap_or_else(|| "/".into()),
                dash(r.query_avg_us.map(|s| format!("{s:.2}"))),
            )?;
        }
        Ok(())
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn count_wrong(answers: &[bool], expected: Option<&[bool]>) -> usize {
    expected.map_or(0, |e| answers.iter().zip(e).filter(|(a, b)| a != b).count())
}

/// Builds each variant `repeat` times, then times `repeat` batches over it.
pub fn bench_variant(
    g: &WeightedGraph,
    variant: Variant,
    queries: &[Query],
    expected: Option<&[bool]>,
    config: &BenchConfig,
) -> Result<BenchRow> {
    let repeat = config.repeat.max(1);
    let mut builds = Vec::with_capacity(repeat);
    let mut index: Option<LabelIndex> = None;
    for _ in 0..repeat {
        let t = Instant::now();
        let built = crate::build_ordered(g, variant, &config.tie_break, Default::default())?;
        builds.push(t.elapsed().as_secs_f64());
        index = Some(built);
    }
    let index = index.expect("repeat >= 1");
    let mut times = Vec::with_capacity(repeat);
    let mut wrong = 0;
    for _ in 0..repeat {
        let res = batch_query(&index, queries)?;
        times.push(res.elapsed.as_secs_f64());
        wrong = count_wrong(&res.answers, expected);
    }
    let total = median(times);
    Ok(BenchRow {
        dataset: config.dataset.clone(),
        variant: variant.name().into(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        cover_size: index.cover_size(),
        entries: Some(index.entry_count()),
        bytes: Some(index.to_bytes().len()),
        build_s: Some(median(builds)),
        query_total_s: Some(total),
        query_avg_us: avg_us(total, queries.len()),
        wrong_answers: wrong,
    })
}

fn avg_us(total_s: f64, count: usize) -> Option<f64> {
    (count > 0).then(|| total_s * 1e6 / count as f64)
}

const BFS_CHUNK: usize = 256;

/// Runs the oracle over `queries` in chunks, giving up once `timeout` passes.
/// Returns the answers and elapsed time, or `None` on timeout.
pub fn timed_bfs(g: &WeightedGraph, queries: &[Query], timeout: Duration) -> Option<(Vec<bool>, Duration)> {
    let n = g.vertex_count();
    let start = Instant::now();
    let mut answers = Vec::with_capacity(queries.len());
    for chunk in queries.chunks(BFS_CHUNK) {
        answers.extend(par::map_with(chunk, || BfsScratch::new(n), |s, q| bfs_with(g, q, s).reachable));
        if start.elapsed() > timeout {
            return None;
        }
    }
    Some((answers, start.elapsed()))
}

pub fn bench_bfs(g: &WeightedGraph, queries: &[Query], expected: Option<&[bool]>, config: &BenchConfig) -> Result<BenchRow> {
    for q in queries {
        g.check(q.u)?;
        g.check(q.v)?;
    }
    let mut times = Vec::new();
    let mut wrong = 0;
    for _ in 0..config.repeat.max(1) {
        match timed_bfs(g, queries, config.bfs_timeout) {
            Some((answers, t)) => {
                times.push(t.as_secs_f64());
                wrong = count_wrong(&answers, expected);
            }
            None => {
                times.clear();
                break;
            }
        }
    }
    let total = (!times.is_empty()).then(|| median(times));
    Ok(BenchRow {
        dataset: config.dataset.clone(),
        variant: "bfs".into(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        cover_size: None,
        entries: None,
        bytes: None,
        build_s: None,
        query_total_s: total,
        query_avg_us: total.and_then(|t| avg_us(t, queries.len())),
        wrong_answers: wrong,
    })
}

/// Benchmarks every configured variant and, optionally, the BFS baseline.
pub fn run_bench(g: &WeightedGraph, queries: &[Query], expected: Option<&[bool]>, config: &BenchConfig) -> Result<BenchReport> {
    let mut rows = Vec::new();
    for &v in &config.variants {
        rows.push(bench_variant(g, v, queries, expected, config)?);
    }
    if config.include_bfs {
        rows.push(bench_bfs(g, queries, expected, config)?);
    }
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::example;
    use crate::workload::{generate, WorkloadSpec};

    fn config() -> BenchConfig {
        BenchConfig {
            dataset: "example".into(),
            repeat: 2,
            ..Default::default()
        }
    }

    #[test]
    fn example_sizes_follow_order() {
        let g = example();
        let w = generate(&g, &WorkloadSpec::balanced(&g, 40, 5)).unwrap();
        let report = run_bench(&g, &w.queries(), Some(&w.expected()), &config()).unwrap();
        assert_eq!(report.rows.len(), 4);
        let entries = |v| report.row(v).unwrap().entries.unwrap();
        // Default orders here: WKRI by degree, GWKRI/LWKRI by the cover.
        assert!(entries("lwkri") <= entries("gwkri") && entries("gwkri") <= entries("wkri"));
        assert!(report.rows.iter().all(|r| r.wrong_answers == 0));
        assert_eq!(report.row("gwkri").unwrap().cover_size, Some(3));
        assert!(report.row("bfs").unwrap().query_total_s.is_some());
    }

    #[test]
    fn csv_shape_and_determinism() {
        let g = example();
        let w = generate(&g, &WorkloadSpec::balanced(&g, 10, 5)).unwrap();
        let a = run_bench(&g, &w.queries(), None, &config()).unwrap();
        let b = run_bench(&g, &w.queries(), None, &config()).unwrap();
        let sizes = |r: &BenchReport| r.rows.iter().map(|x| (x.entries, x.bytes, x.cover_size)).collect::<Vec<_>>();
        assert_eq!(sizes(&a), sizes(&b));
        let mut buf = Vec::new();
        a.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines.iter().all(|l| l.split(',').count() == 10));
        assert!(lines[4].starts_with("example,bfs,7,9,,,,,"));
        assert!(a.to_string().contains("lwkri"));
    }

    #[test]
    fn bfs_timeout_reports_slash() {
        let g = example();
        let w = generate(&g, &WorkloadSpec::balanced(&g, 600, 5)).unwrap();
        let cfg = BenchConfig {
            bfs_timeout: Duration::ZERO,
            variants: vec![],
            ..config()
        };
        let report = run_bench(&g, &w.queries(), None, &cfg).unwrap();
        assert_eq!(report.rows[0].query_total_s, None);
        assert!(report.to_string().contains(" / "));
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0]), 2.5);
    }
}
