//! Query workloads with oracle-classified expected answers.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraint::WeightConstraint;
use crate::error::{Error, Result};
use crate::graph::{IdMap, VertexId, Weight, WeightedGraph};
use crate::par;
use crate::query::{bfs_with, BfsScratch, Query};

/// Parameters of a generated workload.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkloadSpec {
    pub total: usize,
    /// Share of queries whose oracle answer is `true`.
    pub reachable_fraction: f64,
    /// Share of constraints that are `<= we` or `>= ws` rather than `[ws, we]`.
    pub semi_bounded_fraction: f64,
    /// Inclusive range the constraint bounds are drawn from.
    pub weight_range: (Weight, Weight),
    /// Inclusive range of `k`.
    pub k_range: (u32, u32),
    pub seed: u64,
    /// Candidate budget for rejection sampling; `None` means `1000 * total`.
    pub max_attempts: Option<usize>,
}

impl WorkloadSpec {
    /// Balanced workload over the graph's weight range.
    pub fn balanced(g: &WeightedGraph, total: usize, seed: u64) -> Self {
        let lo = g.edges().iter().map(|e| e.w).min().unwrap_or(0);
        let hi = g.edges().iter().map(|e| e.w).max().unwrap_or(0);
        WorkloadSpec {
            total,
            reachable_fraction: 0.5,
            semi_bounded_fraction: 0.5,
            weight_range: (lo, hi),
            k_range: (1, 8),
            seed,
            max_attempts: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.reachable_fraction) {
            return Err(Error::Invalid("reachable fraction must lie in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.semi_bounded_fraction) {
            return Err(Error::Invalid("semi-bounded fraction must lie in [0, 1]".into()));
        }
        if self.weight_range.0 > self.weight_range.1 || self.k_range.0 > self.k_range.1 {
            return Err(Error::Invalid("empty weight or k range".into()));
        }
        Ok(())
    }
}

/// A query together with its oracle answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabeledQuery {
    pub query: Query,
    pub expected: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Workload {
    pub queries: Vec<LabeledQuery>,
    /// Candidates drawn before the mix was met or the budget ran out.
    pub attempts: usize,
    /// False when the budget ran out before the requested mix was reached.
    pub complete: bool,
}

impl Workload {
    pub fn queries(&self) -> Vec<Query> {
        self.queries.iter().map(|l| l.query).collect()
    }

    pub fn expected(&self) -> Vec<bool> {
        self.queries.iter().map(|l| l.expected).collect()
    }

    pub fn reachable_count(&self) -> usize {
        self.queries.iter().filter(|l| l.expected).count()
    }
}

const CANDIDATE_BATCH: usize = 2048;

/// Rejection-samples queries until the reachable/unreachable quota is met.
///
/// Candidates are drawn sequentially from a seeded RNG in fixed-size batches,
/// classified with the BFS oracle (in parallel), and accepted in draw order,
/// so the output is identical for any thread count.
pub fn generate(g: &WeightedGraph, spec: &WorkloadSpec) -> Result<Workload> {
    spec.validate()?;
    let want_true = (spec.total as f64 * spec.reachable_fraction).round() as usize;
    let want_false = spec.total - want_true;
    let budget = spec.max_attempts.unwrap_or(spec.total.saturating_mul(1000));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = g.vertex_count();
    let (mut have_true, mut have_false) = (0usize, 0usize);
    let mut queries = Vec::with_capacity(spec.total);
    let mut attempts = 0usize;

    while (have_true < want_true || have_false < want_false) && attempts < budget && n > 0 {
        let size = CANDIDATE_BATCH.min(budget - attempts);
        let batch: Vec<Query> = (0..size).map(|_| sample_query(&mut rng, n, spec)).collect();
        let answers = par::map_with(&batch, || BfsScratch::new(n), |s, q| bfs_with(g, q, s).reachable);
        for (q, ans) in batch.into_iter().zip(answers) {
            attempts += 1;
            let slot = if ans { &mut have_true } else { &mut have_false };
            let want = if ans { want_true } else { want_false };
            if *slot < want {
                *slot += 1;
                queries.push(LabeledQuery { query: q, expected: ans });
                if have_true == want_true && have_false == want_false {
                    break;
                }
            }
        }
    }
    let complete = queries.len() == spec.total;
    if !complete {
        log::warn!(
            "workload mix unattainable after {attempts} candidates: {have_true}/{want_true} reachable, {have_false}/{want_false} unreachable"
        );
    }
    Ok(Workload {
        queries,
        attempts,
        complete,
    })
}

pub(crate) fn sample_query(rng: &mut ChaCha8Rng, n: usize, spec: &WorkloadSpec) -> Query {
    let u = rng.gen_range(0..n) as VertexId;
    let v = rng.gen_range(0..n) as VertexId;
    let (lo, hi) = spec.weight_range;
    let a = rng.gen_range(lo..=hi) as i64;
    let b = rng.gen_range(lo..=hi) as i64;
    let c = if rng.gen_bool(spec.semi_bounded_fraction) {
        if rng.gen_bool(0.5) {
            WeightConstraint::at_most(a)
        } else {
            WeightConstraint::at_least(a)
        }
    } else {
        WeightConstraint::between(a.min(b), a.max(b)).expect("ordered bounds")
    };
    let k = rng.gen_range(spec.k_range.0..=spec.k_range.1);
    Query::new(u, v, c, k)
}

/// Writes one query per line: `u v ws we k`, plus the expected answer as a
/// sixth column when `expected` is given.
pub fn write_queries<W: Write>(queries: &[Query], expected: Option<&[bool]>, ids: &IdMap, mut out: W) -> Result<()> {
    for (i, q) in queries.iter().enumerate() {
        write!(out, "{} {} {} {}", ids.external(q.u), ids.external(q.v), q.c, q.k)?;
        if let Some(exp) = expected {
            write!(out, " {}", exp[i] as u8)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_workload<W: Write>(w: &Workload, ids: &IdMap, out: W) -> Result<()> {
    write_queries(&w.queries(), Some(&w.expected()), ids, out)
}

/// One parsed line of a query file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryLine {
    pub line: usize,
    pub query: Query,
    pub expected: Option<bool>,
}

/// Parses a single `u v ws we k [expected]` record.
pub fn parse_query_line(text: &str, ids: &IdMap) -> Result<(Query, Option<bool>)> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 5 && toks.len() != 6 {
        return Err(Error::Invalid(format!("expected `u v ws we k`, found {} tokens", toks.len())));
    }
    let u = ids.dense(toks[0])?;
    let v = ids.dense(toks[1])?;
    let c = WeightConstraint::parse_bounds(toks[2], toks[3])?;
    let k: u32 = toks[4]
        .parse()
        .map_err(|_| Error::Invalid(format!("bad step bound `{}`", toks[4])))?;
    let expected = match toks.get(5) {
        None => None,
        Some(&"0") => Some(false),
        Some(&"1") => Some(true),
        Some(t) => return Err(Error::Invalid(format!("bad expected answer `{t}`"))),
    };
    Ok((Query::new(u, v, c, k), expected))
}

/// Reads a query file; each record either parses or carries its error.
pub fn read_queries<R: BufRead>(reader: R, ids: &IdMap) -> Result<Vec<(usize, Result<QueryLine>)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let parsed = parse_query_line(t, ids).map(|(query, expected)| QueryLine {
            line: i + 1,
            query,
            expected,
        });
        out.push((i + 1, parsed));
    }
    Ok(out)
}
