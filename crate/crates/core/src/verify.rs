//! Checks an index against the BFS oracle, either exhaustively over a small
//! graph or on sampled queries, and shrinks counterexamples.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constraint::WeightConstraint;
use crate::graph::{VertexId, WeightedGraph};
use crate::index::{LabelIndex, Variant};
use crate::par;
use crate::query::{Query, Reachability};
use crate::workload::{sample_query, WorkloadSpec};
use crate::Result;

/// Hop distance from `src` to every vertex using only edges admitted by `c`
/// (`u32::MAX` when unreachable).
///
/// `Q(src, v, c, k)` holds exactly when `distances[v] <= k`, which makes this
/// a second oracle that shares no code with the early-exit BFS.
pub fn constrained_distances(g: &WeightedGraph, src: VertexId, c: WeightConstraint) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[src as usize] = 0;
    queue.push_back(src);
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize];
        for &(y, w) in g.adj(x) {
            if c.admits(w) && dist[y as usize] == u32::MAX {
                dist[y as usize] = d + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Every bounded, semi-bounded and unbounded constraint whose bounds fall in
/// one step beyond the graph's weight range on either side.
pub fn constraint_grid(g: &WeightedGraph) -> Vec<WeightConstraint> {
    let lo = g.edges().iter().map(|e| e.w).min().unwrap_or(0) as i64 - 1;
    let hi = g.edges().iter().map(|e| e.w).max().unwrap_or(0) as i64 + 1;
    let mut out = vec![WeightConstraint::UNBOUNDED];
    for a in lo..=hi {
        out.push(WeightConstraint::at_most(a));
        out.push(WeightConstraint::at_least(a));
        for b in a..=hi {
            out.push(WeightConstraint::between(a, b).expect("a <= b"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Check every ordered pair, every constraint of [`constraint_grid`] and
    /// every `k` in `0..=|V|`. Otherwise `samples` random queries are checked.
    pub exhaustive: bool,
    pub samples: usize,
    pub seed: u64,
    /// Largest `k` for sampled queries.
    pub max_k: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive: false,
            samples: 10_000,
            seed: 0,
            max_k: 8,
        }
    }
}

impl VerifyOptions {
    pub fn exhaustive() -> Self {
        VerifyOptions {
            exhaustive: true,
            ..Default::default()
        }
    }
}

/// A query on which the index and the oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub query: Query,
    pub expected: bool,
    pub got: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Keep at most this many mismatches per report.
const MISMATCH_CAP: usize = 100;

/// Compares `engine` with the oracle on `g`.
pub fn verify<E: Reachability + ?Sized>(g: &WeightedGraph, engine: &E, opts: &VerifyOptions) -> VerifyReport {
    if opts.exhaustive {
        verify_exhaustive(g, engine)
    } else {
        verify_sampled(g, engine, opts)
    }
}

fn verify_exhaustive<E: Reachability + ?Sized>(g: &WeightedGraph, engine: &E) -> VerifyReport {
    let n = g.vertex_count();
    let grid = constraint_grid(g);
    let units: Vec<(VertexId, WeightConstraint)> = g
        .vertices()
        .flat_map(|u| grid.iter().map(move |&c| (u, c)))
        .collect();
    let parts = par::map(&units, |&(u, c)| {
        let dist = constrained_distances(g, u, c);
        let mut found = Vec::new();
        let mut checked = 0u64;
        for v in g.vertices() {
            for k in 0..=n as u32 {
                let q = Query::new(u, v, c, k);
                let expected = dist[v as usize] <= k;
                let got = engine.answer(&q).reachable;
                checked += 1;
                if got != expected && found.len() < MISMATCH_CAP {
                    found.push(Mismatch { query: q, expected, got });
                }
            }
        }
        (checked, found)
    });
    collect(parts)
}

fn verify_sampled<E: Reachability + ?Sized>(g: &WeightedGraph, engine: &E, opts: &VerifyOptions) -> VerifyReport {
    let n = g.vertex_count();
    if n == 0 {
        return VerifyReport::default();
    }
    let mut spec = WorkloadSpec::balanced(g, opts.samples, opts.seed);
    spec.k_range = (0, opts.max_k);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let queries: Vec<Query> = (0..opts.samples).map(|_| sample_query(&mut rng, n, &spec)).collect();
    let parts = par::map(&queries, |q| {
        let expected = constrained_distances(g, q.u, q.c)[q.v as usize] <= q.k;
        let got = engine.answer(q).reachable;
        let found = if got != expected {
            vec![Mismatch { query: *q, expected, got }]
        } else {
            Vec::new()
        };
        (1u64, found)
    });
    collect(parts)
}

fn collect(parts: Vec<(u64, Vec<Mismatch>)>) -> VerifyReport {
    let mut report = VerifyReport::default();
    for (checked, found) in parts {
        report.checked += checked;
        let room = MISMATCH_CAP - report.mismatches.len();
        report.mismatches.extend(found.into_iter().take(room));
    }
    report
}

/// A failing query on a graph reduced as far as greedy edge deletion allows.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub graph: WeightedGraph,
    pub mismatch: Mismatch,
}

/// Removes edges one at a time, keeping each removal after which an index
/// produced by `build` still disagrees with the oracle on `query`.
///
/// Returns `None` if the original graph does not reproduce the mismatch.
pub fn minimize<F>(g: &WeightedGraph, query: Query, build: F) -> Result<Option<Counterexample>>
where
    F: Fn(&WeightedGraph) -> Result<LabelIndex>,
{
    let disagrees = |h: &WeightedGraph| -> Result<Option<Mismatch>> {
        let expected = constrained_distances(h, query.u, query.c)[query.v as usize] <= query.k;
        let got = build(h)?.answer(&query).reachable;
        Ok((got != expected).then_some(Mismatch { query, expected, got }))
    };
    let Some(mut mismatch) = disagrees(g)? else {
        return Ok(None);
    };
    let mut edges = g.edges().to_vec();
    let mut i = 0;
    while i < edges.len() {
        let mut trial = edges.clone();
        trial.remove(i);
        let h = WeightedGraph::from_edges(g.vertex_count(), trial.iter().copied())?;
        if let Some(m) = disagrees(&h)? {
            edges = trial;
            mismatch = m;
        } else {
            i += 1;
        }
    }
    let graph = WeightedGraph::from_edges(g.vertex_count(), edges)?;
    let graph = match g.external_ids() {
        Some(ids) => graph.with_external_ids(ids.to_vec())?,
        None => graph,
    };
    Ok(Some(Counterexample { graph, mismatch }))
}

/// Builds `variant` with default orders, verifies it and, on failure, shrinks
/// the first mismatch.
pub fn verify_variant(
    g: &WeightedGraph,
    variant: Variant,
    opts: &VerifyOptions,
) -> Result<(VerifyReport, Option<Counterexample>)> {
    let index = crate::build_default(g, variant)?;
    let report = verify(g, &index, opts);
    let shrunk = match report.mismatches.first() {
        Some(m) => minimize(g, m.query, |h| crate::build_default(h, variant))?,
        None => None,
    };
    Ok((report, shrunk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::example;
    use crate::index::LabelEntry;
    use crate::query::{bfs_oracle, BfsOracle};

    #[test]
    fn distances_agree_with_bfs() {
        let g = WeightedGraph::random(12, 25, 4, 9).unwrap();
        for c in constraint_grid(&g) {
            for u in g.vertices() {
                let d = constrained_distances(&g, u, c);
                for v in g.vertices() {
                    for k in 0..=12 {
                        let q = Query::new(u, v, c, k);
                        assert_eq!(bfs_oracle(&g, &q).unwrap(), d[v as usize] <= k);
                    }
                }
            }
        }
    }

    #[test]
    fn grid_covers_all_shapes() {
        let g = WeightedGraph::load_edge_list("1 2 0\n2 3 2\n".as_bytes()).unwrap();
        let grid = constraint_grid(&g);
        // Bounds -1..=3: 1 unbounded, 5 + 5 semi-bounded, 15 bounded.
        assert_eq!(grid.len(), 26);
        assert!(grid.contains(&WeightConstraint::between(0, 0).unwrap()));
    }

    #[test]
    fn oracle_verifies_itself() {
        let g = example();
        let report = verify(&g, &BfsOracle { graph: &g }, &VerifyOptions::exhaustive());
        assert!(report.passed());
        let n = g.vertex_count() as u64;
        assert_eq!(report.checked, n * n * (n + 1) * constraint_grid(&g).len() as u64);
    }

    #[test]
    fn all_variants_pass_on_example() {
        let g = example();
        for variant in Variant::ALL {
            let (report, shrunk) = verify_variant(&g, variant, &VerifyOptions::exhaustive()).unwrap();
            assert!(report.passed(), "{variant:?}: {:?}", report.mismatches.first());
            assert!(shrunk.is_none());
            let (report, _) = verify_variant(&g, variant, &VerifyOptions::default()).unwrap();
            assert!(report.passed() && report.checked == 10_000);
        }
    }

    #[test]
    fn broken_index_is_caught_and_shrunk() {
        // Drop every non-self entry from the built index: answers collapse to u == v.
        let strip = |h: &WeightedGraph| {
            let mut idx = crate::build_default(h, Variant::Wkri)?;
            for v in h.vertices() {
                idx.label_mut(v).retain(LabelEntry::is_self_entry);
            }
            Ok(idx)
        };
        let g = example();
        let report = verify(&g, &strip(&g).unwrap(), &VerifyOptions::exhaustive());
        assert!(!report.passed());
        assert_eq!(report.mismatches.len(), MISMATCH_CAP);
        let m = &report.mismatches[0];
        assert!(m.expected && !m.got);
        let cx = minimize(&g, m.query, strip).unwrap().unwrap();
        assert!(cx.graph.edge_count() <= m.query.k as usize);
        assert!(cx.graph.edge_count() >= 1);
        assert_eq!(cx.graph.external_ids(), g.external_ids());
    }
}
