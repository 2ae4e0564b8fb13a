//! Query engines: 2-hop label merge, the cover-local engine with neighbor
//! expansion, and the constrained-BFS oracle.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use crate::constraint::WeightConstraint;
use crate::error::{Error, Result};
use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::index::{LabelIndex, Variant};
use crate::par;

/// `Q(u, v, c, k)`: is there a path from `u` to `v` of at most `k` edges,
/// all of whose weights satisfy `c`?
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub u: VertexId,
    pub v: VertexId,
    pub c: WeightConstraint,
    pub k: u32,
}

impl Query {
    pub fn new(u: VertexId, v: VertexId, c: WeightConstraint, k: u32) -> Self {
        Query { u, v, c, k }
    }

    pub fn swapped(self) -> Self {
        Query {
            u: self.v,
            v: self.u,
            ..self
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryResult {
    pub reachable: bool,
    /// Label entries inspected while answering.
    pub probe_count: u64,
}

/// Anything that answers reachability queries.
pub trait Reachability: Sync {
    fn vertex_count(&self) -> usize;

    fn answer(&self, q: &Query) -> QueryResult;

    fn reachable(&self, q: &Query) -> Result<bool> {
        check_query(q, self.vertex_count())?;
        Ok(self.answer(q).reachable)
    }
}

fn check_query(q: &Query, n: usize) -> Result<()> {
    for id in [q.u, q.v] {
        if id as usize >= n {
            return Err(Error::VertexOutOfRange {
                id: id as usize,
                vertex_count: n,
            });
        }
    }
    Ok(())
}

/// 2-hop query over a WKRI or GWKRI index.
pub fn query_2hop(index: &LabelIndex, q: &Query) -> Result<bool> {
    if index.variant() == Variant::Lwkri {
        return Err(Error::WrongVariant {
            expected: "wkri or gwkri",
            actual: "lwkri",
        });
    }
    check_query(q, index.vertex_count())?;
    Ok(two_hop(index, q.u, q.v, q.c, q.k).reachable)
}

/// Cover-local query over an LWKRI index.
pub fn query_lwkri(index: &LabelIndex, q: &Query) -> Result<bool> {
    if index.variant() != Variant::Lwkri {
        return Err(Error::WrongVariant {
            expected: "lwkri",
            actual: index.variant().name(),
        });
    }
    check_query(q, index.vertex_count())?;
    Ok(lwkri(index, q).reachable)
}

/// Sorted merge of two labels. Since `union(a, b)` satisfies `c` exactly when
/// both `a` and `b` do, each common hop only needs the shortest
/// `c`-satisfying entry on either side.
fn two_hop(index: &LabelIndex, u: VertexId, v: VertexId, c: WeightConstraint, k: u32) -> QueryResult {
    if u == v {
        return QueryResult {
            reachable: true,
            probe_count: 0,
        };
    }
    let (a, b) = (index.label(u).entries(), index.label(v).entries());
    let (mut i, mut j) = (0, 0);
    let mut probes = 0u64;
    while i < a.len() && j < b.len() {
        let (ra, rb) = (a[i].hop_rank, b[j].hop_rank);
        if ra < rb {
            i += 1;
            probes += 1;
        } else if rb < ra {
            j += 1;
            probes += 1;
        } else {
            let best_a = best_in_group(a, &mut i, ra, c, &mut probes);
            let best_b = best_in_group(b, &mut j, rb, c, &mut probes);
            if let (Some(da), Some(db)) = (best_a, best_b) {
                if da + db <= k {
                    return QueryResult {
                        reachable: true,
                        probe_count: probes,
                    };
                }
            }
        }
    }
    QueryResult {
        reachable: false,
        probe_count: probes,
    }
}

#[inline]
fn best_in_group(
    entries: &[crate::index::LabelEntry],
    pos: &mut usize,
    rank: u32,
    c: WeightConstraint,
    probes: &mut u64,
) -> Option<u32> {
    let mut best = None;
    while *pos < entries.len() && entries[*pos].hop_rank == rank {
        let e = &entries[*pos];
        *probes += 1;
        if e.interval.satisfies(c) && best.is_none_or(|b| e.dist < b) {
            best = Some(e.dist);
        }
        *pos += 1;
    }
    best
}

/// Distinct neighbors of `x` reachable over at least one `c`-admissible edge.
fn admissible_neighbors(adj: &[(VertexId, Weight)], c: WeightConstraint) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::with_capacity(adj.len());
    for &(y, w) in adj {
        if c.admits(w) && out.last() != Some(&y) {
            out.push(y);
        }
    }
    out
}

fn lwkri(index: &LabelIndex, q: &Query) -> QueryResult {
    let (u, v, c, k) = (q.u, q.v, q.c, q.k);
    if u == v {
        return QueryResult {
            reachable: true,
            probe_count: 0,
        };
    }
    let adj = index.embedded().expect("lwkri index carries its adjacency");
    let mut probes = 0u64;
    let mut sub = |a: VertexId, b: VertexId, k: u32| {
        let r = two_hop(index, a, b, c, k);
        probes += r.probe_count;
        r.reachable
    };
    let reachable = match (index.in_cover(u), index.in_cover(v)) {
        (true, true) => sub(u, v, k),
        (true, false) | (false, true) => {
            let (inside, outside) = if index.in_cover(u) { (u, v) } else { (v, u) };
            k >= 1
                && admissible_neighbors(adj.neighbors(outside), c)
                    .into_iter()
                    .any(|x| sub(inside, x, k - 1))
        }
        (false, false) => {
            debug_assert!(
                adj.neighbors(u).iter().all(|&(x, _)| x != v),
                "two non-cover vertices are adjacent; the cover is invalid"
            );
            if k < 2 {
                false
            } else {
                let ys = admissible_neighbors(adj.neighbors(u), c);
                let xs = admissible_neighbors(adj.neighbors(v), c);
                ys.iter().any(|&y| xs.iter().any(|&x| sub(y, x, k - 2)))
            }
        }
    };
    QueryResult {
        reachable,
        probe_count: probes,
    }
}

impl Reachability for LabelIndex {
    fn vertex_count(&self) -> usize {
        LabelIndex::vertex_count(self)
    }

    fn answer(&self, q: &Query) -> QueryResult {
        match self.variant() {
            Variant::Wkri | Variant::Gwkri => two_hop(self, q.u, q.v, q.c, q.k),
            Variant::Lwkri => lwkri(self, q),
        }
    }
}

/// Reusable BFS state; stamps avoid clearing the visited array per query.
#[derive(Debug, Default)]
pub struct BfsScratch {
    stamp: Vec<u32>,
    current: u32,
    queue: VecDeque<(VertexId, u32)>,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        BfsScratch {
            stamp: vec![0; n],
            current: 0,
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self, n: usize) {
        if self.stamp.len() != n {
            self.stamp = vec![0; n];
            self.current = 0;
        }
        self.current = self.current.wrapping_add(1);
        if self.current == 0 {
            self.stamp.fill(0);
            self.current = 1;
        }
        self.queue.clear();
    }
}

/// Breadth-first search restricted to edges whose weight satisfies `q.c`,
/// stopping at depth `q.k`.
pub fn bfs_oracle(g: &WeightedGraph, q: &Query) -> Result<bool> {
    check_query(q, g.vertex_count())?;
    Ok(bfs_with(g, q, &mut BfsScratch::new(g.vertex_count())).reachable)
}

pub fn bfs_with(g: &WeightedGraph, q: &Query, s: &mut BfsScratch) -> QueryResult {
    if q.u == q.v {
        return QueryResult {
            reachable: true,
            probe_count: 0,
        };
    }
    s.reset(g.vertex_count());
    let mark = s.current;
    s.stamp[q.u as usize] = mark;
    s.queue.push_back((q.u, 0));
    let mut probes = 0u64;
    while let Some((x, d)) = s.queue.pop_front() {
        if d >= q.k {
            break;
        }
        for &(y, w) in g.adj(x) {
            probes += 1;
            if s.stamp[y as usize] == mark || !q.c.admits(w) {
                continue;
            }
            if y == q.v {
                return QueryResult {
                    reachable: true,
                    probe_count: probes,
                };
            }
            s.stamp[y as usize] = mark;
            s.queue.push_back((y, d + 1));
        }
    }
    QueryResult {
        reachable: false,
        probe_count: probes,
    }
}

/// The BFS oracle as a [`Reachability`] engine.
pub struct BfsOracle<'g> {
    pub graph: &'g WeightedGraph,
}

impl Reachability for BfsOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn answer(&self, q: &Query) -> QueryResult {
        bfs_with(self.graph, q, &mut BfsScratch::new(self.graph.vertex_count()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatchResult {
    pub answers: Vec<bool>,
    pub elapsed: Duration,
}

/// Answers every query with `index`, preserving input order. Validation
/// happens before the clock starts.
pub fn batch_query(index: &LabelIndex, queries: &[Query]) -> Result<BatchResult> {
    for q in queries {
        check_query(q, index.vertex_count())?;
    }
    let start = Instant::now();
    let answers = par::map(queries, |q| index.answer(q).reachable);
    Ok(BatchResult {
        answers,
        elapsed: start.elapsed(),
    })
}

/// Answers every query with the BFS oracle.
pub fn batch_bfs(g: &WeightedGraph, queries: &[Query]) -> Result<BatchResult> {
    for q in queries {
        check_query(q, g.vertex_count())?;
    }
    let start = Instant::now();
    let n = g.vertex_count();
    let answers = par::map_with(queries, || BfsScratch::new(n), |s, q| bfs_with(g, q, s).reachable);
    Ok(BatchResult {
        answers,
        elapsed: start.elapsed(),
    })
}
