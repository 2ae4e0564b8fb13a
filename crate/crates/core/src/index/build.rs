use std::collections::VecDeque;
use std::time::Instant;

use super::{
    insert_candidate, EmbeddedAdjacency, HopView, InsertOutcome, LabelEntry, LabelIndex, Variant, VertexLabel,
};
use crate::constraint::{dominates, WeightInterval};
use crate::cover::{is_cover, CoverSet, VertexOrder};
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};

/// Construction knobs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// LWKRI only: drop expansion states at non-cover vertices that are
    /// dominated by an earlier state of the same hop at that vertex. Off by
    /// default; it only trims work and never changes the stored labels.
    pub prune_uncovered: bool,
    /// Abort with [`Error::BudgetExceeded`] once this instant passes.
    /// Checked between hops.
    pub deadline: Option<Instant>,
    /// Abort once the index holds more than this many entries.
    pub max_entries: Option<usize>,
}

/// Builds the full-hop index: every vertex is a hop, in `order`.
pub fn build_wkri(g: &WeightedGraph, order: &VertexOrder) -> Result<LabelIndex> {
    build_wkri_with(g, order, BuildOptions::default())
}

pub fn build_wkri_with(g: &WeightedGraph, order: &VertexOrder, options: BuildOptions) -> Result<LabelIndex> {
    check_order(g, order)?;
    let n = g.vertex_count();
    let mut b = Builder::new(g, order, n, vec![true; n], options);
    b.run()?;
    Ok(LabelIndex::from_parts(Variant::Wkri, order.clone(), n, None, b.finish(), None))
}

/// Builds the cover-hop index with labels for every vertex. The first
/// `|cover|` vertices of `order` must be exactly the cover members.
pub fn build_gwkri(g: &WeightedGraph, cover: &CoverSet, order: &VertexOrder) -> Result<LabelIndex> {
    build_gwkri_with(g, cover, order, BuildOptions::default())
}

pub fn build_gwkri_with(
    g: &WeightedGraph,
    cover: &CoverSet,
    order: &VertexOrder,
    options: BuildOptions,
) -> Result<LabelIndex> {
    check_cover(g, cover, order)?;
    let n = g.vertex_count();
    let hops = cover.len();
    let mut b = Builder::new(g, order, hops, vec![true; n], options);
    b.run()?;
    let mut labels = b.finish();
    // Non-hop vertices get their self-entry after all hops, keeping labels sorted.
    for &v in &order.as_slice()[hops..] {
        labels[v as usize]
            .entries_mut()
            .push(LabelEntry::self_entry(order.rank_of(v)));
    }
    Ok(LabelIndex::from_parts(
        Variant::Gwkri,
        order.clone(),
        hops,
        Some(cover.membership().to_vec()),
        labels,
        None,
    ))
}

/// Builds the cover-only index: labels exist only for cover members.
pub fn build_lwkri(g: &WeightedGraph, cover: &CoverSet, order: &VertexOrder) -> Result<LabelIndex> {
    build_lwkri_with(g, cover, order, BuildOptions::default())
}

pub fn build_lwkri_with(
    g: &WeightedGraph,
    cover: &CoverSet,
    order: &VertexOrder,
    options: BuildOptions,
) -> Result<LabelIndex> {
    check_cover(g, cover, order)?;
    let hops = cover.len();
    let mut b = Builder::new(g, order, hops, cover.membership().to_vec(), options);
    b.run()?;
    Ok(LabelIndex::from_parts(
        Variant::Lwkri,
        order.clone(),
        hops,
        Some(cover.membership().to_vec()),
        b.finish(),
        Some(EmbeddedAdjacency::from_graph(g)),
    ))
}

fn check_order(g: &WeightedGraph, order: &VertexOrder) -> Result<()> {
    if order.len() != g.vertex_count() {
        return Err(Error::Invalid(format!(
            "order covers {} vertices, graph has {}",
            order.len(),
            g.vertex_count()
        )));
    }
    Ok(())
}

fn check_cover(g: &WeightedGraph, cover: &CoverSet, order: &VertexOrder) -> Result<()> {
    check_order(g, order)?;
    if !is_cover(g, cover) {
        return Err(Error::Invalid("vertex set is not a cover of the graph".into()));
    }
    if !order.as_slice()[..cover.len()].iter().all(|&v| cover.contains(v)) {
        return Err(Error::Invalid("order must list the cover members first".into()));
    }
    Ok(())
}

struct Builder<'a> {
    g: &'a WeightedGraph,
    order: &'a VertexOrder,
    hop_count: usize,
    stored: Vec<bool>,
    options: BuildOptions,
    labels: Vec<Vec<LabelEntry>>,
    view: HopView,
    queue: VecDeque<(VertexId, WeightInterval, u32)>,
    /// Per-hop frontier at non-stored vertices, used by `prune_uncovered`.
    scratch: Vec<Vec<(WeightInterval, u32)>>,
    scratch_touched: Vec<VertexId>,
    entries: usize,
}

impl<'a> Builder<'a> {
    fn new(g: &'a WeightedGraph, order: &'a VertexOrder, hop_count: usize, stored: Vec<bool>, options: BuildOptions) -> Self {
        let n = g.vertex_count();
        Builder {
            g,
            order,
            hop_count,
            stored,
            options,
            labels: vec![Vec::new(); n],
            view: HopView::new(hop_count),
            queue: VecDeque::new(),
            scratch: if options.prune_uncovered { vec![Vec::new(); n] } else { Vec::new() },
            scratch_touched: Vec::new(),
            entries: 0,
        }
    }

    fn run(&mut self) -> Result<()> {
        for rank in 0..self.hop_count as u32 {
            let over_time = self.options.deadline.is_some_and(|d| Instant::now() > d);
            let over_size = self.options.max_entries.is_some_and(|m| self.entries > m);
            if over_time || over_size {
                return Err(Error::BudgetExceeded {
                    hops_done: rank as usize,
                    hop_count: self.hop_count,
                    entries: self.entries,
                    reason: if over_time { "deadline passed" } else { "entry limit reached" },
                });
            }
            self.process_hop(rank);
        }
        Ok(())
    }

    fn process_hop(&mut self, rank: u32) {
        let hop = self.order.vertex_at(rank);
        debug_assert!(self.stored[hop as usize]);
        self.view.load(&self.labels[hop as usize], rank);
        self.labels[hop as usize].push(LabelEntry::self_entry(rank));
        self.entries += 1;

        self.queue.clear();
        self.queue.push_back((hop, WeightInterval::EMPTY, 0));
        while let Some((x, interval, depth)) = self.queue.pop_front() {
            for &(y, w) in self.g.adj(x) {
                if self.order.rank_of(y) <= rank {
                    continue;
                }
                let next = interval.extend(w);
                let dist = depth + 1;
                if self.stored[y as usize] {
                    let cand = LabelEntry::new(rank, next, dist);
                    let label = &mut self.labels[y as usize];
                    let before = label.len();
                    let outcome = insert_candidate(label, cand, &self.view).expect("hops are processed in rank order");
                    if outcome == InsertOutcome::Inserted {
                        self.entries = self.entries + label.len() - before;
                        self.queue.push_back((y, next, dist));
                    }
                } else if !self.options.prune_uncovered || self.admit_uncovered(y, next, dist) {
                    self.queue.push_back((y, next, dist));
                }
            }
        }
        for v in self.scratch_touched.drain(..) {
            self.scratch[v as usize].clear();
        }
    }

    fn admit_uncovered(&mut self, y: VertexId, interval: WeightInterval, dist: u32) -> bool {
        let frontier = &mut self.scratch[y as usize];
        if frontier.iter().any(|&(i, d)| dominates(i, d, interval, dist)) {
            return false;
        }
        if frontier.is_empty() {
            self.scratch_touched.push(y);
        }
        frontier.retain(|&(i, d)| !dominates(interval, dist, i, d));
        frontier.push((interval, dist));
        true
    }

    fn finish(self) -> Vec<VertexLabel> {
        self.labels.into_iter().map(VertexLabel::from_entries).collect()
    }
}
