//! Dominance-pruned 2-hop label indexes.
//!
//! All three variants share one construction routine: hops are processed in
//! rank order and each hop runs a multi-label breadth-first expansion whose
//! queue items are `(vertex, interval so far, depth)`. A vertex can be reached
//! many times with different states; a state survives only if its label entry
//! is not dominated by an entry for the same hop (same-hop redundancy) and is
//! not implied by two entries meeting at an earlier hop (cross-hop redundancy).
//!
//! * WKRI uses every vertex as a hop and labels every vertex.
//! * GWKRI uses only vertex-cover members as hops but labels every vertex.
//! * LWKRI uses cover hops and labels only cover members; states at
//!   non-cover vertices are expanded without being stored, and queries
//!   recover them through the embedded adjacency.

mod build;
mod dump;
mod format;
mod scan;

use std::fmt;

pub use build::{build_gwkri, build_gwkri_with, build_lwkri, build_lwkri_with, build_wkri, build_wkri_with, BuildOptions};
pub use dump::write_dump;
pub use scan::{scan_redundancy, RedundancyReport, Violation, ViolationKind};

use crate::constraint::{dominates, WeightInterval};
use crate::cover::VertexOrder;
use crate::error::{Error, Result};
use crate::graph::{VertexId, Weight, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Wkri,
    Gwkri,
    Lwkri,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Wkri, Variant::Gwkri, Variant::Lwkri];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Wkri => "wkri",
            Variant::Gwkri => "gwkri",
            Variant::Lwkri => "lwkri",
        }
    }

    fn code(self) -> u8 {
        match self {
            Variant::Wkri => 0,
            Variant::Gwkri => 1,
            Variant::Lwkri => 2,
        }
    }

    fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(Variant::Wkri),
            1 => Some(Variant::Gwkri),
            2 => Some(Variant::Lwkri),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wkri" => Ok(Variant::Wkri),
            "gwkri" => Ok(Variant::Gwkri),
            "lwkri" => Ok(Variant::Lwkri),
            other => Err(Error::Invalid(format!("unknown index variant `{other}`"))),
        }
    }
}

/// One label item: a path from the labeled vertex to the hop of rank
/// `hop_rank`, with its weight range and length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabelEntry {
    pub hop_rank: u32,
    pub interval: WeightInterval,
    pub dist: u32,
}

impl LabelEntry {
    pub fn new(hop_rank: u32, interval: WeightInterval, dist: u32) -> Self {
        LabelEntry {
            hop_rank,
            interval,
            dist,
        }
    }

    pub fn self_entry(rank: u32) -> Self {
        Self::new(rank, WeightInterval::EMPTY, 0)
    }

    pub fn is_self_entry(&self) -> bool {
        self.dist == 0
    }

    #[inline]
    pub fn dominates(&self, other: &LabelEntry) -> bool {
        dominates(self.interval, self.dist, other.interval, other.dist)
    }
}

/// Entries of one vertex, sorted by hop rank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexLabel {
    entries: Vec<LabelEntry>,
}

impl VertexLabel {
    pub fn entries(&self) -> &[LabelEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries for hop `rank` (contiguous because the label is sorted).
    pub fn group(&self, rank: u32) -> &[LabelEntry] {
        let start = self.entries.partition_point(|e| e.hop_rank < rank);
        let end = start + self.entries[start..].partition_point(|e| e.hop_rank == rank);
        &self.entries[start..end]
    }

    pub(crate) fn from_entries(entries: Vec<LabelEntry>) -> Self {
        VertexLabel { entries }
    }

    pub(crate) fn entries_mut(&mut self) -> &mut Vec<LabelEntry> {
        &mut self.entries
    }
}

/// Compressed adjacency carried by LWKRI indexes for query-time expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedAdjacency {
    offsets: Vec<u64>,
    pairs: Vec<(VertexId, Weight)>,
}

impl EmbeddedAdjacency {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        let mut offsets = Vec::with_capacity(g.vertex_count() + 1);
        let mut pairs = Vec::with_capacity(2 * g.edge_count());
        offsets.push(0);
        for u in g.vertices() {
            pairs.extend_from_slice(g.adj(u));
            offsets.push(pairs.len() as u64);
        }
        EmbeddedAdjacency { offsets, pairs }
    }

    #[inline]
    pub fn neighbors(&self, u: VertexId) -> &[(VertexId, Weight)] {
        let u = u as usize;
        &self.pairs[self.offsets[u] as usize..self.offsets[u + 1] as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Outcome of offering a candidate entry to a vertex label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    RejectedSameHop,
    RejectedCrossHop,
}

/// A built index of any variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelIndex {
    variant: Variant,
    order: VertexOrder,
    /// Number of hop vertices; hops are `order[..hop_count]`.
    hop_count: usize,
    /// Cover membership for GWKRI / LWKRI.
    cover: Option<Vec<bool>>,
    labels: Vec<VertexLabel>,
    embedded: Option<EmbeddedAdjacency>,
}

impl LabelIndex {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn order(&self) -> &VertexOrder {
        &self.order
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn hop_count(&self) -> usize {
        self.hop_count
    }

    /// Cover membership of `v`; every vertex counts as covered in WKRI.
    #[inline]
    pub fn in_cover(&self, v: VertexId) -> bool {
        self.cover.as_ref().is_none_or(|c| c[v as usize])
    }

    pub fn cover_size(&self) -> Option<usize> {
        self.cover.as_ref().map(|c| c.iter().filter(|&&b| b).count())
    }

    /// Whether `v` carries a label (all vertices except non-cover ones in LWKRI).
    #[inline]
    pub fn is_labeled(&self, v: VertexId) -> bool {
        self.variant != Variant::Lwkri || self.in_cover(v)
    }

    #[inline]
    pub fn label(&self, v: VertexId) -> &VertexLabel {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn embedded(&self) -> Option<&EmbeddedAdjacency> {
        self.embedded.as_ref()
    }

    /// Total number of stored entries, self-entries included.
    pub fn entry_count(&self) -> usize {
        self.labels.iter().map(VertexLabel::len).sum()
    }

    pub fn hop_vertex(&self, rank: u32) -> VertexId {
        self.order.vertex_at(rank)
    }

    /// Offers `candidate` to `L(u)`, applying the same-hop and cross-hop
    /// redundancy rules. `candidate.hop_rank` must be the hop currently being
    /// processed: no entry of `L(u)` may have a larger rank.
    pub fn try_insert(&mut self, u: VertexId, candidate: LabelEntry) -> Result<InsertOutcome> {
        if u as usize >= self.labels.len() {
            return Err(Error::VertexOutOfRange {
                id: u as usize,
                vertex_count: self.labels.len(),
            });
        }
        if candidate.hop_rank as usize >= self.hop_count {
            return Err(Error::Invalid(format!("rank {} is not a hop", candidate.hop_rank)));
        }
        let hop = self.order.vertex_at(candidate.hop_rank);
        if hop == u {
            return Err(Error::Invalid("a hop cannot label itself through try_insert".into()));
        }
        let view = HopView::from_label(&self.labels[hop as usize], candidate.hop_rank, self.hop_count);
        insert_candidate(self.labels[u as usize].entries_mut(), candidate, &view)
    }

    pub(crate) fn from_parts(
        variant: Variant,
        order: VertexOrder,
        hop_count: usize,
        cover: Option<Vec<bool>>,
        labels: Vec<VertexLabel>,
        embedded: Option<EmbeddedAdjacency>,
    ) -> Self {
        LabelIndex {
            variant,
            order,
            hop_count,
            cover,
            labels,
            embedded,
        }
    }

    /// Test hook for building deliberately broken indexes.
    #[doc(hidden)]
    pub fn label_mut(&mut self, v: VertexId) -> &mut Vec<LabelEntry> {
        self.labels[v as usize].entries_mut()
    }
}

/// Entries of the current hop's own label, grouped by hop rank for O(1)
/// lookup during cross-hop redundancy checks.
pub(crate) struct HopView {
    entries: Vec<LabelEntry>,
    /// `(start, end)` into `entries` for each hop rank below the current one.
    groups: Vec<(u32, u32)>,
    /// Smallest distance in each group; `NO_GROUP` where the group is empty.
    min_dist: Vec<u32>,
    touched: Vec<u32>,
}

const NO_GROUP: u32 = u32::MAX / 2;

impl HopView {
    pub(crate) fn new(hop_count: usize) -> Self {
        HopView {
            entries: Vec::new(),
            groups: vec![(0, 0); hop_count],
            min_dist: vec![NO_GROUP; hop_count],
            touched: Vec::new(),
        }
    }

    pub(crate) fn from_label(label: &VertexLabel, rank: u32, hop_count: usize) -> Self {
        let mut v = Self::new(hop_count);
        v.load(label.entries(), rank);
        v
    }

    /// Loads the entries of `label` whose hop rank is below `rank`.
    pub(crate) fn load(&mut self, label: &[LabelEntry], rank: u32) {
        for &r in &self.touched {
            self.groups[r as usize] = (0, 0);
            self.min_dist[r as usize] = NO_GROUP;
        }
        self.touched.clear();
        self.entries.clear();
        let mut prev = u32::MAX;
        for (i, e) in label.iter().enumerate() {
            if e.hop_rank >= rank {
                break;
            }
            if e.hop_rank != prev {
                prev = e.hop_rank;
                self.groups[prev as usize] = (i as u32, i as u32);
                self.touched.push(prev);
            }
            self.groups[prev as usize].1 = i as u32 + 1;
            let m = &mut self.min_dist[prev as usize];
            *m = (*m).min(e.dist);
            self.entries.push(*e);
        }
    }

    #[inline]
    fn group(&self, rank: u32) -> &[LabelEntry] {
        let (s, e) = self.groups[rank as usize];
        &self.entries[s as usize..e as usize]
    }
}

/// Core redundancy test and insertion shared by construction and
/// [`LabelIndex::try_insert`].
#[inline]
pub(crate) fn insert_candidate(label: &mut Vec<LabelEntry>, cand: LabelEntry, hop: &HopView) -> Result<InsertOutcome> {
    let rank = cand.hop_rank;
    let same_start = label.partition_point(|e| e.hop_rank < rank);
    if label.last().is_some_and(|e| e.hop_rank > rank) {
        return Err(Error::Invalid(format!(
            "hop rank monotonicity violated: label already holds rank {} while inserting rank {rank}",
            label.last().unwrap().hop_rank
        )));
    }
    if label[same_start..].iter().any(|e| e.dominates(&cand)) {
        return Ok(InsertOutcome::RejectedSameHop);
    }
    if cross_hop_redundant(&label[..same_start], cand, hop) {
        return Ok(InsertOutcome::RejectedCrossHop);
    }
    let mut i = same_start;
    while i < label.len() {
        if cand.dominates(&label[i]) {
            label.swap_remove(i);
        } else {
            i += 1;
        }
    }
    label.push(cand);
    Ok(InsertOutcome::Inserted)
}

#[inline]
fn cross_hop_redundant(earlier: &[LabelEntry], cand: LabelEntry, hop: &HopView) -> bool {
    for e in earlier {
        // Entry distances stay far below NO_GROUP, so the sum cannot overflow.
        if e.dist + hop.min_dist[e.hop_rank as usize] > cand.dist || !e.interval.is_subset_of(cand.interval) {
            continue;
        }
        let budget = cand.dist - e.dist;
        if hop
            .group(e.hop_rank)
            .iter()
            .any(|h| h.dist <= budget && h.interval.is_subset_of(cand.interval))
        {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests;
