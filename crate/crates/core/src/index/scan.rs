use super::{LabelEntry, LabelIndex, VertexLabel};
use crate::graph::VertexId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Entries are not sorted by hop rank.
    Unsorted,
    /// A dist-0 entry that is not the vertex's own self-entry, or vice versa.
    MalformedSelfEntry,
    /// Another entry for the same hop dominates this one.
    SameHop { dominated_by: LabelEntry },
    /// Two entries meeting at an earlier hop already imply this one.
    CrossHop { via_rank: u32 },
    /// The entry names a rank that is not a hop of this index.
    NotAHop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: VertexId,
    pub entry: LabelEntry,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RedundancyReport {
    pub violations: Vec<Violation>,
}

impl RedundancyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Full scan for redundant entries: pairwise same-hop dominance within every
/// hop group and cross-hop implication through every earlier hop.
pub fn scan_redundancy(index: &LabelIndex) -> RedundancyReport {
    let mut violations = Vec::new();
    for u in 0..index.vertex_count() as VertexId {
        let label = index.label(u);
        let entries = label.entries();
        let mut report = |entry: LabelEntry, kind| violations.push(Violation { vertex: u, entry, kind });

        if entries.windows(2).any(|w| w[0].hop_rank > w[1].hop_rank) {
            report(entries[0], ViolationKind::Unsorted);
            continue;
        }
        let mut start = 0;
        while start < entries.len() {
            let rank = entries[start].hop_rank;
            let end = start + entries[start..].iter().take_while(|e| e.hop_rank == rank).count();
            let group = &entries[start..end];
            for (i, e) in group.iter().enumerate() {
                let own = index.order().rank_of(u) == rank;
                let well_formed = if e.is_self_entry() {
                    own && e.interval.is_empty()
                } else {
                    !own && !e.interval.is_empty()
                };
                if !well_formed {
                    report(*e, ViolationKind::MalformedSelfEntry);
                    continue;
                }
                if let Some(other) = group.iter().enumerate().find(|&(j, o)| j != i && o.dominates(e)) {
                    report(*e, ViolationKind::SameHop { dominated_by: *other.1 });
                    continue;
                }
                if e.is_self_entry() {
                    continue;
                }
                if rank as usize >= index.hop_count() || !index.is_labeled(index.hop_vertex(rank)) {
                    report(*e, ViolationKind::NotAHop);
                    continue;
                }
                let hop_label = index.label(index.hop_vertex(rank));
                if let Some(via) = implied_by_earlier_hop(&entries[..start], hop_label, e) {
                    report(*e, ViolationKind::CrossHop { via_rank: via });
                }
            }
            start = end;
        }
    }
    RedundancyReport { violations }
}

fn implied_by_earlier_hop(earlier: &[LabelEntry], hop_label: &VertexLabel, e: &LabelEntry) -> Option<u32> {
    earlier
        .iter()
        .filter(|a| a.dist <= e.dist && a.interval.is_subset_of(e.interval))
        .find(|a| {
            hop_label
                .group(a.hop_rank)
                .iter()
                .any(|b| a.dist + b.dist <= e.dist && b.interval.is_subset_of(e.interval))
        })
        .map(|a| a.hop_rank)
}
