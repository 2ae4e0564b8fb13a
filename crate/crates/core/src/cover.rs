//! Approximate minimum vertex cover and degree-descending vertex orders.

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};

/// Tie-break among vertices of equal degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    AscendingId,
    DescendingId,
    /// Equal-degree vertices keep their relative position in this list,
    /// which must be a permutation of all vertices.
    Explicit(Vec<VertexId>),
}

/// A permutation of the vertices together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder {
    order: Vec<VertexId>,
    rank: Vec<u32>,
}

impl VertexOrder {
    /// Uses `order` verbatim. Fails unless it is a permutation of `0..n`.
    pub fn from_sequence(n: usize, order: Vec<VertexId>) -> Result<Self> {
        if order.len() != n {
            return Err(Error::Invalid(format!("order lists {} vertices, graph has {n}", order.len())));
        }
        let mut rank = vec![u32::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            let slot = rank
                .get_mut(v as usize)
                .ok_or(Error::VertexOutOfRange { id: v as usize, vertex_count: n })?;
            if *slot != u32::MAX {
                return Err(Error::Invalid(format!("vertex {v} appears twice in order")));
            }
            *slot = i as u32;
        }
        Ok(VertexOrder { order, rank })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.order
    }

    #[inline]
    pub fn vertex_at(&self, rank: u32) -> VertexId {
        self.order[rank as usize]
    }

    #[inline]
    pub fn rank_of(&self, v: VertexId) -> u32 {
        self.rank[v as usize]
    }

    /// Hop order for cover-based indexes: cover members first, by
    /// non-increasing degree with ties kept in selection order, then the
    /// remaining vertices by non-increasing degree and ascending id.
    pub fn for_cover(g: &WeightedGraph, cover: &CoverSet) -> Self {
        let mut hops = cover.members().to_vec();
        hops.sort_by_key(|&v| std::cmp::Reverse(g.degree_unchecked(v)));
        let mut rest: Vec<VertexId> = g.vertices().filter(|&v| !cover.contains(v)).collect();
        rest.sort_by_key(|&v| (std::cmp::Reverse(g.degree_unchecked(v)), v));
        hops.extend(rest);
        Self::from_sequence(g.vertex_count(), hops).expect("cover order is a permutation")
    }

    /// Builds a full order from an explicit hop sequence over the cover
    /// members; the remaining vertices follow as in [`for_cover`](Self::for_cover).
    pub fn with_cover_hops(g: &WeightedGraph, cover: &CoverSet, hops: &[VertexId]) -> Result<Self> {
        if hops.len() != cover.len() || !hops.iter().all(|&h| (h as usize) < g.vertex_count() && cover.contains(h)) {
            return Err(Error::Invalid("hop sequence must list exactly the cover members".into()));
        }
        let mut seq = hops.to_vec();
        let mut rest: Vec<VertexId> = g.vertices().filter(|&v| !cover.contains(v)).collect();
        rest.sort_by_key(|&v| (std::cmp::Reverse(g.degree_unchecked(v)), v));
        seq.extend(rest);
        Self::from_sequence(g.vertex_count(), seq)
    }
}

/// Stable sort of all vertices by non-increasing degree under `tie_break`.
pub fn degree_descending_order(g: &WeightedGraph, tie_break: &TieBreak) -> Result<VertexOrder> {
    let n = g.vertex_count();
    let mut order: Vec<VertexId> = match tie_break {
        TieBreak::AscendingId => g.vertices().collect(),
        TieBreak::DescendingId => g.vertices().rev().collect(),
        TieBreak::Explicit(list) => VertexOrder::from_sequence(n, list.clone())?.order,
    };
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree_unchecked(v)));
    VertexOrder::from_sequence(n, order)
}

/// A vertex cover, remembering the order in which members were selected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSet {
    members: Vec<VertexId>,
    membership: Vec<bool>,
}

impl CoverSet {
    pub fn from_members(n: usize, members: Vec<VertexId>) -> Result<Self> {
        let mut membership = vec![false; n];
        for &v in &members {
            let slot = membership
                .get_mut(v as usize)
                .ok_or(Error::VertexOutOfRange { id: v as usize, vertex_count: n })?;
            if *slot {
                return Err(Error::Invalid(format!("vertex {v} listed twice in cover")));
            }
            *slot = true;
        }
        Ok(CoverSet { members, membership })
    }

    pub fn all(n: usize) -> Self {
        CoverSet {
            members: (0..n as VertexId).collect(),
            membership: vec![true; n],
        }
    }

    /// Members in selection order.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn membership(&self) -> &[bool] {
        &self.membership
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.membership.get(v as usize).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Whether every edge has at least one endpoint in `m`.
pub fn is_cover(g: &WeightedGraph, m: &CoverSet) -> bool {
    m.membership.len() == g.vertex_count() && g.edges().iter().all(|e| m.contains(e.u) || m.contains(e.v))
}

/// Greedy max-degree vertex cover in `O(|V| + |E|)`, ties broken by ascending id.
pub fn approx_min_cover(g: &WeightedGraph) -> CoverSet {
    approx_min_cover_with(g, &TieBreak::AscendingId).expect("ascending order is always valid")
}

/// Greedy max-degree vertex cover.
///
/// Vertices live in `node`, sorted by non-increasing residual degree;
/// `position` is its inverse and `block_end[d]` is the index of the last
/// vertex whose residual degree is `d`. Decrementing a vertex's degree swaps
/// it with the last member of its block and shrinks that block by one, so the
/// array stays sorted with O(1) work per removed edge.
pub fn approx_min_cover_with(g: &WeightedGraph, tie_break: &TieBreak) -> Result<CoverSet> {
    let n = g.vertex_count();
    let mut node = degree_descending_order(g, tie_break)?.order;
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree_unchecked(v)).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);

    let mut block_end = vec![0usize; max_degree + 1];
    for &d in &degree {
        block_end[d] += 1;
    }
    // Suffix sums: vertices with degree >= d, minus one.
    let mut acc = 0usize;
    for d in (0..=max_degree).rev() {
        acc += block_end[d];
        block_end[d] = acc.wrapping_sub(1);
    }
    let mut position = vec![0usize; n];
    for (i, &v) in node.iter().enumerate() {
        position[v as usize] = i;
    }

    let mut in_cover = vec![false; n];
    let mut members = Vec::new();
    let mut remaining = g.edge_count();
    let mut next = 0usize;
    while remaining > 0 {
        let u = node[next];
        next += 1;
        let du = degree[u as usize];
        if du == 0 {
            continue;
        }
        in_cover[u as usize] = true;
        members.push(u);
        remaining -= du;
        degree[u as usize] = 0;
        for &(v, _) in g.adj(u) {
            if in_cover[v as usize] {
                continue;
            }
            let d = degree[v as usize];
            let last = block_end[d];
            let displaced = node[last];
            let pv = position[v as usize];
            node[last] = v;
            node[pv] = displaced;
            position[displaced as usize] = pv;
            position[v as usize] = last;
            block_end[d] = last.wrapping_sub(1);
            degree[v as usize] = d - 1;
        }
        #[cfg(debug_assertions)]
        if n <= 2048 {
            check_buckets(&node[next..], next, &degree, &block_end, &in_cover);
        }
    }
    debug_assert_eq!(remaining, 0);
    Ok(CoverSet {
        members,
        membership: in_cover,
    })
}

#[cfg(debug_assertions)]
fn check_buckets(tail: &[VertexId], offset: usize, degree: &[usize], block_end: &[usize], in_cover: &[bool]) {
    for (j, w) in tail.windows(2).enumerate() {
        assert!(
            degree[w[0] as usize] >= degree[w[1] as usize],
            "bucket order broken at position {}",
            offset + j
        );
    }
    for (j, &v) in tail.iter().enumerate() {
        assert!(!in_cover[v as usize]);
        let d = degree[v as usize];
        let is_last = tail.get(j + 1).is_none_or(|&x| degree[x as usize] != d);
        if is_last {
            assert_eq!(block_end[d], offset + j, "block end for degree {d}");
        }
    }
}
