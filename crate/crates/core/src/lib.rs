//! Weight-constrained k-step reachability (WCKR) over undirected weighted
//! graphs.
//!
//! A WCKR query `Q(u, v, c, k)` asks whether some path from `u` to `v` has at
//! most `k` edges and every edge weight satisfies the constraint `c`
//! (`[ws, we]`, `<= we` or `>= ws`). This crate provides three 2-hop label
//! indexes that answer such queries, plus a constrained-BFS oracle:
//!
//! * [`index::build_wkri`]: every vertex is a hop.
//! * [`index::build_gwkri`]: hops are the members of an approximate minimum
//!   vertex cover ([`cover::approx_min_cover`]).
//! * [`index::build_lwkri`]: cover hops, and labels kept only on cover
//!   members; queries expand through neighbors of non-cover endpoints.
//!
//! ```
//! use wckr::{WeightedGraph, WeightConstraint, Query, Reachability};
//! use wckr::cover::{approx_min_cover, VertexOrder};
//!
//! let g = WeightedGraph::load_edge_list("1 2 5\n2 3 7\n3 4 1\n".as_bytes()).unwrap();
//! let cover = approx_min_cover(&g);
//! let order = VertexOrder::for_cover(&g, &cover);
//! let index = wckr::index::build_gwkri(&g, &cover, &order).unwrap();
//! let (a, c) = (g.resolve("1").unwrap(), g.resolve("3").unwrap());
//! let q = Query::new(a, c, WeightConstraint::between(5, 7).unwrap(), 2);
//! assert!(index.reachable(&q).unwrap());
//! ```

pub mod bench;
pub mod constraint;
pub mod cover;
mod error;
pub mod graph;
pub mod index;
pub mod par;
pub mod query;
pub mod verify;
pub mod workload;

pub use constraint::{PathTuple, WeightConstraint, WeightInterval};
pub use cover::{CoverSet, TieBreak, VertexOrder};
pub use error::{Error, Result};
pub use graph::{Edge, GraphStats, IdMap, VertexId, Weight, WeightedGraph};
pub use index::{InsertOutcome, LabelEntry, LabelIndex, Variant, VertexLabel};
pub use query::{batch_bfs, batch_query, bfs_oracle, query_2hop, query_lwkri, BatchResult, Query, QueryResult, Reachability};

/// Builds `variant` with the default orders: degree-descending with
/// ascending-id ties for WKRI, the approximate cover for the others.
pub fn build_default(g: &WeightedGraph, variant: Variant) -> Result<LabelIndex> {
    build_default_with(g, variant, index::BuildOptions::default())
}

pub fn build_default_with(g: &WeightedGraph, variant: Variant, options: index::BuildOptions) -> Result<LabelIndex> {
    build_ordered(g, variant, &TieBreak::AscendingId, options)
}

/// Like [`build_default`], with `tie_break` deciding among equal degrees in
/// both the WKRI order and the cover selection.
pub fn build_ordered(
    g: &WeightedGraph,
    variant: Variant,
    tie_break: &TieBreak,
    options: index::BuildOptions,
) -> Result<LabelIndex> {
    match variant {
        Variant::Wkri => index::build_wkri_with(g, &cover::degree_descending_order(g, tie_break)?, options),
        Variant::Gwkri | Variant::Lwkri => {
            let m = cover::approx_min_cover_with(g, tie_break)?;
            let order = VertexOrder::for_cover(g, &m);
            if variant == Variant::Gwkri {
                index::build_gwkri_with(g, &m, &order, options)
            } else {
                index::build_lwkri_with(g, &m, &order, options)
            }
        }
    }
}
