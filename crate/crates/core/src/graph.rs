//! Undirected weighted multigraphs with dense vertex ids.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraint::WeightInterval;
use crate::error::{Error, Result};

pub type VertexId = u32;
pub type Weight = u32;

/// One undirected edge as it appeared in the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: Weight,
}

/// Immutable undirected weighted multigraph.
///
/// Adjacency is stored in compressed form; every vertex's neighbor list is
/// sorted by `(neighbor, weight)` so traversals are reproducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adjacency: Vec<(VertexId, Weight)>,
    /// Dense id -> external id, when the graph was loaded from text.
    external_ids: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphStats {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub graph_size: usize,
    pub average_degree: f64,
    pub distinct_weight_count: usize,
    pub max_degree: usize,
}

impl WeightedGraph {
    /// Builds a graph over `vertex_count` vertices. Self-loops are dropped.
    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut kept = Vec::new();
        for e in edges {
            for id in [e.u, e.v] {
                if id as usize >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        id: id as usize,
                        vertex_count,
                    });
                }
            }
            if e.w > WeightInterval::MAX_WEIGHT {
                return Err(Error::Invalid(format!("weight {} exceeds the supported range", e.w)));
            }
            if e.u != e.v {
                kept.push(e);
            }
        }
        Ok(Self::assemble(vertex_count, kept, None))
    }

    fn assemble(vertex_count: usize, edges: Vec<Edge>, external_ids: Option<Vec<u64>>) -> Self {
        let mut degree = vec![0usize; vertex_count];
        for e in &edges {
            degree[e.u as usize] += 1;
            degree[e.v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..vertex_count].to_vec();
        let mut adjacency = vec![(0, 0); offsets[vertex_count]];
        for e in &edges {
            adjacency[cursor[e.u as usize]] = (e.v, e.w);
            cursor[e.u as usize] += 1;
            adjacency[cursor[e.v as usize]] = (e.u, e.w);
            cursor[e.v as usize] += 1;
        }
        for u in 0..vertex_count {
            adjacency[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        WeightedGraph {
            edges,
            offsets,
            adjacency,
            external_ids,
        }
    }

    pub fn empty() -> Self {
        Self::assemble(0, Vec::new(), None)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count() as VertexId
    }

    /// Incident edges of `u` as `(neighbor, weight)`, unchecked.
    #[inline]
    pub fn adj(&self, u: VertexId) -> &[(VertexId, Weight)] {
        let u = u as usize;
        &self.adjacency[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn neighbors(&self, u: VertexId) -> Result<&[(VertexId, Weight)]> {
        self.check(u)?;
        Ok(self.adj(u))
    }

    pub fn degree(&self, u: VertexId) -> Result<usize> {
        self.check(u)?;
        Ok(self.adj(u).len())
    }

    #[inline]
    pub(crate) fn degree_unchecked(&self, u: VertexId) -> usize {
        let u = u as usize;
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn check(&self, u: VertexId) -> Result<()> {
        if (u as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                id: u as usize,
                vertex_count: self.vertex_count(),
            })
        }
    }

    pub fn external_ids(&self) -> Option<&[u64]> {
        self.external_ids.as_deref()
    }

    /// External id of a dense vertex (the dense id itself for generated graphs).
    pub fn external_id(&self, u: VertexId) -> u64 {
        match &self.external_ids {
            Some(ids) => ids[u as usize],
            None => u as u64,
        }
    }

    /// Replaces the external id table. `ids` must have one entry per vertex.
    pub fn with_external_ids(mut self, ids: Vec<u64>) -> Result<Self> {
        if ids.len() != self.vertex_count() {
            return Err(Error::Invalid(format!(
                "id map has {} entries for {} vertices",
                ids.len(),
                self.vertex_count()
            )));
        }
        self.external_ids = Some(ids);
        Ok(self)
    }

    pub fn stats(&self) -> GraphStats {
        let n = self.vertex_count();
        let m = self.edge_count();
        let distinct: HashSet<Weight> = self.edges.iter().map(|e| e.w).collect();
        GraphStats {
            vertex_count: n,
            edge_count: m,
            graph_size: n + m,
            average_degree: if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 },
            distinct_weight_count: distinct.len(),
            max_degree: self.vertices().map(|u| self.degree_unchecked(u)).max().unwrap_or(0),
        }
    }

    /// Redraws every edge weight uniformly from `[0, sigma]`.
    pub fn reassign_weights(&self, sigma: Weight, seed: u64) -> Result<Self> {
        if sigma == 0 || sigma > WeightInterval::MAX_WEIGHT {
            return Err(Error::Invalid(format!("sigma must be in [1, {}]", WeightInterval::MAX_WEIGHT)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                w: rng.gen_range(0..=sigma),
                ..*e
            })
            .collect();
        Ok(Self::assemble(self.vertex_count(), edges, self.external_ids.clone()))
    }

    /// Simple graph with `m` distinct edges chosen uniformly among all
    /// `n(n-1)/2` vertex pairs, weights uniform in `[1, sigma]`.
    pub fn random(n: usize, m: usize, sigma: Weight, seed: u64) -> Result<Self> {
        let pairs = n.saturating_mul(n.saturating_sub(1)) / 2;
        if m > pairs {
            return Err(Error::Invalid(format!("{m} edges do not fit in a simple graph on {n} vertices")));
        }
        if sigma == 0 || sigma > WeightInterval::MAX_WEIGHT {
            return Err(Error::Invalid(format!("sigma must be in [1, {}]", WeightInterval::MAX_WEIGHT)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chosen: Vec<(VertexId, VertexId)> = if m.saturating_mul(2) > pairs {
            let mut all: Vec<(VertexId, VertexId)> = (0..n as VertexId)
                .flat_map(|u| (u + 1..n as VertexId).map(move |v| (u, v)))
                .collect();
            let (picked, _) = all.partial_shuffle(&mut rng, m);
            picked.to_vec()
        } else {
            let mut seen = HashSet::with_capacity(m);
            let mut out = Vec::with_capacity(m);
            while out.len() < m {
                let a = rng.gen_range(0..n as VertexId);
                let b = rng.gen_range(0..n as VertexId);
                if a == b {
                    continue;
                }
                let key = (a.min(b), a.max(b));
                if seen.insert(key) {
                    out.push(key);
                }
            }
            out
        };
        let edges = chosen
            .into_iter()
            .map(|(u, v)| Edge {
                u,
                v,
                w: rng.gen_range(1..=sigma),
            })
            .collect();
        Ok(Self::assemble(n, edges, None))
    }

    /// Parses a whitespace-separated `u v w` edge list.
    ///
    /// External ids are integers, optionally written with a `v` prefix
    /// (`v3` and `3` name the same vertex). They are remapped to dense ids in
    /// order of first appearance. Lines starting with `#` are comments, except
    /// `#! vertex <id>` which declares a (possibly isolated) vertex.
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut ids: HashMap<u64, VertexId> = HashMap::new();
        let mut external = Vec::new();
        let mut edges = Vec::new();
        let mut loops = 0usize;
        let mut intern = |ext: u64, external: &mut Vec<u64>| -> VertexId {
            *ids.entry(ext).or_insert_with(|| {
                external.push(ext);
                (external.len() - 1) as VertexId
            })
        };
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("#!") {
                let mut toks = rest.split_whitespace();
                if toks.next() == Some("vertex") {
                    let tok = toks.next().ok_or_else(|| parse_err(line_no, "missing vertex id"))?;
                    let ext = parse_vertex_token(tok).ok_or_else(|| parse_err(line_no, "bad vertex id"))?;
                    intern(ext, &mut external);
                }
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(parse_err(line_no, &format!("expected `u v w`, found {} tokens", toks.len())));
            }
            let u = parse_vertex_token(toks[0]).ok_or_else(|| parse_err(line_no, &format!("bad vertex `{}`", toks[0])))?;
            let v = parse_vertex_token(toks[1]).ok_or_else(|| parse_err(line_no, &format!("bad vertex `{}`", toks[1])))?;
            let w: i64 = toks[2]
                .parse()
                .map_err(|_| parse_err(line_no, &format!("bad weight `{}`", toks[2])))?;
            if w < 0 {
                return Err(Error::Invalid(format!("line {line_no}: negative weight {w}")));
            }
            if w > WeightInterval::MAX_WEIGHT as i64 {
                return Err(Error::Invalid(format!("line {line_no}: weight {w} exceeds the supported range")));
            }
            let du = intern(u, &mut external);
            let dv = intern(v, &mut external);
            if du == dv {
                loops += 1;
                continue;
            }
            edges.push(Edge { u: du, v: dv, w: w as Weight });
        }
        if loops > 0 {
            log::warn!("dropped {loops} self-loop(s) while loading edge list");
        }
        Ok(Self::assemble(external.len(), edges, Some(external)))
    }

    /// Writes the graph in the format read by [`load_edge_list`](Self::load_edge_list).
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# vertices {} edges {}", self.vertex_count(), self.edge_count())?;
        // Declaring every vertex up front pins the dense id order on reload.
        for u in self.vertices() {
            writeln!(out, "#! vertex {}", self.external_id(u))?;
        }
        for e in &self.edges {
            writeln!(out, "{} {} {}", self.external_id(e.u), self.external_id(e.v), e.w)?;
        }
        Ok(())
    }

    /// Resolves an external vertex token (`7` or `v7`) to a dense id.
    pub fn resolve(&self, token: &str) -> Result<VertexId> {
        let ext = parse_vertex_token(token).ok_or_else(|| Error::UnknownVertex(token.to_string()))?;
        match &self.external_ids {
            Some(ids) => ids
                .iter()
                .position(|&x| x == ext)
                .map(|p| p as VertexId)
                .ok_or_else(|| Error::UnknownVertex(token.to_string())),
            None => {
                if ext < self.vertex_count() as u64 {
                    Ok(ext as VertexId)
                } else {
                    Err(Error::UnknownVertex(token.to_string()))
                }
            }
        }
    }

    /// Checks adjacency symmetry by full scan.
    pub fn is_symmetric(&self) -> bool {
        let mut forward: HashMap<(VertexId, VertexId, Weight), isize> = HashMap::new();
        for u in self.vertices() {
            for &(v, w) in self.adj(u) {
                *forward.entry((u.min(v), u.max(v), w)).or_default() += if u < v { 1 } else { -1 };
            }
        }
        forward.values().all(|&c| c == 0)
    }
}

/// Parses `7` or `v7`.
pub fn parse_vertex_token(tok: &str) -> Option<u64> {
    let t = tok.strip_prefix('v').or_else(|| tok.strip_prefix('V')).unwrap_or(tok);
    t.parse().ok()
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// Map from external ids to dense ids, for repeated lookups.
#[derive(Clone, Debug, Default)]
pub struct IdMap {
    to_dense: HashMap<u64, VertexId>,
    to_external: Vec<u64>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        Self::from_external((0..n as u64).collect())
    }

    pub fn from_external(to_external: Vec<u64>) -> Self {
        let to_dense = to_external.iter().enumerate().map(|(i, &e)| (e, i as VertexId)).collect();
        IdMap { to_dense, to_external }
    }

    pub fn for_graph(g: &WeightedGraph) -> Self {
        match g.external_ids() {
            Some(ids) => Self::from_external(ids.to_vec()),
            None => Self::identity(g.vertex_count()),
        }
    }

    pub fn len(&self) -> usize {
        self.to_external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_external.is_empty()
    }

    pub fn dense(&self, token: &str) -> Result<VertexId> {
        parse_vertex_token(token)
            .and_then(|e| self.to_dense.get(&e).copied())
            .ok_or_else(|| Error::UnknownVertex(token.to_string()))
    }

    pub fn external(&self, u: VertexId) -> u64 {
        self.to_external[u as usize]
    }

    pub fn externals(&self) -> &[u64] {
        &self.to_external
    }

    /// One external id per line.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for e in &self.to_external {
            writeln!(out, "{e}")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut ids = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            ids.push(parse_vertex_token(t).ok_or_else(|| parse_err(i + 1, &format!("bad vertex id `{t}`")))?);
        }
        Ok(Self::from_external(ids))
    }
}
