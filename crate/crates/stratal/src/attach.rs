//! Attaching maps and their inverses.
//!
//! The building block `P` is the one-vertex genus-0 graph with three legs.
//! [`attach`] glues `i` of its markings (for `1 <= i <= 3`) onto the last `i`
//! markings of a base graph as reordered by a permutation `sigma`, producing
//! a stable graph of type `(g + i - 1, n + 3 - 2i)`. [`peel`] recognizes
//! vertices that look like a glued-on `P` and reverses the operation.
//! [`whitehead`] exchanges an edge: contract it, then re-expand the merged
//! vertex along a chosen repartition of its slots.
//!
//! Marking conventions for `attach`: result positions `1..n-i` carry
//! `m(sigma(1)), ..., m(sigma(n-i))`; the remaining `3 - i` positions at the
//! tail carry the unglued `P` markings on the new vertex. An optional
//! `relabel` permutation applied to the result markings afterwards
//! (`m_final(j) = m_raw(relabel(j))`) lets a peel report reconstruct graphs
//! whose `P`-type vertex carries non-tail labels; plain attaches leave it
//! unset.

use crate::graph::StableGraph;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum AttachError {
    #[error("arity must be 1, 2, or 3 (got {arity})")]
    BadArity { arity: usize },
    #[error("arity {arity} exceeds the number of legs {legs}")]
    ArityExceedsLegs { arity: usize, legs: usize },
    #[error("sigma must be a permutation of 1..={expected}")]
    BadSigma { expected: usize },
    #[error("relabel must be a permutation of 1..={expected}")]
    BadRelabel { expected: usize },
    #[error("edge index {edge} out of range")]
    BadEdge { edge: usize },
    #[error("edge {edge} is a loop; whitehead needs a non-loop edge")]
    LoopEdge { edge: usize },
    #[error("repartition leaves a vertex unstable or is out of range: {reason}")]
    InvalidRepartition { reason: String },
}

/// A permutation of `{1, ..., n}`, stored 0-based: `perm()[j]` is the image
/// of `j`. Serialized 1-based to match the written convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// From 1-based images, validating bijectivity.
    pub fn from_one_based(images: &[usize]) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut v = Vec::with_capacity(n);
        for &im in images {
            if im == 0 || im > n || seen[im - 1] {
                return None;
            }
            seen[im - 1] = true;
            v.push(im - 1);
        }
        Some(Perm(v))
    }

    pub fn from_zero_based(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if im >= n || seen[im] {
                return None;
            }
            seen[im] = true;
        }
        Some(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v + 1).collect()
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.images_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Perm::from_one_based(&images)
            .ok_or_else(|| serde::de::Error::custom("not a permutation of 1..=n"))
    }
}

/// Specification of one attaching map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachSpec {
    /// How many `P`-markings are glued: 1, 2, or 3.
    pub arity: usize,
    /// Permutation of the base markings; the glued ones are
    /// `sigma(n-arity+1), ..., sigma(n)`, paired in order with `P`'s 1..arity.
    pub sigma: Perm,
    /// Optional relabeling of the result markings, applied last.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relabel: Option<Perm>,
}

impl AttachSpec {
    pub fn plain(arity: usize, sigma: Perm) -> Self {
        AttachSpec {
            arity,
            sigma,
            relabel: None,
        }
    }
}

/// Glue `P` onto `g` along `spec`. Output type: total genus `g + arity - 1`,
/// legs `n + 3 - 2*arity`.
pub fn attach(g: &StableGraph, spec: &AttachSpec) -> Result<StableGraph, AttachError> {
    let n = g.num_legs();
    let i = spec.arity;
    if !(1..=3).contains(&i) {
        return Err(AttachError::BadArity { arity: i });
    }
    if i > n {
        return Err(AttachError::ArityExceedsLegs { arity: i, legs: n });
    }
    if spec.sigma.len() != n {
        return Err(AttachError::BadSigma { expected: n });
    }
    let n_out = n + 3 - 2 * i;
    if let Some(r) = &spec.relabel {
        if r.len() != n_out {
            return Err(AttachError::BadRelabel { expected: n_out });
        }
    }

    let w = g.num_vertices();
    let mut genus: Vec<u32> = (0..w).map(|v| g.genus_of(v)).collect();
    genus.push(0);
    let mut edges = g.edges().to_vec();
    for t in 0..i {
        let glued_label = spec.sigma.apply(n - i + t);
        edges.push((g.legs()[glued_label], w));
    }
    let mut legs = Vec::with_capacity(n_out);
    for j in 0..n - i {
        legs.push(g.legs()[spec.sigma.apply(j)]);
    }
    for _ in 0..(3 - i) {
        legs.push(w);
    }
    if let Some(r) = &spec.relabel {
        legs = (0..n_out).map(|j| legs[r.apply(j)]).collect();
    }
    Ok(StableGraph::from_parts_unchecked(genus, edges, legs))
}

/// Relabel markings: `m_out(j) = m_in(perm(j))`.
pub fn permute_markings(g: &StableGraph, perm: &Perm) -> Result<StableGraph, AttachError> {
    let n = g.num_legs();
    if perm.len() != n {
        return Err(AttachError::BadRelabel { expected: n });
    }
    let legs = (0..n).map(|j| g.legs()[perm.apply(j)]).collect();
    Ok(StableGraph::from_parts_unchecked(
        (0..g.num_vertices()).map(|v| g.genus_of(v)).collect(),
        g.edges().to_vec(),
        legs,
    ))
}

/// One way of un-gluing a `P`-type vertex.
#[derive(Debug, Clone, Serialize)]
pub struct PeelEntry {
    /// The peeled vertex of the input graph.
    pub vertex: usize,
    /// The base graph left after removing it (cut edges become new legs).
    pub base: StableGraph,
    /// Spec with `attach(base, spec)` isomorphic to the input
    /// (canonical-code equality).
    pub spec: AttachSpec,
}

/// Find every vertex that can be peeled off as a glued `P`: genus 0, total
/// valence 3, no loops, at least one edge endpoint, remaining slots legs, and
/// removal leaves a connected stable graph. Entries are sorted by vertex.
pub fn peel(g: &StableGraph) -> Vec<PeelEntry> {
    let n = g.num_legs();
    let mut entries = Vec::new();
    for v in 0..g.num_vertices() {
        if g.genus_of(v) != 0 || g.valence(v) != 3 || g.loops_at(v) != 0 {
            continue;
        }
        let cut_edges: Vec<usize> = (0..g.num_edges())
            .filter(|&e| {
                let (a, b) = g.edges()[e];
                a == v || b == v
            })
            .collect();
        let i = cut_edges.len();
        if i == 0 {
            continue;
        }
        // Base: drop v, reindex, convert the cut edges to fresh legs in edge
        // order, keeping the surviving legs first in label order.
        let remap = |u: usize| if u > v { u - 1 } else { u };
        let genus: Vec<u32> = (0..g.num_vertices())
            .filter(|&u| u != v)
            .map(|u| g.genus_of(u))
            .collect();
        let edges: Vec<(usize, usize)> = (0..g.num_edges())
            .filter(|e| !cut_edges.contains(e))
            .map(|e| {
                let (a, b) = g.edges()[e];
                (remap(a), remap(b))
            })
            .collect();
        let surviving: Vec<usize> = (0..n).filter(|&j| g.legs()[j] != v).collect();
        let mut base_legs: Vec<usize> = surviving.iter().map(|&j| remap(g.legs()[j])).collect();
        for &e in &cut_edges {
            let (a, b) = g.edges()[e];
            let partner = if a == v { b } else { a };
            base_legs.push(remap(partner));
        }
        let raw = crate::graph::RawGraph {
            genus: genus.iter().map(|&x| x as i64).collect(),
            edges: edges.iter().map(|&(a, b)| [a as i64, b as i64]).collect(),
            legs: base_legs.iter().map(|&x| x as i64).collect(),
        };
        let Ok(base) = StableGraph::validate(&raw) else {
            continue; // removal disconnected the graph
        };

        // Reconstruction spec: sigma = id glues the appended cut legs; the
        // relabel moves the tail markings onto the labels v carried in g.
        let n_b = base.num_legs();
        let legs_at_v: Vec<usize> = (0..n).filter(|&j| g.legs()[j] == v).collect();
        let mut relabel_images = vec![0usize; n];
        for (rank, &j) in surviving.iter().enumerate() {
            relabel_images[j] = rank;
        }
        for (s, &j) in legs_at_v.iter().enumerate() {
            relabel_images[j] = (n_b - i) + s;
        }
        let relabel = Perm::from_zero_based(relabel_images).expect("bijective by construction");
        let spec = AttachSpec {
            arity: i,
            sigma: Perm::identity(n_b),
            relabel: if relabel.is_identity() {
                None
            } else {
                Some(relabel)
            },
        };
        let replay = attach(&base, &spec).expect("peel spec is valid");
        assert_eq!(
            replay.canonical_code(),
            g.canonical_code(),
            "peel reconstruction must reproduce the input graph"
        );
        entries.push(PeelEntry {
            vertex: v,
            base,
            spec,
        });
    }
    entries
}

/// How to split the merged vertex after contracting the exchanged edge.
/// Slots at the merged vertex are enumerated deterministically on the
/// contracted graph: every edge endpoint incident to it, in (edge index,
/// endpoint) order — a loop contributes two consecutive slots — followed by
/// its legs in marking order. `first_slots` lists the slot positions kept on
/// the first of the two new vertices; everything else goes to the second.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Repartition {
    pub genus_first: u32,
    pub first_slots: Vec<usize>,
}

/// Result of a Whitehead exchange: the new graph and the index of the edge
/// that replaced the contracted one.
#[derive(Debug, Clone, Serialize)]
pub struct WhiteheadResult {
    pub graph: StableGraph,
    pub new_edge: usize,
}

/// Slot descriptors at the merged vertex of the contracted graph, in the
/// order `Repartition` indexes them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    /// (edge index, endpoint 0/1) in the contracted graph.
    EdgeEnd(usize, u8),
    /// Leg position (0-based marking index).
    Leg(usize),
}

fn slots_at(h: &StableGraph, u: usize) -> Vec<Slot> {
    let mut slots = Vec::new();
    for (e, &(a, b)) in h.edges().iter().enumerate() {
        if a == u {
            slots.push(Slot::EdgeEnd(e, 0));
        }
        if b == u {
            slots.push(Slot::EdgeEnd(e, 1));
        }
    }
    for (j, &v) in h.legs().iter().enumerate() {
        if v == u {
            slots.push(Slot::Leg(j));
        }
    }
    slots
}

/// Exchange edge `e`: contract it, then re-expand the merged vertex into two
/// vertices joined by a fresh edge, distributing genus and slots per `r`.
/// Preserves vertex count, edge count, and total genus.
pub fn whitehead(
    g: &StableGraph,
    e: usize,
    r: &Repartition,
) -> Result<WhiteheadResult, AttachError> {
    if e >= g.num_edges() {
        return Err(AttachError::BadEdge { edge: e });
    }
    let (a, b) = g.edges()[e];
    if a == b {
        return Err(AttachError::LoopEdge { edge: e });
    }
    let (h, u) = g.contract_edge_tracked(e);
    let slots = slots_at(&h, u);
    for &s in &r.first_slots {
        if s >= slots.len() {
            return Err(AttachError::InvalidRepartition {
                reason: format!("slot {s} out of range (merged vertex has {})", slots.len()),
            });
        }
    }
    let merged_genus = h.genus_of(u);
    if r.genus_first > merged_genus {
        return Err(AttachError::InvalidRepartition {
            reason: format!(
                "genus_first {} exceeds merged genus {merged_genus}",
                r.genus_first
            ),
        });
    }

    let second = h.num_vertices(); // appended vertex index
    let mut genus: Vec<u32> = (0..h.num_vertices()).map(|v| h.genus_of(v)).collect();
    genus[u] = r.genus_first;
    genus.push(merged_genus - r.genus_first);

    let mut edges = h.edges().to_vec();
    let mut legs = h.legs().to_vec();
    let keep_first: std::collections::BTreeSet<usize> = r.first_slots.iter().copied().collect();
    for (pos, slot) in slots.iter().enumerate() {
        if keep_first.contains(&pos) {
            continue;
        }
        match *slot {
            Slot::EdgeEnd(ei, end) => {
                let pair = &mut edges[ei];
                if end == 0 {
                    pair.0 = second;
                } else {
                    pair.1 = second;
                }
            }
            Slot::Leg(j) => legs[j] = second,
        }
    }
    edges.push((u, second));

    let raw = crate::graph::RawGraph {
        genus: genus.iter().map(|&x| x as i64).collect(),
        edges: edges.iter().map(|&(x, y)| [x as i64, y as i64]).collect(),
        legs: legs.iter().map(|&x| x as i64).collect(),
    };
    let graph = StableGraph::validate(&raw).map_err(|err| AttachError::InvalidRepartition {
        reason: err
            .defects
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    })?;
    let new_edge = graph
        .edges()
        .iter()
        .position(|&(x, y)| (x, y) == (u.min(second), u.max(second)))
        .expect("freshly inserted edge is present");
    Ok(WhiteheadResult { graph, new_edge })
}
