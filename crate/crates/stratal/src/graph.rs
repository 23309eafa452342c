//! Stable graphs: genus-weighted multigraphs with loops and labeled legs.
//!
//! A [`StableGraph`] is the dual graph of a stable nodal curve: each vertex
//! carries a genus `g(v) >= 0`, edges are unordered vertex pairs (loops
//! allowed), and the `n` markings are legs attached to vertices. Writing
//! `n(v)` for the number of half-edge slots at `v` (edge endpoints with loops
//! counted twice, plus legs), stability demands `2g(v) - 2 + n(v) > 0` at
//! every vertex, and the graph must be connected.
//!
//! The module provides validation from raw data, the stratum dimension
//! bookkeeping, a canonical code (complete isomorphism invariant for marked
//! graphs), the automorphism group, edge contraction, and DOT export.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Raw, unvalidated graph data; the JSON interchange form.
///
/// `genus[v]` is the genus of vertex `v`; `edges` lists unordered endpoint
/// pairs (0-based); `legs[i]` is the vertex carrying marking `i+1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawGraph {
    pub genus: Vec<i64>,
    pub edges: Vec<[i64; 2]>,
    pub legs: Vec<i64>,
}

/// A single violated validity condition, reported with enough context to fix
/// the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum GraphDefect {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {vertex} has negative genus {genus}")]
    NegativeGenus { vertex: usize, genus: i64 },
    #[error("edge {edge} endpoint {endpoint} is not a vertex index")]
    BadEdgeEndpoint { edge: usize, endpoint: i64 },
    #[error("leg {leg} points at {vertex}, which is not a vertex index")]
    BadLegTarget { leg: usize, vertex: i64 },
    #[error("vertex {vertex} is unstable: 2g-2+n = {excess} (needs > 0)")]
    Unstable { vertex: usize, excess: i64 },
    #[error("graph is disconnected")]
    Disconnected,
}

/// Validation failure: every violated condition, not just the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("invalid stable graph: {defects:?}")]
pub struct ValidationErrors {
    pub defects: Vec<GraphDefect>,
}

/// Dimension bookkeeping for the stratum labeled by a stable graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StratumInfo {
    /// Complex dimension: sum over vertices of `3g(v) - 3 + n(v)`.
    pub dim_complex: i64,
    /// Real dimension, twice the complex one.
    pub dim_real: i64,
    /// Largest real vertex dimension `max_v 2*(3g(v) - 3 + n(v))`.
    pub local_dim: i64,
    /// Real dimension `6g - 6 + 2n` of the ambient moduli space.
    pub ambient_dim_real: i64,
}

/// Canonical code: a byte sequence characterizing the marked isomorphism
/// class. Two stable graphs are isomorphic (respecting genera and each leg
/// label) iff their codes are equal; codes order strata deterministically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Compact hex rendering, handy as a stable identifier in reports.
    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// The automorphism group of a stable graph. Leg labels are fixed pointwise;
/// the order also counts permutations of parallel edges and the half-edge
/// swap of each loop, so e.g. the theta graph has order 2 * 3! = 12.
#[derive(Debug, Clone, Serialize)]
pub struct AutomorphismGroup {
    /// Total order: (#vertex automorphisms) * prod(multiplicity!) * 2^(#loops).
    pub order: u64,
    /// Every vertex automorphism (including the identity), as image vectors.
    pub vertex_perms: Vec<Vec<usize>>,
    /// For each vertex automorphism, an induced permutation of edge indices
    /// (parallel copies mapped in index order).
    pub edge_perms: Vec<Vec<usize>>,
}

/// A validated stable graph. Construction goes through [`StableGraph::new`]
/// (or [`StableGraph::validate`] from raw data), after which the invariants
/// hold for the lifetime of the value: connected, every vertex stable, edges
/// stored as sorted normalized pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StableGraph {
    genus: Vec<u32>,
    edges: Vec<(usize, usize)>,
    legs: Vec<usize>,
}

impl Serialize for StableGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StableGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawGraph::deserialize(d)?;
        StableGraph::validate(&raw).map_err(serde::de::Error::custom)
    }
}

impl StableGraph {
    /// Build and validate from typed parts. Edge pairs may come in any order;
    /// they are normalized to `(min, max)` and sorted.
    pub fn new(
        genus: Vec<u32>,
        edges: Vec<(usize, usize)>,
        legs: Vec<usize>,
    ) -> Result<Self, ValidationErrors> {
        let raw = RawGraph {
            genus: genus.iter().map(|&g| g as i64).collect(),
            edges: edges.iter().map(|&(a, b)| [a as i64, b as i64]).collect(),
            legs: legs.iter().map(|&v| v as i64).collect(),
        };
        Self::validate(&raw)
    }

    /// Validate raw data, reporting every violated condition on failure.
    pub fn validate(raw: &RawGraph) -> Result<Self, ValidationErrors> {
        let mut defects = Vec::new();
        let nv = raw.genus.len();
        if nv == 0 {
            defects.push(GraphDefect::Empty);
            return Err(ValidationErrors { defects });
        }
        for (v, &g) in raw.genus.iter().enumerate() {
            if g < 0 {
                defects.push(GraphDefect::NegativeGenus {
                    vertex: v,
                    genus: g,
                });
            }
        }
        let in_range = |x: i64| x >= 0 && (x as usize) < nv;
        for (e, pair) in raw.edges.iter().enumerate() {
            for &end in pair {
                if !in_range(end) {
                    defects.push(GraphDefect::BadEdgeEndpoint {
                        edge: e,
                        endpoint: end,
                    });
                }
            }
        }
        for (l, &v) in raw.legs.iter().enumerate() {
            if !in_range(v) {
                defects.push(GraphDefect::BadLegTarget { leg: l, vertex: v });
            }
        }
        if !defects.is_empty() {
            return Err(ValidationErrors { defects });
        }

        let genus: Vec<u32> = raw.genus.iter().map(|&g| g as u32).collect();
        let mut edges: Vec<(usize, usize)> = raw
            .edges
            .iter()
            .map(|&[a, b]| {
                let (a, b) = (a as usize, b as usize);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        let legs: Vec<usize> = raw.legs.iter().map(|&v| v as usize).collect();
        let g = StableGraph { genus, edges, legs };

        for v in 0..nv {
            let excess = 2 * g.genus[v] as i64 - 2 + g.valence(v) as i64;
            if excess <= 0 {
                defects.push(GraphDefect::Unstable { vertex: v, excess });
            }
        }
        if !g.is_connected() {
            defects.push(GraphDefect::Disconnected);
        }
        if defects.is_empty() {
            Ok(g)
        } else {
            Err(ValidationErrors { defects })
        }
    }

    /// Internal constructor for graphs that are valid by construction.
    /// Normalizes edge storage and double-checks invariants in debug builds.
    pub(crate) fn from_parts_unchecked(
        genus: Vec<u32>,
        mut edges: Vec<(usize, usize)>,
        legs: Vec<usize>,
    ) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        let g = StableGraph { genus, edges, legs };
        debug_assert!(
            {
                let raw = g.to_raw();
                StableGraph::validate(&raw).is_ok()
            },
            "internal construction produced an invalid graph: {:?}",
            g
        );
        g
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            genus: self.genus.iter().map(|&g| g as i64).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [a as i64, b as i64])
                .collect(),
            legs: self.legs.iter().map(|&v| v as i64).collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn genus_of(&self, v: usize) -> u32 {
        self.genus[v]
    }

    /// Sorted normalized edge list; indices into it are the edge ids used by
    /// [`StableGraph::contract_edge`] and the CLI.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `legs()[i]` is the vertex carrying marking `i+1`.
    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    /// Number of edge-endpoint slots at `v`, loops counted twice.
    pub fn edge_endpoints_at(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v && b == v)
            .count()
    }

    pub fn legs_at(&self, v: usize) -> Vec<usize> {
        (0..self.legs.len())
            .filter(|&i| self.legs[i] == v)
            .collect()
    }

    /// Half-edge slot count `n(v)`: edge endpoints (loops twice) plus legs.
    pub fn valence(&self, v: usize) -> usize {
        self.edge_endpoints_at(v) + self.legs.iter().filter(|&&w| w == v).count()
    }

    /// Complex dimension `3g(v) - 3 + n(v)` of the moduli factor at `v`.
    pub fn vertex_dim(&self, v: usize) -> i64 {
        3 * self.genus_of(v) as i64 - 3 + self.valence(v) as i64
    }

    pub fn first_betti(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices()
    }

    /// Total genus: vertex genera plus the first Betti number of the graph.
    pub fn total_genus(&self) -> u32 {
        self.genus.iter().sum::<u32>() + self.first_betti() as u32
    }

    fn is_connected(&self) -> bool {
        let nv = self.genus.len();
        let mut seen = vec![false; nv];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (from, to) in [(a, b), (b, a)] {
                    if from == v && !seen[to] {
                        seen[to] = true;
                        stack.push(to);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Stratum dimension data. The identity
    /// `dim_real + 2 * #edges = ambient_dim_real` holds for every valid graph.
    pub fn stratum_info(&self) -> StratumInfo {
        let dim_complex: i64 = (0..self.num_vertices()).map(|v| self.vertex_dim(v)).sum();
        let local_dim = (0..self.num_vertices())
            .map(|v| 2 * self.vertex_dim(v))
            .max()
            .unwrap_or(0);
        let g = self.total_genus() as i64;
        let n = self.num_legs() as i64;
        StratumInfo {
            dim_complex,
            dim_real: 2 * dim_complex,
            local_dim,
            ambient_dim_real: 6 * g - 6 + 2 * n,
        }
    }

    /// Contract edge `e`. A non-loop edge merges its endpoints (genera add);
    /// a loop is removed and its vertex gains one genus. Total genus and
    /// stability are preserved.
    ///
    /// Panics if `e` is out of range (precondition of the operation).
    pub fn contract_edge(&self, e: usize) -> StableGraph {
        self.contract_edge_tracked(e).0
    }

    /// As [`contract_edge`](Self::contract_edge), also reporting the merged
    /// vertex's index in the contracted graph.
    pub(crate) fn contract_edge_tracked(&self, e: usize) -> (StableGraph, usize) {
        assert!(e < self.edges.len(), "edge index {e} out of range");
        let (a, b) = self.edges[e];
        if a == b {
            // Loop: drop the edge, bump the genus.
            let mut genus = self.genus.clone();
            genus[a] += 1;
            let edges = self
                .edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != e)
                .map(|(_, &p)| p)
                .collect();
            (
                StableGraph::from_parts_unchecked(genus, edges, self.legs.clone()),
                a,
            )
        } else {
            // Merge b into a; vertices above b shift down by one.
            let remap = |v: usize| {
                if v == b {
                    a
                } else if v > b {
                    v - 1
                } else {
                    v
                }
            };
            let mut genus = Vec::with_capacity(self.genus.len() - 1);
            for (v, &gv) in self.genus.iter().enumerate() {
                if v == b {
                    continue;
                }
                genus.push(if v == a { gv + self.genus[b] } else { gv });
            }
            let edges = self
                .edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != e)
                .map(|(_, &(x, y))| (remap(x), remap(y)))
                .collect();
            let legs = self.legs.iter().map(|&v| remap(v)).collect();
            (
                StableGraph::from_parts_unchecked(genus, edges, legs),
                remap(a),
            )
        }
    }

    /// Vertex classes under iterated invariant refinement. The class ids are
    /// isomorphism-invariant, so both the canonical search and the
    /// automorphism search only need to consider class-preserving orderings.
    fn refined_classes(&self) -> Vec<usize> {
        let nv = self.num_vertices();
        // Initial key: (genus, sorted leg labels, valence, loop count).
        let mut keys: Vec<Vec<u64>> = (0..nv)
            .map(|v| {
                let mut k = vec![
                    self.genus[v] as u64,
                    self.valence(v) as u64,
                    self.loops_at(v) as u64,
                ];
                for l in self.legs_at(v) {
                    k.push(l as u64);
                }
                k
            })
            .collect();
        let assign = |keys: &[Vec<u64>]| -> Vec<usize> {
            let mut sorted: Vec<&Vec<u64>> = keys.iter().collect();
            sorted.sort();
            sorted.dedup();
            keys.iter()
                .map(|k| sorted.binary_search(&k).unwrap())
                .collect()
        };
        let mut ids = assign(&keys);
        loop {
            let prev_classes = ids.iter().max().unwrap() + 1;
            keys = (0..nv)
                .map(|v| {
                    let mut k = vec![ids[v] as u64];
                    let mut nb: Vec<u64> = Vec::new();
                    for &(a, b) in &self.edges {
                        if a == v {
                            nb.push(ids[b] as u64);
                        }
                        if b == v {
                            nb.push(ids[a] as u64);
                        }
                    }
                    nb.sort_unstable();
                    k.extend(nb);
                    k
                })
                .collect();
            let next = assign(&keys);
            let next_classes = next.iter().max().unwrap() + 1;
            ids = next;
            if next_classes == prev_classes {
                return ids;
            }
        }
    }

    /// Token stream for the vertex ordering `order` (old index at each new
    /// position). Lexicographic comparison of streams realizes the canonical
    /// minimum.
    fn code_tokens(&self, order: &[usize]) -> Vec<u32> {
        let nv = self.num_vertices();
        let mut pos = vec![0usize; nv];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let mut t = Vec::with_capacity(2 + nv + self.legs.len() + 2 * self.edges.len());
        t.push(nv as u32);
        t.push(self.legs.len() as u32);
        for &v in order {
            t.push(self.genus[v]);
        }
        for &v in &self.legs {
            t.push(pos[v] as u32);
        }
        let mut es: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (pos[a] as u32, pos[b] as u32);
                (x.min(y), x.max(y))
            })
            .collect();
        es.sort_unstable();
        for (a, b) in es {
            t.push(a);
            t.push(b);
        }
        t
    }

    /// Vertices grouped by refinement class: concatenation of the class
    /// blocks in class order, each block ascending by vertex index.
    fn class_blocks(&self) -> Vec<Vec<usize>> {
        let ids = self.refined_classes();
        let nclass = ids.iter().max().unwrap() + 1;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); nclass];
        for (v, &c) in ids.iter().enumerate() {
            blocks[c].push(v);
        }
        blocks
    }

    /// Orderings compatible with the refinement classes, visited via
    /// class-block permutations. Each visited slice lists, position by
    /// position, which old vertex lands there; positions are grouped by
    /// class in class order.
    fn for_each_class_order(&self, mut f: impl FnMut(&[usize])) {
        let blocks = self.class_blocks();
        // Recursively permute each block in class order.
        fn rec(
            blocks: &[Vec<usize>],
            bi: usize,
            current: &mut Vec<usize>,
            f: &mut impl FnMut(&[usize]),
        ) {
            if bi == blocks.len() {
                f(current);
                return;
            }
            let block = &blocks[bi];
            let mut perm: Vec<usize> = block.clone();
            // Heap's algorithm would avoid clones; sizes are tiny, so use
            // simple lexicographic permutation via sorting-based next_perm.
            permute_all(&mut perm, &mut |p| {
                let len = current.len();
                current.extend_from_slice(p);
                rec(blocks, bi + 1, current, f);
                current.truncate(len);
            });
        }
        let mut current = Vec::with_capacity(self.num_vertices());
        rec(&blocks, 0, &mut current, &mut f);
    }

    /// Canonical code: lexicographically minimal token stream over all
    /// class-compatible vertex orderings, serialized big-endian.
    ///
    /// Completeness: the refinement classes are isomorphism-invariant, so
    /// isomorphic graphs induce identical candidate token-stream sets, and
    /// the minimum agrees; conversely the code determines the graph up to
    /// relabeling.
    pub fn canonical_code(&self) -> CanonicalCode {
        let mut best: Option<Vec<u32>> = None;
        self.for_each_class_order(|order| {
            let t = self.code_tokens(order);
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        });
        let tokens = best.expect("graph has at least one vertex ordering");
        let mut bytes = Vec::with_capacity(4 * tokens.len());
        for t in tokens {
            bytes.extend_from_slice(&t.to_be_bytes());
        }
        CanonicalCode(bytes)
    }

    /// The canonical representative of the isomorphism class: this graph
    /// relabeled by a code-minimizing vertex ordering.
    pub fn canonical_form(&self) -> StableGraph {
        let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
        self.for_each_class_order(|order| {
            let t = self.code_tokens(order);
            if best.as_ref().is_none_or(|(b, _)| t < *b) {
                best = Some((t, order.to_vec()));
            }
        });
        let (_, order) = best.expect("graph has at least one vertex ordering");
        let mut pos = vec![0usize; self.num_vertices()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let genus = order.iter().map(|&v| self.genus[v]).collect();
        let edges = self.edges.iter().map(|&(a, b)| (pos[a], pos[b])).collect();
        let legs = self.legs.iter().map(|&v| pos[v]).collect();
        StableGraph::from_parts_unchecked(genus, edges, legs)
    }

    /// Automorphism group; see [`AutomorphismGroup`] for what the order counts.
    pub fn automorphism_group(&self) -> AutomorphismGroup {
        let nv = self.num_vertices();
        let mut vertex_perms: Vec<Vec<usize>> = Vec::new();

        let is_automorphism = |perm: &[usize]| -> bool {
            // Genus preserved; every leg-carrying vertex fixed (leg labels are
            // fixed pointwise, and leg sets of distinct vertices are disjoint).
            if (0..nv).any(|v| self.genus[perm[v]] != self.genus[v]) {
                return false;
            }
            if self.legs.iter().any(|&v| perm[v] != v) {
                return false;
            }
            // Edge multiset invariance.
            let mut mapped: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            mapped.sort_unstable();
            mapped == self.edges
        };

        // Convert each class-compatible ordering into the vertex map it
        // induces relative to the reference block layout.
        let flat: Vec<usize> = self.class_blocks().into_iter().flatten().collect();
        self.for_each_class_order(|order| {
            let mut perm = vec![0usize; nv];
            for (i, &v) in order.iter().enumerate() {
                perm[flat[i]] = v;
            }
            if is_automorphism(&perm) {
                vertex_perms.push(perm);
            }
        });

        // Induced edge permutation: parallel classes map in index order.
        let edge_perm_for = |perm: &[usize]| -> Vec<usize> {
            let norm = |a: usize, b: usize| (a.min(b), a.max(b));
            let mut used = vec![false; self.edges.len()];
            let mut out = vec![0usize; self.edges.len()];
            for (i, &(a, b)) in self.edges.iter().enumerate() {
                let target = norm(perm[a], perm[b]);
                let j = self
                    .edges
                    .iter()
                    .enumerate()
                    .position(|(j, &p)| !used[j] && p == target)
                    .expect("image edge exists for an automorphism");
                used[j] = true;
                out[i] = j;
            }
            out
        };
        let edge_perms: Vec<Vec<usize>> = vertex_perms.iter().map(|p| edge_perm_for(p)).collect();

        // Parallel multiplicities and loop count for the half-edge factors.
        let mut mult_factor: u64 = 1;
        let mut i = 0;
        while i < self.edges.len() {
            let mut j = i;
            while j < self.edges.len() && self.edges[j] == self.edges[i] {
                j += 1;
            }
            mult_factor *= factorial((j - i) as u64);
            i = j;
        }
        let loops: u32 = (0..nv).map(|v| self.loops_at(v) as u32).sum();
        let order = vertex_perms.len() as u64 * mult_factor * 2u64.pow(loops);

        AutomorphismGroup {
            order,
            vertex_perms,
            edge_perms,
        }
    }

    /// Upper bound that the automorphism order always divides:
    /// `#V! * prod(multiplicity!) * 2^(#loops)`.
    pub fn automorphism_order_bound(&self) -> u64 {
        let mut bound = factorial(self.num_vertices() as u64);
        let mut i = 0;
        while i < self.edges.len() {
            let mut j = i;
            while j < self.edges.len() && self.edges[j] == self.edges[i] {
                j += 1;
            }
            bound *= factorial((j - i) as u64);
            i = j;
        }
        let loops: u32 = (0..self.num_vertices())
            .map(|v| self.loops_at(v) as u32)
            .sum();
        bound * 2u64.pow(loops)
    }

    /// DOT rendering: vertices labeled `g=<genus>`, markings as dashed stubs.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        s.push_str(&format!("graph \"{name}\" {{\n"));
        for v in 0..self.num_vertices() {
            s.push_str(&format!("  v{v} [label=\"g={}\"];\n", self.genus[v]));
        }
        for (i, _) in self.legs.iter().enumerate() {
            s.push_str(&format!(
                "  m{} [label=\"{}\", shape=plaintext];\n",
                i + 1,
                i + 1
            ));
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!("  v{a} -- v{b};\n"));
        }
        for (i, &v) in self.legs.iter().enumerate() {
            s.push_str(&format!("  m{} -- v{v} [style=dashed];\n", i + 1));
        }
        s.push_str("}\n");
        s
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Visit all permutations of `items` in place (lexicographic order).
fn permute_all(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    items.sort_unstable();
    loop {
        f(items);
        // next_permutation
        let n = items.len();
        if n < 2 {
            return;
        }
        let mut i = n - 1;
        while i > 0 && items[i - 1] >= items[i] {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        let mut j = n - 1;
        while items[j] <= items[i - 1] {
            j -= 1;
        }
        items.swap(i - 1, j);
        items[i..].reverse();
    }
}
