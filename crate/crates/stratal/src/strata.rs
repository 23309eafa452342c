//! Enumeration of boundary strata for a moduli space `(g, n)` and the
//! contraction poset relating them.
//!
//! Strata are indexed by isomorphism classes of stable graphs of total genus
//! `g` with `n` legs. Enumeration proceeds by edge count: distribute the
//! available first Betti number and vertex genera, enumerate connected edge
//! multisets, then distribute the labeled legs subject to per-vertex
//! stability, deduplicating via canonical codes. The graphs returned are
//! canonical representatives sorted by code, so output is deterministic
//! independent of thread scheduling.

use crate::graph::{CanonicalCode, StableGraph};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum StrataError {
    #[error("moduli space ({g},{n}) is empty: 2g-2+n must be positive")]
    UnstablePair { g: u32, n: usize },
    #[error("open stratum dimension {dim} exceeds cap {cap}")]
    DimensionCapExceeded { dim: i64, cap: i64 },
}

/// Default complex-dimension cap for enumeration requests.
pub const DEFAULT_DIM_CAP: i64 = 6;

/// Number of worker threads: `STRATAL_THREADS` if set and positive, else the
/// rayon default.
fn thread_count() -> Option<usize> {
    std::env::var("STRATAL_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&k| k > 0)
}

fn run_pooled<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match thread_count() {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// All isomorphism classes of stable graphs with total genus `g` and `n`
/// legs, sorted by canonical code. `max_dim` caps the complex dimension
/// `3g - 3 + n` of the request (`None` = [`DEFAULT_DIM_CAP`]).
pub fn enumerate_stable_graphs(
    g: u32,
    n: usize,
    max_dim: Option<i64>,
) -> Result<Vec<StableGraph>, StrataError> {
    let dim = 3 * g as i64 - 3 + n as i64;
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(StrataError::UnstablePair { g, n });
    }
    let cap = max_dim.unwrap_or(DEFAULT_DIM_CAP);
    if dim > cap {
        return Err(StrataError::DimensionCapExceeded { dim, cap });
    }

    // Branches: (edge count, vertex count). Connectivity bounds V <= E+1;
    // the Betti number E-V+1 cannot exceed g; stability bounds V <= 2g-2+n.
    let mut branches = Vec::new();
    for e_count in 0..=dim.max(0) as usize {
        let v_min = (e_count + 1).saturating_sub(g as usize).max(1);
        let v_max = (e_count + 1).min((2 * g as i64 - 2 + n as i64) as usize);
        for v_count in v_min..=v_max {
            branches.push((e_count, v_count));
        }
    }

    let maps: Vec<BTreeMap<CanonicalCode, StableGraph>> = run_pooled(|| {
        branches
            .par_iter()
            .map(|&(e, v)| enumerate_branch(g, n, e, v))
            .collect()
    });
    let mut seen = BTreeMap::new();
    for m in maps {
        seen.extend(m);
    }
    Ok(seen.into_values().collect())
}

/// All graphs with exactly `e_count` edges on `v_count` vertices.
fn enumerate_branch(
    g: u32,
    n: usize,
    e_count: usize,
    v_count: usize,
) -> BTreeMap<CanonicalCode, StableGraph> {
    let mut seen = BTreeMap::new();
    let b1 = e_count + 1 - v_count;
    let genus_left = g as usize - b1;

    // Unordered vertex pairs (loops included), indexed lexicographically.
    let pairs: Vec<(usize, usize)> = (0..v_count)
        .flat_map(|a| (a..v_count).map(move |b| (a, b)))
        .collect();

    // Non-decreasing sequences of pair indices = edge multisets.
    let mut multiset = vec![0usize; e_count];
    enumerate_multisets(&mut multiset, 0, 0, pairs.len(), &mut |ms| {
        let edges: Vec<(usize, usize)> = ms.iter().map(|&i| pairs[i]).collect();
        if !edges_connect(v_count, &edges) {
            return;
        }
        let mut endpoints = vec![0usize; v_count];
        for &(a, b) in &edges {
            endpoints[a] += 1;
            endpoints[b] += 1;
        }
        for genus in compositions(genus_left, v_count) {
            // Per-vertex leg deficit to reach stability.
            let deficit: Vec<usize> = (0..v_count)
                .map(|v| (3i64 - 2 * genus[v] as i64 - endpoints[v] as i64).max(0) as usize)
                .collect();
            if deficit.iter().sum::<usize>() > n {
                continue;
            }
            let mut legs = vec![0usize; n];
            assign_legs(&mut legs, 0, &deficit.clone(), v_count, n, &mut |ls| {
                let graph =
                    StableGraph::from_parts_unchecked(genus.clone(), edges.clone(), ls.to_vec());
                let canon = graph.canonical_form();
                seen.entry(canon.canonical_code()).or_insert(canon);
            });
        }
    });
    seen
}

fn enumerate_multisets(
    buf: &mut Vec<usize>,
    pos: usize,
    min: usize,
    npairs: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos == buf.len() {
        f(buf);
        return;
    }
    for i in min..npairs {
        buf[pos] = i;
        enumerate_multisets(buf, pos + 1, i, npairs, f);
    }
}

/// Assign each leg label to a vertex; prune when the remaining labels cannot
/// cover the remaining stability deficits.
fn assign_legs(
    legs: &mut Vec<usize>,
    pos: usize,
    deficit: &[usize],
    v_count: usize,
    n: usize,
    f: &mut impl FnMut(&[usize]),
) {
    let remaining_deficit: usize = deficit.iter().sum();
    if remaining_deficit > n - pos {
        return;
    }
    if pos == n {
        f(legs);
        return;
    }
    for v in 0..v_count {
        legs[pos] = v;
        let mut d = deficit.to_vec();
        if d[v] > 0 {
            d[v] -= 1;
        }
        assign_legs(legs, pos + 1, &d, v_count, n, f);
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut buf = vec![0u32; parts];
    fn rec(buf: &mut Vec<u32>, pos: usize, left: usize, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == buf.len() {
            buf[pos] = left as u32;
            out.push(buf.clone());
            return;
        }
        for take in 0..=left {
            buf[pos] = take as u32;
            rec(buf, pos + 1, left - take, out);
        }
    }
    if parts == 0 {
        return out;
    }
    rec(&mut buf, 0, total, &mut out);
    out
}

fn edges_connect(v_count: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..v_count).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut components = v_count;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

/// The poset of boundary strata: nodes sorted by canonical code, covers
/// `(i, j)` meaning node `j` arises from node `i` by contracting one edge.
/// In the closure order, deeper strata (more edges) lie below.
#[derive(Debug, Clone, Serialize)]
pub struct StrataPoset {
    pub g: u32,
    pub n: usize,
    pub nodes: Vec<StableGraph>,
    pub covers: BTreeSet<(usize, usize)>,
}

pub fn build_poset(g: u32, n: usize, max_dim: Option<i64>) -> Result<StrataPoset, StrataError> {
    let nodes = enumerate_stable_graphs(g, n, max_dim)?;
    let index: BTreeMap<CanonicalCode, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, g)| (g.canonical_code(), i))
        .collect();
    let mut covers = BTreeSet::new();
    for (i, node) in nodes.iter().enumerate() {
        for e in 0..node.num_edges() {
            let contracted = node.contract_edge(e);
            let j = *index
                .get(&contracted.canonical_code())
                .expect("contraction stays within the stratum set");
            covers.insert((i, j));
        }
    }
    Ok(StrataPoset {
        g,
        n,
        nodes,
        covers,
    })
}

impl StrataPoset {
    pub fn node_index(&self, g: &StableGraph) -> Option<usize> {
        let code = g.canonical_code();
        self.nodes.iter().position(|n| n.canonical_code() == code)
    }

    /// Indices of all strata contained in the closure of the strata in
    /// `selected`: every graph admitting an iterated contraction onto a
    /// selected one (including the selected strata themselves).
    pub fn closure(&self, selected: &BTreeSet<usize>) -> BTreeSet<usize> {
        // Reverse-reachability over covers: (i, j) means i contracts to j,
        // so i lies in the closure of j.
        let mut closed: BTreeSet<usize> = selected.clone();
        let mut frontier: Vec<usize> = selected.iter().copied().collect();
        while let Some(j) = frontier.pop() {
            for &(a, b) in &self.covers {
                if b == j && closed.insert(a) {
                    frontier.push(a);
                }
            }
        }
        closed
    }
}
