//! Shared helpers for the integration tests.
//!
//! `naive` is a deliberately simple, independently written brute-force
//! enumerator of stable graphs, used as a counting oracle against the
//! library's enumeration.  It shares no code with the library: its own
//! representation, its own stability test, and isomorphism by trying all
//! vertex permutations.  `dot` is a minimal reader for the DOT text the
//! library emits, good enough to check structure without graphviz.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub mod naive {
    use super::*;

    /// A graph in fully explicit form: per-vertex genera, edges as ordered
    /// pairs `a <= b` (loops as `(v, v)`), and a vertex per marking.
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    pub struct NaiveGraph {
        pub genus: Vec<u32>,
        pub edges: Vec<(usize, usize)>,
        pub legs: Vec<usize>,
    }

    fn connected(v_count: usize, edges: &[(usize, usize)]) -> bool {
        let mut seen = vec![false; v_count];
        let mut queue = vec![0usize];
        seen[0] = true;
        while let Some(u) = queue.pop() {
            for &(a, b) in edges {
                let other = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    queue.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn stable(genus: &[u32], edges: &[(usize, usize)], legs: &[usize]) -> bool {
        let v_count = genus.len();
        let mut valence = vec![0i64; v_count];
        for &(a, b) in edges {
            valence[a] += 1;
            valence[b] += 1; // a loop hits the same vertex twice
        }
        for &v in legs {
            valence[v] += 1;
        }
        (0..v_count).all(|v| 2 * genus[v] as i64 - 2 + valence[v] > 0)
    }

    /// Lexicographically minimal relabeling over all vertex permutations.
    fn canonical(g: &NaiveGraph) -> NaiveGraph {
        let v_count = g.genus.len();
        let mut best: Option<NaiveGraph> = None;
        let mut perm: Vec<usize> = (0..v_count).collect();
        visit_permutations(&mut perm, 0, &mut |p: &[usize]| {
            let mut genus = vec![0u32; v_count];
            for (old, &new) in p.iter().enumerate() {
                genus[new] = g.genus[old];
            }
            let mut edges: Vec<(usize, usize)> = g
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (p[a], p[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            edges.sort_unstable();
            let legs: Vec<usize> = g.legs.iter().map(|&v| p[v]).collect();
            let candidate = NaiveGraph { genus, edges, legs };
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        });
        best.expect("at least the identity permutation")
    }

    fn visit_permutations(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            visit_permutations(items, k + 1, f);
            items.swap(k, i);
        }
    }

    /// All multisets of size `size` drawn from `0..pool`, as sorted index
    /// vectors.
    fn multisets(pool: usize, size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(size);
        fn step(
            pool: usize,
            size: usize,
            from: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if current.len() == size {
                out.push(current.clone());
                return;
            }
            for i in from..pool {
                current.push(i);
                step(pool, size, i, current, out);
                current.pop();
            }
        }
        step(pool, size, 0, &mut current, &mut out);
        out
    }

    /// All ways to write `total` as an ordered sum of `parts` non-negatives.
    fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(parts);
        fn step(total: u32, parts: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if current.len() == parts {
                if total == 0 {
                    out.push(current.clone());
                }
                return;
            }
            for v in 0..=total {
                current.push(v);
                step(total - v, parts, current, out);
                current.pop();
            }
        }
        step(total, parts, &mut current, &mut out);
        out
    }

    /// Every isomorphism class of stable graphs of type `(g, n)`, by brute
    /// force: bounded vertex count, all edge multisets, all leg maps, all
    /// genus splits; classes keyed by the minimal relabeling.
    pub fn classes(g: u32, n: usize) -> Vec<NaiveGraph> {
        let budget = 2 * g as i64 - 2 + n as i64;
        assert!(budget > 0, "({g}, {n}) is not a stable type");
        let max_v = budget as usize; // each vertex uses at least 1 of 2g-2+n
        let mut found: BTreeSet<NaiveGraph> = BTreeSet::new();
        for v_count in 1..=max_v {
            let pairs: Vec<(usize, usize)> = (0..v_count)
                .flat_map(|a| (a..v_count).map(move |b| (a, b)))
                .collect();
            // Connectivity forces at least v-1 edges; the first Betti number
            // e - v + 1 cannot exceed the genus budget.
            for e_count in (v_count - 1)..=(v_count - 1 + g as usize) {
                let betti = (e_count + 1 - v_count) as u32;
                if betti > g {
                    continue;
                }
                for edge_choice in multisets(pairs.len(), e_count) {
                    let edges: Vec<(usize, usize)> =
                        edge_choice.iter().map(|&i| pairs[i]).collect();
                    if !connected(v_count, &edges) {
                        continue;
                    }
                    for genus in compositions(g - betti, v_count) {
                        for leg_code in 0..v_count.pow(n as u32) {
                            let mut legs = Vec::with_capacity(n);
                            let mut code = leg_code;
                            for _ in 0..n {
                                legs.push(code % v_count);
                                code /= v_count;
                            }
                            if stable(&genus, &edges, &legs) {
                                found.insert(canonical(&NaiveGraph {
                                    genus: genus.clone(),
                                    edges: edges.clone(),
                                    legs,
                                }));
                            }
                        }
                    }
                }
            }
        }
        found.into_iter().collect()
    }

    pub fn count_classes(g: u32, n: usize) -> usize {
        classes(g, n).len()
    }
}

pub mod dot {
    /// Shape of one `graph "name" { ... }` block.
    #[derive(Debug, PartialEq, Eq)]
    pub struct DotBlock {
        pub name: String,
        pub vertices: usize,
        pub marks: usize,
        pub vertex_edges: usize,
        pub mark_edges: usize,
    }

    /// Parse concatenated undirected DOT blocks in the library's dialect:
    /// `vN [label="g=.."]` vertices, `mN [...]` marking stubs, `--` edges.
    pub fn parse_blocks(text: &str) -> Result<Vec<DotBlock>, String> {
        let mut blocks = Vec::new();
        let mut current: Option<DotBlock> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("graph ") {
                if current.is_some() {
                    return Err(format!("line {lineno}: nested graph block"));
                }
                let name = rest
                    .trim_end_matches('{')
                    .trim()
                    .trim_matches('"')
                    .to_string();
                current = Some(DotBlock {
                    name,
                    vertices: 0,
                    marks: 0,
                    vertex_edges: 0,
                    mark_edges: 0,
                });
            } else if line == "}" {
                blocks.push(
                    current
                        .take()
                        .ok_or(format!("line {lineno}: stray closer"))?,
                );
            } else {
                let block = current
                    .as_mut()
                    .ok_or(format!("line {lineno}: statement outside block"))?;
                let stmt = line.trim_end_matches(';');
                if let Some((lhs, _rhs)) = stmt.split_once("--") {
                    if lhs.trim().starts_with('m') {
                        block.mark_edges += 1;
                    } else {
                        block.vertex_edges += 1;
                    }
                } else if stmt.starts_with('v') {
                    block.vertices += 1;
                } else if stmt.starts_with('m') {
                    block.marks += 1;
                } else if !stmt.starts_with("rankdir") {
                    return Err(format!("line {lineno}: unrecognized statement: {stmt}"));
                }
            }
        }
        if current.is_some() {
            return Err("unterminated graph block".into());
        }
        Ok(blocks)
    }
}
