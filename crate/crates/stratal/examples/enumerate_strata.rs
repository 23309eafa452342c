//! Enumerate boundary strata for small moduli spaces and inspect one poset.
//!
//! Prints the number of stable-graph isomorphism classes for a few `(g, n)`,
//! then assembles the contraction poset for genus 1 with one marking and
//! lists its cover relations (contraction of a single edge).

use stratal::strata::{build_poset, enumerate_stable_graphs};

fn main() {
    println!("stable graph classes per (g, n):");
    for (g, n) in [(0u32, 3usize), (0, 4), (0, 5), (1, 1), (1, 2), (2, 0)] {
        let strata = enumerate_stable_graphs(g, n, None).expect("stable range");
        println!("  ({g}, {n}): {}", strata.len());
    }

    let poset = build_poset(1, 1, None).expect("stable range");
    println!("\ncontraction poset for (1, 1):");
    for (i, graph) in poset.nodes.iter().enumerate() {
        let info = graph.stratum_info();
        println!(
            "  node {i}: {} vertices, {} edges, real dim {}, code {}",
            graph.num_vertices(),
            graph.num_edges(),
            info.dim_real,
            graph.canonical_code().hex(),
        );
    }
    for &(deeper, shallower) in &poset.covers {
        println!("  cover: contracting an edge of node {deeper} gives node {shallower}");
    }

    // The closure of a selection adds every stratum that degenerates into it.
    let open_stratum: std::collections::BTreeSet<usize> = poset
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, g)| g.num_edges() == 0)
        .map(|(i, _)| i)
        .collect();
    let closed = poset.closure(&open_stratum);
    println!(
        "\nclosure of the open stratum covers {} of {} nodes",
        closed.len(),
        poset.nodes.len()
    );
}
