//! Exchange moves on the boundary graphs of a 4-marked sphere.
//!
//! A stable genus-0 graph with two vertices and markings {1,2|3,4} can have
//! its separating edge contracted and re-expanded with a different marking
//! partition.  The three balanced partitions correspond to the three boundary
//! points of the (0, 4) moduli space; exchange moves walk between them.

use stratal::attach::{whitehead, Repartition};
use stratal::graph::StableGraph;

fn two_vertex_cross(first_pair: [usize; 2]) -> StableGraph {
    // Vertex 0 carries the two legs named in `first_pair`; vertex 1 the rest.
    let legs: Vec<usize> = (0..4)
        .map(|mark| if first_pair.contains(&mark) { 0 } else { 1 })
        .collect();
    StableGraph::new(vec![0, 0], vec![(0, 1)], legs).expect("two three-valent vertices are stable")
}

fn main() {
    let start = two_vertex_cross([0, 1]);
    println!("start {{0,1 | 2,3}}: code {}", start.canonical_code().hex());

    // Re-expand the contracted 4-valent vertex with marks 0 and 2 in front.
    for kept in [[0usize, 1], [0, 2], [0, 3]] {
        let repartition = Repartition {
            genus_first: 0,
            // Slots of the contracted vertex: the four marks in label order.
            first_slots: kept.to_vec(),
        };
        let moved = whitehead(&start, 0, &repartition).expect("balanced repartition");
        let same = moved.graph.canonical_code() == start.canonical_code();
        println!(
            "keep marks {{{},{}}} in front: code {}, new edge {}, same class as start: {same}",
            kept[0],
            kept[1],
            moved.graph.canonical_code().hex(),
            moved.new_edge,
        );
    }
}
