//! Glue three-marked spheres onto a graph and undo the gluings again.
//!
//! An attachment of arity `i` consumes `i` markings of the input graph and
//! the complementary `3 - i` markings of a new genus-zero vertex, so the type
//! changes as `(g, n) -> (g + i - 1, n + 3 - 2i)`.  `peel` lists every way a
//! graph arises from such a gluing; replaying a peeled entry restores the
//! original graph up to isomorphism.

use stratal::attach::{attach, peel, AttachSpec, Perm};
use stratal::graph::StableGraph;

fn sphere_with_marks(n: usize) -> StableGraph {
    StableGraph::new(vec![0], vec![], vec![0; n]).expect("a sphere with >= 3 marks is stable")
}

fn main() {
    let base = sphere_with_marks(4);
    println!(
        "base: genus {}, {} legs, code {}",
        base.total_genus(),
        base.num_legs(),
        base.canonical_code().hex()
    );

    for arity in 1..=3usize {
        let spec = AttachSpec::plain(arity, Perm::identity(base.num_legs()));
        let result = attach(&base, &spec).expect("arity within range");
        println!(
            "arity {arity}: (g, n) = ({}, {}) -> ({}, {}), {} edges",
            base.total_genus(),
            base.num_legs(),
            result.total_genus(),
            result.num_legs(),
            result.num_edges(),
        );
    }

    // A non-identity marking permutation routes different legs into the glue.
    let sigma = Perm::from_one_based(&[2, 1, 3, 4]).expect("permutation");
    let spec = AttachSpec {
        arity: 2,
        sigma,
        relabel: None,
    };
    let glued = attach(&base, &spec).expect("valid spec");
    println!(
        "\nglued with sigma = (1 2): code {}",
        glued.canonical_code().hex()
    );

    let entries = peel(&glued);
    println!(
        "peel found {} ways to detach a sphere vertex:",
        entries.len()
    );
    for entry in &entries {
        let replayed = attach(&entry.base, &entry.spec).expect("replay");
        let round_trip = replayed.canonical_code() == glued.canonical_code();
        println!(
            "  detach vertex {}: base (g, n) = ({}, {}), arity {}, replay ok: {round_trip}",
            entry.vertex,
            entry.base.total_genus(),
            entry.base.num_legs(),
            entry.spec.arity,
        );
    }
}
