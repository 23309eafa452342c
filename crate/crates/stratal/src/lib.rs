//! Combinatorics of stable graphs and systole-based Morse numerics for
//! moduli of curves.
//!
//! The crate has two halves that meet in the middle:
//!
//! * **Boundary combinatorics** — [`graph::StableGraph`] models the dual graph
//!   of a stable nodal curve (per-vertex genera, unordered edges including
//!   loops, labeled marking legs). [`strata`] enumerates all isomorphism
//!   classes for a given `(g, n)` and assembles the contraction poset of
//!   boundary strata. [`attach`] implements the attaching maps that glue a
//!   three-marked sphere onto a graph, their inverses (`peel`), and Whitehead
//!   exchange moves. [`filtration`] filters strata by additive index lower
//!   bounds and produces generation witnesses (attach sequences from a small
//!   base set).
//! * **Numerics on the moduli of once-punctured tori** — [`torus`] works in
//!   trace coordinates `(x, y, z)` with `x^2 + y^2 + z^2 = xyz`: enumeration
//!   of simple closed geodesics via the trace recursion, the systole `sys`,
//!   its smoothing `syst` with a rigorous truncation tail bound, eutacticity
//!   of shortest-curve differentials, and critical-point search with Morse
//!   index.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example enumerate_strata    # counts + poset for small (g, n)
//! cargo run --example attach_peel         # attaching maps and their inverses
//! cargo run --example whitehead_move      # exchange moves on a 4-marked sphere
//! cargo run --example markov_tree         # trace tree and geodesic enumeration
//! cargo run --example smoothed_systole    # syst vs sys across temperatures (CSV)
//! cargo run --example eutactic_scan       # eutacticity verdicts at sample points
//! cargo run --example morse_critical      # critical point search + Morse index
//! cargo run --example filtration_witness  # index filtration and witnesses
//! ```
//!
//! The same functionality is scriptable through the thin `stratal` binary
//! (`cargo run -- enumerate --genus 1 --legs 2 --format count`); see the
//! README for the subcommand reference.

pub mod attach;
pub mod cli;
pub mod filtration;
pub mod graph;
pub mod strata;
pub mod torus;
