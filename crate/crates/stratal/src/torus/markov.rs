//! The trace recursion on the slope triangulation.
//!
//! Slopes of simple closed curves sit at the vertices of the Farey
//! triangulation; two triangles sharing an edge `{a, b}` have third vertices
//! `c` and `c'` with `t_c + t_c' = t_a * t_b`. Flipping across the edge
//! replaces one third trace by the other. Descending from the base triple
//! `(x, y, z)` by always flipping the maximum strictly downward reaches the
//! unique minimal triple; from there every outward flip is non-decreasing,
//! which is what makes cut-off enumeration complete and tail sums boundable.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

use super::{length_of_trace, tol, FrickePoint, SccRecord, TorusError};

/// A slope: a primitive pair `p/q` with `q >= 0`, plus the point at
/// infinity `1/0`. Total order: infinity first, then by rational value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Option<Self> {
        if p == 0 && q == 0 {
            return None;
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Some(Slope { p, q })
    }

    pub fn infinity() -> Self {
        Slope { p: 1, q: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            // p1/q1 < p2/q2 iff p1 q2 < p2 q1 (q > 0 on both sides).
            (false, false) => {
                (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
            }
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_slope(&text)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid slope `{text}`")))
    }
}

/// Parse "p/q", a bare integer "p", or "inf".
pub fn parse_slope(text: &str) -> Option<Slope> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("inf") || text.eq_ignore_ascii_case("infinity") {
        return Some(Slope::infinity());
    }
    match text.split_once('/') {
        Some((p, q)) => Slope::new(p.trim().parse().ok()?, q.trim().parse().ok()?),
        None => Slope::new(text.parse().ok()?, 1),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Integer slope vector, sign-normalized like [`Slope`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Vec2(i64, i64);

impl Vec2 {
    fn normalized(p: i64, q: i64) -> Self {
        if q < 0 || (q == 0 && p < 0) {
            Vec2(-p, -q)
        } else {
            Vec2(p, q)
        }
    }

    fn slope(self) -> Slope {
        Slope::new(self.0, self.1).expect("slope vector is nonzero")
    }
}

/// The two triangles across the edge `{a, b}` have third vertices
/// `a + b` and `a - b` up to sign; return the one that is not `old`.
fn other_third(a: Vec2, b: Vec2, old: Vec2) -> Vec2 {
    let sum = Vec2::normalized(a.0 + b.0, a.1 + b.1);
    let diff = Vec2::normalized(a.0 - b.0, a.1 - b.1);
    debug_assert!(
        sum == old || diff == old,
        "flip candidates must contain the old vertex"
    );
    if sum == old {
        diff
    } else {
        sum
    }
}

/// The minimal trace triple reached by monotone descent, with its slopes.
#[derive(Debug, Clone, Serialize)]
pub struct MinimalTriple {
    pub slopes: [Slope; 3],
    pub traces: [f64; 3],
    pub flips: usize,
}

pub(super) struct Triple {
    vecs: [Vec2; 3],
    traces: [f64; 3],
}

/// Flip the maximum trace while it strictly decreases.
pub(super) fn descend(p: &FrickePoint) -> Result<(Triple, usize), TorusError> {
    let mut vecs = [Vec2(0, 1), Vec2(1, 0), Vec2(1, 1)];
    let mut traces = [p.x(), p.y(), p.z()];
    let mut flips = 0usize;
    loop {
        if flips > tol::DESCENT_MAX_STEPS {
            return Err(TorusError::NoConvergence { iterations: flips });
        }
        let k = (0..3)
            .max_by(|&i, &j| traces[i].total_cmp(&traces[j]))
            .unwrap();
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let flipped = traces[i] * traces[j] - traces[k];
        if flipped >= traces[k] {
            return Ok((Triple { vecs, traces }, flips));
        }
        if flipped <= 2.0 {
            return Err(TorusError::NumericalBreakdown {
                context: format!("descent produced trace {flipped} <= 2"),
            });
        }
        vecs[k] = other_third(vecs[i], vecs[j], vecs[k]);
        traces[k] = flipped;
        flips += 1;
    }
}

/// Descend to the minimal triple and report slopes, traces, flip count.
pub fn descend_to_minimal(p: &FrickePoint) -> Result<MinimalTriple, TorusError> {
    let (triple, flips) = descend(p)?;
    let mut pairs: Vec<(Slope, f64)> = triple
        .vecs
        .iter()
        .zip(triple.traces.iter())
        .map(|(v, &t)| (v.slope(), t))
        .collect();
    pairs.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(MinimalTriple {
        slopes: [pairs[0].0, pairs[1].0, pairs[2].0],
        traces: [pairs[0].1, pairs[1].1, pairs[2].1],
        flips,
    })
}

/// A branch cut during enumeration: the whole subtree below a directed
/// flip of frontier trace `t0`, whose parent edge traces are at least `mu`.
/// Along any depth-`d` path below, traces grow by a factor `>= mu - 1` per
/// level, so the subtree's length spectrum is summable when `mu > 3`.
/// `mu = infinity` encodes a single excluded curve with no subtree.
#[derive(Debug, Clone, Copy)]
pub struct PrunedEdge {
    pub t0: f64,
    pub mu: f64,
}

struct Frontier {
    a: Vec2,
    ta: f64,
    b: Vec2,
    tb: f64,
    opp: Vec2,
    t_opp: f64,
}

/// Enumerate every slope of trace at most `cutoff`, returning the records
/// together with the cut branches needed for rigorous tail bounds.
pub(super) fn enumerate_with_tail(
    p: &FrickePoint,
    cutoff: f64,
) -> Result<(Vec<SccRecord>, Vec<PrunedEdge>), TorusError> {
    let (triple, _) = descend(p)?;
    let mut records = Vec::new();
    let mut pruned = Vec::new();
    for k in 0..3 {
        let t = triple.traces[k];
        if t <= cutoff {
            records.push(SccRecord {
                slope: triple.vecs[k].slope(),
                trace: t,
                length: length_of_trace(t),
            });
        } else {
            pruned.push(PrunedEdge {
                t0: t,
                mu: f64::INFINITY,
            });
        }
    }

    let mut stack: Vec<Frontier> = Vec::new();
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        stack.push(Frontier {
            a: triple.vecs[i],
            ta: triple.traces[i],
            b: triple.vecs[j],
            tb: triple.traces[j],
            opp: triple.vecs[k],
            t_opp: triple.traces[k],
        });
    }

    let mut visited = 0usize;
    while let Some(f) = stack.pop() {
        visited += 1;
        if visited > tol::ENUMERATION_NODE_CAP {
            return Err(TorusError::NumericalBreakdown {
                context: format!("enumeration exceeded {} nodes", tol::ENUMERATION_NODE_CAP),
            });
        }
        let t_new = f.ta * f.tb - f.t_opp;
        if t_new <= 2.0 {
            return Err(TorusError::NumericalBreakdown {
                context: format!("recursion produced trace {t_new} <= 2"),
            });
        }
        debug_assert!(
            t_new >= f.ta.max(f.tb) * (1.0 - 1e-9),
            "outward flips from the minimal triple are non-decreasing"
        );
        if t_new > cutoff {
            pruned.push(PrunedEdge {
                t0: t_new,
                mu: f.ta.min(f.tb),
            });
            continue;
        }
        let v_new = other_third(f.a, f.b, f.opp);
        records.push(SccRecord {
            slope: v_new.slope(),
            trace: t_new,
            length: length_of_trace(t_new),
        });
        stack.push(Frontier {
            a: f.a,
            ta: f.ta,
            b: v_new,
            tb: t_new,
            opp: f.b,
            t_opp: f.tb,
        });
        stack.push(Frontier {
            a: f.b,
            ta: f.tb,
            b: v_new,
            tb: t_new,
            opp: f.a,
            t_opp: f.ta,
        });
    }
    Ok((records, pruned))
}

/// Soundness probe for the pruning rule: rerun the enumeration walk, but
/// instead of cutting at each pruned frontier, explore `levels` further
/// generations below it and return the smallest trace seen at or beyond any
/// frontier. Pruning loses nothing exactly when that minimum exceeds the
/// trace cutoff `2 cosh(l_cut / 2)` — which the outward-monotonicity of the
/// recursion guarantees, and this function checks empirically.
pub fn deep_frontier_min(p: &FrickePoint, l_cut: f64, levels: usize) -> Result<f64, TorusError> {
    let cutoff = crate::torus::trace_of_length(l_cut);
    let (triple, _) = descend(p)?;
    let mut min_beyond = f64::INFINITY;
    for k in 0..3 {
        if triple.traces[k] > cutoff {
            min_beyond = min_beyond.min(triple.traces[k]);
        }
    }

    // `beyond = Some(left)` marks a node inside a pruned subtree with `left`
    // further generations still to explore below it.
    let mut stack: Vec<(Frontier, Option<usize>)> = Vec::new();
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        stack.push((
            Frontier {
                a: triple.vecs[i],
                ta: triple.traces[i],
                b: triple.vecs[j],
                tb: triple.traces[j],
                opp: triple.vecs[k],
                t_opp: triple.traces[k],
            },
            None,
        ));
    }
    let mut visited = 0usize;
    while let Some((f, beyond)) = stack.pop() {
        visited += 1;
        if visited > tol::ENUMERATION_NODE_CAP {
            return Err(TorusError::NumericalBreakdown {
                context: format!(
                    "frontier probe exceeded {} nodes",
                    tol::ENUMERATION_NODE_CAP
                ),
            });
        }
        let t_new = f.ta * f.tb - f.t_opp;
        if t_new <= 2.0 {
            return Err(TorusError::NumericalBreakdown {
                context: format!("recursion produced trace {t_new} <= 2"),
            });
        }
        let next = match beyond {
            Some(left) => {
                min_beyond = min_beyond.min(t_new);
                if left == 0 {
                    continue;
                }
                Some(left - 1)
            }
            None if t_new > cutoff => {
                min_beyond = min_beyond.min(t_new);
                if levels == 0 {
                    continue;
                }
                Some(levels - 1)
            }
            None => None,
        };
        let v_new = other_third(f.a, f.b, f.opp);
        stack.push((
            Frontier {
                a: f.a,
                ta: f.ta,
                b: v_new,
                tb: t_new,
                opp: f.b,
                t_opp: f.tb,
            },
            next,
        ));
        stack.push((
            Frontier {
                a: f.b,
                ta: f.tb,
                b: v_new,
                tb: t_new,
                opp: f.a,
                t_opp: f.ta,
            },
            next,
        ));
    }
    Ok(min_beyond)
}

/// Walk the slope triangulation from the base triple straight to `slope`,
/// carrying traces by the exchange recursion. Generic over the value type
/// so dual numbers can ride along for derivative checks.
pub fn trace_walk<T>(x: T, y: T, z: T, xy_minus_z: T, slope: Slope) -> T
where
    T: Copy + std::ops::Mul<Output = T> + std::ops::Sub<Output = T>,
{
    if slope.is_infinity() {
        return y;
    }
    if slope == Slope::new(0, 1).unwrap() {
        return x;
    }
    let target = Vec2(slope.p, slope.q);
    // Pick the base triangle on the target's side of the (0/1, inf) edge.
    let (mut a, mut ta, mut b, mut tb, mut c, mut tc) = if slope.p >= 0 {
        (Vec2(0, 1), x, Vec2(1, 0), y, Vec2(1, 1), z)
    } else {
        (Vec2(0, 1), x, Vec2(-1, 0), y, Vec2(-1, 1), xy_minus_z)
    };
    loop {
        let det = a.0 * b.1 - a.1 * b.0;
        debug_assert_eq!(det.abs(), 1);
        let alpha = (target.0 * b.1 - target.1 * b.0) / det;
        let beta = (a.0 * target.1 - a.1 * target.0) / det;
        debug_assert!(alpha >= 1 && beta >= 1, "target lies inside the cone");
        if alpha == beta {
            return tc;
        }
        if alpha > beta {
            // Target lies between a and the mediant: edge (a, c), old third b.
            let t_next = ta * tc - tb;
            (b, tb) = (c, tc);
            (c, tc) = (Vec2(a.0 + b.0, a.1 + b.1), t_next);
        } else {
            // Target lies between the mediant and b: edge (c, b), old third a.
            let t_next = tb * tc - ta;
            (a, ta) = (c, tc);
            (c, tc) = (Vec2(a.0 + b.0, a.1 + b.1), t_next);
        }
    }
}

/// Trace of the curve of a given slope at a point.
pub fn trace_of_slope(p: &FrickePoint, slope: Slope) -> f64 {
    trace_walk(p.x(), p.y(), p.z(), p.x() * p.y() - p.z(), slope)
}

/// Result of replaying the recursion in exact integers.
#[derive(Debug, Clone, Serialize)]
pub struct ExactTreeReport {
    pub depth: usize,
    pub triangles: u64,
    pub relation_holds: bool,
    pub max_digits: usize,
}

/// Replay the recursion tree from an integer triple in exact arithmetic,
/// checking `a^2 + b^2 + c^2 = abc` at every triangle.
pub fn exact_tree_check(x: i64, y: i64, z: i64, depth: usize) -> ExactTreeReport {
    struct Node {
        a: BigInt,
        b: BigInt,
        opp: BigInt,
        depth: usize,
    }
    let relation = |a: &BigInt, b: &BigInt, c: &BigInt| a * a + b * b + c * c == a * b * c;

    let (x, y, z) = (BigInt::from(x), BigInt::from(y), BigInt::from(z));
    let mut triangles = 1u64;
    let mut relation_holds = relation(&x, &y, &z);
    let mut max_digits = [&x, &y, &z]
        .into_iter()
        .map(|v| v.to_string().trim_start_matches('-').len())
        .max()
        .unwrap();

    let mut stack = vec![
        Node {
            a: x.clone(),
            b: y.clone(),
            opp: z.clone(),
            depth: 0,
        },
        Node {
            a: y.clone(),
            b: z.clone(),
            opp: x.clone(),
            depth: 0,
        },
        Node {
            a: z.clone(),
            b: x.clone(),
            opp: y.clone(),
            depth: 0,
        },
    ];
    while let Some(node) = stack.pop() {
        if node.depth >= depth {
            continue;
        }
        let fresh = &node.a * &node.b - &node.opp;
        triangles += 1;
        relation_holds &= relation(&node.a, &node.b, &fresh);
        max_digits = max_digits.max(fresh.to_string().trim_start_matches('-').len());
        stack.push(Node {
            a: node.a.clone(),
            b: fresh.clone(),
            opp: node.b.clone(),
            depth: node.depth + 1,
        });
        stack.push(Node {
            a: node.b,
            b: fresh,
            opp: node.a,
            depth: node.depth + 1,
        });
    }
    ExactTreeReport {
        depth,
        triangles,
        relation_holds,
        max_digits,
    }
}
