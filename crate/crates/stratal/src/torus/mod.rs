//! Numerics on the moduli space of once-punctured hyperbolic tori, in trace
//! coordinates.
//!
//! A complete structure is recorded by the traces `(x, y, z)` of a basis
//! pair of simple closed curves and their product curve. The traces satisfy
//! `x^2 + y^2 + z^2 = xyz` with all three coordinates `> 2`; a curve of
//! trace `t` has hyperbolic length `2 * arccosh(t / 2)`. Every other simple
//! closed curve corresponds to a slope `p/q` (or infinity) and its trace is
//! produced by the exchange recursion `t_new = t_a * t_b - t_opposite` on
//! the slope triangulation; see [`markov`].
//!
//! On top of the enumeration sit the systole [`sys`], its temperature
//! smoothing [`syst::syst`] with a rigorous truncation bound, shortest-curve
//! differentials and eutacticity [`eutactic`], and critical point search
//! [`critical`].

pub mod critical;
pub mod eutactic;
pub mod markov;
pub mod syst;

use serde::Serialize;

pub use critical::{
    find_critical, maximize_sys, CriticalOptions, CriticalPointReport, MaxSysOptions,
};
pub use eutactic::{
    classify_differentials, eutactic_check, DifferentialClass, EutacticOptions, EutacticReport,
};
pub use markov::{
    deep_frontier_min, descend_to_minimal, exact_tree_check, trace_of_slope, ExactTreeReport,
    MinimalTriple, Slope,
};
pub use syst::{syst, syst_gradient, syst_hessian, FdConfig, SystValue};

/// Tolerances and guard rails for the trace-coordinate numerics.
pub mod tol {
    /// Relative tolerance on the trace relation `x^2+y^2+z^2 = xyz`.
    pub const RELATION_REL: f64 = 1e-9;
    /// Ties in the length spectrum closer than this (relative) are merged.
    pub const LENGTH_TIE_REL: f64 = 1e-12;
    /// Iteration cap for the descent to the minimal trace triple.
    pub const DESCENT_MAX_STEPS: usize = 100_000;
    /// Node cap for the pruned enumeration (defends against bad inputs).
    pub const ENUMERATION_NODE_CAP: usize = 50_000_000;
}

#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum TorusError {
    #[error("no real trace solves the relation for x={x}, y={y} (negative discriminant)")]
    NoRealSolution { x: f64, y: f64 },
    #[error("trace coordinate {value} is not > 2: structure pinched or invalid")]
    PinchedStructure { value: f64 },
    #[error("trace relation violated: residual {residual} exceeds tolerance")]
    RelationViolated { residual: f64 },
    #[error("temperature {t} outside (0, 1)")]
    TemperatureOutOfRange { t: f64 },
    #[error(
        "tail bound diverges at temperature {temperature}: frontier trace {mu} gives growth ratio >= 1"
    )]
    TailBoundDiverges { temperature: f64, mu: f64 },
    #[error(
        "difference quotient unstable: halving changed the estimate by {discrepancy} (tol {tol})"
    )]
    StepTooLarge { discrepancy: f64, tol: f64 },
    #[error("iteration did not converge within {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("iterate left the chart near x={x}, y={y}")]
    LeftChart { x: f64, y: f64 },
    #[error("numerical breakdown: {context}")]
    NumericalBreakdown { context: String },
}

/// Which root of the quadratic `z^2 - xy z + (x^2 + y^2) = 0` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// A point of the moduli space in trace coordinates: validated to satisfy
/// the relation within [`tol::RELATION_REL`] with all coordinates `> 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrickePoint {
    x: f64,
    y: f64,
    z: f64,
}

impl FrickePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, TorusError> {
        for value in [x, y, z] {
            if !value.is_finite() || value <= 2.0 {
                return Err(TorusError::PinchedStructure { value });
            }
        }
        let residual = (x * x + y * y + z * z - x * y * z).abs();
        let scale = (x * y * z).abs().max(1.0);
        if residual > tol::RELATION_REL * scale {
            return Err(TorusError::RelationViolated {
                residual: residual / scale,
            });
        }
        Ok(FrickePoint { x, y, z })
    }

    /// Solve for the third trace from `(x, y)` on the requested branch.
    pub fn solve(x: f64, y: f64, branch: Branch) -> Result<Self, TorusError> {
        for value in [x, y] {
            if !value.is_finite() || value <= 2.0 {
                return Err(TorusError::PinchedStructure { value });
            }
        }
        let disc = x * x * y * y - 4.0 * x * x - 4.0 * y * y;
        if disc < 0.0 {
            return Err(TorusError::NoRealSolution { x, y });
        }
        let z = match branch {
            Branch::Plus => (x * y + disc.sqrt()) / 2.0,
            Branch::Minus => (x * y - disc.sqrt()) / 2.0,
        };
        if z <= 2.0 {
            return Err(TorusError::PinchedStructure { value: z });
        }
        Ok(FrickePoint { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Which branch the current `z` lies on relative to the double root.
    pub fn branch(&self) -> Branch {
        if self.z >= self.x * self.y / 2.0 {
            Branch::Plus
        } else {
            Branch::Minus
        }
    }

    /// Move in the `(x, y)` chart; `z` follows its branch continuously.
    pub fn move_chart(&self, dx: f64, dy: f64) -> Result<Self, TorusError> {
        FrickePoint::solve(self.x + dx, self.y + dy, self.branch())
    }

    /// Coordinates sorted ascending: representative of the point modulo
    /// coordinate permutations, used for comparisons between runs.
    pub fn canonical_triple(&self) -> [f64; 3] {
        let mut t = [self.x, self.y, self.z];
        t.sort_by(f64::total_cmp);
        t
    }
}

/// Geodesic length of a curve with trace `t > 2`.
pub fn length_of_trace(t: f64) -> f64 {
    2.0 * (t / 2.0).acosh()
}

/// Trace corresponding to a geodesic length.
pub fn trace_of_length(l: f64) -> f64 {
    2.0 * (l / 2.0).cosh()
}

/// One simple closed geodesic: its slope, trace, and length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SccRecord {
    pub slope: Slope,
    pub trace: f64,
    pub length: f64,
}

/// All simple closed geodesics of length at most `l_cut`, sorted by
/// `(length, slope)`. Complete: the trace recursion is explored from the
/// minimal triple and branches are cut only where monotone growth
/// guarantees every deeper curve is longer than the cutoff.
pub fn enumerate_scc(p: &FrickePoint, l_cut: f64) -> Result<Vec<SccRecord>, TorusError> {
    let cutoff = trace_of_length(l_cut);
    let (mut records, _) = markov::enumerate_with_tail(p, cutoff)?;
    records.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.slope.cmp(&b.slope))
    });
    Ok(records)
}

/// The systole and its minimizing curves.
#[derive(Debug, Clone, Serialize)]
pub struct SysResult {
    pub length: f64,
    pub trace: f64,
    pub minimizers: Vec<SccRecord>,
}

/// Shortest geodesic length. The minimizers always lie in the minimal trace
/// triple: beyond it the recursion grows strictly.
pub fn sys(p: &FrickePoint) -> Result<SysResult, TorusError> {
    let triple = markov::descend_to_minimal(p)?;
    let min_trace = triple.traces.iter().copied().fold(f64::INFINITY, f64::min);
    let tie = min_trace * (1.0 + tol::LENGTH_TIE_REL);
    let mut minimizers: Vec<SccRecord> = triple
        .slopes
        .iter()
        .zip(triple.traces.iter())
        .filter(|&(_, &t)| t <= tie)
        .map(|(s, &t)| SccRecord {
            slope: *s,
            trace: t,
            length: length_of_trace(t),
        })
        .collect();
    minimizers.sort_by_key(|r| r.slope);
    Ok(SysResult {
        length: length_of_trace(min_trace),
        trace: min_trace,
        minimizers,
    })
}
