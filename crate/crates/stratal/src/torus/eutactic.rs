//! Eutacticity of the shortest-curve configuration.
//!
//! A point is eutactic when the origin lies in the relative interior of
//! the convex hull of the chart differentials of the shortest geodesic
//! lengths — equivalently, some strictly positive convex combination of
//! the differentials vanishes. That is decided by the linear program
//! `max t` subject to `sum lambda_i = 1`, `sum lambda_i v_i = 0`,
//! `lambda_i >= t`: the point is eutactic iff the program is feasible
//! with optimum `t > 0`.

use serde::Serialize;

use super::syst::{central_diff_checked, FdConfig};
use super::{
    enumerate_scc, length_of_trace, sys, trace_of_slope, FrickePoint, SccRecord, TorusError,
};

/// Options for the eutacticity decision.
#[derive(Debug, Clone, Copy)]
pub struct EutacticOptions {
    /// Relative length tolerance for membership in the shortest set.
    pub eps_sys: f64,
    /// Differencing configuration for the length differentials.
    pub fd: FdConfig,
    /// `t` values above this count as strictly positive.
    pub lp_positive_tol: f64,
}

impl Default for EutacticOptions {
    fn default() -> Self {
        EutacticOptions {
            eps_sys: 1e-8,
            fd: FdConfig::default(),
            lp_positive_tol: 1e-9,
        }
    }
}

/// Outcome of the eutacticity decision at one point.
#[derive(Debug, Clone, Serialize)]
pub struct EutacticReport {
    pub point: [f64; 3],
    pub systole: f64,
    /// Curves within the shortest-set tolerance, sorted by slope.
    pub shortest: Vec<SccRecord>,
    /// Chart differentials of the lengths, same order as `shortest`.
    pub differentials: Vec<[f64; 2]>,
    pub is_eutactic: bool,
    /// Rank of the differential set: 0, 1, or 2.
    pub eutactic_rank: usize,
    /// Optimal `min lambda_i` over vanishing convex combinations, if any.
    pub lp_margin: Option<f64>,
    /// Weights of an optimal combination, aligned with `shortest`.
    pub lp_weights: Option<Vec<f64>>,
}

/// Chart differential of one curve's length by checked central differences.
pub fn length_differential(
    p: &FrickePoint,
    slope: super::Slope,
    fd: &FdConfig,
) -> Result<[f64; 2], TorusError> {
    let eval = |dx: f64, dy: f64| -> Result<f64, TorusError> {
        let q = p.move_chart(dx, dy)?;
        let t = trace_of_slope(&q, slope);
        if t <= 2.0 {
            return Err(TorusError::PinchedStructure { value: t });
        }
        Ok(length_of_trace(t))
    };
    let gx = central_diff_checked(|h| eval(h, 0.0), fd.h_grad, fd.grad_check_tol)?;
    let gy = central_diff_checked(|h| eval(0.0, h), fd.h_grad, fd.grad_check_tol)?;
    Ok([gx, gy])
}

/// Decide eutacticity at `p`.
pub fn eutactic_check(
    p: &FrickePoint,
    opts: &EutacticOptions,
) -> Result<EutacticReport, TorusError> {
    let s = sys(p)?;
    let band = s.length * (1.0 + opts.eps_sys);
    let mut shortest: Vec<SccRecord> = enumerate_scc(p, band)?
        .into_iter()
        .filter(|r| r.length <= band)
        .collect();
    shortest.sort_by_key(|r| r.slope);

    let mut differentials = Vec::with_capacity(shortest.len());
    for r in &shortest {
        differentials.push(length_differential(p, r.slope, &opts.fd)?);
    }

    let class = classify_differentials(&differentials, opts.lp_positive_tol);

    Ok(EutacticReport {
        point: [p.x(), p.y(), p.z()],
        systole: s.length,
        shortest,
        differentials,
        is_eutactic: class.is_eutactic,
        eutactic_rank: class.rank,
        lp_margin: class.lp_margin,
        lp_weights: class.lp_weights,
    })
}

/// Verdict on a bare set of differentials, independent of where they came
/// from: is the origin in the relative interior of their convex hull, and
/// what is the rank of their span?  Both answers are invariant under
/// invertible linear reparametrizations of the chart.
#[derive(Debug, Clone)]
pub struct DifferentialClass {
    pub is_eutactic: bool,
    pub rank: usize,
    pub lp_margin: Option<f64>,
    pub lp_weights: Option<Vec<f64>>,
}

pub fn classify_differentials(vs: &[[f64; 2]], positive_tol: f64) -> DifferentialClass {
    let rank = differential_rank(vs);
    let (lp_margin, lp_weights) = match hull_interior_lp(vs) {
        Some((t_star, weights)) => (Some(t_star), Some(weights)),
        None => (None, None),
    };
    let is_eutactic = lp_margin.is_some_and(|t| t > positive_tol);
    DifferentialClass {
        is_eutactic,
        rank,
        lp_margin,
        lp_weights,
    }
}

/// Rank of a set of plane vectors with a scale-relative zero tolerance.
fn differential_rank(vs: &[[f64; 2]]) -> usize {
    let scale = vs.iter().map(|v| v[0].hypot(v[1])).fold(0.0f64, f64::max);
    if scale <= 1e-12 {
        return 0;
    }
    let tol = 1e-8 * scale;
    let mut first: Option<[f64; 2]> = None;
    for v in vs {
        if v[0].hypot(v[1]) <= tol {
            continue;
        }
        match first {
            None => first = Some(*v),
            Some(u) => {
                if (u[0] * v[1] - u[1] * v[0]).abs() > tol * scale {
                    return 2;
                }
            }
        }
    }
    if first.is_some() {
        1
    } else {
        0
    }
}

/// Maximize `min lambda_i` over convex combinations with
/// `sum lambda_i v_i = 0`; `None` when no combination vanishes at all.
///
/// With `lambda = mu + t`, `mu >= 0`, `t` free, the constraints are three
/// equalities in `(mu, t)`; the optimum sits at a basic solution, so all
/// column supports of size at most three are scanned.
fn hull_interior_lp(vs: &[[f64; 2]]) -> Option<(f64, Vec<f64>)> {
    let m = vs.len();
    if m == 0 {
        return None;
    }
    let scale = vs.iter().map(|v| v[0].hypot(v[1])).fold(0.0f64, f64::max);
    let vs: Vec<[f64; 2]> = if scale > 0.0 {
        vs.iter().map(|v| [v[0] / scale, v[1] / scale]).collect()
    } else {
        vs.to_vec()
    };
    // Columns 0..m are mu_i; column m is t.
    let column = |j: usize| -> [f64; 3] {
        if j < m {
            [1.0, vs[j][0], vs[j][1]]
        } else {
            let sx: f64 = vs.iter().map(|v| v[0]).sum();
            let sy: f64 = vs.iter().map(|v| v[1]).sum();
            [m as f64, sx, sy]
        }
    };
    let b = [1.0, 0.0, 0.0];

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut supports: Vec<Vec<usize>> = vec![vec![]];
    for take in 1..=3usize.min(m + 1) {
        supports.extend(subsets(m + 1, take));
    }
    for support in supports {
        let cols: Vec<[f64; 3]> = support.iter().map(|&j| column(j)).collect();
        let Some(x) = solve_consistent(&cols, b) else {
            continue;
        };
        let mut mu = vec![0.0f64; m];
        let mut t = 0.0f64;
        for (k, &j) in support.iter().enumerate() {
            if j < m {
                mu[j] = x[k];
            } else {
                t = x[k];
            }
        }
        if mu.iter().any(|&v| v < -1e-9) {
            continue;
        }
        let lambda: Vec<f64> = mu.iter().map(|&v| v + t).collect();
        if best.as_ref().is_none_or(|(bt, _)| t > *bt) {
            best = Some((t, lambda));
        }
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for j in start..n {
            current.push(j);
            rec(j + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Solve `A x = b` for a 3-row system with up to three columns by full
/// pivoting; `None` if inconsistent. Rank-deficient free columns are zero.
fn solve_consistent(cols: &[[f64; 3]], b: [f64; 3]) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut a = [[0.0f64; 4]; 3];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            a[i][j] = col[i];
        }
    }
    for i in 0..3 {
        a[i][k] = b[i];
    }
    let mut col_of = (0..k).collect::<Vec<usize>>();
    let mut row = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for _ in 0..k {
        // Full pivot among remaining rows/columns.
        let (mut pi, mut pj, mut pv) = (row, row, 0.0f64);
        for (i, arow) in a.iter().enumerate().skip(row) {
            for (j, &v) in arow.iter().enumerate().take(k).skip(row) {
                if v.abs() > pv {
                    (pi, pj, pv) = (i, j, v.abs());
                }
            }
        }
        if pv <= 1e-12 {
            break;
        }
        a.swap(row, pi);
        for r in a.iter_mut() {
            r.swap(row, pj);
        }
        col_of.swap(row, pj);
        let pivot_row = a[row];
        for (i, arow) in a.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = arow[row] / pivot_row[row];
            for (v, &p) in arow.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
        }
        pivots.push((row, row));
        row += 1;
        if row == 3 {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero right-hand side.
    for arow in a.iter().skip(row) {
        if arow[k].abs() > 1e-9 {
            return None;
        }
    }
    let mut x = vec![0.0f64; k];
    for &(r, c) in &pivots {
        x[col_of[c]] = a[r][k] / a[r][c];
    }
    Some(x)
}
