//! Critical points of the smoothed systole, and direct maximization of the
//! systole itself.
//!
//! [`find_critical`] runs gradient ascent with backtracking on the smoothed
//! systole, then classifies the limit by the eigenvalue signs of the chart
//! Hessian. [`maximize_sys`] ascends the nonsmooth systole along the
//! minimum-norm point of the convex hull of the active length gradients —
//! the steepest-ascent direction for a min of smooth functions — and
//! certifies a maximum by that norm vanishing on a shortest set of size at
//! least two; a final Newton step equalizes the tied lengths to high
//! precision.

use serde::Serialize;

use super::markov::trace_walk;
use super::syst::FdConfig;
use super::{
    enumerate_scc, length_of_trace, sys, syst, syst_gradient, syst_hessian, FrickePoint, SccRecord,
    Slope, SysResult, SystValue, TorusError,
};

/// Options for [`find_critical`].
#[derive(Debug, Clone, Copy)]
pub struct CriticalOptions {
    pub grad_tol: f64,
    pub max_iters: usize,
    pub fd: FdConfig,
    /// Minimum distance the chart coordinates must keep above 2.
    pub chart_margin: f64,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        CriticalOptions {
            grad_tol: 1e-8,
            max_iters: 500,
            fd: FdConfig::default(),
            chart_margin: 1e-6,
        }
    }
}

/// A located critical point of the smoothed systole.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalPointReport {
    pub point: [f64; 3],
    pub canonical_triple: [f64; 3],
    pub temperature: f64,
    pub iterations: usize,
    pub gradient: [f64; 2],
    pub gradient_norm: f64,
    pub hessian: [[f64; 2]; 2],
    pub eigenvalues: [f64; 2],
    /// Number of negative Hessian eigenvalues.
    pub morse_index: usize,
    pub syst: SystValue,
}

pub(crate) fn sym_eigenvalues(h: &[[f64; 2]; 2]) -> [f64; 2] {
    let mean = (h[0][0] + h[1][1]) / 2.0;
    let disc = (((h[0][0] - h[1][1]) / 2.0).powi(2) + h[0][1] * h[1][0])
        .max(0.0)
        .sqrt();
    [mean - disc, mean + disc]
}

/// Ascend the smoothed systole from `start` until the chart gradient is
/// below tolerance, then classify by the Hessian.
pub fn find_critical(
    start: &FrickePoint,
    temperature: f64,
    opts: &CriticalOptions,
) -> Result<CriticalPointReport, TorusError> {
    let value_at = |q: &FrickePoint| -> Result<f64, TorusError> {
        Ok(syst(q, temperature, opts.fd.tail_eps)?.value)
    };
    let mut p = *start;
    let mut step = 0.1f64;
    let mut iterations = 0usize;
    let (gradient, gradient_norm) = loop {
        if p.x() <= 2.0 + opts.chart_margin || p.y() <= 2.0 + opts.chart_margin {
            return Err(TorusError::LeftChart { x: p.x(), y: p.y() });
        }
        let g = syst_gradient(&p, temperature, &opts.fd)?;
        let gn = g[0].hypot(g[1]);
        if gn <= opts.grad_tol {
            break (g, gn);
        }
        if iterations >= opts.max_iters {
            return Err(TorusError::NoConvergence { iterations });
        }
        iterations += 1;
        let f0 = value_at(&p)?;
        let mut alpha = step.clamp(1e-10, 1.0);
        let mut accepted = false;
        while alpha >= 1e-14 {
            let candidate = p.move_chart(alpha * g[0] / gn, alpha * g[1] / gn);
            if let Ok(q) = candidate {
                if q.x() > 2.0 + opts.chart_margin && q.y() > 2.0 + opts.chart_margin {
                    if let Ok(fq) = value_at(&q) {
                        if fq >= f0 + 0.3 * alpha * gn {
                            p = q;
                            step = (alpha * 2.0).min(1.0);
                            accepted = true;
                            break;
                        }
                    }
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            // Line search exhausted: legitimate only at the noise floor.
            if gn <= 50.0 * opts.grad_tol {
                break (g, gn);
            }
            return Err(TorusError::NoConvergence { iterations });
        }
    };

    let hessian = syst_hessian(&p, temperature, &opts.fd)?;
    let eigenvalues = sym_eigenvalues(&hessian);
    let eig_scale = eigenvalues[0].abs().max(eigenvalues[1].abs()).max(1.0);
    let morse_index = eigenvalues
        .iter()
        .filter(|&&l| l < -1e-5 * eig_scale)
        .count();
    Ok(CriticalPointReport {
        point: [p.x(), p.y(), p.z()],
        canonical_triple: p.canonical_triple(),
        temperature,
        iterations,
        gradient,
        gradient_norm,
        hessian,
        eigenvalues,
        morse_index,
        syst: syst(&p, temperature, opts.fd.tail_eps)?,
    })
}

/// Options for [`maximize_sys`].
#[derive(Debug, Clone, Copy)]
pub struct MaxSysOptions {
    /// Certificate threshold: the minimum-norm point of the active
    /// gradient hull must fall below this.
    pub dir_tol: f64,
    pub max_iters: usize,
    /// Relative length band defining the active (near-shortest) set.
    pub active_band_rel: f64,
    pub chart_margin: f64,
}

impl Default for MaxSysOptions {
    fn default() -> Self {
        MaxSysOptions {
            dir_tol: 1e-9,
            max_iters: 2000,
            active_band_rel: 1e-6,
            chart_margin: 1e-6,
        }
    }
}

/// A certified local maximum of the systole.
#[derive(Debug, Clone, Serialize)]
pub struct MaxSysReport {
    pub point: [f64; 3],
    pub canonical_triple: [f64; 3],
    pub systole: SysResult,
    pub iterations: usize,
    /// Norm of the minimum-norm point of the active gradient hull.
    pub certificate_norm: f64,
    /// Convex weights achieving the certificate, aligned with `active`.
    pub certificate_weights: Vec<f64>,
    pub active: Vec<SccRecord>,
    /// Whether the final Newton equalization of tied lengths succeeded.
    pub polished: bool,
}

/// Exact chart gradient of one curve length, by propagating dual numbers
/// through the trace recursion (implicit differentiation supplies dz).
pub fn length_gradient_exact(p: &FrickePoint, slope: Slope) -> Result<[f64; 2], TorusError> {
    #[derive(Clone, Copy)]
    struct D2 {
        v: f64,
        dx: f64,
        dy: f64,
    }
    impl std::ops::Mul for D2 {
        type Output = D2;
        fn mul(self, o: D2) -> D2 {
            D2 {
                v: self.v * o.v,
                dx: self.v * o.dx + o.v * self.dx,
                dy: self.v * o.dy + o.v * self.dy,
            }
        }
    }
    impl std::ops::Sub for D2 {
        type Output = D2;
        fn sub(self, o: D2) -> D2 {
            D2 {
                v: self.v - o.v,
                dx: self.dx - o.dx,
                dy: self.dy - o.dy,
            }
        }
    }

    let (x, y, z) = (p.x(), p.y(), p.z());
    let denom = 2.0 * z - x * y;
    if denom.abs() <= 1e-9 * (x * y).abs().max(1.0) {
        return Err(TorusError::NumericalBreakdown {
            context: "length gradient undefined where the two solution branches meet".into(),
        });
    }
    let zx = (y * z - 2.0 * x) / denom;
    let zy = (x * z - 2.0 * y) / denom;
    let t = trace_walk(
        D2 {
            v: x,
            dx: 1.0,
            dy: 0.0,
        },
        D2 {
            v: y,
            dx: 0.0,
            dy: 1.0,
        },
        D2 {
            v: z,
            dx: zx,
            dy: zy,
        },
        D2 {
            v: x * y - z,
            dx: y - zx,
            dy: x - zy,
        },
        slope,
    );
    if t.v <= 2.0 {
        return Err(TorusError::PinchedStructure { value: t.v });
    }
    let dl_dt = 2.0 / (t.v * t.v - 4.0).sqrt();
    Ok([dl_dt * t.dx, dl_dt * t.dy])
}

/// Minimum-norm point of the convex hull of plane vectors, with its
/// convex weights. Scans all supports of size at most three, which is
/// exhaustive in the plane.
pub(crate) fn min_norm_point(vs: &[[f64; 2]]) -> ([f64; 2], Vec<f64>) {
    assert!(!vs.is_empty());
    let mut best_u = vs[0];
    let mut best_w = {
        let mut w = vec![0.0; vs.len()];
        w[0] = 1.0;
        w
    };
    let mut best_norm2 = best_u[0] * best_u[0] + best_u[1] * best_u[1];
    let mut consider = |u: [f64; 2], w: Vec<f64>| {
        let n2 = u[0] * u[0] + u[1] * u[1];
        if n2 < best_norm2 {
            best_norm2 = n2;
            best_u = u;
            best_w = w;
        }
    };
    let m = vs.len();
    for i in 0..m {
        let mut w = vec![0.0; m];
        w[i] = 1.0;
        consider(vs[i], w);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let (a, b) = (vs[i], vs[j]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let dd = d[0] * d[0] + d[1] * d[1];
            if dd == 0.0 {
                continue;
            }
            let s = (-(a[0] * d[0] + a[1] * d[1]) / dd).clamp(0.0, 1.0);
            let u = [a[0] + s * d[0], a[1] + s * d[1]];
            let mut w = vec![0.0; m];
            w[i] = 1.0 - s;
            w[j] = s;
            consider(u, w);
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let (a, b, c) = (vs[i], vs[j], vs[k]);
                let d1 = [a[0] - c[0], a[1] - c[1]];
                let d2 = [b[0] - c[0], b[1] - c[1]];
                let g11 = d1[0] * d1[0] + d1[1] * d1[1];
                let g12 = d1[0] * d2[0] + d1[1] * d2[1];
                let g22 = d2[0] * d2[0] + d2[1] * d2[1];
                let det = g11 * g22 - g12 * g12;
                if det.abs() <= 1e-14 * g11.max(g22).max(1.0) {
                    continue;
                }
                let r1 = -(d1[0] * c[0] + d1[1] * c[1]);
                let r2 = -(d2[0] * c[0] + d2[1] * c[1]);
                let alpha = (r1 * g22 - r2 * g12) / det;
                let beta = (g11 * r2 - g12 * r1) / det;
                let gamma = 1.0 - alpha - beta;
                if alpha < -1e-12 || beta < -1e-12 || gamma < -1e-12 {
                    continue;
                }
                let u = [
                    alpha * a[0] + beta * b[0] + gamma * c[0],
                    alpha * a[1] + beta * b[1] + gamma * c[1],
                ];
                let mut w = vec![0.0; m];
                w[i] = alpha;
                w[j] = beta;
                w[k] = gamma;
                consider(u, w);
            }
        }
    }
    (best_u, best_w)
}

fn active_set(p: &FrickePoint, band_rel: f64) -> Result<Vec<SccRecord>, TorusError> {
    let s = sys(p)?;
    let band = s.length * (1.0 + band_rel);
    let mut active: Vec<SccRecord> = enumerate_scc(p, band)?
        .into_iter()
        .filter(|r| r.length <= band)
        .collect();
    active.sort_by_key(|r| r.slope);
    Ok(active)
}

/// Newton-equalize the tied lengths of the active curves (2 or 3 of them)
/// using exact gradients; returns the improved point if it converges.
fn equalize(p: &FrickePoint, active: &[SccRecord]) -> Option<FrickePoint> {
    if !(2..=3).contains(&active.len()) {
        return None;
    }
    let mut q = *p;
    for _ in 0..30 {
        let lengths: Vec<f64> = active
            .iter()
            .map(|r| length_of_trace(super::markov::trace_of_slope(&q, r.slope)))
            .collect();
        let grads: Vec<[f64; 2]> = active
            .iter()
            .map(|r| length_gradient_exact(&q, r.slope))
            .collect::<Result<_, _>>()
            .ok()?;
        let k = lengths.len() - 1;
        let f: Vec<f64> = (0..k).map(|i| lengths[i] - lengths[i + 1]).collect();
        let residual = f.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
        if residual <= 1e-13 * (1.0 + lengths[0].abs()) {
            return Some(q);
        }
        let j: Vec<[f64; 2]> = (0..k)
            .map(|i| [grads[i][0] - grads[i + 1][0], grads[i][1] - grads[i + 1][1]])
            .collect();
        // Minimum-norm solve of J step = -f via the normal equations.
        let step = match k {
            1 => {
                let jj = j[0][0] * j[0][0] + j[0][1] * j[0][1];
                if jj <= 1e-18 {
                    return None;
                }
                let s = -f[0] / jj;
                [s * j[0][0], s * j[0][1]]
            }
            _ => {
                let a11 = j[0][0] * j[0][0] + j[0][1] * j[0][1];
                let a12 = j[0][0] * j[1][0] + j[0][1] * j[1][1];
                let a22 = j[1][0] * j[1][0] + j[1][1] * j[1][1];
                let det = a11 * a22 - a12 * a12;
                if det.abs() <= 1e-18 {
                    return None;
                }
                let y1 = (-f[0] * a22 + f[1] * a12) / det;
                let y2 = (-a11 * f[1] + a12 * f[0]) / det;
                [j[0][0] * y1 + j[1][0] * y2, j[0][1] * y1 + j[1][1] * y2]
            }
        };
        q = q.move_chart(step[0], step[1]).ok()?;
    }
    None
}

/// Ascend the systole along minimum-norm directions of the active gradient
/// hull until a vanishing certificate on at least two shortest curves.
pub fn maximize_sys(start: &FrickePoint, opts: &MaxSysOptions) -> Result<MaxSysReport, TorusError> {
    let mut p = *start;
    let mut step = 0.1f64;
    let mut iterations = 0usize;
    loop {
        if p.x() <= 2.0 + opts.chart_margin || p.y() <= 2.0 + opts.chart_margin {
            return Err(TorusError::LeftChart { x: p.x(), y: p.y() });
        }
        let active = active_set(&p, opts.active_band_rel)?;
        let grads: Vec<[f64; 2]> = active
            .iter()
            .map(|r| length_gradient_exact(&p, r.slope))
            .collect::<Result<_, _>>()?;
        let (u, _) = min_norm_point(&grads);
        let un = u[0].hypot(u[1]);

        let mut finish = un <= opts.dir_tol && active.len() >= 2;
        if !finish && un <= 1e-5 && active.len() >= 2 {
            // Close enough for the equalization polish to take over.
            if let Some(q) = equalize(&p, &active) {
                p = q;
                finish = {
                    let active = active_set(&p, opts.active_band_rel)?;
                    let grads: Vec<[f64; 2]> = active
                        .iter()
                        .map(|r| length_gradient_exact(&p, r.slope))
                        .collect::<Result<_, _>>()?;
                    active.len() >= 2 && {
                        let (u, _) = min_norm_point(&grads);
                        u[0].hypot(u[1]) <= opts.dir_tol
                    }
                };
            }
        }
        if finish {
            // The certificate tolerance is met anywhere in the narrow band
            // where the candidate curves tie; sharpen the tie itself before
            // reporting, so the returned point is accurate to the Newton
            // residual rather than to the band width.
            let mut polished = false;
            if let Some(q) = equalize(&p, &active) {
                p = q;
                polished = true;
            }
            let active = active_set(&p, opts.active_band_rel)?;
            let grads: Vec<[f64; 2]> = active
                .iter()
                .map(|r| length_gradient_exact(&p, r.slope))
                .collect::<Result<_, _>>()?;
            let (u, w) = min_norm_point(&grads);
            return Ok(MaxSysReport {
                point: [p.x(), p.y(), p.z()],
                canonical_triple: p.canonical_triple(),
                systole: sys(&p)?,
                iterations,
                certificate_norm: u[0].hypot(u[1]),
                certificate_weights: w,
                active,
                polished,
            });
        }

        if iterations >= opts.max_iters {
            return Err(TorusError::NoConvergence { iterations });
        }
        iterations += 1;

        let d = [u[0] / un, u[1] / un];
        let f0 = sys(&p)?.length;
        let mut alpha = step.clamp(1e-12, 0.5);
        let mut accepted = false;
        while alpha >= 1e-13 {
            if let Ok(q) = p.move_chart(alpha * d[0], alpha * d[1]) {
                if q.x() > 2.0 + opts.chart_margin && q.y() > 2.0 + opts.chart_margin {
                    if let Ok(s) = sys(&q) {
                        if s.length >= f0 + 0.3 * alpha * un {
                            p = q;
                            step = (alpha * 2.0).min(0.5);
                            accepted = true;
                            break;
                        }
                    }
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(TorusError::NoConvergence { iterations });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Branch;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn min_norm_point_cases() {
        let (u, w) = min_norm_point(&[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]);
        assert!(u[0].hypot(u[1]) < 1e-12);
        assert_abs_diff_eq!(w[0], 1.0 / 3.0, epsilon = 1e-9);
        let (u, _) = min_norm_point(&[[2.0, 1.0]]);
        assert_eq!(u, [2.0, 1.0]);
        let (u, _) = min_norm_point(&[[1.0, 1.0], [-1.0, -1.0]]);
        assert!(u[0].hypot(u[1]) < 1e-12);
        let (u, _) = min_norm_point(&[[1.0, 0.0], [2.0, 0.0]]);
        assert_eq!(u, [1.0, 0.0]);
        // Segment not through the origin: foot of the perpendicular.
        let (u, _) = min_norm_point(&[[1.0, 1.0], [-1.0, 1.0]]);
        assert_abs_diff_eq!(u[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn exact_gradient_matches_closed_form() {
        let p = FrickePoint::new(3.0, 3.0, 3.0).unwrap();
        let c = 2.0 / 5.0f64.sqrt();
        let g = length_gradient_exact(&p, Slope::new(0, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(g[0], c, epsilon = 1e-14);
        assert_abs_diff_eq!(g[1], 0.0, epsilon = 1e-14);
        let g = length_gradient_exact(&p, Slope::new(1, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(g[0], -c, epsilon = 1e-13);
        assert_abs_diff_eq!(g[1], -c, epsilon = 1e-13);
    }

    #[test]
    fn exact_gradient_matches_differences_on_deep_slope() {
        let p = FrickePoint::solve(3.3, 3.1, Branch::Minus).unwrap();
        let slope = Slope::new(5, 2).unwrap();
        let g = length_gradient_exact(&p, slope).unwrap();
        let fd =
            crate::torus::eutactic::length_differential(&p, slope, &FdConfig::default()).unwrap();
        assert_abs_diff_eq!(g[0], fd[0], epsilon = 1e-7);
        assert_abs_diff_eq!(g[1], fd[1], epsilon = 1e-7);
    }

    #[test]
    fn maximize_sys_reaches_symmetric_point() {
        let start = FrickePoint::solve(3.2, 3.4, Branch::Minus).unwrap();
        let report = maximize_sys(&start, &MaxSysOptions::default()).unwrap();
        let expected = 2.0 * 1.5f64.acosh();
        assert_relative_eq!(report.systole.length, expected, max_relative = 1e-9);
        for &c in &report.canonical_triple {
            assert_abs_diff_eq!(c, 3.0, epsilon = 1e-7);
        }
        assert_eq!(report.active.len(), 3);
        assert!(report.certificate_norm <= 1e-9);
        assert!(report.polished);
    }

    #[test]
    fn maximize_sys_from_two_curve_locus() {
        // On x = y the two shortest curves stay tied; the ascent rides the
        // locus up to the three-curve corner.
        let start = FrickePoint::solve(2.9, 2.9, Branch::Minus).unwrap();
        let report = maximize_sys(&start, &MaxSysOptions::default()).unwrap();
        for &c in &report.canonical_triple {
            assert_abs_diff_eq!(c, 3.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn find_critical_at_symmetric_point() {
        let start = FrickePoint::solve(3.2, 3.4, Branch::Minus).unwrap();
        let report = find_critical(&start, 0.2, &CriticalOptions::default()).unwrap();
        for &c in &report.canonical_triple {
            assert_abs_diff_eq!(c, 3.0, epsilon = 1e-5);
        }
        assert_eq!(report.morse_index, 2);
        assert!(report.eigenvalues[0] < 0.0 && report.eigenvalues[1] < 0.0);
        assert!(report.gradient_norm <= 5e-7);
    }

    #[test]
    fn sym_eigenvalues_closed_form() {
        let h = [[2.0, 1.0], [1.0, 2.0]];
        assert_eq!(sym_eigenvalues(&h), [1.0, 3.0]);
        let h = [[-3.0, 0.0], [0.0, 5.0]];
        assert_eq!(sym_eigenvalues(&h), [-3.0, 5.0]);
    }
}
