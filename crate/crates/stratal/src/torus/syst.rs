//! Temperature smoothing of the systole.
//!
//! `syst_T = -T log sum_gamma exp(-length(gamma) / T)`, summed over all
//! simple closed geodesics. The sum is evaluated by enumerating curves up
//! to a cutoff and bounding the discarded tail rigorously: below a cut
//! branch of frontier trace `t0` whose parent edge traces are `>= mu`,
//! depth-`d` curves number `2^d` and have trace `>= t0 (mu-1)^d`, so with
//! `exp(-l/T) <= (t/2)^(-2/T)` the tail is dominated by a geometric series
//! with ratio `r = 2 (mu-1)^(-2/T)`. The cutoff is raised until the tail
//! is negligible at the requested accuracy; `r >= 1` is reported as
//! [`TorusError::TailBoundDiverges`].

use serde::Serialize;

use super::markov::enumerate_with_tail;
use super::{sys, trace_of_length, FrickePoint, TorusError};

/// Default relative accuracy of the smoothed-systole truncation.
pub const DEFAULT_TAIL_EPS: f64 = 1e-12;

/// A smoothed-systole evaluation together with its accuracy certificate.
#[derive(Debug, Clone, Serialize)]
pub struct SystValue {
    pub value: f64,
    pub temperature: f64,
    /// The plain systole at the same point.
    pub systole: f64,
    /// Length cutoff at which the curve sum was truncated.
    pub truncation_length: f64,
    /// Number of curves actually summed.
    pub terms_used: usize,
    /// Rigorous bound on `|value - exact|` from the discarded tail.
    pub value_error_bound: f64,
}

/// Evaluate the smoothed systole at temperature `t` in `(0, 1)`, truncating
/// once the tail bound drops below `tail_eps` relative to the sum.
pub fn syst(p: &FrickePoint, t: f64, tail_eps: f64) -> Result<SystValue, TorusError> {
    if !(t > 0.0 && t < 1.0) || !t.is_finite() {
        return Err(TorusError::TemperatureOutOfRange { t });
    }
    let eps = tail_eps.clamp(1e-15, 1e-2);
    let sys0 = sys(p)?.length;

    // Sums are scaled by exp(sys0 / t) so the leading term is exactly 1.
    let mut l_cut = sys0 + 0.5 * t * (1.0 / eps).ln() + 0.5;
    for _ in 0..60 {
        let (records, pruned) = enumerate_with_tail(p, trace_of_length(l_cut))?;
        let s_scaled: f64 = records.iter().map(|r| (-(r.length - sys0) / t).exp()).sum();
        let mut tail_scaled = 0.0f64;
        for edge in &pruned {
            let r = 2.0 * (edge.mu - 1.0).powf(-2.0 / t);
            if r >= 1.0 {
                return Err(TorusError::TailBoundDiverges {
                    temperature: t,
                    mu: edge.mu,
                });
            }
            let log_first = (sys0 - 2.0 * (edge.t0 / 2.0).ln()) / t;
            tail_scaled += log_first.exp() / (1.0 - r);
        }
        if tail_scaled <= eps * s_scaled {
            let value = sys0 - t * s_scaled.ln();
            return Ok(SystValue {
                value,
                temperature: t,
                systole: sys0,
                truncation_length: l_cut,
                terms_used: records.len(),
                value_error_bound: t * (tail_scaled / s_scaled).ln_1p(),
            });
        }
        let needed = t * (tail_scaled / (eps * s_scaled)).ln();
        l_cut += (0.6 * needed + 0.2).clamp(0.3, 8.0);
    }
    Err(TorusError::NoConvergence { iterations: 60 })
}

/// Step sizes and guards for difference quotients.
#[derive(Debug, Clone, Copy)]
pub struct FdConfig {
    /// Step for first derivatives.
    pub h_grad: f64,
    /// Step for second derivatives.
    pub h_hess: f64,
    /// Allowed relative discrepancy when the gradient step is halved.
    pub grad_check_tol: f64,
    /// Allowed relative discrepancy when the Hessian step is halved.
    pub hess_check_tol: f64,
    /// Truncation accuracy used for the inner smoothed-systole evaluations.
    pub tail_eps: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            h_grad: 1e-5,
            h_hess: 1e-3,
            grad_check_tol: 1e-4,
            hess_check_tol: 5e-3,
            tail_eps: 1e-13,
        }
    }
}

/// Central difference with one halving check; returns the Richardson
/// extrapolation of the two estimates.
pub(crate) fn central_diff_checked(
    mut f: impl FnMut(f64) -> Result<f64, TorusError>,
    h: f64,
    check_tol: f64,
) -> Result<f64, TorusError> {
    let g1 = (f(h)? - f(-h)?) / (2.0 * h);
    let g2 = (f(h / 2.0)? - f(-h / 2.0)?) / h;
    let discrepancy = (g1 - g2).abs();
    let tol = check_tol * (1.0 + g2.abs());
    if discrepancy > tol {
        return Err(TorusError::StepTooLarge { discrepancy, tol });
    }
    Ok((4.0 * g2 - g1) / 3.0)
}

/// Chart gradient of the smoothed systole by checked central differences.
pub fn syst_gradient(p: &FrickePoint, t: f64, fd: &FdConfig) -> Result<[f64; 2], TorusError> {
    let eval = |dx: f64, dy: f64| -> Result<f64, TorusError> {
        Ok(syst(&p.move_chart(dx, dy)?, t, fd.tail_eps)?.value)
    };
    let gx = central_diff_checked(|h| eval(h, 0.0), fd.h_grad, fd.grad_check_tol)?;
    let gy = central_diff_checked(|h| eval(0.0, h), fd.h_grad, fd.grad_check_tol)?;
    Ok([gx, gy])
}

/// Chart Hessian of the smoothed systole: five-point second differences
/// with one halving check per entry, Richardson-extrapolated.
pub fn syst_hessian(p: &FrickePoint, t: f64, fd: &FdConfig) -> Result<[[f64; 2]; 2], TorusError> {
    let eval = |dx: f64, dy: f64| -> Result<f64, TorusError> {
        Ok(syst(&p.move_chart(dx, dy)?, t, fd.tail_eps)?.value)
    };
    let f0 = eval(0.0, 0.0)?;

    let second = |f: &mut dyn FnMut(f64) -> Result<f64, TorusError>,
                  h: f64|
     -> Result<f64, TorusError> { Ok((f(h)? - 2.0 * f0 + f(-h)?) / (h * h)) };
    let mixed = |h: f64| -> Result<f64, TorusError> {
        Ok((eval(h, h)? - eval(h, -h)? - eval(-h, h)? + eval(-h, -h)?) / (4.0 * h * h))
    };

    let checked = |coarse: f64, fine: f64| -> Result<f64, TorusError> {
        let discrepancy = (coarse - fine).abs();
        let tol = fd.hess_check_tol * (1.0 + fine.abs());
        if discrepancy > tol {
            return Err(TorusError::StepTooLarge { discrepancy, tol });
        }
        Ok((4.0 * fine - coarse) / 3.0)
    };

    let h = fd.h_hess;
    let mut fx = |s: f64| eval(s, 0.0);
    let xx = checked(second(&mut fx, h)?, second(&mut fx, h / 2.0)?)?;
    let mut fy = |s: f64| eval(0.0, s);
    let yy = checked(second(&mut fy, h)?, second(&mut fy, h / 2.0)?)?;
    let xy = checked(mixed(h)?, mixed(h / 2.0)?)?;
    Ok([[xx, xy], [xy, yy]])
}
