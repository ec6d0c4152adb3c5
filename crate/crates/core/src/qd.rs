//! Quantum-dot emission with a coherent laser background: how much background
//! each certification criterion tolerates, and the designed `g2 = 1/2`
//! scenario where the standard criterion sees nothing while the
//! photon-number-based bound still certifies a nonzero SPP.
//!
//! The state is `rho = p1_tilde |1><1| + (1 - p1_tilde) |alpha><alpha|`, so
//! with `a = 1 - p1_tilde` and `N_alpha = |alpha|^2`:
//! `N = p1_tilde + a N_alpha` and `g2 = a N_alpha^2 / N^2`.

use serde::Serialize;

use crate::bounds::{spp_bounds_photon, spp_bounds_vacuum};
use crate::families::{qd_background, DEFAULT_TAIL_CAP};
use crate::{Error, Result};

/// One row of the designed-state sweep.
///
/// In that sweep the background is tuned so the constructed state has
/// `g2 = 1/2`; the `p1_tilde = 0` row is degenerate (vacuum, `g2` undefined,
/// recorded as NaN).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QdScenarioRecord {
    pub p1_tilde: f64,
    pub n_alpha: f64,
    pub g2: f64,
    pub mean_n: f64,
    pub exact_p1: f64,
    pub lower_photon: f64,
    pub lower_vacuum: f64,
}

fn check_p1_tilde(p1_tilde: f64) -> Result<()> {
    if !(0.0..1.0).contains(&p1_tilde) {
        return Err(Error::Domain(format!(
            "p1_tilde must be in [0, 1), got {p1_tilde}"
        )));
    }
    Ok(())
}

/// Largest background `N_alpha` for which the bare `g2 < 1/2` criterion still
/// certifies a nonzero SPP:
/// `N_alpha < p1_tilde (1 + sqrt(2/(1 - p1_tilde))) / (1 + p1_tilde)`.
///
/// Vanishes as `p1_tilde -> 0` (no background tolerated) and diverges as
/// `p1_tilde -> 1`. Reaching `N_alpha = 1` requires `p1_tilde = 1/2`.
pub fn background_limit_g2_criterion(p1_tilde: f64) -> Result<f64> {
    check_p1_tilde(p1_tilde)?;
    Ok(p1_tilde * (1.0 + (2.0 / (1.0 - p1_tilde)).sqrt()) / (1.0 + p1_tilde))
}

/// Largest background for which `N * g2 < 1` still certifies a nonzero SPP:
/// `N_alpha < (1 + sqrt((1 + 3 p1_tilde)/(1 - p1_tilde))) / 2`.
///
/// Already `N_alpha = 1` at `p1_tilde = 0`, since this criterion detects the
/// SPP of coherent states outright.
pub fn background_limit_photon_criterion(p1_tilde: f64) -> Result<f64> {
    check_p1_tilde(p1_tilde)?;
    Ok(0.5 * (1.0 + ((1.0 + 3.0 * p1_tilde) / (1.0 - p1_tilde)).sqrt()))
}

/// Background amplitude that places the mixture exactly at `g2 = target_g2`.
///
/// Solving `a N_alpha^2 = t (p1_tilde + a N_alpha)^2` for the positive root
/// gives `N_alpha = p1_tilde sqrt(a t) / (a (1 - sqrt(a t)))`, which exists
/// whenever `a * t < 1` (the mixture's `g2` ranges over `[0, 1/a)`). The
/// returned root is verified by reconstructing the state and recomputing its
/// `g2` to within `1e-10`. `p1_tilde = 0` is the degenerate vacuum-dominated
/// edge: the only root is zero background.
pub fn solve_background_for_g2_target(p1_tilde: f64, target_g2: f64) -> Result<f64> {
    check_p1_tilde(p1_tilde)?;
    if !target_g2.is_finite() || target_g2 <= 0.0 {
        return Err(Error::Domain(format!(
            "target_g2 must be > 0, got {target_g2}"
        )));
    }
    let a = 1.0 - p1_tilde;
    let s = (a * target_g2).sqrt();
    if s >= 1.0 {
        return Err(Error::NoSolution(format!(
            "no positive background reaches g2 = {target_g2} at p1_tilde = {p1_tilde}"
        )));
    }
    if p1_tilde == 0.0 {
        return Ok(0.0);
    }
    let root = p1_tilde * s / (a * (1.0 - s));
    let state = qd_background(p1_tilde, root, DEFAULT_TAIL_CAP);
    let g2 = state
        .g2_zero_delay()
        .ok_or_else(|| Error::NoSolution("reconstructed state has no photons".into()))?;
    if (g2 - target_g2).abs() > 1e-10 {
        return Err(Error::NoSolution(format!(
            "root failed the residual check: g2 = {g2}, target = {target_g2}"
        )));
    }
    Ok(root)
}

/// The designed-state sweep: for each `p1_tilde` the background sits exactly
/// at the `g2 = 1/2` boundary, so the standard criterion certifies nothing,
/// and the record collects the exact SPP next to both certified lower bounds.
///
/// The vacuum-route bound uses `p0 = (1 - p1_tilde) e^{-N_alpha}`.
pub fn figure5_sweep(grid: &[f64]) -> Result<Vec<QdScenarioRecord>> {
    grid.iter()
        .map(|&p1_tilde| {
            check_p1_tilde(p1_tilde)?;
            if p1_tilde == 0.0 {
                return Ok(QdScenarioRecord {
                    p1_tilde: 0.0,
                    n_alpha: 0.0,
                    g2: f64::NAN,
                    mean_n: 0.0,
                    exact_p1: 0.0,
                    lower_photon: 0.0,
                    lower_vacuum: 0.0,
                });
            }
            let n_alpha = solve_background_for_g2_target(p1_tilde, 0.5)?;
            let state = qd_background(p1_tilde, n_alpha, DEFAULT_TAIL_CAP);
            let g2 = state.g2_zero_delay().expect("state has photons");
            let mean_n = state.mean_photon_number();
            let exact_p1 = p1_tilde + (1.0 - p1_tilde) * n_alpha * (-n_alpha).exp();
            let p0 = (1.0 - p1_tilde) * (-n_alpha).exp();
            Ok(QdScenarioRecord {
                p1_tilde,
                n_alpha,
                g2,
                mean_n,
                exact_p1,
                lower_photon: spp_bounds_photon(g2, mean_n).0,
                lower_vacuum: spp_bounds_vacuum(g2, p0).0,
            })
        })
        .collect()
}

/// Default sweep grid `p1_tilde = 0.00, 0.01, ..., 0.99`.
pub fn figure5_default_grid() -> Vec<f64> {
    (0..100).map(|k| k as f64 * 0.01).collect()
}
