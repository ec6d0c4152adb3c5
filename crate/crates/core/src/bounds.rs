//! Certified bounds and classifications derivable from `(g2, N)`, `(g2, p0)`,
//! or `g2` alone.
//!
//! Two effective second-order correlation functions organize everything:
//!
//! - vacuum-based `g0~ = (1 - p0) * g2`, which removes the inflation of `g2`
//!   caused by the vacuum projection; bounds apply for `g0~ < 1/2`;
//! - photon-number-based `gN~ = N * g2 = N + Q` (Mandel-Q identity), with the
//!   wider validity range `gN~ < 1`.
//!
//! When neither `N` nor `p0` is known, `g2 < 1/2` still caps the mean photon
//! number at `N < 2` (the floor bound below), which yields weaker fallback
//! bounds by substituting `N = 2`.
//!
//! [`analyze`] dispatches over the available observables and fills a
//! [`BoundReport`] with every applicable bound; when both `N` and `p0` are
//! known it reports the intersection (max of lower bounds, min of uppers).

use serde::{Deserialize, Serialize};
use serde::{Serializer, ser::SerializeStruct};

use crate::fock::ObservableSet;
use crate::{Error, Result};

/// Which effective correlation a threshold or bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdKind {
    Vacuum,
    Photon,
}

/// Basis that produced the tightest bounds in a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    VacuumBased,
    PhotonBased,
    FallbackG2Only,
    NotApplicable,
}

/// Hard lower bound on `g2` for a given mean photon number:
/// `g2 >= floor(N) * (2N - floor(N) - 1) / N^2`.
///
/// Continuous and monotonically increasing in `N`, approaching 1 as
/// `N -> inf`; saturated by the two-level mixture of `|floor(N)>` and
/// `|floor(N)+1>` with mean `N`. Uses the standard floor (largest integer
/// `<= x`): at integer `N` both floor conventions give the identical value
/// `(N-1)/N`, and the standard floor keeps the evaluation continuous.
pub fn zubizarreta_lower_g2(mean_n: f64) -> Result<f64> {
    if !mean_n.is_finite() || mean_n <= 0.0 {
        return Err(Error::Domain(format!(
            "mean photon number must be > 0, got {mean_n}"
        )));
    }
    let m = mean_n.floor();
    Ok(m * (2.0 * mean_n - m - 1.0) / (mean_n * mean_n))
}

/// Vacuum-based effective second-order correlation `g0~ = (1 - p0) * g2`.
pub fn effective_g2_vacuum(g2: f64, p0: f64) -> Result<f64> {
    check_g2(g2)?;
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::Domain(format!("p0 must be in [0, 1], got {p0}")));
    }
    Ok((1.0 - p0) * g2)
}

/// Photon-number-based effective second-order correlation `gN~ = N * g2`.
pub fn effective_g2_photon(g2: f64, mean_n: f64) -> Result<f64> {
    check_g2(g2)?;
    if !mean_n.is_finite() || mean_n < 0.0 {
        return Err(Error::Domain(format!(
            "mean photon number must be >= 0, got {mean_n}"
        )));
    }
    Ok(mean_n * g2)
}

/// Lower bound on the SMPPR `p1/q` from the vacuum-based effective
/// correlation: `2 sqrt(1 - 2x) / (1 - sqrt(1 - 2x))` for `x < 1/2`.
///
/// Evaluated as `s(1 + s)/x` with `s = sqrt(1 - 2x)`, which is algebraically
/// identical and avoids the cancellation in `1 - s` at small `x`. Monotone
/// decreasing; `f64::INFINITY` at `x = 0`.
pub fn smppr_lower_vacuum(eff_g2: f64) -> Result<f64> {
    check_g2(eff_g2)?;
    if eff_g2 >= 0.5 {
        return Err(Error::NotApplicable(format!(
            "vacuum-based SMPPR bound requires effective g2 < 1/2, got {eff_g2}"
        )));
    }
    if eff_g2 == 0.0 {
        return Ok(f64::INFINITY);
    }
    let s = (1.0 - 2.0 * eff_g2).sqrt();
    Ok(s * (1.0 + s) / eff_g2)
}

/// Lower bound on the SMPPR from the photon-number-based effective
/// correlation: `2 (1/x - 1)` for `x <= 1` (zero at the boundary `x = 1`).
///
/// `f64::INFINITY` at `x = 0`.
pub fn smppr_lower_photon(eff_g2: f64) -> Result<f64> {
    check_g2(eff_g2)?;
    if eff_g2 > 1.0 {
        return Err(Error::NotApplicable(format!(
            "photon-based SMPPR bound requires effective g2 <= 1, got {eff_g2}"
        )));
    }
    if eff_g2 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * (1.0 / eff_g2 - 1.0))
}

/// Largest effective correlation compatible with a desired SMPPR `theta`:
/// `2(theta + 1)/(theta + 2)^2` for the vacuum criterion and
/// `2/(theta + 2)` for the photon criterion (inverse of
/// [`smppr_lower_photon`]). The photon threshold is the looser of the two for
/// every `theta`.
pub fn g2_threshold_for_smppr(theta: f64, criterion: ThresholdKind) -> Result<f64> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::Domain(format!("theta must be >= 0, got {theta}")));
    }
    let d = theta + 2.0;
    Ok(match criterion {
        ThresholdKind::Vacuum => 2.0 * (theta + 1.0) / (d * d),
        ThresholdKind::Photon => 2.0 / d,
    })
}

/// Absolute SPP bounds `(lower, upper)` from `g2` and the vacuum projection:
/// `upper = 1 - p0` always; `lower = (1 - p0) * 2s/(1 + s)` with
/// `s = sqrt(1 - 2 g0~)` when `g0~ < 1/2`, degrading to zero otherwise.
pub fn spp_bounds_vacuum(g2: f64, p0: f64) -> (f64, f64) {
    let upper = 1.0 - p0;
    let eff = (1.0 - p0) * g2;
    let lower = if eff < 0.5 {
        let s = (1.0 - 2.0 * eff).sqrt();
        upper * 2.0 * s / (1.0 + s)
    } else {
        0.0
    };
    (lower, upper)
}

/// Absolute SPP bounds `(lower, upper)` from `g2` and the mean photon number:
/// `min(N, 1) >= p1 >= N(1 - N g2)`, the lower bound clamped to `[0, 1]`.
///
/// The lower bound is exact for states supported on `{0, 1, 2}`; only Fock
/// components `n >= 3` introduce slack.
pub fn spp_bounds_photon(g2: f64, mean_n: f64) -> (f64, f64) {
    let upper = mean_n.min(1.0);
    let lower = (mean_n * (1.0 - mean_n * g2)).clamp(0.0, 1.0);
    (lower, upper)
}

/// Upper bound on the multi-photon projection and the complementary lower
/// bound on `p0 + p1`, from an effective correlation `x < 1`:
/// `q <= x/(2 - x)` and `p0 + p1 >= 2(1 - x)/(2 - x)`. The pair sums to one.
pub fn multiphoton_upper_and_p0p1_lower(eff_g2: f64) -> Result<(f64, f64)> {
    check_g2(eff_g2)?;
    if eff_g2 >= 1.0 {
        return Err(Error::NotApplicable(format!(
            "multi-photon bound requires effective g2 < 1, got {eff_g2}"
        )));
    }
    let q_upper = eff_g2 / (2.0 - eff_g2);
    let p0p1_lower = 2.0 * (1.0 - eff_g2) / (2.0 - eff_g2);
    Ok((q_upper, p0p1_lower))
}

/// Bounds available from `g2 < 1/2` alone, substituting the largest mean
/// photon number `N = 2` still compatible with such a `g2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FallbackBounds {
    /// `p1/q >= 1/g2 - 2` (`inf` at `g2 = 0`).
    pub smppr_lower: f64,
    /// `p0 + p1 >= (1 - 2 g2)/(1 - g2)`.
    pub p0_plus_p1_lower: f64,
    /// The scale-free SPP factor `1 - 2 g2`; `p1 >= N * factor` once `N` is known.
    pub spp_lower_factor: f64,
    /// `N * factor` when the mean photon number was supplied.
    pub spp_lower: Option<f64>,
}

/// Bounds from `g2` alone (no `N`, no `p0`), valid because `g2 < 1/2` forces
/// `N < 2`. Unlike the vacuum route, no subset of states keeps these exact:
/// equality holds only for the two-photon Fock state, where `p1 = 0`.
pub fn fallback_bounds_g2_only(g2: f64, mean_n_if_known: Option<f64>) -> Result<FallbackBounds> {
    check_g2(g2)?;
    if g2 >= 0.5 {
        return Err(Error::NotApplicable(format!(
            "fallback bounds require g2 < 1/2, got {g2}"
        )));
    }
    let factor = 1.0 - 2.0 * g2;
    Ok(FallbackBounds {
        smppr_lower: if g2 == 0.0 {
            f64::INFINITY
        } else {
            1.0 / g2 - 2.0
        },
        p0_plus_p1_lower: factor / (1.0 - g2),
        spp_lower_factor: factor,
        spp_lower: mean_n_if_known.map(|n| (n * factor).clamp(0.0, 1.0)),
    })
}

/// Membership in the nested sets `(g2 < 1/2, N*g2 < 1, N < 2)`.
///
/// For observables of a single physical state the implications
/// `m1 => m2 => m3` always hold.
pub fn classify_sets(g2: f64, mean_n: f64) -> (bool, bool, bool) {
    (g2 < 0.5, mean_n * g2 < 1.0, mean_n < 2.0)
}

/// Exact SPP of any Fock-diagonal state from its overall observables and the
/// observables of its multi-photon part: `p1 = N (1 - N g2 / (n2 g2_multi))`.
pub fn exact_p1_from_decomposition(mean_n: f64, g2: f64, n2: f64, g2_multi: f64) -> Result<f64> {
    let denom = n2 * g2_multi;
    if !denom.is_finite() || denom <= 0.0 {
        return Err(Error::Domain(format!(
            "n2 * g2_multi must be > 0, got {denom}"
        )));
    }
    Ok(mean_n * (1.0 - mean_n * g2 / denom))
}

/// The observables fed to [`analyze`]: `g2` is required, the rest optional.
///
/// Wire format: `{"g2": x, "mean_n": y, "p0": z}` with absent fields `null`
/// or omitted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisInput {
    #[serde(default)]
    pub g2: Option<f64>,
    #[serde(default)]
    pub mean_n: Option<f64>,
    #[serde(default)]
    pub p0: Option<f64>,
}

impl From<&ObservableSet> for AnalysisInput {
    fn from(obs: &ObservableSet) -> Self {
        AnalysisInput {
            g2: obs.g2,
            mean_n: Some(obs.mean_n),
            p0: Some(obs.p0),
        }
    }
}

/// Every applicable bound for one set of observables.
///
/// Serialized with `Unknown` (inapplicable or underdetermined) fields as
/// `null` and infinite ratios as the string `"inf"`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub g2: f64,
    pub mean_n: Option<f64>,
    pub p0: Option<f64>,
    pub eff_g2_vacuum: Option<f64>,
    pub eff_g2_photon: Option<f64>,
    pub spp_lower: f64,
    pub spp_upper: f64,
    pub smppr_lower: Option<f64>,
    pub q_upper: Option<f64>,
    pub p0_plus_p1_lower: Option<f64>,
    pub set_m1: bool,
    pub set_m2: Option<bool>,
    pub set_m3: Option<bool>,
    pub criterion_used: Criterion,
    /// True when clamping to `[0, 1]` (or to `lower <= upper`) altered a raw
    /// bound value, so tests can tell raw from clamped reports. Not serialized.
    pub clamped: bool,
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundReport", 14)?;
        s.serialize_field("g2", &self.g2)?;
        s.serialize_field("mean_n", &self.mean_n)?;
        s.serialize_field("p0", &self.p0)?;
        s.serialize_field("eff_g2_vacuum", &self.eff_g2_vacuum)?;
        s.serialize_field("eff_g2_photon", &self.eff_g2_photon)?;
        s.serialize_field("spp_lower", &self.spp_lower)?;
        s.serialize_field("spp_upper", &self.spp_upper)?;
        match self.smppr_lower {
            Some(v) if v.is_infinite() => s.serialize_field("smppr_lower", "inf")?,
            other => s.serialize_field("smppr_lower", &other)?,
        }
        s.serialize_field("q_upper", &self.q_upper)?;
        s.serialize_field("p0_plus_p1_lower", &self.p0_plus_p1_lower)?;
        s.serialize_field("set_m1", &self.set_m1)?;
        s.serialize_field("set_m2", &self.set_m2)?;
        s.serialize_field("set_m3", &self.set_m3)?;
        s.serialize_field("criterion_used", &self.criterion_used)?;
        s.end()
    }
}

/// Evaluate every bound applicable to the supplied observables.
///
/// Dispatch: photon-number-based bounds when `N` is known, vacuum-based when
/// `p0` is known, the intersection of the two when both are (max of lower
/// bounds, min of uppers — neither basis dominates for all quantities), and
/// the `g2`-only fallback otherwise. `criterion_used` records the basis of
/// the tightest SPP lower bound, or `NotApplicable` when only an unusable
/// `g2 >= 1/2` was supplied.
pub fn analyze(input: &AnalysisInput) -> Result<BoundReport> {
    let g2 = input
        .g2
        .ok_or_else(|| Error::InsufficientData("g2 is required for any bound".into()))?;
    check_g2(g2)?;
    if let Some(n) = input.mean_n {
        if !n.is_finite() || n < 0.0 {
            return Err(Error::Domain(format!("mean_n must be >= 0, got {n}")));
        }
    }
    if let Some(p0) = input.p0 {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::Domain(format!("p0 must be in [0, 1], got {p0}")));
        }
    }

    let eff_vac = input.p0.map(|p0| (1.0 - p0) * g2);
    let eff_pho = input.mean_n.map(|n| n * g2);
    let mut clamped = false;

    // Absolute SPP bounds per route, then their intersection.
    let photon_abs = input.mean_n.map(|n| {
        let raw_lower = n * (1.0 - n * g2);
        if !(0.0..=1.0).contains(&raw_lower) {
            clamped = true;
        }
        spp_bounds_photon(g2, n)
    });
    let vacuum_abs = input.p0.map(|p0| spp_bounds_vacuum(g2, p0));

    let mut spp_lower: f64 = 0.0;
    let mut spp_upper: f64 = 1.0;
    for (lo, up) in photon_abs.iter().chain(vacuum_abs.iter()) {
        spp_lower = spp_lower.max(*lo);
        spp_upper = spp_upper.min(*up);
    }
    if spp_lower > spp_upper {
        // Only reachable for mutually inconsistent observables.
        spp_lower = spp_upper;
        clamped = true;
    }

    // Relative SMPPR bound: tightest applicable route, fallback when none.
    let mut smppr: Option<f64> = None;
    if let Some(ep) = eff_pho {
        if ep <= 1.0 {
            smppr = Some(smppr_lower_photon(ep)?);
        }
    }
    if let Some(ev) = eff_vac {
        if ev < 0.5 {
            let v = smppr_lower_vacuum(ev)?;
            smppr = Some(smppr.map_or(v, |p| p.max(v)));
        }
    }
    if smppr.is_none() && g2 < 0.5 {
        smppr = Some(fallback_bounds_g2_only(g2, None)?.smppr_lower);
    }

    // Multi-photon mass bounds share one formula pair; feed it the smallest
    // applicable effective correlation (photon-based when N is known, the
    // N = 2 substitute otherwise).
    let mut g_eff: Option<f64> = None;
    if let Some(ep) = eff_pho {
        if ep < 1.0 {
            g_eff = Some(ep);
        }
    }
    if 2.0 * g2 < 1.0 {
        let fb = 2.0 * g2;
        g_eff = Some(g_eff.map_or(fb, |e| e.min(fb)));
    }
    let (q_upper, p0_plus_p1_lower) = match g_eff {
        Some(g) => {
            let (qu, pl) = multiphoton_upper_and_p0p1_lower(g)?;
            (Some(qu), Some(pl))
        }
        None => (None, None),
    };

    let criterion = match (photon_abs, vacuum_abs) {
        (Some((pl, _)), Some((vl, _))) => {
            if pl > vl {
                Criterion::PhotonBased
            } else {
                Criterion::VacuumBased
            }
        }
        (Some(_), None) => Criterion::PhotonBased,
        (None, Some(_)) => Criterion::VacuumBased,
        (None, None) => {
            if g2 < 0.5 {
                Criterion::FallbackG2Only
            } else {
                Criterion::NotApplicable
            }
        }
    };

    Ok(BoundReport {
        g2,
        mean_n: input.mean_n,
        p0: input.p0,
        eff_g2_vacuum: eff_vac,
        eff_g2_photon: eff_pho,
        spp_lower,
        spp_upper,
        smppr_lower: smppr,
        q_upper,
        p0_plus_p1_lower,
        set_m1: g2 < 0.5,
        set_m2: eff_pho.map(|e| e < 1.0),
        set_m3: input.mean_n.map(|n| n < 2.0),
        criterion_used: criterion,
        clamped,
    })
}

fn check_g2(g2: f64) -> Result<()> {
    if !g2.is_finite() || g2 < 0.0 {
        return Err(Error::Domain(format!(
            "correlation value must be finite and >= 0, got {g2}"
        )));
    }
    Ok(())
}
