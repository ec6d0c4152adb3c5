//! Truncated photon-number distributions and the exact observables derived
//! from them.
//!
//! A [`PhotonDistribution`] stores the Fock-diagonal probabilities `p_0..p_K`
//! together with `tail_bound`, an upper bound on the mass beyond the cutoff.
//! Observables treat the tail as zero for point values; the mass bookkeeping
//! of [`PhotonDistribution::projections`] attributes it to the multi-photon
//! projection `q`, where family constructors place it (the recorded residual
//! beyond the cutoff).

use serde::Serialize;

use crate::{Error, Result};

/// Entries in `[-NEG_CLAMP, 0)` are clamped to zero; anything more negative is
/// rejected. Absorbs round-trip serialization noise without hiding real errors.
const NEG_CLAMP: f64 = 1e-12;

/// Normalization slop accepted for renormalization when `tail_bound == 0`.
const NORM_SLOP: f64 = 1e-9;

/// Slop on the tail-mass budget check.
const TAIL_SLOP: f64 = 1e-12;

/// A photon-number distribution `p_0..p_K` with a bound on the truncated tail.
///
/// Invariants (enforced by [`PhotonDistribution::validate`] and preserved by
/// every operation):
/// - every `p_n` is finite and in `[0, 1]`,
/// - `sum(p_n) + tail_mass = 1` with `0 <= tail_mass <= tail_bound`,
/// - the probability vector is never empty (`K >= 0`; pure vacuum is legal).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonDistribution {
    probs: Vec<f64>,
    tail_bound: f64,
}

/// All exact observables of one distribution.
///
/// `g2`, `mandel_q` are `None` for vacuum (zero mean), and `n2`, `g2_multi`
/// are `None` when there is no resolvable multi-photon part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableSet {
    pub mean_n: f64,
    pub g2: Option<f64>,
    pub variance: f64,
    pub mandel_q: Option<f64>,
    pub p0: f64,
    pub p1: f64,
    pub q_multi: f64,
    pub n2: Option<f64>,
    pub g2_multi: Option<f64>,
}

impl PhotonDistribution {
    /// Validate raw probabilities into a distribution.
    ///
    /// Entries below `-1e-12` or non-finite are rejected; entries in
    /// `[-1e-12, 0)` are clamped to zero. With `tail_bound == 0` the sequence
    /// is renormalized when `|sum - 1| <= 1e-9`, otherwise rejected. With
    /// `tail_bound > 0` the deficit `1 - sum` must lie within the tail budget.
    pub fn validate(probs: &[f64], tail_bound: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NotADistribution(
                "probability vector must have at least one entry".into(),
            ));
        }
        if !tail_bound.is_finite() || tail_bound < 0.0 {
            return Err(Error::NotADistribution(format!(
                "tail_bound must be finite and >= 0, got {tail_bound}"
            )));
        }
        let mut cleaned = Vec::with_capacity(probs.len());
        for (n, &p) in probs.iter().enumerate() {
            if !p.is_finite() || !(-NEG_CLAMP..=1.0 + NEG_CLAMP).contains(&p) {
                return Err(Error::NotADistribution(format!(
                    "p_{n} = {p} outside [0, 1]"
                )));
            }
            cleaned.push(p.clamp(0.0, 1.0));
        }
        let sum: f64 = cleaned.iter().sum();
        if tail_bound == 0.0 {
            if (sum - 1.0).abs() > NORM_SLOP {
                return Err(Error::NotADistribution(format!(
                    "total mass {sum} deviates from 1 by more than {NORM_SLOP} with zero tail_bound"
                )));
            }
            for p in &mut cleaned {
                *p /= sum;
            }
        } else {
            let deficit = 1.0 - sum;
            if !(-TAIL_SLOP..=tail_bound + TAIL_SLOP).contains(&deficit) {
                return Err(Error::NotADistribution(format!(
                    "total mass {sum} inconsistent with tail_bound {tail_bound}"
                )));
            }
        }
        Ok(Self {
            probs: cleaned,
            tail_bound,
        })
    }

    /// Construct from already-consistent parts, skipping the user-input checks.
    /// Used by family constructors that produce exact weights by construction.
    pub(crate) fn from_parts_unchecked(probs: Vec<f64>, tail_bound: f64) -> Self {
        debug_assert!(!probs.is_empty());
        debug_assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)));
        debug_assert!(tail_bound >= 0.0);
        Self { probs, tail_bound }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Highest resolved Fock index `K`.
    pub fn cutoff(&self) -> usize {
        self.probs.len() - 1
    }

    /// Mean photon number `N = sum(n * p_n)`.
    pub fn mean_photon_number(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &p)| n as f64 * p)
            .sum()
    }

    /// Photon-number variance `(Delta N)^2`, clamped to be nonnegative.
    pub fn variance(&self) -> f64 {
        let mean = self.mean_photon_number();
        let second: f64 = self
            .probs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &p)| (n as f64) * (n as f64) * p)
            .sum();
        (second - mean * mean).max(0.0)
    }

    /// Zero-delay second-order correlation
    /// `g2 = sum(n(n-1) p_n) / N^2`, or `None` for vacuum (0/0).
    pub fn g2_zero_delay(&self) -> Option<f64> {
        let mean = self.mean_photon_number();
        if mean == 0.0 {
            return None;
        }
        let pairs: f64 = self
            .probs
            .iter()
            .enumerate()
            .skip(2)
            .map(|(n, &p)| (n as f64) * (n as f64 - 1.0) * p)
            .sum();
        Some(pairs / (mean * mean))
    }

    /// Mandel-Q parameter `(Delta N)^2 / N - 1`, or `None` for vacuum.
    ///
    /// Satisfies `N * g2 = N + Q` whenever `g2` is defined.
    pub fn mandel_q(&self) -> Option<f64> {
        let mean = self.mean_photon_number();
        if mean == 0.0 {
            return None;
        }
        Some(self.variance() / mean - 1.0)
    }

    /// Split of unity into vacuum, single-photon and multi-photon projections
    /// `(p0, p1, q)`.
    ///
    /// `q` is the resolved mass at `n >= 2` plus `tail_bound`: the residual
    /// beyond the cutoff is attributed to the multi-photon part, so
    /// `p0 + p1 + q = 1` whenever `tail_bound` is the exact residual (as set
    /// by the family constructors).
    pub fn projections(&self) -> (f64, f64, f64) {
        let p0 = self.probs[0];
        let p1 = self.probs.get(1).copied().unwrap_or(0.0);
        let q: f64 = self.probs.iter().skip(2).sum::<f64>() + self.tail_bound;
        (p0, p1, q)
    }

    /// Mean photon number and normalized pair correlation of the multi-photon
    /// part alone: `n2 = sum_{n>=2}(n p_n)/q2` and
    /// `g2_multi = sum_{n>=2}(n(n-1) p_n)/(q2 n2^2)` with `q2` the resolved
    /// mass at `n >= 2`. `None` when that mass is zero.
    ///
    /// For any distribution with a multi-photon part, `n2 >= 2` and
    /// `g2_multi >= 1/2`, both saturated by the two-photon Fock state.
    pub fn multi_photon_observables(&self) -> Option<(f64, f64)> {
        let q2: f64 = self.probs.iter().skip(2).sum();
        if q2 == 0.0 {
            return None;
        }
        let first: f64 = self
            .probs
            .iter()
            .enumerate()
            .skip(2)
            .map(|(n, &p)| n as f64 * p)
            .sum();
        let pairs: f64 = self
            .probs
            .iter()
            .enumerate()
            .skip(2)
            .map(|(n, &p)| (n as f64) * (n as f64 - 1.0) * p)
            .sum();
        let n2 = first / q2;
        let g2_multi = pairs / (q2 * n2 * n2);
        Some((n2, g2_multi))
    }

    /// Incoherently mix extra vacuum into the state:
    /// `p0 -> extra + (1-extra) p0`, `p_n -> (1-extra) p_n` for `n >= 1`.
    ///
    /// Leaves the SMPPR `p1/q` invariant, scales `N` by `(1-extra)` and `g2`
    /// by `1/(1-extra)`, so the product `N * g2` is unchanged.
    pub fn vacuum_mix(&self, extra_vacuum: f64) -> Self {
        assert!(
            (0.0..1.0).contains(&extra_vacuum),
            "extra_vacuum must be in [0, 1), got {extra_vacuum}"
        );
        let keep = 1.0 - extra_vacuum;
        let mut probs: Vec<f64> = self.probs.iter().map(|&p| keep * p).collect();
        probs[0] += extra_vacuum;
        Self {
            probs,
            tail_bound: keep * self.tail_bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN_2: f64 = core::f64::consts::LN_2;

    fn dist(probs: &[f64]) -> PhotonDistribution {
        PhotonDistribution::validate(probs, 0.0).unwrap()
    }

    #[test]
    fn validate_vacuum() {
        let d = dist(&[1.0]);
        assert_eq!(d.cutoff(), 0);
        assert_eq!(d.probs(), &[1.0]);
    }

    #[test]
    fn validate_two_level() {
        let d = dist(&[0.5, 0.5]);
        assert_eq!(d.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn validate_rejects_excess_mass() {
        assert!(matches!(
            PhotonDistribution::validate(&[0.5, 0.6], 0.0),
            Err(Error::NotADistribution(_))
        ));
    }

    #[test]
    fn validate_rejects_negative_mass() {
        assert!(PhotonDistribution::validate(&[1.1, -0.1], 0.0).is_err());
        assert!(PhotonDistribution::validate(&[0.5, 0.5, -1e-9], 0.0).is_err());
    }

    #[test]
    fn validate_clamps_tiny_negatives() {
        let d = PhotonDistribution::validate(&[0.5, 0.5, -1e-13], 0.0).unwrap();
        assert_eq!(d.probs()[2], 0.0);
    }

    #[test]
    fn validate_renormalizes_small_drift() {
        let d = PhotonDistribution::validate(&[0.5 + 2e-10, 0.5], 0.0).unwrap();
        let sum: f64 = d.probs().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validate_respects_tail_budget() {
        assert!(PhotonDistribution::validate(&[0.6, 0.3], 0.2).is_ok());
        assert!(PhotonDistribution::validate(&[0.6, 0.1], 0.2).is_err());
        assert!(PhotonDistribution::validate(&[1.0], -1.0).is_err());
    }

    #[test]
    fn validate_rejects_empty() {
        assert!(PhotonDistribution::validate(&[], 0.0).is_err());
    }

    #[test]
    fn mean_of_fock_one() {
        assert_eq!(dist(&[0.0, 1.0]).mean_photon_number(), 1.0);
    }

    #[test]
    fn mean_of_vacuum_two_mix() {
        assert!((dist(&[0.5, 0.0, 0.5]).mean_photon_number() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn g2_of_fock_two() {
        assert!((dist(&[0.0, 0.0, 1.0]).g2_zero_delay().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn g2_of_vacuum_is_undefined() {
        assert_eq!(dist(&[1.0]).g2_zero_delay(), None);
        assert_eq!(dist(&[1.0]).mandel_q(), None);
    }

    #[test]
    fn mandel_q_of_fock_one() {
        assert!((dist(&[0.0, 1.0]).mandel_q().unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn projections_direct() {
        let (p0, p1, q) = dist(&[0.2, 0.3, 0.5]).projections();
        assert_eq!((p0, p1, q), (0.2, 0.3, 0.5));
        let (p0, p1, q) = dist(&[0.0, 0.0, 1.0]).projections();
        assert_eq!((p0, p1, q), (0.0, 0.0, 1.0));
    }

    #[test]
    fn projections_attribute_tail_to_multi() {
        let d = PhotonDistribution::validate(&[0.4, 0.4, 0.1], 0.1).unwrap();
        let (p0, p1, q) = d.projections();
        assert!((p0 + p1 + q - 1.0).abs() < 1e-15);
        assert!((q - 0.2).abs() < 1e-15);
    }

    #[test]
    fn multi_photon_of_fock_two_saturates() {
        let (n2, g2m) = dist(&[0.0, 0.0, 1.0]).multi_photon_observables().unwrap();
        assert_eq!(n2, 2.0);
        assert_eq!(g2m, 0.5);
    }

    #[test]
    fn multi_photon_mixture() {
        let d = dist(&[0.0, 0.0, 0.5, 0.0, 0.0, 0.5]);
        let (n2, g2m) = d.multi_photon_observables().unwrap();
        assert!((n2 - 3.5).abs() < 1e-15);
        assert!((g2m - 11.0 / 12.25).abs() < 1e-15);
    }

    #[test]
    fn multi_photon_of_vacuum_is_undefined() {
        assert_eq!(dist(&[1.0]).multi_photon_observables(), None);
    }

    #[test]
    fn vacuum_mix_examples() {
        let mixed = dist(&[0.0, 1.0]).vacuum_mix(0.5);
        assert_eq!(mixed.probs(), &[0.5, 0.5]);
        let d = dist(&[0.1, 0.4, 0.3, 0.2]);
        assert_eq!(d.vacuum_mix(0.0), d);
    }

    #[test]
    fn vacuum_mix_preserves_smppr_and_product() {
        let d = dist(&[0.1, 0.4, 0.3, 0.2]);
        let m = d.vacuum_mix(0.3);
        let (_, p1a, qa) = d.projections();
        let (_, p1b, qb) = m.projections();
        assert!((p1a / qa - p1b / qb).abs() < 1e-12);
        let prod_a = d.mean_photon_number() * d.g2_zero_delay().unwrap();
        let prod_b = m.mean_photon_number() * m.g2_zero_delay().unwrap();
        assert!((prod_a - prod_b).abs() < 1e-12);
        assert!((m.mean_photon_number() - 0.7 * d.mean_photon_number()).abs() < 1e-12);
    }

    #[test]
    fn mandel_identity_links_g2() {
        // N * g2 = N + Q on a generic state.
        let d = dist(&[0.25, 0.25, 0.25, 0.15, 0.1]);
        let n = d.mean_photon_number();
        let g2 = d.g2_zero_delay().unwrap();
        let q = d.mandel_q().unwrap();
        assert!((n * g2 - (n + q)).abs() < 1e-12);
    }

    #[test]
    fn coherent_edge_constant_is_ln2() {
        // e^{-ln 2} = 1/2: the vacuum-criterion validity edge for Poissonian light.
        assert!(((-LN_2).exp() - 0.5).abs() < 1e-15);
    }
}
