//! Constructors for the parametric state families used throughout the bound
//! comparisons: coherent (Poissonian, `g2 = 1`), thermal (geometric, `g2 = 2`),
//! Fock states, the quantum-dot-plus-laser-background mixture, and seeded
//! random states for the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fock::PhotonDistribution;
use crate::{Error, Result};

/// Default truncation cap used by the CLI; far below every test tolerance.
pub const DEFAULT_TAIL_CAP: f64 = 1e-14;

/// Hard ceiling on the truncation cutoff; generous for any desk-scale mean.
const MAX_CUTOFF: usize = 8192;

fn check_tail_cap(tail_cap: f64) {
    assert!(
        tail_cap > 0.0 && tail_cap <= 1e-6,
        "tail_cap must be in (0, 1e-6], got {tail_cap}"
    );
}

/// Accumulate weights from a term recurrence until the residual mass drops to
/// `tail_cap` (or `min_len` entries exist), returning `(probs, residual)`.
/// The residual is computed directly from the running sum, no asymptotics.
fn truncate_series(
    first: f64,
    next: impl Fn(usize, f64) -> f64,
    tail_cap: f64,
    min_len: usize,
) -> (Vec<f64>, f64) {
    let mut probs = vec![first];
    let mut sum = first;
    let mut term = first;
    let mut n = 0usize;
    while (1.0 - sum > tail_cap || probs.len() < min_len) && probs.len() < MAX_CUTOFF {
        term = next(n, term);
        n += 1;
        probs.push(term);
        sum += term;
    }
    (probs, (1.0 - sum).max(0.0))
}

/// Coherent state with the given mean photon number: Poissonian weights
/// `p_n = e^{-N} N^n / n!`, truncated so the residual mass is at most
/// `tail_cap` and recorded in `tail_bound`.
pub fn coherent(mean_photons: f64, tail_cap: f64) -> PhotonDistribution {
    assert!(
        mean_photons.is_finite() && mean_photons >= 0.0,
        "mean_photons must be finite and >= 0, got {mean_photons}"
    );
    check_tail_cap(tail_cap);
    let (probs, residual) = truncate_series(
        (-mean_photons).exp(),
        |n, term| term * mean_photons / (n as f64 + 1.0),
        tail_cap,
        1,
    );
    PhotonDistribution::from_parts_unchecked(probs, residual)
}

/// Thermal state with the given mean photon number: geometric weights
/// `p_n = N^n / (1+N)^{n+1}`, truncated as for [`coherent`].
pub fn thermal(mean_photons: f64, tail_cap: f64) -> PhotonDistribution {
    assert!(
        mean_photons.is_finite() && mean_photons >= 0.0,
        "mean_photons must be finite and >= 0, got {mean_photons}"
    );
    check_tail_cap(tail_cap);
    let ratio = mean_photons / (1.0 + mean_photons);
    let (probs, residual) =
        truncate_series(1.0 / (1.0 + mean_photons), |_, term| term * ratio, tail_cap, 1);
    PhotonDistribution::from_parts_unchecked(probs, residual)
}

/// Fock state `|n>`: a point mass with zero tail.
pub fn fock(n: u32) -> PhotonDistribution {
    let mut probs = vec![0.0; n as usize + 1];
    probs[n as usize] = 1.0;
    PhotonDistribution::from_parts_unchecked(probs, 0.0)
}

/// Quantum-dot emission model: an ideal single photon mixed with a coherent
/// laser background, `rho = p1_tilde |1><1| + (1 - p1_tilde) |alpha><alpha|`
/// with `N_alpha = |alpha|^2`.
///
/// The full single-photon projection of this state is
/// `p1 = p1_tilde + (1 - p1_tilde) N_alpha e^{-N_alpha}`.
pub fn qd_background(p1_tilde: f64, n_alpha: f64, tail_cap: f64) -> PhotonDistribution {
    assert!(
        (0.0..=1.0).contains(&p1_tilde),
        "p1_tilde must be in [0, 1], got {p1_tilde}"
    );
    assert!(
        n_alpha.is_finite() && n_alpha >= 0.0,
        "n_alpha must be finite and >= 0, got {n_alpha}"
    );
    check_tail_cap(tail_cap);
    let background = 1.0 - p1_tilde;
    // Truncate the Poisson part so the *scaled* residual meets the cap; keep
    // at least indices 0..=1 so the single-photon weight has a slot.
    let (poisson, residual) = truncate_series(
        (-n_alpha).exp(),
        |n, term| term * n_alpha / (n as f64 + 1.0),
        if background > 0.0 { tail_cap / background } else { 1.0 },
        2,
    );
    let mut probs: Vec<f64> = poisson.iter().map(|&p| background * p).collect();
    probs[1] += p1_tilde;
    PhotonDistribution::from_parts_unchecked(probs, background * residual)
}

/// Deterministic random distribution on `{0..max_n}`, uniform on the
/// probability simplex.
///
/// Generator, fixed for cross-implementation reproducibility: a `ChaCha8Rng`
/// keyed with `seed_from_u64(seed)` draws `max_n + 1` doubles `u` in `[0, 1)`;
/// each becomes a unit-rate exponential variate `-ln(1 - u)`; the vector is
/// normalized. `tail_bound` is zero.
pub fn random_truncated(max_n: u32, seed: u64) -> PhotonDistribution {
    assert!(max_n >= 1, "max_n must be >= 1, got {max_n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_simplex(max_n, &mut rng)
}

/// Simplex sampling body shared by [`random_truncated`] and the verification
/// suites (which derive one generator per trial).
pub(crate) fn random_simplex(max_n: u32, rng: &mut ChaCha8Rng) -> PhotonDistribution {
    let len = max_n as usize + 1;
    loop {
        let mut probs = Vec::with_capacity(len);
        let mut total = 0.0;
        for _ in 0..len {
            let e = -(1.0 - rng.gen::<f64>()).ln();
            probs.push(e);
            total += e;
        }
        if total > 0.0 {
            for p in &mut probs {
                *p /= total;
            }
            return PhotonDistribution::from_parts_unchecked(probs, 0.0);
        }
    }
}

/// Parametric descriptor of a state family, the JSON-facing counterpart of the
/// constructor functions.
///
/// Wire format: `{"kind": "coherent"|"thermal"|"fock"|"qd"|"random", "params": {...}}`
/// with params `{"mean_photons": x}`, `{"mean_photons": x}`, `{"n": k}`,
/// `{"p1_tilde": x, "n_alpha": y}`, `{"max_n": k, "seed": s}` respectively.
/// Omitted params default to zero (`max_n` to 6).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum FamilySpec {
    Coherent {
        #[serde(default)]
        mean_photons: f64,
    },
    Thermal {
        #[serde(default)]
        mean_photons: f64,
    },
    Fock {
        #[serde(default)]
        n: u32,
    },
    #[serde(rename = "qd")]
    QdBackground {
        #[serde(default)]
        p1_tilde: f64,
        #[serde(default)]
        n_alpha: f64,
    },
    #[serde(rename = "random")]
    RandomTruncated {
        #[serde(default = "default_max_n")]
        max_n: u32,
        #[serde(default)]
        seed: u64,
    },
}

fn default_max_n() -> u32 {
    6
}

impl FamilySpec {
    /// The swept parameter of the family: mean photon number for coherent and
    /// thermal, Fock index, quantum-dot `p1_tilde`, or the random seed.
    pub fn kind_name(&self) -> &'static str {
        match self {
            FamilySpec::Coherent { .. } => "coherent",
            FamilySpec::Thermal { .. } => "thermal",
            FamilySpec::Fock { .. } => "fock",
            FamilySpec::QdBackground { .. } => "qd",
            FamilySpec::RandomTruncated { .. } => "random",
        }
    }

    /// Replace the principal (swept) parameter with `x`, keeping the rest.
    pub fn with_principal(&self, x: f64) -> Self {
        match *self {
            FamilySpec::Coherent { .. } => FamilySpec::Coherent { mean_photons: x },
            FamilySpec::Thermal { .. } => FamilySpec::Thermal { mean_photons: x },
            FamilySpec::Fock { .. } => FamilySpec::Fock { n: x.round() as u32 },
            FamilySpec::QdBackground { n_alpha, .. } => FamilySpec::QdBackground {
                p1_tilde: x,
                n_alpha,
            },
            FamilySpec::RandomTruncated { max_n, .. } => FamilySpec::RandomTruncated {
                max_n,
                seed: x.round() as u64,
            },
        }
    }

    /// Validate the parameters and construct the distribution.
    pub fn build(&self, tail_cap: f64) -> Result<PhotonDistribution> {
        if !(tail_cap > 0.0 && tail_cap <= 1e-6) {
            return Err(Error::Domain(format!(
                "tail_cap must be in (0, 1e-6], got {tail_cap}"
            )));
        }
        match *self {
            FamilySpec::Coherent { mean_photons } => {
                if !mean_photons.is_finite() || mean_photons < 0.0 {
                    return Err(Error::Domain(format!(
                        "coherent mean_photons must be >= 0, got {mean_photons}"
                    )));
                }
                Ok(coherent(mean_photons, tail_cap))
            }
            FamilySpec::Thermal { mean_photons } => {
                if !mean_photons.is_finite() || mean_photons < 0.0 {
                    return Err(Error::Domain(format!(
                        "thermal mean_photons must be >= 0, got {mean_photons}"
                    )));
                }
                Ok(thermal(mean_photons, tail_cap))
            }
            FamilySpec::Fock { n } => Ok(fock(n)),
            FamilySpec::QdBackground { p1_tilde, n_alpha } => {
                if !(0.0..=1.0).contains(&p1_tilde) {
                    return Err(Error::Domain(format!(
                        "qd p1_tilde must be in [0, 1], got {p1_tilde}"
                    )));
                }
                if !n_alpha.is_finite() || n_alpha < 0.0 {
                    return Err(Error::Domain(format!(
                        "qd n_alpha must be >= 0, got {n_alpha}"
                    )));
                }
                Ok(qd_background(p1_tilde, n_alpha, tail_cap))
            }
            FamilySpec::RandomTruncated { max_n, seed } => {
                if max_n < 1 {
                    return Err(Error::Domain("random max_n must be >= 1".into()));
                }
                Ok(random_truncated(max_n, seed))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: f64 = 1e-14;
    const LN_2: f64 = core::f64::consts::LN_2;

    #[test]
    fn coherent_zero_is_vacuum() {
        let d = coherent(0.0, CAP);
        assert_eq!(d.probs(), &[1.0]);
        assert_eq!(d.tail_bound(), 0.0);
    }

    #[test]
    fn coherent_at_ln2_has_half_vacuum() {
        let d = coherent(LN_2, CAP);
        assert!((d.probs()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn coherent_g2_is_one() {
        let d = coherent(1.3, CAP);
        assert!((d.g2_zero_delay().unwrap() - 1.0).abs() < 1e-10);
        assert!((d.mean_photon_number() - 1.3).abs() < 1e-12);
    }

    #[test]
    fn coherent_mandel_q_is_zero() {
        for n in [0.05, 0.5, 1.0, 2.0] {
            let q = coherent(n, CAP).mandel_q().unwrap();
            assert!(q.abs() < 1e-10, "coherent Q = {q} at N = {n}");
        }
    }

    #[test]
    fn coherent_tail_bound_meets_cap() {
        let d = coherent(0.5, CAP);
        assert!(d.tail_bound() <= CAP);
        assert!((d.mean_photon_number() - 0.5).abs() < 1e-12);
        let sum: f64 = d.probs().iter().sum();
        assert!((sum + d.tail_bound() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_projections_are_poisson_weights() {
        let (p0, p1, q) = coherent(1.0, CAP).projections();
        let e_inv = (-1.0f64).exp();
        assert!((p0 - e_inv).abs() < 1e-12);
        assert!((p1 - e_inv).abs() < 1e-12);
        assert!((q - (1.0 - 2.0 * e_inv)).abs() < 1e-12);
    }

    #[test]
    fn thermal_zero_is_vacuum() {
        assert_eq!(thermal(0.0, CAP).probs(), &[1.0]);
    }

    #[test]
    fn thermal_g2_is_two() {
        let d = thermal(0.4, CAP);
        assert!((d.g2_zero_delay().unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn thermal_mean_matches() {
        let d = thermal(1.0 / 3.0, CAP);
        assert!((d.mean_photon_number() - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn thermal_mandel_q_equals_mean() {
        for n in [0.1, 0.5] {
            let q = thermal(n, CAP).mandel_q().unwrap();
            assert!((q - n).abs() < 1e-8, "thermal Q = {q} at N = {n}");
        }
    }

    #[test]
    fn fock_observables() {
        let one = fock(1);
        assert_eq!(one.g2_zero_delay(), Some(0.0));
        assert_eq!(one.mean_photon_number(), 1.0);
        let two = fock(2);
        assert!((two.g2_zero_delay().unwrap() - 0.5).abs() < 1e-15);
        assert!((two.mean_photon_number() * two.g2_zero_delay().unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fock(0).g2_zero_delay(), None);
    }

    #[test]
    fn qd_pure_limits() {
        assert_eq!(qd_background(1.0, 0.7, CAP).probs(), fock(1).probs());
        let qd = qd_background(0.0, 0.8, CAP);
        let coh = coherent(0.8, CAP);
        for (a, b) in qd.probs().iter().zip(coh.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn qd_spp_formula() {
        let d = qd_background(0.5, 0.2, CAP);
        let expected = 0.5 + 0.5 * 0.2 * (-0.2f64).exp();
        assert!((d.projections().1 - expected).abs() < 1e-12);
    }

    #[test]
    fn qd_mean_and_g2_mixture_formulas() {
        let (p1t, na) = (0.3, 0.6);
        let d = qd_background(p1t, na, CAP);
        let n = p1t + (1.0 - p1t) * na;
        assert!((d.mean_photon_number() - n).abs() < 1e-12);
        let g2 = (1.0 - p1t) * na * na / (n * n);
        assert!((d.g2_zero_delay().unwrap() - g2).abs() < 1e-10);
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let a = random_truncated(6, 42);
        let b = random_truncated(6, 42);
        assert_eq!(a, b);
        assert_ne!(a, random_truncated(6, 43));
        let sum: f64 = a.probs().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(a.probs().iter().all(|&p| (0.0..=1.0).contains(&p)));
        assert_eq!(a.probs().len(), 7);
    }

    #[test]
    fn random_simplex_is_uniform_in_expectation() {
        // Symmetric Dirichlet: E[p0] = 1/(max_n + 1).
        let trials = 100_000u64;
        let mean_p0: f64 = (0..trials)
            .map(|s| random_truncated(6, s).probs()[0])
            .sum::<f64>()
            / trials as f64;
        assert!(
            (mean_p0 - 1.0 / 7.0).abs() < 0.01,
            "empirical mean of p0 = {mean_p0}"
        );
    }

    #[test]
    fn family_spec_json_round_trip() {
        let spec = FamilySpec::QdBackground {
            p1_tilde: 0.5,
            n_alpha: 0.2,
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"kind":"qd","params":{"p1_tilde":0.5,"n_alpha":0.2}}"#);
        assert_eq!(serde_json::from_str::<FamilySpec>(&json).unwrap(), spec);
        let defaulted: FamilySpec =
            serde_json::from_str(r#"{"kind":"coherent","params":{}}"#).unwrap();
        assert_eq!(defaulted, FamilySpec::Coherent { mean_photons: 0.0 });
    }

    #[test]
    fn family_spec_build_validates() {
        let bad = FamilySpec::Coherent {
            mean_photons: -1.0,
        };
        assert!(bad.build(CAP).is_err());
        let spec = FamilySpec::Thermal { mean_photons: 0.2 };
        assert!(spec.build(0.5).is_err());
        assert!(spec.build(CAP).is_ok());
    }
}
