//! Independent brute-force verification: exact quantities by direct summation
//! and randomized counterexample hunts for every claimed inequality.
//!
//! [`exact_quantities`] is deliberately self-contained — plain loops over the
//! probability vector, sharing no code with the bound formulas it is used to
//! check — so a bug in `bounds` cannot cancel against a bug here.
//!
//! Suites are deterministic: trial `i` of a run with seed `s` draws from a
//! `ChaCha8Rng` keyed with `seed_from_u64(s)` on stream `i`, so identical
//! `(trials, max_n, seed)` yield byte-identical reports and trials are
//! order-independent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::bounds::{self, AnalysisInput};
use crate::families::{random_simplex, FamilySpec, DEFAULT_TAIL_CAP};
use crate::fock::{ObservableSet, PhotonDistribution};

/// Margins below this are hard violations; margins in `(-SLACK, 0)` are
/// numerical noise, logged in `worst_margin` but not counted.
pub const VIOLATION_SLACK: f64 = 1e-10;

/// Summary of one verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub trials: u64,
    pub violations: u64,
    /// Most negative (or smallest) margin observed across every check;
    /// `"inf"` if no check applied.
    #[serde(serialize_with = "ser_extended")]
    pub worst_margin: f64,
    pub seed: u64,
}

/// Full context of one violated check, for diagnostics files.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationRecord {
    pub suite: String,
    pub trial: u64,
    pub check: String,
    pub margin: f64,
    pub probs: Vec<f64>,
    pub tail_bound: f64,
    pub detail: String,
}

/// A verification run: the JSON-facing report plus the dump of every
/// violation for the diagnostics file.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub report: VerificationReport,
    pub violations: Vec<ViolationRecord>,
}

/// One family swept over a parameter grid.
#[derive(Debug, Clone)]
pub struct FamilyGrid {
    pub base: FamilySpec,
    pub values: Vec<f64>,
}

fn ser_extended<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

/// Every observable of a distribution by direct summation.
pub fn exact_quantities(d: &PhotonDistribution) -> ObservableSet {
    let probs = d.probs();
    let mut mean = 0.0;
    let mut second = 0.0;
    let mut pairs = 0.0;
    let mut q2 = 0.0;
    let mut q2_mean = 0.0;
    let mut q2_pairs = 0.0;
    for (n, &p) in probs.iter().enumerate() {
        let nf = n as f64;
        mean += nf * p;
        second += nf * nf * p;
        pairs += nf * (nf - 1.0) * p;
        if n >= 2 {
            q2 += p;
            q2_mean += nf * p;
            q2_pairs += nf * (nf - 1.0) * p;
        }
    }
    let variance = (second - mean * mean).max(0.0);
    let (g2, mandel_q) = if mean == 0.0 {
        (None, None)
    } else {
        (Some(pairs / (mean * mean)), Some(variance / mean - 1.0))
    };
    let (n2, g2_multi) = if q2 == 0.0 {
        (None, None)
    } else {
        let n2 = q2_mean / q2;
        (Some(n2), Some(q2_pairs / (q2 * n2 * n2)))
    };
    ObservableSet {
        mean_n: mean,
        g2,
        variance,
        mandel_q,
        p0: probs[0],
        p1: probs.get(1).copied().unwrap_or(0.0),
        q_multi: q2 + d.tail_bound(),
        n2,
        g2_multi,
    }
}

struct Recorder {
    suite: &'static str,
    seed: u64,
    trials: u64,
    violations: Vec<ViolationRecord>,
    worst_margin: f64,
}

impl Recorder {
    fn new(suite: &'static str, seed: u64) -> Self {
        Recorder {
            suite,
            seed,
            trials: 0,
            violations: Vec::new(),
            worst_margin: f64::INFINITY,
        }
    }

    /// Record one inequality margin (how much it holds by; negative means
    /// violated). NaN counts as a violation.
    fn check(
        &mut self,
        trial: u64,
        name: &str,
        margin: f64,
        d: &PhotonDistribution,
        detail: impl FnOnce() -> String,
    ) {
        self.worst_margin = self.worst_margin.min(margin);
        if margin.is_nan() || margin < -VIOLATION_SLACK {
            self.violations.push(ViolationRecord {
                suite: self.suite.to_string(),
                trial,
                check: name.to_string(),
                margin,
                probs: d.probs().to_vec(),
                tail_bound: d.tail_bound(),
                detail: detail(),
            });
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            report: VerificationReport {
                suite: self.suite.to_string(),
                trials: self.trials,
                violations: self.violations.len() as u64,
                worst_margin: self.worst_margin,
                seed: self.seed,
            },
            violations: self.violations,
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Check that every reported bound brackets its exact counterpart on random
/// states: SPP lower/upper, SMPPR lower, multi-photon mass upper, `p0 + p1`
/// lower, and the floor bound on `g2` itself.
///
/// With `max_n <= 2` the photon-based SPP and SMPPR lower bounds must not
/// merely bracket but *equal* the exact values, and that is checked too.
pub fn run_soundness_suite(trials: u64, max_n: u32, seed: u64) -> SuiteOutcome {
    assert!(trials >= 1 && max_n >= 1);
    let mut rec = Recorder::new("soundness", seed);
    rec.trials = trials;
    let exactness = max_n <= 2;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let d = random_simplex(max_n, &mut rng);
        let obs = exact_quantities(&d);
        let Some(g2) = obs.g2 else { continue };
        let report = bounds::analyze(&AnalysisInput::from(&obs)).expect("observables in range");
        let detail = |what: &str, bound: f64| {
            let what = what.to_string();
            move || {
                format!(
                    "{what}: bound {bound}, N {}, g2 {g2}, p0 {}, p1 {}, q {}",
                    obs.mean_n, obs.p0, obs.p1, obs.q_multi
                )
            }
        };

        rec.check(
            trial,
            "spp_lower",
            obs.p1 - report.spp_lower,
            &d,
            detail("spp lower", report.spp_lower),
        );
        rec.check(
            trial,
            "spp_upper",
            report.spp_upper - obs.p1,
            &d,
            detail("spp upper", report.spp_upper),
        );
        if let Some(lower) = report.smppr_lower {
            if obs.q_multi > 0.0 {
                let ratio = obs.p1 / obs.q_multi;
                rec.check(
                    trial,
                    "smppr_lower",
                    ratio - lower,
                    &d,
                    detail("smppr lower", lower),
                );
            }
        }
        if let Some(q_upper) = report.q_upper {
            rec.check(
                trial,
                "q_upper",
                q_upper - obs.q_multi,
                &d,
                detail("q upper", q_upper),
            );
        }
        if let Some(lower) = report.p0_plus_p1_lower {
            rec.check(
                trial,
                "p0_plus_p1_lower",
                obs.p0 + obs.p1 - lower,
                &d,
                detail("p0+p1 lower", lower),
            );
        }
        if obs.mean_n > 0.0 {
            let floor_bound = bounds::zubizarreta_lower_g2(obs.mean_n).expect("mean > 0");
            rec.check(
                trial,
                "g2_floor",
                g2 - floor_bound,
                &d,
                detail("g2 floor", floor_bound),
            );
        }
        if exactness {
            rec.check(
                trial,
                "spp_lower_exact",
                -(report.spp_lower - obs.p1).abs(),
                &d,
                detail("spp exactness", report.spp_lower),
            );
            if let Some(lower) = report.smppr_lower {
                if obs.q_multi > 0.0 && lower.is_finite() {
                    rec.check(
                        trial,
                        "smppr_lower_exact",
                        -(lower - obs.p1 / obs.q_multi).abs(),
                        &d,
                        detail("smppr exactness", lower),
                    );
                }
            }
        }
    }
    rec.finish()
}

/// Check the nested set structure on random states: `g2 < 1/2` implies
/// `N g2 < 1` implies `N < 2`, and no state has `N g2 >= 1` while
/// `(1 - p0) g2 < 1/2`.
pub fn run_set_inclusion_suite(trials: u64, max_n: u32, seed: u64) -> SuiteOutcome {
    assert!(trials >= 1 && max_n >= 1);
    let mut rec = Recorder::new("set-inclusion", seed);
    rec.trials = trials;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let d = random_simplex(max_n, &mut rng);
        let obs = exact_quantities(&d);
        let Some(g2) = obs.g2 else { continue };
        let eff_photon = obs.mean_n * g2;
        let eff_vacuum = (1.0 - obs.p0) * g2;
        let detail = move || {
            format!("g2 {g2}, N·g2 {eff_photon}, (1-p0)·g2 {eff_vacuum}")
        };
        if g2 < 0.5 {
            rec.check(trial, "m1_implies_m2", 1.0 - eff_photon, &d, detail);
        } else if eff_photon < 1.0 {
            rec.check(trial, "m2_implies_m3", 2.0 - obs.mean_n, &d, detail);
        } else {
            // No state combines an unusable photon criterion with a usable
            // vacuum criterion.
            rec.check(trial, "no_gn_high_g0_low", eff_vacuum - 0.5, &d, detail);
        }
        if g2 < 0.5 && eff_photon < 1.0 {
            rec.check(trial, "m2_implies_m3", 2.0 - obs.mean_n, &d, detail);
        }
    }
    rec.finish()
}

/// Check hardness of the floor bound on `g2`: for each mean `N` the two-level
/// mixture of `|floor(N)>` and `|floor(N)+1>` with that mean has `g2` exactly
/// on the bound.
pub fn run_saturation_suite(n_grid: &[f64]) -> SuiteOutcome {
    let mut rec = Recorder::new("saturation", 0);
    rec.trials = n_grid.len() as u64;
    for (i, &n) in n_grid.iter().enumerate() {
        assert!(n > 0.0, "saturation grid values must be > 0");
        let d = saturating_two_level(n);
        let obs = exact_quantities(&d);
        let bound = bounds::zubizarreta_lower_g2(n).expect("n > 0");
        let g2 = obs.g2.unwrap_or(0.0);
        rec.check(
            i as u64,
            "mean_reconstruction",
            -(obs.mean_n - n).abs(),
            &d,
            || format!("constructed mean {} for target {n}", obs.mean_n),
        );
        rec.check(i as u64, "saturation", -(g2 - bound).abs(), &d, || {
            format!("g2 {g2} vs floor bound {bound} at N = {n}")
        });
    }
    rec.finish()
}

/// The two-level mixture of neighboring Fock states with mean `n`, the state
/// that saturates the floor bound.
pub fn saturating_two_level(n: f64) -> PhotonDistribution {
    assert!(n > 0.0 && n.is_finite());
    let m = n.floor();
    let mut probs = vec![0.0; m as usize + 2];
    probs[m as usize] = m + 1.0 - n;
    probs[m as usize + 1] = n - m;
    PhotonDistribution::validate(&probs, 0.0).expect("two-level weights form a distribution")
}

/// Compare the two criteria along family grids: (a) the photon-based SMPPR
/// lower bound dominates the vacuum-based one, (b) `1 - p0 <= N` so the
/// vacuum-based SPP upper bound dominates, (c) at low excitation
/// (`N <= 0.1`) the vacuum-based SPP lower bound dominates.
pub fn run_comparison_suite(grids: &[FamilyGrid]) -> SuiteOutcome {
    let mut rec = Recorder::new("comparison", 0);
    let mut trial = 0u64;
    for grid in grids {
        for &x in &grid.values {
            trial += 1;
            let d = grid
                .base
                .with_principal(x)
                .build(DEFAULT_TAIL_CAP)
                .expect("family grid within validity range");
            let obs = exact_quantities(&d);
            let Some(g2) = obs.g2 else { continue };
            let n = obs.mean_n;
            let p0 = obs.p0;
            let kind = grid.base.kind_name();
            rec.check(trial - 1, "upper_vacuum_dominates", n - (1.0 - p0), &d, || {
                format!("{kind} at {x}: N {n}, 1-p0 {}", 1.0 - p0)
            });
            if g2 > 0.0 {
                let eff_vac = (1.0 - p0) * g2;
                let eff_pho = n * g2;
                if eff_vac < 0.5 && eff_pho <= 1.0 {
                    let lv = bounds::smppr_lower_vacuum(eff_vac).expect("in range");
                    let lp = bounds::smppr_lower_photon(eff_pho).expect("in range");
                    rec.check(trial - 1, "smppr_photon_dominates", lp - lv, &d, || {
                        format!("{kind} at {x}: photon {lp}, vacuum {lv}")
                    });
                }
            }
            if n <= 0.1 {
                let (lv, _) = bounds::spp_bounds_vacuum(g2, p0);
                let (lp, _) = bounds::spp_bounds_photon(g2, n);
                rec.check(trial - 1, "low_n_vacuum_lower_dominates", lv - lp, &d, || {
                    format!("{kind} at {x}: vacuum lower {lv}, photon lower {lp}")
                });
            }
        }
    }
    rec.trials = trial;
    rec.finish()
}

/// The coherent and thermal figure grids, the default input of
/// [`run_comparison_suite`]: `N` in `(0, 1]` step 0.005 and `(0, 0.5]` step
/// 0.0025 respectively.
pub fn default_comparison_grids() -> Vec<FamilyGrid> {
    vec![
        FamilyGrid {
            base: FamilySpec::Coherent { mean_photons: 0.0 },
            values: (1..=200).map(|k| k as f64 * 0.005).collect(),
        },
        FamilyGrid {
            base: FamilySpec::Thermal { mean_photons: 0.0 },
            values: (1..=200).map(|k| k as f64 * 0.0025).collect(),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{coherent, fock, random_truncated};

    #[test]
    fn exact_quantities_direct_sums() {
        let d = PhotonDistribution::validate(&[0.25, 0.5, 0.25], 0.0).unwrap();
        let obs = exact_quantities(&d);
        assert!((obs.mean_n - 1.0).abs() < 1e-15);
        assert!((obs.g2.unwrap() - 0.5).abs() < 1e-15);
        assert!((obs.p1 - 0.5).abs() < 1e-15);
        assert!((obs.q_multi - 0.25).abs() < 1e-15);
    }

    #[test]
    fn exact_quantities_fock_three() {
        let obs = exact_quantities(&fock(3));
        assert_eq!(obs.mean_n, 3.0);
        assert!((obs.g2.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(obs.n2, Some(3.0));
        assert!((obs.g2_multi.unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exact_quantities_vacuum() {
        let obs = exact_quantities(&fock(0));
        assert_eq!(obs.mean_n, 0.0);
        assert_eq!(obs.g2, None);
        assert_eq!(obs.mandel_q, None);
        assert_eq!(obs.n2, None);
        assert_eq!(obs.p0, 1.0);
    }

    #[test]
    fn exact_quantities_agree_with_fock_methods() {
        // Two independent evaluation routes for the same observables.
        for seed in 0..50 {
            let d = random_truncated(7, seed);
            let obs = exact_quantities(&d);
            assert!((obs.mean_n - d.mean_photon_number()).abs() < 1e-14);
            assert!((obs.g2.unwrap() - d.g2_zero_delay().unwrap()).abs() < 1e-12);
            assert!((obs.mandel_q.unwrap() - d.mandel_q().unwrap()).abs() < 1e-12);
            let (p0, p1, q) = d.projections();
            assert!((obs.p0 - p0).abs() < 1e-15);
            assert!((obs.p1 - p1).abs() < 1e-15);
            assert!((obs.q_multi - q).abs() < 1e-15);
            let (n2, g2m) = d.multi_photon_observables().unwrap();
            assert!((obs.n2.unwrap() - n2).abs() < 1e-12);
            assert!((obs.g2_multi.unwrap() - g2m).abs() < 1e-12);
        }
    }

    #[test]
    fn soundness_suite_clean_on_small_run() {
        let outcome = run_soundness_suite(2000, 6, 42);
        assert_eq!(outcome.report.violations, 0);
        assert!(outcome.report.worst_margin > -VIOLATION_SLACK);
        assert_eq!(outcome.report.trials, 2000);
    }

    #[test]
    fn soundness_suite_exact_for_two_photon_support() {
        let outcome = run_soundness_suite(2000, 2, 7);
        assert_eq!(outcome.report.violations, 0);
    }

    #[test]
    fn soundness_suite_trivial_when_no_multiphoton() {
        let outcome = run_soundness_suite(1, 1, 5);
        assert_eq!(outcome.report.violations, 0);
    }

    #[test]
    fn set_inclusion_suite_clean_on_small_run() {
        let outcome = run_set_inclusion_suite(2000, 8, 1);
        assert_eq!(outcome.report.violations, 0);
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_soundness_suite(500, 6, 9);
        let b = run_soundness_suite(500, 6, 9);
        assert_eq!(a.report, b.report);
        assert_eq!(
            serde_json::to_string(&a.report).unwrap(),
            serde_json::to_string(&b.report).unwrap()
        );
    }

    #[test]
    fn saturation_examples() {
        let d = saturating_two_level(1.5);
        assert_eq!(d.probs(), &[0.0, 0.5, 0.5]);
        assert!((exact_quantities(&d).g2.unwrap() - 4.0 / 9.0).abs() < 1e-12);
        let d = saturating_two_level(2.0);
        assert!((exact_quantities(&d).g2.unwrap() - 0.5).abs() < 1e-12);
        let d = saturating_two_level(0.5);
        assert_eq!(exact_quantities(&d).g2, Some(0.0));
        let outcome = run_saturation_suite(&[0.5, 1.0, 1.5, 2.0, 3.25, 7.99]);
        assert_eq!(outcome.report.violations, 0);
    }

    #[test]
    fn comparison_suite_clean_on_default_grids() {
        let outcome = run_comparison_suite(&default_comparison_grids());
        assert_eq!(outcome.report.violations, 0);
        assert_eq!(outcome.report.trials, 400);
    }

    #[test]
    fn comparison_suite_skips_degenerate_families() {
        let grids = vec![FamilyGrid {
            base: FamilySpec::Fock { n: 1 },
            values: vec![1.0],
        }];
        let outcome = run_comparison_suite(&grids);
        assert_eq!(outcome.report.violations, 0);
    }

    #[test]
    fn membership_edges_on_families() {
        // Coherent: photon criterion applies up to N = 1, set M3 up to N = 2.
        for (n, expect) in [
            (0.8, (false, true, true)),
            (1.5, (false, false, true)),
            (2.5, (false, false, false)),
        ] {
            let obs = exact_quantities(&coherent(n, DEFAULT_TAIL_CAP));
            let got = bounds::classify_sets(obs.g2.unwrap(), obs.mean_n);
            assert_eq!(got, expect, "coherent N = {n}");
        }
        // Thermal: photon criterion applies up to N = 1/2.
        let obs = exact_quantities(&crate::families::thermal(0.45, DEFAULT_TAIL_CAP));
        assert!(obs.mean_n * obs.g2.unwrap() < 1.0);
        let obs = exact_quantities(&crate::families::thermal(0.55, DEFAULT_TAIL_CAP));
        assert!(obs.mean_n * obs.g2.unwrap() > 1.0);
    }

    #[test]
    fn violation_machinery_reports_broken_bounds() {
        // A deliberately wrong margin must be recorded and serialized.
        let mut rec = Recorder::new("soundness", 0);
        rec.trials = 1;
        let d = fock(2);
        rec.check(0, "spp_lower", -1.0, &d, || "forced".into());
        let outcome = rec.finish();
        assert_eq!(outcome.report.violations, 1);
        assert_eq!(outcome.violations[0].check, "spp_lower");
        assert_eq!(outcome.violations[0].probs, vec![0.0, 0.0, 1.0]);
        assert_eq!(outcome.report.worst_margin, -1.0);
    }
}
