#!/usr/bin/env python3
"""Smoke test for the sppcert_py extension module.

Builds the cdylib if needed, copies it next to this script under the
importable name, then exercises the main types and operations.
"""

import math
import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def ensure_module() -> None:
    candidates = [
        ROOT / "target" / "release" / "libsppcert_py.so",
        ROOT / "target" / "release" / "libsppcert_py.dylib",
    ]
    lib = next((p for p in candidates if p.exists()), None)
    if lib is None:
        subprocess.run(
            ["cargo", "build", "-p", "sppcert-python", "--release"],
            cwd=ROOT,
            check=True,
        )
        lib = next(p for p in candidates if p.exists())
    target = Path(__file__).resolve().parent / "sppcert_py.so"
    if not target.exists() or lib.stat().st_mtime > target.stat().st_mtime:
        shutil.copy2(lib, target)
    sys.path.insert(0, str(target.parent))


ensure_module()
import sppcert_py as spp  # noqa: E402


def close(a, b, tol=1e-10):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def expect_value_error(fn):
    try:
        fn()
    except ValueError:
        return
    raise AssertionError("expected ValueError")


# State families and exact observables.
f2 = spp.fock(2)
close(f2.g2(), 0.5, 1e-15)
close(f2.multi_photon_observables()[0], 2.0, 1e-15)
close(f2.multi_photon_observables()[1], 0.5, 1e-15)
assert spp.fock(0).g2() is None

coh = spp.coherent(1.3)
close(coh.g2(), 1.0)
close(coh.mean_photon_number(), 1.3, 1e-12)
close(coh.mandel_q(), 0.0)

th = spp.thermal(0.4)
close(th.g2(), 2.0, 1e-8)

# Constructed distributions, the report dict, and exactness on {0,1,2}.
d = spp.PhotonDistribution([0.25, 0.5, 0.25])
obs = d.observables()
close(obs["mean_n"], 1.0, 1e-15)
close(obs["g2"], 0.5, 1e-15)
report = d.analyze()
close(report["spp_lower"], 0.5, 1e-12)
close(report["smppr_lower"], 2.0, 1e-12)
assert report["criterion_used"] in ("PhotonBased", "VacuumBased")

# Observables-only entry point.
report = spp.analyze_observables(0.4, mean_n=0.5)
close(report["spp_lower"], 0.4, 1e-12)
assert report["set_m2"] is True and report["p0"] is None
assert spp.analyze_observables(0.0, mean_n=1.0)["smppr_lower"] == math.inf
assert spp.analyze_observables(0.6)["criterion_used"] == "NotApplicable"

# Individual bounds.
close(spp.zubizarreta_lower_g2(1.5), 4.0 / 9.0, 1e-15)
close(spp.smppr_lower_vacuum(0.375), 2.0, 1e-12)
close(spp.smppr_lower_photon(0.5), 2.0, 1e-15)
close(spp.g2_threshold_for_smppr(2.0, "vacuum"), 0.375, 1e-15)
close(spp.spp_bounds_photon(0.5, 1.0)[0], 0.5, 1e-15)
assert spp.classify_sets(1.0, 0.8) == (False, True, True)
fb = spp.fallback_bounds_g2_only(0.25)
close(fb["smppr_lower"], 2.0, 1e-15)

# Error mapping.
expect_value_error(lambda: spp.PhotonDistribution([0.5, 0.6]))
expect_value_error(lambda: spp.smppr_lower_vacuum(0.6))
expect_value_error(lambda: spp.coherent(-1.0))
expect_value_error(lambda: spp.g2_threshold_for_smppr(1.0, "nope"))

# Quantum-dot scenario.
assert spp.background_limit_photon_criterion(0.0) == 1.0
assert spp.background_limit_g2_criterion(0.5) == 1.0
close(spp.solve_background_for_g2_target(0.5, 0.5), 1.0, 1e-12)
records = spp.figure5_sweep()
assert len(records) == 100
assert math.isnan(records[0]["g2"])
close(records[50]["n_alpha"], 1.0, 1e-12)
assert all(r["lower_photon"] <= r["exact_p1"] + 1e-12 for r in records)

# Vacuum mixing leaves the single-to-multi ratio alone.
mixed = d.vacuum_mix(0.3)
_, p1a, qa = d.projections()
_, p1b, qb = mixed.projections()
close(p1a / qa, p1b / qb, 1e-12)

# Verification suites.
rep = spp.run_soundness_suite(trials=2000, max_n=6, seed=42)
assert rep["violations"] == 0, rep
rep = spp.run_set_inclusion_suite(trials=2000, max_n=8, seed=1)
assert rep["violations"] == 0, rep
rep = spp.run_comparison_suite()
assert rep["violations"] == 0, rep

print("sppcert_py smoke test: OK")
