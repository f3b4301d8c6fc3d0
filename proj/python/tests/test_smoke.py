"""End-to-end smoke checks for the python bindings (no pytest required)."""

import math
import sys

import maxstab


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    dir2 = maxstab.Model.dirichlet([1.5, 3.0])
    assert dir2.family == "dirichlet" and dir2.d == 2

    v = dir2.ell([1.0, 1.0])
    assert 1.0 <= v["value"] <= 2.0 and v["kind"] in ("exact", "quadrature")

    hr = maxstab.Model.husler_reiss([[0.0, 1.0], [1.0, 0.0]])
    # closed form: ell(1,1) = 2 Phi(sqrt(gamma)/2)
    want = 2.0 * 0.5 * (1.0 + math.erf(0.5 / math.sqrt(2.0)))
    assert close(hr.ell([1.0, 1.0])["value"], want, 1e-12)

    spec = maxstab.Model.choquet(
        3,
        {"1": 0.1, "2": 0.1, "3": 0.1, "1,2": 0.3, "1,3": 0.3, "2,3": 0.3, "1,2,3": 0.3},
    )
    assert close(spec.theta("1,2")["value"], 1.4, 1e-12)
    assert close(spec.chi("1,2,3")["value"], 0.3, 1e-12)
    assert close(spec.tables()["theta"]["1,2,3"], 1.5, 1e-12)

    round_trip = maxstab.from_json(spec.to_json())
    assert close(round_trip.ell([1.0, 1.0, 1.0])["value"], 1.5, 1e-12)

    margin = spec.marginalize("2,3")
    assert margin.d == 2 and close(margin.theta("1,2")["value"], 1.4, 1e-12)

    verdict = maxstab.check_pqd(maxstab.Model.independent(3), spec, mc_n=20000, grid_m=8)
    assert verdict["outcome"] == "holds" and verdict["exit_code"] == 0
    assert len(verdict["components"]) == 2

    weak = maxstab.Model.dirichlet([0.8, 1.3])
    strong = maxstab.Model.dirichlet([1.6, 2.6])
    assert maxstab.check_pqd(weak, strong, grid_m=32)["outcome"] == "holds"

    est = maxstab.estimate_ell(dir2, [1.0, 1.0], n=200000, seed=3)
    exact = dir2.ell([1.0, 1.0])["value"]
    assert abs(est["mean"] - exact) <= 4.0 * est["stderr"]

    rows = maxstab.sample_maxstable(spec, 2000, seed=5)
    assert len(rows) == 2000 and len(rows[0]) == 3
    below = sum(1 for r in rows if max(r) <= 1.0) / len(rows)
    assert abs(below - math.exp(-1.5)) < 0.05

    surv = maxstab.min_survival(spec, [1.0, 1.0, 1.0], 1.0)["value"]
    assert 0.0 < surv < 1.0
    lvl10 = maxstab.return_level(spec, [1.0, 1.0, 1.0], "max", 10.0)
    lvl50 = maxstab.return_level(spec, [1.0, 1.0, 1.0], "max", 50.0)
    assert lvl50 > lvl10 > 0.0

    pts = maxstab.zonoid_envelope(maxstab.Model.dirichlet([1.0, 4.0]))
    assert pts[0] == (1.0, 0.0) and pts[-1] == (0.0, 1.0) and len(pts) > 500

    try:
        maxstab.Model.dirichlet([1.0, -2.0])
    except ValueError:
        pass
    else:
        raise AssertionError("negative shape accepted")

    print("python smoke: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
