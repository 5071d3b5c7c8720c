"""Smoke test for the `sul` Python extension.

Build and install first:  pip install --no-build-isolation -e crates/python
Then run:                 python python/smoke_test.py
"""

import json
import math
import sys

import sul


def check(name, ok, detail=""):
    print(f"{'ok  ' if ok else 'FAIL'} {name} {detail}")
    return ok


def main():
    results = []

    rep = json.loads(sul.bounds(-1, 8))
    results.append(check("bounds s=-1 d=8 sharp", abs(rep["sharp"] - math.sqrt(2)) < 1e-15, f"lower={rep['lower']:.6f}"))
    results.append(check("schema version", rep["schema_version"] == sul.SCHEMA_VERSION))

    analytic, numeric = sul.gaussian_upper(1, 12)
    results.append(check("gaussian witness d=12", math.sqrt(2) <= numeric <= analytic <= 1.57, f"{numeric:.6f} <= {analytic:.6f}"))

    g = json.dumps({"kind": "gaussian", "d": 2, "ell": 0, "harmonic_kind": "one", "terms": [[1.0, 1.0]], "schema_version": 1})
    results.append(check("single gaussian radius", sul.radius(g) == 0.0))
    results.append(check("gaussian integral", abs(sul.integral(g) - 1.0) < 1e-14))

    h = json.dumps({"kind": "gaussian", "d": 8, "ell": 2, "harmonic_kind": "coordinate_product", "terms": [[1.0, 1.0]]})
    lifted, sign_out = sul.lift(h, 1)
    results.append(check("lift x1x2 from d=8", json.loads(lifted)["d"] == 12 and sign_out == -1))

    results.append(check("sign law", [sul.sign_law(1, l) for l in range(4)] == [1, -1, -1, 1]))

    opt = json.loads(sul.optimize(-1, 1, n=20))
    results.append(check("optimize s=-1 d=1", 1.0 - 1e-3 <= opt["r_upper"] <= 1.01, f"r_upper={opt['r_upper']:.7f}"))

    suites = json.loads(sul.verify("sign-law"))["data"]
    results.append(check("sign-law suite", all(s["passed"] for s in suites)))

    try:
        sul.bounds(1, 3, gamma=-5.0)
        results.append(check("invalid weight raises", False))
    except ValueError as e:
        results.append(check("invalid weight raises", True, f"({e})"))

    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
