"""Smoke test for the aumcf_py extension module.

Build with `maturin develop -m crates/python/Cargo.toml`, or copy
target/release/libaumcf_py.so to aumcf_py.so somewhere on PYTHONPATH.
"""

import json
import math

import aumcf_py as am

ROWS = [
    ("a1", 2, 1, 1, 50), ("a1", 5, 1, 1, 50), ("a1", 10, 2, 1, 50),
    ("a2", 3, 1, 1, 60), ("a2", 8, 0, 1, 60), ("a3", 12, 0, 1, 55),
    ("b1", 3, 1, 2, 52), ("b1", 6, 1, 2, 52), ("b1", 10, 2, 2, 52),
    ("b2", 4, 1, 2, 61), ("b2", 8, 0, 2, 61), ("b3", 12, 0, 2, 58),
]


def toy(tau=12.0):
    ids, times, statuses, arms, age = zip(*ROWS)
    return am.Study.from_records(
        list(ids), [float(t) for t in times], list(statuses), list(arms), tau,
        covariates=[[float(a)] for a in age], covariate_names=["age"],
    )


def main():
    study = toy()
    assert study.sizes == (3, 3)
    theta, se, lo, hi = study.estimate(1)
    assert math.isclose(theta, 26 / 3, rel_tol=1e-12), theta
    assert lo <= theta <= hi

    res = study.contrast("diff")
    assert math.isclose(res.point, 1.0, abs_tol=1e-12), res
    assert 0.0 <= res.p_value <= 1.0
    assert isinstance(study.ghosh_lin_q(), float)

    infl = study.influence(1)
    assert len(infl) == 3 and abs(sum(infl)) < 1e-9

    aug = study.augmented()
    assert aug.adjusted.se <= aug.unadjusted.se + 1e-12

    assert study.mcf(1)[0] == (0.0, 0.0)
    assert study.bootstrap_se(replicates=200, seed=1) > 0

    cfg = am.published_scenario("icr", "null", 1.0)
    out = json.loads(am.simulate(cfg, replicates=20, seed=3))
    assert out["methods"][0]["replicates"] == 20
    again = json.loads(am.simulate(cfg, replicates=20, seed=3))
    assert out == again

    try:
        toy(tau=-1.0)
    except am.ValidationError:
        pass
    else:
        raise AssertionError("negative tau accepted")
    try:
        am.simulate("kind = 'weibull'")
    except am.ConfigError:
        pass
    else:
        raise AssertionError("bad config accepted")
    assert issubclass(am.DegenerateError, am.AumcfError)

    print(f"aumcf_py {am.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
