import json

import numpy as np

from aimon import checks
from aimon.perm import PartialPerm


def test_sampler_is_seeded():
    a = checks.random_partial_perms(6, 50, np.random.default_rng(7))
    b = checks.random_partial_perms(6, 50, np.random.default_rng(7))
    assert a == b
    assert all(isinstance(x, PartialPerm) and x.n == 6 for x in a)
    assert {x.rank for x in checks.random_partial_perms(5, 400, np.random.default_rng(0))} == set(range(6))


def test_completion_multiplicativity():
    for n in range(2, 6):
        assert checks.completion_multiplicativity_failures(n) == 0


def test_suite_subset_and_report_shape():
    s = checks.run_all(n_max=4, criteria={1, 5}, samples=100)
    assert s.claims and {c.criterion for c in s.claims} == {1, 5}
    doc = checks.report_dict(s)
    assert doc["schema"] == 1 and set(doc["criteria"]) == {str(k) for k in range(1, 9)}
    for c in doc["claims"]:
        assert set(c) == {"id", "criterion", "anchor", "n", "expected", "computed", "status"}
        assert c["status"] == "pass"
    order = [(c["criterion"], c["id"]) for c in doc["claims"]]
    assert order == sorted(order)


def test_concurrent_run_same_report():
    a = checks.report_json(checks.run_all(n_max=5, criteria={2, 3, 7}, samples=300))
    b = checks.report_json(checks.run_all(n_max=5, criteria={2, 3, 7}, samples=300, jobs=4))
    assert a == b
    assert "millis" not in a
    json.loads(a)


def test_timings_are_separate():
    s = checks.run_all(n_max=3, criteria={1}, samples=10)
    t = json.loads(checks.timings_json(s))
    assert set(t["millis"]) == {c.id for c in s.claims}


def test_budget_skips_are_reported():
    from aimon.perm import ResourceError
    s = checks.Suite()

    def boom():
        raise ResourceError("too big")

    s.add("x.y", 6, "anchor", 3, boom)
    s.add("x.z", 6, "anchor", 3, lambda: (1, 1))
    s.run()
    assert [c.status for c in s.claims] == ["skipped(budget)", "pass"]
