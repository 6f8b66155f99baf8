import json
import random

import pytest

from descentkit import codec
from descentkit.descent import (SUITES, SuiteError, counterexample, dumps, instance_rng, recheck,
                                run_suite, theta_check)
from descentkit.complexes import CHAIN
from descentkit.generate import Grid, ProfileError, random_simplicial
from descentkit.simplicial import identity_smap, zero_smap


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes_a_few_instances(name):
    rep = run_suite(name, seed=7, instances=3)
    assert rep["ok"], rep["failures"][:1]
    assert rep["passed"] == 3


def test_reports_are_deterministic():
    a = dumps(run_suite("s5", seed=11, instances=4))
    b = dumps(run_suite("s5", seed=11, instances=4))
    assert a == b
    c = dumps(run_suite("s5", seed=12, instances=4))
    assert a != c


def test_instance_rng_is_stable():
    assert instance_rng("s3", 0, 1).random() == instance_rng("s3", 0, 1).random()
    assert instance_rng("s3", 0, 1).random() != instance_rng("s3", 0, 2).random()


def test_sabotaged_instance_is_caught_and_rechecked():
    s = SUITES["s7"]
    inst = s.build(instance_rng("s7", 0, 0), 3, 0)
    inst["label"] = not inst["label"]
    ok, detail = s.check(inst, 3, 2)
    assert not ok
    rep = {"suite": "s7", "axiom": s.axiom, "seed": 0, "truncation": 3, "max_degree": 2}
    ce = counterexample(rep, {"index": 0, "detail": detail, "instance": codec.encode(inst)})
    ce = json.loads(json.dumps(ce))
    assert recheck(ce) == (False, detail)
    ce["instance"] = codec.encode(s.build(instance_rng("s7", 0, 0), 3, 0))
    assert recheck(ce)[0]


def test_theta_on_identity_and_zero_grids():
    X = random_simplicial(random.Random(5), 3, CHAIN, hi=1, summands=1)
    i = identity_smap(X)
    grid = Grid((i, i), (i, i), (i, i), i, i, i, i, i, i)
    assert theta_check(grid) == (True, "ok")
    z = zero_smap(X, X)
    grid = Grid((z, z), (z, z), (z, z), z, z, z, z, z, z)
    assert theta_check(grid) == (True, "ok")


def test_noncommuting_grid_rejected():
    X = random_simplicial(random.Random(6), 3, CHAIN, hi=1, summands=1)
    i, z = identity_smap(X), zero_smap(X, X)
    grid = Grid((i, i), (i, i), (i, i), z, i, i, i, i, i)
    with pytest.raises(SuiteError):
        theta_check(grid)


def test_config_errors():
    with pytest.raises(SuiteError):
        run_suite("nope")
    with pytest.raises(ProfileError):
        run_suite("s3", instances=1, N=9)
    with pytest.raises(ProfileError):
        run_suite("s3", instances=1, N=3, Q=5)
