"""Backend equivalence: numba kernels, numpy fallback and a plain-Python reference."""
import itertools
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from wmaxsol import ConstraintLanguage, Domain, Instance, Relation, is_feasible
from wmaxsol import _jit
from wmaxsol.algebra import is_polymorphism, max_op, min_op
from wmaxsol.algebra.ops import apply_componentwise
from wmaxsol.sampling import random_domain, random_instance, random_relation, rng_for
from wmaxsol.solve import Status, brute_force, enumerate_solutions

BACKENDS = ["numpy"] + (["numba"] if _jit.HAVE_NUMBA else [])


def reference(inst):
    """Lexicographically largest optimum by direct enumeration."""
    best = None
    for vals in itertools.product(inst.domain.elements, repeat=inst.n_vars):
        if is_feasible(inst, vals):
            m = sum(w * x for w, x in zip(inst.weights, vals))
            if best is None or (m, vals) > best:
                best = (m, vals)
    return best


def sampled_instance(seed):
    rng = rng_for(seed)
    D = random_domain(rng)
    rels = {f"R{i}": random_relation(rng, D, rng.randint(1, 3), rng.randint(0, 12)) for i in range(3)}
    return random_instance(rng, ConstraintLanguage(D, rels), rng.randint(0, 6), rng.randint(0, 6))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_brute_force_backends_agree_with_reference(seed):
    inst = sampled_instance(seed)
    want = reference(inst)
    for backend in BACKENDS:
        res = brute_force(inst, backend=backend)
        if want is None:
            assert res.status is Status.INFEASIBLE
        else:
            assert res.measure == want[0]
            assert tuple(res.assignment[v] for v in inst.variables) == want[1]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 5))
def test_parallel_matches_sequential(seed, jobs):
    inst = sampled_instance(seed)
    seq = brute_force(inst)
    par = brute_force(inst, jobs=jobs)
    assert (seq.status, seq.measure, seq.assignment) == (par.status, par.measure, par.assignment)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32))
def test_solution_enumeration_backends(seed):
    inst = sampled_instance(seed)
    want = [v for v in itertools.product(inst.domain.elements, repeat=inst.n_vars) if is_feasible(inst, v)]
    for backend in BACKENDS:
        assert [tuple(s) for s in enumerate_solutions(inst, backend=backend)] == want


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_polymorphism_backends_agree_with_definition(seed):
    rng = rng_for(seed)
    D = random_domain(rng)
    R = random_relation(rng, D, rng.randint(1, 3), rng.randint(1, 10))
    for f in (max_op(D), min_op(D)):
        want = all(apply_componentwise(f, ts) in R for ts in itertools.product(R.tuples, repeat=2))
        for backend in BACKENDS:
            assert is_polymorphism(f, R, backend=backend) == want


def test_huge_weights_use_exact_path():
    D = Domain.range(3)
    inst = Instance(ConstraintLanguage(D), ["x", "y"], [2**64 - 1, 2**63])
    res = brute_force(inst)
    assert res.measure == 2 * (2**64 - 1) + 2 * 2**63


def test_empty_instance():
    inst = Instance(ConstraintLanguage(Domain.range(2)), [], [])
    res = brute_force(inst)
    assert res.status is Status.OPTIMAL and res.measure == 0


def test_unknown_backend():
    inst = sampled_instance(1)
    with pytest.raises(ValueError):
        brute_force(inst, backend="fortran")


def test_env_flag_selects_numpy():
    env = dict(os.environ, WMAXSOL_DISABLE_JIT="1")
    out = subprocess.run(
        [sys.executable, "-c", "from wmaxsol import _jit; print(_jit.USE_NUMBA)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "False"
