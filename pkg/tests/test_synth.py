import json
import warnings

import numpy as np
import pytest

from conftest import SURROGATE, graph
from oracles import brute_force_triangles, random_connected_edges
from sbviz.balance import cycle_oracle, switching_balance_test, triangle_census
from sbviz.sgraph import is_connected, read_edge_list, serialize_edge_list, signed_laplacian
from sbviz.spectral import smallest_eigenpair
from sbviz.synth import (
    RNG_ID,
    GeneratorWarning,
    GenParams,
    generate,
    reshuffle_signs,
    shuffle_sidecar,
)


def _quiet(params, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GeneratorWarning)
        return generate(params, **kw)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=0, delta=0.5, nu=0.0),
        dict(n=10, delta=0.0, nu=0.0),
        dict(n=10, delta=1.5, nu=0.0),
        dict(n=10, delta=0.5, nu=-0.1),
        dict(n=10, delta=0.5, nu=1.1),
        dict(n=2, delta=1.0, nu=0.5),
        dict(n=10, delta=0.5, nu=0.0, seed=-1),
        dict(n=10, delta=0.5, nu=0.0, seed=2**64),
    ],
)
def test_params_validated(kwargs):
    with pytest.raises(ValueError):
        GenParams(**kwargs)


def test_balanced_example():
    out = generate(GenParams(30, 0.3, 0.0, seed=1))
    g = out.graph
    assert is_connected(g)
    assert g.density() <= 0.3
    assert out.delta_achieved == g.density()
    assert switching_balance_test(g).is_balanced
    assert smallest_eigenpair(signed_laplacian(g)).lambda_min <= 1e-8
    assert out.nu_achieved == 0.0 and out.flips == 0 and out.warnings == []


def test_fully_unbalanced_example():
    reached = 0
    for seed in range(20):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            out = generate(GenParams(30, 0.3, 1.0, seed=seed))
        total, unbalanced = triangle_census(out.graph)
        assert total > 0
        assert out.nu_achieved == unbalanced / total
        if out.capped:
            # the flip cap returns the closest state and says so
            assert out.flips == 50 * out.graph.edge_count
            assert out.nu_achieved < 1.0
            assert any("after the" in str(w.message) for w in caught)
        else:
            assert out.nu_achieved == 1.0 and not caught
            reached += 1
    assert reached >= 10


def test_same_seed_same_bytes():
    p = GenParams(40, 0.25, 0.4, seed=123)
    a, b = _quiet(p), _quiet(p)
    assert serialize_edge_list(a.graph) == serialize_edge_list(b.graph)
    assert a.sidecar() == b.sidecar()
    c = _quiet(GenParams(40, 0.25, 0.4, seed=124))
    assert serialize_edge_list(c.graph) != serialize_edge_list(a.graph)


def test_phase_two_never_disconnects():
    for seed in range(20):
        n = 6 + seed
        out = _quiet(GenParams(n, 0.15 + 0.02 * seed, 0.2, seed), check_steps=True)
        assert is_connected(out.graph)


def test_density_target():
    for seed in range(10):
        n, delta = 25, 0.2
        out = generate(GenParams(n, delta, 0.0, seed))
        pairs = n * (n - 1) // 2
        assert out.graph.edge_count == int(np.floor(delta * pairs))


def test_unreachable_density_warns():
    with pytest.warns(GeneratorWarning, match="spanning tree"):
        out = generate(GenParams(10, 0.1, 0.0, seed=0))
    assert out.graph.edge_count == 9
    assert out.delta_achieved == pytest.approx(0.2)
    assert any("density" in w for w in out.warnings)


@pytest.mark.filterwarnings("ignore:density:sbviz.synth.GeneratorWarning")
def test_unreachable_nu_warns():
    # a spanning tree has no triangles, so no flip candidate exists
    with pytest.warns(GeneratorWarning, match="achieved"):
        out = generate(GenParams(10, 0.1, 0.5, seed=0))
    assert out.nu_achieved == 0.0
    assert out.flips == 0


def test_stopping_rule_and_trace():
    for seed in range(40):
        nu = (0.2, 0.4, 0.6, 0.8, 1.0)[seed % 5]
        out = _quiet(GenParams(30, 0.3, nu, seed))
        trace = out.nu_trace
        assert len(trace) == out.flips
        if out.capped:
            continue
        assert trace and trace[-1] >= nu
        assert all(r < nu for r in trace[:-1])
        assert out.nu_achieved == trace[-1]
        total, unbalanced = brute_force_triangles(out.graph.node_count, out.graph.edges)
        assert out.nu_achieved == unbalanced / total


def test_balanced_outputs_pass_cycle_oracle():
    for seed in range(60):
        n = 3 + seed % 6
        out = _quiet(GenParams(n, 0.5 + 0.5 * (seed % 2), 0.0, seed))
        assert switching_balance_test(out.graph).is_balanced
        assert cycle_oracle(out.graph)


def test_sidecar_keys():
    out = generate(GenParams(12, 0.5, 0.0, seed=9))
    side = out.sidecar()
    assert list(side) == [
        "n",
        "delta_target",
        "delta_achieved",
        "nu_target",
        "nu_achieved",
        "seed",
        "rng_id",
    ]
    assert side["rng_id"] == RNG_ID
    assert side["seed"] == 9 and side["n"] == 12


def test_reshuffle_invariants():
    rng = np.random.default_rng(6)
    for seed in range(50):
        n = int(rng.integers(2, 40))
        g = graph(n, random_connected_edges(rng, n, 0.2, float(rng.random())))
        h = reshuffle_signs(g, seed)
        assert [(u, v) for u, v, _ in h.edges] == [(u, v) for u, v, _ in g.edges]
        assert (h.positive_count, h.negative_count) == (g.positive_count, g.negative_count)
        np.testing.assert_array_equal(h.degrees(), g.degrees())
        assert reshuffle_signs(g, seed) == h


def test_reshuffle_all_positive_unchanged():
    g = graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
    assert reshuffle_signs(g, 5) == g


def test_reshuffle_is_uniform_over_slots():
    # one negative sign among four slots should land in each slot about equally often
    g = graph(5, [(0, 1, -1), (1, 2, 1), (2, 3, 1), (3, 4, 1)])
    counts = np.zeros(4)
    for seed in range(4000):
        h = reshuffle_signs(g, seed)
        counts[[s for _, _, s in h.edges].index(-1)] += 1
    # chi-square with 3 dof; 16.27 is the 0.001 critical value
    expected = 1000.0
    assert ((counts - expected) ** 2 / expected).sum() < 16.27


def test_shuffle_sidecar():
    g = graph(3, [(0, 1, 1), (1, 2, -1)])
    assert shuffle_sidecar(g, 3) == {
        "nodes": 3,
        "edges": 2,
        "positive": 1,
        "negative": 1,
        "seed": 3,
        "rng_id": RNG_ID,
    }


def test_surrogate_reproduces():
    out = _quiet(GenParams(219, 0.021826, 0.05, seed=2019))
    assert serialize_edge_list(out.graph) == SURROGATE.read_text()
    side = SURROGATE.with_name(SURROGATE.name + ".json").read_text()
    assert out.sidecar() == json.loads(side)
    g = read_edge_list(SURROGATE)
    assert (g.node_count, g.edge_count) == (219, 521)
    assert is_connected(g)


def test_reshuffle_raises_lambda_on_surrogate():
    g = read_edge_list(SURROGATE)
    base = smallest_eigenpair(signed_laplacian(g)).lambda_min
    higher = sum(
        smallest_eigenpair(signed_laplacian(reshuffle_signs(g, seed))).lambda_min > base
        for seed in range(20)
    )
    assert higher >= 19
