"""Column entropies, the width bound, and the graph certificate."""

import json
import math

import numpy as np
import pytest

from conftest import random_connected_graphs
from mdim.entropy import (
    certify_md_lower_bound,
    column_entropy,
    entropic_width_bound,
    vertex_distance_entropy,
)
from mdim.errors import (
    CertificateInapplicableError,
    ConnectivityError,
    ParameterError,
)
from mdim.exact import exact_md
from mdim.graph import (
    Graph,
    complete_graph,
    distance_matrix,
    path_graph,
    star_graph,
)


def test_column_entropy_examples():
    assert column_entropy([0, 1, 2, 3]).entropy == pytest.approx(math.log(4), abs=1e-12)
    assert column_entropy([1, 1, 1, 1]).entropy == 0.0
    assert column_entropy([0, 1, 1, 2]).entropy == pytest.approx(
        1.5 * math.log(2), abs=1e-12
    )
    profile = column_entropy([0, 1, 1, 2])
    assert profile.frequencies == {0: 1, 1: 2, 2: 1}
    assert profile.total == 4
    with pytest.raises(ParameterError):
        column_entropy([])


def test_width_bound_examples():
    assert entropic_width_bound([[0], [1], [2], [3]]) == pytest.approx(1.0, abs=1e-12)
    m = [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert entropic_width_bound(m) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(CertificateInapplicableError):
        entropic_width_bound([[0, 1], [0, 1], [1, 0]])


def test_width_bound_random_matrices():
    # the inequality m * H_max >= ln n on distinct-row matrices
    rng = np.random.default_rng(41)
    done = 0
    while done < 1000:
        n = int(rng.integers(2, 65))
        m = int(rng.integers(1, 33))
        alphabet = int(rng.integers(2, 9))
        a = rng.integers(0, alphabet, size=(n, m))
        if np.unique(a, axis=0).shape[0] != n:
            continue  # rejection-sample distinct rows
        bound = entropic_width_bound(a)
        assert bound <= m + 1e-9
        done += 1


def test_certify_path_and_complete_and_star():
    cert = certify_md_lower_bound(path_graph(4))
    assert cert.h_max == pytest.approx(math.log(4), abs=1e-12)
    assert cert.lower_bound == 1
    assert exact_md(path_graph(4)) == 1

    cert = certify_md_lower_bound(complete_graph(4))
    expected_h = 0.25 * math.log(4) + 0.75 * math.log(4 / 3)
    assert cert.h_max == pytest.approx(expected_h, abs=1e-12)
    assert cert.bound_real == pytest.approx(math.log(4) / expected_h, abs=1e-12)
    assert cert.lower_bound == 3
    assert exact_md(complete_graph(4)) == 3

    cert = certify_md_lower_bound(star_graph(3))
    assert cert.h_max == pytest.approx(1.5 * math.log(2), abs=1e-12)
    assert cert.lower_bound == 2
    assert exact_md(star_graph(3)) == 2


def test_certify_rejects_disconnected():
    with pytest.raises(ConnectivityError):
        certify_md_lower_bound(Graph.from_edges(4, [0, 2], [1, 3]))


def test_certificate_soundness_small_graphs():
    # the central property: certified bound never exceeds the true value
    for g in random_connected_graphs(seed=99, count=500, n_lo=2, n_hi=7):
        cert = certify_md_lower_bound(g)
        assert cert.lower_bound <= exact_md(g)


def test_per_vertex_entropies_and_normalization():
    g = star_graph(3)
    d = distance_matrix(g)
    cert = certify_md_lower_bound(g, distances=d)
    assert cert.per_vertex_entropy is not None
    assert len(cert.per_vertex_entropy) == 4
    assert max(cert.per_vertex_entropy) == pytest.approx(cert.h_max, abs=1e-15)
    for w in range(4):
        assert cert.per_vertex_entropy[w] == pytest.approx(
            vertex_distance_entropy(d[w], 4), abs=1e-15
        )


def test_certificate_json_shape():
    cert = certify_md_lower_bound(path_graph(5))
    brief = json.loads(cert.to_json())
    assert set(brief) == {"n", "h_max", "lower_bound", "bound_real"}
    verbose = json.loads(cert.to_json(verbose=True))
    assert len(verbose["per_vertex_entropy"]) == 5


def test_certify_batched_matches_matrix_path():
    from mdim import entropy as entropy_mod

    g = path_graph(23)
    full = certify_md_lower_bound(g, distances=distance_matrix(g))
    old = entropy_mod._BATCH_CELL_BUDGET
    entropy_mod._BATCH_CELL_BUDGET = 64  # force many small batches
    try:
        batched = certify_md_lower_bound(g)
    finally:
        entropy_mod._BATCH_CELL_BUDGET = old
    assert batched == full
