import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from icegt.enum20v import enumerate_20v
from icegt.enum6v import enumerate_m6v
from icegt.lattice import (
    BoundarySpec, EdgeOrientation, OrientationError, PathFamily, PathFamily20V, PathFamily6V,
    build_quad, build_rect, orientation_to_paths, paths_to_orientation, validate_ice,
)
from reference_data import FOUR_PATH, SIX_PATH

ks = st.lists(st.integers(1, 6), min_size=1, max_size=3, unique=True).map(lambda v: tuple(sorted(v)))


def test_boundary_spec_parsing():
    assert BoundarySpec.parse("1, 3,4").k == (1, 3, 4)
    for bad in ("", "3,2", "0,1", "2,2"):
        with pytest.raises(ValueError):
            BoundarySpec.parse(bad)


def test_quad_shape():
    d = build_quad((2, 3, 4, 6))
    cols = {}
    for i, j in d.vertices:
        cols.setdefault(i, []).append(j)
    assert sorted(cols) == [1, 2, 3, 4]
    for i, rows in cols.items():
        assert min(rows) == 2 - i and max(rows) == 6
    assert d.end(3) == (4, -2)
    entries = sorted(e[2] for e, u in d.boundary.items() if u and e[0] == "H")
    assert entries == [2, 3, 4, 6]


def test_rect_shape():
    d = build_rect((2, 3, 4, 6))
    assert d.rows == 11
    assert len(d.vertices) == 4 * 11
    entries = sorted(e[2] for e, u in d.boundary.items() if u and e[0] == "H")
    assert entries == [3, 5, 7, 11]
    exits = sorted(e[1] for e, u in d.boundary.items() if u and e[0] == "V")
    assert exits == [1, 2, 3, 4]


@pytest.mark.parametrize("k", [(1,), (1, 2), (2, 3), (1, 3, 4), (2, 3, 5)])
def test_round_trip_exhaustive(k):
    for enum in (enumerate_20v, enumerate_m6v):
        for x in enum(k):
            o = paths_to_orientation(x)
            assert validate_ice(x.domain(), o)
            assert orientation_to_paths(x.domain(), o) == x


@pytest.mark.parametrize("x", [FOUR_PATH, SIX_PATH])
def test_round_trip_hand_configs(x):
    o = paths_to_orientation(x)
    assert orientation_to_paths(x.domain(), o) == x
    assert PathFamily.from_json(x.dumps()) == x


@settings(max_examples=40, deadline=None)
@given(ks, st.randoms(use_true_random=False))
def test_reversing_an_internal_edge_breaks_ice_at_its_ends(k, rnd):
    configs = list(enumerate_20v(k))
    x = rnd.choice(configs)
    d = x.domain()
    assume(d.internal_edges)
    o = paths_to_orientation(x)
    e = rnd.choice(d.internal_edges)
    bad = validate_ice(d, EdgeOrientation(o.used ^ {e}))
    assert not bad
    assert len(bad.violations) == 2


def test_json_shape():
    x = PathFamily20V((1, 2), ("", "DRD"))
    assert x.to_json() == {"k": [1, 2], "model": "20v", "paths": [[], ["D", "R", "D"]]}
    assert PathFamily.from_json(x.to_json()) == x


@pytest.mark.parametrize("paths,msg", [
    (("", "RRD"), "leaves"),
    (("", "D"), "ends at"),
    (("", "SD"), "invalid step"),
    (("",), "expected 2 paths"),
])
def test_bad_paths_rejected(paths, msg):
    with pytest.raises(OrientationError, match=msg):
        paths_to_orientation(PathFamily6V((1, 2), paths))


def test_shared_edge_rejected():
    # second path runs down the first path's column before turning
    with pytest.raises(OrientationError, match="two paths"):
        paths_to_orientation(PathFamily6V((2, 3), ("DD", "DDDRD")))


def test_round_trip_random_large():
    rng = random.Random(7)
    xs = list(enumerate_m6v((1, 3, 4, 5)))
    for x in rng.sample(xs, 50):
        assert orientation_to_paths(x.domain(), paths_to_orientation(x)) == x
