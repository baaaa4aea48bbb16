import pytest

from tverberg.cycles import geo_graph
from tverberg.geometry import point_set
from tverberg.solver import solve_odd
from tverberg.svg import render_svg

TRIANGLE = point_set([(0, 0), (2.1, 0), (0.9, 1.7)])


def test_triangle_counts():
    g = geo_graph(3, [(0, 1), (1, 2), (0, 2)])
    svg = render_svg(TRIANGLE, g, witness=(0.9, 0.6))
    assert svg.count('class="disk"') == 3
    assert svg.count("<line") == 3
    assert svg.count('class="pt"') == 3
    assert svg.count('class="witness"') == 1
    assert 'xmlns="http://www.w3.org/2000/svg"' in svg and 'version="1.1"' in svg


def test_pentagram_counts():
    import math

    S = point_set(
        [(math.cos(math.pi / 2 + 2 * math.pi * k / 5),
          math.sin(math.pi / 2 + 2 * math.pi * k / 5)) for k in range(5)]
    )
    result = solve_odd(S, seed=0)
    svg = render_svg(result.points, result.graph, witness=result.witness)
    assert svg.count("<line") == 5
    assert svg.count('class="disk"') == 5
    assert svg.count('class="witness"') == 1


def test_deterministic_bytes():
    g = geo_graph(3, [(0, 1), (1, 2), (0, 2)])
    a = render_svg(TRIANGLE, g, witness=(0.9, 0.6))
    b = render_svg(TRIANGLE, g, witness=(0.9, 0.6))
    assert a == b


def test_radial_projection_markers():
    svg = render_svg(TRIANGLE, None, radial_center=(0.9, 0.5))
    assert svg.count('class="unit-circle"') == 1
    assert svg.count('class="proj"') == 3


def test_labels_off_by_default():
    svg = render_svg(TRIANGLE, None)
    assert 'class="label"' not in svg
    assert render_svg(TRIANGLE, None, labels=True).count('class="label"') == 3


def test_rejects_non_planar():
    S = point_set([(0, 0, 0), (1, 1, 1)])
    with pytest.raises(ValueError):
        render_svg(S, None)
