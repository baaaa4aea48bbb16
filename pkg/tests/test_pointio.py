import numpy as np
import pytest

from tverberg.geometry import check_general_position
from tverberg.pointio import PointParseError, format_points, generate, parse_points


class TestParse:
    def test_plain_two_dim(self):
        S = parse_points("0 0\n1 0\n0 1\n")
        assert len(S) == 3 and S.dim == 2

    def test_declared_dimension(self):
        S = parse_points("# d=3\n0 0 0\n1 1 1\n")
        assert len(S) == 2 and S.dim == 3

    def test_duplicate_reports_line(self):
        with pytest.raises(PointParseError, match="line 2"):
            parse_points("0 0\n0 0\n")

    def test_ragged_row(self):
        with pytest.raises(PointParseError, match="line 3"):
            parse_points("0 0\n1 1\n2 2 2\n")

    def test_non_numeric(self):
        with pytest.raises(PointParseError, match="non-numeric"):
            parse_points("0 0\n1 x\n")

    def test_non_finite(self):
        with pytest.raises(PointParseError, match="finite"):
            parse_points("0 0\ninf 0\n")

    def test_empty(self):
        with pytest.raises(PointParseError):
            parse_points("# just a comment\n")

    def test_comments_and_blanks_ignored(self):
        S = parse_points("# d=2\n\n# a comment\n0 0\n\n1 1\n")
        assert len(S) == 2


class TestRoundTrip:
    def test_identity_on_awkward_floats(self, rng):
        coords = rng.uniform(-1, 1, size=(8, 2))
        coords[0, 0] = 1 / 3
        coords[1, 1] = 1e-17
        coords[2, 0] = 12345678.987654321
        from tverberg.geometry import PointSet

        S = PointSet(coords)
        again = parse_points(format_points(S))
        assert np.array_equal(S.coords, again.coords)

    def test_dimension_header_round_trips(self):
        S = parse_points("# d=3\n0 0 0\n1 0.5 -2\n")
        assert parse_points(format_points(S)).dim == 3


class TestGenerate:
    def test_deterministic(self):
        a = generate("uniform", 9, seed=4)
        b = generate("uniform", 9, seed=4)
        assert np.array_equal(a.coords, b.coords)

    def test_convex_is_strictly_convex(self):
        from tverberg.solver import _convex_hull_clockwise

        for seed in range(10):
            S = generate("convex", 5 + 2 * (seed % 3), seed=seed)
            assert len(_convex_hull_clockwise(S)) == len(S)

    def test_grid_has_no_collinear_triples(self):
        S = generate("grid_perturbed", 9, seed=6)
        assert check_general_position(S).collinear_triples == []

    def test_all_kinds_pass_general_position(self):
        for kind in ("uniform", "convex", "grid_perturbed"):
            S = generate(kind, 7, seed=11)
            assert check_general_position(S).ok()

    def test_respects_bbox(self):
        S = generate("uniform", 20, seed=1, bbox=(2, 3, 4, 5))
        lo, hi = S.bounding_box()
        assert lo[0] >= 2 and lo[1] >= 3 and hi[0] <= 4 and hi[1] <= 5

    def test_validation(self):
        with pytest.raises(ValueError):
            generate("uniform", 1, seed=0)
        with pytest.raises(ValueError):
            generate("hexagonal", 5, seed=0)
        with pytest.raises(ValueError):
            generate("uniform", 5, seed=0, bbox=(0, 0, 0, 1))
