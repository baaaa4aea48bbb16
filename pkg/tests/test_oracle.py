import itertools
import math

import numpy as np
import pytest

from tverberg.cycles import GeoGraph, geo_graph
from tverberg.geometry import Ball, in_diametral_ball, point_set
from tverberg.oracle import (
    _hamiltonian_sequences,
    disks_common_point,
    enumerate_hamiltonian,
    is_tverberg_graph,
    lens_family_common_point,
    matching_common_point,
)
from tverberg.pointio import generate

SQUARE = point_set([(0, 0), (1, 0), (1, 1), (0, 1)])


def ball(cx, cy, r):
    return Ball(center=np.array([cx, cy], dtype=float), radius=r)


def cycle_graph(m, seq):
    return geo_graph(m, [tuple(sorted((seq[i], seq[(i + 1) % len(seq)]))) for i in range(len(seq))])


class TestDisksCommonPoint:
    def test_single_ball(self):
        cert = disks_common_point([ball(0, 0, 2)])
        assert cert is not None
        assert np.allclose(cert.witness, (0, 0))
        assert cert.min_margin() == pytest.approx(2.0)

    def test_right_triangle_side_disks(self):
        # Sides of the right isoceles triangle (0,0),(2,0),(0,2); the foot of
        # the altitude from the right angle, (1,1), lies in all three disks.
        balls = [
            ball(1, 0, 1.0),
            ball(0, 1, 1.0),
            ball(1, 1, math.sqrt(2)),
        ]
        foot = np.array([1.0, 1.0])
        for b in balls:
            assert b.signed_depth(foot) >= -1e-12
        cert = disks_common_point(balls)
        assert cert is not None
        assert cert.min_margin() >= -1e-9

    def test_disjoint_absent(self):
        assert disks_common_point([ball(0, 0, 1), ball(10, 0, 1)]) is None

    def test_requires_balls(self):
        with pytest.raises(ValueError):
            disks_common_point([])

    def test_witness_is_deepest_point(self, rng):
        # The candidate method must match a fine grid search on the minimax.
        for trial in range(10):
            g = np.random.default_rng(trial)
            centers = g.uniform(0, 1, size=(4, 2))
            radii = g.uniform(0.3, 0.8, size=4)
            balls = [ball(c[0], c[1], r) for c, r in zip(centers, radii)]
            cert = disks_common_point(balls)
            xs, ys = np.meshgrid(np.linspace(-0.5, 1.5, 201), np.linspace(-0.5, 1.5, 201))
            grid = np.stack([xs.ravel(), ys.ravel()], axis=1)
            vals = np.max(
                np.linalg.norm(grid[:, None, :] - centers[None], axis=2) - radii[None],
                axis=1,
            )
            grid_best = vals.min()
            if cert is None:
                # Grid may found nothing either (up to resolution).
                assert grid_best > -1e-2
            else:
                witness_val = max(
                    np.linalg.norm(cert.witness - centers[k]) - radii[k] for k in range(4)
                )
                assert witness_val <= grid_best + 1e-6


class TestIsTverbergGraph:
    def test_triangle_present(self):
        S = point_set([(0, 0), (2.1, 0), (0.9, 1.7)])
        cert = is_tverberg_graph(S, cycle_graph(3, (0, 1, 2)))
        assert cert is not None
        for (a, b), _ in cert.per_edge_margin:
            assert in_diametral_ball(cert.witness, S.point(a), S.point(b)).covered()

    def test_square_boundary_cycle(self):
        # The four side-disks of the unit square meet exactly at the center.
        cert = is_tverberg_graph(SQUARE, cycle_graph(4, (0, 1, 2, 3)))
        assert cert is not None
        assert np.allclose(cert.witness, (0.5, 0.5), atol=1e-9)
        assert cert.min_margin() == pytest.approx(0.0, abs=1e-12)

    def test_empty_edges_rejected(self):
        with pytest.raises(ValueError):
            is_tverberg_graph(SQUARE, GeoGraph(4, ()))

    def test_non_tverberg_cycle_absent(self):
        S = generate("uniform", 7, seed=11)
        report = enumerate_hamiltonian(S, "cycles")
        good = {g.edge_set() for g, _ in report.tverberg_cycles}
        bad = None
        for seq in _hamiltonian_sequences(7, "cycles"):
            g = cycle_graph(7, seq)
            if g.edge_set() not in good:
                bad = g
                break
        assert bad is not None
        assert is_tverberg_graph(S, bad) is None

    def test_three_dimensional_matching(self):
        S = point_set([(0, 0, 0), (1, 0, 0), (0.5, 1, 0.2), (0.5, -1, -0.2)])
        m = geo_graph(4, [(0, 1), (2, 3)])
        cert = matching_common_point(S, m)
        assert cert is not None
        assert cert.min_margin() >= -1e-9


class TestMatching:
    def test_two_points_midpoint(self):
        S = point_set([(0, 0), (2, 4)])
        cert = matching_common_point(S, geo_graph(2, [(0, 1)]))
        assert np.allclose(cert.witness, (1, 2))
        assert cert.min_margin() == pytest.approx(math.sqrt(5))

    def test_rejects_non_matching(self):
        S = point_set([(0, 0), (1, 0), (0, 1), (1, 1)])
        with pytest.raises(ValueError, match="matching"):
            matching_common_point(S, geo_graph(4, [(0, 1), (1, 2)]))

    def test_some_matching_of_six_points(self, rng):
        S = point_set(rng.uniform(size=(6, 2)))
        found = 0
        for perm in itertools.permutations(range(6)):
            if perm[0] != 0 or perm[1] > perm[3] or perm[3] > perm[5]:
                continue  # canonical matchings only (15 of them)
            g = geo_graph(6, [(perm[0], perm[1]), (perm[2], perm[3]), (perm[4], perm[5])])
            if matching_common_point(S, g) is not None:
                found += 1
        assert found >= 1


class TestLensFamily:
    def test_square_cycles_absent_above_right_angle(self):
        alpha = math.pi / 2 + 0.01
        for seq in _hamiltonian_sequences(4, "cycles"):
            cert = lens_family_common_point(SQUARE, cycle_graph(4, seq), alpha)
            assert cert is None

    def test_square_at_right_angle_present(self):
        cert = lens_family_common_point(SQUARE, cycle_graph(4, (0, 1, 2, 3)), math.pi / 2)
        assert cert is not None
        assert np.allclose(cert.witness, (0.5, 0.5), atol=1e-5)

    def test_convex_heptagon_two_thirds_present(self):
        from tverberg.solver import convex_position_cycle

        S = generate("convex", 7, seed=4)
        result = convex_position_cycle(S)
        cert = lens_family_common_point(S, result.graph, 2 * math.pi / 3, tol=1e-7)
        assert cert is not None

    def test_invalid_alpha(self):
        with pytest.raises(ValueError):
            lens_family_common_point(SQUARE, cycle_graph(4, (0, 1, 2, 3)), math.pi)


class TestEnumeration:
    def test_three_points(self):
        S = point_set([(0, 0), (1.1, 0.1), (0.4, 0.9)])
        report = enumerate_hamiltonian(S, "cycles")
        assert report.total_cycles == 1
        assert len(report.tverberg_cycles) == 1
        assert not report.counterexample

    def test_five_point_counts(self):
        S = generate("uniform", 5, seed=1)
        report = enumerate_hamiltonian(S, "cycles")
        assert report.total_cycles == 12
        assert len(report.tverberg_cycles) >= 1

    def test_four_points_cycles(self):
        S = generate("uniform", 4, seed=2)
        report = enumerate_hamiltonian(S, "cycles")
        assert report.total_cycles == 3
        assert len(report.tverberg_cycles) >= 1

    def test_path_counts(self):
        S = generate("uniform", 4, seed=3)
        report = enumerate_hamiltonian(S, "paths")
        assert report.total_cycles == 12  # 4!/2
        assert len(report.tverberg_cycles) >= 1

    def test_two_point_paths(self):
        S = point_set([(0, 0), (1, 0)])
        report = enumerate_hamiltonian(S, "paths")
        assert report.total_cycles == 1
        assert len(report.tverberg_cycles) == 1

    def test_reported_cycles_reverify(self):
        S = generate("uniform", 6, seed=9)
        report = enumerate_hamiltonian(S, "cycles")
        assert len(report.tverberg_cycles) <= report.total_cycles
        for graph, cert in report.tverberg_cycles:
            again = is_tverberg_graph(S, graph)
            assert again is not None
            assert cert.min_margin() >= -1e-9

    def test_matches_direct_decision(self):
        S = generate("uniform", 6, seed=21)
        report = enumerate_hamiltonian(S, "cycles")
        good = {g.edge_set() for g, _ in report.tverberg_cycles}
        for seq in _hamiltonian_sequences(6, "cycles"):
            g = cycle_graph(6, seq)
            assert (is_tverberg_graph(S, g) is not None) == (g.edge_set() in good)

    def test_caps(self):
        S = generate("uniform", 10, seed=0)
        with pytest.raises(ValueError):
            enumerate_hamiltonian(S, "cycles")
        with pytest.raises(ValueError):
            enumerate_hamiltonian(point_set([(0, 0), (1, 1)]), "cycles")

    def test_helly_triple_consistency(self, rng):
        # Planar family has a common point iff every triple does.
        for trial in range(40):
            g = np.random.default_rng(trial + 100)
            k = int(g.integers(3, 8))
            centers = g.uniform(0, 1, size=(k, 2))
            radii = g.uniform(0.25, 0.7, size=k)
            balls = [ball(c[0], c[1], r) for c, r in zip(centers, radii)]
            whole = disks_common_point(balls) is not None
            triples = all(
                disks_common_point([balls[a], balls[b], balls[c]]) is not None
                for a, b, c in itertools.combinations(range(k), 3)
            )
            assert whole == triples
