import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsnqos.geometry import (
    NoNeighborsError,
    Position,
    Topology,
    allowed_area,
    circle_intersection_area,
    delta,
    distance,
    hops_linear,
    is_allowed_neighbor,
)


class TestDistance:
    def test_zero(self):
        assert distance(Position(0, 0), Position(0, 0)) == 0.0

    def test_pythagorean(self):
        assert distance(Position(0, 0), Position(3, 4)) == 5.0

    def test_grid_diagonal(self):
        d = distance(Position(0, 0), Position(1000, 1000))
        assert d == pytest.approx(1000 * math.sqrt(2))


class TestAllowedNeighbor:
    SINK = Position(0.0, 0.0)

    def test_candidate_at_sink(self):
        sender = Position(50.0, 0.0)
        assert is_allowed_neighbor(sender, self.SINK, self.SINK, 80.0)

    def test_candidate_farther_from_sink(self):
        sender = Position(50.0, 0.0)
        behind = Position(90.0, 0.0)
        assert not is_allowed_neighbor(sender, behind, self.SINK, 80.0)

    def test_candidate_out_of_radio_reach(self):
        sender = Position(200.0, 0.0)
        closer = Position(90.0, 0.0)
        assert not is_allowed_neighbor(sender, closer, self.SINK, 80.0)

    def test_sender_itself_excluded(self):
        sender = Position(50.0, 0.0)
        assert not is_allowed_neighbor(sender, sender, self.SINK, 80.0)

    @given(
        sx=st.floats(-100, 100),
        sy=st.floats(-100, 100),
        cx=st.floats(-100, 100),
        cy=st.floats(-100, 100),
        rng=st.floats(1.0, 150.0),
    )
    def test_matches_two_disk_membership(self, sx, sy, cx, cy, rng):
        sender, cand = Position(sx, sy), Position(cx, cy)
        expected = (
            cand != sender
            and math.hypot(cx - sx, cy - sy) <= rng
            and math.hypot(cx, cy) <= math.hypot(sx, sy)
        )
        assert is_allowed_neighbor(sender, cand, self.SINK, rng) == expected


def lens_area_monte_carlo(r1, r2, d, samples=200_000, seed=17):
    """Independent check: rejection sampling over the smaller disk's bbox."""
    rng = np.random.default_rng(seed)
    r_small = min(r1, r2)
    # circle 1 at origin, circle 2 at (d, 0); center the box on the smaller one
    cx = 0.0 if r1 <= r2 else d
    xs = rng.uniform(cx - r_small, cx + r_small, samples)
    ys = rng.uniform(-r_small, r_small, samples)
    inside = (xs**2 + ys**2 <= r1**2) & ((xs - d) ** 2 + ys**2 <= r2**2)
    return inside.mean() * (2 * r_small) ** 2


class TestLensArea:
    def test_disjoint(self):
        assert circle_intersection_area(1.0, 1.0, 3.0) == 0.0

    def test_coincident(self):
        assert circle_intersection_area(2.0, 2.0, 0.0) == pytest.approx(math.pi * 4.0)

    def test_contained(self):
        assert circle_intersection_area(5.0, 1.0, 2.0) == pytest.approx(math.pi)

    def test_unit_circles_at_unit_distance(self):
        expected = 2 * math.pi / 3 - math.sqrt(3) / 2
        assert circle_intersection_area(1.0, 1.0, 1.0) == pytest.approx(expected)

    @pytest.mark.parametrize(
        "r1,r2,d",
        [(1.0, 1.0, 1.0), (2.0, 1.5, 1.0), (3.0, 1.0, 2.5), (1.0, 4.0, 3.2)],
    )
    def test_against_monte_carlo(self, r1, r2, d):
        analytic = circle_intersection_area(r1, r2, d)
        estimate = lens_area_monte_carlo(r1, r2, d)
        assert estimate == pytest.approx(analytic, rel=0.02)


class TestAllowedArea:
    def test_sink_disk_contained(self):
        # range at least twice the sink distance swallows the whole sink disk
        sender, sink = Position(10.0, 0.0), Position(0.0, 0.0)
        assert allowed_area(sender, sink, 25.0) == pytest.approx(math.pi * 100.0)

    def test_sender_on_sink_rejected(self):
        p = Position(3.0, 3.0)
        with pytest.raises(ValueError):
            allowed_area(p, p, 10.0)

    def test_equals_lens_of_the_two_disks(self):
        sender, sink = Position(60.0, 80.0), Position(0.0, 0.0)  # dist 100
        assert allowed_area(sender, sink, 70.0) == pytest.approx(
            circle_intersection_area(70.0, 100.0, 100.0)
        )

    def test_allowed_points_lie_in_both_disks(self):
        sender, sink, rng_m = Position(120.0, 0.0), Position(0.0, 0.0), 90.0
        rng = np.random.default_rng(5)
        for _ in range(500):
            p = Position(rng.uniform(-50, 250), rng.uniform(-150, 150))
            if is_allowed_neighbor(sender, p, sink, rng_m):
                assert distance(p, sender) <= rng_m
                assert distance(p, sink) <= distance(sender, sink)


class TestDelta:
    def test_exact_square(self):
        assert delta(100.0, 4) == 5.0

    def test_single_neighbor(self):
        assert delta(100.0, 1) == 10.0

    def test_lens_spacing(self):
        assert delta(1.2284, 3) == pytest.approx(0.640, abs=1e-3)

    def test_no_neighbors(self):
        with pytest.raises(NoNeighborsError):
            delta(100.0, 0)


class TestHopsLinear:
    SINK = Position(0.0, 0.0)

    def test_exact_division(self):
        assert hops_linear(Position(50.0, 0.0), self.SINK, 5.0) == 10

    def test_ceiling(self):
        assert hops_linear(Position(50.0, 0.0), self.SINK, 7.0) == 8

    def test_at_least_one_hop(self):
        assert hops_linear(Position(1.0, 0.0), self.SINK, 5.0) == 1

    def test_spacing_must_be_positive(self):
        with pytest.raises(ValueError):
            hops_linear(Position(1.0, 0.0), self.SINK, 0.0)


class TestTopology:
    def make(self):
        positions = {
            0: Position(0.0, 0.0),
            1: Position(60.0, 0.0),
            2: Position(120.0, 0.0),
            3: Position(180.0, 0.0),
            4: Position(240.0, 0.0),
        }
        return Topology(positions, sink=0, radio_range=87.7)

    def test_line_allowed_sets(self):
        topo = self.make()
        # node 2 reaches 1 and 3; only 1 is at least as close to the sink
        assert topo.allowed_neighbor_ids(2) == [1]
        assert topo.allowed_neighbor_ids(1) == [0]
        assert topo.allowed_neighbor_ids(4) == [3]

    def test_allowed_matches_brute_force(self):
        topo = self.make()
        sink_pos = topo.positions[0]
        for sender in (1, 2, 3, 4):
            expected = [
                nid
                for nid, pos in sorted(topo.positions.items())
                if nid != sender
                and distance(topo.positions[sender], pos) <= topo.radio_range
                and distance(pos, sink_pos) <= distance(topo.positions[sender], sink_pos)
            ]
            assert topo.allowed_neighbor_ids(sender) == expected

    def test_distance_to_sink(self):
        topo = self.make()
        assert topo.distance_to_sink(3) == pytest.approx(180.0)

    def test_missing_sink_rejected(self):
        with pytest.raises(ValueError):
            Topology({1: Position(0, 0)}, sink=0, radio_range=10.0)
