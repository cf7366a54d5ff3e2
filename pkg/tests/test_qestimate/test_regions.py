import numpy as np
import pytest

from src.core.exceptions import RegionError
from src.qestimate.regions import Ball, Box, CellClass, Complement, Intersection, UnionOfBoxes

INSIDE, OUTSIDE, PARTIAL = CellClass.INSIDE, CellClass.OUTSIDE, CellClass.PARTIAL

# ------------------- FIXTURES ------------------- #


@pytest.fixture
def disk():
    """Create the unit disk."""
    return Ball([0.0, 0.0], 1.0)


@pytest.fixture
def cells():
    """Create one inside, one outside and one boundary cell of the unit disk."""
    lower = np.array([[0.0, 0.0], [0.9, 0.9], [0.5, 0.5]])
    upper = np.array([[0.5, 0.5], [1.0, 1.0], [1.0, 1.0]])
    return lower, upper


# ------------------- TESTS ------------------- #


class TestBox:
    """Test boxes."""

    def test_classify(self):
        box = Box([0.0, 0.0], [1.0, 1.0])
        codes = box.classify([[0.25, 0.25], [1.0, 0.0], [0.5, 0.5]], [[0.5, 0.5], [2.0, 1.0], [1.5, 1.5]])
        assert codes.tolist() == [INSIDE, OUTSIDE, PARTIAL]

    def test_contains_and_project(self):
        box = Box([0.0], [2.0])
        assert box.contains(np.array([[0.0], [2.0], [2.5]])).tolist() == [True, True, False]
        assert box.project(np.array([[3.0], [-1.0]])).ravel().tolist() == [2.0, 0.0]

    def test_geometry(self):
        box = Box([0.0, 0.0], [3.0, 4.0])
        assert box.diameter == 5.0
        assert box.volume == 12.0

    @pytest.mark.parametrize("lower,upper", [([0.0], [0.0]), ([0.0, 0.0], [1.0])])
    def test_invalid(self, lower, upper):
        with pytest.raises(RegionError):
            Box(lower, upper)


class TestBall:
    """Test balls."""

    def test_classify(self, disk, cells):
        assert disk.classify(*cells).tolist() == [INSIDE, OUTSIDE, PARTIAL]

    def test_project(self, disk, rng):
        points = rng.uniform(-3.0, 3.0, (50, 2))
        assert np.all(disk.contains(disk.project(points)))

    def test_zero_radius(self):
        with pytest.raises(RegionError):
            Ball([0.0], 0.0)


class TestComposites:
    """Test intersections, complements and unions."""

    def test_complement_swaps(self, disk, cells):
        assert Complement(disk).classify(*cells).tolist() == [OUTSIDE, INSIDE, PARTIAL]
        assert (~disk).contains(np.array([[2.0, 0.0]])).tolist() == [True]

    def test_complement_unbounded(self, disk):
        with pytest.raises(RegionError):
            Complement(disk).bounds

    def test_intersection(self, disk):
        half = Box([0.0, -1.0], [1.0, 1.0])
        region = disk & half
        lower, upper = region.bounds
        assert lower.tolist() == [0.0, -1.0]
        assert upper.tolist() == [1.0, 1.0]
        codes = region.classify([[-0.5, 0.0], [0.1, 0.1]], [[-0.25, 0.25], [0.3, 0.3]])
        assert codes.tolist() == [OUTSIDE, INSIDE]
        projected = region.project(np.array([[-2.0, 0.0], [2.0, 2.0]]))
        assert np.all(region.contains(projected))

    def test_annulus(self, disk):
        annulus = Intersection([disk, Complement(Ball([0.0, 0.0], 0.5))])
        assert annulus.contains(np.array([[0.75, 0.0], [0.25, 0.0]])).tolist() == [True, False]

    def test_dimension_mismatch(self):
        with pytest.raises(RegionError):
            Intersection([Box([0.0], [1.0]), Ball([0.0, 0.0])])

    def test_union_of_boxes(self):
        union = UnionOfBoxes([[0.0, 0.0], [1.0, 0.0]], [[1.0, 1.0], [2.0, 1.0]])
        codes = union.classify(
            [[0.0, 0.0], [0.5, 0.0], [3.0, 3.0], [1.5, 0.5]],
            [[0.5, 0.5], [1.5, 0.5], [4.0, 4.0], [2.5, 1.5]],
        )
        assert codes.tolist() == [INSIDE, PARTIAL, OUTSIDE, PARTIAL]
        assert union.contains(np.array([[1.5, 0.5], [2.5, 0.5]])).tolist() == [True, False]
        assert union.project(np.array([[2.5, 0.5]])).tolist() == [[2.0, 0.5]]
        assert len(union.boxes) == 2
