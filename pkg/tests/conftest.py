import numpy as np
import pytest

from kappa_ceiling import RaterMatrix, ScoreScale


@pytest.fixture
def scale_0_10() -> ScoreScale:
    return ScoreScale(0, 10)


@pytest.fixture
def fixture_matrix(scale_0_10) -> RaterMatrix:
    """Canonical 4x2 hand-computed matrix: msb=13.125, msw=0.375."""
    return RaterMatrix(np.array([1, 3, 5, 7]), np.array([2, 3, 4, 8]), scale_0_10)


def reference_qwk(a, b, min_score: int, max_score: int) -> float | None:
    """Independent O(N*K^2) confusion-matrix QWK, pure python.

    Kept deliberately naive and separate from the package implementation;
    returns None for zero expected disagreement.
    """
    k = max_score - min_score + 1
    n = len(a)
    confusion = [[0] * k for _ in range(k)]
    for x, y in zip(a, b):
        confusion[x - min_score][y - min_score] += 1
    hist_a = [sum(confusion[i][j] for j in range(k)) for i in range(k)]
    hist_b = [sum(confusion[i][j] for i in range(k)) for j in range(k)]
    numerator = 0.0
    denominator = 0.0
    for i in range(k):
        for j in range(k):
            weight = (i - j) ** 2 / (k - 1) ** 2
            numerator += weight * confusion[i][j] / n
            denominator += weight * (hist_a[i] * hist_b[j] / n) / n
    if denominator == 0.0:
        return None
    return 1.0 - numerator / denominator
