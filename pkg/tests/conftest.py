import numpy as np
import pytest

from thmm import DiscreteMeasure, MomentSequence, moments_from_discrete_measure


def lebesgue(m, a=0.0, b=1.0):
    """Moments of the Lebesgue measure on [0, 1]: s_j = 1/(j+1)."""
    return MomentSequence(a, b, tuple(np.array([[1.0 / (j + 1)]]) for j in range(m + 1)))


def rel(x, y):
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return float(np.linalg.norm(x - y) / max(1.0, np.linalg.norm(x), np.linalg.norm(y)))


def random_pd_weight(rng, q, floor=0.1):
    g = rng.normal(size=(q, q)) + 1j * rng.normal(size=(q, q))
    return g @ g.conj().T + floor * np.eye(q)


def random_measure(rng, q, atoms, a=0.0, b=1.0):
    """Well-separated atoms with complex Hermitian positive definite weights.

    Atoms sit on a jittered equispaced grid so the generated Hankel
    matrices stay far from degeneracy across the whole ensemble.
    """
    grid = a + (b - a) * (np.arange(atoms) + 0.5) / atoms
    jitter = (b - a) * 0.2 / atoms * rng.uniform(-1.0, 1.0, atoms)
    pts = np.sort(grid + jitter)
    wts = tuple(random_pd_weight(rng, q) for _ in range(atoms))
    return DiscreteMeasure(a=a, b=b, points=tuple(pts), weights=wts)


def random_sequence(rng, q, n, a=0.0, b=1.0, atoms=None):
    """PositiveDefinite sequence with m = 2n + 1 from a random measure."""
    measure = random_measure(rng, q, atoms if atoms is not None else n + 2, a, b)
    seq = moments_from_discrete_measure(measure.points, measure.weights, 2 * n + 1, a, b)
    return seq, measure


def seg_dist(z, a, b):
    x, y = z.real, z.imag
    dx = max(a - x, 0.0, x - b)
    return float(np.hypot(dx, y))


def random_z_points(rng, count, a=0.0, b=1.0, min_dist=0.1, rmax=10.0):
    out = []
    while len(out) < count:
        z = complex(rng.uniform(-rmax, rmax), rng.uniform(-rmax, rmax))
        if abs(z) <= rmax and seg_dist(z, a, b) >= min_dist:
            out.append(z)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240810)
