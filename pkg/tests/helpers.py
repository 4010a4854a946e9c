"""Shared problem builders and assertion helpers for the test suite."""

import os
from pathlib import Path

import numpy as np

from ciqz import SyntheticSpec, generate
from ciqz.contour import Circle

UNIT_CIRCLE = Circle(0.0, 1.0)


def assert_multiset_close(got, expected, rtol=1e-8, atol=1e-10):
    """Greedy nearest-neighbor matching of two eigenvalue multisets."""
    got = list(map(complex, got))
    expected = list(map(complex, expected))
    assert len(got) == len(expected), f"{len(got)} values vs {len(expected)} expected"
    remaining = list(expected)
    for g in got:
        dists = [abs(g - e) for e in remaining]
        j = int(np.argmin(dists))
        e = remaining.pop(j)
        assert abs(g - e) <= rtol * abs(e) + atol, (
            f"eigenvalue {g} is {abs(g - e):.3e} away from nearest expected {e}"
        )


def equivalence_problem(k):
    """Problem k of the desk-scale equivalence suite: n = 100, s = 1 + k mod 12
    interior eigenvalues (semisimple, one repeated pair when s >= 3) inside the
    unit circle, exterior spectrum at radius >= 2 including a defective
    size-2 block on even k, up to 2 infinite eigenvalues, random transform
    conditioning up to 1e3."""
    rng = np.random.default_rng(1000 + k)
    s = 1 + k % 12
    interior = []
    m = s
    if s >= 3:
        lam = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        interior += [(lam, 1), (lam, 1)]
        m -= 2
    for _ in range(m):
        r = rng.uniform(0.05, 0.6)
        th = rng.uniform(0, 2 * np.pi)
        interior.append((r * np.exp(1j * th), 1))
    nil = [[], [1], [2], [1, 1]][k % 4]
    n_ext = 100 - s - sum(nil)
    exterior = []
    if k % 2 == 0:
        r = rng.uniform(2.5, 6.0)
        th = rng.uniform(0, 2 * np.pi)
        exterior.append((r * np.exp(1j * th), 2))
        n_ext -= 2
    while n_ext > 0:
        r = rng.uniform(2.0, 12.0)
        th = rng.uniform(0, 2 * np.pi)
        exterior.append((r * np.exp(1j * th), 1))
        n_ext -= 1
    cond = 10.0 ** rng.uniform(0, 3)
    spec = SyntheticSpec(
        jordan_blocks=interior + exterior, nilpotent_sizes=nil, cond=cond
    )
    a, b, truth = generate(spec, seed=2000 + k)
    return a, b, truth, s


def convergence_shape_problem():
    """n = 300 with 40 clustered interior eigenvalues, a moderate exterior
    shell that refines visibly under a coarse rule, and a far shell."""
    rng = np.random.default_rng(42)
    blocks = []
    for _ in range(40):
        r = 0.35 * np.sqrt(rng.uniform(0, 1))
        th = rng.uniform(0, 2 * np.pi)
        blocks.append((r * np.exp(1j * th) + 0.1, 1))
    for _ in range(120):
        r = rng.uniform(2.5, 4.0)
        th = rng.uniform(0, 2 * np.pi)
        blocks.append((r * np.exp(1j * th), 1))
    for _ in range(140):
        r = rng.uniform(30.0, 60.0)
        th = rng.uniform(0, 2 * np.pi)
        blocks.append((r * np.exp(1j * th), 1))
    spec = SyntheticSpec(jordan_blocks=blocks, cond=10.0)
    return generate(spec, seed=5)


def separated_diag_problem():
    """Diagonal pair with three eigenvalues inside the unit circle and three
    far outside; exact moments are available analytically."""
    diag = np.array([0.2, 0.5 + 0.1j, -0.3, 4.0, -5.0, 7.0], dtype=np.complex128)
    a = np.diag(diag)
    b = np.eye(6, dtype=np.complex128)
    inside = diag[:3]
    return a, b, diag, inside


def corpus_path(name):
    """Locate an optional Matrix Market corpus file (e.g. bfw398a.mtx): the
    CIQZ_DATA_DIR environment variable, ./data, or tests/data."""
    candidates = []
    env = os.environ.get("CIQZ_DATA_DIR")
    if env:
        candidates.append(Path(env))
    here = Path(__file__).resolve().parent
    candidates.append(here.parent / "data")
    candidates.append(here / "data")
    for base in candidates:
        for variant in (name, name.upper(), name.lower()):
            p = base / variant
            if p.is_file():
                return p
    return None
