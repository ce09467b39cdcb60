"""Shared oracles for the test suite.

Every frozen expected value in the tests was produced by one of these
independent routes (or is quoted from a published table); the oracles are
deliberately naive so they share no code path with the library.
"""

import itertools
import math

import numpy as np
import pytest


def trig_ramanujan(q: int, N: int) -> np.ndarray:
    """c_q over Z_N as the literal trigonometric sum over primitive roots."""
    n = np.arange(N)
    acc = np.zeros(N)
    for k in range(1, q + 1):
        if math.gcd(k, q) == 1:
            acc += np.cos(2.0 * np.pi * k * n / q)
    return acc


def dft_channel_mask(q: int, N: int) -> np.ndarray:
    """Boolean DFT-support mask of c_q over Z_N: {kN/q : (k,q)=1}."""
    mask = np.zeros(N, dtype=bool)
    for k in range(1, q + 1):
        if math.gcd(k, q) == 1:
            mask[(k * N // q) % N] = True
    return mask


def dft_subspace_projector(q: int, N: int) -> np.ndarray:
    """Orthogonal projector onto S_q built from the DFT mask, not from shifts."""
    F = np.fft.fft(np.eye(N))
    mask = dft_channel_mask(q, N)
    return np.real(F.conj().T @ np.diag(mask.astype(float)) @ F) / N


def vertex_enumeration_min(c, A, b, tol: float = 1e-9):
    """Brute-force LP oracle: scan basic solutions of Ax=b, x>=0.

    Returns the minimum objective over feasible vertices, or None when no
    basic feasible solution exists.  Exponential; callers keep n <= 8.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    m, n = A.shape
    bscale = max(1.0, float(np.abs(b).max(initial=0.0)))
    sv = np.linalg.svd(A, compute_uv=False)
    r = int(np.sum(sv > 1e-10 * sv[0])) if sv.size and sv[0] > 0 else 0
    best = None
    if r == 0:
        return 0.0 if np.abs(b).max(initial=0.0) <= tol * bscale else None
    for cols in itertools.combinations(range(n), r):
        sub = A[:, cols]
        ssv = np.linalg.svd(sub, compute_uv=False)
        if ssv[0] <= 0 or ssv[-1] <= 1e-10 * ssv[0]:
            continue  # not a basis
        xb, *_ = np.linalg.lstsq(sub, b, rcond=None)
        if float(np.abs(sub @ xb - b).max()) > tol * bscale:
            continue
        if xb.min(initial=0.0) < -tol:
            continue
        val = float(c[list(cols)] @ xb)
        if best is None or val < best:
            best = val
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


# one pass/fail line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
