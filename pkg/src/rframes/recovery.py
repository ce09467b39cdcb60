"""Uncertainty bounds, truncated analysis sums, and ℓ1 signal recovery.

Everything here works over a tight uniform bank with constant A = pd².  A
coefficient pair (k, i) means shift index k ∈ Z_d on 0-based channel i; the
coefficient itself is (x ∗ c_{q_i})(pk) = ⟨x, L_{pk} c_{q_i}⟩ for real x,
because Ramanujan sums are even.

The recovery problems are linear programs over the coefficient constraints:

* ``recover_missing``    — min ‖x′‖₁ with the retained coefficients pinned.
* ``recover_missing_periodic`` — the same plus hard zeros on every channel
  outside the declared period list.
* ``denoise``            — min ‖y − x′‖₁ with x′ ranging over the subspace of
  signals whose coefficients vanish off a detected support set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .filterbank import RamanujanFilterBank, analyze, channel_energies
from .frames import frame_report
from .numtheory import divisors, ramanujan_sum, totient
from .simplex import l1_fit, solve_l1_lp

__all__ = [
    "UncertaintyReport",
    "uncertainty_report",
    "all_pairs",
    "coefficient_rows",
    "truncated_sum",
    "recover_missing",
    "recover_missing_periodic",
    "membership_null_basis",
    "denoise",
    "MembershipConstraintSet",
    "detect_support_set",
    "snr_db",
    "GaussianNoiseModel",
    "SparseNoiseModel",
    "add_noise",
]


# ---------------------------------------------------------------------------
# uncertainty


@dataclass(frozen=True)
class UncertaintyReport:
    """Support counts of a signal against a tight bank, with their lower bounds.

    s_x counts nonzero analysis coefficients across all channels and shifts,
    b_x counts nonzero samples of x; both at relative tolerance tol.  The
    bounds are  s_x + b_x ≥ 2d√p/φ(N)  and  s_x·b_x ≥ p(d/φ(N))², with
    β_o = φ(N) the largest filter magnitude that drives both.
    """

    n: int
    p: int
    tol: float
    s_x: int
    b_x: int
    sum_bound: float
    prod_bound: float
    beta_o: int
    sum_ok: bool
    prod_ok: bool


def uncertainty_report(
    x, bank: RamanujanFilterBank, tol: float = 1e-8
) -> UncertaintyReport:
    """Count coefficient/sample supports of x and check the uncertainty bounds."""
    x = np.asarray(x, dtype=float)
    _require_tight(bank)
    if not np.any(x):
        raise PreconditionError("uncertainty counts need a nonzero signal")
    coeffs = np.concatenate(analyze(x, bank))
    cmax = float(np.abs(coeffs).max())
    s_x = int(np.sum(np.abs(coeffs) > tol * cmax)) if cmax > 0 else 0
    xmax = float(np.abs(x).max())
    b_x = int(np.sum(np.abs(x) > tol * xmax))
    p = bank.ratio
    d = bank.n // p
    phi = totient(bank.n)
    sum_bound = 2.0 * d * math.sqrt(p) / phi
    prod_bound = p * (d / phi) ** 2
    return UncertaintyReport(
        n=bank.n, p=p, tol=tol, s_x=s_x, b_x=b_x,
        sum_bound=sum_bound, prod_bound=prod_bound, beta_o=phi,
        sum_ok=(s_x + b_x) >= sum_bound - 1e-12,
        prod_ok=(s_x * b_x) >= prod_bound - 1e-12,
    )


# ---------------------------------------------------------------------------
# coefficient plumbing


def _require_tight(bank: RamanujanFilterBank) -> float:
    report = frame_report(bank)
    if not report.tight:
        raise PreconditionError(
            f"(N={bank.n}, p={bank.ratio if bank.uniform else '?'}) bank is not tight"
        )
    return report.A


def all_pairs(bank: RamanujanFilterBank) -> list[tuple[int, int]]:
    """Every (shift k, channel i) pair of a uniform bank, channel-major."""
    d = bank.n // bank.ratio
    return [(k, i) for i in range(len(bank.channels)) for k in range(d)]


def _validate_pairs(bank: RamanujanFilterBank, pairs) -> list[tuple[int, int]]:
    d = bank.n // bank.ratio
    K = len(bank.channels)
    out: list[tuple[int, int]] = []
    seen = set()
    for k, i in pairs:
        k, i = int(k), int(i)
        if not 0 <= i < K:
            raise PreconditionError(f"channel index {i} out of range (K={K})")
        if not 0 <= k < d:
            raise PreconditionError(f"shift index {k} outside Z_{d}")
        if (k, i) in seen:
            raise PreconditionError(f"duplicate coefficient pair {(k, i)}")
        seen.add((k, i))
        out.append((k, i))
    return out


def coefficient_rows(bank: RamanujanFilterBank, pairs) -> np.ndarray:
    """Matrix with rows (L_{pk} c_{q_i})ᵀ, so (rows @ x)_j is the j-th coefficient."""
    p = bank.ratio
    filters = [f.astype(float) for f in bank.filters()]
    R = np.empty((len(pairs), bank.n))
    for j, (k, i) in enumerate(pairs):
        R[j] = np.roll(filters[i], p * k)
    return R


def truncated_sum(x, pairs, bank: RamanujanFilterBank) -> np.ndarray:
    """(1/A) Σ_{(k,i) ∈ pairs} (x ∗ c_{q_i})(pk) · L_{pk} c_{q_i}.

    With the full pair set this is the tight-frame reconstruction of x; with
    pairs missing it is the lossy partial sum the recovery problems start
    from.
    """
    x = np.asarray(x, dtype=float)
    A = _require_tight(bank)
    pairs = _validate_pairs(bank, pairs)
    if not pairs:
        return np.zeros(bank.n)
    R = coefficient_rows(bank, pairs)
    return (R.T @ (R @ x)) / A


# ---------------------------------------------------------------------------
# recovery LPs


def _pinned_coefficients(observed, pairs_matrix: np.ndarray, A: float) -> np.ndarray:
    """Recover the retained coefficients b from observed = (1/A)·Rᵀb.

    Solving R Rᵀ z = A·observed by least squares and setting b = R z kills
    the kernel ambiguity exactly: any solution z differs from the truth by an
    element of ker(R Rᵀ) = ker(Rᵀ)… applied through R that difference
    vanishes, so b is the true coefficient vector whenever observed really is
    a truncated sum.  Inconsistent input is silently projected onto the range
    of the truncation operator.
    """
    G = pairs_matrix @ pairs_matrix.T
    z, *_ = np.linalg.lstsq(G, A * np.asarray(observed, dtype=float), rcond=None)
    return pairs_matrix.T @ z


def recover_missing(observed, pairs, bank: RamanujanFilterBank) -> np.ndarray:
    """min ‖x′‖₁ subject to the retained coefficients matching the observation.

    Parameters
    ----------
    observed : Signal
        The truncated sum over the retained pairs (what the receiver holds).
    pairs : iterable of (k, i)
        The retained coefficient set 𝒥.
    """
    A = _require_tight(bank)
    pairs = _validate_pairs(bank, pairs)
    if not pairs:
        return np.zeros(bank.n)
    R = coefficient_rows(bank, pairs)
    b = _pinned_coefficients(observed, R.T, A)
    return solve_l1_lp(R, b).x


def recover_missing_periodic(
    observed, pairs, bank: RamanujanFilterBank, periods
) -> np.ndarray:
    """recover_missing plus hard zeros on every channel outside ``periods``.

    For each divisor q of N not listed in periods, the constraints
    ⟨x′, L_ℓ c_q⟩ = 0 for ℓ = 0..φ(q)−1 force the entire channel-q output of
    x′ to vanish (φ(q) consecutive shifts already span the channel's
    subspace).  Note q = 1 — the mean — is zeroed too unless listed.
    """
    A = _require_tight(bank)
    pairs = _validate_pairs(bank, pairs)
    prof = divisors(bank.n)
    periods = sorted(set(int(q) for q in periods))
    for q in periods:
        if q not in prof.divisors:
            raise PreconditionError(f"period {q} is not a divisor of N={bank.n}")
    kill_rows = []
    for q in prof.divisors:
        if q in periods:
            continue
        c = ramanujan_sum(q, bank.n).astype(float)
        for ell in range(totient(q)):
            kill_rows.append(np.roll(c, ell))
    blocks = []
    rhs_parts = []
    if pairs:
        R = coefficient_rows(bank, pairs)
        blocks.append(R)
        rhs_parts.append(_pinned_coefficients(observed, R.T, A))
    if kill_rows:
        blocks.append(np.array(kill_rows))
        rhs_parts.append(np.zeros(len(kill_rows)))
    if not blocks:
        return np.zeros(bank.n)
    return solve_l1_lp(np.vstack(blocks), np.concatenate(rhs_parts)).x


# ---------------------------------------------------------------------------
# denoising


def membership_null_basis(bank: RamanujanFilterBank, pairs) -> np.ndarray:
    """Orthonormal basis (columns) of {v : ⟨v, f_j⟩ = 0 for every pair j ∉ pairs}.

    Computed as the numerical null space (SVD, cutoff 1e−10·σ_max) of the
    complement's coefficient rows.
    """
    keep = set(_validate_pairs(bank, pairs))
    complement = [pr for pr in all_pairs(bank) if pr not in keep]
    if not complement:
        return np.eye(bank.n)
    R = coefficient_rows(bank, complement)
    _, sv, vh = np.linalg.svd(R)
    rank = int(np.sum(sv > 1e-10 * sv[0])) if sv.size and sv[0] > 0 else 0
    if rank >= bank.n:
        raise PreconditionError(
            "membership subspace is trivial: every signal consistent with the "
            "constraint set is zero"
        )
    return vh[rank:].T


def denoise(y, membership, bank: RamanujanFilterBank) -> np.ndarray:
    """ℓ1-closest signal to y among those supported on the membership set.

    Parameters
    ----------
    membership : MembershipConstraintSet or iterable of (k, i)
        Coefficient pairs allowed to be nonzero; everything else is
        constrained to zero output.
    """
    y = np.asarray(y, dtype=float)
    _require_tight(bank)
    pairs = getattr(membership, "pairs", membership)
    B = membership_null_basis(bank, pairs)
    z = l1_fit(B, y).x
    return B @ z


@dataclass(frozen=True)
class MembershipConstraintSet:
    """A detected coefficient support: all shifts of every retained channel."""

    pairs: tuple[tuple[int, int], ...]
    channels: tuple[int, ...]  # retained divisors q
    energies: tuple[float, ...]  # per-channel energies, normalized by N·φ(q)
    threshold: float

    def __iter__(self):
        return iter(self.pairs)


def detect_support_set(
    y, bank: RamanujanFilterBank, threshold_factor: float
) -> MembershipConstraintSet:
    """Channels whose output energy clears threshold_factor times the maximum.

    Energies are normalized per channel by ‖c_q‖² = N·φ(q) before comparing:
    white noise then contributes the same expected energy to every channel, so
    the threshold separates structure from the flat noise floor rather than
    from the filters' wildly different gains.  All d shifts of each retained
    channel enter the membership set.
    """
    y = np.asarray(y, dtype=float)
    if not 0.0 < threshold_factor < 1.0:
        raise PreconditionError(
            f"threshold_factor must lie in (0, 1), got {threshold_factor}"
        )
    raw = channel_energies(y, bank)
    norm = np.array(
        [e / (bank.n * totient(ch.q)) for e, ch in zip(raw, bank.channels)]
    )
    top = float(norm.max())
    if top <= 0.0:
        raise PreconditionError("all channel energies vanish; nothing to detect")
    kept = [i for i in range(len(bank.channels)) if norm[i] > threshold_factor * top]
    d = bank.n // bank.ratio
    pairs = tuple((k, i) for i in kept for k in range(d))
    return MembershipConstraintSet(
        pairs=pairs,
        channels=tuple(bank.channels[i].q for i in kept),
        energies=tuple(float(v) for v in norm),
        threshold=threshold_factor * top,
    )


# ---------------------------------------------------------------------------
# noise


def snr_db(signal: np.ndarray, noise: np.ndarray) -> float:
    """10·log₁₀ of the power ratio; +inf when the error vector is exactly zero."""
    signal = np.asarray(signal, dtype=float)
    noise = np.asarray(noise, dtype=float)
    if signal.shape != noise.shape:
        raise PreconditionError("signal and error must have the same length")
    pn = float(noise @ noise)
    if pn == 0.0:
        return math.inf
    ps = float(signal @ signal)
    return 10.0 * math.log10(ps / pn)


@dataclass(frozen=True)
class GaussianNoiseModel:
    """White Gaussian noise rescaled so the achieved SNR hits the target exactly."""

    snr_db: float


@dataclass(frozen=True)
class SparseNoiseModel:
    """Corruption on a fixed sample set: given values, or seeded ±amplitude draws."""

    support: tuple[int, ...]
    values: tuple[float, ...] | None = None
    amplitude: float = 1.0


def _box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    m = (n + 1) // 2
    u1 = 1.0 - rng.random(m)  # (0, 1]
    u2 = rng.random(m)
    r = np.sqrt(-2.0 * np.log(u1))
    out = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return out[:n]


def add_noise(x, model, seed: int = 0) -> np.ndarray:
    """Return x + η for the given noise model, deterministically under seed."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    rng = np.random.default_rng(seed)
    if isinstance(model, GaussianNoiseModel):
        px = float(x @ x)
        if px == 0.0:
            raise PreconditionError("cannot target an SNR against a zero signal")
        eta = _box_muller(rng, n)
        eta *= math.sqrt(px / float(eta @ eta)) * 10.0 ** (-model.snr_db / 20.0)
        return x + eta
    if isinstance(model, SparseNoiseModel):
        support = [int(k) for k in model.support]
        if len(set(support)) != len(support):
            raise PreconditionError("sparse noise support has duplicates")
        if any(not 0 <= k < n for k in support):
            raise PreconditionError(f"sparse noise support outside Z_{n}")
        if model.values is not None:
            vals = np.asarray(model.values, dtype=float)
            if len(vals) != len(support):
                raise PreconditionError("values and support lengths differ")
        else:
            vals = model.amplitude * _box_muller(rng, len(support))
        y = x.copy()
        for k, v in zip(support, vals):
            y[k] += v
        return y
    raise PreconditionError(f"unknown noise model {type(model).__name__}")
