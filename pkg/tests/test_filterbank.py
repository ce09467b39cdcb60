"""Bank construction, analysis/synthesis round-trips, period identification."""

import math

import numpy as np
import pytest

from rframes import (
    Channel,
    PreconditionError,
    RamanujanFilterBank,
    analyze,
    channel_energies,
    divisors,
    identify_period,
    ramanujan_sum,
    synthesize,
    totient,
    uniform_bank,
)
from rframes.experiments import periodic_signal


def test_uniform_bank_channels():
    bank = uniform_bank(30, 2)
    assert bank.n == 30
    assert bank.qs == (1, 2, 3, 5, 6, 10, 15, 30)
    assert bank.uniform and bank.ratio == 2
    # total filter count: one shift per k < N/p per channel
    assert sum(bank.n // ch.p for ch in bank.channels) == 8 * 15


def test_bank_validation():
    with pytest.raises(PreconditionError):
        RamanujanFilterBank(10, (Channel(3, 1),))  # q does not divide N
    with pytest.raises(PreconditionError):
        RamanujanFilterBank(10, (Channel(5, 3),))  # p does not divide N
    with pytest.raises(PreconditionError):
        RamanujanFilterBank(10, ())
    with pytest.raises(PreconditionError):
        uniform_bank(12, 5)
    mixed = RamanujanFilterBank(12, (Channel(3, 1), Channel(4, 2)))
    assert not mixed.uniform
    with pytest.raises(PreconditionError):
        mixed.ratio


def test_shift_matrix_columns():
    bank = uniform_bank(6, 2)
    S = bank.shifts(3)  # channel q=6
    c6 = ramanujan_sum(6, 6)
    assert S.shape == (6, 3)
    for k in range(3):
        assert np.array_equal(S[:, k], np.roll(c6, 2 * k))


def test_analyze_matches_inner_products(rng):
    for N, p in ((30, 1), (6, 2), (18, 2)):
        bank = uniform_bank(N, p)
        x = rng.standard_normal(N)
        coeffs = analyze(x, bank)
        for i, ch in enumerate(bank.channels):
            c = ramanujan_sum(ch.q, N).astype(float)
            for k in range(N // p):
                assert np.isclose(coeffs[i][k], x @ np.roll(c, p * k), atol=1e-9)


def test_analyze_is_linear(rng):
    bank = uniform_bank(12, 1)
    x, y = rng.standard_normal(12), rng.standard_normal(12)
    cx, cy, cxy = analyze(x, bank), analyze(y, bank), analyze(2 * x - 3 * y, bank)
    for a, b, ab in zip(cx, cy, cxy):
        assert np.allclose(ab, 2 * a - 3 * b, atol=1e-9)


@pytest.mark.parametrize("N,p,A", [(30, 1, 900), (6, 2, 18), (18, 2, 162)])
def test_round_trip_on_tight_banks(N, p, A, rng):
    bank = uniform_bank(N, p)
    for _ in range(5):
        x = rng.standard_normal(N)
        y = analyze(x, bank)
        assert np.allclose(synthesize(y, bank), x, atol=1e-9)
        assert np.allclose(synthesize(y, bank, A=A), x, atol=1e-9)


def test_synthesize_guards():
    bank = uniform_bank(12, 2)  # d even: not a frame
    y = analyze(np.ones(12), bank)
    with pytest.raises(PreconditionError):
        synthesize(y, bank)
    tight = uniform_bank(6, 2)
    yt = analyze(np.ones(6), tight)
    with pytest.raises(PreconditionError):
        synthesize(yt, tight, A=17.0)
    with pytest.raises(PreconditionError):
        synthesize(yt[:-1], tight)


def test_parseval_energy_budget(rng):
    # tight banks split ‖x‖² across channels with constant A
    bank = uniform_bank(30, 1)
    x = rng.standard_normal(30)
    total = sum(float(y @ y) for y in analyze(x, bank))
    assert np.isclose(total, 900 * float(x @ x), rtol=1e-9)


def test_channel_energies_locate_components():
    x = periodic_signal(30, (3, 5), seed=7)
    bank = uniform_bank(30, 1)
    e = channel_energies(x, bank)
    hot = {q for q, v in zip(bank.qs, e) if v > 1e-8 * e.max()}
    assert hot == {1, 3, 5} or hot == {3, 5}  # q=1 may get a mean leak of 0


def test_identify_period_mixed_components():
    x = periodic_signal(30, (3, 5), seed=3)
    assert identify_period(x) == 15


def test_identify_period_basic_cases():
    assert identify_period(np.ones(24)) == 1
    c7 = ramanujan_sum(7, 70).astype(float)
    assert identify_period(c7) == 7
    with pytest.raises(PreconditionError):
        identify_period(np.zeros(12))
    with pytest.raises(PreconditionError):
        identify_period(np.ones(12), N=10)


def test_identify_period_seeded_sweep(rng):
    # random divisor subsets: the detected period is the lcm of the drawn q's
    for N in (24, 30, 36, 60):
        qs = divisors(N).divisors
        for _ in range(50):
            take = [q for q in qs if rng.random() < 0.4]
            if not take:
                continue
            x = periodic_signal(N, tuple(take), seed=int(rng.integers(1 << 30)))
            assert identify_period(x, N) == math.lcm(*take)


def test_channel_energy_scaling():
    # a lone c_q input concentrates at q: c_q ∗ c_q = N·c_q, so the matched
    # channel's output energy is N²·‖c_q‖² = N³·phi(q), every other channel 0
    N = 36
    bank = uniform_bank(N, 1)
    for q in (4, 9, 12):
        e = channel_energies(ramanujan_sum(q, N).astype(float), bank)
        i = bank.qs.index(q)
        assert np.isclose(e[i], N**3 * totient(q), rtol=1e-9)
        others = np.delete(e, i)
        assert others.max() < 1e-16 * e[i] + 1e-9
