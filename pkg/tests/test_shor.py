import cmath
import math

import numpy as np
import pytest

from shorsim import shor
from shorsim.errors import CapacityError, DomainError, SharedFactorError
from shorsim.numtheory import order_bruteforce
from shorsim.records import loads


@pytest.fixture(scope="module")
def p15():
    return shor.make_parameters(15, 7)


# -------------------------------------------------------------- parameters


@pytest.mark.parametrize("N, s, l", [(15, 8, 4), (21, 9, 5), (4, 4, 2), (3, 4, 2), (55, 12, 6)])
def test_choose_parameters(N, s, l):
    p = shor.choose_parameters(N)
    assert (p.s, p.l) == (s, l)
    assert N * N <= p.q < 2 * N * N
    assert p.N1 >= N > p.N1 // 2


def test_parameter_errors():
    with pytest.raises(DomainError):
        shor.choose_parameters(2)
    with pytest.raises(CapacityError) as info:
        shor.choose_parameters(55, max_amplitudes=1000)
    assert info.value.bound == 1000 and "1000" in str(info.value)
    with pytest.raises(CapacityError):
        shor.choose_parameters(5000)  # s = 25 exceeds the qubit cap
    with pytest.raises(SharedFactorError) as shared:
        shor.make_parameters(15, 5)
    assert shared.value.divisor == 5
    with pytest.raises(DomainError):
        shor.make_parameters(15, 1)
    with pytest.raises(DomainError):
        shor.outcome_distribution(shor.choose_parameters(15))


# ------------------------------------------------------------ joint state


def test_superposition(p15):
    st = shor.prepare_superposition(p15)
    assert np.allclose(st.grid[:, 0], 1 / 16)
    assert not np.any(st.grid[:, 1:])
    assert st.norm_squared() == pytest.approx(1, abs=1e-12)


def test_modular_exponentiation(p15):
    st = shor.entangle_modular_exponentiation(shor.prepare_superposition(p15))
    a, y = np.nonzero(st.grid)
    assert a.size == p15.q
    assert all(int(yy) == pow(7, int(aa), 15) for aa, yy in zip(a, y))
    assert sorted(st.occupied_columns().tolist()) == [1, 4, 7, 13]
    assert st.norm_squared() == pytest.approx(1, abs=1e-12)

    minus = shor.make_parameters(15, 14)
    st = shor.entangle_modular_exponentiation(shor.prepare_superposition(minus))
    ys = np.argmax(np.abs(st.grid), axis=1)
    assert ys.tolist() == [1, 14] * (minus.q // 2)


def test_qft_on_superposition_gives_delta(p15):
    out = shor.apply_qft_first_register(shor.prepare_superposition(p15))
    assert abs(out.grid[0, 0] - 1) < 1e-12
    assert np.abs(out.amplitudes).sum() == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("N, m", [(15, 7), (15, 2), (21, 2), (21, 5)])
def test_qft_methods_agree(N, m):
    params = shor.make_parameters(N, m)
    gates = shor.simulate_final_state(params, "gates")
    direct = shor.simulate_final_state(params, "direct")
    assert np.max(np.abs(gates.amplitudes - direct.amplitudes)) <= 1e-9
    assert gates.norm_squared() == pytest.approx(1, abs=1e-10)
    if N <= 15:
        full = shor.simulate_final_state(params, "full")
        assert np.max(np.abs(full.amplitudes - gates.amplitudes)) <= 1e-12


def test_unknown_qft_method(p15):
    with pytest.raises(DomainError):
        shor.apply_qft_first_register(shor.prepare_superposition(p15), "fft")


@pytest.mark.parametrize("N, m", [(15, 7), (21, 2), (33, 5)])
def test_amplitude_derivation_identity(N, m):
    params = shor.make_parameters(N, m)
    q = params.q
    r = order_bruteforce(m, N)
    final = shor.simulate_final_state(params)
    rng = np.random.default_rng(N)
    for c in rng.integers(0, q, size=25).tolist() + [0, q // 2]:
        for k in range(r):
            f = (q - 1 - k) // r
            expected = sum(cmath.exp(2j * math.pi * (c * (b * r + k) % q) / q) for b in range(f + 1)) / q
            assert abs(final.grid[c, pow(m, k, N)] - expected) <= 1e-10


@pytest.mark.parametrize("N, m", [(15, 7), (21, 2), (35, 3), (55, 2)])
def test_second_register_residues_are_distinct(N, m):
    r = order_bruteforce(m, N)
    ys = shor.power_table(m, r, N).tolist()
    assert len(set(ys)) == r
    # <m^k|m^a> = 1 exactly when a = k (mod r)
    for a in range(3 * r):
        for k in range(r):
            assert (pow(m, a, N) == ys[k]) == (a % r == k)


# ------------------------------------------------------------- closed form


def test_closed_form_examples(p15):
    for k in range(4):
        assert shor.closed_form_probability(p15, 4, 64, k) == 64**2 / 256**2 == 1 / 16
    assert shor.closed_form_probability(p15, 4, 1, 0) < 1e-3
    with pytest.raises(DomainError):
        shor.closed_form_probability(p15, 4, 256, 0)
    with pytest.raises(DomainError):
        shor.closed_form_probability(p15, 4, 0, 4)


def test_closed_form_scalar_matches_table():
    params = shor.make_parameters(21, 2)
    table = shor.closed_form_table(params, 6)
    for c in range(0, params.q, 7):
        for k in range(6):
            assert table[c, k] == pytest.approx(shor.closed_form_probability(params, 6, c, k), rel=1e-12, abs=1e-18)


@pytest.mark.parametrize("N, m", [(15, 7), (21, 2), (33, 5), (35, 3), (39, 2), (55, 3)])
def test_distribution_totals(N, m):
    params = shor.make_parameters(N, m)
    dist = shor.outcome_distribution(params, "closed-form")
    assert abs(dist.total() - 1) <= 1e-9
    assert np.all(dist.probabilities >= 0)


def test_theoretical_peaks():
    assert shor.theoretical_peaks(256, 4) == [0, 64, 128, 192]
    assert shor.theoretical_peaks(512, 6) == [0, 85, 171, 256, 341, 427]


# ----------------------------------------------------------- distributions


def test_n15_marginal(p15):
    for path in ("closed-form", "simulation"):
        marg = shor.outcome_distribution(p15, path).marginal_c()
        for c in (0, 64, 128, 192):
            assert abs(marg[c] - 0.25) <= 1e-9
        rest = np.delete(marg, [0, 64, 128, 192])
        assert np.max(rest) < 1e-12


@pytest.mark.parametrize("N, m", [(15, 7), (15, 14), (21, 2), (33, 5)])
def test_paths_agree(N, m):
    params = shor.make_parameters(N, m)
    sim = shor.outcome_distribution(params, "simulation")
    cf = shor.outcome_distribution(params, "closed-form")
    assert sim.ys == cf.ys
    assert np.max(np.abs(sim.probabilities - cf.probabilities)) <= 1e-9
    assert sim.off_support_mass <= 1e-12
    assert abs(sim.total() - 1) <= 1e-9


def test_unreachable_y_has_zero_probability(p15):
    dist = shor.outcome_distribution(p15, "simulation")
    for y in range(16):
        if y not in (1, 4, 7, 13):
            assert dist.probability(64, y) == 0.0
    assert dist.probability(64, 7) == pytest.approx(1 / 16)


def test_closed_form_path_skips_joint_state(p15, monkeypatch):
    def boom(*_):
        raise AssertionError("joint state allocated")

    monkeypatch.setattr(shor, "prepare_superposition", boom)
    monkeypatch.setattr(shor, "simulate_final_state", boom)
    dist = shor.outcome_distribution(p15, "closed-form")
    assert dist.probabilities.shape == (256, 4)


def test_unknown_path(p15):
    with pytest.raises(DomainError):
        shor.outcome_distribution(p15, "guess")


def test_top_peaks(p15):
    peaks = shor.outcome_distribution(p15, "closed-form").top_peaks(4)
    assert [c for c, _ in peaks] == [0, 64, 128, 192]


# ---------------------------------------------------------------- sampling


def test_sample_statistics(p15):
    dist = shor.outcome_distribution(p15, "closed-form")
    rng = np.random.default_rng(99)
    n = 10_000
    samples = [dist.sample(rng) for _ in range(n)]
    hits = sum(c == 64 for c, _ in samples)
    sigma = math.sqrt(n * 0.25 * 0.75)
    assert abs(hits - n / 4) <= 5 * sigma
    assert {y for _, y in samples} <= {1, 4, 7, 13}


def test_sample_run_is_deterministic(p15):
    assert shor.sample_run(p15, 5) == shor.sample_run(p15, 5)
    draws = {shor.sample_run(p15, seed, "closed-form") for seed in range(40)}
    assert len(draws) > 1


def test_distribution_export(p15):
    dist = shor.outcome_distribution(p15, "closed-form")
    doc = loads(dist.to_document().dumps())
    assert doc.kind == "distribution"
    assert doc.meta["N"] == 15 and doc.meta["q"] == 256 and doc.meta["r"] == 4
    assert len(doc.rows) == 16
    assert {(row[0], row[1]) for row in doc.rows} == {(c, y) for c in (0, 64, 128, 192) for y in (1, 4, 7, 13)}
    assert all(row[2] == 0.0625 for row in doc.rows)
