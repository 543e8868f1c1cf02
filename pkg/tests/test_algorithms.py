import numpy as np
import pytest

from metalab.algorithms import IMPLEMENTED_IDS, TAXONOMY, lookup, registry
from metalab.algorithms import ao, de, ebcm, eo, gsk, hgsa, igoa, imfo, mfla, mpa, msca, sdcs
from metalab.benchmarks import make_problem
from metalab.core import (Budget, ConfigError, ContractError, Individual, Objective, Population,
                          make_state)
from metalab.rng import ConstantRng, RngStream

from conftest import CountingProblem

EXACT = dict(rtol=0, atol=1e-12)


# ---------------------------------------------------------------- DE operators
def test_de_rand1_hand_value():
    X = np.array([[9.0, 9.0], [1.0, 2.0], [4.0, 6.0], [2.0, 2.0]])
    np.testing.assert_allclose(de.mutant("rand/1", X, 0, np.array([1, 2, 3]), 0.5, 0), [2, 4],
                               **EXACT)


def test_de_zero_F_and_collapsed_target_to_best():
    X = np.random.default_rng(0).normal(size=(6, 3))
    np.testing.assert_array_equal(de.mutant("rand/1", X, 0, np.array([1, 2, 3]), 0.0, 0), X[1])
    v = de.mutant("target-to-best/1", X, 2, np.array([4, 4]), 0.7, 2)
    np.testing.assert_array_equal(v, X[2])


def test_de_mutate_checks():
    pop = Population(np.zeros((5, 2)), np.zeros(5))
    with pytest.raises(ConfigError):
        de.de_mutate("rand/1", pop, 0, 0.5, RngStream(0))
    with pytest.raises(ConfigError):
        de.de_mutate("rand/9", Population(np.zeros((8, 2)), np.zeros(8)), 0, 0.5, RngStream(0))


@pytest.mark.parametrize("strategy", de.STRATEGIES)
def test_de_mutate_partners_distinct(strategy):
    # distinct rows let us identify which members were combined
    X = np.arange(10, dtype=float)[:, None] * np.array([[1.0, 1000.0]])
    pop = Population(X, np.arange(10, dtype=float))
    v = de.de_mutate(strategy, pop, 3, 0.0, RngStream(1))
    assert v.shape == (2,)


def test_binomial_and_exponential():
    t, v = np.zeros(5), np.ones(5)
    u = np.full(5, 0.5)
    np.testing.assert_array_equal(de.binomial(t, v, 1.0, u, 2), v)
    out = de.binomial(t, v, 0.0, u, 2)
    assert np.flatnonzero(out != t).tolist() == [2]
    np.testing.assert_array_equal(de.exponential(t, v, 0, 5), v)
    np.testing.assert_array_equal(de.exponential(t, v, 4, 2), [1, 0, 0, 0, 1])
    with pytest.raises(ContractError):
        de.de_crossover("binomial", t, np.ones(4), 0.5, RngStream(0))


def test_de_select_inclusive():
    a, b = Individual(np.zeros(1), 1.0), Individual(np.ones(1), 1.0)
    assert de.de_select(a, b) is b
    assert de.de_select(a, Individual(np.ones(1), 2.0)) is a
    assert de.de_select(a, Individual(np.ones(1), 0.5)).fitness == 0.5
    with pytest.raises(ContractError):
        de.de_select(a, Individual(np.ones(1)))


def test_de_step_never_worsens_best():
    p = make_problem("rastrigin", 4, shift_mode="random-interior", rng=RngStream(3))
    X = RngStream(4).uniform(-100, 100, (20, 4))
    state = make_state(X, problem=p)
    rng = RngStream(5)
    for _ in range(30):
        before = state.f.min()
        de.step(state, lookup("de").defaults(), rng)
        assert state.f.min() <= before


# ---------------------------------------------------------------- EBCM
def test_ebcm_moves():
    np.testing.assert_allclose(ebcm.criss_cross(np.zeros(2), np.full(2, 2.0), np.ones(2), 1.0),
                               [1, 1], **EXACT)
    x = np.array([3.0, -1.0])
    np.testing.assert_array_equal(ebcm.criss_cross(x, np.ones(2), np.zeros(2), 0.0), x)
    best = np.array([7.0, 8.0])
    np.testing.assert_array_equal(ebcm.toward_best(best, x, x, 0.9), best)


# ---------------------------------------------------------------- SDCS
def test_sdcs_switching_probability():
    assert sdcs.switching_probability(0.3, 0.0) == 0.3
    assert sdcs.switching_probability(0.8, 0.0) == 0.8
    assert sdcs.switching_probability(0.3, 0.5) == 0.0
    assert sdcs.switching_probability(0.8, 0.5) == 1.0


def test_sdcs_crossover_middle_branch():
    out = sdcs.crossover(np.array([0.0]), np.array([2.0]), 0.5, 0.2, 1.0, 1.0)
    np.testing.assert_allclose(out, [[2.0]], **EXACT)


def test_sdcs_closed_gate_keeps_position():
    xi = np.array([[1.0, 2.0]])
    for p in (0.1, 0.5, 0.9):
        out = sdcs.mutation(xi, np.array([[5.0, 5.0]]), p, 0.2, 0.0, 0.3, np.ones((1, 2)))
        np.testing.assert_array_equal(out, xi)


# ---------------------------------------------------------------- MSCA
def test_msca_sca_update_hand_value():
    out = msca.sca_update(np.array([0.0]), np.array([3.0]), 2.0, np.pi / 2, 1.0, 0.2)
    np.testing.assert_allclose(out, [6.0], **EXACT)


def test_msca_null_cases():
    assert msca.r1_schedule(2.0, 100, 100) == 0.0
    x = np.array([4.0])
    np.testing.assert_array_equal(msca.sca_update(x, np.array([9.0]), 1.5, 0.0, 1.0, 0.2), x)


# ---------------------------------------------------------------- IMFO
def test_imfo_weight_and_spiral():
    assert imfo.weight(3.0, 3.0) == 1.0
    assert imfo.weight(1.0, 0.0) == 1.0
    np.testing.assert_allclose(imfo.spiral_update(1.0, 1.0, 0.0, 0.5, 2.0, 4.0), 4.0, **EXACT)
    flame = np.array([[2.0, 3.0]])
    np.testing.assert_array_equal(imfo.spiral_update(np.zeros((1, 2)), 1.0, 0.3, 1.0, flame,
                                                     np.array([9.0, 9.0])), flame)
    # the w = 1 term drops M_best for equal fitness
    w = imfo.weight(5.0, 5.0)
    np.testing.assert_array_equal(imfo.spiral_update(0.0, 1.0, 0.2, w, flame, 1e9), flame)


# ---------------------------------------------------------------- AO
def test_ao_operators():
    best, mean = np.array([4.0, -2.0]), np.array([1.0, 1.0])
    np.testing.assert_array_equal(ao.expanded_exploration(best, mean, 10, 10, 0.0), mean)
    lb, ub = np.full(2, -100.0), np.full(2, 100.0)
    got = ao.expanded_exploitation(best, mean, 0.1, 0.1, lb, ub, 0.0, 0.0)
    np.testing.assert_allclose(got, (best - mean) * 0.1 + lb * 0.1, **EXACT)


# ---------------------------------------------------------------- IGOA
def test_igoa_operators():
    assert igoa.c_schedule(1.0, 4e-5, 50, 50) == 4e-5
    assert igoa.c_schedule(1.0, 4e-5, 0, 50) == 1.0
    x = np.array([1.0, 2.0])
    np.testing.assert_array_equal(igoa.levy_candidate(x, 0.0, 7.0), x)
    assert not igoa.adopt_levy(1.0, 1.0)
    assert igoa.adopt_levy(0.5, 1.0)


def test_igoa_social_move_hand_value():
    X = np.array([[0.0], [1.0]])
    r = 2.0 + 1.0                       # distances are mapped into [2, 4]
    s = 0.5 * np.exp(-r / 1.5) - np.exp(-r)
    out = igoa.social_move(X, 0.5, -1.0, 1.0, 1.0, np.array([10.0]))
    np.testing.assert_allclose(out, [[10 + 0.25 * s], [10 - 0.25 * s]], **EXACT)


# ---------------------------------------------------------------- HGSA
def test_hgsa_velocity():
    x = np.array([3.0])
    v = hgsa.velocity(np.array([1.0]), 1.0, 0.0, np.array([8.0]), 0.0, np.array([9.0]), x)
    np.testing.assert_allclose(x + v, [4.0], **EXACT)
    assert hgsa.velocity(np.array([5.0]), 0.0, 0.0, 7.0, 0.0, 1.0, x)[0] == 0.0
    # at gbest the pull vanishes for any c2
    assert hgsa.velocity(0.0, 0.0, 0.0, 1.0, 2.0, x, x)[0] == 0.0


def test_hgsa_coefficients_and_masses():
    assert hgsa.coefficients(0.0) == (2.0, 0.0)
    c1, c2 = hgsa.coefficients(1.0)
    assert c1 == pytest.approx(0.0, abs=1e-15) and c2 == pytest.approx(2.0)
    m = hgsa.masses(np.array([1.0, 2.0, 3.0]))
    assert m.sum() == pytest.approx(1.0) and m[2] == 0.0 and m[0] > m[1]


# ---------------------------------------------------------------- MFLA
def test_mfla_leap():
    np.testing.assert_allclose(mfla.leap(0.0, 2.0, 4.0, 0.5, 0.5), 3.0, **EXACT)
    assert mfla.leap(1.5, 9.0, -3.0, 0.0, 0.0) == 1.5
    assert mfla.leap(2.0, 2.0, 2.0, 0.7, 0.3) == 2.0


def test_mfla_population_mismatch():
    p = make_problem("sphere", 2)
    state = make_state(RngStream(0).uniform(-1, 1, (7, 2)), problem=p)
    with pytest.raises(ConfigError):
        mfla.step(state, lookup("mfla").validate({"m": 2, "n": 3}), RngStream(0))


# ---------------------------------------------------------------- GSK
def test_gsk_junior_hand_value():
    out = gsk.junior(np.array([2.0]), np.array([3.0]), np.array([1.0]), np.array([5.0]),
                     2.0, 1.0, 1.0)
    np.testing.assert_allclose(out, [7.0], **EXACT)


def test_gsk_zero_factor():
    rng = np.random.default_rng(0)
    xs = [rng.normal(size=3) for _ in range(5)]
    np.testing.assert_array_equal(gsk.junior(xs[0], *xs[1:4], 1.0, 2.0, 0.0), xs[0])
    np.testing.assert_array_equal(gsk.senior(xs[0], *xs[1:5], 1.0, 2.0, 0.0), xs[0])


def test_gsk_small_population():
    state = make_state(np.zeros((2, 2)), problem=make_problem("sphere", 2))
    with pytest.raises(ConfigError):
        gsk.step(state, lookup("gsk").defaults(), RngStream(0))


def test_gsk_defaults():
    assert lookup("gsk").defaults() == {"pop_size": 100, "P": 0.1, "k_f": 0.5, "k_r": 0.9,
                                        "K": 10, "symmetric_senior": False}


# ---------------------------------------------------------------- MPA
def test_mpa_prey_move_hand_value():
    prey, step = mpa.prey_move(np.ones(2), np.full(2, 2.0), np.ones(2), 0.5, np.ones(2))
    np.testing.assert_allclose(step, [1, 1], **EXACT)
    np.testing.assert_allclose(prey, [1.5, 1.5], **EXACT)
    _, step = mpa.prey_move(np.full(2, 3.0), np.full(2, 3.0), np.ones(2), 0.5, np.ones(2))
    assert np.all(step == 0)
    d = lookup("mpa").defaults()
    assert d["P"] == 0.5 and d["FADs"] == 0.2


# ---------------------------------------------------------------- EO
def test_eo_concentration_update():
    C, ceq = np.array([2.0]), np.array([0.0])
    np.testing.assert_allclose(eo.concentration_update(C, ceq, 0.5, 1.0, 1.0), [1.5], **EXACT)
    np.testing.assert_array_equal(eo.concentration_update(C, ceq, 0.0, 0.0, 0.7), ceq)
    np.testing.assert_array_equal(eo.concentration_update(C, ceq, 1.0, 3.0, 0.7), C)


# ---------------------------------------------------------------- null updates
def _origin_rng():
    # uniform draws of 0.5 put every initial coordinate at the box centre
    return ConstantRng(uniform=0.5)


NULL_CASES = {
    "de": ({"F": 0.0, "CR": 0.0, "strategy": "current-to-rand/1"}, None, None),
    "ebcm": ({"F": 0.0}, None, None),
    "sdcs": ({"a0": 0.0}, None, None),
    "msca": ({"a": 0.0, "Pc": 0.0}, None, None),
    "imfo": ({"P": 1.0}, None, "flames"),
    "ao": ({"alpha": 0.0, "delta": 0.0}, _origin_rng, None),
    "igoa": ({}, _origin_rng, None),
    "hgsa": ({}, _origin_rng, None),
    "mfla": ({"beta": 0.0}, None, None),
    "gsk": ({"k_f": 0.0}, None, "sorted"),
    "mpa": ({"P": 0.0, "FADs": 0.0}, None, None),
    "eo": ({"a1": 0.0, "GP": 1.0}, _origin_rng, None),
}


def _null_state(algo, t=0):
    overrides, init_rng, prep = NULL_CASES[algo]
    spec = lookup(algo)
    params = spec.validate(overrides)
    prob = CountingProblem(make_problem("rastrigin", 5, shift_mode="random-interior",
                                        index=2, rng=RngStream(9)), keep=True)
    obj = Objective(prob, Budget(10 ** 6))
    rng = init_rng() if init_rng else RngStream(17)
    state = spec.init(prob.space, obj, params, rng, 100)
    if prep == "flames":
        state.X[:], state.f[:] = state.aux["flames"], state.aux["flame_f"]
    elif prep == "sorted":
        order = np.argsort(state.f, kind="stable")
        state.X[:], state.f[:] = state.X[order], state.f[order]
    state.t = t
    prob.batches.clear()
    return spec, params, state, prob


@pytest.mark.parametrize("algo", IMPLEMENTED_IDS)
def test_null_update_leaves_positions(algo):
    spec, params, state, prob = _null_state(algo)
    X0 = state.X.copy()
    spec.step(state, params, ConstantRng(0.0, 0.0, 0.0, 0.0, seed=3))
    np.testing.assert_array_equal(state.X, X0)
    rows = {tuple(r) for r in X0}
    assert prob.batches
    assert all(tuple(r) in rows for b in prob.batches for r in b)


def test_ao_null_update_in_exploitation_phase():
    spec, params, state, _ = _null_state("ao", t=100)
    X0 = state.X.copy()
    spec.step(state, params, ConstantRng(0.0, 0.0, 0.0, 0.0, seed=3))
    np.testing.assert_array_equal(state.X, X0)


# ---------------------------------------------------------------- step invariants
@pytest.mark.parametrize("algo", IMPLEMENTED_IDS)
def test_step_keeps_bounds_and_increment_form(algo):
    spec = lookup(algo)
    params = spec.defaults()
    if algo == "imfo":
        params["pop_size"] = 20
    p = make_problem("schwefel", 6, shift_mode="random-interior", rng=RngStream(2))
    obj = Objective(p, Budget(10 ** 6))
    rng = RngStream(31)
    state = spec.init(p.space, obj, params, rng, 50)
    for t in range(1, 6):
        state.t = t * 10        # visit every phase of phase-switching optimizers
        X_old = state.X.copy()
        spec.step(state, params, rng)
        delta = state.X - X_old
        np.testing.assert_allclose(X_old + delta, state.X, rtol=1e-15, atol=1e-12)
        assert p.space.contains(state.X)
        np.testing.assert_allclose(state.f, p.evaluate_batch(state.X), rtol=1e-12)


# ---------------------------------------------------------------- registry
def test_registry_ids_and_tags():
    assert [s.id for s in registry()] == list(IMPLEMENTED_IDS)
    assert len(IMPLEMENTED_IDS) == 12
    for s in registry():
        assert s.tags and all(t in TAXONOMY for t in s.tags)
        s.validate(s.defaults())      # defaults lie inside their ranges
    assert lookup("gsk").tags == ("SIA-human",) and len(lookup("gsk").params) == 5
    assert lookup("eo").tags == ("physics-chemistry",)
    assert lookup("de").tags == ("EA",)


def test_reference_only_and_unknown():
    spec = lookup("nlshade")
    assert not spec.implemented
    with pytest.raises(ConfigError, match="not implemented"):
        spec.validate({})
    with pytest.raises(ConfigError):
        lookup("pso")


def test_param_checks():
    spec = lookup("de")
    assert spec.param("pop_size").check("40") == 40
    with pytest.raises(ConfigError, match="pop_size"):
        spec.param("pop_size").check(40.5)
    with pytest.raises(ConfigError):
        spec.param("strategy").check("rand/7")
    with pytest.raises(ConfigError):
        spec.param("F").check(float("nan"))
