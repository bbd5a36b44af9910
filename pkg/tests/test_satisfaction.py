import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aisemiring.errors import AssignmentError, CapacityError, UnknownNameError
from aisemiring.identities import GROUPS, IDENTITIES, identity, resolve_keys
from aisemiring.matrix import m2m2, matrix_semiring
from aisemiring.satisfaction import (equational_agreement, evaluate, evaluate_ast,
                                     necessary_conditions, random_identity,
                                     random_simple_identity, satisfies, satisfies_basis,
                                     syntactic_criterion)
from aisemiring.semiring import CATALOG_NAMES, catalog
from aisemiring.terms import SimpleIdentity, parse_identity, parse_term, term


def naive_value(S, t, env):
    total = None
    for w in t:
        v = env[w[0]]
        for x in w[1:]:
            v = S.mul[v, env[x]]
        total = v if total is None else S.add[total, v]
    return int(total)


def naive_satisfies(S, ident):
    vs = ident.variables()
    for vals in itertools.product(range(S.size), repeat=len(vs)):
        env = dict(zip(vs, vals))
        if naive_value(S, ident.lhs, env) != naive_value(S, ident.rhs, env):
            return False, env
    return True, None


def test_evaluate_matches_tree_evaluation():
    S = catalog("SR6")
    ast = parse_term("x(y+z)^2 + zx")
    env = {"x": 1, "y": 3, "z": 4}
    assert evaluate(S, term("x(y+z)^2 + zx"), env) == evaluate_ast(S, ast, env)
    assert evaluate(S, term("xy"), {"x": "A", "y": "P"}) == S.mul[S.index("A"), S.index("P")]


def test_evaluate_errors():
    S = catalog("L2")
    with pytest.raises(AssignmentError):
        evaluate(S, term("xy"), {"x": 0})
    with pytest.raises(AssignmentError):
        evaluate(S, term("x"), {"x": 7})


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(CATALOG_NAMES))
def test_exhaustive_matches_naive(seed, name):
    rng = np.random.default_rng(seed)
    S = catalog(name)
    ident = random_identity(rng, max_vars=3, max_word_len=3)
    v = satisfies(S, ident)
    holds, env = naive_satisfies(S, ident)
    assert v.holds == holds
    if not holds:
        assert v.witness == env  # lex-least counterexample


def test_tiny_block_and_threads_give_same_witness():
    S = matrix_semiring(catalog("L2"), 2)
    ident = parse_identity("xyz ≈ zyx")
    ref = satisfies(S, ident)
    assert not ref.holds
    for block, workers in ((16, 1), (16, 3), (1, 4)):
        v = satisfies(S, ident, block=block, workers=workers)
        assert (v.witness, v.assignments_checked) == (ref.witness, ref.assignments_checked)


def test_failure_found_in_lazy_m3():
    M = matrix_semiring(catalog("L2"), 3)
    big = matrix_semiring(catalog("L2"), 4)
    v = satisfies(big, parse_identity("xy ≈ x"))
    assert not v.holds and v.exhaustive
    w = {k: int(x) for k, x in v.witness.items()}
    assert evaluate(big, term("xy"), w) != evaluate(big, term("x"), w)
    assert not satisfies(M, parse_identity("xy ≈ yx")).holds


def test_trivial_identity_needs_no_assignments():
    v = satisfies(catalog("L2"), parse_identity("x + y ≈ y + x"))
    assert v.holds and v.assignments_checked == 0


def test_variable_cap():
    ident = parse_identity("x1x2x3x4x5x6x7x8x9 ≈ x1")
    with pytest.raises(CapacityError):
        satisfies(catalog("L2"), ident)
    assert satisfies(catalog("L2"), ident, max_vars=9).holds


def test_assignment_cap():
    M = matrix_semiring(catalog("L2"), 4)
    with pytest.raises(CapacityError):
        satisfies(M, parse_identity("xyz ≈ x"), max_assignments=10 ** 6)


def test_sampling_requires_seed_and_is_reproducible():
    M = matrix_semiring(catalog("L2"), 3)
    ident = parse_identity("xy ≈ yx")
    with pytest.raises(ValueError):
        satisfies(M, ident, samples=100)
    a = satisfies(M, ident, samples=5000, seed=9)
    b = satisfies(M, ident, samples=5000, seed=9)
    assert not a.holds and a.witness == b.witness and not a.exhaustive


def test_verdict_json():
    S = catalog("L2")
    v = satisfies(S, parse_identity("xy ≈ y"))
    data = v.to_json(S)
    assert data["holds"] is False and data["witness"] == {"x": "0", "y": "1"}


def test_basis_for_each_catalog_member():
    from aisemiring.identities import BASIS_OF
    for name, keys in BASIS_OF.items():
        assert satisfies_basis(catalog(name), keys).passed, name


def test_resolve_keys_accepts_groups_and_inline():
    labels = [k for k, _ in resolve_keys(["B-D2", "xy = yx"])]
    assert labels[:3] == ["B-D2.1", "B-D2.2", "B-D2.3"]
    assert len(labels) == 4
    with pytest.raises(UnknownNameError):
        resolve_keys(["nope"])
    assert set(GROUPS["B-SR6"]) == {"F9", "F10", "F11", "F12"}
    assert "F12" in IDENTITIES and str(identity("F1")) == "xy ≈ xz"


@pytest.mark.parametrize("tag", ["L2", "R2", "N2", "T2", "M2", "D2"])
def test_criterion_matches_brute_force(tag):
    rng = np.random.default_rng(11)
    S = catalog(tag)
    for _ in range(500):
        si = random_simple_identity(rng)
        assert syntactic_criterion(tag, si) == satisfies(S, si.as_identity()).holds, str(si)


def test_criterion_examples():
    si = SimpleIdentity(term("xy"), ("x", "z"))
    assert syntactic_criterion("L2", si)
    assert not syntactic_criterion("R2", si)
    assert not syntactic_criterion("M2", si)
    assert syntactic_criterion("N2", si)
    with pytest.raises(UnknownNameError):
        syntactic_criterion("S54", si)
    with pytest.raises(UnknownNameError):
        necessary_conditions("L2", si)


def test_necessary_conditions_reject_known_failures():
    # x ≈ x + x^2 fails in S60 and the conditions already rule it out
    si = SimpleIdentity(term("x"), ("x", "x"))
    assert not satisfies(catalog("S60"), si.as_identity()).holds
    assert not necessary_conditions("S60", si)


def test_agreement_finds_separating_probe():
    rep = equational_agreement(catalog("L2"), matrix_semiring(catalog("L2"), 2), count=0,
                               identities=[parse_identity("xy ≈ x")])
    assert rep.first_disagreement[1:] == (True, False)


def test_agreement_is_seeded():
    a = equational_agreement(catalog("M2"), catalog("D2"), count=50, seed=4)
    b = equational_agreement(catalog("M2"), catalog("D2"), count=50, seed=4)
    assert a.to_json() == b.to_json() and a.disagreements
    with pytest.raises(CapacityError):
        equational_agreement(catalog("M2"), catalog("D2"), max_vars=9)


def test_m2m2_reaches_every_basis_identity_exhaustively():
    M = m2m2()
    for key, ident in resolve_keys(["B-SR6"]):
        v = satisfies(M, ident)
        assert v.holds and v.assignments_checked == 16 ** len(ident.variables())
