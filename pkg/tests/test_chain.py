from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinmirror.chain import (ChainSpec, Normalization, make_chain, make_uniform_bose, make_xx_engineered,
                              one_excitation)
from spinmirror.errors import InvalidSpec, UnsupportedNormalization
from spinmirror.spectral import eigensystem

from oracles import full_hamiltonian, project_one_excitation


def test_make_chain_uniform_is_symmetric():
    spec = make_chain(3, 1, [1, 1], [0, 0, 0])
    assert spec.is_symmetric
    assert spec.is_exact
    assert spec.couplings == (Fraction(1), Fraction(1))


def test_palindrome_couplings():
    assert make_chain(4, 1, [1, 2, 1], [0, 0, 0, 0]).is_symmetric
    assert not make_chain(4, 1, [1, 2, 3]).is_symmetric
    assert not make_chain(3, 1, [1, 1], [1, 0, 0]).is_symmetric


@pytest.mark.parametrize("couplings, fields", [
    ([1, 0], [0, 0, 0]),
    ([1, -2], [0, 0, 0]),
    ([1], [0, 0, 0]),
    ([1, 1], [0, 0]),
])
def test_invalid_specs_rejected(couplings, fields):
    with pytest.raises(InvalidSpec):
        make_chain(3, 1, couplings, fields)


def test_zero_coupling_message_names_index():
    with pytest.raises(InvalidSpec, match="coupling 1"):
        make_chain(3, 1, [1, 0], [0, 0, 0])


def test_rational_strings_are_exact():
    spec = make_chain(3, "1", ["1/2", "3/4"], None)
    assert spec.couplings == (Fraction(1, 2), Fraction(3, 4))
    assert spec.fields == (0, 0, 0)
    assert spec.is_exact
    assert not make_chain(2, 1, [0.5]).is_exact


def test_json_round_trip_and_default_fields():
    spec = ChainSpec.from_json('{"n": 3, "delta": 1, "couplings": ["1/2", 2]}')
    assert spec.fields == (0, 0, 0)
    again = ChainSpec.from_json(spec.to_json())
    assert again == spec
    assert spec.to_dict()["couplings"] == ["1/2", 2]


def test_json_rejects_unknown_keys_and_garbage():
    with pytest.raises(InvalidSpec):
        ChainSpec.from_json('{"n": 2, "couplings": [1], "bogus": 1}')
    with pytest.raises(InvalidSpec):
        ChainSpec.from_json("{not json")


def test_xx_engineered_unit_spacing_spectrum():
    ev = eigensystem(one_excitation(make_xx_engineered(4))).eigenvalues
    np.testing.assert_allclose(ev, [-1.5, -0.5, 0.5, 1.5], atol=1e-12)
    ev = eigensystem(one_excitation(make_xx_engineered(2))).eigenvalues
    np.testing.assert_allclose(ev, [-0.5, 0.5], atol=1e-12)


def test_xx_engineered_raw_couplings():
    spec = make_xx_engineered(5, unit_spacing=False)
    np.testing.assert_allclose([float(j) for j in spec.couplings], [2, np.sqrt(6), np.sqrt(6), 2])
    ev = eigensystem(one_excitation(spec)).eigenvalues
    gaps = np.diff(ev)
    # raw couplings give gap 4 everywhere
    np.testing.assert_allclose(gaps / gaps[0], 1, atol=1e-12)
    np.testing.assert_allclose(gaps, 4, atol=1e-12)


@pytest.mark.parametrize("n", range(2, 16))
def test_xx_engineered_gaps_are_one(n):
    ev = eigensystem(one_excitation(make_xx_engineered(n))).eigenvalues
    np.testing.assert_allclose(np.diff(ev), 1, atol=1e-10)


def test_uniform_bose():
    spec = make_uniform_bose(80, 1, 0)
    assert len(spec.couplings) == 79 and set(spec.couplings) == {Fraction(1, 2)}
    assert make_uniform_bose(2, 2, 0).couplings == (1,)
    spec = make_uniform_bose(3, 1, 1)
    assert spec.fields == (1, 1, 1) and spec.couplings == (Fraction(1, 2),) * 2


def test_physical_n2():
    h = one_excitation(make_chain(2, 1, [1]))
    assert h.diag == (-1, -1) and h.offdiag == (2,) and h.vacuum_energy == 1


def test_laplacian_n3():
    h = one_excitation(make_chain(3, 1, [1, 1]), Normalization.LAPLACIAN)
    assert h.diag == (Fraction(1, 2), 1, Fraction(1, 2))
    assert h.offdiag == (Fraction(-1, 2), Fraction(-1, 2))


def test_affine_relation_n3():
    spec = make_chain(3, 1, [1, 1])
    phys = one_excitation(spec)
    lap = one_excitation(spec, "laplacian")
    e0 = phys.vacuum_energy
    assert e0 == 2
    assert all(p == e0 - 4 * q for p, q in zip(phys.diag, lap.diag))
    assert all(p == -4 * q for p, q in zip(phys.offdiag, lap.offdiag))


def test_laplacian_rejects_fields_and_anisotropy():
    with pytest.raises(UnsupportedNormalization):
        one_excitation(make_chain(3, 1, [1, 1], [1, 0, 1]), "laplacian")
    with pytest.raises(UnsupportedNormalization):
        one_excitation(make_chain(3, 0, [1, 1]), "laplacian")


rationals = st.fractions(min_value=Fraction(1, 30), max_value=20, max_denominator=30)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9).flatmap(lambda n: st.lists(rationals, min_size=n - 1, max_size=n - 1)))
def test_affine_relation_exact(couplings):
    spec = make_chain(len(couplings) + 1, 1, couplings)
    phys = one_excitation(spec)
    lap = one_excitation(spec, "laplacian")
    e0 = phys.vacuum_energy
    assert e0 == sum(spec.couplings)
    assert all(p == e0 - 4 * q for p, q in zip(phys.diag, lap.diag))
    assert all(p == -4 * q for p, q in zip(phys.offdiag, lap.offdiag))
    # rows sum to zero, so the uniform vector is a zero mode
    dense = lap.dense()
    np.testing.assert_allclose(dense.sum(axis=1), 0, atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("delta", [1, 0, 0.37])
def test_block_matches_full_hilbert_space(n, delta):
    rng = np.random.default_rng(100 * n + int(10 * delta))
    couplings = rng.uniform(0.2, 2.0, n - 1)
    fields = rng.uniform(-1, 1, n)
    spec = make_chain(n, delta, couplings, fields)
    h = one_excitation(spec)
    block, e0 = project_one_excitation(full_hamiltonian(n, delta, couplings, fields), n)
    np.testing.assert_allclose(h.dense(), block.real, atol=1e-12)
    assert np.max(np.abs(block.imag)) < 1e-12
    assert abs(float(h.vacuum_energy) - e0.real) < 1e-12


def test_scaled_spec():
    spec = make_chain(3, 1, [1, 2], [0, 1, 0]).scaled("1/2")
    assert spec.couplings == (Fraction(1, 2), 1) and spec.fields == (0, Fraction(1, 2), 0)
