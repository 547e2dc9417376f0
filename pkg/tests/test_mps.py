import itertools

import numpy as np
import pytest

from gmqc import hamiltonian as hm
from gmqc import linalg, mps, spin
from gmqc.errors import ImpossibleOutcomeError


def test_kraus_completeness():
    k = mps.site_kraus()
    np.testing.assert_allclose(sum(a.conj().T @ a for a in k), np.eye(2), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 4, 5])
def test_overlap_with_eigensolver_ground_state(n):
    chain = mps.build_aklt_mps(n)
    g = mps.to_dense(chain)
    assert np.linalg.norm(g) == pytest.approx(1.0, abs=1e-12)
    _, basis = hm.chain_ground_space(hm.ChainSpec(n))
    assert abs(np.vdot(basis[:, 0], g)) > 1 - 1e-10


def test_literal_bond_frame_misses_boundary_terms():
    # without the boundary spin flip the state is not annihilated by P32
    g = mps.to_dense(mps.build_aklt_mps(3), frame="bond")
    h = hm.build_hamiltonian(hm.ChainSpec(3))
    assert np.linalg.norm(h @ g) > 0.5
    bulk = hm.build_hamiltonian(hm.ChainSpec(3)) - hm._assemble(
        hm.ChainSpec(3), [t for t in hm.terms(hm.ChainSpec(3)) if t[0].startswith("P32")]
    )
    assert np.linalg.norm(bulk @ g) < 1e-12


def test_amplitude_matches_dense():
    chain = mps.build_aklt_mps(2)
    t = mps.to_dense(chain).reshape(2, 3, 3, 2)
    w = spin.frame_change()
    for alphas in itertools.product((1, 2, 3), repeat=2):
        for left, right in itertools.product((0, 1), repeat=2):
            dense = np.einsum("a,b,ab->", w[alphas[0] - 1].conj(), w[alphas[1] - 1].conj(), t[left, :, :, right])
            assert mps.amplitude(chain, alphas, left, right) == pytest.approx(dense, abs=1e-12)


def test_amplitude_all_three_closed_form():
    chain = mps.build_aklt_mps(2)
    # Z Z = 1, so only the boundary singlet remains: magnitude 1/(3 sqrt 2)
    a = mps.amplitude(chain, (3, 3), 1, 0)
    assert abs(a) == pytest.approx(1 / (3 * np.sqrt(2)))
    assert mps.amplitude(chain, (3, 3), 0, 0) == 0


def test_amplitude_normalisation():
    chain = mps.build_aklt_mps(3)
    total = sum(
        abs(mps.amplitude(chain, al, l, r)) ** 2
        for al in itertools.product((1, 2, 3), repeat=3)
        for l, r in itertools.product((0, 1), repeat=2)
    )
    assert total == pytest.approx(1.0, abs=1e-12)


def test_amplitude_label_errors():
    chain = mps.build_aklt_mps(2)
    with pytest.raises(ValueError):
        mps.amplitude(chain, (1, 4), 0, 1)
    with pytest.raises(ValueError):
        mps.amplitude(chain, (1,), 0, 1)


def test_correlator_decay_ratio():
    c = [mps.correlator(12, 4, 4 + d, "z") for d in range(1, 7)]
    for a, b in zip(c, c[1:]):
        assert b / a == pytest.approx(-1 / 3, abs=1e-8)
    # prefactor: C(d) = (4/3)(-1/3)^d
    assert c[0] == pytest.approx(-4 / 9, abs=1e-12)


def test_correlator_isotropy_and_square():
    for d in (0, 1, 3):
        vals = [mps.correlator(10, 4, 4 + d, mu) for mu in spin.AXES]
        assert max(vals) - min(vals) < 1e-10
    assert mps.correlator(12, 6, 6, "x") == pytest.approx(2 / 3, abs=1e-12)


def test_correlator_matches_dense():
    chain = mps.build_aklt_mps(4)
    g = mps.to_dense(chain)
    dims = [2, 3, 3, 3, 3, 2]
    s = dict(zip(spin.AXES, spin.spin1_operators()))
    for mu, (j, jp) in itertools.product(spin.AXES, [(1, 2), (2, 4), (3, 3)]):
        if j == jp:
            v = linalg.apply_local(s[mu] @ s[mu], g, [j], dims)
        else:
            v = linalg.apply_local(s[mu], linalg.apply_local(s[mu], g, [jp], dims), [j], dims)
        assert mps.correlator(4, j, jp, mu) == pytest.approx(np.vdot(g, v).real, abs=1e-12)


def test_apply_site_operator_probabilities():
    chain = mps.with_logical(mps.build_aklt_mps(3), [1, 0])
    for k in mps.site_kraus():
        _, p = mps.apply_site_operator(chain, k)
        assert p == pytest.approx(1 / 3)
    new, p = mps.apply_site_operator(chain, mps.site_kraus()[2])
    assert abs(np.vdot([1, 0], new.logical)) == pytest.approx(1.0)
    assert new.measured == 1 and new.remaining == 2


def test_two_step_sequence():
    chain = mps.with_logical(mps.build_aklt_mps(2), [0.6, 0.8j])
    k = mps.site_kraus()
    c1, p1 = mps.apply_site_operator(chain, k[0])
    c2, p2 = mps.apply_site_operator(c1, k[1])
    expected = spin.X @ spin.Z @ spin.X @ np.array([0.6, 0.8j])
    assert linalg.fidelity(expected / np.linalg.norm(expected), c2.logical) == pytest.approx(1.0)
    assert p1 * p2 == pytest.approx(1 / 9)
    with pytest.raises(ValueError):
        mps.apply_site_operator(c2, k[0])


def test_impossible_branch():
    chain = mps.with_logical(mps.build_aklt_mps(1), [1, 0])
    with pytest.raises(ImpossibleOutcomeError):
        mps.apply_site_operator(chain, np.diag([0.0, 1.0]))
