import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcentropy import rdm, states
from qcentropy.errors import ConfigError
from qcentropy.grid import symmetric_grid
from qcentropy.model import ModelParams, hamiltonian, PhasePoint
from qcentropy.states import BellSpec, CatSpec, GaussianSpec, Packet

GRID = symmetric_grid(128, 10.0)
FINE = np.linspace(-25, 25, 20001)

packets = st.builds(Packet, st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))


def numeric_overlap(a, b, s2, hbar=1.0):
    g = lambda pk: (2 * math.pi * s2) ** -0.25 * np.exp(-(FINE - pk.q) ** 2 / (4 * s2)
                                                        + 1j * pk.p * FINE / hbar)
    return np.trapezoid(np.conj(g(a)) * g(b), FINE)


@given(a=packets, b=packets, s2=st.floats(0.2, 2.0))
@settings(max_examples=60, deadline=None)
def test_packet_overlap_matches_quadrature(a, b, s2):
    assert states.packet_overlap(a, b, s2) == pytest.approx(numeric_overlap(a, b, s2), abs=1e-8)


def test_packet_overlap_self_is_one():
    assert states.packet_overlap(Packet(1.2, -0.4), Packet(1.2, -0.4), 0.5) == pytest.approx(1.0)


def _random_spec(kind, p1, p2, p3):
    if kind == "cat":
        if p1 == p2:
            return CatSpec(p1, p2, p3, allow_coincident=True)
        return CatSpec(p1, p2, p3)
    return BellSpec.swapped_pair(p1, p2)


@given(kind=st.sampled_from(["cat", "bell"]), p1=packets, p2=packets, p3=packets)
@settings(max_examples=40, deadline=None)
def test_build_state_normalised_and_schmidt_weights_match_grid(kind, p1, p2, p3):
    spec = _random_spec(kind, p1, p2, p3)
    psi = states.build_state(spec, GRID)
    assert psi.norm2() == pytest.approx(1.0, abs=1e-9)
    lam_grid = rdm.reduce(psi).eigenvalues[:2]
    lam = states.schmidt_weights(spec)
    assert np.allclose(lam, lam_grid, atol=1e-8)
    s_lin, s_vn = states.initial_quantum_entropies(spec)
    e = rdm.entropies(psi)
    assert s_lin == pytest.approx(e["S_L"], abs=1e-8)
    assert s_vn == pytest.approx(e["S_V"], abs=1e-6)


def test_far_separated_limits():
    p = ModelParams()
    cat = states.channel_cat(p, 15.0)
    assert states.initial_quantum_entropies(cat) == pytest.approx((0.0, 0.0), abs=1e-12)
    assert states.classical_initial_linear_entropy(cat) == pytest.approx(0.5, abs=1e-4)
    bell = states.channel_bell(p, 15.0)
    s_lin, s_vn = states.initial_quantum_entropies(bell)
    assert s_lin == pytest.approx(0.5, abs=1e-6) and s_vn == pytest.approx(math.log(2), abs=1e-6)
    assert states.normalization_constant(bell) == pytest.approx(1.0, abs=1e-6)
    assert states.normalization_constant(GaussianSpec(0, 0, 0, 0)) == 1.0


def test_coincident_bell_is_a_product_state():
    same = Packet(0.3, -1.0)
    spec = BellSpec.swapped_pair(same, same)
    assert states.normalization_constant(spec) == pytest.approx(1 / math.sqrt(2))
    assert states.initial_quantum_entropies(spec) == pytest.approx((0.0, 0.0), abs=1e-12)
    assert len(states.classical_analog(spec).components) == 1


def test_coincident_cat_requires_opt_in():
    with pytest.raises(ConfigError):
        CatSpec(Packet(0, 1), Packet(0, 1), Packet(0, 0))


@given(kind=st.sampled_from(["cat", "bell"]), p1=packets, p2=packets, p3=packets)
@settings(max_examples=15, deadline=None)
def test_reduced_wigner_marginals_and_purity(kind, p1, p2, p3):
    """Independent checks of the closed-form Wigner function against the grid state."""
    spec = _random_spec(kind, p1, p2, p3)
    x = GRID.x
    p = np.linspace(-12, 12, 481)
    X, P = np.meshgrid(x, p, indexing="ij")
    W = states.analytic_reduced_wigner(spec, X, P)
    dx, dp = x[1] - x[0], p[1] - p[0]
    assert W.sum() * dx * dp == pytest.approx(1.0, abs=1e-6)
    r = rdm.reduce(states.build_state(spec, GRID))
    rho_diag = np.diag(r.density()).real
    assert np.allclose(W.sum(axis=1) * dp, rho_diag, atol=1e-6)
    purity = 2 * math.pi * np.sum(W ** 2) * dx * dp
    assert purity == pytest.approx(rdm.purity(r), abs=1e-6)


def test_classical_analog_linear_entropy_oracle():
    """S_L^cl(0) closed form against numerical integration of the two-lobe density."""
    spec = CatSpec(Packet(-0.6, 0.4), Packet(0.5, -0.2), Packet(0, 0))
    dens = states.classical_analog(spec)
    x = np.linspace(-8, 8, 801)
    p = np.linspace(-8, 8, 801)
    X, P = np.meshgrid(x, p, indexing="ij")
    rho = sum(c.weight * np.exp(-(X - c.x) ** 2 / (2 * c.var_q) - (P - c.px) ** 2 / (2 * c.var_p))
              / (2 * math.pi * math.sqrt(c.var_q * c.var_p)) for c in dens.components)
    s_num = 1 - 2 * math.pi * np.sum(rho ** 2) * (x[1] - x[0]) * (p[1] - p[0])
    assert states.classical_initial_linear_entropy(spec) == pytest.approx(s_num, abs=1e-6)


def test_sampling_moments_and_components():
    spec = states.channel_cat(ModelParams(), 15.0)
    dens = states.classical_analog(spec)
    ens = states.sample_ensemble(dens, 200_000, seed=3)
    frac = np.mean(ens.components == 0)
    assert frac == pytest.approx(0.5, abs=0.005)
    for k, comp in enumerate(dens.components):
        sel = ens.states[ens.components == k]
        assert sel[:, 0].mean() == pytest.approx(comp.x, abs=0.01)
        assert sel[:, 2].mean() == pytest.approx(comp.px, abs=0.01)
        assert sel[:, 0].var() == pytest.approx(comp.var_q, rel=0.02)
        assert sel[:, 2].var() == pytest.approx(comp.var_p, rel=0.02)


def test_sampling_is_deterministic_and_chunk_stable():
    dens = states.classical_analog(GaussianSpec(0, 0, 1, 1))
    a = states.sample_ensemble(dens, 20_000, seed=11).states
    b = states.sample_ensemble(dens, 20_000, seed=11).states
    c = states.sample_ensemble(dens, states.SAMPLE_CHUNK, seed=11).states
    assert np.array_equal(a, b)
    assert np.array_equal(a[: states.SAMPLE_CHUNK], c)
    assert not np.array_equal(a, states.sample_ensemble(dens, 20_000, seed=12).states)
    with pytest.raises(ConfigError):
        states.sample_ensemble(dens, 0, seed=1)


@pytest.mark.parametrize("E0", [1.5, 15.0, 150.0])
def test_scenario_centres_have_energy_E0(E0):
    p = ModelParams(alpha=1.0)
    d = states.diagonal_gaussian(p, E0)
    assert hamiltonian(p, PhasePoint(d.x0, d.y0, d.px0, d.py0)) == pytest.approx(E0)
    for axis in "xy":
        c = states.channel_gaussian(p, E0, axis)
        assert hamiltonian(p, PhasePoint(c.x0, c.y0, c.px0, c.py0)) == pytest.approx(E0)
    cat = states.channel_cat(p, E0)
    for pk in (cat.packet1, cat.packet2):
        assert hamiltonian(p, PhasePoint(pk.q, 0, pk.p, 0)) == pytest.approx(E0)
    comp = states.cat_companion(p, E0)
    assert (comp.x0, comp.px0) == (cat.packet2.q, cat.packet2.p)


def test_offset_energy_must_be_non_negative():
    with pytest.raises(ConfigError):
        states.offset_energy(ModelParams(), 1.0, 5.0)


def test_coverage_checks():
    small = symmetric_grid(64, 3.0)
    with pytest.raises(ConfigError):
        states.build_state(GaussianSpec(2.5, 0, 0, 0), small)
    with pytest.raises(ConfigError):
        states.build_state(GaussianSpec(0, 0, 40.0, 0), small)


def test_bell_and_cat_analogs_share_the_x_marginal():
    bell = states.channel_bell(ModelParams(), 15.0)
    cat = CatSpec(bell.x1, bell.x2, Packet(0.0, 0.0))
    assert states.classical_analog(bell).x_marginal() == states.classical_analog(cat).x_marginal()


def test_bell_interference_suppressed_by_y_separation():
    """Interference term / A^2 scales with <y2|y1> = exp(-dy^2 / 8 sigma^2) when dpy = 0."""
    a, b = Packet(-1.0, 0.5), Packet(1.0, -0.5)
    x = np.linspace(-6, 6, 121)
    X, P = np.meshgrid(x, x, indexing="ij")
    lobes = (states.analytic_reduced_wigner(GaussianSpec(a.q, 0, a.p, 0), X, P)
             + states.analytic_reduced_wigner(GaussianSpec(b.q, 0, b.p, 0), X, P))

    def scaled_interference(dy):
        spec = BellSpec(a, Packet(0.0, 0.0), b, Packet(dy, 0.0))
        A2 = states.normalization_constant(spec) ** 2
        return (states.analytic_reduced_wigner(spec, X, P) - A2 / 2 * lobes) / A2

    base = scaled_interference(0.0)
    assert np.max(np.abs(base)) > 0.05
    for dy in (0.5, 1.5, 3.0):
        factor = math.exp(-dy ** 2 / (8 * 0.5))
        assert np.allclose(scaled_interference(dy), factor * base, atol=1e-12)
