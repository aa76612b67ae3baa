"""Certificate machinery: codes, gadget enumeration, Φ, LP, verification."""

from fractions import Fraction

import pytest

from trimix import certify
from trimix.certify import (
    ALPHA_HI, ALPHA_LO, AlphaTable, Certifier, DecayConstants, FGadget,
    GGadget, code_bits, code_from_bits, count_G, decay_constants, enumerate_G,
    export_lp, f_code, f_decode, format_alpha_table, generate_inequalities,
    load_alpha_table, parse_alpha_table, solve_lp, verify_alphas,
)

DATA = certify.DATA_DIR


@pytest.fixture(scope="module")
def cert():
    return Certifier.load(DATA)


def test_f_gadget_shape(cert):
    assert len(cert.f.region) == 12
    assert len(cert.f.free) == 11
    assert cert.f.v_f in cert.f.region
    assert cert.f.w_f not in cert.f.region


def test_f_code_round_trip_all(cert):
    for code in range(1, 2049):
        S = f_decode(cert.f, code)
        assert cert.f.v_f in S
        assert f_code(cert.f, S) == code
    # extremes
    assert f_code(cert.f, frozenset({cert.f.v_f})) == 1
    assert f_code(cert.f, cert.f.region.vertices) == 2048
    assert code_bits(cert.f, 1) == "0" * 11
    assert code_from_bits("0" * 11) == 1
    assert code_from_bits("1" * 11) == 2048


def test_g_gadget_shape(cert):
    assert len(cert.g.region) == 17
    assert cert.g.v_g in cert.g.region
    assert cert.g.w_g not in cert.g.region
    assert len(cert.g.w_neighbours) == 5


def test_enumerate_g_filters(cert):
    n = len(cert.g.order)
    pos = {z: i for i, z in enumerate(cert.g.order)}
    total = with_v = with_all_wn = both = 0
    v_bit = 1 << (n - 1 - pos[cert.g.v_g])
    wn = sum(1 << (n - 1 - pos[u]) for u in cert.g.w_neighbours)
    for pattern in range(1 << n):
        total += 1
        has_v = bool(pattern & v_bit)
        all_wn = pattern & wn == wn
        with_v += has_v
        with_all_wn += all_wn
        both += has_v and all_wn
    expected = with_v - both
    assert count_G(cert.g) == expected
    assert count_G(cert.g) < 1 << 17


def test_enumerate_g_membership_invariants(cert):
    for i, gp in enumerate(enumerate_G(cert.g)):
        assert cert.g.v_g in gp
        assert any(u not in gp for u in cert.g.w_neighbours)
        if i > 500:
            break


def test_placements(cert):
    assert len(cert.placements) == 6
    ks = [p.k for p in cert.placements]
    assert ks == list(range(6))
    assert cert.placements[0].anchor == cert.g.v_g
    assert cert.placements[0].image_w == cert.g.w_g
    allowed = cert.g.region.vertices | {cert.g.w_g}
    for p in cert.placements:
        assert set(p.mapping.values()) <= allowed
        assert p.mapping[cert.f.v_f] == p.anchor
        assert p.mapping[cert.f.w_f] == p.image_w


def test_phi_single_vertex(cert):
    gp = frozenset({cert.g.v_g})
    r = cert.phi(gp)
    # only the single-cell region embeds
    assert cert.mu_table.value(r.m) == max(
        cert.mu_table.value(i) for i in cert.embeddable(gp))
    assert r.b[0] == 1                       # code of {v_F}
    for p, b in zip(cert.placements[1:], r.b[1:]):
        assert (b == 0) == (p.anchor not in gp)


def test_phi_b_zero_iff_anchor_absent(cert):
    import itertools
    for gp in itertools.islice(enumerate_G(cert.g), 0, 2000, 97):
        r = cert.phi(gp)
        for p, b in zip(cert.placements, r.b):
            assert (b == 0) == (p.anchor not in gp)
        assert r.b[0] != 0


def test_phi_m_minimizes_mu(cert):
    import itertools
    for gp in itertools.islice(enumerate_G(cert.g), 0, 4000, 193):
        r = cert.phi(gp)
        cand = cert.embeddable(gp)
        best = min(cert.mu_table.value(i) for i in cand)
        assert cert.mu_table.value(r.m) == best
        assert r.m == min(i for i in cand
                          if cert.mu_table.value(i) == best)


def test_full_region_embeds_largest(cert):
    gp = frozenset(cert.g.region.vertices)
    # all five w-neighbours present → not admissible; drop one
    drop = cert.g.w_neighbours[0]
    gp = gp - {drop}
    r = cert.phi(gp)
    assert cert.mu_table.value(r.m) <= Fraction(5, 17)


def test_alpha_table_round_trip():
    t = AlphaTable({1: Fraction(2), 2048: Fraction(20279, 10000) + 2})
    text = format_alpha_table(t)
    back = parse_alpha_table(text)
    assert back.values == t.values
    assert back[0] == 0


def test_verify_rejects_out_of_range(cert):
    alphas = load_alpha_table(DATA / "alphas.txt")
    bad = dict(alphas.values)
    some = next(iter(bad))
    bad[some] = Fraction(7)
    v = verify_alphas(AlphaTable(bad), [], cert.mu_table, Fraction(1, 1000))
    assert any(viol.m == 0 for viol in v)


def test_shipped_alphas_in_range():
    alphas = load_alpha_table(DATA / "alphas.txt")
    assert all(ALPHA_LO <= a <= ALPHA_HI for a in alphas.values.values())


def test_export_lp_deterministic(cert):
    ineqs = generate_inequalities(cert)
    eps = Fraction(1, 1000)
    t1 = export_lp(ineqs, cert.mu_table, eps)
    t2 = export_lp(ineqs, cert.mu_table, eps)
    assert t1 == t2
    head = t1.splitlines()
    assert sum(1 for l in head if l.startswith("var ")) == 2048
    assert all(" in [2, 6]" in l for l in head if l.startswith("var "))


def test_inequalities_b0_nonzero(cert):
    for rec in generate_inequalities(cert):
        assert rec.b[0] != 0
        assert rec.multiplicity >= 1


def test_decay_constants_exact_values():
    d = decay_constants(Fraction(1, 1000))
    assert d.beta == Fraction(50000000, 999)
    assert d.edge_prefactor == 5000
    assert d.corollary_prefactor == 5
    assert d.coupling_cover_bound == 6000
    assert "ln" in d.beta_prime_symbolic
    assert abs(d.beta_prime - 0.0010005) < 1e-6
    assert decay_constants(Fraction(1, 2)).beta == 200
    with pytest.raises(ValueError):
        decay_constants(Fraction(3, 2))


def test_mu_table_matches_shipped_regions(cert):
    # the table is complete and every region file parses with anchors
    assert len(cert.m_images) == 39
    for i in range(1, 40):
        assert cert.mu_table.value(i) > 0
