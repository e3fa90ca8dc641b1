from fractions import Fraction as Q

import pytest

from graev.fpairs import FPair, check_pair, make_pair, rho
from graev.groups import alternating_subgroup
from graev.hnn import (U_SIDE, build_hnn, check_hnn, check_subgroup_metric_agreement, free_product_with_cyclic,
                       in_conjugated_subgroup, is_hereditary, make_hereditary, make_rigid,
                       remainder_sizes_of_u_nodes, restriction_violations, rigid_violations, stable_letter_norm,
                       u_exponent_sum, u_window_space)
from graev.instances import s3_chain_metric
from graev.metrics import NormalChain, metric_from_chain
from graev.oracles import unrestricted_norms
from graev.product import product_norm_dp
from graev.report import ValidationError
from graev.spaces import METRIC, validate_space

M = s3_chain_metric()
G = M.group
E = G.identity
A3 = alternating_subgroup(G)


def trivial_hnn():
    return build_hnn(M, (E,), (E,), {E: E}, 1)


def a3_hnn():
    return build_hnn(M, A3, A3, {a: a for a in A3}, Q(1, 2))


@pytest.mark.parametrize("make,k", [(trivial_hnn, 1), (a3_hnn, Q(1, 2))])
def test_stable_letter_has_norm_k(make, k):
    hnn = make()
    st = stable_letter_norm(hnn)
    assert st.value == k == st.lower_bound
    assert restriction_violations(hnn) == []


@pytest.mark.parametrize("make", [trivial_hnn, a3_hnn])
def test_subgroup_metric_agreement(make):
    rep, count = check_subgroup_metric_agreement(make(), 2)
    assert rep.ok and count > 0


def test_large_diameter_gives_a_disagreement_witness():
    big = metric_from_chain(G, NormalChain([tuple(range(6)), A3, (E,)], [4, 2]))
    hnn = build_hnn(big, A3, A3, {a: a for a in A3}, 1, check_diameter=False)
    rep, _ = check_subgroup_metric_agreement(hnn, 2)
    assert not rep.ok
    assert any(v.rule == "agreement" for v in rep)


def test_hnn_data_is_validated():
    c = G.index("(123)")
    bad_phi = {E: E, c: c, G.mul(c, c): E}
    assert "bijection" in {v.rule for v in check_hnn(M, A3, A3, bad_phi, 1)}
    swap = {E: E, c: G.mul(c, c), G.mul(c, c): c}
    assert check_hnn(M, A3, A3, swap, 1).ok
    assert "positive-K" in {v.rule for v in check_hnn(M, (E,), (E,), {E: E}, 0)}
    assert "diameter" in {v.rule for v in check_hnn(M, A3, A3, {a: a for a in A3}, Q(1, 4))}
    with pytest.raises(ValidationError):
        build_hnn(M, A3, A3, {a: a for a in A3}, Q(1, 4))


def test_conjugated_subgroup_membership():
    hnn = a3_hnn()
    c = G.index("(123)")
    assert in_conjugated_subgroup(hnn, hnn.conj_u(c))
    s = hnn.with_u
    u = s.element(U_SIDE, 1)
    assert not in_conjugated_subgroup(hnn, u)
    t = G.index("(12)")
    assert not in_conjugated_subgroup(hnn, s.multiply(s.multiply(u, s.element(0, t)), s.inverse(u)))


def test_cap_is_validated_against_unrestricted_search():
    hnn = trivial_hnn()
    s = hnn.with_u
    targets = sorted(s.reachable(2, cap=1), key=s.label)
    free = unrestricted_norms(s, targets, 4, s.letters(3))
    for f in targets:
        assert free[f] == hnn.norm_u(f)


def test_u_window_space():
    ultra = u_window_space(1, 2)
    assert validate_space(ultra).ok
    metric = u_window_space(1, 2, METRIC)
    assert validate_space(metric).ok
    assert metric.d(metric.index("u^2"), metric.index("u^-2")) == 4


def hnn_pairs(setup):
    """Optimal and all-identity f-pairs for elements with u-exponent sum 0 that use u."""
    one = setup.one_letter()
    out = []
    for f in sorted(setup.reachable(4, cap=2), key=setup.label)[::5]:
        alpha = setup.base_reduced_form(f)
        if u_exponent_sum(alpha) != 0 or all(x[0] != U_SIDE for x in alpha):
            continue
        out.append(product_norm_dp(setup, f, cap=2).pair)
        out.append(make_pair(setup, alpha, [one] * len(alpha)))
    return out


def test_hereditary_and_rigid_pairs():
    s = free_product_with_cyclic(M, 1)
    pairs = hnn_pairs(s)
    assert len(pairs) > 20
    for p in pairs:
        h = make_hereditary(s, p)
        assert check_pair(s, h) == []
        assert is_hereditary(h)
        assert rho(s, h) <= rho(s, p)
        assert all(size == 2 for size in remainder_sizes_of_u_nodes(s, h))
        r = make_rigid(s, h)
        assert check_pair(s, r) == []
        assert rigid_violations(s, r) == []
        assert rho(s, r) <= rho(s, h)


def test_hereditary_repairs_a_clash():
    s = free_product_with_cyclic(M, 1)
    u, ui = s.letter(U_SIDE, 1), s.letter(U_SIDE, -1)
    x = s.letter(0, G.index("(12)"))
    # zeta = u^-1 ... u mismatches alpha = u x u^-1 at the u-letters
    p = make_pair(s, [u, x, ui], [ui, s.one_letter(), u])
    assert not is_hereditary(p)
    h = make_hereditary(s, p)
    assert is_hereditary(h) and rho(s, h) <= rho(s, p)


def test_rigid_needs_reduced_alpha():
    s = free_product_with_cyclic(M, 1)
    u = s.letter(U_SIDE, 1)
    one = s.one_letter()
    p = FPair((u, u), (one, one), s.evaluate([u, u]))
    with pytest.raises(ValidationError):
        make_rigid(s, make_pair(s, [u, s.letter(U_SIDE, -1), u], [one] * 3))
    with pytest.raises(ValidationError):
        make_rigid(s, make_pair(s, [u], [one]))
    assert rigid_violations(s, p)
