import math

import numpy as np
import pytest

from polar_automorph import (
    AffineMap,
    BlockStructure,
    Gf2Matrix,
    InfoSet,
    NodeClass,
    OpposingInfinitiesError,
    PolarCode,
    apply_perm,
    classify_node,
    closure_from_z,
    encode,
    f_llr,
    f_minsum,
    g_llr,
    perm_from_affine,
    sample_blta,
    sc_decode,
    sc_decode_batch,
)


def codebook(code):
    msgs = ((np.arange(1 << code.k)[:, None] >> np.arange(code.k)) & 1).astype(np.uint8)
    return encode(code, msgs)


def ml_decode(code, Y, chunk=64):
    """Exhaustive maximum-correlation decoding."""
    C = codebook(code)
    S = 1.0 - 2.0 * C
    out = []
    for lo in range(0, len(Y), chunk):
        out.append(C[np.argmax(Y[lo:lo + chunk] @ S.T, axis=1)])
    return np.concatenate(out)


def special_codes(m):
    n = 1 << m
    return {
        NodeClass.RATE0: InfoSet(m, frozenset()),
        NodeClass.RATE1: InfoSet.full(m),
        NodeClass.REP: InfoSet(m, frozenset({0})),
        NodeClass.SPC: InfoSet(m, frozenset(range(n - 1))),
    }


# --- node functions -----------------------------------------------------


def test_f_examples():
    assert f_llr(0.0, 7.3) == 0.0
    assert f_llr(math.inf, -2.5) == -2.5
    assert f_llr(-math.inf, 2.5) == -2.5
    assert f_llr(math.inf, math.inf) == math.inf
    want = math.log((math.exp(5) + 1) / (math.exp(2) + math.exp(3)))
    assert f_llr(2.0, 3.0) == pytest.approx(want, rel=1e-12)
    assert f_llr(2.0, 3.0) == pytest.approx(1.693454, abs=1e-6)


def test_f_matches_tanh_rule(rng):
    a = rng.normal(0, 4, 1000)
    b = rng.normal(0, 4, 1000)
    want = 2 * np.arctanh(np.tanh(a / 2) * np.tanh(b / 2))
    assert np.allclose(f_llr(a, b), want, atol=1e-9)


def test_minsum_examples():
    assert f_minsum(2.0, -3.0) == -2.0
    assert f_minsum(math.inf, 4.0) == 4.0
    assert f_minsum(0.0, -1.0) == 0.0


def test_g_examples():
    assert g_llr(0, 2.0, 3.0) == 5.0
    assert g_llr(1, 2.0, 3.0) == 1.0
    assert g_llr(1, 0.0, -4.0) == -4.0
    assert g_llr(1, -math.inf, math.inf) == math.inf
    with pytest.raises(OpposingInfinitiesError):
        g_llr(0, math.inf, -math.inf)
    with pytest.raises(OpposingInfinitiesError):
        g_llr(1, math.inf, math.inf)


# --- decoder ------------------------------------------------------------


def test_rate0_gives_zero_word():
    res = sc_decode(InfoSet(3, frozenset()), np.array([-5.0] * 8))
    assert not res.codeword.any()


def test_two_step_hand_trace():
    res = sc_decode(PolarCode(InfoSet.from_z(1, [1])), np.array([-1.0, -3.0]), keep_leaves=True)
    assert res.message.tolist() == [0, 1]
    assert res.codeword.tolist() == [1, 1]
    # the information leaf saw g(0, -1, -3) = -4
    assert res.leaf_llrs[1] == -4.0


def test_tie_decides_zero():
    res = sc_decode(InfoSet.full(2), np.zeros(4))
    assert not res.codeword.any()


def test_length_checks():
    with pytest.raises(ValueError):
        sc_decode(InfoSet.full(2), np.zeros(3))
    with pytest.raises(ValueError):
        sc_decode(InfoSet.full(1), np.array([np.nan, 1.0]))


@pytest.mark.parametrize("minsum", [True, False])
def test_noiseless_recovery(rng, minsum):
    for m in range(1, 9):
        info = closure_from_z(m, [int(rng.integers(0, 1 << m))])
        code = PolarCode(info)
        msgs = rng.integers(0, 2, (20, code.k))
        C = encode(code, msgs)
        Y = 30.0 * (1.0 - 2.0 * C)
        out = sc_decode_batch(info.mask(), Y, minsum=minsum)
        assert np.array_equal(out.codeword, C)
        assert np.array_equal(out.info_bits(code), msgs)


def test_reencode_consistency(rng):
    code = PolarCode(closure_from_z(6, [24]))
    Y = rng.normal(0, 2, (300, code.n))
    for minsum in (True, False):
        res = sc_decode_batch(code.mask(), Y, minsum=minsum)
        assert not res.message[:, ~code.mask()].any()
        assert np.array_equal(encode(code, res.info_bits(code)), res.codeword)


def test_batch_equals_single(rng):
    info = closure_from_z(5, [6])
    Y = rng.normal(0, 2, (40, 32))
    batch = sc_decode_batch(info.mask(), Y).codeword
    for y, x in zip(Y, batch):
        assert np.array_equal(sc_decode(info, y).codeword, x)


def test_deterministic(rng):
    info = closure_from_z(6, [24])
    y = rng.normal(0, 2, 64)
    a, b = sc_decode(info, y), sc_decode(info, y.copy())
    assert np.array_equal(a.codeword, b.codeword) and np.array_equal(a.message, b.message)


def test_infinite_llrs_pin_the_decision():
    info = InfoSet.full(2)
    y = np.array([np.inf, -np.inf, np.inf, -np.inf])
    assert sc_decode(info, y).codeword.tolist() == [0, 1, 0, 1]


# --- special nodes ------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_minsum_sc_is_ml_on_special_nodes(m, rng):
    for cls, info in special_codes(m).items():
        if cls is NodeClass.SPC and m == 1:
            continue  # n=2 SPC coincides with Rep
        code = PolarCode(info)
        Y = rng.normal(0, 2, (1000, code.n))
        assert np.array_equal(sc_decode_batch(info.mask(), Y).codeword, ml_decode(code, Y)), cls


def test_exact_boxplus_sc_is_not_ml_on_spc4():
    # pinned regression: exact boxplus loses ML on a length-4 single parity check
    info = InfoSet(2, frozenset({0, 1, 2}))
    y = np.array([-2.83, 1.02, -0.96, -1.67])
    assert sc_decode(info, y, minsum=False).codeword.tolist() == [1, 1, 1, 1]
    assert ml_decode(PolarCode(info), y[None])[0].tolist() == [1, 0, 0, 1]
    assert sc_decode(info, y).codeword.tolist() == [1, 0, 0, 1]
    # ... and therefore fails to commute with the coordinate swap a1 <-> a2
    p = perm_from_affine(AffineMap(Gf2Matrix.from_array([[0, 1], [1, 0]]), 0))
    exact = sc_decode(info, apply_perm(p, y), minsum=False).codeword
    assert not np.array_equal(exact, apply_perm(p, sc_decode(info, y, minsum=False).codeword))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_special_nodes_commute_with_every_affine_map(m, rng):
    full = BlockStructure([m])
    for cls, info in special_codes(m).items():
        Y = rng.normal(0, 2, (200, 1 << m))
        direct = sc_decode_batch(info.mask(), Y).codeword
        for _ in range(20):
            p = perm_from_affine(sample_blta(full, rng))
            permuted = sc_decode_batch(info.mask(), apply_perm(p, Y)).codeword
            assert np.array_equal(permuted, apply_perm(p, direct)), cls


def test_classify_node(example1):
    assert classify_node(InfoSet(3, frozenset())) is NodeClass.RATE0
    assert classify_node(InfoSet.full(3)) is NodeClass.RATE1
    assert classify_node(InfoSet.from_z(4, range(1, 16))) is NodeClass.SPC
    assert classify_node(InfoSet.from_z(3, [7])) is NodeClass.REP
    assert classify_node(InfoSet.from_z(3, [3, 5, 6, 7])) is NodeClass.OTHER
