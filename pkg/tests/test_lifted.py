"""Lifted subspace codes: lifting, reduction, decode vs oracle."""

import pytest

from lsc.channel import ChannelSpec, apply_exact
from lsc.errors import ParameterError
from lsc.gabidulin import DecodeFailure, GabidulinCode
from lsc.lifted import (
    LiftedCode,
    brute_force_subspace_decode,
    codeword_subspaces,
    lift,
    reduce_received,
    subspace_decode,
)
from lsc.linalg import MatrixFq, Subspace, rank_distance, subspace_distance
from lsc.rng import SplitMix64


@pytest.fixture(scope="module")
def lifted31(fp24):
    return LiftedCode(GabidulinCode.standard(fp24, 3, 1))


def test_lift_structure(fp24, lifted31):
    inner = lifted31.inner
    zero = lift(inner, MatrixFq.zeros(2, 3, 4))
    assert zero.dim == 3
    assert zero.basis.entries[0] == (1, 0, 0, 0, 0, 0, 0)
    subspaces = {lift(inner, inner.encode(m)) for m in inner.iter_messages()}
    assert len(subspaces) == 16  # injectivity


def test_min_subspace_distance_values(fp24):
    assert LiftedCode(GabidulinCode.standard(fp24, 3, 1)).min_subspace_distance == 6
    assert LiftedCode(GabidulinCode.standard(fp24, 4, 1)).min_subspace_distance == 8
    assert LiftedCode(GabidulinCode.standard(fp24, 3, 3)).min_subspace_distance == 2


def test_distance_identity_exhaustive(fp24):
    for n in (3, 4):
        code = LiftedCode(GabidulinCode.standard(fp24, n, 1))
        triples = codeword_subspaces(code)
        dmin = None
        for i in range(len(triples)):
            for j in range(i + 1, len(triples)):
                ds = subspace_distance(triples[i][0], triples[j][0])
                assert ds == 2 * rank_distance(triples[i][1], triples[j][1])
                dmin = ds if dmin is None else min(dmin, ds)
        assert dmin == code.min_subspace_distance


def test_reduction_on_clean_codeword(fp24, lifted31):
    inner = lifted31.inner
    msg = (fp24.from_index(13),)
    space = lift(inner, inner.encode(msg))
    word, row_hints, col_hints = reduce_received(lifted31, space)
    assert row_hints.rows == 0 and col_hints.rows == 0
    assert word.as_matrix() == inner.encode(msg).as_matrix()


def test_decode_zero_distance(fp24, lifted31):
    for msg in lifted31.inner.iter_messages():
        space = lift(lifted31.inner, lifted31.inner.encode(msg))
        result = subspace_decode(lifted31, space)
        assert result.message == msg


def test_guaranteed_regime_random_trials(fp24, lifted31):
    rng = SplitMix64(21)
    for rho, t in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]:
        for _ in range(150):
            msg = (fp24.from_index(rng.randbelow(16)),)
            space = lift(lifted31.inner, lifted31.inner.encode(msg))
            outcome = apply_exact(space, ChannelSpec(rho=rho, t=t), rng)
            result = subspace_decode(lifted31, outcome.U)
            assert not isinstance(result, DecodeFailure)
            assert result.message == msg
            oracle = brute_force_subspace_decode(lifted31, outcome.U)
            assert oracle.message == msg


def test_never_contradicts_oracle(fp24, lifted31):
    rng = SplitMix64(22)
    for _ in range(400):
        rho, t = rng.randbelow(4), rng.randbelow(4)
        msg = (fp24.from_index(rng.randbelow(16)),)
        space = lift(lifted31.inner, lifted31.inner.encode(msg))
        outcome = apply_exact(space, ChannelSpec(rho=rho, t=t), rng)
        result = subspace_decode(lifted31, outcome.U)
        oracle = brute_force_subspace_decode(lifted31, outcome.U)
        if not isinstance(result, DecodeFailure) and not isinstance(oracle, DecodeFailure):
            assert result.message == oracle.message


def test_oracle_tie_case(fp24, lifted31):
    # the zero subspace is equidistant from every lifted codeword
    outcome = brute_force_subspace_decode(lifted31, Subspace.zero(2, 7))
    assert isinstance(outcome, DecodeFailure)
    assert outcome.reason == "tie"


def test_ambient_mismatch_rejected(fp24, lifted31):
    with pytest.raises(ParameterError):
        subspace_decode(lifted31, Subspace.zero(2, 8))
    with pytest.raises(ParameterError):
        lift(lifted31.inner, MatrixFq.zeros(2, 2, 4))


def test_extra_dimensions_are_handled(fp24, lifted31):
    """Payload-pivot dimensions flow through the hint path, not a rejection."""
    inner = lifted31.inner
    msg = (fp24.from_index(6),)
    space = lift(inner, inner.encode(msg))
    rng = SplitMix64(23)
    outcome = apply_exact(space, ChannelSpec(rho=0, t=2), rng)
    assert outcome.U.dim == 5  # more dimensions than the code length
    result = subspace_decode(lifted31, outcome.U)
    assert result.message == msg
