"""Layered code construction, extraction, and both decoding algorithms."""

import pytest

from lsc.channel import ChannelSpec, apply_exact
from lsc.errors import InvariantError, ParameterError
from lsc.gabidulin import GabidulinCode
from lsc.layered import STATUS_OK, LayeredCode
from lsc.lifted import lift
from lsc.linalg import (
    MatrixFq,
    Subspace,
    intersection,
    is_direct_sum,
    subspace_distance,
)
from lsc.rng import SplitMix64


def _random_messages(code, rng):
    size = code.params.size
    return [
        [code.params.from_index(rng.randbelow(size)) for _ in range(layer.k)]
        for layer in code.layers
    ]


def test_shape_and_distances(example_code):
    assert example_code.total_length == 7
    assert example_code.ambient_dim == 11
    assert example_code.offsets == (0, 3)
    assert example_code.min_distance() == 6
    assert [2 * l.min_rank_distance for l in example_code.layers] == [6, 8]


def test_encode_block_structure(fp24, example_code):
    rng = SplitMix64(31)
    word = example_code.encode(_random_messages(example_code, rng))
    assert word.V.dim == 7
    # layer 2 rows carry zeros on layer 1's identity block and vice versa
    for row in word.components[0].basis.entries:
        assert all(x == 0 for x in row[3:7])
    for row in word.components[1].basis.entries:
        assert all(x == 0 for x in row[0:3])
    assert is_direct_sum(word.components[0], word.components[1])
    # all-zero messages give the identity-plus-zero-payload space
    zero_word = example_code.encode([[fp24.zero()], [fp24.zero()]])
    expected = MatrixFq.identity(2, 7).hstack(MatrixFq.zeros(2, 7, 4))
    assert zero_word.V.basis == expected


def test_single_layer_reduces_to_lifting(fp24):
    code = LayeredCode.standard(fp24, [(3, 1)])
    msg = [fp24.from_index(9)]
    word = code.encode([msg])
    assert word.V == lift(code.layers[0], code.layers[0].encode(msg))


def test_extract_component_roundtrip(example_code):
    rng = SplitMix64(32)
    for _ in range(20):
        word = example_code.encode(_random_messages(example_code, rng))
        for layer in (1, 2):
            stripped = example_code.extract_component(word.V, layer)
            assert stripped == lift(
                example_code.layers[layer - 1], word.component_matrices[layer - 1]
            )
            unstripped = example_code.extract_component(word.V, layer, strip=False)
            assert unstripped == word.components[layer - 1]
            assert example_code.embed_component(layer, stripped) == unstripped


def test_extract_component_membership_oracle(tiny_code):
    """Every received vector vanishing on the other blocks lands in the extraction."""
    rng = SplitMix64(33)
    for _ in range(10):
        word = tiny_code.encode(_random_messages(tiny_code, rng))
        outcome = apply_exact(word.V, ChannelSpec(rho=1, t=1), rng)
        for layer in (1, 2):
            extracted = tiny_code.extract_component(outcome.U, layer, strip=False)
            offset = tiny_code.offsets[layer - 1]
            n_l = tiny_code.layers[layer - 1].n
            zero_cols = [
                c
                for c in range(tiny_code.total_length)
                if not offset <= c < offset + n_l
            ]
            member = {
                v
                for v in outcome.U.vectors()
                if all(v[c] == 0 for c in zero_cols)
            }
            assert set(extracted.vectors()) == member


def test_extract_validation(example_code):
    with pytest.raises(ParameterError):
        example_code.extract_component(Subspace.zero(2, 11), 3)
    with pytest.raises(ParameterError):
        example_code.extract_component(Subspace.zero(2, 9), 1)


def test_recompose_roundtrip_and_failure_dims(fp24, example_code):
    rng = SplitMix64(34)
    word = example_code.encode(_random_messages(example_code, rng))
    stripped = [
        lift(example_code.layers[i], word.component_matrices[i]) for i in range(2)
    ]
    assert example_code.recompose(stripped) == word.V
    # replacing a layer with the zero subspace drops exactly n_l dimensions
    partial = [stripped[0], Subspace.zero(2, 8)]
    assert example_code.recompose(partial).dim == word.V.dim - 4


def test_recompose_collision_raises(fp24, example_code):
    bad = Subspace.full(2, 7)  # not a lifted component; overlaps everything
    with pytest.raises((InvariantError, ParameterError)):
        example_code.recompose([bad, bad])


def test_distinct_component_tuples_give_distinct_codewords(tiny_code):
    params = tiny_code.params
    seen = {}
    for i in range(params.size):
        for j in range(params.size):
            word = tiny_code.encode([[params.from_index(i)], [params.from_index(j)]])
            assert word.V not in seen, "two component tuples gave one codeword"
            seen[word.V] = (i, j)
    assert len(seen) == params.size**2


def test_min_distance_achieved_on_tiny_code(tiny_code):
    words = []
    params = tiny_code.params
    for i in range(params.size):
        for j in range(params.size):
            words.append(
                tiny_code.encode([[params.from_index(i)], [params.from_index(j)]]).V
            )
    dmin = None
    pairs = 0
    for a in words:
        for b in words:
            pairs += 1
            if a != b:
                d = subspace_distance(a, b)
                dmin = d if dmin is None else min(dmin, d)
    assert pairs == 256
    assert dmin == tiny_code.min_distance() == 4


def test_extraction_distance_bound_and_identities(example_code):
    rng = SplitMix64(35)
    for _ in range(300):
        rho, t = rng.randbelow(5), rng.randbelow(5)
        word = example_code.encode(_random_messages(example_code, rng))
        outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=t), rng)
        ds = subspace_distance(word.V, outcome.U)
        for layer in (1, 2):
            u_l = example_code.extract_component(outcome.U, layer, strip=False)
            v_l = word.components[layer - 1]
            assert subspace_distance(v_l, u_l) <= ds
            assert intersection(v_l, outcome.U) == intersection(v_l, u_l)
            assert intersection(u_l, word.V) == intersection(u_l, v_l)


def test_guaranteed_regime_both_algorithms(example_code):
    rng = SplitMix64(36)
    for rho, t in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]:
        for _ in range(60):
            word = example_code.encode(_random_messages(example_code, rng))
            outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=t), rng)
            for report in (
                example_code.decode_alg1(outcome.U),
                example_code.decode_alg2(outcome.U),
                example_code.decode_alg2(outcome.U, iterative=True),
            ):
                assert report.all_ok
                assert report.recombined == word.V


def test_sic_accumulated_distance_monotone(example_code):
    rng = SplitMix64(37)
    for rho, t in [(1, 1), (2, 0), (0, 2)]:
        for _ in range(40):
            word = example_code.encode(_random_messages(example_code, rng))
            outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=t), rng)
            report = example_code.decode_alg2(outcome.U)
            chain = [subspace_distance(word.V, s) for s in report.accumulated]
            chain.append(subspace_distance(word.V, report.recombined))
            assert all(a >= b for a, b in zip(chain, chain[1:]))
            assert chain[0] == rho + t
            assert chain[-1] == 0
            # the final working space is U + V, so the last accumulated
            # distance equals the insertion count
            assert chain[-2] == t


def test_beyond_capability_patterns(example_code):
    """Seeded search reproduces both worked decoding patterns."""
    rng = SplitMix64(38)
    seen_alg1_beyond = seen_rescue = False
    trials = 0
    while not (seen_alg1_beyond and seen_rescue) and trials < 4000:
        trials += 1
        rho, t = (2, 2) if trials % 2 else (2, 1)
        word = example_code.encode(_random_messages(example_code, rng))
        outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=t), rng)
        layer_ds = tuple(
            subspace_distance(
                word.components[l - 1],
                example_code.extract_component(outcome.U, l, strip=False),
            )
            for l in (1, 2)
        )
        r1 = example_code.decode_alg1(outcome.U)
        if (
            not seen_alg1_beyond
            and (rho, t) == (2, 2)
            and layer_ds == (2, 2)
            and r1.all_ok
            and r1.recombined == word.V
        ):
            # overall distance 4 is beyond half the minimum distance 6
            assert subspace_distance(word.V, outcome.U) == 4
            seen_alg1_beyond = True
        if not seen_rescue and (rho, t) == (2, 1) and layer_ds == (3, 2):
            r2 = example_code.decode_alg2(outcome.U)
            if (
                r1.layers[0].status != STATUS_OK
                and r1.layers[1].status == STATUS_OK
                and r2.all_ok
                and r2.recombined == word.V
            ):
                # the layer-1 retry sees the space after layer 2 was added back
                retry = example_code.extract_component(r2.accumulated[1], 1, strip=False)
                assert subspace_distance(word.components[0], retry) == 2
                seen_rescue = True
    assert seen_alg1_beyond and seen_rescue


def test_alg2_order_is_configurable(example_code):
    rng = SplitMix64(39)
    word = example_code.encode(_random_messages(example_code, rng))
    outcome = apply_exact(word.V, ChannelSpec(rho=1, t=1), rng)
    forward = example_code.decode_alg2(outcome.U, order=[1, 2])
    assert forward.all_ok and forward.recombined == word.V
    assert forward.attempt_layers == [1, 2]
    with pytest.raises(ParameterError):
        example_code.decode_alg2(outcome.U, order=[1, 1])
    with pytest.raises(ParameterError):
        example_code.decode_alg2(outcome.U, max_sweeps=0)


def test_iterative_dominance_erasure_only(example_code):
    rng = SplitMix64(40)
    failures = rescued = 0
    for trial in range(150):
        rho = 3 + (trial % 2)
        word = example_code.encode(_random_messages(example_code, rng))
        outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=0), rng)
        plain = example_code.decode_alg2(outcome.U)
        iterative = example_code.decode_alg2(outcome.U, iterative=True)
        assert plain.decoded_layers <= iterative.decoded_layers
        if not plain.all_ok:
            failures += 1
        if iterative.decoded_layers > plain.decoded_layers:
            rescued += 1
    assert failures > 0


def test_report_bookkeeping(example_code):
    rng = SplitMix64(41)
    word = example_code.encode(_random_messages(example_code, rng))
    outcome = apply_exact(word.V, ChannelSpec(rho=1, t=0), rng)
    report = example_code.decode_alg2(outcome.U, iterative=True)
    assert report.sweeps >= 1
    assert len(report.accumulated) == len(report.attempt_layers) + 1
    assert report.stage_dims[0] == outcome.U.dim
    alg1 = example_code.decode_alg1(outcome.U)
    assert alg1.sweeps == 1 and alg1.accumulated == []
    # failed layers contribute the zero subspace
    if not alg1.all_ok:
        for res in alg1.layers:
            if res.status != STATUS_OK:
                assert res.component.dim == 0


def test_layer_field_mismatch_rejected(fp24):
    from lsc.field import FieldParams

    other = FieldParams.default(2, 3)
    with pytest.raises(ParameterError):
        LayeredCode(
            (
                GabidulinCode.standard(fp24, 3, 1),
                GabidulinCode.standard(other, 3, 1),
            )
        )
