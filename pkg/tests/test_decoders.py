import numpy as np
import pytest

from golden_codes.chain import build_toric_code
from golden_codes.decoders import (
    CSV_HEADER,
    DecoderContext,
    ErrorChain,
    Syndrome,
    decode_greedy,
    decode_x,
    decode_z,
    gf2_solve,
    monte_carlo,
    residual_check,
    sample_error,
    shorten_move,
    syndrome_of,
    trial_rng,
)


# ------------------------------------------------------------ generic parts


def test_error_chain_validation_and_xor():
    a = ErrorChain((1, 3), "Z")
    assert (a ^ ErrorChain((3, 4), "Z")).qubits == (1, 4)
    with pytest.raises(ValueError):
        ErrorChain((1,), "Y")


def test_gf2_solve():
    cols = [[0, 1], [1, 2], [0, 2], [3]]
    sol = gf2_solve(cols, [0, 2])
    got = set()
    for i in sol:
        got ^= set(cols[i])
    assert got == {0, 2}
    assert gf2_solve(cols, [4]) is None
    assert gf2_solve(cols, []) == []


def test_trial_streams_are_independent_and_repeatable():
    a = sample_error(1000, trial_rng(7, 3), weight=5)
    b = sample_error(1000, trial_rng(7, 3), weight=5)
    c = sample_error(1000, trial_rng(7, 4), weight=5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert len(sample_error(1000, trial_rng(1, 0), p=0.0)) == 0
    with pytest.raises(ValueError):
        sample_error(10, trial_rng(1, 0))


@pytest.mark.parametrize("kind", ["Z", "X"])
def test_toric_single_errors_always_decode(kind):
    code = build_toric_code(3)
    for q in range(code.n):
        err = ErrorChain((q,), kind)
        rep = decode_greedy(code, syndrome_of(code, err))
        assert rep.verdict == "success"
        assert residual_check(code, err, rep.estimate) == "success"


def test_residual_check_classes():
    from golden_codes.chain import build_toric_code_direct

    # edges (x, 0, horizontal) have ids 2 * (3x) and wrap around the torus
    code = build_toric_code_direct(3)
    logical = ErrorChain(tuple(2 * (x * 3) for x in range(3)), "Z")
    assert not syndrome_of(code, logical).checks
    empty = ErrorChain((), "Z")
    assert residual_check(code, logical, empty) == "logical_suspect"
    stab = ErrorChain(tuple(code.hz.row(0).tolist()), "Z")
    assert residual_check(code, stab, empty) == "success"
    assert residual_check(code, ErrorChain((0,), "Z"), empty) == "stalled"


def test_monte_carlo_csv_and_determinism():
    code = build_toric_code(4)
    a = monte_carlo(code, "Z", 60, seed=42, weight=1)
    b = monte_carlo(code, "Z", 60, seed=42, weight=1)
    assert a.to_csv() == b.to_csv()
    lines = a.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) == "trial,weight,syndrome_weight,iterations,verdict"
    assert len(lines) == 61 and a.success_rate == 1.0
    assert monte_carlo(code, "X", 60, seed=42, weight=1, workers=2).to_csv() == monte_carlo(code, "X", 60, seed=42, weight=1).to_csv()
    with pytest.raises(ValueError):
        monte_carlo(code, "Z", 0, seed=1, weight=1)


def test_greedy_trace_is_strictly_decreasing():
    code = build_toric_code(6)
    for t in range(30):
        err = ErrorChain(tuple(sample_error(code.n, trial_rng(5, t), weight=3).tolist()), "Z")
        rep = decode_greedy(code, syndrome_of(code, err))
        assert all(b < a for a, b in zip(rep.weights, rep.weights[1:]))


def test_context_needs_four_dimensions():
    from golden_codes.tessellation import build_120cell_skeleton

    with pytest.raises(ValueError):
        DecoderContext(build_120cell_skeleton().tessellation)


# ------------------------------------------------------- golden instance


@pytest.mark.slow
def test_quotient_vertex_graph(golden_ctx):
    d = golden_ctx.vertex_distance
    assert d.max() == 3
    assert np.bincount(d[0]).tolist() == [1, 120, 649, 530]
    assert golden_ctx.neighbors.shape == (1300, 120)


@pytest.mark.slow
def test_square_move_fills_with_that_square(golden_ctx):
    ctx = golden_ctx
    for sq in (0, 1234, 200_000):
        e = ctx.square_edges[sq].tolist()
        fill = shorten_move(ctx, e[:3], e[3:], "Z")
        assert fill is not None
        boundary = set()
        for f in fill:
            boundary ^= set(ctx.square_edges[f].tolist())
        assert boundary == set(e)
    with pytest.raises(ValueError):
        shorten_move(ctx, [0], [1], "X")


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["Z", "X"])
def test_single_errors_decode(golden, golden_ctx, kind):
    decode = decode_z if kind == "Z" else decode_x
    for q in np.linspace(0, golden.code.n - 1, 40).astype(int).tolist():
        err = ErrorChain((q,), kind)
        syn = syndrome_of(golden.code, err)
        assert len(syn) == (4 if kind == "Z" else 5)
        rep = decode(golden_ctx, syn)
        assert rep.verdict == "success" and rep.iterations >= 1
        assert residual_check(golden.code, err, rep.estimate) == "success"
        assert all(b < a for a, b in zip(rep.weights, rep.weights[1:]))


@pytest.mark.slow
def test_stabilizer_error_needs_no_correction(golden, golden_ctx):
    # the six 2-faces of a cube form a Z-stabiliser: zero syndrome, trivial residual
    cube = golden.code.hz.row(17).tolist()
    err = ErrorChain(tuple(cube), "Z")
    syn = syndrome_of(golden.code, err)
    assert not syn.checks
    rep = decode_z(golden_ctx, syn)
    assert rep.iterations == 0
    assert residual_check(golden.code, err, rep.estimate) == "success"


@pytest.mark.slow
def test_adjacent_pair_decodes(golden, golden_ctx):
    # two squares sharing an edge: a length-6 syndrome loop
    ctx = golden_ctx
    e = int(ctx.square_edges[0][0])
    a, b = ctx.edge_squares[e][:2].tolist()
    err = ErrorChain(tuple(sorted((a, b))), "Z")
    syn = syndrome_of(golden.code, err)
    assert len(syn) == 6
    rep = decode_z(ctx, syn)
    assert rep.verdict == "success"
    assert residual_check(golden.code, err, rep.estimate) == "success"


@pytest.mark.slow
def test_golden_monte_carlo_rows(golden, golden_ctx):
    res = monte_carlo(golden.code, "X", 10, seed=3, weight=2, ctx=golden_ctx)
    assert [r[0] for r in res.rows] == list(range(10))
    assert all(r[2] <= 5 * r[1] for r in res.rows)
