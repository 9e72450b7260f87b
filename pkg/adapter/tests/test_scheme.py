import pytest

from framestack.scheme import SchemeError, parse_scheme, stack_spec


def test_sparse_symmetric_window():
    scheme = parse_scheme("x_X_x")
    assert scheme.offsets == (-2, 0, 2)
    assert scheme.frames_used == 3
    assert scheme.focus_slot == 1


def test_single_frame():
    scheme = parse_scheme("X")
    assert scheme.offsets == (0,)
    assert scheme.focus_slot == 0


def test_dense_five_frame_window():
    scheme = parse_scheme("xxXxx")
    assert scheme.offsets == (-2, -1, 0, 1, 2)
    assert stack_spec(scheme).channel_count == 15


def test_asymmetric_scheme_accepted():
    assert parse_scheme("xxX").offsets == (-2, -1, 0)


def test_underscores_only_contribute_spacing():
    assert parse_scheme("x__X").offsets == (-3, 0)


@pytest.mark.parametrize("pattern", ["", "xx", "XX", "xXxX", "x_y_X", "x X"])
def test_malformed_rejected(pattern):
    with pytest.raises(SchemeError):
        parse_scheme(pattern)


def test_channel_count_rule():
    for pattern in ("X", "xXx", "x_X_x", "xxXxx", "xxX"):
        scheme = parse_scheme(pattern)
        spec = stack_spec(scheme)
        assert spec.channel_count == 3 * (pattern.count("x") + 1)
        assert spec.channel_count % 3 == 0
        assert spec.boundary_policy == "clamp"
