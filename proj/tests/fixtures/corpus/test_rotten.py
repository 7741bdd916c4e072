import pytest

from app import (
    RingBuffer,
    Store,
    filter_positive,
    make_comparator,
    make_config,
    parse_int,
    probe_feature,
)
from helpers import check_negative, check_normalized_roundtrip, check_positive


def test_config_branch_assertions():
    cfg = make_config("prod")
    if cfg.debug:
        assert cfg.log_level == "verbose"
        assert cfg.tracing
    assert cfg.name == "prod"


def test_window_list_empty():
    buf = RingBuffer(4)
    buf.push(1)
    windows = buf.windows()
    for window in windows:
        assert window[0] >= 1
    assert buf.capacity == 4


def test_parse_sign_helper():
    value = parse_int("7")
    if value >= 0:
        value = value + 1
    else:
        check_negative(value)
    assert value == 8


def test_filter_positive_empty():
    items = filter_positive([])
    for item in items:
        check_positive(item)
    assert items == []


def test_comparator_normalization():
    comparator = make_comparator(False)
    check_normalized_roundtrip(comparator)


def test_store_flush_guard():
    store = Store("memory")
    if not store.persistent:
        return
    assert store.flush_count == 0


def test_parse_magic_dead_fail():
    value = parse_int("41")
    if value is None:
        assert 1 == 2
    assert value == 41


def test_parse_swallowed_failure():
    try:
        value = parse_int("13")
        assert False
    except Exception:
        pass


def test_smoke_setup_only():
    buffer = RingBuffer(2)
    buffer.push(1)
    store = Store("memory")
    store.put("a", 1)


def test_feature_probe_both_branches():
    module = probe_feature("takewhile")
    if module is not None:
        assert module == "itertools"
    else:
        assert module is None
