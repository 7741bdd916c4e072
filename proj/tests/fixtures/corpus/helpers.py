"""Assertion-bearing helpers shared by the test modules."""


def check_positive(value):
    assert value > 0


def check_negative(value):
    assert value < 0


def check_value(actual, expected):
    assert actual == expected


def check_store_round_trip(store, key, expected):
    check_value(store.get(key), expected)


def check_normalized_roundtrip(comparator):
    if not comparator.supports_normalization:
        return
    assert comparator.compare_normalized(comparator) == 0


def normalize_chain(value, depth):
    if depth > 0:
        denormalize_chain(value, depth - 1)
    return value


def denormalize_chain(value, depth):
    if depth > 0:
        normalize_chain(value, depth - 1)
    return value
