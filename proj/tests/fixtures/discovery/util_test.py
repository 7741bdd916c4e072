from lib import add


def test_util_one():
    total = add(2, 2)
    assert total == 4


def test_util_closure():
    def check(value):
        assert value == 4

    check(add(2, 2))


def test_util_loop():
    for i in range(3):
        assert add(i, 0) == i
