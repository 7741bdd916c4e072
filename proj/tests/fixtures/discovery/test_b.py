from lib import clamp


class TestClamp:
    def test_low(self):
        assert clamp(-5, 0, 10) == 0

    def test_high(self):
        assert clamp(50, 0, 10) == 10

    def test_mid(self):
        assert clamp(5, 0, 10) == 5


def test_clamp_equal_bounds():
    assert clamp(3, 3, 3) == 3


def test_clamp_order():
    value = clamp(7, 0, 10)
    assert value == 7
