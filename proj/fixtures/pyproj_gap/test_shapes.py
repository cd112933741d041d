from shapes import rectangle, square, triangle


def test_square():
    assert square(3) == 12


def test_rectangle():
    assert rectangle(2, 5) == 14


def test_triangle():
    assert triangle(3, 4, 5) == 12
