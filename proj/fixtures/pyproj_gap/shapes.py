"""Perimeter helpers for the coverage-gap fixture."""


def square(side):
    return 4 * side


def rectangle(width, height):
    return 2 * (width + height)


def triangle(a, b, c):
    return a + b + c


def circle(radius):
    return int(2 * 31416 * radius / 5000)
