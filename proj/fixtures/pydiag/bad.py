"""Totals a list of priced items."""


def total(items):
    return sum(item.price for item in itms)
