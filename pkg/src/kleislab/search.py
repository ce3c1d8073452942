"""Tiny backtracking enumerator for finite constraint problems.

Variables are ``0..n-1`` assigned in that order.  ``checks[k]`` lists
predicates over the partial assignment that only mention variables ``<= k``;
they run right after variable ``k`` receives a value.
"""


def backtrack(domains, checks):
    n = len(domains)
    values = [None] * n

    def rec(k):
        if k == n:
            yield tuple(values)
            return
        for v in domains[k]:
            values[k] = v
            if all(c(values) for c in checks[k]):
                yield from rec(k + 1)
        values[k] = None

    yield from rec(0)
