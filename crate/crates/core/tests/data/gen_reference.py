#!/usr/bin/env python3
"""Regenerate the reference b-files used by the sequence audit tests.

Independent of the Rust crate: plain enumeration over divisors using
sympy, with no closed forms and no shared code.

    python3 gen_reference.py
"""
from functools import lru_cache

from sympy import divisors


@lru_cache(maxsize=None)
def factorizations(n, least):
    # unordered factorizations of n into factors >= least, each > 1
    if n == 1:
        return 1
    return sum(factorizations(n // d, d) for d in divisors(n) if d >= least)


def triples(n):
    # x <= y <= z, x*y*z = n, positive integers
    count = 0
    for x in divisors(n):
        if x ** 3 > n:
            break
        rest = n // x
        for y in divisors(rest):
            if y < x:
                continue
            if y * y > rest:
                break
            count += 1
    return count


def write(path, name, values):
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# {name}\n")
        for index, value in values:
            fh.write(f"{index} {value}\n")


if __name__ == "__main__":
    write("b001055.txt", "A001055: number of unordered factorizations of n",
          [(n, factorizations(n, 2)) for n in range(1, 1001)])
    write("b034836.txt", "A034836: number of ways to write n as x*y*z with 1 <= x <= y <= z",
          [(n, triples(n)) for n in range(1, 1001)])
