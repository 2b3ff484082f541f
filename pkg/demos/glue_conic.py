"""Glue the two triangle charts of 1 + x + y + t xy and trace the polynomial at small t."""

from fractions import Fraction

from viropatch.checks import glue_bundle, oracle_compare, summary_line
from viropatch.fixtures import load_fixture

b = load_fixture("conic")
g = glue_bundle(b)
print(summary_line(g))
for t in (Fraction(1, 8), Fraction(1, 16), Fraction(1, 32)):
    print(oracle_compare(b, t, 256).line())
