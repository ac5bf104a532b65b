"""
Knapsack relaxation and checking new functions
==============================================

A conservative scale turns the packing knapsack into a one-dimensional
knapsack over transformed volumes.  Any candidate rounding function can be
screened exhaustively before it is trusted.
"""
from fractions import Fraction as F

from packbounds import ConservativeScale, NormalizedInstance, UStep, okp_relaxation_bound, parse_dff
from packbounds.oracle import check_dff, okp_optimum

inst = NormalizedInstance.from_sizes(
    [(F(3, 5), F(3, 5)), (F(3, 5), F(3, 5)), (F(2, 5), F(1)), (F(2, 5), F(2, 5))],
    values=[6, 5, 3, 2])

for scale in (ConservativeScale.identity(2), ConservativeScale.of(UStep(1), UStep(1))):
    print(scale.describe(), "->", okp_relaxation_bound(inst, scale))
print("best packable value:", okp_optimum(inst))

###############################################################################
# Compositions and mixtures stay dual feasible.

f = parse_dff("convex(1/2*phi(1/3)+1/2*compose(u(2),U(1/4)))")
print(f, check_dff(f).holds)

###############################################################################
# Doubling small items is not.

verdict = check_dff(lambda x: min(F(1), 2 * x))
print("min(1, 2x):", [str(x) for x in verdict.counterexample], "maps to", verdict.image_sum)
