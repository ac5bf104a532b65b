"""
Bin counts in two and three dimensions
======================================

Two small instances where the classic partial bounds are too weak and the
scale-based versions reach the optimum.
"""
from fractions import Fraction as F

from packbounds import (NormalizedInstance, bound_L2d, bound_L3d, improved_2d, improved_3d,
                        mv_partial_2d, mv_partial_3d)
from packbounds.dff import candidate_params
from packbounds.oracle import min_bins

half = F(1, 2)

###############################################################################
# Three rectangles, any two of which overlap when placed in one square.

flat = NormalizedInstance.from_sizes([(F(2, 3), half), (half, F(2, 3)), (half, F(2, 3))])
ps = candidate_params(flat, 0)
print("partial bound over candidates:", max(mv_partial_2d(flat, p, q) for p in ps for q in ps))
print("improved at (1/2, 1/2):", improved_2d(flat, half, half))
report = bound_L2d(flat)
print("composite bound:", report.value, "via", report.scale.provenance)
print("true optimum:", min_bins(flat))

###############################################################################
# Five bricks of size (2/3, 1/2, 1/2).  Volume alone gives one bin.

bricks = NormalizedInstance.from_sizes([(F(2, 3), half, half)] * 5)
print("partial 3D bound:", mv_partial_3d(bricks, half, half))
print("improved 3D bound:", improved_3d(bricks, half, half))
print("composite bound:", bound_L3d(bricks).value, "true optimum:", min_bins(bricks))
