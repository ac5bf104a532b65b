"""
Nine cubes that do not fit
==========================

Nine cubes of side 2/5 fill only 0.576 of the unit cube, so the plain
volume test cannot reject them.  Rounding every side up to 1/2 is a
conservative change (no feasible packing is lost) and pushes the volume
past 1.
"""
from packbounds import ConservativeScale, UStep, normalize, parse_instance, volume_criterion
from packbounds.oracle import exact_packable

text = "d 3\ncontainer 5 5 5\n" + "".join(f"box c{k} 2 2 2\n" for k in range(9))
inst = normalize(parse_instance(text))

###############################################################################
# Plain volume first.

plain = volume_criterion(inst, ConservativeScale.identity(3))
print("identity:", plain.volume, plain.verdict)

###############################################################################
# ``u(2)`` maps 2/5 to 1/2 in every axis.

scale = ConservativeScale.of(UStep(2), UStep(2), UStep(2))
check = volume_criterion(inst, scale)
print("u(2) in every axis:", check.volume, check.verdict)

###############################################################################
# The brute-force packer agrees: eight cubes fit, nine do not.

print("eight pack:", exact_packable(inst.subset(inst.ids[:8])))
print("nine pack:", exact_packable(inst, max_boxes=9))
