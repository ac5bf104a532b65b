"""
Stretching a box under fixed edges
==================================

During branch-and-bound some pairs of boxes are already known to overlap in
their projection on an axis.  Such pairs can never sit side by side along
that axis, which leaves slack that one box may absorb.
"""
from packbounds import normalize, parse_instance, stretch, total_volume
from packbounds.bounds import transformed_volume
from packbounds.scales import feasible_companions, max_companion_width

text = """\
d 2
container 20 13
box 1 8 7
box 2 8 7
box 3 12 4
box 4 6 6
box 5 6 6
box 6 8 3
edges 1 1-3 4-5
"""
inst = normalize(parse_instance(text))
print("plain volume:", total_volume(inst.boxes))

###############################################################################
# Box 1 can share a row with 2, 4, 5 or 6 but not with 3.  Since 4 and 5
# also exclude each other, the widest row through box 1 is 16 of 20.

print("companions:", sorted(feasible_companions(inst, None, "1", 0)))
print("widest row:", max_companion_width(inst, None, "1", 0).value * 20, "of 20")

###############################################################################
# Widen box 1 by the unused 4 units and recompute the volume.

scale = stretch(inst, None, "1", 0)
print("box 1 width:", scale.table["1"][0] * 20)
vol = transformed_volume(inst, scale)
print("stretched volume:", vol, "=", vol * 260, "/ 260", "-> infeasible" if vol > 1 else "")
