"""Lower bounds and infeasibility certificates for orthogonal packing
problems via dual feasible functions and conservative scales."""

from .model import (Box, EdgePresets, Instance, NormalizedInstance, normalize,
                    parse_instance, serialize_instance, total_volume, volume)
from .dff import (IDENTITY, Compose, Convex, DffSpec, Identity, PhiStep, Threshold,
                  UStep, candidate_params, evaluate, parse_dff)
from .scales import ConservativeScale, apply_scale, feasible_companions, stretch
from .bounds import (BoundReport, bound_L2d, bound_L3d, bound_obpp, bound_spp,
                     clique_requirement, improved_2d, improved_3d, mv_partial_2d,
                     mv_partial_3d, okp_relaxation_bound, volume_criterion)

__version__ = "0.1.0"
