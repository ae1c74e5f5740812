"""divfree: divergence-free symmetric tensor fields, their projective
transforms, gas-dynamics and kinetic realizations, and the dispersive
functional inequalities they satisfy."""

from .tensor_field import (GridSpec, SymTensorField, discrete_divergence,
                           positivity_report, det_power, space_time_integral,
                           schur_stress, measure_norm)
from .projective import (ProjectiveMap, GeneralLinearAction, alpha_matrix,
                         transform_tensor_values, push_forward, group_action,
                         determinantal_mass_scale)

__version__ = "0.1.0"
