"""Tri-polarized near-field holographic MIMO channel model."""

from .channel import (
    POLS,
    PolarizedChannel,
    SurfaceConfiguration,
    apply_configuration,
    assemble,
    patch_block,
    read_channel,
    reduce_polarization,
    write_channel,
)
from .correlation import (
    corr_closed_form,
    corr_exact,
    corr_exact_component,
    corr_sweep,
    corr_taylor_paper,
    reference_correlation,
)
from .em_core import SingularityError, Wavenumber, dyadic_coeffs, dyadic_green, scalar_green, sinc
from .geometry import (
    SurfaceSpec,
    UserLayout,
    aperture,
    near_field_boundary,
    patch_centers,
    patch_size_feasible,
)
from .metrics import capacity, capacity_sweep, eigen_spectrum
from .precoding import build_precoders, cluster_channels, cluster_users, precoded_output

__version__ = "0.1.0"
