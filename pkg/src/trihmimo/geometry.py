"""Planar patch-antenna surfaces and the near-field feasibility checks.

Every surface lies in a plane of constant z with its normal along +z. Patch
centers are enumerated row-major with x varying fastest; this ordering is the
single patch-index convention used by the channel and precoding modules.
"""

from dataclasses import dataclass, field

import numpy as np

from .em_core import Wavenumber

DEFAULT_MARGIN = 0.1


@dataclass(frozen=True)
class SurfaceSpec:
    """Regular ``n_x`` by ``n_y`` grid of rectangular patches.

    ``dx``/``dy`` are the center-to-center pitches and ``patch_wx``/``patch_wy``
    the radiating element widths, all in meters.
    """

    n_x: int
    n_y: int
    dx: float
    dy: float
    patch_wx: float
    patch_wy: float
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if int(self.n_x) != self.n_x or int(self.n_y) != self.n_y:
            raise ValueError("patch counts must be integers")
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError(f"patch counts must be >= 1, got {self.n_x}x{self.n_y}")
        if not 0 < self.patch_wx <= self.dx:
            raise ValueError(f"need 0 < patch_wx <= dx, got {self.patch_wx}, {self.dx}")
        if not 0 < self.patch_wy <= self.dy:
            raise ValueError(f"need 0 < patch_wy <= dy, got {self.patch_wy}, {self.dy}")
        center = tuple(float(c) for c in self.center)
        if len(center) != 3:
            raise ValueError("center must have three coordinates")
        object.__setattr__(self, "center", center)

    @property
    def n_patches(self) -> int:
        return self.n_x * self.n_y

    @property
    def patch_area(self) -> float:
        return self.patch_wx * self.patch_wy

    @property
    def is_square(self) -> bool:
        return self.n_x == self.n_y

    def moved_to(self, center) -> "SurfaceSpec":
        return SurfaceSpec(self.n_x, self.n_y, self.dx, self.dy,
                           self.patch_wx, self.patch_wy, tuple(center))


@dataclass(frozen=True)
class UserLayout:
    """Receive surfaces of ``K`` users, all with the same patch grid."""

    users: tuple
    tx_center: tuple = (0.0, 0.0, 0.0)
    distances: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        users = tuple(self.users)
        if not users:
            raise ValueError("at least one user is required")
        counts = {u.n_patches for u in users}
        if len(counts) != 1:
            raise ValueError(f"all user surfaces must have the same patch count, got {sorted(counts)}")
        object.__setattr__(self, "users", users)
        ref = np.asarray(self.tx_center, dtype=float)
        dist = np.array([np.linalg.norm(np.asarray(u.center) - ref) for u in users])
        dist.setflags(write=False)
        object.__setattr__(self, "distances", dist)

    @property
    def K(self) -> int:
        return len(self.users)

    @property
    def nbar_r(self) -> int:
        return self.users[0].n_patches

    @property
    def n_r(self) -> int:
        return self.K * self.nbar_r

    def centers(self) -> np.ndarray:
        """All receive patch centers, user-major, shape ``(N_r, 3)``."""
        return np.vstack([patch_centers(u) for u in self.users])


def patch_centers(s: SurfaceSpec) -> np.ndarray:
    """Patch centers of ``s`` as an ``(N, 3)`` array, x index fastest."""
    ox = (np.arange(s.n_x) - (s.n_x - 1) / 2.0) * s.dx
    oy = (np.arange(s.n_y) - (s.n_y - 1) / 2.0) * s.dy
    X, Y = np.meshgrid(ox, oy)
    cx, cy, cz = s.center
    return np.column_stack([X.ravel() + cx, Y.ravel() + cy, np.full(X.size, cz)])


def aperture(s: SurfaceSpec) -> float:
    """Diagonal length of the surface, ``sqrt(L_x**2 + L_y**2)``."""
    return float(np.hypot(s.n_x * s.dx, s.n_y * s.dy))


def near_field_boundary(tx: SurfaceSpec, rx: SurfaceSpec, k: Wavenumber) -> float:
    """Upper distance of the near-field region for two square surfaces.

    Evaluates ``2 (D1 + D2)**2 / lambda`` written in terms of patch counts and
    the horizontal pitches, which is only valid for square grids.
    """
    if not (tx.is_square and rx.is_square):
        raise ValueError("near-field boundary formula requires square grids (n_x == n_y)")
    ns, nr = tx.n_patches, rx.n_patches
    ds, dr = tx.dx, rx.dx
    num = 4 * ns * ds**2 + 4 * nr * dr**2 + 8 * np.sqrt(ns * nr) * ds * dr
    return float(num / k.wavelength)


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    distance: float
    bound: float
    margin: float
    ratio_x: float
    ratio_y: float

    def as_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "distance_m": self.distance,
            "bound_m": self.bound,
            "margin": self.margin,
            "ratio_x": self.ratio_x,
            "ratio_y": self.ratio_y,
        }


def patch_size_feasible(s: SurfaceSpec, R: float, k: Wavenumber,
                        margin: float = DEFAULT_MARGIN) -> FeasibilityReport:
    """Check the small-patch condition ``width << 2 sqrt(lambda R)``.

    "Much less than" is read as ``width <= margin * 2 sqrt(lambda R)``, with
    the boundary counted as feasible. The ratios in the report are the patch
    widths divided by the margin-scaled bound, so a ratio above 1 fails.
    """
    if not R > 0:
        raise ValueError(f"distance must be positive, got {R}")
    if not 0 < margin <= 1:
        raise ValueError(f"margin must lie in (0, 1], got {margin}")
    bound = margin * 2.0 * np.sqrt(k.wavelength * R)
    ok = bool(s.patch_wx <= bound and s.patch_wy <= bound)
    return FeasibilityReport(ok, float(R), float(bound), float(margin),
                             float(s.patch_wx / bound), float(s.patch_wy / bound))
