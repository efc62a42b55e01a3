"""Transverse pump fields and paraxial propagation.

A :class:`FieldGrid` holds a complex scalar field sampled on a rectangular,
cell-centered window that is symmetric about both axes, so the reflection
y -> -y maps sample points onto sample points exactly.  Pump synthesis
covers Gaussian, Hermite-Gaussian and phase-step ("glass laminate") beams;
propagation uses the band-limited angular-spectrum transfer function, which
conserves power and preserves y-parity exactly on the grid.

All lengths are meters.  Fields are normalized so an unclipped Gaussian or
Hermite-Gaussian mode carries unit total power; the phase-step beam carries
(1 + transmission_factor^2)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_hermite

__all__ = [
    "FieldGrid",
    "PumpSpec",
    "synthesize_pump",
    "fresnel_propagate",
    "parity_decompose",
    "parity_components",
    "field_to_csv",
]

DEFAULT_PUMP_WAVELENGTH = 351e-9
MIN_WINDOW_WAISTS = 6.0


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Complex scalar field on a rectangular transverse window at plane z.

    Parameters
    ----------
    samples : ndarray, shape (ny, nx)
        Complex field values; axis 0 runs along y, axis 1 along x.
    window : (float, float)
        Full physical extent (width_x, width_y) of the window, meters.
    plane_z : float
        Axial position of the sampling plane, meters.
    wavelength : float
        Optical wavelength of the field, meters.

    Sample points sit at cell centers, ``x[i] = (i - (nx-1)/2) * dx`` with
    ``dx = width_x / nx`` (same in y), so the coordinate set is closed under
    negation for any nx, ny.
    """

    samples: np.ndarray
    window: tuple[float, float]
    plane_z: float = 0.0
    wavelength: float = DEFAULT_PUMP_WAVELENGTH

    def __post_init__(self):
        arr = np.array(self.samples, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 2:
            raise ValueError(f"samples must be at least 2x2, got shape {arr.shape}")
        wx, wy = float(self.window[0]), float(self.window[1])
        if wx <= 0.0 or wy <= 0.0:
            raise ValueError(f"window extents must be positive, got {self.window}")
        if self.wavelength <= 0.0:
            raise ValueError("wavelength must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("field samples must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "window", (wx, wy))
        if self.power <= 0.0:
            raise ValueError("field must carry nonzero power")

    @property
    def ny(self) -> int:
        return self.samples.shape[0]

    @property
    def nx(self) -> int:
        return self.samples.shape[1]

    @property
    def dx(self) -> float:
        return self.window[0] / self.nx

    @property
    def dy(self) -> float:
        return self.window[1] / self.ny

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.nx) - (self.nx - 1) / 2.0) * self.dx

    @property
    def y(self) -> np.ndarray:
        return (np.arange(self.ny) - (self.ny - 1) / 2.0) * self.dy

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def power(self) -> float:
        """Total power, sum |samples|^2 times cell area."""
        return float(np.sum(np.abs(self.samples) ** 2)) * self.cell_area

    def value_at(self, points: np.ndarray) -> np.ndarray:
        """Bilinear interpolation of the field at arbitrary (x, y) points.

        ``points`` has shape (..., 2) ordered (x, y).  Points outside the
        convex hull of the sample points evaluate to 0.
        """
        pts = np.asarray(points, dtype=float)
        px, py = pts[..., 0], pts[..., 1]
        gx = px / self.dx + (self.nx - 1) / 2.0
        gy = py / self.dy + (self.ny - 1) / 2.0
        inside = (gx >= 0.0) & (gx <= self.nx - 1) & (gy >= 0.0) & (gy <= self.ny - 1)
        gx = np.where(inside, gx, 0.0)
        gy = np.where(inside, gy, 0.0)
        ix = np.minimum(np.floor(gx).astype(int), self.nx - 2)
        iy = np.minimum(np.floor(gy).astype(int), self.ny - 2)
        fx = gx - ix
        fy = gy - iy
        s = self.samples
        val = (
            (1.0 - fx) * (1.0 - fy) * s[iy, ix]
            + fx * (1.0 - fy) * s[iy, ix + 1]
            + (1.0 - fx) * fy * s[iy + 1, ix]
            + fx * fy * s[iy + 1, ix + 1]
        )
        return np.where(inside, val, 0.0 + 0.0j)


@dataclass(frozen=True)
class PumpSpec:
    """Pump beam recipe.

    kind is one of "gaussian", "hermite_gauss", "phase_step".  The phase-step
    beam is a Gaussian with the y < 0 half multiplied by
    ``transmission_factor * exp(i * step_phase)`` (thin-element model of a
    glass laminate inserted halfway into the beam); hermite_m / hermite_n
    select the Hermite-Gaussian order.
    """

    kind: str
    waist: float
    step_phase: float = math.pi
    transmission_factor: float = 1.0
    hermite_m: int = 0
    hermite_n: int = 1
    wavelength: float = DEFAULT_PUMP_WAVELENGTH

    def __post_init__(self):
        if self.kind not in ("gaussian", "hermite_gauss", "phase_step"):
            raise ValueError(f"unknown pump kind: {self.kind!r}")
        if self.waist <= 0.0:
            raise ValueError("waist must be positive")
        if not 0.0 < self.transmission_factor <= 1.0:
            raise ValueError("transmission_factor must be in (0, 1]")
        if self.hermite_m < 0 or self.hermite_n < 0:
            raise ValueError("Hermite orders must be nonnegative")
        if self.wavelength <= 0.0:
            raise ValueError("wavelength must be positive")


def _hermite_gauss_1d(coord: np.ndarray, order: int, waist: float) -> np.ndarray:
    norm = (2.0 / math.pi) ** 0.25 / math.sqrt(
        (2.0**order) * math.factorial(order) * waist
    )
    return norm * eval_hermite(order, np.sqrt(2.0) * coord / waist) * np.exp(
        -(coord**2) / waist**2
    )


def synthesize_pump(
    spec: PumpSpec,
    samples: tuple[int, int] = (256, 256),
    window: tuple[float, float] = (0.02, 0.02),
) -> FieldGrid:
    """Sample a pump beam at its source plane (z = 0).

    Parameters
    ----------
    spec : PumpSpec
    samples : (nx, ny)
        Grid resolution.
    window : (width_x, width_y)
        Physical window, meters.  Must be at least 6 waists in each
        direction; smaller windows clip the beam and alias under propagation.

    The phase-step mask takes the mean value (1 + t e^{i phi})/2 on the
    y = 0 line, so a pi step with unit transmission is an exactly odd
    function of y on any grid.
    """
    nx, ny = int(samples[0]), int(samples[1])
    wx, wy = float(window[0]), float(window[1])
    if min(wx, wy) < MIN_WINDOW_WAISTS * spec.waist:
        raise ValueError(
            f"window {window} too small for waist {spec.waist!r}: "
            f"need at least {MIN_WINDOW_WAISTS} waists per side to avoid "
            "beam clipping and aliasing"
        )
    x = (np.arange(nx) - (nx - 1) / 2.0) * (wx / nx)
    y = (np.arange(ny) - (ny - 1) / 2.0) * (wy / ny)
    xg = x[None, :]
    yg = y[:, None]
    w = spec.waist

    if spec.kind == "gaussian":
        field = math.sqrt(2.0 / math.pi) / w * np.exp(-(xg**2 + yg**2) / w**2)
        field = field.astype(complex)
    elif spec.kind == "hermite_gauss":
        field = (
            _hermite_gauss_1d(xg, spec.hermite_m, w)
            * _hermite_gauss_1d(yg, spec.hermite_n, w)
        ).astype(complex)
    else:  # phase_step
        gauss = math.sqrt(2.0 / math.pi) / w * np.exp(-(xg**2 + yg**2) / w**2)
        step = spec.transmission_factor * np.exp(1j * spec.step_phase)
        mask = np.where(yg < 0.0, step, 1.0 + 0.0j)
        mask = np.where(yg == 0.0, (1.0 + step) / 2.0, mask)
        field = gauss * mask

    return FieldGrid(field, (wx, wy), plane_z=0.0, wavelength=spec.wavelength)


def fresnel_propagate(field: FieldGrid, distance: float) -> FieldGrid:
    """Propagate a field by ``distance`` with the angular-spectrum method.

    Parameters
    ----------
    field : FieldGrid
    distance : float
        Propagation distance, meters (nonnegative).

    Applies the paraxial Fresnel transfer function
    ``H(fx, fy) = exp(-i pi lambda z (fx^2 + fy^2))`` in the discrete
    Fourier domain (carrier phase ``exp(ikz)`` omitted).  |H| = 1, so total
    power is conserved; H is even in fy, so y-parity is preserved exactly.

    Raises
    ------
    ValueError
        If ``distance`` exceeds the grid's alias-free range
        ``min(width_x * dx, width_y * dy) / lambda`` (the transfer-function
        phase would be undersampled at the band edge).
    """
    if distance < 0.0:
        raise ValueError("propagation distance must be nonnegative")
    lam = field.wavelength
    z_max = min(field.window[0] * field.dx, field.window[1] * field.dy) / lam
    if distance > z_max:
        raise ValueError(
            f"sampling violation: distance {distance!r} m exceeds the "
            f"alias-free range {z_max:.3f} m for this grid "
            f"({field.nx}x{field.ny} over {field.window}); increase the "
            "sample count or enlarge the window"
        )
    fx = np.fft.fftfreq(field.nx, d=field.dx)[None, :]
    fy = np.fft.fftfreq(field.ny, d=field.dy)[:, None]
    transfer = np.exp(-1j * math.pi * lam * distance * (fx**2 + fy**2))
    out = np.fft.ifft2(np.fft.fft2(field.samples) * transfer)
    return FieldGrid(
        out, field.window, plane_z=field.plane_z + distance, wavelength=lam
    )


def parity_components(field: FieldGrid) -> tuple[np.ndarray, np.ndarray]:
    """Even and odd (in y) sample arrays; they sum to the input samples."""
    flipped = field.samples[::-1, :]
    return (field.samples + flipped) / 2.0, (field.samples - flipped) / 2.0


def parity_decompose(field: FieldGrid) -> tuple[float, float]:
    """Fractions of total power in the even and odd y-parity components.

    The grid is symmetric about y = 0 by construction, so the projections
    0.5 * (W(x, y) +/- W(x, -y)) are exact on the sample points and the two
    fractions sum to 1.
    """
    even, odd = parity_components(field)
    even_power = float(np.sum(np.abs(even) ** 2))
    odd_power = float(np.sum(np.abs(odd) ** 2))
    total = even_power + odd_power
    return even_power / total, odd_power / total


def field_to_csv(field: FieldGrid, path) -> None:
    """Dump a field as CSV rows ``x,y,re,im`` (header line, row-major)."""
    x = field.x
    y = field.y
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y,re,im\n")
        for iy in range(field.ny):
            for ix in range(field.nx):
                v = field.samples[iy, ix]
                fh.write(f"{float(x[ix])!r},{float(y[iy])!r},{v.real!r},{v.imag!r}\n")
