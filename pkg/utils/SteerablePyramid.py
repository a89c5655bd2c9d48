"""
Real steerable pyramid built in the Fourier domain.

Filters follow the usual frequency-domain construction: a raised-cosine
radial split into highpass residual H0 and lowpass L0, then per level a
radial bandpass H times K angular masks cos^(K-1)(theta - pi k / K),
followed by a lowpass L and a 2x decimation done by cropping the centred
spectrum. Radial masks use log2 of the radius with Nyquist at 1.

Oriented subbands carry no DC response, so a constant channel yields
all-zero subbands.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sp_fft

from utils.Exceptions import DomainError, PyramidSizeError

LOGGER = logging.getLogger(__name__)


def _highpass_mask(log_rad):
    return np.cos(np.pi / 2.0 * np.clip(log_rad, -1.0, 0.0))


def _lowpass_mask(log_rad):
    return np.abs(np.sin(np.pi / 2.0 * np.clip(log_rad, -1.0, 0.0)))


def _polar_grid(height, width):
    """Centred log-radius and angle grids matching fftshift ordering."""
    yramp = (np.arange(height) - height // 2) / (height / 2.0)
    xramp = (np.arange(width) - width // 2) / (width / 2.0)
    xx, yy = np.meshgrid(xramp, yramp)
    rad = np.sqrt(xx ** 2 + yy ** 2)
    cy, cx = height // 2, width // 2
    # DC radius borrowed from a neighbour so log2 stays finite
    rad[cy, cx] = rad[cy, cx - 1] if width > 1 else rad[cy - 1, cx]
    return np.log2(rad), np.arctan2(yy, xx)


def _crop_bounds(dims):
    dims = np.asarray(dims)
    lodims = np.ceil((dims - 0.5) / 2.0).astype(int)
    start = dims // 2 - lodims // 2
    return start, start + lodims


@dataclass
class PyramidBands:
    """Subbands of one channel. bands[level][orientation] is a real array."""

    bands: list
    highpass: np.ndarray
    lowpass: np.ndarray
    # Energy of each part measured on the input's frequency grid.
    band_energy: list = field(default_factory=list)
    highpass_energy: float = 0.0
    lowpass_energy: float = 0.0
    input_ac_energy: float = 0.0

    def oriented(self):
        return [b for level in self.bands for b in level]

    def energy_fraction(self):
        """Share of the input's AC energy carried by all subbands and residuals."""
        if self.input_ac_energy <= 0:
            return 1.0
        total = self.highpass_energy + self.lowpass_energy + sum(sum(level) for level in self.band_energy)
        return total / self.input_ac_energy


class SteerablePyramid:

    def __init__(self, levels=3, orientations=4):
        if levels < 1:
            raise DomainError(f"pyramid needs at least one level, got {levels}")
        if orientations < 1:
            raise DomainError(f"pyramid needs at least one orientation, got {orientations}")
        self.levels = levels
        self.orientations = orientations
        order = orientations - 1
        self._order = order
        self._angle_const = math.sqrt(
            (2 ** (2 * order)) * (math.factorial(order) ** 2)
            / float(orientations * math.factorial(2 * order))
        )

    def check_size(self, height, width):
        min_side = min(height, width)
        for level in range(1, self.levels + 1):
            required = 2 ** level
            if min_side < required:
                raise PyramidSizeError(level, min_side, required)

    def _angle_mask(self, angle, k):
        return self._angle_const * np.cos(angle - np.pi * k / self.orientations) ** self._order

    def decompose(self, channel):
        channel = np.asarray(channel, dtype=np.float64)
        if channel.ndim != 2:
            raise DomainError(f"pyramid input must be 2-D, got shape {channel.shape}")
        height, width = channel.shape
        self.check_size(height, width)
        n_input = float(height * width)

        log_rad, angle = _polar_grid(height, width)
        dft = sp_fft.fftshift(sp_fft.fft2(channel))
        dc = (height // 2, width // 2)
        input_ac = (np.sum(np.abs(dft) ** 2) - np.abs(dft[dc]) ** 2) / n_input

        hi0dft = dft * _highpass_mask(log_rad)
        highpass = np.real(sp_fft.ifft2(sp_fft.ifftshift(hi0dft)))
        lodft = dft * _lowpass_mask(log_rad)

        bands, band_energy = [], []
        for level in range(self.levels):
            shift = level + 1
            himask = _highpass_mask(log_rad + shift)
            cy, cx = lodft.shape[0] // 2, lodft.shape[1] // 2
            level_bands, level_energy = [], []
            for k in range(self.orientations):
                banddft = ((-1j) ** self._order) * lodft * self._angle_mask(angle, k) * himask
                banddft[cy, cx] = 0.0
                level_bands.append(np.real(sp_fft.ifft2(sp_fft.ifftshift(banddft))))
                level_energy.append(float(np.sum(np.abs(banddft) ** 2) / n_input))
            bands.append(level_bands)
            band_energy.append(level_energy)

            start, end = _crop_bounds(lodft.shape)
            log_rad = log_rad[start[0]:end[0], start[1]:end[1]]
            angle = angle[start[0]:end[0], start[1]:end[1]]
            lodft = lodft[start[0]:end[0], start[1]:end[1]] * _lowpass_mask(log_rad + shift)

        lowpass = np.real(sp_fft.ifft2(sp_fft.ifftshift(lodft)))
        cy, cx = lodft.shape[0] // 2, lodft.shape[1] // 2
        low_ac = (np.sum(np.abs(lodft) ** 2) - np.abs(lodft[cy, cx]) ** 2) / n_input
        LOGGER.debug("decomposed %dx%d channel into %d levels x %d orientations",
                     height, width, self.levels, self.orientations)
        return PyramidBands(
            bands=bands,
            highpass=highpass,
            lowpass=lowpass,
            band_energy=band_energy,
            highpass_energy=float(np.sum(np.abs(hi0dft) ** 2) / n_input),
            lowpass_energy=float(low_ac),
            input_ac_energy=float(input_ac),
        )
