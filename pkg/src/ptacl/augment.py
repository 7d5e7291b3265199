"""Deterministic, seed-driven augmentations for both modalities.

Every augmentation is a pure function of (input, config); the config seed
fully determines the randomness, so the same call is bit-reproducible.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import ValidationError
from .types import AugConfig, ClipAugConfig, ImageClip, MultiLeadSignal


def fourier_surrogate(samples: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Randomize the phase spectrum per lead, preserving magnitudes exactly.

    The DC bin (and the Nyquist bin for even lengths) stay untouched so the
    output remains real.
    """
    n = samples.shape[-1]
    spectrum = np.fft.rfft(samples, axis=-1)
    n_bins = spectrum.shape[-1]
    last_free = n_bins - 1 if n % 2 else n_bins - 2  # keep Nyquist real when present
    if last_free >= 1:
        phases = rng.uniform(0.0, 2.0 * np.pi, size=samples.shape[:-1] + (last_free,))
        spectrum[..., 1 : last_free + 1] *= np.exp(1j * phases)
    return np.fft.irfft(spectrum, n=n, axis=-1)


def augment_signal(sig: MultiLeadSignal, cfg: AugConfig) -> MultiLeadSignal:
    """Apply surrogate -> random crop -> jitter -> rescale, in that order."""
    out, _ = augment_signal_with_offset(sig, cfg)
    return out


def augment_signal_with_offset(sig: MultiLeadSignal, cfg: AugConfig) -> tuple[MultiLeadSignal, int]:
    """Like :func:`augment_signal` but also returns the crop offset so callers
    can map full-signal sample indices (e.g. R peaks) into the cropped window.
    """
    if cfg.crop_len > sig.n_samples:
        raise ValidationError(
            f"crop_len {cfg.crop_len} exceeds signal length {sig.n_samples}"
        )
    rng = np.random.default_rng(cfg.seed)
    x = sig.samples

    if cfg.surrogate_enabled:
        x = fourier_surrogate(x, rng)

    offset = int(rng.integers(0, sig.n_samples - cfg.crop_len + 1))
    x = x[:, offset : offset + cfg.crop_len]

    if cfg.jitter_std > 0:
        x = x + rng.normal(0.0, cfg.jitter_std, size=x.shape)

    lo, hi = cfg.rescale_range
    if not (lo == hi == 1.0):
        x = x * rng.uniform(lo, hi)

    return sig.with_samples(np.ascontiguousarray(x)), offset


def _resized_crop(frames: np.ndarray, scale: float, cy: float, cx: float) -> np.ndarray:
    """Crop a centered-at-(cy, cx) window of relative area ``scale`` and
    resize it back to the original grid with bilinear sampling."""
    f, h, w = frames.shape
    side = np.sqrt(scale)
    ch, cw = side * h, side * w
    top = cy * (h - ch)
    left = cx * (w - cw)
    rows = top + (np.arange(h) + 0.5) * ch / h - 0.5
    cols = left + (np.arange(w) + 0.5) * cw / w - 0.5
    grid_r, grid_c = np.meshgrid(rows, cols, indexing="ij")
    out = np.empty_like(frames)
    for i in range(f):
        out[i] = ndimage.map_coordinates(
            frames[i], [grid_r, grid_c], order=1, mode="nearest"
        )
    return out


def _rotate(frames: np.ndarray, degrees: float) -> np.ndarray:
    out = np.empty_like(frames)
    for i in range(frames.shape[0]):
        out[i] = ndimage.rotate(
            frames[i], degrees, reshape=False, order=1, mode="nearest"
        )
    return out


def augment_clip(clip: ImageClip, cfg: ClipAugConfig) -> ImageClip:
    """Geometry + photometric augmentation for an image clip.

    Stage order: time-window sampling, random resized crop, rotation,
    horizontal flip, brightness, contrast, Gaussian blur, additive noise,
    final clamp to [0, 1]. Each stage short-circuits at its neutral setting so
    a fully neutral config is the identity.
    """
    if cfg.target_frames > clip.n_frames:
        raise ValidationError(
            f"target_frames {cfg.target_frames} exceeds clip frames {clip.n_frames}"
        )
    rng = np.random.default_rng(cfg.seed)
    frames = clip.frames

    start = int(rng.integers(0, clip.n_frames - cfg.target_frames + 1))
    frames = frames[start : start + cfg.target_frames]

    lo, hi = cfg.scale_range
    if not (lo == hi == 1.0):
        scale = float(rng.uniform(lo, hi))
        cy, cx = rng.uniform(0.0, 1.0, size=2)
        frames = _resized_crop(frames, scale, cy, cx)

    if cfg.max_rotate_deg > 0:
        frames = _rotate(frames, float(rng.uniform(-cfg.max_rotate_deg, cfg.max_rotate_deg)))

    if cfg.flip_prob > 0 and rng.uniform() < cfg.flip_prob:
        frames = frames[:, :, ::-1]

    if cfg.brightness_jitter > 0:
        frames = frames + rng.uniform(-cfg.brightness_jitter, cfg.brightness_jitter)

    if cfg.contrast_jitter > 0:
        factor = 1.0 + rng.uniform(-cfg.contrast_jitter, cfg.contrast_jitter)
        mean = frames.mean()
        frames = (frames - mean) * factor + mean

    if cfg.blur_sigma_max > 0:
        sigma = float(rng.uniform(0.0, cfg.blur_sigma_max))
        if sigma > 0:
            frames = ndimage.gaussian_filter(frames, sigma=(0.0, sigma, sigma))

    if cfg.noise_std_max > 0:
        std = float(rng.uniform(0.0, cfg.noise_std_max))
        frames = frames + rng.normal(0.0, std, size=frames.shape)

    return clip.with_frames(np.clip(frames, 0.0, 1.0))
