"""Domain types for the two modalities and their preprocessing configs.

Signals are stored as float64 numpy arrays so that normalization contracts
(mean/std within 1e-9) are meaningful; model code converts to float32 tensors
at tokenization time.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ValidationError
from .validation import check_finite, check_ndim, check_positive

__all__ = [
    "MultiLeadSignal",
    "ImageClip",
    "RPeakList",
    "AugConfig",
    "ClipAugConfig",
]


@dataclass
class MultiLeadSignal:
    """A multi-lead 1D recording: ``samples`` is (leads, n_samples)."""

    samples: np.ndarray
    rate_hz: float
    lead_names: list[str]

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        check_ndim(self.samples, 2, "samples")
        check_finite(self.samples, "samples")
        check_positive(self.rate_hz, "rate_hz")
        if len(self.lead_names) != self.samples.shape[0]:
            raise ValidationError(
                f"{len(self.lead_names)} lead names for {self.samples.shape[0]} leads"
            )
        if self.samples.shape[1] < 2 * self.rate_hz:
            raise ValidationError(
                "signal must be at least 2 seconds long for segmentation "
                f"(got {self.samples.shape[1]} samples at {self.rate_hz} Hz)"
            )

    @property
    def n_leads(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    def with_samples(self, samples: np.ndarray) -> "MultiLeadSignal":
        return MultiLeadSignal(samples, self.rate_hz, list(self.lead_names))

    def lead_index(self, lead: str) -> int:
        try:
            return self.lead_names.index(lead)
        except ValueError:
            raise ValidationError(f"unknown lead {lead!r}; have {self.lead_names}") from None


@dataclass
class ImageClip:
    """A 2D+T intensity sequence: ``frames`` is (n_frames, height, width)."""

    frames: np.ndarray
    frame_period_s: float

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        check_ndim(self.frames, 3, "frames")
        check_finite(self.frames, "frames")
        check_positive(self.frame_period_s, "frame_period_s")
        if self.frames.shape[0] < 2:
            raise ValidationError("clip needs at least 2 frames")

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    def with_frames(self, frames: np.ndarray) -> "ImageClip":
        return ImageClip(frames, self.frame_period_s)


@dataclass
class RPeakList:
    """Detected (or ground-truth) R-peak sample indices on one lead."""

    indices: np.ndarray
    lead_used: str

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        check_ndim(self.indices, 1, "indices")
        if self.indices.size >= 2 and not np.all(np.diff(self.indices) > 0):
            raise ValidationError("R-peak indices must be strictly increasing")

    def __len__(self) -> int:
        return int(self.indices.size)

    def shifted(self, offset: int, window: int) -> "RPeakList":
        """Peak indices relative to a crop starting at ``offset`` of length ``window``."""
        moved = self.indices - offset
        keep = moved[(moved >= 0) & (moved < window)]
        return RPeakList(keep, self.lead_used)


@dataclass
class AugConfig:
    """Signal augmentation parameters. All randomness derives from ``seed``."""

    crop_len: int
    jitter_std: float = 0.0
    rescale_range: tuple[float, float] = (1.0, 1.0)
    surrogate_enabled: bool = False
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.rescale_range
        if not (0 < lo <= hi):
            raise ValidationError(f"rescale_range must satisfy 0 < lo <= hi, got {self.rescale_range}")
        if self.crop_len < 1:
            raise ValidationError("crop_len must be >= 1")
        if self.jitter_std < 0:
            raise ValidationError("jitter_std must be >= 0")

    def with_seed(self, seed: int) -> "AugConfig":
        return replace(self, seed=int(seed))


@dataclass
class ClipAugConfig:
    """Image-clip augmentation parameters. All randomness derives from ``seed``.

    Neutral values (the dataclass defaults except ``target_frames``) make every
    stage a no-op, so a config built by :meth:`identity` leaves the clip
    bit-identical.
    """

    target_frames: int
    scale_range: tuple[float, float] = (1.0, 1.0)
    max_rotate_deg: float = 0.0
    flip_prob: float = 0.0
    brightness_jitter: float = 0.0
    contrast_jitter: float = 0.0
    blur_sigma_max: float = 0.0
    noise_std_max: float = 0.0
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.scale_range
        if not (0 < lo <= hi <= 1.0):
            raise ValidationError(f"scale_range must satisfy 0 < lo <= hi <= 1, got {self.scale_range}")
        if self.target_frames < 1:
            raise ValidationError("target_frames must be >= 1")
        for name in ("max_rotate_deg", "brightness_jitter", "contrast_jitter", "blur_sigma_max", "noise_std_max"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")
        if not (0 <= self.flip_prob <= 1):
            raise ValidationError("flip_prob must lie in [0, 1]")

    @classmethod
    def identity(cls, n_frames: int, seed: int = 0) -> "ClipAugConfig":
        return cls(target_frames=n_frames, seed=seed)

    def with_seed(self, seed: int) -> "ClipAugConfig":
        return replace(self, seed=int(seed))
