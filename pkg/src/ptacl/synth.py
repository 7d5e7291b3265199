"""Synthetic paired (signal, clip) subjects with analytically known phenotypes.

Each subject derives from one latent cardiac state. The signal is a periodic
template (three Gaussian bumps per cycle in the roles of P, QRS and T waves)
plus a slow baseline sinusoid and white noise; the clip is a pulsating disc
whose radius follows a smooth asymmetric systolic bump. Frame 0 is pinned to
the fully relaxed state and the signal's sharp peaks mark the start of each
cycle, so index-level correspondence between the two modalities holds by
construction.

Phenotype encoding in the signal survives per-lead z-scoring because it lives
in amplitude *ratios* and in timing, not absolute scale:

* relaxed disc area (via the squared radius) scales the QRS bump against a
  fixed T bump,
* contraction fraction scales the P bump against the T bump,
* heart rate is the cycle spacing itself.

Phenotypes are 2D proxies: EDV/ESV are disc areas at full relaxation and peak
contraction, SV their difference, EF = SV/EDV, M the relaxed circumference,
CO = SV x heart rate.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import container
from .errors import ValidationError
from .types import ImageClip, MultiLeadSignal, RPeakList
from .validation import check_in_range

GENERATOR_VERSION = 1

LEAD_NAMES = ["I", "II", "III", "aVR", "aVL", "aVF", "V1", "V2", "V3", "V4", "V5", "V6"]

# Bump centers/widths in cardiac-phase units (cycle start = sharp peak).
_QRS_CENTER, _QRS_WIDTH = 0.0, 0.02
_T_CENTER, _T_WIDTH = 0.30, 0.08
_P_CENTER, _P_WIDTH = 0.85, 0.05
_T_AMP = 0.35
_BASELINE_HZ = 0.3
_BASELINE_AMP = 0.4

LATENT_RANGES = {
    "heart_rate_bpm": (50.0, 100.0),
    "base_radius": (8.0, 16.0),
    "contraction_frac": (0.2, 0.5),
    "noise_level": (0.0, 0.06),
    "phase_offset": (0.0, 1.0),
}


@dataclass
class SubjectLatent:
    """Latent cardiac state. ``cmr_phase_shift`` is a misalignment knob: it
    rotates the clip's starting phase away from full relaxation and is never
    sampled by :func:`gen_dataset` (default 0 keeps the two modalities pinned).
    """

    heart_rate_bpm: float
    base_radius: float
    contraction_frac: float
    noise_level: float
    phase_offset: float
    seed: int
    cmr_phase_shift: float = 0.0

    def __post_init__(self):
        check_in_range(self.heart_rate_bpm, *LATENT_RANGES["heart_rate_bpm"], "heart_rate_bpm")
        check_in_range(self.base_radius, *LATENT_RANGES["base_radius"], "base_radius")
        # 0 is allowed as the degenerate no-contraction case.
        check_in_range(self.contraction_frac, 0.0, LATENT_RANGES["contraction_frac"][1], "contraction_frac")
        if self.noise_level < 0:
            raise ValidationError("noise_level must be >= 0")
        if not (0.0 <= self.phase_offset < 1.0):
            raise ValidationError("phase_offset must lie in [0, 1)")


@dataclass
class PhenotypeVector:
    edv: float
    esv: float
    sv: float
    ef: float
    mass: float
    co: float

    PHENOTYPES = ("edv", "esv", "sv", "ef", "mass", "co")

    def __post_init__(self):
        if not (self.edv >= self.esv >= 0):
            raise ValidationError("phenotypes must satisfy EDV >= ESV >= 0")
        if not (0 <= self.ef < 1):
            raise ValidationError("EF must lie in [0, 1)")

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.PHENOTYPES}

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.PHENOTYPES], dtype=np.float64)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "PhenotypeVector":
        return cls(*(float(v) for v in arr))


@dataclass
class PairedSubject:
    subject_id: str
    ecg: MultiLeadSignal
    cmr: ImageClip
    phenotypes: PhenotypeVector
    true_r_peaks: RPeakList
    true_phase: np.ndarray
    heart_rate_bpm: float


@dataclass
class GeneratorConfig:
    """Shapes of the generated recordings (not part of the latent)."""

    n_leads: int = 3
    rate_hz: float = 500.0
    duration_s: float = 10.0
    n_frames: int = 26
    frame_size: int = 36

    def __post_init__(self):
        if not (1 <= self.n_leads <= len(LEAD_NAMES)):
            raise ValidationError(f"n_leads must lie in [1, {len(LEAD_NAMES)}]")
        # Largest disc (radius 16) must fit with a margin for area fidelity.
        if self.frame_size < 2 * LATENT_RANGES["base_radius"][1] + 2:
            raise ValidationError(f"frame_size {self.frame_size} too small for the radius range")

    @property
    def lead_names(self) -> list[str]:
        return LEAD_NAMES[: self.n_leads]

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s * self.rate_hz))


def systolic_bump(phase: np.ndarray) -> np.ndarray:
    """Smooth contraction profile: 0 at phase 0, peak 1 near phase 0.37,
    asymmetric (fast contraction, slow relaxation), 0 again at phase 1."""
    return np.sin(np.pi * np.asarray(phase, dtype=np.float64) ** 0.7) ** 2


def _wrapped_gaussian(phase: np.ndarray, center: float, width: float) -> np.ndarray:
    delta = (phase - center + 0.5) % 1.0 - 0.5
    return np.exp(-0.5 * (delta / width) ** 2)


def analytic_phenotypes(latent: SubjectLatent) -> PhenotypeVector:
    r = latent.base_radius
    edv = np.pi * r**2
    esv = np.pi * (r * (1.0 - latent.contraction_frac)) ** 2
    sv = edv - esv
    ef = sv / edv
    mass = 2.0 * np.pi * r
    co = sv * latent.heart_rate_bpm
    return PhenotypeVector(edv=edv, esv=esv, sv=sv, ef=ef, mass=mass, co=co)


def render_disc_frames(latent: SubjectLatent, gen: GeneratorConfig) -> tuple[np.ndarray, np.ndarray]:
    """Returns (frames, per-frame cardiac phase). Frame edges are 1 px soft so
    the intensity integral tracks the analytic disc area closely."""
    size = gen.frame_size
    center = (size - 1) / 2.0
    yy, xx = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    dist = np.sqrt((yy - center) ** 2 + (xx - center) ** 2)

    phase = (np.arange(gen.n_frames) / gen.n_frames + latent.cmr_phase_shift) % 1.0
    radius = latent.base_radius * (1.0 - latent.contraction_frac * systolic_bump(phase))
    frames = np.clip(radius[:, None, None] - dist[None, :, :] + 0.5, 0.0, 1.0)
    return frames, phase


def render_signal(latent: SubjectLatent, gen: GeneratorConfig) -> tuple[np.ndarray, np.ndarray]:
    """Returns (samples (L, N), true peak sample indices)."""
    rng = np.random.default_rng(latent.seed)
    n = gen.n_samples
    t = np.arange(n) / gen.rate_hz
    cycle_s = 60.0 / latent.heart_rate_bpm
    phase = ((t / cycle_s) - latent.phase_offset) % 1.0

    qrs_amp = 0.8 + latent.base_radius**2 / 200.0
    p_amp = 0.08 + 0.4 * latent.contraction_frac
    template = (
        qrs_amp * _wrapped_gaussian(phase, _QRS_CENTER, _QRS_WIDTH)
        + _T_AMP * _wrapped_gaussian(phase, _T_CENTER, _T_WIDTH)
        + p_amp * _wrapped_gaussian(phase, _P_CENTER, _P_WIDTH)
    )

    baseline_phase = rng.uniform(0.0, 2.0 * np.pi)
    baseline = _BASELINE_AMP * np.sin(2.0 * np.pi * _BASELINE_HZ * t + baseline_phase)

    lead_frac = np.arange(gen.n_leads) / max(gen.n_leads - 1, 1)
    lead_scale = 1.0 - 0.4 * lead_frac
    samples = lead_scale[:, None] * template[None, :] + baseline[None, :]
    samples = samples + rng.normal(0.0, latent.noise_level, size=samples.shape)

    peak_times = (latent.phase_offset + np.arange(int(np.ceil(gen.duration_s / cycle_s)) + 1)) * cycle_s
    peak_idx = np.round(peak_times * gen.rate_hz).astype(np.int64)
    peak_idx = peak_idx[(peak_idx >= 0) & (peak_idx < n)]
    return samples, peak_idx


def gen_subject(latent: SubjectLatent, gen: GeneratorConfig | None = None, subject_id: str = "s0000") -> PairedSubject:
    """Generate one paired subject. Pure function of (latent, gen)."""
    gen = gen or GeneratorConfig()
    samples, peaks = render_signal(latent, gen)
    frames, phase = render_disc_frames(latent, gen)
    cycle_s = 60.0 / latent.heart_rate_bpm
    return PairedSubject(
        subject_id=subject_id,
        ecg=MultiLeadSignal(samples, gen.rate_hz, gen.lead_names),
        cmr=ImageClip(frames, frame_period_s=cycle_s / gen.n_frames),
        phenotypes=analytic_phenotypes(latent),
        true_r_peaks=RPeakList(peaks, lead_used=gen.lead_names[min(1, gen.n_leads - 1)]),
        true_phase=phase,
        heart_rate_bpm=latent.heart_rate_bpm,
    )


def sample_latents(n: int, master_seed: int) -> list[SubjectLatent]:
    rng = np.random.default_rng(master_seed)
    hr = rng.uniform(*LATENT_RANGES["heart_rate_bpm"], size=n)
    radius = rng.uniform(*LATENT_RANGES["base_radius"], size=n)
    cf = rng.uniform(*LATENT_RANGES["contraction_frac"], size=n)
    noise = rng.uniform(*LATENT_RANGES["noise_level"], size=n)
    offset = rng.uniform(0.0, 1.0, size=n)
    seeds = rng.integers(0, 2**62, size=n)
    return [
        SubjectLatent(
            heart_rate_bpm=float(hr[i]),
            base_radius=float(radius[i]),
            contraction_frac=float(cf[i]),
            noise_level=float(noise[i]),
            phase_offset=float(offset[i]),
            seed=int(seeds[i]),
        )
        for i in range(n)
    ]


def gen_dataset(
    n: int,
    master_seed: int,
    gen: GeneratorConfig | None = None,
    out_dir: str | Path | None = None,
) -> list[PairedSubject]:
    """Generate ``n`` subjects deterministically; optionally persist them.

    On-disk layout: one ``<subject_id>.ptac`` container per subject plus
    ``phenotypes.csv`` and ``manifest.json``.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    gen = gen or GeneratorConfig()
    latents = sample_latents(n, master_seed)
    subjects = [gen_subject(lat, gen, subject_id=f"s{i:04d}") for i, lat in enumerate(latents)]
    if out_dir is not None:
        save_dataset(subjects, out_dir, gen, master_seed)
    return subjects


def _subject_tensors(s: PairedSubject) -> dict[str, np.ndarray]:
    return {
        "ecg_samples": s.ecg.samples,
        "ecg_rate_hz": np.array([s.ecg.rate_hz]),
        "cmr_frames": s.cmr.frames,
        "cmr_frame_period_s": np.array([s.cmr.frame_period_s]),
        "phenotypes": s.phenotypes.as_array(),
        "heart_rate_bpm": np.array([s.heart_rate_bpm]),
        "true_r_peaks": s.true_r_peaks.indices.astype(np.float64),
        "true_phase": s.true_phase,
    }


def save_dataset(subjects: list[PairedSubject], out_dir: str | Path, gen: GeneratorConfig, master_seed: int) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for s in subjects:
        container.write_tensors(out / f"{s.subject_id}.ptac", _subject_tensors(s))
    with open(out / "phenotypes.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subject_id", "EDV", "ESV", "SV", "EF", "M", "CO", "heart_rate_bpm"])
        for s in subjects:
            p = s.phenotypes
            writer.writerow(
                [s.subject_id]
                + [f"{v:.6f}" for v in (p.edv, p.esv, p.sv, p.ef, p.mass, p.co, s.heart_rate_bpm)]
            )
    manifest = {
        "n": len(subjects),
        "master_seed": master_seed,
        "generator_version": GENERATOR_VERSION,
        "n_leads": gen.n_leads,
        "rate_hz": gen.rate_hz,
        "duration_s": gen.duration_s,
        "n_frames": gen.n_frames,
        "frame_size": gen.frame_size,
        "lead_names": gen.lead_names,
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_dataset(path: str | Path) -> list[PairedSubject]:
    root = Path(path)
    with open(root / "manifest.json") as fh:
        manifest = json.load(fh)
    lead_names = manifest["lead_names"]
    subjects = []
    for i in range(manifest["n"]):
        sid = f"s{i:04d}"
        t = container.read_tensors(root / f"{sid}.ptac")
        subjects.append(
            PairedSubject(
                subject_id=sid,
                ecg=MultiLeadSignal(t["ecg_samples"].astype(np.float64), float(t["ecg_rate_hz"][0]), list(lead_names)),
                cmr=ImageClip(t["cmr_frames"].astype(np.float64), float(t["cmr_frame_period_s"][0])),
                phenotypes=PhenotypeVector.from_array(t["phenotypes"].astype(np.float64)),
                true_r_peaks=RPeakList(t["true_r_peaks"].astype(np.int64), lead_used=lead_names[min(1, len(lead_names) - 1)]),
                true_phase=t["true_phase"].astype(np.float64),
                heart_rate_bpm=float(t["heart_rate_bpm"][0]),
            )
        )
    return subjects
