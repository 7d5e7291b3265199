"""Normalization and R-peak detection.

R peaks are found with a derivative energy pipeline: first difference,
squaring, a 0.15 s moving-window average, an adaptive threshold at half the
running maximum of that envelope, then refinement to the local maximum of the
original lead within +/-0.1 s. A 0.25 s refractory period is enforced and
candidates whose envelope energy falls below a fifth of the strongest
candidate are rejected as noise.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError, SegmentationInfeasibleError
from .types import ImageClip, MultiLeadSignal, RPeakList
from .validation import check_finite

REFRACTORY_S = 0.25
_MWA_WINDOW_S = 0.15
_REFINE_S = 0.10
_ENERGY_FLOOR = 0.2


def zscore_normalize(sig: MultiLeadSignal) -> MultiLeadSignal:
    """Per-lead zero mean, unit population standard deviation."""
    check_finite(sig.samples, "samples")
    mean = sig.samples.mean(axis=1, keepdims=True)
    std = sig.samples.std(axis=1, keepdims=True)
    if np.any(std == 0):
        dead = [sig.lead_names[i] for i in np.flatnonzero(std[:, 0] == 0)]
        raise DegenerateInputError(f"constant lead(s) {dead} cannot be z-scored")
    return sig.with_samples((sig.samples - mean) / std)


def minmax_normalize(clip: ImageClip) -> ImageClip:
    """Rescale the whole clip to [0, 1] using a single global range."""
    check_finite(clip.frames, "frames")
    lo = clip.frames.min()
    hi = clip.frames.max()
    if hi == lo:
        raise DegenerateInputError("constant clip cannot be min-max normalized")
    return clip.with_frames((clip.frames - lo) / (hi - lo))


def moving_average(x: np.ndarray, window: int) -> np.ndarray:
    kernel = np.full(window, 1.0 / window)
    return np.convolve(x, kernel, mode="same")


def detect_r_peaks(sig: MultiLeadSignal, lead: str | None = None) -> RPeakList:
    """Detect R peaks on one lead (defaults to the second lead when present).

    The signal should already be denoised and normalized. Raises
    ``SegmentationInfeasibleError`` when fewer than 2 peaks are found.
    """
    if lead is None:
        lead = sig.lead_names[1] if sig.n_leads >= 2 else sig.lead_names[0]
    x = sig.samples[sig.lead_index(lead)]
    rate = sig.rate_hz

    energy = np.diff(x, prepend=x[0]) ** 2
    window = max(1, int(round(_MWA_WINDOW_S * rate)))
    envelope = moving_average(energy, window)

    threshold = 0.5 * np.maximum.accumulate(envelope)
    above = envelope >= threshold

    # Contiguous above-threshold runs become candidates at their envelope peak.
    edges = np.flatnonzero(np.diff(above.astype(np.int8)))
    starts = list(edges[~above[edges]] + 1)
    ends = list(edges[above[edges]] + 1)
    if above[0]:
        starts.insert(0, 0)
    if above[-1]:
        ends.append(len(x))
    candidates = [s + int(np.argmax(envelope[s:e])) for s, e in zip(starts, ends)]

    # Refine to the local maximum of the raw lead within +/-0.1 s. Candidates
    # refined into the first/last 0.1 s are dropped: a peak that close to the
    # edge has incomplete morphology and cannot be verified.
    half = max(1, int(round(_REFINE_S * rate)))
    refined = []
    for c in candidates:
        lo = max(0, c - half)
        hi = min(len(x), c + half + 1)
        idx = lo + int(np.argmax(x[lo:hi]))
        if half <= idx < len(x) - half:
            refined.append((idx, envelope[c]))

    # Consolidation: the tallest refined candidate sets the reference peak
    # amplitude; candidates well below it (T/P waves, noise blips that slipped
    # past the envelope threshold) are rejected.
    if refined:
        env_max = max(score for _, score in refined)
        reference = max(x[i] for i, _ in refined)
        refined = [
            (i, s) for i, s in refined
            if s >= _ENERGY_FLOOR * env_max and x[i] >= 0.5 * reference
        ]

    # Refractory suppression: keep the taller candidate of any close pair.
    refractory = int(round(REFRACTORY_S * rate))
    kept: list[int] = []
    for idx, _ in sorted(refined, key=lambda t: (-x[t[0]], t[0])):
        if all(abs(idx - k) >= refractory for k in kept):
            kept.append(idx)
    kept = sorted(set(kept))

    # Search-back: a gap much longer than the typical beat spacing hides a
    # peak whose envelope dipped below the adaptive threshold; recover it from
    # the raw lead if its amplitude is consistent with the other peaks.
    if len(kept) >= 2:
        reference = max(x[k] for k in kept)
        while True:
            gaps = np.diff(kept)
            typical = float(np.median(gaps))
            inserted = False
            for a, b in zip(list(kept[:-1]), list(kept[1:])):
                if b - a > 1.6 * typical and b - a >= 2 * refractory:
                    lo, hi = a + refractory, b - refractory
                    cand = lo + int(np.argmax(x[lo:hi]))
                    if x[cand] >= 0.5 * reference and half <= cand < len(x) - half:
                        kept.append(cand)
                        kept.sort()
                        inserted = True
                        break
            if not inserted:
                break

    indices = np.array(kept, dtype=np.int64)
    if indices.size < 2:
        raise SegmentationInfeasibleError(
            f"found {indices.size} R peak(s) on lead {lead!r}; need at least 2"
        )
    return RPeakList(indices, lead_used=lead)


def peak_detection_scores(
    detected: RPeakList,
    truth: RPeakList,
    rate_hz: float,
    n_samples: int,
    tolerance: int = 5,
    guard_s: float = 0.15,
) -> tuple[float, float]:
    """(precision, recall) of ``detected`` against ``truth`` with +/-``tolerance``
    sample matching.

    Peaks inside the first/last ``guard_s`` seconds are excluded on both sides
    before scoring: boundary beats are structurally ambiguous (the detector
    refuses peaks whose morphology is cut off, while the ground truth lists
    them), and the guard removes that disagreement without hiding interior
    errors.
    """
    guard = int(round(guard_s * rate_hz))
    det = detected.indices[(detected.indices >= guard) & (detected.indices < n_samples - guard)]
    ref = truth.indices[(truth.indices >= guard) & (truth.indices < n_samples - guard)]
    if det.size == 0 or ref.size == 0:
        return 0.0, 0.0
    hits_det = np.array([np.min(np.abs(ref - d)) <= tolerance for d in det])
    hits_ref = np.array([np.min(np.abs(det - t)) <= tolerance for t in ref])
    return float(hits_det.mean()), float(hits_ref.mean())
