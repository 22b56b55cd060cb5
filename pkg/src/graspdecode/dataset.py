"""Epoched EEG data model plus the manifest + per-trial CSV disk format.

A recording is a set of fixed-length epochs cut around movement onset,
one ``channels x time`` matrix per trial, with a montage describing the
electrode layout on a unit head circle.  Datasets are immutable after
load; every downstream stage works on copies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import IntEnum
from pathlib import Path

import numpy as np

from .errors import DataError
from .utils import atomic_write_text, fmt_float

__all__ = [
    "ConditionLabel",
    "Montage",
    "TrialEpoch",
    "EpochedDataset",
    "default_montage",
    "load_dataset",
    "save_dataset",
    "epoch_slice",
]


class ConditionLabel(IntEnum):
    """Grasp condition of a trial; integer encoding is part of the contract."""

    NO_MOVEMENT = 0
    POWER = 1
    PRECISION = 2


_LABEL_ALIASES = {
    "nomovement": ConditionLabel.NO_MOVEMENT,
    "no_movement": ConditionLabel.NO_MOVEMENT,
    "no-movement": ConditionLabel.NO_MOVEMENT,
    "rest": ConditionLabel.NO_MOVEMENT,
    "power": ConditionLabel.POWER,
    "precision": ConditionLabel.PRECISION,
}


def parse_label(value) -> ConditionLabel:
    """Parse a condition label from an int or a (case-insensitive) name."""
    if isinstance(value, ConditionLabel):
        return value
    if isinstance(value, (int, np.integer)):
        try:
            return ConditionLabel(int(value))
        except ValueError:
            raise DataError(f"unknown condition label {value!r}") from None
    key = str(value).strip().lower()
    if key in _LABEL_ALIASES:
        return _LABEL_ALIASES[key]
    raise DataError(f"unknown condition label {value!r}")


# 2D projection of the 8-electrode dry headset layout onto the unit head
# circle (Cz at origin, +y toward nasion, ear ring at radius 1).  These
# coordinates are configuration for rendering/interpolation, not data.
_DEFAULT_LAYOUT = (
    ("Fz", 0.0, 0.4),
    ("C3", -0.4, 0.0),
    ("Cz", 0.0, 0.0),
    ("C4", 0.4, 0.0),
    ("Pz", 0.0, -0.4),
    ("PO7", -0.447, -0.615),
    ("Oz", 0.0, -0.8),
    ("PO8", 0.447, -0.615),
)


@dataclass(frozen=True)
class Montage:
    """Ordered channel names with 2D scalp positions on the unit head circle."""

    channels: tuple[str, ...]
    positions: np.ndarray  # (n_channels, 2)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "channels", tuple(self.channels))
        if len(set(self.channels)) != len(self.channels):
            raise DataError("montage channel names must be unique")
        if pos.shape != (len(self.channels), 2):
            raise DataError(f"positions shape {pos.shape} does not match {len(self.channels)} channels")
        if not np.all(np.isfinite(pos)):
            raise DataError("montage positions must be finite")
        radii = np.hypot(pos[:, 0], pos[:, 1])
        if np.any(radii > 1.0 + 1e-9):
            bad = self.channels[int(np.argmax(radii))]
            raise DataError(f"channel {bad} lies outside the unit head circle")

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    def index(self, name: str) -> int:
        try:
            return self.channels.index(name)
        except ValueError:
            raise DataError(f"unknown channel {name!r}; montage has {list(self.channels)}") from None


def default_montage() -> Montage:
    """The 8-channel layout used throughout: Fz, C3, Cz, C4, Pz, PO7, Oz, PO8."""
    names = tuple(name for name, _, _ in _DEFAULT_LAYOUT)
    pos = np.array([[x, y] for _, x, y in _DEFAULT_LAYOUT], dtype=float)
    return Montage(channels=names, positions=pos)


@dataclass(frozen=True)
class TrialEpoch:
    """One trial: a channels x time sample matrix (microvolts) cut around onset."""

    trial_id: int
    label: ConditionLabel
    samples: np.ndarray  # (n_channels, n_samples)
    onset_index: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 2:
            raise DataError(f"trial {self.trial_id}: samples must be 2D, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise DataError(f"trial {self.trial_id}: non-finite sample values")
        if not 0 < self.onset_index < samples.shape[1] - 1:
            raise DataError(
                f"trial {self.trial_id}: onset_index {self.onset_index} not strictly inside "
                f"0..{samples.shape[1] - 1}"
            )

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class EpochedDataset:
    """A montage, a sampling rate, and a list of equally long trial epochs."""

    montage: Montage
    sampling_rate: float
    epochs: tuple[TrialEpoch, ...]

    def __post_init__(self):
        object.__setattr__(self, "epochs", tuple(self.epochs))
        if self.sampling_rate <= 0:
            raise DataError(f"sampling_rate must be positive, got {self.sampling_rate}")
        if not self.epochs:
            raise DataError("dataset contains no epochs")
        n = self.epochs[0].n_samples
        for ep in self.epochs:
            if ep.samples.shape[0] != self.montage.n_channels:
                raise DataError(
                    f"trial {ep.trial_id}: {ep.samples.shape[0]} channels, montage has "
                    f"{self.montage.n_channels}"
                )
            if ep.n_samples != n:
                raise DataError(f"trial {ep.trial_id}: epoch length {ep.n_samples} != {n}")

    @property
    def n_epochs(self) -> int:
        return len(self.epochs)

    @property
    def n_samples(self) -> int:
        return self.epochs[0].n_samples

    def labels(self) -> np.ndarray:
        return np.array([int(ep.label) for ep in self.epochs], dtype=int)

    def is_complete(self) -> bool:
        """True when every condition label occurs at least once."""
        present = {ep.label for ep in self.epochs}
        return present == set(ConditionLabel)

    def epochs_with_label(self, label: ConditionLabel) -> tuple[TrialEpoch, ...]:
        return tuple(ep for ep in self.epochs if ep.label == label)

    def with_samples(self, per_epoch_samples) -> "EpochedDataset":
        """Copy of the dataset with each epoch's sample matrix replaced."""
        if len(per_epoch_samples) != self.n_epochs:
            raise DataError("replacement sample list length mismatch")
        new = tuple(replace(ep, samples=s) for ep, s in zip(self.epochs, per_epoch_samples))
        return replace(self, epochs=new)


def load_dataset(manifest_path: str | Path) -> EpochedDataset:
    """Load and validate a dataset from a JSON manifest.

    Manifest schema::

        {
          "sampling_rate_hz": 250.0,
          "channels": [{"name": "Fz", "x": 0.0, "y": 0.4}, ...],
          "trials": [{"id": 0, "label": "power", "onset_index": 250,
                      "file": "trials/trial_0000.csv"}, ...]
        }

    Trial files are headerless CSV, one row per channel in montage order.
    Every validation failure names the offending trial.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise DataError(f"manifest not found: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed manifest {manifest_path}: {exc}") from None

    for key in ("sampling_rate_hz", "channels", "trials"):
        if key not in manifest:
            raise DataError(f"manifest missing required field {key!r}")
    channels = manifest["channels"]
    try:
        montage = Montage(
            channels=tuple(c["name"] for c in channels),
            positions=np.array([[c["x"], c["y"]] for c in channels], dtype=float),
        )
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed channels entry in manifest: {exc}") from None

    if not manifest["trials"]:
        raise DataError("manifest lists no trials (empty dataset)")

    base = manifest_path.parent
    epochs = []
    for entry in manifest["trials"]:
        trial_id = entry.get("id", "<missing id>")
        trial_file = base / entry["file"]
        if not trial_file.exists():
            raise DataError(f"trial {trial_id}: file not found: {trial_file}")
        samples = _read_trial_csv(trial_file, trial_id)
        if samples.shape[0] != montage.n_channels:
            raise DataError(
                f"trial {trial_id}: {samples.shape[0]} channel rows, montage has "
                f"{montage.n_channels}"
            )
        epochs.append(
            TrialEpoch(
                trial_id=int(trial_id),
                label=parse_label(entry["label"]),
                samples=samples,
                onset_index=int(entry["onset_index"]),
            )
        )
    return EpochedDataset(montage=montage, sampling_rate=float(manifest["sampling_rate_hz"]), epochs=epochs)


def _read_trial_csv(path: Path, trial_id) -> np.ndarray:
    rows = []
    width = None
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = [float(tok) for tok in line.split(",")]
        except ValueError:
            raise DataError(f"trial {trial_id}: non-numeric value at {path}:{lineno}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DataError(f"trial {trial_id}: ragged row at {path}:{lineno}")
        rows.append(row)
    if not rows:
        raise DataError(f"trial {trial_id}: empty sample file {path}")
    return np.array(rows, dtype=float)


def save_dataset(
    dataset: EpochedDataset,
    out_dir: str | Path,
    manifest_name: str = "manifest.json",
    config: dict | None = None,
) -> Path:
    """Write a dataset as manifest + per-trial CSV files; returns the manifest path.

    Sample values are rendered with 17 significant digits so a save/load
    round trip is bit identical.  ``config`` (if given) is embedded in the
    manifest as a reproducibility record.
    """
    out_dir = Path(out_dir)
    trials_dir = out_dir / "trials"
    trials_dir.mkdir(parents=True, exist_ok=True)

    trial_entries = []
    for ep in dataset.epochs:
        rel = f"trials/trial_{ep.trial_id:04d}.csv"
        lines = [",".join(fmt_float(v) for v in row) for row in ep.samples]
        atomic_write_text(out_dir / rel, "\n".join(lines) + "\n")
        trial_entries.append(
            {
                "id": ep.trial_id,
                "label": ep.label.name.lower(),
                "onset_index": ep.onset_index,
                "file": rel,
            }
        )

    manifest = {
        "sampling_rate_hz": dataset.sampling_rate,
        "channels": [
            {"name": name, "x": float(x), "y": float(y)}
            for name, (x, y) in zip(dataset.montage.channels, dataset.montage.positions)
        ],
        "trials": trial_entries,
    }
    if config is not None:
        manifest["config"] = config
    path = out_dir / manifest_name
    atomic_write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def window_indices(onset_index: int, start_s: float, end_s: float, fs: float, n_samples: int) -> tuple[int, int]:
    """Map an onset-relative time window to a half-open sample index range."""
    if end_s < start_s:
        raise ValueError(f"window end {end_s} precedes start {start_s}")
    i0 = onset_index + int(np.rint(start_s * fs))
    i1 = onset_index + int(np.rint(end_s * fs))
    if i0 < 0 or i1 > n_samples:
        raise ValueError(
            f"window [{start_s}, {end_s}) s maps to samples [{i0}, {i1}), outside 0..{n_samples}"
        )
    return i0, i1


def epoch_slice(epoch: TrialEpoch, start_s: float, end_s: float, fs: float) -> np.ndarray:
    """Extract an onset-relative time window as a channels x time matrix.

    The window is half-open at the end: endpoints are mapped to the nearest
    sample index and the returned width is ``round(end_s*fs) - round(start_s*fs)``
    samples (equal to ``round((end_s-start_s)*fs)`` whenever the endpoints sit
    on the sample grid).  Adjacent windows therefore concatenate exactly.
    """
    i0, i1 = window_indices(epoch.onset_index, start_s, end_s, fs, epoch.n_samples)
    return epoch.samples[:, i0:i1]
