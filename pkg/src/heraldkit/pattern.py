"""Photon-number detection patterns."""

from dataclasses import dataclass


@dataclass(frozen=True)
class HeraldPattern:
    """Which modes are detected and the photon count at each detector."""

    detected_modes: tuple
    counts: tuple

    def __post_init__(self):
        dm = tuple(int(m) for m in self.detected_modes)
        ct = tuple(int(c) for c in self.counts)
        if len(dm) != len(ct):
            raise ValueError("detected_modes and counts must have equal length")
        if len(set(dm)) != len(dm):
            raise ValueError("detected modes must be distinct")
        if any(c < 0 for c in ct):
            raise ValueError("photon counts must be nonnegative")
        object.__setattr__(self, "detected_modes", dm)
        object.__setattr__(self, "counts", ct)

    @property
    def n_total(self) -> int:
        return sum(self.counts)

    def validate(self, num_modes: int):
        if not self.detected_modes:
            raise ValueError("empty detected set")
        if any(m < 0 or m >= num_modes for m in self.detected_modes):
            raise ValueError("detected mode index out of range")
        if len(self.detected_modes) >= num_modes:
            raise ValueError("at least one mode must stay unmeasured")

    def output_modes(self, num_modes: int):
        det = set(self.detected_modes)
        return [m for m in range(num_modes) if m not in det]

    def to_json(self) -> dict:
        return {"detected": list(self.detected_modes), "counts": list(self.counts)}

    @classmethod
    def from_json(cls, doc: dict) -> "HeraldPattern":
        return cls(tuple(doc["detected"]), tuple(doc["counts"]))
