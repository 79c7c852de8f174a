"""
src/model/snapshots.py - Snapshot Series
What every solver tier hands back: envelopes at regular times, plus the
atomic fields for the full tier and an optional detection-plane record
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy import integrate

from src.model.fields import ComplexField1D


@dataclass(frozen=True, eq=False)
class Snapshot:
    time: float
    envelope: ComplexField1D
    control: float
    atoms: Dict[str, ComplexField1D] = field(default_factory=dict)

    def fields(self) -> Dict[str, ComplexField1D]:
        """Envelope first, then whatever atomic fields the tier keeps"""
        out = {"envelope": self.envelope}
        out.update(self.atoms)
        return out


@dataclass(eq=False)
class SnapshotSeries:
    """
    Attributes:
        tier: "full", "reduced" or "analytic"
        snapshots: In time order
        input_energy: |E|^2 integrated over the initial pulse (before the amplitude factor)
        steps: Time steps taken (0 for the analytic tier)
        detection_times / detection_flux: c |E(x_d, t)|^2 samples, full tier only
    """

    tier: str
    snapshots: List[Snapshot]
    input_energy: float
    steps: int = 0
    detection_plane: Optional[float] = None
    detection_times: Optional[np.ndarray] = None
    detection_flux: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def __getitem__(self, index: int) -> Snapshot:
        return self.snapshots[index]

    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])

    def envelopes(self) -> List[ComplexField1D]:
        return [s.envelope for s in self.snapshots]

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    def transmitted_energy(self) -> float:
        """Energy that crossed the detection plane (time integral of the flux)"""
        if self.detection_flux is None or len(self.detection_flux) < 2:
            return 0.0
        return float(integrate.trapezoid(self.detection_flux, self.detection_times))

    def transmitted_fraction(self) -> float:
        if self.input_energy <= 0.0:
            return 0.0
        return self.transmitted_energy() / self.input_energy
