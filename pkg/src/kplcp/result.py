from dataclasses import dataclass, field
from typing import List

HAMMING = "hamming"
EDIT = "edit"
MODELS = (HAMMING, EDIT)


@dataclass
class PlcpResult:
    """Per-suffix maximal k-error prefix length and a witness position (-1 if none)."""
    plcp: List[int]
    p: List[int]
    model: str = HAMMING
    k: int = 0
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.plcp)

    def copy(self) -> "PlcpResult":
        return PlcpResult(list(self.plcp), list(self.p), self.model, self.k, dict(self.meta))
