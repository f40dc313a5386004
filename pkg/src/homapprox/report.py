"""Small result records shared by the approximation drivers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ApproxReport:
    """Sup/mean error summary over a deterministic boundary sample."""

    degree: int
    sup_error: float
    mean_error: float
    n_samples: int
    extras: dict = field(default_factory=dict)

    def to_json_obj(self):
        obj = {
            "degree": self.degree,
            "sup_error": self.sup_error,
            "mean_error": self.mean_error,
            "n_samples": self.n_samples,
        }
        obj.update(self.extras)
        return obj
