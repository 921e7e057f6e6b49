"""Pearson-correlation filter that keeps features related to effort."""

import logging
from dataclasses import dataclass, field

import numpy as np

from faabe import config
from faabe.errors import ConfigError, DataError

logger = logging.getLogger(__name__)


def pearson(x, y):
    """Sample Pearson coefficient of two equal-length series.

    Returns None when either series has zero variance.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or len(x) != len(y):
        raise DataError(f"series lengths differ: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise DataError("at least two observations are needed")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return None
    return float(np.corrcoef(x, y)[0, 1])


@dataclass(frozen=True)
class SelectionResult:
    kept: tuple
    dropped: tuple                       # (name, r or None) pairs
    threshold: float
    correlations: dict = field(default_factory=dict, compare=False)

    def to_dict(self):
        return {
            "threshold": self.threshold,
            "kept": list(self.kept),
            "dropped": [{"feature": name, "correlation": r} for name, r in self.dropped],
            "correlations": dict(self.correlations),
        }


def select_features(d, threshold=None, rows=None):
    """Keep numeric/ordinal features with |r(feature, effort)| >= threshold.

    Nominal features are always kept. Correlations are computed on ``rows``
    only when given. If nothing qualifies, the feature with the highest |r|
    is kept so the similarity space is never empty.
    """
    if threshold is None:
        threshold = getattr(config, "CORR_THRESHOLD", 0.5)
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"correlation threshold must be in [0, 1], got {threshold}")
    if not d.normalized:
        logger.debug(f"Selecting features on un-normalized {d.name}")

    projects = d.projects if rows is None else [d.projects[i] for i in rows]
    efforts = [p.effort for p in projects]

    correlations = {}
    keep = set()
    for position, feature in enumerate(d.schema.features):
        if not feature.kind.is_numeric:
            keep.add(feature.name)
            continue
        r = pearson([p.values[position] for p in projects], efforts)
        correlations[feature.name] = r
        if r is not None and abs(r) >= threshold:
            keep.add(feature.name)

    if not keep:
        defined = [(abs(r), -i, name) for i, (name, r) in enumerate(correlations.items()) if r is not None]
        fallback = max(defined)[2] if defined else d.schema.names[0]
        logger.info(f"No feature of {d.name} reaches |r| >= {threshold}; keeping '{fallback}'")
        keep.add(fallback)

    kept = tuple(n for n in d.schema.names if n in keep)
    dropped = tuple((n, correlations.get(n)) for n in d.schema.names if n not in keep)
    return SelectionResult(kept, dropped, threshold, correlations)
