"""Sampling scans of the positivity domain.

A local model passes at z when e^{-K} > 0, the metric is positive definite
and Im N is negative definite.  A rigid model passes when its metric is
positive definite; the sign of Im N is recorded but not required.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FrameDegeneracyError, SingularPointError
from .modelfile import ModelDescription, parse_model_text

__all__ = ["PointVerdict", "ScanResult", "sample_box", "classify_point", "scan_positivity"]


@dataclass(frozen=True)
class PointVerdict:
    z: tuple
    in_domain: bool
    metric_positive: bool
    kinetic_negative: bool
    passed: bool
    status: str = "ok"

    @property
    def sort_key(self):
        return tuple(x for c in self.z for x in (c.real, c.imag))


def sample_box(boxes, n: int, samples: int, seed: int) -> np.ndarray:
    """Uniform points, shape (samples, n); one (re_lo, re_hi, im_lo, im_hi) box per coordinate."""
    boxes = list(boxes)
    if len(boxes) == 1:
        boxes = boxes * n
    if len(boxes) != n:
        raise ValueError(f"need one box per coordinate ({n}), got {len(boxes)}")
    for lo, hi, ilo, ihi in boxes:
        if not (lo <= hi and ilo <= ihi) or (lo == hi and ilo == ihi):
            raise ValueError(f"empty box {(lo, hi, ilo, ihi)}")
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    out = np.empty((samples, n), dtype=complex)
    for a, (lo, hi, ilo, ihi) in enumerate(boxes):
        out[:, a] = rng.uniform(lo, hi, samples) + 1j * rng.uniform(ilo, ihi, samples)
    return out


def classify_point(section, flavor: str, z) -> PointVerdict:
    from .local import local_kinetic, point_geometry
    from .rigid import rigid_kinetic, rigid_metric
    z = tuple(complex(c) for c in z)
    try:
        if flavor == "local":
            geo = point_geometry(section, z)
            metric = geo.metric
        else:
            metric = rigid_metric(section, z)
    except DomainError:
        return PointVerdict(z, False, False, False, False, "outside domain")
    except SingularPointError:
        return PointVerdict(z, False, False, False, False, "singular")
    metric_pos = bool(np.linalg.eigvalsh(metric).min() > 0)
    try:
        kin = local_kinetic(section, z) if flavor == "local" else rigid_kinetic(section, z)
        kin_neg = kin.im_negative_definite
        status = "ok"
    except FrameDegeneracyError:
        kin_neg = False
        status = "kinetic matrix degenerate"
    if flavor == "local":
        passed = metric_pos and kin_neg
    else:
        passed = metric_pos
    return PointVerdict(z, True, metric_pos, bool(kin_neg), bool(passed), status)


def _worker(args):
    text, points = args
    desc = parse_model_text(text)
    section = desc.build_section()
    return [classify_point(section, desc.flavor, p) for p in points]


@dataclass(frozen=True)
class ScanResult:
    verdicts: tuple
    boxes: tuple
    samples: int
    seed: int

    def fraction(self, attr: str) -> float:
        return sum(getattr(v, attr) for v in self.verdicts) / len(self.verdicts)

    @property
    def pass_fraction(self) -> float:
        return self.fraction("passed")

    def boundary_estimate(self) -> list:
        """Per real axis: the gap between passing and failing hulls, when they separate."""
        n = len(self.verdicts[0].z)
        good = np.array([v.sort_key for v in self.verdicts if v.passed])
        bad = np.array([v.sort_key for v in self.verdicts if not v.passed])
        out = []
        if len(good) == 0 or len(bad) == 0:
            return out
        for k in range(2 * n):
            label = f"{'Re' if k % 2 == 0 else 'Im'} {'z' if n == 1 else f'z{k // 2 + 1}'}"
            if good[:, k].min() > bad[:, k].max():
                lo, hi = bad[:, k].max(), good[:, k].min()
            elif bad[:, k].min() > good[:, k].max():
                lo, hi = good[:, k].max(), bad[:, k].min()
            else:
                continue
            out.append({"axis": label, "between": [float(lo), float(hi)], "estimate": float((lo + hi) / 2)})
        return out


def scan_positivity(desc: ModelDescription, boxes=None, samples: int = 1000, seed: int = 0,
                    workers: int = 1) -> ScanResult:
    """Classify uniformly sampled points; results are sorted by coordinates.

    With ``workers > 1`` chunks are evaluated in separate processes; each
    rebuilds the model from its text, so the result does not depend on the
    worker count.
    """
    boxes = tuple(boxes or desc.boxes)
    if not boxes:
        raise ValueError("no scan box given and the model declares none")
    points = sample_box(boxes, desc.n, samples, seed)
    if workers > 1:
        chunks = np.array_split(points, workers)
        text = desc.to_text()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = [v for part in pool.map(_worker, [(text, c) for c in chunks]) for v in part]
    else:
        section = desc.build_section()
        verdicts = [classify_point(section, desc.flavor, p) for p in points]
    verdicts.sort(key=lambda v: v.sort_key)
    return ScanResult(tuple(verdicts), boxes, samples, seed)
