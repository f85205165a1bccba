"""Property verifier for directed paths: increasing chords, self-approach,
normal/half-plane conditions and the length bound.

The checks are semi-decision procedures: a failure comes with a concrete
witness, a pass is certified only at sampling resolution.  Sampling combines
a deterministic low-discrepancy stream (prefix-stable, so refinement is
monotone) with exhaustive coverage of piece boundaries and bend straddles,
where violations concentrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateEndpoints
from .geom import Point
from .paths import NormalFan, PiecewisePath

LENGTH_BOUND_FACTOR = 2.0 * math.pi / 3.0
DEFAULT_SAMPLES = 20000
WEDGE_INTERIOR_LINES = 32
_DISC_RESOLUTION = 2048
_LADDER = (0.25, 0.08, 0.02, 5e-3, 1e-4, 1e-6)


@dataclass(frozen=True)
class VerifyReport:
    property: str
    passed: bool
    worst_margin: float
    witness: Optional[tuple]
    samples_used: int
    tolerance: float

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "pass": bool(self.passed),
            "worst_margin": float(self.worst_margin),
            "witness": list(self.witness) if self.witness is not None else None,
            "samples_used": int(self.samples_used),
            "tolerance": float(self.tolerance),
        }


def report_from_json(obj: dict) -> VerifyReport:
    return VerifyReport(
        property=obj["property"],
        passed=bool(obj["pass"]),
        worst_margin=float(obj["worst_margin"]),
        witness=tuple(obj["witness"]) if obj.get("witness") is not None else None,
        samples_used=int(obj["samples_used"]),
        tolerance=float(obj["tolerance"]),
    )


def _default_tol(path: PiecewisePath) -> float:
    pts = np.asarray([path.start.as_tuple(), path.end.as_tuple()])
    _, disc, _ = path.discretize(256)
    lo = disc.min(axis=0)
    hi = disc.max(axis=0)
    diag = float(np.hypot(*(hi - lo)))
    return 1e-7 * max(diag, 1e-12)


def _halton(n: int, dim: int, skip: int = 20) -> np.ndarray:
    bases = (2, 3, 5, 7)[:dim]
    idx = np.arange(skip, skip + n, dtype=np.int64)
    out = np.empty((n, dim))
    for d, b in enumerate(bases):
        i = idx.copy()
        res = np.zeros(n)
        f = 1.0
        while i.max() > 0:
            f /= b
            res += (i % b) * f
            i //= b
        out[:, d] = res
    return out


def _event_params(path: PiecewisePath) -> np.ndarray:
    return np.asarray(path.piece_boundaries())


def _bend_params(path: PiecewisePath) -> list:
    return [u for u, _, _ in path.bends()]


def _ladder_offsets(L: float) -> np.ndarray:
    return np.asarray([L * e for e in _LADDER])


def check_increasing_chords(
    path: PiecewisePath, n: int = DEFAULT_SAMPLES, tol: float = None
) -> VerifyReport:
    """Worst of |ad| - |bc| over ordered parameter quadruples a<=b<=c<=d."""
    if tol is None:
        tol = _default_tol(path)
    L = path.total_length
    quads = [np.sort(_halton(n, 4) * L, axis=1)]

    events = _event_params(path)
    offs = _ladder_offsets(L)
    signed = np.concatenate([-offs, offs, [0.0]])
    # Straddle every event with all ladder-offset combinations.
    for u in events:
        pts = np.unique(np.clip(u + signed, 0.0, L))
        if len(pts) >= 4:
            from itertools import combinations

            combos = np.asarray(list(combinations(range(len(pts)), 4)))
            quads.append(pts[combos])
    # Event-pair quadruples (catches long-range chord shrinkage).
    ev = np.unique(np.clip(events, 0.0, L))
    if len(ev) >= 2:
        pair_quads = []
        for i in range(len(ev)):
            for j in range(i, len(ev)):
                e1, e2 = ev[i], ev[j]
                for da in offs:
                    for db in offs:
                        q = np.clip([e1, e1 + da, e2, e2 + db], 0.0, L)
                        pair_quads.append(np.sort(q))
                        q = np.clip([e1 - da, e1, e2 - db, e2], 0.0, L)
                        pair_quads.append(np.sort(q))
        quads.append(np.asarray(pair_quads))
    Q = np.vstack(quads)
    # Mirror for reversal symmetry of the sample set.
    Q = np.vstack([Q, np.sort(L - Q, axis=1)])

    pa = path.points_at(Q[:, 0])
    pb = path.points_at(Q[:, 1])
    pc = path.points_at(Q[:, 2])
    pd = path.points_at(Q[:, 3])
    ad = np.hypot(*(pd - pa).T)
    bc = np.hypot(*(pc - pb).T)
    margins = ad - bc
    k = int(np.argmin(margins))
    worst = float(margins[k])
    witness = tuple(float(x) for x in Q[k]) if worst < -tol else None
    return VerifyReport(
        property="increasing_chords",
        passed=worst >= -tol,
        worst_margin=worst,
        witness=witness,
        samples_used=len(Q),
        tolerance=tol,
    )


def _base_params(path: PiecewisePath, n: int) -> np.ndarray:
    L = path.total_length
    base = [_halton(n, 1)[:, 0] * L, _event_params(path)]
    offs = _ladder_offsets(L)
    for u in _bend_params(path):
        base.append(np.clip(u + np.concatenate([-offs, offs]), 0.0, L))
    return np.concatenate(base)


def _one_sided_margin(proj: np.ndarray) -> float:
    """Margin for 'stays weakly on one side': best over the two side choices."""
    if proj.size == 0:
        return math.inf
    return float(max(proj.min(), (-proj).min()))


def _sweep_margins(path: PiecewisePath, bases: np.ndarray, future: bool):
    """Min over the (future or past) subpath of the half-plane projection.

    Returns (margins, witness_param_on_subpath) per base; margin is the least
    signed distance of the subpath from the normal line, positive side taken
    in (for future) or against (for past) the travel direction.
    """
    S, P, _ = path.discretize(_DISC_RESOLUTION)
    BP = path.points_at(bases)
    BT = path.tangents_at(bases)
    L = path.total_length
    eps = 1e-12 * max(L, 1.0)
    margins = np.empty(len(bases))
    wit = np.empty(len(bases))
    chunk = 256
    for lo in range(0, len(bases), chunk):
        hi = min(lo + chunk, len(bases))
        diff = P[None, :, :] - BP[lo:hi, None, :]
        proj = diff[:, :, 0] * BT[lo:hi, None, 0] + diff[:, :, 1] * BT[lo:hi, None, 1]
        if future:
            mask = S[None, :] >= bases[lo:hi, None] - eps
        else:
            mask = S[None, :] <= bases[lo:hi, None] + eps
            proj = -proj
        vals = np.where(mask, proj, np.inf)
        idx = np.argmin(vals, axis=1)
        margins[lo:hi] = vals[np.arange(hi - lo), idx]
        wit[lo:hi] = S[idx]
    return margins, wit


def _bend_line_margins(path: PiecewisePath, mode: str):
    """Margins quantified over wedge lines at every bend.

    mode 'crossing': the subpaths must each stay weakly on one side of the
    line (either side).  mode 'half_plane': sides are selected by the wedge
    tangent paired with the line; past must be non-positive, future
    non-negative.
    """
    S, P, _ = path.discretize(_DISC_RESOLUTION)
    L = path.total_length
    eps = 1e-12 * max(L, 1.0)
    worst = math.inf
    witness = None
    for u, t_in, t_out in path.bends():
        b = path.point_at(u)
        fan = NormalFan(at=b, backward=t_in, forward=t_out)
        fut_mask = S >= u - eps
        past_mask = S <= u + eps
        diff = P - np.asarray(b.as_tuple())
        for d_line in fan.line_directions(WEDGE_INTERIOR_LINES):
            n = d_line.perp()
            proj = diff[:, 0] * n.x + diff[:, 1] * n.y
            if mode == "crossing":
                m = min(
                    _one_sided_margin(proj[fut_mask]),
                    _one_sided_margin(proj[past_mask]),
                )
            else:
                d_m = fan.tangent_for_line(d_line)
                sgn = 1.0 if n.x * d_m.x + n.y * d_m.y >= 0 else -1.0
                sp = sgn * proj
                m = min(
                    float(sp[fut_mask].min()) if fut_mask.any() else math.inf,
                    float((-sp[past_mask]).min()) if past_mask.any() else math.inf,
                )
            if m < worst:
                worst = m
                k = int(np.argmin(np.where(fut_mask, proj, np.inf)))
                witness = (float(u), float(S[k]))
    return worst, witness


def check_self_approaching(
    path: PiecewisePath,
    direction: str = "fwd",
    n: int = DEFAULT_SAMPLES,
    tol: float = None,
) -> VerifyReport:
    """Normals never transversally cross the remaining subpath (one direction)."""
    if tol is None:
        tol = _default_tol(path)
    work = path if direction == "fwd" else path.reverse()
    bases = _base_params(work, n)
    margins, wits = _sweep_margins(work, bases, future=True)
    k = int(np.argmin(margins))
    worst = float(margins[k])
    witness = (float(bases[k]), float(wits[k]))
    bw, bwit = _bend_line_margins(work, mode="crossing")
    if bw < worst:
        worst, witness = bw, bwit
    passed = worst >= -tol
    return VerifyReport(
        property=f"self_approaching_{direction}",
        passed=passed,
        worst_margin=worst,
        witness=witness if not passed else None,
        samples_used=len(bases),
        tolerance=tol,
    )


def check_normal_property_ic(
    path: PiecewisePath, n: int = DEFAULT_SAMPLES, tol: float = None
) -> VerifyReport:
    """Normals cross neither the earlier nor the later subpath."""
    if tol is None:
        tol = _default_tol(path)
    bases = _base_params(path, n)
    m_f, w_f = _sweep_margins(path, bases, future=True)
    m_p, w_p = _sweep_margins(path, bases, future=False)
    margins = np.minimum(m_f, m_p)
    k = int(np.argmin(margins))
    worst = float(margins[k])
    witness = (float(bases[k]), float(w_f[k] if m_f[k] <= m_p[k] else w_p[k]))
    bw, bwit = _bend_line_margins(path, mode="crossing")
    if bw < worst:
        worst, witness = bw, bwit
    passed = worst >= -tol
    return VerifyReport(
        property="normal_property",
        passed=passed,
        worst_margin=worst,
        witness=witness if not passed else None,
        samples_used=len(bases),
        tolerance=tol,
    )


def check_half_plane(
    path: PiecewisePath, n: int = DEFAULT_SAMPLES, tol: float = None
) -> VerifyReport:
    """Earlier subpath in the negative, later subpath in the positive half-plane."""
    if tol is None:
        tol = _default_tol(path)
    bases = _base_params(path, n)
    m_f, w_f = _sweep_margins(path, bases, future=True)
    m_p, w_p = _sweep_margins(path, bases, future=False)
    margins = np.minimum(m_f, m_p)
    k = int(np.argmin(margins))
    worst = float(margins[k])
    witness = (float(bases[k]), float(w_f[k] if m_f[k] <= m_p[k] else w_p[k]))
    bw, bwit = _bend_line_margins(path, mode="half_plane")
    if bw < worst:
        worst, witness = bw, bwit
    passed = worst >= -tol
    return VerifyReport(
        property="half_plane",
        passed=passed,
        worst_margin=worst,
        witness=witness if not passed else None,
        samples_used=len(bases),
        tolerance=tol,
    )


def check_length_bound(path: PiecewisePath, tol: float = None) -> VerifyReport:
    """Total length within (2*pi/3) times the endpoint distance."""
    if tol is None:
        tol = _default_tol(path)
    d = path.start.dist(path.end)
    if d <= 1e-12 * max(path.total_length, 1.0):
        raise DegenerateEndpoints("path endpoints coincide")
    margin = LENGTH_BOUND_FACTOR * d + tol - path.total_length
    passed = margin >= 0.0
    return VerifyReport(
        property="length_bound",
        passed=passed,
        worst_margin=float(margin),
        witness=None if passed else (0.0, path.total_length),
        samples_used=1,
        tolerance=tol,
    )


def geodesic_between_check(
    p1: PiecewisePath,
    p2: PiecewisePath,
    n: int = DEFAULT_SAMPLES,
    tol: float = None,
    delta: float = None,
) -> VerifyReport:
    """The geodesic in the region bounded by two paths keeps increasing chords."""
    from .geodesic import geodesic_in_hourglass

    if tol is None:
        tol = min(_default_tol(p1), _default_tol(p2))
    if delta is None:
        delta = tol
    gam = geodesic_in_hourglass(p1, p2, delta)
    rep = check_increasing_chords(gam, n=n, tol=tol)
    return VerifyReport(
        property="geodesic_between",
        passed=rep.passed,
        worst_margin=rep.worst_margin,
        witness=rep.witness,
        samples_used=rep.samples_used,
        tolerance=tol,
    )


def full_suite(path: PiecewisePath, n: int = DEFAULT_SAMPLES, tol: float = None) -> list:
    """The certification battery run on every constructed result."""
    return [
        check_increasing_chords(path, n=n, tol=tol),
        check_self_approaching(path, "fwd", n=n, tol=tol),
        check_self_approaching(path, "bwd", n=n, tol=tol),
        check_normal_property_ic(path, n=n, tol=tol),
        check_half_plane(path, n=n, tol=tol),
        check_length_bound(path, tol=tol),
    ]
