"""Rasterized planar set topology: components, holes, solidness, morphology.

Digital-topology convention: regions are 4-connected, complements are
8-connected. A complement component is "unbounded" when it reaches the
frame boundary (outside the frame everything is connected through the
unbounded exterior of the window).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import FrameError, FrameMismatchError
from .grid import Frame

FOUR_CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
EIGHT_CONN = np.ones((3, 3), dtype=bool)

OPEN = "open"
COMPACT = "compact"


@dataclass(frozen=True, eq=False)
class Region:
    """Subset of the frame as a per-cell membership mask with a role tag.

    Open-role regions may not include frame-boundary cells: they stand for
    open sets with compact closure strictly inside the window.
    """

    frame: Frame
    mask: np.ndarray
    role: str = OPEN

    def __post_init__(self):
        mask = np.ascontiguousarray(np.asarray(self.mask, dtype=bool))
        if mask.shape != self.frame.shape:
            raise ValueError(f"mask shape {mask.shape} != frame shape {self.frame.shape}")
        if self.role not in (OPEN, COMPACT):
            raise ValueError(f"role must be 'open' or 'compact', got {self.role!r}")
        if self.role == OPEN and bool((mask & self.frame.boundary_mask()).any()):
            raise FrameError("open-role region may not include frame-boundary cells")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    # -- basic queries ------------------------------------------------

    @property
    def cell_count(self) -> int:
        return int(self.mask.sum())

    @property
    def area(self) -> float:
        return self.cell_count * self.frame.cell_area

    @property
    def is_empty(self) -> bool:
        return not bool(self.mask.any())

    def with_role(self, role: str) -> "Region":
        return Region(self.frame, self.mask, role)

    def _check_frame(self, other: "Region"):
        if self.frame != other.frame:
            raise FrameMismatchError("regions live on different frames")

    # -- set algebra (role of the result given explicitly or inherited) --

    def union(self, other: "Region", role: str | None = None) -> "Region":
        self._check_frame(other)
        return Region(self.frame, self.mask | other.mask, role or self.role)

    def intersection(self, other: "Region", role: str | None = None) -> "Region":
        self._check_frame(other)
        return Region(self.frame, self.mask & other.mask, role or self.role)

    def difference(self, other: "Region", role: str | None = None) -> "Region":
        self._check_frame(other)
        return Region(self.frame, self.mask & ~other.mask, role or self.role)

    def subset_of(self, other: "Region") -> bool:
        self._check_frame(other)
        return bool(np.all(~self.mask | other.mask))

    def disjoint_from(self, other: "Region") -> bool:
        self._check_frame(other)
        return not bool((self.mask & other.mask).any())

    def __eq__(self, other):
        if not isinstance(other, Region):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.role == other.role
            and bool(np.array_equal(self.mask, other.mask))
        )


@dataclass(frozen=True)
class SolidDecomposition:
    """Connected components of a region paired with their holes."""

    region: Region
    components: tuple = field(default_factory=tuple)  # tuple[(Region, tuple[Region, ...])]


def rect_region(frame: Frame, x0: float, x1: float, y0: float, y1: float,
                role: str = COMPACT) -> Region:
    """Cells whose centers fall in the rectangle.

    Compact role uses the closed rectangle, open role the open one; with
    generic bounds (off the gridlines) the two rasterizations coincide.
    """
    xs = frame.x_centers()
    ys = frame.y_centers()
    if role == COMPACT:
        in_x = (xs >= x0) & (xs <= x1)
        in_y = (ys >= y0) & (ys <= y1)
    else:
        in_x = (xs > x0) & (xs < x1)
        in_y = (ys > y0) & (ys < y1)
    mask = in_y[:, None] & in_x[None, :]
    return Region(frame, mask, role)


def empty_region(frame: Frame, role: str = OPEN) -> Region:
    return Region(frame, np.zeros(frame.shape, dtype=bool), role)


def frame_interior(frame: Frame, margin: int = 1) -> Region:
    """All cells further than `margin` rings from the frame boundary, open role."""
    if margin < 1:
        raise ValueError("open interior needs a margin of at least one ring")
    ny, nx = frame.shape
    mask = np.zeros(frame.shape, dtype=bool)
    mask[margin:ny - margin, margin:nx - margin] = True
    return Region(frame, mask, OPEN)


# -- components, holes, solidness -------------------------------------


def _component_masks(mask: np.ndarray) -> list[np.ndarray]:
    labels, n = ndimage.label(mask, structure=FOUR_CONN)
    return [labels == k for k in range(1, n + 1)]


def _hole_masks(mask: np.ndarray) -> list[np.ndarray]:
    """Bounded 8-connected components of the complement."""
    labels, n = ndimage.label(~mask, structure=EIGHT_CONN)
    if n == 0:
        return []
    edge_labels = np.unique(
        np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    )
    edge_labels = set(int(v) for v in edge_labels if v != 0)
    return [labels == k for k in range(1, n + 1) if k not in edge_labels]


def _flip_role(role: str) -> str:
    return COMPACT if role == OPEN else OPEN


def connected_components(r: Region) -> list[Region]:
    """4-connected components, in label order."""
    return [Region(r.frame, m, r.role) for m in _component_masks(r.mask)]


def holes(r: Region) -> list[Region]:
    """Bounded complement components of the whole region (role flipped)."""
    return [Region(r.frame, m, _flip_role(r.role)) for m in _hole_masks(r.mask)]


def is_solid(r: Region) -> bool:
    """Connected with a complement that only reaches the frame boundary."""
    if r.is_empty:
        return False
    _, n = ndimage.label(r.mask, structure=FOUR_CONN)
    return n == 1 and not _hole_masks(r.mask)


def solid_decomposition(r: Region) -> SolidDecomposition:
    comps = []
    for cm in _component_masks(r.mask):
        comp = Region(r.frame, cm, r.role)
        comp_holes = tuple(
            Region(r.frame, hm, _flip_role(r.role)) for hm in _hole_masks(cm)
        )
        comps.append((comp, comp_holes))
    return SolidDecomposition(region=r, components=tuple(comps))


def solid_hull(r: Region) -> Region:
    """Region with every hole of every component filled."""
    out = np.array(r.mask)
    for hm in _hole_masks(r.mask):
        out |= hm
    return Region(r.frame, out, r.role)


# -- morphology --------------------------------------------------------


def erode(r: Region, k: int) -> Region:
    """Chebyshev erosion by k cells."""
    if k < 0:
        raise ValueError("erosion radius must be >= 0")
    if k == 0 or r.is_empty:
        return r
    mask = ndimage.binary_erosion(r.mask, structure=EIGHT_CONN, iterations=k,
                                  border_value=0)
    return Region(r.frame, mask, r.role)


def dilate(r: Region, k: int) -> Region:
    """Chebyshev dilation by k cells; FrameError if the result would exit the frame."""
    if k < 0:
        raise ValueError("dilation radius must be >= 0")
    if k == 0 or r.is_empty:
        return r
    ny, nx = r.frame.shape
    rows, cols = np.nonzero(r.mask)
    if rows.min() < k or cols.min() < k or rows.max() >= ny - k or cols.max() >= nx - k:
        raise FrameError(f"dilation by {k} cells exits the frame")
    mask = ndimage.binary_dilation(r.mask, structure=EIGHT_CONN, iterations=k,
                                   border_value=0)
    return Region(r.frame, mask, r.role)


# -- marked points ------------------------------------------------------


def point_cells(frame: Frame, points: np.ndarray) -> np.ndarray:
    """(m, 2) array of (row, col) for points inside the frame; -1 rows outside.

    Raises TieBreakError when an inside point sits within tie_eps_geom of a
    gridline, where cell membership would be numerically ambiguous.
    """
    from .errors import TieBreakError

    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    eps = frame.tie_eps_geom
    out = np.full((len(pts), 2), -1, dtype=int)
    for idx, (x, y) in enumerate(pts):
        if not frame.contains_point(x, y):
            continue
        fx = (x - frame.x_min) / frame.dx
        fy = (y - frame.y_min) / frame.dy
        col, row = int(np.floor(fx)), int(np.floor(fy))
        # distance to the nearest vertical / horizontal gridline
        d = min((fx - col) * frame.dx, (col + 1 - fx) * frame.dx,
                (fy - row) * frame.dy, (row + 1 - fy) * frame.dy)
        if d <= eps:
            raise TieBreakError(
                f"point ({x}, {y}) is within tie epsilon of a cell boundary"
            )
        out[idx] = (row, col)
    return out


def count_points(r: Region, points: np.ndarray) -> int:
    """Number of points whose containing cell belongs to the region."""
    cells = point_cells(r.frame, points)
    inside = cells[:, 0] >= 0
    if not inside.any():
        return 0
    rows, cols = cells[inside, 0], cells[inside, 1]
    return int(r.mask[rows, cols].sum())


# -- serialization ------------------------------------------------------


def region_to_rle(r: Region) -> dict:
    """Run-length encoding, one list of (start_col, length) runs per row."""
    runs = []
    for row in r.mask:
        row_runs = []
        padded = np.diff(np.concatenate([[0], row.astype(np.int8), [0]]))
        starts = np.nonzero(padded == 1)[0]
        ends = np.nonzero(padded == -1)[0]
        for s, e in zip(starts, ends):
            row_runs.append([int(s), int(e - s)])
        runs.append(row_runs)
    return {
        "frame": {
            "x_min": r.frame.x_min, "x_max": r.frame.x_max,
            "y_min": r.frame.y_min, "y_max": r.frame.y_max,
            "nx": r.frame.nx, "ny": r.frame.ny,
        },
        "role": r.role,
        "rows": runs,
    }


def region_from_rle(data: dict) -> Region:
    f = data["frame"]
    frame = Frame(f["x_min"], f["x_max"], f["y_min"], f["y_max"], f["nx"], f["ny"])
    mask = np.zeros(frame.shape, dtype=bool)
    for j, row_runs in enumerate(data["rows"]):
        for start, length in row_runs:
            mask[j, start:start + length] = True
    return Region(frame, mask, data["role"])
