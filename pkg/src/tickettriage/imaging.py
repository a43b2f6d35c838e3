"""Window detection in screenshots.

Two shallow detectors (contour tracing over a binarized image, and Canny
edges + axis-aligned line clustering) feed an ensemble that is size-filtered,
run through a feature-based window/non-window classifier, deduplicated by
IoU, and finally categorized by application kind and OS theme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from .raster import (
    BinaryRaster,
    GrayRaster,
    Raster,
    binarize,
    gaussian_blur,
    otsu_threshold,
    to_grayscale,
)


from .errors import ParameterError

APP_CATEGORIES = ("dialog", "console", "browser", "explorer", "other")
OS_CATEGORIES = ("windows", "linux", "mac", "unknown")


@dataclass(frozen=True, order=True)
class Rect:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ParameterError(f"degenerate rect {self}")

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h

    def contains(self, other: "Rect") -> bool:
        return (self.x <= other.x and self.y <= other.y
                and other.x2 <= self.x2 and other.y2 <= self.y2)

    def intersection_area(self, other: "Rect") -> int:
        iw = min(self.x2, other.x2) - max(self.x, other.x)
        ih = min(self.y2, other.y2) - max(self.y, other.y)
        return iw * ih if iw > 0 and ih > 0 else 0

    def within_image(self, img: Raster) -> bool:
        return self.x >= 0 and self.y >= 0 and self.x2 <= img.width and self.y2 <= img.height


def iou(a: Rect, b: Rect) -> float:
    """Intersection over union; 0 for disjoint rects."""
    inter = a.intersection_area(b)
    if inter == 0:
        return 0.0
    return inter / (a.area + b.area - inter)


@dataclass(frozen=True)
class CandidateBox:
    rect: Rect
    source: str  # "contour" | "edge"


@dataclass(frozen=True)
class WindowDetection:
    rect: Rect
    window_confidence: float
    app_category: str
    os_category: str
    category_confidence: float


@dataclass
class DetectionParams:
    gaussian_sigma: float = 1.0
    binarize_threshold: Optional[int] = None  # None = Otsu per image
    canny_low: float = 40.0
    canny_high: float = 120.0
    hough_min_line_frac: float = 0.15
    min_window_w: int = 40
    min_window_h: int = 30
    iou_dedup_threshold: float = 0.5
    window_conf_cutoff: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.iou_dedup_threshold <= 1.0):
            raise ParameterError("iou_dedup_threshold must be in [0,1]")
        if self.min_window_w < 1 or self.min_window_h < 1:
            raise ParameterError("minimum window dims must be >= 1")


# ---------------------------------------------------------------------------
# contour detector

def _trace_boundary(mask: np.ndarray) -> list[tuple[int, int]]:
    """Moore-neighbor boundary trace of the largest-context component mask."""
    ys, xs = np.nonzero(mask)
    start = (int(ys[0]), int(xs[0]))  # topmost, then leftmost
    # 8-neighborhood in clockwise order starting from west
    nbrs = [(0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1)]
    h, w = mask.shape

    def filled(p):
        return 0 <= p[0] < h and 0 <= p[1] < w and mask[p]

    boundary = [start]
    prev_dir = 0  # came from the west
    cur = start
    for _ in range(4 * mask.size):
        found = False
        for k in range(8):
            d = (prev_dir + k) % 8
            nxt = (cur[0] + nbrs[d][0], cur[1] + nbrs[d][1])
            if filled(nxt):
                boundary.append(nxt)
                cur = nxt
                prev_dir = (d + 5) % 8  # backtrack: restart search after the pixel we came from
                found = True
                break
        if not found:  # isolated pixel
            break
        if cur == start and len(boundary) > 2:
            break
    return boundary


def _rdp(points: list[tuple[int, int]], eps: float) -> list[tuple[int, int]]:
    """Ramer-Douglas-Peucker simplification of an open polyline."""
    if len(points) < 3:
        return list(points)
    p0 = np.array(points[0], dtype=np.float64)
    p1 = np.array(points[-1], dtype=np.float64)
    pts = np.array(points, dtype=np.float64)
    seg = p1 - p0
    seg_len = np.hypot(*seg)
    if seg_len == 0:
        dists = np.hypot(*(pts - p0).T)
    else:
        rel = pts - p0
        dists = np.abs(seg[0] * rel[:, 1] - seg[1] * rel[:, 0]) / seg_len
    idx = int(np.argmax(dists))
    if dists[idx] <= eps:
        return [points[0], points[-1]]
    left = _rdp(points[:idx + 1], eps)
    right = _rdp(points[idx:], eps)
    return left[:-1] + right


def _polygon_corners(boundary: list[tuple[int, int]], eps: float) -> int:
    """Vertex count of the RDP-approximated closed boundary."""
    if len(boundary) < 4:
        return len(boundary)
    pts = boundary[:-1] if boundary[0] == boundary[-1] else list(boundary)
    # split the closed curve at the point farthest from the start
    anchor = np.array(pts[0], dtype=np.float64)
    arr = np.array(pts, dtype=np.float64)
    far = int(np.argmax(((arr - anchor) ** 2).sum(axis=1)))
    if far == 0:
        return 1
    chain_a = _rdp(pts[:far + 1], eps)
    chain_b = _rdp(pts[far:] + [pts[0]], eps)
    return len(chain_a) + len(chain_b) - 2  # shared endpoints counted once


_MIN_COMPONENT_AREA = 80
_RECT_FILL_RATIO = 0.85


def detect_contour_boxes(img: Raster, p: DetectionParams) -> list[CandidateBox]:
    """Grayscale -> blur -> binarize -> component border tracing -> rectangle test."""
    gray = gaussian_blur(to_grayscale(img), p.gaussian_sigma)
    threshold = p.binarize_threshold if p.binarize_threshold is not None else otsu_threshold(gray)
    binary = binarize(gray, threshold)

    boxes: list[CandidateBox] = []
    for polarity in (255, 0):
        mask = binary.array == polarity
        labels, n = ndimage.label(mask)
        if n == 0:
            continue
        slices = ndimage.find_objects(labels)
        areas = np.bincount(labels.ravel())
        for i, sl in enumerate(slices, start=1):
            if sl is None:
                continue
            h = sl[0].stop - sl[0].start
            w = sl[1].stop - sl[1].start
            area = int(areas[i])
            if area < _MIN_COMPONENT_AREA or w < 8 or h < 8:
                continue
            if w * h >= 0.9 * img.width * img.height:
                continue  # the desktop background, not a window
            if area / (w * h) < _RECT_FILL_RATIO:
                continue
            comp = labels[sl] == i
            eps = max(3.0, 0.02 * (w + h))
            if _polygon_corners(_trace_boundary(comp), eps) != 4:
                continue
            boxes.append(CandidateBox(Rect(sl[1].start, sl[0].start, w, h), "contour"))
    return boxes


# ---------------------------------------------------------------------------
# Canny + line clustering detector

def canny_edges(gray: GrayRaster, sigma: float, low: float, high: float) -> np.ndarray:
    """Canny edge map: Sobel gradients, NMS, double-threshold hysteresis."""
    g = gaussian_blur(gray, sigma).array.astype(np.float64)
    gp = np.pad(g, 1, mode="edge")
    gx = (gp[:-2, 2:] + 2 * gp[1:-1, 2:] + gp[2:, 2:]
          - gp[:-2, :-2] - 2 * gp[1:-1, :-2] - gp[2:, :-2])
    gy = (gp[2:, :-2] + 2 * gp[2:, 1:-1] + gp[2:, 2:]
          - gp[:-2, :-2] - 2 * gp[:-2, 1:-1] - gp[:-2, 2:])
    mag = np.hypot(gx, gy)

    angle = np.rad2deg(np.arctan2(gy, gx)) % 180.0
    mp = np.pad(mag, 1, mode="constant")

    def shifted(dy, dx):
        return mp[1 + dy:mp.shape[0] - 1 + dy, 1 + dx:mp.shape[1] - 1 + dx]

    nms = np.zeros_like(mag, dtype=bool)
    for lo, hi, (dy, dx) in (
        (0.0, 22.5, (0, 1)), (157.5, 180.0, (0, 1)),   # horizontal gradient -> vertical edge
        (22.5, 67.5, (1, 1)),
        (67.5, 112.5, (1, 0)),
        (112.5, 157.5, (1, -1)),
    ):
        sel = (angle >= lo) & (angle < hi)
        nms |= sel & (mag >= shifted(dy, dx)) & (mag >= shifted(-dy, -dx))

    weak = nms & (mag >= low)
    strong = weak & (mag >= high)
    if not strong.any():
        return np.zeros_like(weak)
    labels, _ = ndimage.label(weak, structure=np.ones((3, 3), dtype=int))
    keep = np.zeros(labels.max() + 1, dtype=bool)
    keep[np.unique(labels[strong])] = True
    keep[0] = False
    return keep[labels]


def _row_segments(edges: np.ndarray, min_len: int, max_gap: int = 2,
                  min_density: float = 0.8) -> list[tuple[int, int, int]]:
    """Dense horizontal edge runs per row as (y, x0, x1) with x1 inclusive."""
    segs = []
    for y in range(edges.shape[0]):
        xs = np.flatnonzero(edges[y])
        if len(xs) < min_len * min_density:
            continue
        run_start = xs[0]
        prev = xs[0]
        count = 1
        for x in xs[1:]:
            if x - prev <= max_gap + 1:
                prev = x
                count += 1
                continue
            span = prev - run_start + 1
            if span >= min_len and count / span >= min_density:
                segs.append((y, int(run_start), int(prev)))
            run_start = x
            prev = x
            count = 1
        span = prev - run_start + 1
        if span >= min_len and count / span >= min_density:
            segs.append((y, int(run_start), int(prev)))
    return segs


def _merge_lines(segs: list[tuple[int, int, int]], tol: int = 2) -> list[tuple[int, int, int]]:
    """Merge near-collinear segments (same y +/- tol, overlapping spans)."""
    merged: list[list[int]] = []
    for y, a, b in sorted(segs):
        for m in merged:
            if abs(y - m[0]) <= tol and a <= m[2] + tol and b >= m[1] - tol:
                if b - a > m[2] - m[1]:
                    m[0] = y
                m[1] = min(m[1], a)
                m[2] = max(m[2], b)
                break
        else:
            merged.append([y, a, b])
    return [tuple(m) for m in merged]


def _span_coverage(lo: int, hi: int, seg_lo: int, seg_hi: int) -> float:
    if hi <= lo:
        return 0.0
    return max(0, min(hi, seg_hi) - max(lo, seg_lo)) / (hi - lo)


def _thicken(edges: np.ndarray, axis: int) -> np.ndarray:
    """OR each edge pixel into its neighbors along one axis. NMS can place an
    edge on either side of a 1-px border, so raw runs fragment; thickening
    perpendicular to the scan direction restores contiguous lines."""
    out = edges.copy()
    if axis == 0:
        out[1:] |= edges[:-1]
        out[:-1] |= edges[1:]
    else:
        out[:, 1:] |= edges[:, :-1]
        out[:, :-1] |= edges[:, 1:]
    return out


def detect_edge_boxes(img: Raster, p: DetectionParams) -> list[CandidateBox]:
    """Canny edges -> horizontal/vertical line runs -> rectangle clustering."""
    gray = to_grayscale(img)
    edges = canny_edges(gray, p.gaussian_sigma, p.canny_low, p.canny_high)
    min_h_len = max(8, int(p.hough_min_line_frac * img.width))
    min_v_len = max(8, int(p.hough_min_line_frac * img.height))

    hlines = _merge_lines(_row_segments(_thicken(edges, 0), min_h_len))
    vlines = [(x, y0, y1) for (x, y0, y1)
              in _merge_lines(_row_segments(_thicken(edges, 1).T, min_v_len))]

    tol = 4
    scored: dict[Rect, float] = {}
    hs = sorted(hlines)
    vs = sorted(vlines)
    for i in range(len(hs)):
        y1, ax0, ax1 = hs[i]
        for j in range(i + 1, len(hs)):
            y2, bx0, bx1 = hs[j]
            if y2 - y1 < 10:
                continue
            for a in range(len(vs)):
                x1, ay0, ay1 = vs[a]
                if x1 < min(ax0, bx0) - tol:
                    continue
                for b in range(a + 1, len(vs)):
                    x2, by0, by1 = vs[b]
                    if x2 - x1 < 10:
                        continue
                    # edge-support coverage of each side of the candidate rect
                    top = _span_coverage(x1, x2, ax0, ax1)
                    bot = _span_coverage(x1, x2, bx0, bx1)
                    left = _span_coverage(y1, y2, ay0, ay1)
                    right = _span_coverage(y1, y2, by0, by1)
                    cov = (top, bot, left, right)
                    if min(cov) < 0.5 or sum(cov) / 4.0 < 0.75:
                        continue
                    rect = Rect(x1, y1, x2 - x1 + 1, y2 - y1 + 1)
                    score = sum(cov)
                    if score > scored.get(rect, 0.0):
                        scored[rect] = score

    # nearby parallel lines spawn clouds of near-identical frames; keep the
    # best-supported representative of each cloud, distinct structures stay
    boxes: list[CandidateBox] = []
    for rect in sorted(scored, key=lambda r: (-scored[r], r)):
        if all(iou(rect, kept.rect) < 0.8 for kept in boxes):
            boxes.append(CandidateBox(rect, "edge"))
    return boxes


# ---------------------------------------------------------------------------
# filtering / dedup

def size_filter(boxes: list[CandidateBox], p: DetectionParams) -> list[CandidateBox]:
    """Keep boxes at least min_window_w x min_window_h; order preserved."""
    return [b for b in boxes if b.rect.w >= p.min_window_w and b.rect.h >= p.min_window_h]


def dedup(boxes: list[CandidateBox], p: DetectionParams,
          scores: Optional[dict[Rect, float]] = None) -> list[CandidateBox]:
    """Greedy suppression of overlapping boxes.

    Order is confidence-descending when scores are given (classic NMS),
    otherwise largest-area-first; ties break deterministically.
    """
    if scores is not None:
        ordered = sorted(boxes, key=lambda b: (-scores.get(b.rect, 0.0),
                                               -b.rect.area, b.rect, b.source))
    else:
        ordered = sorted(boxes, key=lambda b: (-b.rect.area, b.rect, b.source))
    kept: list[CandidateBox] = []
    for box in ordered:
        if all(iou(box.rect, k.rect) < p.iou_dedup_threshold for k in kept):
            kept.append(box)
    return kept


_NESTED_COVER = 0.85


def _suppress_nested(boxes: list[CandidateBox],
                     scores: dict[Rect, float]) -> list[CandidateBox]:
    """Drop boxes mostly inside, or mostly covering, a higher-confidence box.

    IoU suppression misses slivers and offset super-rects whose IoU with the
    kept box is below the dedup threshold; asymmetric coverage catches them.
    """
    ordered = sorted(boxes, key=lambda b: (-scores.get(b.rect, 0.0),
                                           -b.rect.area, b.rect, b.source))
    kept: list[CandidateBox] = []
    for box in ordered:
        nested = False
        for k in kept:
            inter = box.rect.intersection_area(k.rect)
            if (inter / box.rect.area >= _NESTED_COVER
                    or inter / k.rect.area >= _NESTED_COVER):
                nested = True
                break
        if not nested:
            kept.append(box)
    return kept


# ---------------------------------------------------------------------------
# crop features + models

FEATURE_VERSION = 3
N_FEATURES = 27


def _side_coverage(luma: np.ndarray) -> np.ndarray:
    """Per-side fraction of boundary positions with a strong luma step within
    the outermost 6 pixel lines (candidate boxes can sit a few pixels inside
    the true frame). A real window frame scores ~1.0 on every side;
    rectangles assembled from lines of different windows do not."""
    def cov(lines: np.ndarray) -> float:
        steps = np.abs(np.diff(lines.astype(np.float64), axis=0)).max(axis=0)
        return float((steps > 100.0).mean())

    if luma.shape[0] < 6 or luma.shape[1] < 6:
        return np.zeros(4)
    return np.array([
        cov(luma[0:6, :]),           # top
        cov(luma[-6:, :][::-1]),     # bottom
        cov(luma[:, 0:6].T),         # left
        cov(luma[:, -6:].T[::-1]),   # right
    ])


def window_features(img: Raster, r: Rect) -> np.ndarray:
    """Hand-crafted features of an image crop used by the window models."""
    if not r.within_image(img):
        raise ParameterError(f"rect {r} outside image {img.width}x{img.height}")
    crop = img.array[r.y:r.y2, r.x:r.x2].astype(np.float64)
    luma = crop[:, :, 0] * 0.299 + crop[:, :, 1] * 0.587 + crop[:, :, 2] * 0.114
    h, w = luma.shape
    f = np.zeros(N_FEATURES)

    f[0] = np.clip(math.log(r.w / r.h), -2.0, 2.0)
    dx = np.abs(np.diff(luma, axis=1))
    dy = np.abs(np.diff(luma, axis=0))
    f[1] = float((dx > 25).mean() + (dy > 25).mean()) / 2.0

    # border strength: outermost line vs a line 3 px inside, per side
    if h > 6 and w > 6:
        f[2] = np.abs(luma[0] - luma[3]).mean() / 255.0
        f[3] = np.abs(luma[-1] - luma[-4]).mean() / 255.0
        f[4] = np.abs(luma[:, 0] - luma[:, 3]).mean() / 255.0
        f[5] = np.abs(luma[:, -1] - luma[:, -4]).mean() / 255.0

    # title-bar band vs upper body contrast
    if h >= 28:
        band = crop[2:12].mean(axis=(0, 1))
        body = crop[16:min(44, h - 2)].mean(axis=(0, 1))
        f[6] = np.abs(band - body).mean() / 255.0
        f[10:13] = band / 255.0
        f[13] = luma[16:min(44, h - 2)].mean() / 255.0
        # button cluster side inside the title band (mac = left)
        third = max(1, w // 3)
        f[18] = (luma[2:12, :third].mean() - luma[2:12, -third:].mean()) / 255.0

    med = np.median(luma)
    f[7] = float((np.abs(luma - med) < 10).mean())
    f[8] = luma.std() / 128.0
    f[9] = luma.mean() / 255.0
    f[14] = float((luma < 60).mean())

    if w >= 70 and h >= 40:
        strip = luma[16:-4, 3:36].mean()
        body = luma[16:-4, 44:].mean()
        f[15] = abs(strip - body) / 255.0
        f[16] = np.abs(crop[16:26].mean(axis=(0, 1)) - crop[30:40].mean(axis=(0, 1))).mean() / 255.0
    if h >= 40:
        f[17] = np.abs(luma[-16:-4].mean() - luma[16:28].mean()) / 255.0

    # frame completeness is measured on a slightly expanded crop: candidate
    # boxes may sit a pixel or two inside the true frame
    ex = 2
    ey0, ex0 = max(0, r.y - ex), max(0, r.x - ex)
    ecrop = img.array[ey0:min(img.height, r.y2 + ex),
                      ex0:min(img.width, r.x2 + ex)].astype(np.float64)
    eluma = ecrop[:, :, 0] * 0.299 + ecrop[:, :, 1] * 0.587 + ecrop[:, :, 2] * 0.114
    sides = _side_coverage(eluma)
    f[19:23] = sides
    f[23] = sides.min()

    # crossing lines: a strong step line spanning the crop through its central
    # band means the box straddles two window frames (a window whose frame
    # crossed the middle would have to cover far more of the crop than any
    # plausible occluder does)
    if h > 12 and w > 12:
        xs0, xs1 = int(0.4 * (w - 1)), max(int(0.4 * (w - 1)) + 1, int(0.6 * (w - 1)))
        ys0, ys1 = int(0.4 * (h - 1)), max(int(0.4 * (h - 1)) + 1, int(0.6 * (h - 1)))
        f[24] = float((dx[:, xs0:xs1] > 100).mean(axis=0).max())
        f[25] = float((dy[ys0:ys1, :] > 100).mean(axis=1).max())

    # title-bar separator: a horizontal step row 10-18 px below the top edge
    if h > 24 and w > 12:
        f[26] = float((np.abs(dy[10:18, :]) > 40).mean(axis=1).max())
    return f


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -35, 35)))


def _softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max())
    return e / e.sum()


@dataclass
class WindowFilterModel:
    """One-hidden-layer network over window_features; probability of
    'is a window'. A hidden layer is needed because several cues only matter
    in combination (e.g. strong side coverage is exonerating only when no
    frame line crosses the interior)."""
    W1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float
    mean: np.ndarray
    scale: np.ndarray

    def predict_proba(self, feats: np.ndarray) -> float:
        z = (feats - self.mean) / self.scale
        hidden = np.tanh(self.W1 @ z + self.b1)
        return float(_sigmoid(hidden @ self.w2 + self.b2))


@dataclass
class WindowCategoryModel:
    """Two independent softmax heads: application kind and OS theme."""
    app_classes: list[str]
    os_classes: list[str]
    app_weights: np.ndarray  # (n_app, n_features)
    app_bias: np.ndarray
    os_weights: np.ndarray
    os_bias: np.ndarray
    mean: np.ndarray
    scale: np.ndarray
    confidence_floor: float = 0.4

    def predict(self, feats: np.ndarray):
        z = (feats - self.mean) / self.scale
        pa = _softmax(self.app_weights @ z + self.app_bias)
        po = _softmax(self.os_weights @ z + self.os_bias)
        ia, io = int(pa.argmax()), int(po.argmax())
        app = self.app_classes[ia] if pa[ia] >= self.confidence_floor else "other"
        osc = self.os_classes[io] if po[io] >= self.confidence_floor else "unknown"
        return app, osc, float(pa[ia]), float(po[io])


def _standardize(X: np.ndarray):
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale < 1e-9] = 1.0
    return mean, scale


def train_filter_model(X: np.ndarray, y: np.ndarray, seed: int = 0,
                       epochs: int = 2000, lr: float = 0.3,
                       hidden: int = 24) -> WindowFilterModel:
    """Full-batch gradient descent; deterministic for a fixed seed."""
    mean, scale = _standardize(X)
    Xs = (X - mean) / scale
    rng = np.random.RandomState(seed)
    W1 = rng.normal(0, 0.3, (hidden, X.shape[1]))
    b1 = np.zeros(hidden)
    w2 = rng.normal(0, 0.3, hidden)
    b2 = 0.0
    yf = y.astype(np.float64)
    # weight positives up to balance the mined candidate set
    pos_w = max(1.0, (len(yf) - yf.sum()) / max(1.0, yf.sum()))
    sw = np.where(yf > 0.5, pos_w, 1.0)
    sw /= sw.mean()
    n = len(yf)
    for _ in range(epochs):
        H = np.tanh(Xs @ W1.T + b1)
        p = _sigmoid(H @ w2 + b2)
        err = (p - yf) * sw
        gw2 = H.T @ err / n + 1e-4 * w2
        gb2 = err.mean()
        dH = np.outer(err, w2) * (1.0 - H * H)
        gW1 = dH.T @ Xs / n + 1e-4 * W1
        gb1 = dH.mean(axis=0)
        w2 -= lr * gw2
        b2 -= lr * gb2
        W1 -= lr * gW1
        b1 -= lr * gb1
    return WindowFilterModel(W1, b1, w2, float(b2), mean, scale)


def _train_softmax(Xs: np.ndarray, yi: np.ndarray, n_classes: int, seed: int,
                   epochs: int = 400, lr: float = 0.5):
    rng = np.random.RandomState(seed)
    W = rng.normal(0, 0.01, (n_classes, Xs.shape[1]))
    b = np.zeros(n_classes)
    onehot = np.eye(n_classes)[yi]
    for _ in range(epochs):
        Z = Xs @ W.T + b
        Z -= Z.max(axis=1, keepdims=True)
        E = np.exp(Z)
        P = E / E.sum(axis=1, keepdims=True)
        G = (P - onehot) / len(yi)
        W -= lr * (G.T @ Xs + 1e-4 * W)
        b -= lr * G.sum(axis=0)
    return W, b


def train_category_model(X: np.ndarray, app_labels: list[str], os_labels: list[str],
                         seed: int = 0) -> WindowCategoryModel:
    mean, scale = _standardize(X)
    Xs = (X - mean) / scale
    app_classes = sorted(set(app_labels))
    os_classes = sorted(set(os_labels))
    ya = np.array([app_classes.index(l) for l in app_labels])
    yo = np.array([os_classes.index(l) for l in os_labels])
    Wa, ba = _train_softmax(Xs, ya, len(app_classes), seed)
    Wo, bo = _train_softmax(Xs, yo, len(os_classes), seed + 1)
    return WindowCategoryModel(app_classes, os_classes, Wa, ba, Wo, bo, mean, scale)


def classify_window(img: Raster, r: Rect, model: WindowFilterModel) -> float:
    """Probability that the crop at r is an application window."""
    return model.predict_proba(window_features(img, r))


def categorize_window(img: Raster, r: Rect, model: WindowCategoryModel):
    """(app_category, os_category, app_confidence, os_confidence) for the crop."""
    return model.predict(window_features(img, r))


# ---------------------------------------------------------------------------
# full pipeline

def _clamp_rect(r: Rect, img: Raster) -> Optional[Rect]:
    x = max(0, r.x)
    y = max(0, r.y)
    x2 = min(img.width, r.x2)
    y2 = min(img.height, r.y2)
    if x2 - x < 1 or y2 - y < 1:
        return None
    return Rect(x, y, x2 - x, y2 - y)


def detect_windows(img: Raster, p: DetectionParams,
                   filter_model: WindowFilterModel,
                   category_model: WindowCategoryModel) -> list[WindowDetection]:
    """Ensemble of both detectors -> size filter -> window filter -> dedup -> categorize."""
    candidates = detect_contour_boxes(img, p) + detect_edge_boxes(img, p)
    clamped = []
    for c in candidates:
        r = _clamp_rect(c.rect, img)
        if r is not None:
            clamped.append(CandidateBox(r, c.source))
    sized = size_filter(clamped, p)

    scored = []
    for c in sized:
        conf = classify_window(img, c.rect, filter_model)
        if conf >= p.window_conf_cutoff:
            scored.append((c, conf))
    conf_by_rect = {c.rect: conf for c, conf in scored}
    survivors = dedup([c for c, _ in scored], p, scores=conf_by_rect)
    survivors = _suppress_nested(survivors, conf_by_rect)

    detections = []
    for c in survivors:
        app, osc, ca, co = categorize_window(img, c.rect, category_model)
        detections.append(WindowDetection(
            rect=c.rect,
            window_confidence=conf_by_rect[c.rect],
            app_category=app,
            os_category=osc,
            category_confidence=min(ca, co),
        ))
    return detections
