"""Text extraction from detected windows and OCR post-correction.

The OCR engine contract is a callable (Raster, Rect, occluders) -> list of
OcrToken. The built-in engine recognizes the renderer's fixed 5x7 font by
template matching, so it is exact on clean synthetic renders. Post-correction
is two-stage: dictionary edit-distance for short names, then a word-level
n-gram language model for low-confidence tokens and occlusion gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import font
from .errors import ParameterError, TrainingError
from .imaging import Rect
from .raster import Raster

OCCLUDED_MARK = "⟨occluded⟩"  # surfaced for gaps the LM cannot recover


@dataclass(frozen=True)
class OcrToken:
    text: str
    rect: Rect
    confidence: float


# ---------------------------------------------------------------------------
# built-in glyph-template OCR

_TEMPLATES: list[tuple[str, int]] = sorted(
    (ch, int("".join("1" if v else "0" for v in grid.ravel()), 2))
    for ch, grid in font.GLYPHS.items()
)
_CELL_BITS = font.GLYPH_W * font.GLYPH_H


def _ink_mask(luma: np.ndarray) -> np.ndarray:
    """Pixels that differ from their row's dominant value by more than 40."""
    mask = np.zeros(luma.shape, dtype=bool)
    for y in range(luma.shape[0]):
        row = luma[y]
        dominant = np.bincount(row, minlength=256).argmax()
        mask[y] = np.abs(row.astype(np.int16) - int(dominant)) > 40
    return mask


def _bands(ink: np.ndarray, max_gap: int = 2, max_height: int = 9):
    rows = np.flatnonzero(ink.any(axis=1))
    bands = []
    start = prev = None
    for y in rows:
        if start is None:
            start = prev = y
        elif y - prev <= max_gap + 1:
            prev = y
        else:
            bands.append((start, prev))
            start = prev = y
    if start is not None:
        bands.append((start, prev))
    return [(a, b) for a, b in bands if b - a + 1 <= max_height]


def _cell_bits(ink: np.ndarray, top: int, left: int) -> int:
    h, w = ink.shape
    bits = 0
    for gy in range(font.GLYPH_H):
        y = top + gy
        for gx in range(font.GLYPH_W):
            bits <<= 1
            x = left + gx
            if 0 <= y < h and 0 <= x < w and ink[y, x]:
                bits |= 1
    return bits


def _is_decoration(bits: int) -> bool:
    """Solid full-width block of 4-6 rows: a title-bar button, not a glyph."""
    rows = [(bits >> (5 * (font.GLYPH_H - 1 - gy))) & 0b11111
            for gy in range(font.GLYPH_H)]
    full = sum(r == 0b11111 for r in rows)
    return full >= 4 and all(r in (0, 0b11111) for r in rows)


def _match_cell(bits: int) -> tuple[str, float]:
    best_char, best_mismatch = "?", _CELL_BITS
    for ch, tbits in _TEMPLATES:
        mismatch = (bits ^ tbits).bit_count()
        if mismatch < best_mismatch:
            best_char, best_mismatch = ch, mismatch
    return best_char, 1.0 - best_mismatch / _CELL_BITS


class GlyphOcrEngine:
    """Template OCR for the built-in bitmap font."""

    margin = 2  # skip window border pixels

    def __call__(self, img: Raster, r: Rect,
                 occluders: Sequence[Rect] = ()) -> list[OcrToken]:
        if not r.within_image(img):
            raise ParameterError(f"rect {r} outside image")
        m = self.margin
        if r.w <= 2 * m + font.GLYPH_W or r.h <= 2 * m + font.GLYPH_H:
            return []
        crop = img.array[r.y + m:r.y2 - m, r.x + m:r.x2 - m]
        luma = np.clip(np.rint(
            crop[:, :, 0] * 0.299 + crop[:, :, 1] * 0.587 + crop[:, :, 2] * 0.114
        ), 0, 255).astype(np.uint8)
        ink = _ink_mask(luma)

        tokens: list[OcrToken] = []
        for band_top, band_bot in _bands(ink):
            cols = np.flatnonzero(ink[band_top:band_bot + 1].any(axis=0))
            if len(cols) == 0:
                continue
            x0, x1 = int(cols[0]), int(cols[-1])
            n_cells = (x1 - x0) // font.ADVANCE + 1
            # the band may start at glyph row 0, 1 or 2 (lowercase-only lines)
            best = None
            for v in range(3):
                top = band_top - v
                cells = [_match_cell(_cell_bits(ink, top, x0 + k * font.ADVANCE))
                         for k in range(n_cells)]
                blanks = [_cell_bits(ink, top, x0 + k * font.ADVANCE) == 0
                          for k in range(n_cells)]
                score = sum(c for (_, c), blank in zip(cells, blanks) if not blank)
                if best is None or score > best[0]:
                    best = (score, top, cells, blanks)
            _, top, cells, blanks = best

            run_chars: list[tuple[str, float]] = []
            run_start = 0
            for k in range(n_cells + 1):
                at_end = k == n_cells
                blank = at_end or blanks[k]
                if blank:
                    if run_chars:
                        tokens.append(self._emit(run_chars, r, m, x0, run_start, top))
                        run_chars = []
                    run_start = k + 1
                    continue
                ch, conf = cells[k]
                cell_bits = _cell_bits(ink, top, x0 + k * font.ADVANCE)
                # title-bar buttons land on the glyph grid; treat as spacing
                if _is_decoration(cell_bits) and cell_bits.bit_count() < 26:
                    if run_chars:
                        tokens.append(self._emit(run_chars, r, m, x0, run_start, top))
                        run_chars = []
                    run_start = k + 1
                    continue
                # solidly-filled cell with a poor match = occluded region
                if cell_bits.bit_count() >= 26 and conf < 0.6:
                    if run_chars:
                        tokens.append(self._emit(run_chars, r, m, x0, run_start, top))
                        run_chars = []
                    tokens.append(OcrToken(
                        OCCLUDED_MARK,
                        self._token_rect(r, m, x0, k, 1, top),
                        0.0,
                    ))
                    run_start = k + 1
                    continue
                run_chars.append((ch, conf))
        return tokens

    @staticmethod
    def _token_rect(r: Rect, m: int, x0: int, start_cell: int, n: int, top: int) -> Rect:
        x = r.x + m + x0 + start_cell * font.ADVANCE
        y = max(r.y, r.y + m + top)
        return Rect(x, y, max(1, n * font.ADVANCE - 1), font.GLYPH_H)

    def _emit(self, run_chars, r, m, x0, start_cell, top) -> OcrToken:
        text = "".join(ch for ch, _ in run_chars)
        conf = sum(c for _, c in run_chars) / len(run_chars)
        return OcrToken(text, self._token_rect(r, m, x0, start_cell, len(run_chars), top), conf)


def ocr_window(img: Raster, r: Rect, engine=None,
               occluders: Sequence[Rect] = ()) -> list[OcrToken]:
    """Run an OCR engine over the window crop at r.

    Detected rects can be a pixel or two off the true frame, which drags the
    window border into the crop and starves the line segmenter; retry on
    slightly inset crops before giving up.
    """
    if engine is None:
        engine = GlyphOcrEngine()
    tokens = engine(img, r, occluders)
    for inset in (1, 2, 3, 4):
        if tokens:
            break
        if r.w <= 2 * inset + 1 or r.h <= 2 * inset + 1:
            break
        shrunk = Rect(r.x + inset, r.y + inset, r.w - 2 * inset, r.h - 2 * inset)
        tokens = engine(img, shrunk, occluders)
    return tokens


# ---------------------------------------------------------------------------
# dictionary correction

def levenshtein(a: str, b: str) -> int:
    """Unit-cost insert/delete/substitute edit distance."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[-1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


class Dictionary:
    """Case-insensitive set of canonical terms."""

    def __init__(self, entries: Iterable[str]):
        self.entries = sorted({e.strip() for e in entries if e.strip()})
        if not self.entries:
            raise ParameterError("dictionary must not be empty")
        self._lower = {e.lower(): e for e in self.entries}

    @classmethod
    def from_file(cls, path) -> "Dictionary":
        with open(path, encoding="utf-8") as fh:
            return cls(line.split("->")[0] for line in fh if line.strip())

    def lookup(self, term: str) -> Optional[str]:
        return self._lower.get(term.lower())

    def nearest(self, term: str, max_edit: int) -> Optional[str]:
        """Unique nearest entry within max_edit; None on tie or no candidate."""
        exact = self.lookup(term)
        if exact is not None:
            return exact
        lo = term.lower()
        best: Optional[str] = None
        best_d = max_edit + 1
        tied = False
        for entry in self.entries:
            if abs(len(entry) - len(lo)) > max_edit:
                continue
            d = levenshtein(entry.lower(), lo)
            if d < best_d:
                best, best_d, tied = entry, d, False
            elif d == best_d:
                tied = True
        return best if best is not None and not tied else None


def correct_token(t: OcrToken, d: Dictionary, max_edit: int = 2) -> OcrToken:
    """Replace text with the unique nearest dictionary entry within max_edit."""
    if max_edit < 0:
        raise ParameterError("max_edit must be >= 0")
    replacement = d.nearest(t.text, max_edit)
    if replacement is None or replacement == t.text:
        return t
    return OcrToken(replacement, t.rect, t.confidence)


# ---------------------------------------------------------------------------
# word-level language model

class WordLM:
    """Interpolated n-gram LM (Jelinek-Mercer against add-one unigrams)."""

    def __init__(self, order: int, lam: float, unigrams: dict[str, int],
                 ngrams: dict[tuple[str, ...], dict[str, int]]):
        if order not in (1, 2):
            raise ParameterError("order must be 1 or 2")
        if not (0.0 < lam < 1.0):
            raise ParameterError("lambda must be in (0,1)")
        self.order = order
        self.lam = lam
        self.unigrams = unigrams
        self.ngrams = ngrams
        self.total = sum(unigrams.values())
        self.vocab = sorted(unigrams)
        self._ctx_totals = {ctx: sum(c.values()) for ctx, c in ngrams.items()}

    def unigram_prob(self, word: str) -> float:
        # add-one smoothing over the vocabulary: sums to exactly 1 across it,
        # and out-of-vocabulary words still score the count-zero mass 1/(N+V)
        return (self.unigrams.get(word, 0) + 1) / (self.total + len(self.vocab))

    def prob(self, word: str, context: Optional[str] = None) -> float:
        uni = self.unigram_prob(word)
        if self.order == 1 or context is None:
            return uni
        counts = self.ngrams.get((context,))
        if not counts:
            return uni
        p_ng = counts.get(word, 0) / self._ctx_totals[(context,)]
        return self.lam * p_ng + (1.0 - self.lam) * uni

    def predict(self, context: Optional[str]) -> str:
        """Argmax over vocabulary; lexicographic tie-break."""
        if not self.vocab:
            return ""
        return min(self.vocab, key=lambda w: (-self.prob(w, context), w))


def train_lm(corpus: Sequence[str], order: int = 2, lam: float = 0.7) -> WordLM:
    """Count n-grams over whitespace-tokenized sentences."""
    sentences = [s.split() for s in corpus if s.strip()]
    if not sentences:
        raise TrainingError("LM training corpus is empty")
    unigrams: dict[str, int] = {}
    ngrams: dict[tuple[str, ...], dict[str, int]] = {}
    for toks in sentences:
        for w in toks:
            unigrams[w] = unigrams.get(w, 0) + 1
        if order == 2:
            for prev, cur in zip(toks, toks[1:]):
                ctx = (prev,)
                ngrams.setdefault(ctx, {})
                ngrams[ctx][cur] = ngrams[ctx].get(cur, 0) + 1
    return WordLM(order, lam, unigrams, ngrams)


def lm_correct_sequence(tokens: Sequence[OcrToken], lm: Optional[WordLM],
                        conf_floor: float = 0.9, max_edit: int = 2) -> list[OcrToken]:
    """Replace low-confidence tokens and occlusion gaps via the LM.

    Candidates for a garbled token are vocabulary words within edit distance
    max_edit of the observed text (plus the observed text itself); a fully
    occluded gap considers the whole vocabulary. Deterministic: ties break
    lexicographically.
    """
    if lm is None:
        return list(tokens)
    out: list[OcrToken] = []
    prev_word: Optional[str] = None
    for tok in tokens:
        text = tok.text
        if text == OCCLUDED_MARK:
            if lm.vocab:
                text = min(lm.vocab, key=lambda w: (-lm.prob(w, prev_word), w))
                out.append(OcrToken(text, tok.rect, tok.confidence))
            else:
                out.append(tok)
        elif tok.confidence < conf_floor:
            candidates = [w for w in lm.vocab
                          if abs(len(w) - len(text)) <= max_edit
                          and levenshtein(w.lower(), text.lower()) <= max_edit]
            if text not in candidates:
                candidates.append(text)
            text = min(candidates, key=lambda w: (-lm.prob(w, prev_word), w))
            out.append(OcrToken(text, tok.rect, tok.confidence))
        else:
            out.append(tok)
        prev_word = text
    return out
