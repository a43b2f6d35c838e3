"""Ticket text enrichment: dictionary/regex entity extraction, correlation
of text- and image-derived entities (ticket text wins conflicts), and
slot-based template insertion of the form "[<slot> = value]".

Enrichment only ever inserts, so the original text stays a subsequence of
the enriched text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .imaging import WindowDetection


@dataclass
class EntitySet:
    os: Optional[str] = None
    os_version: Optional[str] = None
    app_name: Optional[str] = None
    components: list[str] = field(default_factory=list)
    version: Optional[str] = None
    error_code: Optional[str] = None
    error_message: Optional[str] = None
    extra_slots: dict[str, str] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not any((self.os, self.os_version, self.app_name, self.components,
                        self.version, self.error_code, self.error_message,
                        self.extra_slots))


class EntityDictionaries:
    """Domain dictionaries: OS aliases, application names, components."""

    def __init__(self, os_aliases: dict[str, str], apps: Sequence[str],
                 components: Sequence[str]):
        # alias -> canonical, matched case-insensitively, longest alias first
        self.os_aliases = {k.lower(): v for k, v in os_aliases.items()}
        self.apps = sorted(apps, key=lambda a: (-len(a), a))
        self.components = sorted(components, key=lambda c: (-len(c), c))

    @classmethod
    def from_files(cls, os_path, apps_path, components_path) -> "EntityDictionaries":
        return cls(_load_alias_file(os_path), _load_term_file(apps_path),
                   _load_term_file(components_path))


def _load_term_file(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def _load_alias_file(path) -> dict[str, str]:
    aliases: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if "->" in line:
                alias, canonical = (part.strip() for part in line.split("->", 1))
            else:
                alias = canonical = line
            aliases[alias] = canonical
    return aliases


_ERROR_CODE_PATTERNS = (
    re.compile(r"\bError\s+\d+\b", re.IGNORECASE),
    re.compile(r"\bHRESULT:\s*0x[0-9A-Fa-f]+\b"),
    re.compile(r"\b0x[0-9A-Fa-f]{4,}\b"),
)
_VERSION_RE = re.compile(r"\b\d+(?:\.\d+)+\b")
_TRAILING_NUM_RE = re.compile(r"^\s*(\d+(?:\.\d+)*)\b")
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


def _find_term(text_lower: str, term: str) -> int:
    """Word-boundary substring search; returns start index or -1."""
    pattern = r"(?<!\w)" + re.escape(term.lower()) + r"(?!\w)"
    m = re.search(pattern, text_lower)
    return m.start() if m else -1


def extract_entities(text: str, dictionaries: EntityDictionaries,
                     regex_rules: Optional[dict[str, str]] = None) -> EntitySet:
    """Longest-match dictionary scan + regex families for codes and versions."""
    e = EntitySet()
    if not text:
        return e
    lower = text.lower()

    # OS: earliest alias occurrence; longest alias wins on equal position
    best = None
    for alias in sorted(dictionaries.os_aliases, key=lambda a: (-len(a), a)):
        pos = _find_term(lower, alias)
        if pos >= 0 and (best is None or pos < best[0]):
            best = (pos, alias)
    if best is not None:
        pos, alias = best
        e.os = dictionaries.os_aliases[alias]
        m = _TRAILING_NUM_RE.match(text[pos + len(alias):])
        if m:
            e.os_version = m.group(1)
        else:
            # aliases like "win10" carry the version in their own spelling
            embedded = re.search(r"(\d+(?:\.\d+)*)$", alias)
            if embedded:
                e.os_version = embedded.group(1)

    for app in dictionaries.apps:  # longest first
        if _find_term(lower, app) >= 0:
            e.app_name = app
            break

    for comp in dictionaries.components:
        if _find_term(lower, comp) >= 0 and comp not in e.components:
            e.components.append(comp)
    e.components.sort(key=lambda c: _find_term(lower, c))

    code_hits = []
    for pat in _ERROR_CODE_PATTERNS:
        m = pat.search(text)
        if m:
            code_hits.append(m)
    if code_hits:
        e.error_code = code_hits[0].group(0)
        first_hit = min(code_hits, key=lambda m: m.start())
        for sentence in _SENTENCE_SPLIT.split(text):
            if any(pat.search(sentence) for pat in _ERROR_CODE_PATTERNS):
                e.error_message = sentence.strip()
                break

    m = _VERSION_RE.search(text)
    if m:
        e.version = m.group(0)

    for name, pattern in sorted((regex_rules or {}).items()):
        m = re.search(pattern, text)
        if m:
            e.extra_slots[name] = m.group(1) if m.groups() else m.group(0)
    return e


def correlate(text_entities: EntitySet, image_entities: EntitySet,
              image_detections: Sequence[WindowDetection] = ()) -> EntitySet:
    """Field-wise merge; the user's own words win, image fills the gaps."""
    merged = EntitySet()
    for attr in ("os", "os_version", "app_name", "version", "error_code", "error_message"):
        setattr(merged, attr, getattr(text_entities, attr) or getattr(image_entities, attr))

    merged.components = list(text_entities.components)
    for comp in image_entities.components:
        if comp not in merged.components:
            merged.components.append(comp)

    merged.extra_slots = dict(image_entities.extra_slots)
    merged.extra_slots.update(text_entities.extra_slots)

    if merged.os is None:
        for det in image_detections:
            if det.os_category != "unknown":
                merged.os = det.os_category.capitalize()
                break
    if merged.app_name is None:
        for det in image_detections:
            if det.app_category != "other":
                merged.app_name = det.app_category
                break
    return merged


# ---------------------------------------------------------------------------
# slot filling

@dataclass(frozen=True)
class SlotTemplate:
    resolver_group: str
    # ordered (slot_name, entity_field); entity_field "extra:<key>" reads extra_slots
    slots: tuple[tuple[str, str], ...]

    def __post_init__(self):
        names = [n for n, _ in self.slots]
        if len(names) != len(set(names)):
            raise ValueError("slot names must be unique within a template")


DEFAULT_TEMPLATE = SlotTemplate("default", (
    ("errmsg", "error_message"),
    ("errcode", "error_code"),
    ("appname", "app_name"),
    ("os", "os"),
    ("osver", "os_version"),
    ("component", "components"),
    ("version", "version"),
))


@dataclass
class EnrichedTicket:
    original_text: str
    enriched_text: str
    entities: EntitySet
    image_windows: list[tuple[WindowDetection, str]] = field(default_factory=list)


def _slot_values(e: EntitySet, entity_field: str) -> list[str]:
    if entity_field.startswith("extra:"):
        v = e.extra_slots.get(entity_field[6:])
        return [v] if v else []
    value = getattr(e, entity_field)
    if value is None:
        return []
    return list(value) if isinstance(value, list) else [value]


def fill_slots(ticket_text: str, e: EntitySet,
               template: SlotTemplate = DEFAULT_TEMPLATE) -> EnrichedTicket:
    """Insert "[<slot> = value]" after the first mention of each filled value,
    or collect unmentioned values in an "Extracted context:" trailer."""
    enriched = ticket_text
    trailer: list[str] = []
    slots = template.slots + tuple(
        (name, f"extra:{name}") for name in sorted(e.extra_slots)
        if name not in {n for n, _ in template.slots}
    )
    for slot_name, entity_field in slots:
        for value in _slot_values(e, entity_field):
            annotation = f"[<{slot_name}> = {value}]"
            pos = enriched.lower().find(value.lower())
            if pos >= 0:
                end = pos + len(value)
                enriched = enriched[:end] + " " + annotation + enriched[end:]
            else:
                trailer.append(annotation)
    if trailer:
        enriched = enriched + ("\n" if enriched else "") + "Extracted context: " + " ".join(trailer)
    return EnrichedTicket(ticket_text, enriched, e)


# ---------------------------------------------------------------------------
# full multimodal enrichment

def enrich_multimodal(ticket_text: str, images, detection_params, filter_model,
                      category_model, dictionaries: EntityDictionaries,
                      lm=None, ocr_engine=None, app_dictionary=None,
                      template: SlotTemplate = DEFAULT_TEMPLATE,
                      regex_rules: Optional[dict[str, str]] = None) -> EnrichedTicket:
    """Run the image pipeline over attachments and enrich the ticket text."""
    from .imaging import detect_windows
    from .textextract import Dictionary, correct_token, lm_correct_sequence, ocr_window

    windows: list[tuple[WindowDetection, str]] = []
    for img in images:
        detections = detect_windows(img, detection_params, filter_model, category_model)
        for det in detections:
            occluders = [d.rect for d in detections if d is not det]
            tokens = ocr_window(img, det.rect, ocr_engine, occluders)
            if app_dictionary is not None:
                tokens = [correct_token(t, app_dictionary) if t.confidence < 1.0 else t
                          for t in tokens]
            tokens = lm_correct_sequence(tokens, lm)
            windows.append((det, " ".join(t.text for t in tokens)))

    text_entities = extract_entities(ticket_text, dictionaries, regex_rules)
    image_text = "\n".join(text for _, text in windows)
    image_entities = extract_entities(image_text, dictionaries, regex_rules)
    merged = correlate(text_entities, image_entities, [d for d, _ in windows])
    enriched = fill_slots(ticket_text, merged, template)
    enriched.image_windows = windows
    return enriched
