"""Multi-modal IT incident triage engine.

Pipeline: synthetic screenshot generation -> window detection -> glyph OCR
with dictionary/LM correction -> entity extraction and ticket enrichment ->
confidence-gated routing with resolution lookup or federated corpus+web
search merged by CORI scoring.
"""

__version__ = "0.1.0"
