"""Forging-die mesh analysis.

Reports come back as plain dicts with the same layout as report.json.
"""

import json as _json

from . import _core
from ._core import DiemapError, assign, feature_kind

__version__ = _core.__version__

__all__ = ["DiemapError", "analyze", "analyze_triangles", "assign", "classify", "feature_kind", "run"]


def _config_text(config):
    return _json.dumps(config) if config else ""


def analyze(path, config=None):
    """Analyze an STL file in memory and return the report."""
    return _json.loads(_core.analyze_file(str(path), _config_text(config)))


def analyze_triangles(triangles, config=None):
    """Analyze triangles given as nine coordinates each (or 3x3 nested)."""
    rows = []
    for t in triangles:
        flat = [float(v) for corner in t for v in (corner if hasattr(corner, "__iter__") else [corner])]
        rows.append(flat)
    return _json.loads(_core.analyze_triangles(rows, _config_text(config)))


def classify(delta, config=None):
    return _core.classify(float(delta), _config_text(config))


def run(input, output_dir="diemap_out", export=None, **config):
    """Run the full pipeline with file outputs. Returns (report, written paths)."""
    doc = dict(config)
    doc["input"] = str(input)
    doc["output_dir"] = str(output_dir)
    if export is not None:
        doc["export"] = export
    report, written = _core.run(_json.dumps(doc))
    return _json.loads(report), written
