"""
Persistence for the Fock-Sobolev laboratory.

Measure files (text and JSON) and a directory-backed store of named measures.
"""

from focklab.db.measure_store import (
    MeasureStore,
    dump_measure,
    load_measure_file,
    parse_measure_json,
    parse_measure_text,
)

__all__ = [
    "MeasureStore",
    "dump_measure",
    "load_measure_file",
    "parse_measure_json",
    "parse_measure_text",
]
