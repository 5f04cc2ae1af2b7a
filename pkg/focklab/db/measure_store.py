"""
Measure file parsing and a directory-backed store of named measures.

Two file formats are accepted:

- text: one atom per line, ``x y mass`` in decimal; blank lines and lines
  starting with ``#`` are ignored
- JSON: ``{"name": ..., "atoms": [{"x": ..., "y": ..., "mass": ...}, ...]}``

Every parse error names the offending line (text) or atom index (JSON).
"""

import json
from pathlib import Path
from typing import Any, List, Optional, Union

from pydantic import ValidationError

from focklab.models import Atom, DiscreteMeasure
from focklab.utils import (
    get_logger, LoggerMixin, log_execution_time,
    FockLabError, MeasureParseError, ResourceNotFoundError
)

TEXT_SUFFIXES = (".txt", ".dat", ".atoms")
JSON_SUFFIXES = (".json",)

logger = get_logger(__name__)


def _first_error(error: ValidationError) -> str:
    details = error.errors()
    return details[0]["msg"] if details else str(error)


def _atom(x: Any, y: Any, mass: Any, path: Optional[str], line_number: int) -> Atom:
    try:
        return Atom(x=x, y=y, mass=mass)
    except ValidationError as e:
        raise MeasureParseError(
            f"Invalid atom: {_first_error(e)}",
            path=path,
            line_number=line_number,
            cause=e
        )


def parse_measure_text(text: str, name: Optional[str] = None, path: Optional[str] = None) -> DiscreteMeasure:
    """
    Parse ``x y mass`` lines into a measure.

    Raises:
        MeasureParseError: On a malformed line, a non-finite coordinate or a
            non-positive mass; ``line_number`` is 1-based
    """
    atoms: List[Atom] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise MeasureParseError(
                f"Expected 3 fields 'x y mass', found {len(fields)}",
                path=path,
                line_number=line_number
            )
        try:
            x, y, mass = (float(field) for field in fields)
        except ValueError as e:
            raise MeasureParseError(
                f"Non-numeric field in '{line}'",
                path=path,
                line_number=line_number,
                cause=e
            )
        atoms.append(_atom(x, y, mass, path, line_number))
    return DiscreteMeasure(atoms=atoms, name=name)


def parse_measure_json(text: str, name: Optional[str] = None, path: Optional[str] = None) -> DiscreteMeasure:
    """
    Parse the structured form ``{"atoms": [{"x", "y", "mass"}], "name"}``.

    Atom errors report the 1-based atom index as the line number.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MeasureParseError(
            f"Invalid JSON: {e.msg}", path=path, line_number=e.lineno, cause=e
        )

    if not isinstance(data, dict) or not isinstance(data.get("atoms"), list):
        raise MeasureParseError("Expected an object with an 'atoms' list", path=path)

    atoms: List[Atom] = []
    for index, entry in enumerate(data["atoms"], start=1):
        if not isinstance(entry, dict) or not {"x", "y", "mass"} <= entry.keys():
            raise MeasureParseError(
                "Each atom needs 'x', 'y' and 'mass'", path=path, line_number=index
            )
        values = [entry["x"], entry["y"], entry["mass"]]
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            raise MeasureParseError("Atom fields must be numbers", path=path, line_number=index)
        atoms.append(_atom(*values, path=path, line_number=index))

    label = name or data.get("name")
    try:
        return DiscreteMeasure(atoms=atoms, name=label)
    except ValidationError as e:
        raise MeasureParseError(f"Invalid measure: {_first_error(e)}", path=path, cause=e)


def _detect_format(path: Path, format: Optional[str]) -> str:
    if format is not None:
        if format not in ("text", "json"):
            raise MeasureParseError(
                f"Unknown measure format '{format}'", path=str(path)
            )
        return format
    suffix = path.suffix.lower()
    if suffix in JSON_SUFFIXES:
        return "json"
    if suffix in TEXT_SUFFIXES:
        return "text"
    raise MeasureParseError(
        f"Cannot infer the measure format from '{path.name}'; pass a format",
        path=str(path)
    )


def load_measure_file(path: Union[str, Path], format: Optional[str] = None) -> DiscreteMeasure:
    """
    Read a measure file; ``format`` is ``"text"``, ``"json"`` or inferred from the suffix.

    Raises:
        ResourceNotFoundError: If the file does not exist
        MeasureParseError: If the content does not parse
    """
    path = Path(path)
    if not path.is_file():
        raise ResourceNotFoundError(
            f"Measure file not found: {path}", context={"path": str(path)}
        )
    kind = _detect_format(path, format)
    text = path.read_text(encoding="utf-8")
    parser = parse_measure_json if kind == "json" else parse_measure_text
    measure = parser(text, name=None if kind == "json" else path.stem, path=str(path))
    if measure.name is None:
        measure = DiscreteMeasure(atoms=measure.atoms, name=path.stem)
    logger.info("Measure loaded", path=str(path), format=kind, atoms=len(measure))
    return measure


def dump_measure(measure: DiscreteMeasure, format: str = "json") -> str:
    """Serialize a measure in the given format; text output round-trips exactly."""
    if format == "json":
        return json.dumps(measure.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
    if format == "text":
        lines = [f"# {measure.name}"] if measure.name else []
        lines.extend(f"{a.x!r} {a.y!r} {a.mass!r}" for a in measure.atoms)
        return "\n".join(lines) + "\n"
    raise MeasureParseError(f"Unknown measure format '{format}'")


class MeasureStore(LoggerMixin):
    """Directory of named measures stored as ``<name>.json``."""

    def __init__(self, directory: Union[str, Path] = "measures") -> None:
        """
        Initialize the store.

        Args:
            directory: Directory holding the measure files; created if missing
        """
        super().__init__()
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

        self.logger.info("MeasureStore initialized", directory=str(self.directory))

    def _path(self, name: str) -> Path:
        return self.directory / f"{name}.json"

    @log_execution_time
    def list_measures(self) -> List[str]:
        """Names of the stored measures, sorted."""
        names = sorted(f.stem for f in self.directory.glob("*.json"))
        self.logger.info("Listed measures", measure_count=len(names))
        return names

    def exists(self, name: str) -> bool:
        exists = self._path(name).exists()
        self.logger.debug("Measure existence check", measure_name=name, exists=exists)
        return exists

    @log_execution_time
    def load(self, name: str) -> DiscreteMeasure:
        """
        Load a stored measure by name.

        Raises:
            ResourceNotFoundError: If no measure has that name
            MeasureParseError: If the stored file is invalid
        """
        path = self._path(name)
        if not path.exists():
            self.logger.warning("Measure file not found", measure_name=name, path=str(path))
            raise ResourceNotFoundError(
                f"Measure '{name}' not found", context={"name": name, "path": str(path)}
            )
        measure = parse_measure_json(path.read_text(encoding="utf-8"), path=str(path))
        if measure.name is None:
            measure = DiscreteMeasure(atoms=measure.atoms, name=name)
        self.logger.info("Measure loaded", measure_name=name, atoms=len(measure))
        return measure

    @log_execution_time
    def save(self, measure: DiscreteMeasure, name: Optional[str] = None) -> Path:
        """
        Save a measure under ``name`` (default: the measure's own name).

        Raises:
            FockLabError: If the measure has no name or the write fails
        """
        label = name or measure.name
        if not label:
            raise FockLabError("A measure needs a name to be stored")
        path = self._path(label)
        try:
            path.write_text(dump_measure(measure, "json"), encoding="utf-8")
        except OSError as e:
            error = FockLabError(
                f"Failed to save measure '{label}': {e}",
                context={"name": label, "path": str(path)},
                cause=e
            )
            self.logger.error("Measure save error", error=error)
            raise error
        self.logger.info("Measure saved", measure_name=label, path=str(path), atoms=len(measure))
        return path

