"""Detector-design store and JSON document loading."""

import json
import logging
from pathlib import Path
from threading import Lock
from typing import Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, TypeAdapter, ValidationError

from fockport.bell import (
    DetectorDesign,
    design_from_document,
    fifty_fifty_design,
    trivial_design,
)
from fockport.errors import DocumentError
from fockport.models import DetectorDesignDocument

logger = logging.getLogger(__name__)

ASSETS = Path(__file__).parent / "assets"
N2_DETECTOR_ASSET = ASSETS / "n2_detector.json"

Model = TypeVar("Model", bound=BaseModel)


def parse_document(model: Type[Model], text: str, source: str = "<document>") -> Model:
    """
    Parse and validate a JSON document.

    Args:
        model: Pydantic model of the document
        text: JSON text
        source: Name used in error messages

    Returns:
        The validated model

    Raises:
        DocumentError: Invalid JSON (with line and column) or an invalid field (with its path)
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}",
            {"source": source, "line": exc.lineno, "column": exc.colno},
        ) from exc
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise DocumentError(
            f"{source}: {location}: {first['msg']}",
            {"source": source, "field": location, "errors": len(exc.errors())},
        ) from exc


def read_document(model: Type[Model], path: Path) -> Model:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DocumentError(f"Cannot read {path}: {exc.strerror}", {"source": str(path)}) from exc
    return parse_document(model, text, str(path))


class DesignStore:
    """Thread-safe registry of detector designs keyed by N~."""

    def __init__(self):
        """Initialize the store."""
        self._designs: Dict[int, DetectorDesign] = {}
        self._lock = Lock()

    def register(self, design: DetectorDesign) -> DetectorDesign:
        """
        Store a design, replacing any design for the same N~.

        Args:
            design: The detector design

        Returns:
            The stored design
        """
        with self._lock:
            if design.n_tilde in self._designs:
                logger.info(f"Replacing detector design for N~={design.n_tilde}")
            self._designs[design.n_tilde] = design
            return design

    def get(self, n_tilde: int) -> Optional[DetectorDesign]:
        """
        Get the design for N~.

        Args:
            n_tilde: Total photon number heralded by the detector

        Returns:
            The design or None if not found
        """
        with self._lock:
            return self._designs.get(n_tilde)

    def load_file(self, path: Path) -> List[DetectorDesign]:
        """
        Register every design in a JSON file holding one design document or a list of them.

        Raises:
            DocumentError: The file is unreadable or invalid
        """
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise DocumentError(f"Cannot read {path}: {exc.strerror}", {"source": str(path)}) from exc
        except json.JSONDecodeError as exc:
            raise DocumentError(
                f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}",
                {"source": str(path), "line": exc.lineno},
            ) from exc
        if isinstance(data, dict) and "design" in data:
            data = data["design"]
        items = data if isinstance(data, list) else [data]
        try:
            documents = TypeAdapter(List[DetectorDesignDocument]).validate_python(items)
        except ValidationError as exc:
            first = exc.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise DocumentError(f"{path}: {location}: {first['msg']}", {"source": str(path), "field": location}) from exc
        return [self.register(design_from_document(document)) for document in documents]


def default_store() -> DesignStore:
    """Store holding the N~ = 0, 1 designs and the shipped N~ = 2 detector."""
    store = DesignStore()
    store.register(trivial_design())
    store.register(fifty_fifty_design())
    store.load_file(N2_DETECTOR_ASSET)
    return store
