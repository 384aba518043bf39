"""
CQRS repository layer for algebra documents.

- ModifyDocumentRepository (COMMAND side):
    Writes documents and rendered reports to disk.

- ReadDocumentRepository (QUERY side):
    Reads and validates documents. Nothing here writes.

Documents are canonical JSON (sorted keys, two-space indent, trailing
newline), so writing the same document twice gives identical bytes.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from src.engine.errors import ParseError
from src.engine.exactlin import Field
from src.repository.model import AlgebraDocument

logger = logging.getLogger(__name__)


def dump_canonical(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# ============================================================
#                     MODIFY (COMMAND)
# ============================================================

class ModifyDocumentRepository:
    """Writes documents and reports; creates parent directories as needed."""

    def write(self, doc: AlgebraDocument, path: str | Path) -> Path:
        """Serialize ``doc`` to ``path``.

        Returns:
            The written path.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_canonical(doc.to_dict()), encoding="utf-8")
        logger.info(f"[WRITE] document '{doc.name or path.stem}' -> {path}")
        return path

    def write_report(self, text: str, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"[WRITE] report -> {path}")
        return path


# ============================================================
#                       READ (QUERY)
# ============================================================

class ReadDocumentRepository:
    """Loads documents from JSON files."""

    def load(self, path: str | Path, field: Field | None = None) -> AlgebraDocument:
        """Read and validate a document.

        Args:
            path: JSON file to read.
            field: Optional field overriding the declared one.

        Raises:
            OSError: If the file cannot be read.
            ParseError: If the file is not JSON or a header entry is malformed.
            ShapeError: If an array does not match the declared dimensions.
        """
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as ex:
            raise ParseError(f"invalid JSON in {path}: {ex.msg} (line {ex.lineno})") from ex
        doc = AlgebraDocument.from_dict(data, field_override=field)
        logger.info(f"[LOAD] {path}: {doc.field} dims ({doc.dim_g}, {doc.dim_h}), {len(doc.linear_maps)} named maps")
        return doc
