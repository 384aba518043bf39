from pathlib import Path

from src.engine.exactlin import Field
from src.repository.model import AlgebraDocument
from src.repository.repository import ModifyDocumentRepository
from src.zoo.examples import build, standard_catalogue


# =============================
# SETTINGS
# =============================
FIELD = Field.prime(5)
OUTPUT_DIR = Path(__file__).parent / "fixtures"


def export_catalogue(repo: ModifyDocumentRepository) -> list[Path]:
    written: list[Path] = []
    for name, entry in standard_catalogue(FIELD).items():
        omega = build(entry.kind, entry.inputs)
        doc = AlgebraDocument.from_omega(omega, entry.maps, name=name, kind=entry.kind.value)
        written.append(repo.write(doc, OUTPUT_DIR / f"{name}.json"))
    return written


def main() -> None:
    print(f"[EXPORT] Building catalogue over {FIELD}")
    written = export_catalogue(ModifyDocumentRepository())
    print(f"[EXPORT] Done -> {OUTPUT_DIR.resolve()}\n  documents: {len(written)}")


if __name__ == "__main__":
    main()
