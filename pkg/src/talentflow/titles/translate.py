"""Pre-tokenization title substitution hook.

The default is identity. A substitution table can be supplied as a UTF-8
file of tab-separated `raw<TAB>replacement` lines (`#` starts a comment);
unmapped titles pass through unchanged. This is the seam where an
external translation service would plug in.
"""

from __future__ import annotations

from pathlib import Path


class TranslationTableError(ValueError):
    """The configured substitution table cannot be loaded."""


def identity(title: str) -> str:
    return title


class TranslationTable:
    """Exact-match substitution on stripped raw titles."""

    def __init__(self, mapping: dict[str, str]):
        self.mapping = dict(mapping)

    @classmethod
    def load(cls, path) -> "TranslationTable":
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise TranslationTableError(f"cannot read translation table {p}: {exc}") from exc
        mapping: dict[str, str] = {}
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise TranslationTableError(
                    f"{p}:{line_no}: expected 'raw<TAB>replacement', got {raw!r}")
            source, _, target = line.partition("\t")
            source, target = source.strip(), target.strip()
            if not source or not target:
                raise TranslationTableError(f"{p}:{line_no}: empty field in {raw!r}")
            mapping[source] = target
        return cls(mapping)

    def __call__(self, title: str) -> str:
        return self.mapping.get(title.strip(), title)
