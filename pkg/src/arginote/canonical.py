"""Canonical JSON encoding shared by persistence, digests, and the wire protocol."""

from __future__ import annotations

import hashlib
import json
import math
from collections.abc import Mapping
from typing import Any

# Largest integer magnitude a double represents exactly. Integral floats in
# this range collapse to ints so that value-equal documents encode identically.
_SAFE_INT = 2**53


class NonFiniteNumberError(ValueError):
    """Document contains NaN or an infinity, which canonical JSON cannot carry."""


def normalize_document(doc: Any) -> Any:
    """Return `doc` with numbers normalized and non-JSON values rejected.

    Integral floats with |x| <= 2**53 become ints (so 2.0 and 2 encode the
    same), -0.0 becomes 0, and NaN/Infinity raise NonFiniteNumberError.
    """
    if doc is None or isinstance(doc, (bool, str)):
        return doc
    if isinstance(doc, int):
        return doc
    if isinstance(doc, float):
        if not math.isfinite(doc):
            raise NonFiniteNumberError(f"non-finite number in document: {doc!r}")
        if doc.is_integer() and abs(doc) <= _SAFE_INT:
            return int(doc)
        return doc
    if isinstance(doc, Mapping):
        out = {}
        for key, value in doc.items():
            if not isinstance(key, str):
                raise TypeError(f"object keys must be strings, got {type(key).__name__}")
            out[key] = normalize_document(value)
        return out
    if isinstance(doc, (list, tuple)):
        return [normalize_document(item) for item in doc]
    raise TypeError(f"value is not a JSON document: {type(doc).__name__}")


def canonical_text(doc: Any) -> str:
    """Canonical JSON: keys sorted bytewise, no whitespace, shortest numbers."""
    # Sorting str keys by code point equals sorting their UTF-8 bytes.
    return json.dumps(
        normalize_document(doc),
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
        allow_nan=False,
    )


def canonical_bytes(doc: Any) -> bytes:
    return canonical_text(doc).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_document(doc: Any) -> str:
    """Hex digest of a document's canonical encoding."""
    return sha256_hex(canonical_bytes(doc))
