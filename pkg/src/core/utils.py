"""
Utility functions for bit-mask subsets, sign strings and JSON documents
"""

import json
import logging
from typing import Any, Iterable, Iterator, Tuple

from .errors import InputError

logger = logging.getLogger(__name__)


def bits(mask: int) -> Iterator[int]:
    """Yield the element indices of a bit-mask subset in increasing order"""
    index = 0
    while mask:
        if mask & 1:
            yield index
        mask >>= 1
        index += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


def index_tuple(mask: int) -> Tuple[int, ...]:
    return tuple(bits(mask))


def subset_key(mask: int) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: cardinality first, then lexicographic by canonical index"""
    return (popcount(mask), index_tuple(mask))


def submasks(mask: int) -> Iterator[int]:
    """Every subset of ``mask``, including ``mask`` and 0"""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def normalize_sign_string(text: str) -> str:
    """
    Normalize the accepted spellings of a covector to the canonical alphabet

    Args:
        text: Sign string such as "+1-", "+1−" or "(+,0)"

    Returns:
        String over the characters 0 + - 1

    Raises:
        InputError: If a character outside the sign alphabet remains
    """
    sign_mapping = {
        "−": "-",
        "–": "-",
        "0": "0",
        "+": "+",
        "-": "-",
        "1": "1",
    }

    normalized = []
    for char in text:
        if char in "(), \t":
            continue
        if char not in sign_mapping:
            raise InputError(f"Invalid sign symbol {char!r} in covector {text!r}")
        normalized.append(sign_mapping[char])
    return "".join(normalized)


def parse_json_document(text: str, source: str = "<input>") -> Any:
    """
    Parse a JSON document, tolerating a surrounding markdown code fence

    Args:
        text: Raw document text
        source: Name used in error messages

    Returns:
        Parsed JSON value

    Raises:
        InputError: If the text is not valid JSON
    """
    if "```json" in text:
        start = text.find("```json") + 7
        end = text.find("```", start)
        text = text[start:end]
    elif text.lstrip().startswith("```"):
        start = text.find("```") + 3
        end = text.find("```", start)
        text = text[start:end]

    text = text.strip()

    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        logger.debug(f"Failed to parse {source} (first 200 chars): {text[:200]}")
        raise InputError(f"Malformed JSON in {source}: {e}") from e


def dump_json_document(data: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline"""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def compress_mask(mask: int, within: int) -> int:
    """Re-index the bits of ``mask`` lying in ``within`` onto 0..|within|-1"""
    out = 0
    for position, index in enumerate(bits(within)):
        if mask >> index & 1:
            out |= 1 << position
    return out


def expand_mask(mask: int, within: int) -> int:
    """Inverse of compress_mask"""
    out = 0
    for position, index in enumerate(bits(within)):
        if mask >> position & 1:
            out |= 1 << index
    return out
