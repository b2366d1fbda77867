"""The comma/control-token grammar shared with the evaluation toolkit.

Generated sequences are comma-separated keyphrases, optionally containing
the reserved block markers <absent> and <present>. Recovery: split on
commas, strip the markers, drop empties, deduplicate case-insensitively
keeping first occurrence. The evaluator applies its own stem-level
deduplication when scoring, so exact-form dedupe here is sufficient.
"""

ABSENT_TOKEN = "<absent>"
PRESENT_TOKEN = "<present>"


def parse_sequence(text: str) -> list[str]:
    out = []
    seen = set()
    for piece in text.split(","):
        piece = piece.replace(ABSENT_TOKEN, "").replace(PRESENT_TOKEN, "").strip()
        if not piece:
            continue
        key = piece.casefold()
        if key not in seen:
            seen.add(key)
            out.append(piece)
    return out
