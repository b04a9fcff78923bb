import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from errors import ParseError

logger = logging.getLogger(__name__)

# beta-spec grammar
SPEC_PATTERNS = {
    'finite': re.compile(r'^digits=(\d+(?:,\d+)*)$'),
    'periodic': re.compile(r'^digits=(\d+(?:,\d+)*),\((\d+(?:,\d+)*)\)$'),
    'rational': re.compile(r'^rational=(\d+)/(\d+)$'),
}

WORD_PATTERN = re.compile(r'^\d+(?:,\d+)*$')


@dataclass(frozen=True)
class BetaSpec:
    """Parsed form of a beta-spec string"""
    kind: str
    preperiod: Tuple[int, ...] = ()
    period: Tuple[int, ...] = ()
    value: Optional[Fraction] = field(default=None)


def _digits(text):
    return tuple(int(d) for d in text.split(','))


def parse_beta_spec(text):
    """
    Parse a beta-spec string

    Args:
        text (str): e.g. "digits=1,1", "digits=3,(2)" or "rational=3/2"

    Returns:
        BetaSpec: the parsed spec (not yet normalized)
    """
    if not isinstance(text, str):
        raise ParseError(f"beta-spec must be a string, got {type(text).__name__}")

    spec = text.strip()
    logger.debug(f"Parsing beta-spec: {spec}")

    match = SPEC_PATTERNS['periodic'].match(spec)
    if match:
        return BetaSpec('digits', _digits(match.group(1)), _digits(match.group(2)))

    match = SPEC_PATTERNS['finite'].match(spec)
    if match:
        return BetaSpec('digits', _digits(match.group(1)))

    match = SPEC_PATTERNS['rational'].match(spec)
    if match:
        numerator, denominator = int(match.group(1)), int(match.group(2))
        if denominator == 0:
            raise ParseError(f"Zero denominator in beta-spec: {spec}", spec=spec)
        return BetaSpec('rational', value=Fraction(numerator, denominator))

    raise ParseError(f"Unrecognized beta-spec: {spec!r}", spec=spec)


def format_beta_spec(preperiod=(), period=(), value=None):
    """Canonical text for a (normalized) spec"""
    if value is not None:
        value = Fraction(value)
        return f"rational={value.numerator}/{value.denominator}"
    text = "digits=" + ",".join(str(d) for d in preperiod)
    if period:
        text += ",(" + ",".join(str(d) for d in period) + ")"
    return text


def parse_word(text):
    """
    Parse a comma-separated digit word; the empty string is the empty word

    Returns:
        tuple: the letters
    """
    word = (text or "").strip()
    if not word:
        return ()
    if not WORD_PATTERN.match(word):
        raise ParseError(f"Malformed word: {text!r}", word=text)
    return _digits(word)


def format_word(letters):
    return ",".join(str(c) for c in letters)


def parse_number(text):
    """
    Parse an exact rational given as "p/q", an integer or a finite decimal

    Returns:
        Fraction: the value
    """
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Malformed number {text!r}: {str(e)}", number=text)
