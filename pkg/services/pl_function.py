"""Right-continuous piecewise-linear bijections of [0, 1) with slopes beta^k."""
import logging

from errors import ContextMismatch, OutOfDomain
from models import PLFunction, Segment

logger = logging.getLogger(__name__)


def segment_end(context, segment):
    """Right end of the image of a segment"""
    return segment.y0 + context.power(segment.slope_exp) * (segment.x1 - segment.x0)


def canonical(context, segments):
    """
    Sort segments by domain and merge neighbours that share one affine law

    Args:
        context: BetaContext
        segments: iterable of Segment

    Returns:
        PLFunction: canonical form
    """
    merged = []
    for segment in sorted(segments, key=lambda s: s.x0):
        if merged:
            last = merged[-1]
            if (last.x1 == segment.x0 and last.slope_exp == segment.slope_exp
                    and segment_end(context, last) == segment.y0):
                merged[-1] = Segment(last.x0, segment.x1, last.y0, last.slope_exp)
                continue
        merged.append(segment)
    return PLFunction(context, tuple(merged))


def identity_pl(context):
    return PLFunction(context, (Segment(context.zero, context.one, context.zero, 0),))


def check_pl(f):
    """
    Verify that domains and images each tile [0, 1)

    Returns:
        list: problems found (empty when f is a bijection of the stated form)
    """
    context = f.context
    problems = []
    for side, intervals in (
        ('domain', [(s.x0, s.x1) for s in f.segments]),
        ('image', [(s.y0, segment_end(context, s)) for s in f.segments]),
    ):
        position = context.zero
        for low, high in sorted(intervals, key=lambda pair: pair[0]):
            if low != position:
                problems.append(f"{side} breakpoints do not chain at {low}")
            if high <= low:
                problems.append(f"{side} interval [{low}, {high}) is empty")
            position = high
        if position != 1:
            problems.append(f"{side} stops at {position} instead of 1")
    return problems


def pl_eval(f, x):
    """Evaluate f at x in [0, 1)"""
    context = f.context
    x = context.number(x)
    if x < 0 or x >= 1:
        raise OutOfDomain(f"{x} is outside [0, 1)", spec=context.spec)
    for segment in f.segments:
        if segment.x0 <= x < segment.x1:
            return segment.y0 + context.power(segment.slope_exp) * (x - segment.x0)
    raise OutOfDomain(f"No segment of the function contains {x}", spec=context.spec)


def pl_compose(f, g):
    """f o g (apply g first)"""
    if f.context is not g.context:
        raise ContextMismatch("Cannot compose functions from different contexts",
                              left=f.context.spec, right=g.context.spec)
    context = f.context
    pieces = []
    for inner in g.segments:
        start, end = inner.y0, segment_end(context, inner)
        shrink = context.power(-inner.slope_exp)
        for outer in f.segments:
            low = max(start, outer.x0)
            high = min(end, outer.x1)
            if low >= high:
                continue
            pieces.append(Segment(
                inner.x0 + (low - start) * shrink,
                inner.x0 + (high - start) * shrink,
                outer.y0 + context.power(outer.slope_exp) * (low - outer.x0),
                inner.slope_exp + outer.slope_exp
            ))
    return canonical(context, pieces)


def pl_invert(f):
    context = f.context
    return canonical(context, [
        Segment(s.y0, segment_end(context, s), s.x0, -s.slope_exp)
        for s in f.segments
    ])


def pl_equal(f, g):
    """Equality of canonical forms, field by field"""
    if f.context is not g.context:
        raise ContextMismatch("Cannot compare functions from different contexts",
                              left=f.context.spec, right=g.context.spec)
    if len(f.segments) != len(g.segments):
        return False
    return all(
        a.slope_exp == b.slope_exp and a.x0 == b.x0 and a.x1 == b.x1 and a.y0 == b.y0
        for a, b in zip(f.segments, g.segments)
    )
