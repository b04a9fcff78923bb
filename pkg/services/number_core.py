"""
Exact arithmetic in the number field generated by beta, with a sound total order.

Digit contexts keep elements as rational polynomials reduced modulo the
square-free part of the characteristic polynomial. Signs are read off a
rational isolating interval for beta that is refined by bisection, and exact
zeros are decided by a gcd/Sturm certificate, so no factorization is needed.
Rational contexts work directly with Fractions.
"""
import logging
import math
import threading
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import sympy
from sympy.polys.densearith import dup_add, dup_mul, dup_neg, dup_quo, dup_rem, dup_sub
from sympy.polys.densebasic import dup_degree, dup_strip
from sympy.polys.densetools import dup_eval, dup_monic
from sympy.polys.domains import QQ
from sympy.polys.euclidtools import dup_gcd, dup_invert
from sympy.polys.polyerrors import NotInvertible
from sympy.polys.rootisolation import dup_count_real_roots
from sympy.polys.sqfreetools import dup_sqf_part

import config
from errors import (
    BetaError, BetaOutOfRange, ContextMismatch, InternalInvariantViolation,
    NotParryAdmissible, ParseError
)
from utils.parsing import format_beta_spec, parse_beta_spec

logger = logging.getLogger(__name__)

BETA = sympy.Symbol('beta')


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class ContextKind(Enum):
    ALGEBRAIC_DIGITS = "algebraic_digits"
    EXACT_RATIONAL = "exact_rational"


def _qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(value):
    return Fraction(int(value.numerator), int(value.denominator))


def _sign(value):
    return (value > 0) - (value < 0)


def _format_decimal(scaled, places):
    sign = '-' if scaled < 0 else ''
    digits = str(abs(scaled)).rjust(places + 1, '0')
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


class BetaNumber:
    """An exact element of Q(beta), bound to the context it was created in."""

    __slots__ = ("context", "rep")

    def __init__(self, context, rep):
        self.context = context
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, BetaNumber):
            if other.context is not self.context:
                raise ContextMismatch(
                    f"Cannot mix numbers from {self.context.spec} and {other.context.spec}",
                    left=self.context.spec, right=other.context.spec
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.context.number(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return BetaNumber(self.context, self.context._add(self.rep, other.rep))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return BetaNumber(self.context, self.context._sub(self.rep, other.rep))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return BetaNumber(self.context, self.context._mul(self.rep, other.rep))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return BetaNumber(self.context, self.context._neg(self.rep))

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.context.one, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self):
        return BetaNumber(self.context, self.context._invert(self.rep))

    def sign(self):
        return self.context._sign(self.rep)

    def is_zero(self):
        return self.sign() == 0

    def _order(self, other):
        other = self._coerce(other)
        if other is None:
            return None
        return Ordering(self.context._sign(self.context._sub(self.rep, other.rep)))

    def __eq__(self, other):
        order = self._order(other)
        if order is None:
            return NotImplemented
        return order is Ordering.EQUAL

    def __ne__(self, other):
        order = self._order(other)
        if order is None:
            return NotImplemented
        return order is not Ordering.EQUAL

    def __lt__(self, other):
        order = self._order(other)
        if order is None:
            return NotImplemented
        return order is Ordering.LESS

    def __le__(self, other):
        order = self._order(other)
        if order is None:
            return NotImplemented
        return order is not Ordering.GREATER

    def __gt__(self, other):
        order = self._order(other)
        if order is None:
            return NotImplemented
        return order is Ordering.GREATER

    def __ge__(self, other):
        order = self._order(other)
        if order is None:
            return NotImplemented
        return order is not Ordering.LESS

    __hash__ = None

    def floor(self):
        """Greatest integer not exceeding the value"""
        low, _ = self.context._enclose(self.rep)
        guess = math.floor(low)
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def to_decimal(self, places=None):
        return self.context._to_decimal(self.rep, config.DECIMAL_PLACES if places is None else places)

    def to_poly(self):
        """Coefficients in ascending powers of beta, as Fractions"""
        return self.context._to_poly(self.rep)

    def is_rational(self):
        return len(self.to_poly()) <= 1

    def as_fraction(self):
        coefficients = self.to_poly()
        if len(coefficients) > 1:
            raise ValueError(f"{self} is not a rational constant")
        return coefficients[0] if coefficients else Fraction(0)

    def to_expression(self):
        """The value as a sympy expression in the symbol beta"""
        terms = [
            sympy.Rational(c.numerator, c.denominator) * BETA ** i
            for i, c in enumerate(self.to_poly())
        ]
        return sympy.Add(*terms)

    def __str__(self):
        return str(self.to_expression())

    def __repr__(self):
        return f"BetaNumber({self} in {self.context.spec})"


class BetaContext:
    """
    A real beta > 1 with exact arithmetic and comparison.

    Contexts are shared through make_context and behave as immutable values;
    memoized data and the isolating interval are only refined under locks.
    """

    kind = None

    def __init__(self, spec, alphabet_size):
        self.spec = spec
        self.alphabet_size = alphabet_size
        self._lock = threading.RLock()
        self._cache = {}
        self._digits = []
        self._remainders = None

    def __repr__(self):
        return f"<BetaContext {self.spec}>"

    # construction of numbers

    def number(self, value):
        if isinstance(value, BetaNumber):
            if value.context is not self:
                raise ContextMismatch(
                    f"Number from {value.context.spec} used in {self.spec}",
                    left=self.spec, right=value.context.spec
                )
            return value
        return BetaNumber(self, self._const(value))

    def from_poly(self, coefficients):
        """Build a number from coefficients in ascending powers of beta"""
        result = self.zero
        for coefficient in reversed(list(coefficients)):
            result = result * self.beta + Fraction(coefficient)
        return result

    @property
    def zero(self):
        return self.memo('zero', lambda: BetaNumber(self, self._const(0)))

    @property
    def one(self):
        return self.memo('one', lambda: BetaNumber(self, self._const(1)))

    @property
    def beta(self):
        return self.memo('beta', lambda: BetaNumber(self, self._generator()))

    def power(self, exponent):
        """beta ** exponent, memoized"""
        return self.memo(('power', exponent), lambda: self.beta ** exponent)

    def memo(self, key, factory):
        """Return the cached value for key, computing it outside the lock on a miss"""
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = factory()
        with self._lock:
            return self._cache.setdefault(key, value)

    # the expansion of 1

    def _extend(self, n):
        with self._lock:
            if self._remainders is None:
                self._remainders = [self.one]
            while len(self._remainders) <= n:
                index = len(self._remainders)
                previous = self._remainders[-1]
                digit = self._next_digit(index, previous)
                self._digits.append(digit)
                self._remainders.append(self.beta * previous - digit)

    def digit_of_one(self, index):
        """Digit d_index (1-based) of the greedy expansion d(1, beta)"""
        if index < 1:
            raise ValueError(f"Digit index must be positive, got {index}")
        self._extend(index)
        return self._digits[index - 1]

    def beta_n(self, n):
        """beta_n = beta ** n - d_1 beta ** (n-1) - ... - d_n, with beta_0 = 1"""
        if n < 0:
            raise ValueError(f"Index must be non-negative, got {n}")
        self._extend(n)
        return self._remainders[n]

    def termination_length(self):
        """Length k of a finite d(1, beta), or None when it is infinite (or unknown)"""
        raise NotImplementedError

    # decimal output

    def _to_decimal(self, rep, places):
        if places < 1:
            raise ValueError(f"places must be at least 1, got {places}")
        scale = 10 ** places
        half = Fraction(1, 2)
        for _ in range(config.REFINE_CAP):
            low, high = self._enclose(rep)
            rounded_low = math.floor(low * scale + half)
            rounded_high = math.floor(high * scale + half)
            if rounded_low == rounded_high:
                return _format_decimal(rounded_low, places)
            if rounded_high == rounded_low + 1:
                boundary = Fraction(2 * rounded_low + 1, 2 * scale)
                if self._sign(self._sub(rep, self._const(boundary))) == 0:
                    return _format_decimal(rounded_high, places)
            self._refine()
        raise InternalInvariantViolation(
            f"Decimal expansion did not settle after {config.REFINE_CAP} refinements",
            spec=self.spec
        )


class RationalContext(BetaContext):
    """beta given as an exact fraction; every element is a Fraction."""

    kind = ContextKind.EXACT_RATIONAL

    def __init__(self, spec, value):
        super().__init__(spec, math.ceil(value))
        self.rational_value = value
        self.char_poly = None
        self.preperiod = ()
        self.period = ()

    @property
    def isolating_interval(self):
        return (self.rational_value, self.rational_value)

    def _generator(self):
        return self.rational_value

    def _const(self, value):
        return Fraction(value)

    def _add(self, f, g):
        return f + g

    def _sub(self, f, g):
        return f - g

    def _neg(self, f):
        return -f

    def _mul(self, f, g):
        return f * g

    def _invert(self, f):
        if f == 0:
            raise ZeroDivisionError(f"Division by zero in {self.spec}")
        return 1 / f

    def _sign(self, f):
        return _sign(f)

    def _enclose(self, f):
        return f, f

    def _refine(self):
        return None

    def _to_poly(self, f):
        return [f] if f else []

    def _next_digit(self, index, previous):
        return (self.beta * previous).floor()

    def termination_length(self):
        if self.rational_value.denominator == 1:
            return 1
        return None


class AlgebraicContext(BetaContext):
    """beta given by its (validated) expansion d(1, beta)."""

    kind = ContextKind.ALGEBRAIC_DIGITS

    def __init__(self, spec, alphabet_size, preperiod, period, char_poly, modulus, interval):
        super().__init__(spec, alphabet_size)
        self.preperiod = tuple(preperiod)
        self.period = tuple(period)
        self.char_poly = tuple(char_poly)
        self.modulus = list(modulus)
        self.degree = dup_degree(self.modulus)
        self.rational_value = None
        self._interval_lock = threading.Lock()
        low, high = interval
        self._interval = (low, high)
        self._left_sign = _sign(dup_eval(self.modulus, low, QQ)) if low != high else 0

    @property
    def isolating_interval(self):
        low, high = self._snapshot()
        return _fraction(low), _fraction(high)

    def expansion_digit(self, index):
        """Digit of the normalized input expansion (1-based)"""
        if index <= len(self.preperiod):
            return self.preperiod[index - 1]
        if not self.period:
            return 0
        return self.period[(index - len(self.preperiod) - 1) % len(self.period)]

    def _next_digit(self, index, previous):
        return self.expansion_digit(index)

    def termination_length(self):
        return None if self.period else len(self.preperiod)

    # field operations on dense QQ polynomials

    def _reduce(self, f):
        f = dup_strip(list(f))
        if dup_degree(f) >= self.degree:
            f = dup_rem(f, self.modulus, QQ)
        return tuple(f)

    def _generator(self):
        return self._reduce([QQ.one, QQ.zero])

    def _const(self, value):
        value = _qq(value)
        return (value,) if value else ()

    def _add(self, f, g):
        return tuple(dup_add(list(f), list(g), QQ))

    def _sub(self, f, g):
        return tuple(dup_sub(list(f), list(g), QQ))

    def _neg(self, f):
        return tuple(dup_neg(list(f), QQ))

    def _mul(self, f, g):
        return self._reduce(dup_mul(list(f), list(g), QQ))

    def _invert(self, f):
        f = list(f)
        if not f:
            raise ZeroDivisionError(f"Division by zero in {self.spec}")
        modulus = self.modulus
        try:
            inverse = dup_invert(f, modulus, QQ)
        except NotInvertible:
            if self._vanishes(f):
                raise ZeroDivisionError(f"Division by an element equal to zero in {self.spec}")
            # beta is not a root of the common factor, so it survives in the cofactor
            modulus = dup_quo(modulus, dup_gcd(f, modulus, QQ), QQ)
            inverse = dup_invert(dup_rem(f, modulus, QQ), modulus, QQ)
        return self._reduce(inverse)

    def _to_poly(self, f):
        return [_fraction(c) for c in reversed(f)]

    # ordering

    def _snapshot(self):
        with self._interval_lock:
            return self._interval

    def _refine(self):
        """Halve the isolating interval once and return the new enclosure"""
        with self._interval_lock:
            low, high = self._interval
            if low == high:
                return self._interval
            middle = (low + high) / 2
            value = dup_eval(self.modulus, middle, QQ)
            if not value:
                self._interval = (middle, middle)
            elif _sign(value) == self._left_sign:
                self._interval = (middle, high)
            else:
                self._interval = (low, middle)
            return self._interval

    @staticmethod
    def _bounds(f, low, high):
        # 0 < low <= x <= high, bound each monomial separately
        lower = upper = QQ.zero
        power_low = power_high = QQ.one
        for coefficient in reversed(f):
            if coefficient >= 0:
                lower += coefficient * power_low
                upper += coefficient * power_high
            else:
                lower += coefficient * power_high
                upper += coefficient * power_low
            power_low *= low
            power_high *= high
        return lower, upper

    def _enclose(self, f):
        f = list(f)
        low, high = self._snapshot()
        if low == high:
            value = _fraction(dup_eval(f, low, QQ))
            return value, value
        lower, upper = self._bounds(f, low, high)
        return _fraction(lower), _fraction(upper)

    def _vanishes(self, f):
        """Certificate: f(beta) = 0 iff gcd(f, modulus) has its root in the isolating interval"""
        common = dup_gcd(list(f), self.modulus, QQ)
        if dup_degree(common) < 1:
            return False
        low, high = self._snapshot()
        if low == high:
            return not dup_eval(common, low, QQ)
        return dup_count_real_roots(common, QQ, low, high) > 0

    def _sign(self, f):
        f = list(f)
        if not f:
            return 0
        if len(f) == 1:
            return _sign(f[0])
        low, high = self._snapshot()
        certified = False
        for _ in range(config.REFINE_CAP):
            if low == high:
                return _sign(dup_eval(f, low, QQ))
            lower, upper = self._bounds(f, low, high)
            if lower > 0:
                return 1
            if upper < 0:
                return -1
            if not certified:
                if self._vanishes(f):
                    return 0
                certified = True
            low, high = self._refine()
        raise InternalInvariantViolation(
            f"Sign of a nonzero element not resolved after {config.REFINE_CAP} bisections",
            spec=self.spec
        )


# Public operations

def compare(a, b):
    """
    Exact comparison of two numbers from the same context

    Returns:
        Ordering: LESS, EQUAL or GREATER
    """
    if not isinstance(a, BetaNumber) or not isinstance(b, BetaNumber):
        raise TypeError("compare expects two BetaNumbers")
    if a.context is not b.context:
        raise ContextMismatch(
            f"Cannot compare numbers from {a.context.spec} and {b.context.spec}",
            left=a.context.spec, right=b.context.spec
        )
    return a._order(b)


def to_decimal(a, places):
    """Correctly rounded (half up) decimal string with the given number of places"""
    return a.to_decimal(places)


def normalize_digits(preperiod, period=()):
    """
    Reduce a digit expansion to its canonical form

    Trailing zeros of a finite expansion are trimmed, a zero period makes the
    expansion finite, and periodic expansions get minimal period and preperiod.

    Returns:
        tuple: (preperiod, period)
    """
    preperiod, period = tuple(preperiod), tuple(period)
    if period and not any(period):
        period = ()
    if not period:
        while preperiod and preperiod[-1] == 0:
            preperiod = preperiod[:-1]
        return preperiod, ()

    size = len(period)
    for candidate in range(1, size + 1):
        if size % candidate == 0 and period[:candidate] * (size // candidate) == period:
            period = period[:candidate]
            break

    while preperiod and preperiod[-1] == period[-1]:
        preperiod = preperiod[:-1]
        period = (period[-1],) + period[:-1]
    return preperiod, period


def _digit_at(preperiod, period, index):
    if index < len(preperiod):
        return preperiod[index]
    if not period:
        return 0
    return period[(index - len(preperiod)) % len(period)]


def _parry_admissible(preperiod, period):
    """Every proper shift of the expansion is strictly below it"""
    total = len(preperiod) + len(period)
    window = len(preperiod) + 2 * len(period) + 1
    sequence = [_digit_at(preperiod, period, i) for i in range(total + window)]
    head = sequence[:window]
    return all(sequence[m:m + window] < head for m in range(1, total + 1))


def characteristic_polynomial(preperiod, period=()):
    """
    Integer polynomial (highest degree first) vanishing at beta

    Finite d(1, beta) = x_1..x_k gives x^k - sum x_i x^(k-i). A preperiod of
    length l and period p give the difference of the truncations at l + p and l.
    """
    def truncation(digits):
        return [1] + [-d for d in digits]

    if not period:
        return truncation(preperiod)
    full = truncation(preperiod + period)
    head = truncation(preperiod)
    head = [0] * (len(full) - len(head)) + head
    result = [x - y for x, y in zip(full, head)]
    while result and result[0] == 0:
        result.pop(0)
    return result


def _count_roots(f, low, high):
    """Distinct real roots of the square-free f in (low, high]"""
    count = dup_count_real_roots(f, QQ, low, high)
    if not dup_eval(f, low, QQ):
        count -= 1
    return count


def _tighten(f, low, high):
    """Shrink (low, high] holding one root until both ends are non-roots or it is a point"""
    while True:
        if not dup_eval(f, high, QQ):
            return high, high
        if dup_eval(f, low, QQ):
            return low, high
        middle = (low + high) / 2
        if not dup_eval(f, middle, QQ):
            return middle, middle
        if _count_roots(f, middle, high) == 1:
            low = middle
        else:
            high = middle


def _isolate_roots(f, low, high):
    """Isolating intervals for the roots of the square-free f in (low, high]"""
    found = []
    pending = [(low, high)]
    while pending:
        a, b = pending.pop()
        count = _count_roots(f, a, b)
        if count == 0:
            continue
        if count == 1:
            found.append(_tighten(f, a, b))
            continue
        middle = (a + b) / 2
        pending.append((middle, b))
        pending.append((a, middle))
    return sorted(found)


def _round_trip(context):
    """Greedy expansion of 1 at the candidate root reproduces the input digits"""
    preperiod, period = context.preperiod, context.period
    length = len(preperiod) + 2 * len(period) if period else len(preperiod)
    remainder = context.one
    remainders = [remainder]
    for index in range(1, length + 1):
        product = context.beta * remainder
        digit = product.floor()
        if digit != context.expansion_digit(index):
            logger.debug(f"Round trip failed at digit {index}: got {digit}")
            return False
        remainder = product - digit
        remainders.append(remainder)
    if not period:
        return remainders[len(preperiod)].is_zero()
    return remainders[len(preperiod) + len(period)] == remainders[len(preperiod)]


@lru_cache(maxsize=128)
def _digit_context(preperiod, period):
    spec = format_beta_spec(preperiod, period)

    if not period and len(preperiod) == 1:
        m = preperiod[0]
        logger.debug(f"Integer context {spec}: full {m}-shift")
        return AlgebraicContext(
            spec, m, preperiod, (), (1, -m),
            [QQ.one, -QQ(m)], (QQ(m), QQ(m))
        )

    alphabet_size = preperiod[0] + 1
    digits = preperiod + period
    if max(digits) > preperiod[0]:
        raise ParseError(
            f"Digit {max(digits)} exceeds the leading digit in {spec}",
            spec=spec, alphabet_size=alphabet_size
        )
    if not _parry_admissible(preperiod, period):
        raise NotParryAdmissible(f"A shift of {spec} is not below the expansion itself", spec=spec)

    char_poly = characteristic_polynomial(preperiod, period)
    modulus = dup_monic(dup_sqf_part([QQ(c) for c in char_poly], QQ), QQ)
    logger.debug(f"Context {spec}: char_poly={char_poly}, square-free degree {dup_degree(modulus)}")

    for interval in _isolate_roots(modulus, QQ(alphabet_size - 1), QQ(alphabet_size)):
        context = AlgebraicContext(spec, alphabet_size, preperiod, period, char_poly, modulus, interval)
        if _round_trip(context):
            return context

    raise NotParryAdmissible(f"No root of {char_poly} in ({alphabet_size - 1}, {alphabet_size}] expands to {spec}", spec=spec)


@lru_cache(maxsize=128)
def _rational_context(value):
    if value <= 1:
        raise BetaOutOfRange(f"beta must exceed 1, got {value}", value=str(value))
    return RationalContext(format_beta_spec(value=value), value)


def make_context(spec):
    """
    Build (or fetch) the validated context for a beta-spec

    Args:
        spec (str): "digits=..." or "rational=p/q"

    Returns:
        BetaContext: shared context for the normalized spec
    """
    try:
        parsed = parse_beta_spec(spec)
        if parsed.kind == 'rational':
            return _rational_context(parsed.value)

        preperiod, period = normalize_digits(parsed.preperiod, parsed.period)
        if not preperiod and period:
            raise NotParryAdmissible(f"Purely periodic expansion {spec} is never an expansion of 1", spec=spec)
        if not preperiod or preperiod[0] == 0 or (preperiod == (1,) and not period):
            raise BetaOutOfRange(f"Expansion {spec} does not describe a beta > 1", spec=spec)
        return _digit_context(preperiod, period)
    except BetaError as e:
        logger.error(f"Error building context for {spec}: {str(e)}")
        raise
