"""
The beta-shift layer: expansions, the supremum sequence, admissible words,
successors, cylinder endpoints, KMS values, follower classes and the
SFT/sofic classification.
"""
import logging

import config
from errors import ContextMismatch, LetterOutOfRange, NotAdmissible, OutOfRange
from models import ShiftClass, Word
from services.number_core import ContextKind

logger = logging.getLogger(__name__)

# xi prefixes are memoized in blocks of this many digits
_XI_BLOCK = 32


def _xi_prefix(context, n):
    size = max(_XI_BLOCK, -(-n // _XI_BLOCK) * _XI_BLOCK)
    return context.memo(('xi', size), lambda: _compute_xi(context, size))[:n]


def _compute_xi(context, n):
    k = context.termination_length()
    if k is None:
        return tuple(context.digit_of_one(i) for i in range(1, n + 1))
    block = [context.digit_of_one(i) for i in range(1, k + 1)]
    block[-1] -= 1
    return tuple(block[i % k] for i in range(n))


def _check_letters(context, letters):
    for letter in letters:
        if not isinstance(letter, int) or letter < 0 or letter >= context.alphabet_size:
            raise LetterOutOfRange(
                f"Letter {letter} outside 0..{context.alphabet_size - 1}",
                letter=letter, spec=context.spec
            )


def _letters(context, word):
    """Letters of an admissible word given as a Word or a digit sequence"""
    if isinstance(word, Word):
        if word.context is not None and word.context is not context:
            raise ContextMismatch(f"Word {word} belongs to another context", spec=context.spec)
        return word.letters
    letters = tuple(word)
    if not is_admissible(context, letters):
        raise NotAdmissible(f"Word {','.join(map(str, letters))} is not admissible in {context.spec}",
                            word=list(letters), spec=context.spec)
    return letters


def make_word(context, letters):
    """Validated Word for the given letters"""
    return Word(_letters(context, letters), context)


def greedy_expansion(context, x, n):
    """
    Greedy beta-expansion with its remainder

    Args:
        context: BetaContext
        x: number in [0, 1]
        n (int): number of digits

    Returns:
        tuple: (digits, r_n) with x = sum d_i / beta^i + r_n / beta^n
    """
    x = context.number(x)
    if x < 0 or x > 1:
        raise OutOfRange(f"{x} is outside [0, 1]", spec=context.spec)
    if n < 0:
        raise OutOfRange(f"Digit count must be non-negative, got {n}", spec=context.spec)

    digits = []
    remainder = x
    for _ in range(n):
        product = context.beta * remainder
        digit = product.floor()
        digits.append(digit)
        remainder = product - digit
    return digits, remainder


def beta_expand(context, x, n):
    """First n digits of the greedy expansion of x"""
    return greedy_expansion(context, x, n)[0]


def xi_beta(context, n):
    """First n digits of the quasi-greedy supremum sequence"""
    return list(_xi_prefix(context, n))


def is_admissible(context, letters):
    """
    Check that every suffix of the word is lexicographically at most the
    matching prefix of xi_beta

    Args:
        context: BetaContext
        letters: digit sequence

    Returns:
        bool: admissibility
    """
    letters = tuple(letters)
    _check_letters(context, letters)
    xi = _xi_prefix(context, len(letters))
    return all(letters[m:] <= xi[:len(letters) - m] for m in range(len(letters)))


def _step(context, state, letter):
    """Follower automaton transition; None when the letter is forbidden"""
    target = _xi_prefix(context, state + 1)[state]
    if letter < target:
        return 0
    if letter > target:
        return None
    state += 1
    if state == context.termination_length():
        return 0
    return state


def enumerate_words(context, n):
    """All admissible words of length n in lexicographic order"""
    if n < 0:
        raise OutOfRange(f"Word length must be non-negative, got {n}", spec=context.spec)
    frontier = [((), 0)]
    for _ in range(n):
        extended = []
        for letters, state in frontier:
            for letter in range(context.alphabet_size):
                following = _step(context, state, letter)
                if following is None:
                    break
                extended.append((letters + (letter,), following))
        frontier = extended
    return [Word(letters, context) for letters, _ in frontier]


def successor(context, word):
    """Least admissible word of the same length strictly above word, or None"""
    letters = _letters(context, word)
    for j in range(len(letters) - 1, -1, -1):
        for letter in range(letters[j] + 1, context.alphabet_size):
            candidate = letters[:j] + (letter,)
            if not is_admissible(context, candidate):
                break
            return Word(candidate + (0,) * (len(letters) - j - 1), context)
    return None


def l_value(context, word):
    """l(w) = w_1/beta + ... + w_n/beta^n"""
    letters = _letters(context, word)
    inverse = context.power(-1)
    value = context.zero
    for letter in reversed(letters):
        value = (value + letter) * inverse
    return value


def r_value(context, word):
    """l of the successor word, or 1 for a maximal word"""
    following = successor(context, word)
    if following is None:
        return context.one
    return l_value(context, following)


def beta_n(context, n):
    return context.beta_n(n)


def _canonical_index(context, index):
    # beta_(l+p) = beta_l for a preperiod of length l and period p
    preperiod, period = len(context.preperiod), len(context.period)
    if period and index >= preperiod + period:
        return preperiod + (index - preperiod) % period
    return index


def follower_index(context, word):
    """
    Index j with a_w = a_{xi_1..xi_j}; j = 0 means a_w = 1

    Sofic contexts report the least index carrying the same value beta_j.
    """
    state = 0
    for letter in _letters(context, word):
        state = _step(context, state, letter)
    return _canonical_index(context, state)


def kms_value(context, word):
    """phi(a_w) = beta_j for the follower index j"""
    return context.beta_n(follower_index(context, word))


def follower_equal(context, u, v):
    return kms_value(context, u) == kms_value(context, v)


def slope_identity(context, u, v):
    """(r(u) - l(u)) / (r(v) - l(v)) == beta ** (|v| - |u|), evaluated exactly"""
    u_letters, v_letters = _letters(context, u), _letters(context, v)
    ratio = (r_value(context, u_letters) - l_value(context, u_letters)) / \
        (r_value(context, v_letters) - l_value(context, v_letters))
    return ratio == context.power(len(v_letters) - len(u_letters))


def denominator_certificate(context, depth):
    """
    For beta = p/q with q > 1, confirm den(beta_n) = q^n for n <= depth.

    The denominators of beta_n = beta * beta_(n-1) - d_n grow strictly, so the
    orbit of 1 is never eventually periodic.
    """
    if context.kind is not ContextKind.EXACT_RATIONAL:
        return False
    q = context.rational_value.denominator
    if q == 1:
        return False
    return all(
        context.beta_n(n).as_fraction().denominator == q ** n
        for n in range(1, depth + 1)
    )


def _scan(context, depth):
    seen = [context.beta_n(0)]
    for k in range(1, depth + 1):
        value = context.beta_n(k)
        if value.is_zero():
            logger.debug(f"{context.spec}: beta_{k} = 0, shift of finite type")
            return ShiftClass.sft(k)
        for l in range(1, k):
            if seen[l] == value:
                logger.debug(f"{context.spec}: beta_{k} = beta_{l}, sofic")
                return ShiftClass.sofic(l, k - 1)
        seen.append(value)

    certificate = 'denominator-growth' if denominator_certificate(context, depth) else None
    logger.debug(f"{context.spec}: unresolved up to depth {depth} (certificate: {certificate})")
    return ShiftClass.unknown(depth, certificate)


def classify_shift(context, depth=None):
    """
    Scan beta_1, beta_2, ... for a zero (SFT) or a first repeat (sofic)

    Args:
        context: BetaContext
        depth (int, optional): scan length, defaults to config.DEFAULT_DEPTH

    Returns:
        ShiftClass: the classification
    """
    if depth is None:
        depth = config.DEFAULT_DEPTH
    if depth < 1:
        raise OutOfRange(f"depth must be at least 1, got {depth}")
    return context.memo(('classify', depth), lambda: _scan(context, depth))
