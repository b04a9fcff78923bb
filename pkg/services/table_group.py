"""
Group elements as beta-adic tables: marked cells, validation, composition by
common refinement, inversion and the realization as piecewise-linear maps.
"""
import logging
import random
from collections import Counter, defaultdict
from functools import lru_cache

import config
from errors import (
    ContextMismatch, InternalInvariantViolation, InvalidTable, LetterOutOfRange, NotAdmissible, NotSofic
)
from models import BetaTable, MarkedWord, Segment, TableRow
from services.beta_shift import follower_equal, is_admissible, kms_value, l_value
from services.number_core import make_context
from services.pl_function import canonical
from services.sofic_graph import build_graph, projection_system
from utils.parsing import format_beta_spec, format_word

logger = logging.getLogger(__name__)


def cell_interval(context, cell):
    """
    [l(nu_[i]), r(nu_[i])) = l(nu) + beta^-|nu| * (t_(i-1), t_i)

    Args:
        context: BetaContext
        cell (MarkedWord): admissible word with class index

    Returns:
        tuple: (left, right) BetaNumbers
    """
    return _cached_cell_interval(context, cell.letters, cell.cls)


@lru_cache(maxsize=config.CELL_CACHE_SIZE)
def _cached_cell_interval(context, letters, cls):
    return _cell_interval(context, MarkedWord(letters, cls))


def _cell_interval(context, cell):
    system = projection_system(context)
    if not 1 <= cell.cls <= system.size:
        raise InvalidTable(f"Class {cell.cls} outside 1..{system.size}", cell=str(cell))
    base = l_value(context, cell.letters)
    scale = context.power(-cell.depth)
    projection = system.projections[cell.cls - 1]
    return base + scale * projection.lower, base + scale * projection.upper


def _cell_problem(context, cell, size):
    """Reason a marked word is not a valid cell, or None"""
    if not 1 <= cell.cls <= size:
        return f"class {cell.cls} outside 1..{size}"
    try:
        admissible = is_admissible(context, cell.letters)
    except (NotAdmissible, LetterOutOfRange):
        admissible = False
    if not admissible:
        return f"word {format_word(cell.letters) or '∅'} is not admissible"
    upper = projection_system(context).projections[cell.cls - 1].upper
    if kms_value(context, cell.letters) < upper:
        return f"cell {cell} is incompatible with its class"
    return None


def make_marked_word(context, letters, cls):
    """Validated MarkedWord"""
    cell = MarkedWord(tuple(letters), cls)
    problem = _cell_problem(context, cell, projection_system(context).size)
    if problem:
        raise InvalidTable(f"Invalid marked word: {problem}", cell=str(cell), spec=context.spec)
    return cell


def make_table(context, rows):
    """BetaTable with rows sorted by the left end of their bottom cell when that is computable"""
    rows = tuple(rows)
    try:
        rows = tuple(sorted(rows, key=lambda row: cell_interval(context, row.bottom)[0]))
    except (InvalidTable, NotAdmissible, LetterOutOfRange) as e:
        logger.debug(f"Keeping row order of an invalid table: {str(e)}")
    return BetaTable(context, rows)


def _cover_problems(context, side, cells):
    problems = []
    position = context.zero
    for left, right in sorted((cell_interval(context, cell) for cell in cells), key=lambda pair: pair[0]):
        if left > position:
            problems.append(f"{side} cover gap at l={position}")
        elif left < position:
            problems.append(f"{side} cover overlap at l={left}")
        position = max(position, right)
    if position < 1:
        problems.append(f"{side} cover gap at l={position}")
    return problems


def validate(table):
    """
    Check class compatibility, matching classes per row and exact tiling

    Args:
        table (BetaTable): candidate table

    Returns:
        list: one message per violated condition, empty when the table is valid
    """
    context = table.context
    try:
        size = projection_system(context).size
    except NotSofic as e:
        return [str(e)]

    problems = []
    if not table.rows:
        problems.append("table has no rows")
    for index, row in enumerate(table.rows, 1):
        if row.top.cls != row.bottom.cls:
            problems.append(f"row {index}: classes differ ({row.top.cls} vs {row.bottom.cls})")
        for side, cell in (('top', row.top), ('bottom', row.bottom)):
            problem = _cell_problem(context, cell, size)
            if problem:
                problems.append(f"row {index}: {side} {problem}")
    if problems:
        return problems

    problems.extend(_cover_problems(context, 'bottom', [row.bottom for row in table.rows]))
    problems.extend(_cover_problems(context, 'top', [row.top for row in table.rows]))
    return problems


def ensure_valid(table):
    problems = validate(table)
    if problems:
        logger.error(f"Error validating table over {table.context.spec}: {problems[0]}")
        raise InvalidTable(f"Invalid table: {problems[0]}", problems=problems, spec=table.context.spec)
    return table


def identity_table(context):
    system = projection_system(context)
    return BetaTable(context, tuple(
        TableRow(MarkedWord((), i), MarkedWord((), i)) for i in range(1, system.size + 1)
    ))


def refine_row(context, cell):
    """Children (nu a, j) of a cell, one per edge i -a-> j, in interval order"""
    graph = build_graph(context)
    return [MarkedWord(cell.letters + (edge.label,), edge.target) for edge in graph.out_edges(cell.cls)]


def _split_row(context, row):
    graph = build_graph(context)
    return [
        TableRow(
            MarkedWord(row.top.letters + (edge.label,), edge.target),
            MarkedWord(row.bottom.letters + (edge.label,), edge.target)
        )
        for edge in graph.out_edges(row.cls)
    ]


def _coarse_cells(context, first, second):
    """
    Walk two tilings of [0, 1) and collect the coarser cell of every
    overlapping pair that differs
    """
    first = sorted(first, key=lambda cell: cell_interval(context, cell)[0])
    second = sorted(second, key=lambda cell: cell_interval(context, cell)[0])
    coarse_first, coarse_second = set(), set()
    i = j = 0
    while i < len(first) and j < len(second):
        a, b = first[i], second[j]
        if a != b:
            if a.depth < b.depth:
                coarse_first.add(a)
            elif b.depth < a.depth:
                coarse_second.add(b)
            else:
                raise InternalInvariantViolation(f"Cells {a} and {b} overlap without nesting",
                                                 spec=context.spec)
        right_a, right_b = cell_interval(context, a)[1], cell_interval(context, b)[1]
        if right_a <= right_b:
            i += 1
        if right_b <= right_a:
            j += 1
    return coarse_first, coarse_second


def _refine_rows(context, rows, coarse, side):
    refined = []
    for row in rows:
        cell = row.top if side == 'top' else row.bottom
        if cell in coarse:
            refined.extend(_split_row(context, row))
        else:
            refined.append(row)
    return refined


def _same_context(first, second):
    if first.context is not second.context:
        raise ContextMismatch(
            f"Tables over {first.context.spec} and {second.context.spec} cannot be combined",
            left=first.context.spec, right=second.context.spec
        )
    return first.context


def compose(first, second):
    """
    The element first o second (second is applied first)

    The top cells of second and the bottom cells of first are refined until
    they agree; each split runs through both sides of its row.

    Args:
        first (BetaTable): applied last
        second (BetaTable): applied first

    Returns:
        BetaTable: the composite, rows sorted by bottom cell
    """
    context = _same_context(first, second)
    ensure_valid(first)
    ensure_valid(second)

    outer, inner = list(first.rows), list(second.rows)
    steps = 0
    while True:
        coarse_inner, coarse_outer = _coarse_cells(
            context, [row.top for row in inner], [row.bottom for row in outer]
        )
        if not coarse_inner and not coarse_outer:
            break
        steps += len(coarse_inner) + len(coarse_outer)
        if steps > config.COMPOSE_STEP_CAP:
            logger.error(f"Error composing tables over {context.spec}: refinement exceeded {config.COMPOSE_STEP_CAP} steps")
            raise InvalidTable(f"Common refinement exceeded {config.COMPOSE_STEP_CAP} steps",
                               spec=context.spec, steps=steps)
        inner = _refine_rows(context, inner, coarse_inner, 'top')
        outer = _refine_rows(context, outer, coarse_outer, 'bottom')

    logger.debug(f"Composed tables over {context.spec} after {steps} refinement steps")
    images = {row.bottom: row.top for row in outer}
    return make_table(context, [TableRow(images[row.top], row.bottom) for row in inner])


def invert(table):
    ensure_valid(table)
    return make_table(table.context, [TableRow(row.bottom, row.top) for row in table.rows])


def commutator(first, second):
    """first o second o first^-1 o second^-1"""
    _same_context(first, second)
    return compose(compose(first, second), compose(invert(first), invert(second)))


def table_to_pl(table):
    """
    The piecewise-linear map of a table: each bottom cell goes linearly onto
    its top cell with slope beta^(|bottom| - |top|)

    Returns:
        PLFunction: canonical form
    """
    ensure_valid(table)
    context = table.context
    segments = []
    for row in table.rows:
        left, right = cell_interval(context, row.bottom)
        segments.append(Segment(
            left, right, cell_interval(context, row.top)[0], row.bottom.depth - row.top.depth
        ))
    return canonical(context, segments)


def table_from_words(context, top, bottom):
    """
    Table from pairs of unmarked words with equal follower sets

    Args:
        context: BetaContext
        top (list): image words
        bottom (list): domain words, paired with top by position

    Returns:
        BetaTable: each pair expanded into its nonempty marked cells
    """
    if len(top) != len(bottom):
        raise InvalidTable(f"{len(top)} top words against {len(bottom)} bottom words", spec=context.spec)
    system = projection_system(context)
    rows = []
    for mu, nu in zip(top, bottom):
        mu, nu = tuple(mu), tuple(nu)
        if not follower_equal(context, mu, nu):
            raise InvalidTable(
                f"Words {format_word(mu) or '∅'} and {format_word(nu) or '∅'} have different follower sets",
                spec=context.spec
            )
        value = kms_value(context, nu)
        rows.extend(
            TableRow(MarkedWord(mu, p.index), MarkedWord(nu, p.index))
            for p in system.projections if p.upper <= value
        )
    return ensure_valid(make_table(context, rows))


def thompson_generators(n):
    """
    Classical elements of V_n on the full n-shift

    Returns:
        dict: 'swap' exchanging the first and last cylinders, plus the
        generators 'A' and 'B' of Thompson's group F when n == 2
    """
    context = make_context(format_beta_spec((n,)))
    middle = [(a,) for a in range(1, n - 1)]
    generators = {
        'swap': table_from_words(context, [(n - 1,)] + middle + [(0,)], [(0,)] + middle + [(n - 1,)])
    }
    if n == 2:
        generators['A'] = table_from_words(context, [(0, 0), (0, 1), (1,)], [(0,), (1, 0), (1, 1)])
        generators['B'] = table_from_words(
            context, [(0,), (1, 0, 0), (1, 0, 1), (1, 1)], [(0,), (1, 0), (1, 1, 0), (1, 1, 1)]
        )
    return generators


def _random_partition(context, rng, size):
    cells = [row.bottom for row in identity_table(context).rows]
    steps = 0
    while len(cells) < size and steps < config.COMPOSE_STEP_CAP:
        index = rng.randrange(len(cells))
        cells[index:index + 1] = refine_row(context, cells[index])
        steps += 1
    return cells


def _lockstep(context, rng, bottom, top, steps):
    """Refine one random cell on each side until both carry the same classes"""
    for _ in range(steps):
        if Counter(cell.cls for cell in bottom) == Counter(cell.cls for cell in top):
            return bottom, top
        for cells in (bottom, top):
            index = rng.randrange(len(cells))
            cells[index:index + 1] = refine_row(context, cells[index])
    return None


def _uniform_partition(context, size):
    cells = [row.bottom for row in identity_table(context).rows]
    while len(cells) < size:
        cells = [child for cell in cells for child in refine_row(context, cell)]
    return cells


def random_table(context, seed, size=1):
    """
    Seeded random element with at least size rows

    Bottom and top partitions are grown independently, then refined in
    lockstep until their class counts agree; cells of equal class are paired
    by a random matching. A uniform depth partition on both sides is the
    fallback when lockstep refinement does not settle.

    Args:
        context: BetaContext resolving to SFT or sofic
        seed (int): random seed
        size (int): minimum number of rows

    Returns:
        BetaTable: a valid table, deterministic per seed
    """
    rng = random.Random(seed)
    matched = None
    for _ in range(config.RANDOM_TABLE_ATTEMPTS):
        matched = _lockstep(
            context, rng, _random_partition(context, rng, size), _random_partition(context, rng, size), size + 4
        )
        if matched is not None:
            break
    if matched is None:
        logger.debug(f"Random table over {context.spec} (seed {seed}): falling back to a uniform partition")
        bottom = _uniform_partition(context, size)
        top = list(bottom)
    else:
        bottom, top = matched

    by_class = defaultdict(list)
    for cell in top:
        by_class[cell.cls].append(cell)
    for cells in by_class.values():
        rng.shuffle(cells)

    rows = [TableRow(by_class[cell.cls].pop(), cell) for cell in bottom]
    logger.debug(f"Random table over {context.spec} (seed {seed}) with {len(rows)} rows")
    return make_table(context, rows)
