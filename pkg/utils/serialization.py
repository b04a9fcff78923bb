import json
import logging

from errors import ContextMismatch, ParseError
from models import MarkedWord, TableRow
from services.number_core import make_context
from services.table_group import make_table
from utils.parsing import format_word, parse_word

logger = logging.getLogger(__name__)


def dumps(data):
    """Canonical JSON text: compact separators, keys in construction order"""
    return json.dumps(data, separators=(",", ":"), ensure_ascii=False)


def _fraction_text(value):
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def number_to_json(x, places=None):
    """
    Exact number as polynomial coefficients in beta (ascending) plus a decimal

    Returns:
        dict: {"poly": [...], "approx": "..."}
    """
    return {
        'poly': [_fraction_text(c) for c in x.to_poly()],
        'approx': x.to_decimal(places)
    }


def format_number(x, places=None):
    """
    Human readable form: "3/4" for rationals, "beta - 1 ≈ 0.618033988750" otherwise
    """
    if x.is_rational():
        return _fraction_text(x.as_fraction())
    return f"{x} ≈ {x.to_decimal(places)}"


def table_to_json(table):
    return {
        'beta': table.context.spec,
        'rows': [
            {'top': format_word(row.top.letters), 'bottom': format_word(row.bottom.letters), 'class': row.cls}
            for row in table.rows
        ]
    }


def table_from_json(data, context=None):
    """
    Build a table from its JSON form; the result is not validated

    Args:
        data (dict): {"beta": spec, "rows": [{"top", "bottom", "class"}, ...]}
        context (BetaContext, optional): must match the table's beta when given

    Returns:
        BetaTable: rows sorted by bottom cell where possible
    """
    try:
        spec = data['beta']
        raw_rows = data['rows']
    except (KeyError, TypeError) as e:
        raise ParseError(f"Table JSON needs 'beta' and 'rows': {str(e)}")

    table_context = make_context(spec)
    if context is not None and context is not table_context:
        raise ContextMismatch(f"Table is over {table_context.spec}, not {context.spec}",
                              left=context.spec, right=table_context.spec)

    rows = []
    for index, raw in enumerate(raw_rows, 1):
        try:
            cls = int(raw['class'])
            top, bottom = parse_word(raw['top']), parse_word(raw['bottom'])
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Row {index} of the table is malformed: {str(e)}", row=index)
        rows.append(TableRow(MarkedWord(top, cls), MarkedWord(bottom, cls)))
    logger.debug(f"Loaded table over {table_context.spec} with {len(rows)} rows")
    return make_table(table_context, rows)


def pl_to_json(f, places=None):
    return {
        'segments': [
            {
                'x0': number_to_json(s.x0, places),
                'x1': number_to_json(s.x1, places),
                'y0': number_to_json(s.y0, places),
                'slope_exp': s.slope_exp
            }
            for s in f.segments
        ]
    }


def pl_to_text(f, places=None):
    lines = []
    for s in f.segments:
        lines.append(
            f"[{format_number(s.x0, places)}, {format_number(s.x1, places)}) -> "
            f"{format_number(s.y0, places)}  slope beta^{s.slope_exp}"
        )
    return "\n".join(lines)


def graph_to_json(graph):
    return {
        'vertices': list(graph.vertices),
        'edges': [{'from': e.source, 'label': e.label, 'to': e.target} for e in graph.edges]
    }


def graph_to_dot(graph):
    """DOT text for the labeled graph"""
    lines = ["digraph {"]
    for vertex in graph.vertices:
        lines.append(f"    v{vertex};")
    for e in graph.edges:
        lines.append(f'    v{e.source} -> v{e.target} [label="{e.label}"];')
    lines.append("}")
    return "\n".join(lines)


def matrix_to_text(rows):
    return "\n".join(" ".join(str(value) for value in row) for row in rows)
