"""Command-line surface: one subcommand per library operation."""
import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Optional

import config
from errors import BetaError
from models import CliConfig
from services import beta_shift, sofic_graph, table_group
from services.catalog_service import get_catalog, load_table_file, resolve_beta
from services.number_core import make_context
from services.pl_function import pl_eval
from utils.parsing import format_word, parse_number, parse_word
from utils.serialization import (
    dumps, format_number, graph_to_dot, graph_to_json, matrix_to_text, number_to_json,
    pl_to_json, pl_to_text, table_from_json, table_to_json
)

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Bad flags or unreadable input; exit code 2"""


@dataclass
class Output:
    text: str
    data: Any = None
    dot: Optional[str] = None
    status: int = 0


# helpers

def _context(cli_config):
    if not cli_config.beta:
        raise UsageError("--beta is required for this command")
    return make_context(resolve_beta(cli_config.beta))


def _require(cli_config, name):
    value = cli_config.extra.get(name)
    if value is None:
        raise UsageError(f"--{name} is required for this command")
    return value


def _word(cli_config):
    return parse_word(_require(cli_config, 'word'))


def _tables(cli_config, count):
    if len(cli_config.inputs) != count:
        raise UsageError(f"expected {count} --in file(s), got {len(cli_config.inputs)}")
    context = make_context(resolve_beta(cli_config.beta)) if cli_config.beta else None
    tables = []
    for path in cli_config.inputs:
        try:
            data = load_table_file(path)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read table {path}: {str(e)}")
        tables.append(table_from_json(data, context))
    return tables


def _table_output(table):
    data = table_to_json(table)
    return Output(dumps(data), data)


def _number_output(x, **extra):
    data = dict(extra)
    data['value'] = number_to_json(x)
    return Output(format_number(x), data)


# beta-shift commands

def cmd_expand(cli_config):
    context = _context(cli_config)
    x = parse_number(_require(cli_config, 'x'))
    n = _require(cli_config, 'n')
    digits, remainder = beta_shift.greedy_expansion(context, x, n)
    return Output(format_word(digits), {'digits': digits, 'remainder': number_to_json(remainder)})


def cmd_xi(cli_config):
    context = _context(cli_config)
    digits = beta_shift.xi_beta(context, _require(cli_config, 'n'))
    return Output(format_word(digits), {'digits': digits})


def cmd_classify(cli_config):
    shift_class = beta_shift.classify_shift(_context(cli_config), cli_config.depth)
    data = shift_class.to_dict()
    return Output(dumps(data), data)


def cmd_words(cli_config):
    words = beta_shift.enumerate_words(_context(cli_config), _require(cli_config, 'n'))
    return Output("\n".join(str(w) for w in words), [str(w) for w in words])


def cmd_kms(cli_config):
    context = _context(cli_config)
    word = _word(cli_config)
    index = beta_shift.follower_index(context, word)
    return _number_output(beta_shift.kms_value(context, word), word=format_word(word), index=index)


def cmd_interval(cli_config):
    context = _context(cli_config)
    word = _word(cli_config)
    left, right = beta_shift.l_value(context, word), beta_shift.r_value(context, word)
    return Output(
        f"[{format_number(left)}, {format_number(right)})",
        {'word': format_word(word), 'l': number_to_json(left), 'r': number_to_json(right)}
    )


def cmd_path_count(cli_config):
    context = _context(cli_config)
    n = _require(cli_config, 'n')
    paths = sofic_graph.path_count(context, n)
    words = len(beta_shift.enumerate_words(context, n))
    return Output(f"{paths} paths, {words} admissible words", {'n': n, 'paths': paths, 'words': words})


# invariants

def cmd_k0(cli_config):
    k0 = sofic_graph.k0_group(_context(cli_config), cli_config.depth)
    text = str(k0) + (" (unless sofic beyond the scanned depth)" if k0.conditional else "")
    return Output(text, k0.to_dict())


def cmd_homology(cli_config):
    h0, h1, higher = sofic_graph.homology(_context(cli_config), cli_config.depth)
    return Output(
        f"H_0 = {h0}\nH_1 = {h1}\nH_k = {higher} (k >= 2)",
        {'H0': h0.to_dict(), 'H1': h1.to_dict(), 'Hk': higher.to_dict()}
    )


def cmd_graph(cli_config):
    graph = sofic_graph.build_graph(_context(cli_config), cli_config.depth)
    text = "\n".join(f"{e.source} -{e.label}-> {e.target}" for e in graph.edges)
    return Output(text, graph_to_json(graph), graph_to_dot(graph))


def cmd_matrices(cli_config):
    matrix_set = sofic_graph.matrices(_context(cli_config), cli_config.depth)
    data = matrix_set.to_dict()
    blocks = [f"{name}:\n{matrix_to_text(data[name])}" for name in ('M', 'B', 'R', 'S', 'L')]
    blocks.append(f"eta: {format_word(data['eta'])}")
    blocks.append(f"det(I - M) = det(I - B) = det(I - L) = {data['det']}")
    return Output("\n".join(blocks), data)


def cmd_group_class(cli_config):
    result = sofic_graph.group_class(_context(cli_config), cli_config.depth)
    return Output(str(result), result.to_dict())


def cmd_isomorphic(cli_config):
    other = make_context(resolve_beta(_require(cli_config, 'other')))
    verdict = sofic_graph.is_isomorphic(_context(cli_config), other, cli_config.depth)
    return Output(verdict.value, {'verdict': verdict.value})


def cmd_catalog(cli_config):
    catalog = get_catalog()
    lines = [f"@{name}  {entry['spec']}  {entry.get('description', '')}".rstrip() for name, entry in catalog.items()]
    return Output("\n".join(lines), catalog)


# tables

def cmd_table_validate(cli_config):
    table, = _tables(cli_config, 1)
    problems = table_group.validate(table)
    if problems:
        return Output("\n".join(problems), {'valid': False, 'problems': problems}, status=1)
    return Output("ok", {'valid': True, 'problems': []})


def cmd_table_compose(cli_config):
    first, second = _tables(cli_config, 2)
    return _table_output(table_group.compose(first, second))


def cmd_table_invert(cli_config):
    table, = _tables(cli_config, 1)
    return _table_output(table_group.invert(table))


def cmd_table_to_pl(cli_config):
    table, = _tables(cli_config, 1)
    f = table_group.table_to_pl(table)
    return Output(pl_to_text(f), pl_to_json(f))


def cmd_table_eval(cli_config):
    table, = _tables(cli_config, 1)
    x = parse_number(_require(cli_config, 'x'))
    return _number_output(pl_eval(table_group.table_to_pl(table), x))


def cmd_table_identity(cli_config):
    return _table_output(table_group.identity_table(_context(cli_config)))


def cmd_table_random(cli_config):
    context = _context(cli_config)
    seed = _require(cli_config, 'seed')
    return _table_output(table_group.random_table(context, seed, cli_config.extra.get('size') or 1))


COMMANDS = {
    'expand': (cmd_expand, "greedy beta-expansion of x"),
    'xi': (cmd_xi, "quasi-greedy supremum sequence"),
    'classify': (cmd_classify, "SFT / sofic classification"),
    'words': (cmd_words, "admissible words of length n"),
    'kms': (cmd_kms, "KMS value of a follower projection"),
    'interval': (cmd_interval, "cylinder interval [l(w), r(w))"),
    'path-count': (cmd_path_count, "labeled paths of length n and admissible words"),
    'k0': (cmd_k0, "K_0 group"),
    'homology': (cmd_homology, "groupoid homology"),
    'graph': (cmd_graph, "labeled graph"),
    'matrices': (cmd_matrices, "matrices M, B, R, S, L"),
    'group-class': (cmd_group_class, "class of the topological full group"),
    'isomorphic': (cmd_isomorphic, "compare two topological full groups"),
    'catalog': (cmd_catalog, "named example contexts"),
}

TABLE_COMMANDS = {
    'validate': (cmd_table_validate, "check a table"),
    'compose': (cmd_table_compose, "compose two tables (second applied first)"),
    'invert': (cmd_table_invert, "inverse element"),
    'to-pl': (cmd_table_to_pl, "piecewise-linear realization"),
    'eval': (cmd_table_eval, "evaluate the realization at x"),
    'identity': (cmd_table_identity, "identity element"),
    'random': (cmd_table_random, "seeded random element"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument('--beta', help='beta-spec ("digits=1,1", "digits=3,(2)", "rational=3/2") or @name')
    common.add_argument('--depth', type=int, default=config.DEFAULT_DEPTH)
    common.add_argument('--format', dest='output_format', choices=config.OUTPUT_FORMATS, default='text')
    common.add_argument('--in', dest='inputs', action='append', default=[])
    common.add_argument('--out')
    common.add_argument('--x')
    common.add_argument('--n', type=int)
    common.add_argument('--word')
    common.add_argument('--seed', type=int)
    common.add_argument('--size', type=int)
    common.add_argument('--other')
    common.add_argument('--log-level')

    parser = _Parser(prog='betafull', description="Exact beta-expansions, beta-shifts and their full groups")
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)
    for name, (handler, help_text) in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=help_text).set_defaults(handler=handler)

    table = subparsers.add_parser('table', help="group elements as tables")
    table_commands = table.add_subparsers(dest='table_command', required=True, parser_class=_Parser)
    for name, (handler, help_text) in TABLE_COMMANDS.items():
        table_commands.add_parser(name, parents=[common], help=help_text).set_defaults(handler=handler)
    return parser


def _cli_config(args):
    extra = {name: getattr(args, name) for name in ('x', 'n', 'word', 'seed', 'size', 'other')}
    return CliConfig(
        beta=args.beta,
        depth=args.depth,
        output_format=args.output_format,
        inputs=list(args.inputs),
        output=args.out,
        extra=extra
    )


def _render(cli_config, output):
    if cli_config.output_format == 'json':
        return dumps(output.data)
    if cli_config.output_format == 'dot':
        if output.dot is None:
            raise UsageError("--format dot is only available for graph")
        return output.dot
    return output.text


def _emit(cli_config, text, stdout):
    if cli_config.output:
        with open(cli_config.output, 'w', encoding='utf-8') as f:
            f.write(text + "\n")
    else:
        stdout.write(text + "\n")


def run(argv=None, stdout=None, stderr=None):
    """
    Run one command

    Args:
        argv (list): arguments without the program name
        stdout, stderr: streams, default to the process streams

    Returns:
        int: 0 on success, 1 on domain errors, 2 on usage errors
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        stderr.write(f"betafull: {e}\n")
        return 2
    except SystemExit as e:
        # --help
        return 0 if not e.code else 2

    if args.log_level:
        level = getattr(logging, args.log_level.upper(), None)
        if not isinstance(level, int):
            stderr.write(f"betafull: unknown log level {args.log_level}\n")
            return 2
        logging.getLogger().setLevel(level)

    cli_config = _cli_config(args)
    if cli_config.depth < 1:
        stderr.write("betafull: --depth must be at least 1\n")
        return 2

    try:
        output = args.handler(cli_config)
        _emit(cli_config, _render(cli_config, output), stdout)
        return output.status
    except UsageError as e:
        stderr.write(f"betafull: {e}\n")
        return 2
    except BetaError as e:
        logger.error(f"Error running {args.command}: {str(e)}")
        if cli_config.output_format == 'json':
            stdout.write(dumps(e.to_dict()) + "\n")
        else:
            stderr.write(f"betafull: {e.code}: {e.message}\n")
        return 1
    except OSError as e:
        stderr.write(f"betafull: {str(e)}\n")
        return 2
