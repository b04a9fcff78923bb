"""
Finite presentations and invariants of sofic (and finite type) beta-shifts:
minimal projections, the labeled graph, its matrices, K-theory and the
Higman-Thompson classification of the topological full group.
"""
import logging

import sympy
from sympy import Matrix, Poly, ZZ, eye
from sympy.matrices.expressions import CompanionMatrix
from sympy.matrices.normalforms import smith_normal_form

from errors import InternalInvariantViolation, NotSFT, NotSofic, OutOfRange
from models import (
    Edge, GroupClass, K0Result, LabeledGraph, MatrixSet, Projection,
    ProjectionSystem, Verdict
)
from services.beta_shift import classify_shift, l_value, make_word, r_value

logger = logging.getLogger(__name__)

TRIVIAL_GROUP = K0Result('cyclic', order=1)


def _resolved_class(context, depth=None):
    shift_class = classify_shift(context, depth)
    if not shift_class.resolved:
        raise NotSofic(
            f"{context.spec} is not sofic up to depth {shift_class.depth}",
            spec=context.spec, depth=shift_class.depth
        )
    return shift_class


def _expansion(context, length):
    return [context.digit_of_one(i) for i in range(1, length + 1)]


def projection_system(context, depth=None):
    """
    The minimal projections E_i as value intervals (t_(i-1), t_i]

    Args:
        context: BetaContext resolving to SFT or sofic
        depth (int, optional): classification depth

    Returns:
        ProjectionSystem: values 0 = t_0 < ... < t_K = 1 and tagged intervals
    """
    shift_class = _resolved_class(context, depth)
    return context.memo(('projections', shift_class), lambda: _build_projections(context, shift_class))


def _build_projections(context, shift_class):
    if shift_class.is_sft:
        indices, zero_index = range(0, shift_class.k), shift_class.k
    else:
        indices, zero_index = range(0, shift_class.k_beta + 1), None

    ordered = sorted(((context.beta_n(j), j) for j in indices), key=lambda pair: pair[0])
    distinct = []
    for value, index in ordered:
        if distinct and distinct[-1][0] == value:
            continue
        distinct.append((value, index))

    values = [context.zero] + [value for value, _ in distinct]
    tags = [zero_index] + [index for _, index in distinct]
    projections = tuple(
        Projection(i, values[i - 1], values[i], tags[i], tags[i - 1])
        for i in range(1, len(values))
    )
    logger.debug(f"{context.spec}: {len(projections)} minimal projections, tags {tags}")
    return ProjectionSystem(tuple(values), projections)


def _image_edges(context, values, i, letter):
    """Targets j whose E_j lies in beta * E_i - letter, checking the image is a union of them"""
    size = len(values) - 1
    low = context.beta * values[i - 1] - letter
    high = context.beta * values[i] - letter
    if high <= 0 or low >= 1:
        return []

    targets = [j for j in range(1, size + 1) if low <= values[j - 1] and values[j] <= high]
    clipped_low, clipped_high = max(low, context.zero), min(high, context.one)
    if not targets or values[targets[0] - 1] != clipped_low or values[targets[-1]] != clipped_high:
        raise InternalInvariantViolation(
            f"Image of E_{i} under letter {letter} is not a union of minimal projections",
            spec=context.spec, vertex=i, letter=letter
        )
    return targets


def build_graph(context, depth=None):
    """
    The labeled graph: an edge i -> j labeled a when beta * E_i - a contains E_j

    Returns:
        LabeledGraph: left-resolving presentation on vertices 1..K
    """
    system = projection_system(context, depth)
    return context.memo(('graph', system.size), lambda: _build_graph(context, system))


def _build_graph(context, system):
    values = system.values
    vertices = list(range(1, system.size + 1))
    edges = [
        Edge(i, letter, j)
        for i in vertices
        for letter in range(context.alphabet_size)
        for j in _image_edges(context, values, i, letter)
    ]
    graph = LabeledGraph(vertices, edges)

    if not graph.is_left_resolving():
        raise InternalInvariantViolation(f"Graph of {context.spec} is not left-resolving", spec=context.spec)
    for vertex in vertices:
        if not graph.out_edges(vertex):
            raise InternalInvariantViolation(f"Vertex {vertex} of {context.spec} has no outgoing edge",
                                             spec=context.spec)
    logger.debug(f"{context.spec}: graph with {len(vertices)} vertices and {len(edges)} edges")
    return graph


def path_count(context, n):
    """Labeled paths of length n ending at vertex 1; equals the number of admissible words"""
    if n < 0:
        raise OutOfRange(f"Path length must be non-negative, got {n}", spec=context.spec)
    graph = build_graph(context)
    power = Matrix(graph.adjacency()) ** n
    return int(sum(power[i, 0] for i in range(len(graph.vertices))))


def eta_coefficients(context, depth=None):
    """
    Coefficients eta_1..eta_K with beta^K = eta_1 beta^(K-1) + ... + eta_K

    SFT: the digits of d(1, beta). Sofic: the digits of the truncation at
    k_beta + 1 corrected by the truncation at l.
    """
    shift_class = _resolved_class(context, depth)
    if shift_class.is_sft:
        return _expansion(context, shift_class.k)

    l, size = shift_class.l, shift_class.k_beta + 1
    xi = _expansion(context, size)
    eta = []
    for i in range(1, size + 1):
        value = xi[i - 1] + (1 if size - i == l else 0)
        shifted = i - (size - l)
        if 1 <= shifted <= l:
            value -= xi[shifted - 1]
        eta.append(value)
    return eta


def _companion(eta):
    t = sympy.Symbol('t')
    poly = Poly([1] + [-c for c in eta], t, domain=ZZ)
    return CompanionMatrix(poly).as_explicit()


def _as_rows(matrix):
    return [[int(matrix[r, c]) for c in range(matrix.cols)] for r in range(matrix.rows)]


def matrices(context, depth=None):
    """
    M, B, R, S and L of the presentation, with all identities checked

    Returns:
        MatrixSet: integer matrices, eta and the common det(I - .)
    """
    shift_class = _resolved_class(context, depth)
    graph = build_graph(context, depth)
    vertices, edges = graph.vertices, graph.edges

    M = Matrix(graph.adjacency())
    B = Matrix([[int(e.target == f.source) for f in edges] for e in edges])
    R = Matrix([[int(e.target == v) for v in vertices] for e in edges])
    S = Matrix([[int(f.source == v) for f in edges] for v in vertices])
    eta = eta_coefficients(context, depth)
    L = _companion(eta)

    if R * S != B or S * R != M:
        raise InternalInvariantViolation(f"Strong shift equivalence B = RS, M = SR fails for {context.spec}",
                                         spec=context.spec)

    expected = 1 - sum(eta)
    determinants = {
        'B': (eye(B.rows) - B).det(method='bareiss'),
        'M': (eye(M.rows) - M).det(method='bareiss'),
        'L': (eye(L.rows) - L).det(method='bareiss'),
    }
    for name, value in determinants.items():
        if value != expected:
            raise InternalInvariantViolation(
                f"det(I - {name}) = {value} differs from 1 - sum(eta) = {expected} for {context.spec}",
                spec=context.spec
            )

    if shift_class.is_sofic:
        xi = _expansion(context, shift_class.k_beta + 1)
        if sum(eta) != sum(xi[shift_class.l:]) + 1:
            raise InternalInvariantViolation(f"eta sum identity fails for {context.spec}", spec=context.spec)

    return MatrixSet(
        M=_as_rows(M), B=_as_rows(B), R=_as_rows(R), S=_as_rows(S), L=_as_rows(L),
        eta=list(eta), determinant=int(expected)
    )


def k0_group(context, depth=None):
    """
    K_0 of the beta-shift algebra

    Returns:
        K0Result: Cyclic(sum - 1) for SFT, Cyclic(sum of the period) for sofic, Z otherwise
    """
    shift_class = classify_shift(context, depth)
    if shift_class.is_sft:
        return K0Result('cyclic', order=sum(_expansion(context, shift_class.k)) - 1)
    if shift_class.is_sofic:
        xi = _expansion(context, shift_class.k_beta + 1)
        return K0Result('cyclic', order=sum(xi[shift_class.l:]))
    return K0Result('free', conditional=shift_class.certificate is None)


def k0_from_matrix(context, depth=None):
    """
    K_0 as the cokernel of I - M^T, via the Smith normal form

    Returns:
        tuple: (invariant factors > 1, order or None when infinite)
    """
    graph = build_graph(context, depth)
    M = Matrix(graph.adjacency())
    smith = smith_normal_form(eye(M.rows) - M.T, domain=ZZ)
    diagonal = [abs(int(smith[i, i])) for i in range(min(smith.shape))]
    factors = [d for d in diagonal if d != 1]
    order = None
    if 0 not in diagonal:
        order = 1
        for d in diagonal:
            order *= d
    return factors, order


def homology(context, depth=None):
    """(H_0, H_1, H_k for k >= 2) of the groupoid: K_0, then trivial groups"""
    return k0_group(context, depth), TRIVIAL_GROUP, TRIVIAL_GROUP


def group_class(context, depth=None):
    """
    Identify the topological full group

    Returns:
        GroupClass: V_n for SFT/sofic, NotHigmanThompson when non-periodicity
        is certified, Unknown(depth) otherwise
    """
    shift_class = classify_shift(context, depth)
    if shift_class.is_sft:
        n = sum(_expansion(context, shift_class.k))
    elif shift_class.is_sofic:
        xi = _expansion(context, shift_class.k_beta + 1)
        n = sum(xi[shift_class.l:]) + 1
    elif shift_class.certificate:
        return GroupClass('not_higman_thompson')
    else:
        return GroupClass('unknown', depth=shift_class.depth)

    k0 = k0_group(context, depth)
    if k0.order != n - 1:
        raise InternalInvariantViolation(f"V_{n} but K_0 has order {k0.order}", spec=context.spec)
    return GroupClass('higman_thompson', n=n)


def is_isomorphic(context_a, context_b, depth=None):
    """Compare the group classes of two contexts"""
    a, b = group_class(context_a, depth), group_class(context_b, depth)
    if a.kind == 'unknown' or b.kind == 'unknown':
        return Verdict.UNKNOWN
    if a.kind == 'higman_thompson' and b.kind == 'higman_thompson':
        return Verdict.YES if a.n == b.n else Verdict.NO
    if a.kind == 'higman_thompson' or b.kind == 'higman_thompson':
        return Verdict.NO
    # two non Higman-Thompson groups: nothing decides between them
    return Verdict.UNKNOWN


def recode_generators(context, depth=None):
    """
    Words eta_1..eta_(n-1)(i-1) recoding the full shift on sum(eta) letters

    Returns:
        list: Words whose cylinders tile [0, 1)
    """
    shift_class = classify_shift(context, depth)
    if not shift_class.is_sft:
        raise NotSFT(f"{context.spec} is not of finite type", spec=context.spec)

    eta = _expansion(context, shift_class.k)
    words = [
        make_word(context, tuple(eta[:n - 1]) + (i - 1,))
        for n in range(1, len(eta) + 1)
        for i in range(1, eta[n - 1] + 1)
    ]

    position = context.zero
    for word in sorted(words, key=lambda w: l_value(context, w)):
        if l_value(context, word) != position:
            raise InternalInvariantViolation(f"Generators of {context.spec} do not tile at {word}",
                                             spec=context.spec)
        position = r_value(context, word)
    if position != 1:
        raise InternalInvariantViolation(f"Generators of {context.spec} stop short of 1", spec=context.spec)
    return words
