"""Write ``f - g`` for two combs as a comb over the overlap pieces."""
from __future__ import annotations

from ..comb import DiracComb, build_comb
from ..errors import DimensionError


def difference_pieces(f: DiracComb, g: DiracComb) -> list[tuple[complex, object, str]]:
    """Nonzero pieces ``(coeff, set, origin)`` of ``f - g`` before merging.

    Pieces are ``(a_i - b_j) on A_i & B_j``, ``a_i on A_i - B`` and
    ``-b_j on B_j - A``, where A and B are the supports of f and g.  There
    are at most ``gamma_f gamma_g + gamma_f + gamma_g`` of them.
    """
    if f.grid != g.grid:
        raise DimensionError(f"{f.grid} vs {g.grid}")
    A, B = f.support, g.support
    pieces = []
    for i, (a, Ai) in enumerate(f.parts):
        for j, (b, Bj) in enumerate(g.parts):
            C = Ai & Bj
            if len(C) and a != b:
                pieces.append((a - b, C, f"A{i}&B{j}"))
    for i, (a, Ai) in enumerate(f.parts):
        C = Ai - B
        if len(C):
            pieces.append((a, C, f"A{i}-B"))
    for j, (b, Bj) in enumerate(g.parts):
        C = Bj - A
        if len(C):
            pieces.append((-b, C, f"B{j}-A"))
    return pieces


def difference_decomposition(f: DiracComb, g: DiracComb) -> DiracComb:
    """``h = f - g`` in normalized form.

    Normalization merges pieces that share a coefficient, so the complexity
    is at most the number of pieces returned by :func:`difference_pieces`.
    """
    pieces = difference_pieces(f, g)
    return build_comb(f.grid, [(c, s) for c, s, _ in pieces])
