"""Codeword sampling, erasure, and recovery.

Recovery solves the restricted parity system directly: for erased pattern E,
H|_E x = -H|_rest * known.  A pattern is recoverable exactly when H|_E has
full column rank, which for a maximally recoverable code happens exactly
when E has circuit rank at most h.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .errors import InconsistentWordError, NotCorrectableError
from .gridcode import GridCode, build_parity_matrix, cell_column
from .gridgraph import Pattern


@dataclass(frozen=True)
class Codeword:
    """Length-mn symbol sequence in parity-matrix column order, as encodings."""

    symbols: tuple[int, ...]


@dataclass(frozen=True)
class PartialWord:
    """A codeword with erased positions marked None."""

    symbols: tuple[int | None, ...]

    def erased_positions(self) -> list[int]:
        return [t for t, v in enumerate(self.symbols) if v is None]


def random_codeword(code: GridCode, seed: int) -> Codeword:
    """Uniform kernel sample of the parity matrix, deterministic in the seed."""
    sp = code.spec
    H = build_parity_matrix(code)
    basis = H.kernel_basis()
    rng = random.Random(seed)
    symbols = [0] * (code.m * code.n)
    for row in basis.rows:
        coeff = rng.randrange(sp.q)
        if coeff:
            for t, v in enumerate(row):
                if v:
                    symbols[t] = sp.add(symbols[t], sp.mul(coeff, v))
    return Codeword(tuple(symbols))


def erase(word: Codeword, pattern: Pattern) -> PartialWord:
    symbols: list[int | None] = list(word.symbols)
    for cell in pattern.cells:
        symbols[cell_column(pattern.n, cell)] = None
    return PartialWord(tuple(symbols))


def recover(code: GridCode, partial: PartialWord) -> Codeword:
    """The unique completion of a partial word to a codeword.

    Raises NotCorrectableError when the erased pattern is rank deficient and
    InconsistentWordError when the known symbols fit no codeword.
    """
    if len(partial.symbols) != code.m * code.n:
        raise ValueError("partial word length does not match the grid")
    sp = code.spec
    H = build_parity_matrix(code)
    erased = partial.erased_positions()
    if not erased:
        word = Codeword(tuple(v for v in partial.symbols))  # type: ignore[misc]
        if any(H.mul_vec(list(word.symbols))):
            raise InconsistentWordError("known symbols violate a parity check")
        return word
    sub = H.column_submatrix(erased)
    deficiency = len(erased) - sub.rank()
    if deficiency:
        raise NotCorrectableError(
            f"erased pattern is not correctable: {len(erased)} erasures, rank short by {deficiency}",
            deficiency=deficiency,
        )
    rhs = [0] * H.nrows
    for col, val in enumerate(partial.symbols):
        if val is not None and val:
            for r in range(H.nrows):
                hv = H.rows[r][col]
                if hv:
                    rhs[r] = sp.sub(rhs[r], sp.mul(hv, val))
    try:
        solution, unique = sub.solve(rhs)
    except ValueError as exc:
        raise InconsistentWordError("known symbols fit no codeword") from exc
    assert unique
    symbols = list(partial.symbols)
    for pos, val in zip(erased, solution):
        symbols[pos] = val
    return Codeword(tuple(symbols))  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# JSON interchange for words
# ---------------------------------------------------------------------------


def word_to_json_dict(word: Codeword | PartialWord) -> dict:
    return {"format": 1, "symbols": [v for v in word.symbols]}


def word_from_json_dict(data: dict) -> PartialWord:
    try:
        symbols = tuple(None if v is None else int(v) for v in data["symbols"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed word document: {exc}") from exc
    return PartialWord(symbols)


def load_word(path: str) -> PartialWord:
    with open(path, "r", encoding="utf-8") as fh:
        return word_from_json_dict(json.load(fh))


def save_word(word: Codeword | PartialWord, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(word_to_json_dict(word), fh, sort_keys=True, indent=2)
        fh.write("\n")
