"""Cyclic words in the free group pi_1(Sigma_g^1).

A letter is a nonzero integer: ``+b`` is a passage through the 1-handle
``H_b`` from its end ``e+_b`` to its end ``e-_b`` and ``-b`` the reverse.
Handles are numbered ``1..2g``; ``H_{2i-1}`` carries x_i (dual arc alpha*_i)
and ``H_{2i}`` carries y_i (dual arc beta*_i).
"""

from __future__ import annotations

from typing import Iterable, Sequence

Word = tuple[int, ...]


def inverse(word: Sequence[int]) -> Word:
    return tuple(-a for a in reversed(word))


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


def rotations(word: Sequence[int]):
    n = len(word)
    for k in range(n):
        yield tuple(word[k:]) + tuple(word[:k])


def canonical(word: Sequence[int]) -> Word:
    """Least rotation of the word or its inverse; names an unoriented free homotopy class."""
    w = cyclic_reduce(word)
    if not w:
        return ()
    return min(min(rotations(w)), min(rotations(inverse(w))))


def canonical_oriented(word: Sequence[int]) -> Word:
    w = cyclic_reduce(word)
    return min(rotations(w)) if w else ()


def is_primitive(word: Sequence[int]) -> bool:
    w = cyclic_reduce(word)
    n = len(w)
    if n == 0:
        return False
    for d in range(1, n):
        if n % d == 0 and w[:d] * (n // d) == w:
            return False
    return True


def letter_name(a: int) -> str:
    # H_{2i} is read against its + direction so that the boundary is prod [x_i, y_i]
    h = abs(a)
    positive = a > 0 if h % 2 else a < 0
    base = ("x" if h % 2 else "y") + str((h + 1) // 2)
    return base if positive else base.upper()


def to_string(word: Sequence[int]) -> str:
    return " ".join(letter_name(a) for a in word)


def parse_letter(tok: str) -> int:
    tok = tok.strip()
    kind = tok[0]
    idx = int(tok[1:])
    if kind not in "xXyY" or idx < 1:
        raise ValueError(f"bad letter {tok!r}")
    if kind in "xX":
        return 2 * idx - 1 if kind.islower() else 1 - 2 * idx
    return -2 * idx if kind.islower() else 2 * idx


def parse_word(text: str) -> Word:
    return tuple(parse_letter(t) for t in text.split())


def commutator_product(genus: int) -> Word:
    """prod_i [x_i, y_i] = x1 y1 X1 Y1 x2 y2 X2 Y2 ... as passages."""
    out: list[int] = []
    for i in range(genus):
        x, y = 2 * i + 1, -(2 * i + 2)
        out += [x, y, -x, -y]
    return tuple(out)
