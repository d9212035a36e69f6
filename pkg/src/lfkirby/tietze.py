"""A standalone Tietze engine over string letters, used to cross-examine the Kirby shadow.

Letters are strings such as ``x3`` and ``Y1`` (capital = inverse).  Nothing
here reuses the word routines of the geometric side; the Smith form comes
from sympy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form


def inv_letter(a: str) -> str:
    return a.swapcase()


def inv_word(w: list[str]) -> list[str]:
    return [inv_letter(a) for a in reversed(w)]


def reduce_word(w: list[str]) -> list[str]:
    stack: list[str] = []
    for a in w:
        if stack and stack[-1] == inv_letter(a):
            stack.pop()
        else:
            stack.append(a)
    while len(stack) > 1 and stack[0] == inv_letter(stack[-1]):
        stack = stack[1:-1]
    return stack


def gen_of(a: str) -> str:
    return a.lower()


@dataclass
class TietzePresentation:
    generators: list[str]
    relators: dict[str, list[str]] = field(default_factory=dict)

    def slide(self, moving: str, over: str, i: int, j: int, sign: int, result: str):
        """Replace r_moving by r_moving . u r_over^sign u^-1 with u = r_moving[:i] r_over[:j]^-1."""
        rm, ro = self.relators[moving], self.relators[over]
        u = rm[:i] + inv_word(ro[:j])
        mid = ro if sign > 0 else inv_word(ro)
        del self.relators[moving]
        self.relators[result] = reduce_word(rm + u + mid + inv_word(u))

    def eliminate(self, gen: str, relator: str):
        r = self.relators[relator]
        where = [p for p, a in enumerate(r) if gen_of(a) == gen]
        if len(where) != 1:
            raise ValueError(f"{gen} occurs {len(where)} times in {relator}")
        p = where[0]
        rest = r[p + 1:] + r[:p]
        value = inv_word(rest) if r[p] == gen else rest
        del self.relators[relator]
        self.generators.remove(gen)
        for name, w in self.relators.items():
            out = []
            for a in w:
                if a == gen:
                    out.extend(value)
                elif a == inv_letter(gen):
                    out.extend(inv_word(value))
                else:
                    out.append(a)
            self.relators[name] = reduce_word(out)

    def abelian_invariants(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion coefficients > 1)."""
        n = len(self.generators)
        if n == 0:
            return 0, ()
        col = {g: k for k, g in enumerate(self.generators)}
        rows = []
        for w in self.relators.values():
            row = [0] * n
            for a in w:
                row[col[gen_of(a)]] += 1 if a.islower() else -1
            if any(row):
                rows.append(row)
        if not rows:
            return n, ()
        D = smith_normal_form(Matrix(rows), domain=ZZ)
        diag = [abs(int(D[k, k])) for k in range(min(D.shape)) if D[k, k] != 0]
        return n - len(diag), tuple(sorted(d for d in diag if d != 1))
