"""Dehn twists on arrangements, twist words, and their homological shadow.

Two independent routes to a twist are implemented here.  Curve surgery
(:func:`twist_curve`) draws c and d jointly in minimal position and splices
|k| copies of c into d at each crossing.  The automorphism route
(:func:`twist_automorphism`) computes the induced map on pi_1 with basepoint
on the boundary, which also sees twists about the boundary; it is used to
certify relations in the mapping class group of the bordered surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .arrangement import Arrangement, curves_equal, homology_class, self_crossings
from .surface import SurfaceModel, chord_endpoints, minimal_orders, pairing
from .words import Word, commutator_product, cyclic_reduce, free_reduce, inverse


class NotEmbedded(ValueError):
    pass


# ---------------------------------------------------------------------------
# twist words


@dataclass(frozen=True)
class TwistWord:
    """Letters (curve name, exponent) written left to right; the rightmost acts first."""

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for name, e in self.letters:
            if e not in (1, -1):
                raise ValueError(f"exponent of {name} must be +1 or -1")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def __pow__(self, k: int) -> "TwistWord":
        if k < 0:
            return self.inverse() ** (-k)
        return TwistWord(self.letters * k)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((n, -e) for n, e in reversed(self.letters)))

    def names(self) -> list[str]:
        return list(dict.fromkeys(n for n, _ in self.letters))

    def __str__(self):
        return format_twist_word(self)

    @staticmethod
    def positive(names: Iterable[str]) -> "TwistWord":
        return TwistWord(tuple((n, 1) for n in names))


def format_twist_word(w: TwistWord) -> str:
    return " ".join(f"{n}^{'+1' if e > 0 else '-1'}" for n, e in w.letters)


def parse_twist_word(text: str) -> TwistWord:
    letters = []
    for tok in text.split():
        name, sep, exp = tok.rpartition("^")
        if not sep or exp not in ("+1", "-1", "1") or not name:
            raise ValueError(f"bad twist token {tok!r}")
        letters.append((name, -1 if exp == "-1" else 1))
    return TwistWord(tuple(letters))


# ---------------------------------------------------------------------------
# surgery route


def _splice(c: Word, j: int, e: int) -> list[int]:
    rot = c[j:] + c[:j]
    return list(rot * e) if e > 0 else list(inverse(rot) * (-e))


def twist_curve(surface: SurfaceModel, c: Word, d: Word, k: int = 1) -> Word:
    """Image of d under t_c^k by surgery.

    c and d are drawn jointly in minimal position.  Walking along a chord of
    d, each chord of c it crosses contributes |k| turns around c, entered from
    the crossing point; the direction follows the side c's chord comes from.
    With this choice a positive twist acts on homology by x -> x + <x,c> c.
    """
    if k == 0 or not c:
        return cyclic_reduce(d)
    words = [c, d]
    orders = minimal_orders(surface, words)
    ch, total = chord_endpoints(surface, words, orders)
    out: list[int] = []
    for i, (A, B) in enumerate(ch[1]):
        span = (B - A) % total
        hits = []
        for j, (p, q) in enumerate(ch[0]):
            ip = 0 < (p - A) % total < span
            iq = 0 < (q - A) % total < span
            if ip != iq:
                near = p if ip else q
                hits.append(((near - A) % total, j, -1 if ip else 1))
        hits.sort()
        for _, j, sign in hits:
            out.extend(_splice(c, j, sign * k))
        out.append(d[i])
    return cyclic_reduce(out)


def _check_embedded(arr: Arrangement, name: str):
    if self_crossings(arr, name):
        raise NotEmbedded(f"twist curve {name} is not embedded")


def dehn_twist(arr: Arrangement, c: str, k: int, targets: Sequence[str] | None = None) -> Arrangement:
    """Replace each target by its image under t_c^k; c itself is left alone."""
    if k == 0:
        raise ValueError("twist exponent must be nonzero")
    cw = arr.word(c)
    _check_embedded(arr, c)
    targets = [t for t in (arr.names if targets is None else targets) if t != c]
    updates = {t: twist_curve(arr.surface, cw, arr.word(t), k) for t in targets}
    return arr.with_curves(updates)


def word_images(arr: Arrangement, w: TwistWord, targets: Sequence[str]) -> dict[str, Word]:
    """Images of target curves under w, reduced after every letter."""
    for name in w.names():
        arr.word(name)
        _check_embedded(arr, name)
    out = {}
    for t in targets:
        d = arr.word(t)
        for name, e in reversed(w.letters):
            d = twist_curve(arr.surface, arr.word(name), d, e)
        out[t] = d
    return out


def apply_word(arr: Arrangement, w: TwistWord, targets: Sequence[str] | None = None) -> Arrangement:
    targets = list(arr.names if targets is None else targets)
    if not w.letters:
        for t in targets:
            arr.word(t)
        return arr
    return arr.with_curves(word_images(arr, w, targets))


# ---------------------------------------------------------------------------
# homology


Matrix = tuple[tuple[int, ...], ...]


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def symplectic_form(n: int) -> Matrix:
    J = [[0] * n for _ in range(n)]
    for i in range(0, n, 2):
        J[i][i + 1], J[i + 1][i] = 1, -1
    return tuple(map(tuple, J))


def is_symplectic(M: Matrix) -> bool:
    J = symplectic_form(len(M))
    Mt = tuple(zip(*M))
    return matmul(matmul(Mt, J), M) == J


def transvection(v: Sequence[int], e: int) -> Matrix:
    """Matrix of x -> x + e <x, v> v (columns are images of basis vectors)."""
    n = len(v)
    cols = []
    for col in range(n):
        x = [0] * n
        x[col] = 1
        p = pairing(x, v)
        cols.append([x[r] + e * p * v[r] for r in range(n)])
    return tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))


def homology_action(arr: Arrangement, w: TwistWord) -> Matrix:
    n = arr.surface.handle_count
    M = identity_matrix(n)
    for name, e in reversed(w.letters):
        M = matmul(transvection(homology_class(arr, name).vector, e), M)
    return M


def apply_matrix(M: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def matrix_inverse_symplectic(M: Matrix) -> Matrix:
    """M^{-1} = -J M^T J for symplectic M."""
    J = symplectic_form(len(M))
    Mt = tuple(zip(*M))
    P = matmul(matmul(J, Mt), J)
    return tuple(tuple(-x for x in row) for row in P)


# ---------------------------------------------------------------------------
# conjugation and triviality


def conjugate_word(arr: Arrangement, phi: TwistWord, V: TwistWord, tag: str = "phi") -> tuple[Arrangement, TwistWord]:
    """The word t_{phi(v_m)} ... t_{phi(v_1)}, with phi(v_i) added to the arrangement.

    Image curves are named ``tag(v)``; with an empty phi the word is returned as is.
    """
    if not phi.letters:
        return arr, V
    names = V.names()
    images = word_images(arr, phi, names)
    renamed = {f"{tag}({v})": w for v, w in images.items()}
    new_arr = arr.with_curves(renamed)
    return new_arr, TwistWord(tuple((f"{tag}({n})", e) for n, e in V.letters))


def standard_battery(arr: Arrangement) -> tuple[Arrangement, list[str]]:
    """Add the alpha_i- and beta_i-parallel curves; battery = those plus a_k and c_i present."""
    g = arr.surface.genus
    extra = {}
    for i in range(1, g + 1):
        extra[f"alpha{i}"] = (2 * i - 1,)
        extra[f"beta{i}"] = (-2 * i,)
    new = arr.with_curves({k: v for k, v in extra.items() if k not in arr})
    names = list(extra)
    names += [n for n in arr.names if n[0] in "ac" and n[1:].isdigit()]
    return new, names


def acts_trivially(arr: Arrangement, w: TwistWord, battery: Sequence[str]) -> bool:
    n = arr.surface.handle_count
    if homology_action(arr, w) != identity_matrix(n):
        return False
    images = word_images(arr, w, battery)
    probe = arr.with_curves({f"__img__{b}": v for b, v in images.items()})
    return all(curves_equal(probe, b, f"__img__{b}") for b in battery)


# ---------------------------------------------------------------------------
# automorphism route: action on pi_1 with a boundary basepoint


Automorphism = dict  # generator -> image word


def twist_automorphism(surface: SurfaceModel, c: Word, k: int = 1) -> Automorphism:
    """Action of t_c^k on the free generators, basepoint on the boundary before slot 0.

    Generator h runs from the basepoint along the boundary side of P to the
    + end of band h, through the band (as its outermost strand), and back.
    Its image collects a copy of c (rotated to start at the crossing) for each
    chord of c the two connecting arcs cross.
    """
    nb = surface.handle_count
    c = cyclic_reduce(c)
    orders = minimal_orders(surface, [c])
    rank = {st.index: (r, len(sts)) for sts in orders.values() for r, st in enumerate(sts)}
    M = 2 + max((len(v) for v in orders.values()), default=0)
    total = surface.n_slots * M

    def leave(i):
        a = c[i]
        r, s = rank[i]
        return surface.out_slot(a) * M + ((r + 1) if a > 0 else (s - r - 1))

    def enter(i):
        a = c[i]
        r, s = rank[i]
        return surface.in_slot(a) * M + ((s - r - 1) if a > 0 else (r + 1))

    n = len(c)
    cch = [(enter((j - 1) % n), leave(j)) for j in range(n)]
    base = total - 0.5

    def crossings(A, B):
        span = (B - A) % total
        hits = []
        for j, (p, q) in enumerate(cch):
            ip = 0 < (p - A) % total < span
            iq = 0 < (q - A) % total < span
            if ip != iq:
                near = p if ip else q
                hits.append(((near - A) % total, j, -1 if ip else 1))
        hits.sort()
        out = []
        for _, j, sign in hits:
            out.extend(_splice(c, j, sign * k))
        return out

    img = {}
    for h in range(1, nb + 1):
        size = len(orders[h])
        outp = surface.slot(h, 1) * M
        inp = surface.slot(h, -1) * M + size
        img[h] = free_reduce(crossings(base, outp) + [h] + crossings(inp, base))
    return img


def aut_apply(f: Automorphism, w: Sequence[int]) -> Word:
    out = []
    for a in w:
        out.extend(f[a] if a > 0 else inverse(f[-a]))
    return free_reduce(out)


def aut_compose(f: Automorphism, g: Automorphism) -> Automorphism:
    """f after g."""
    return {h: aut_apply(f, g[h]) for h in g}


def word_automorphism(arr: Arrangement, w: TwistWord) -> Automorphism:
    surface = arr.surface
    f = {h: (h,) for h in range(1, surface.handle_count + 1)}
    cache = {}
    for name, e in w.letters:
        key = (name, e)
        if key not in cache:
            cache[key] = twist_automorphism(surface, arr.word(name), e)
        f = aut_compose(f, cache[key])
    return f


def boundary_power(surface: SurfaceModel, f: Automorphism, bound: int = 4) -> int | None:
    """k with f = conjugation by the boundary loop to the k, if |k| <= bound."""
    d = commutator_product(surface.genus)
    for k in sorted(range(-bound, bound + 1), key=abs):
        dk = d * k if k >= 0 else inverse(d) * (-k)
        if all(f[h] == free_reduce(dk + (h,) + inverse(dk)) for h in f):
            return k
    return None
