"""Monodromy factorizations, the involution word W, the torus-knot monodromy and invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import arrangement as am
from .arrangement import Arrangement, Verdict, curves_equal, geometric_intersection, homology_class
from .mcg import (
    TwistWord,
    acts_trivially,
    boundary_power,
    homology_action,
    identity_matrix,
    standard_battery,
    twist_curve,
    word_automorphism,
    word_images,
)
from .smith import AbelianGroup, abelian_group


class ContractViolation(ValueError):
    pass


def genus_of(h: int, n: int) -> int:
    return 2 * h + n - 1


# ---------------------------------------------------------------------------
# datasets


def dataset_path(h: int, n: int) -> Path:
    return Path(str(resources.files("lfkirby") / "data" / f"gurtas_h{h}_n{n}.txt"))


def load_dataset(h: int, n: int, path: str | Path | None = None) -> Arrangement:
    """The shipped dataset; off the shipped grid the curves are constructed on the fly."""
    if h < 1 or n < 1:
        raise ValueError("h and n must be positive")
    p = Path(path) if path is not None else dataset_path(h, n)
    if p.exists():
        arr = am.loads(p.read_text())
    elif path is None:
        arr = construct_dataset(h, n)
    else:
        raise FileNotFoundError(f"no dataset at {p}")
    if arr.surface.genus != genus_of(h, n):
        raise ContractViolation(f"dataset genus {arr.surface.genus}, expected {genus_of(h, n)}")
    for name in dataset_names(h, n):
        if name not in arr:
            raise ContractViolation(f"dataset lacks curve {name}")
    return arr


def construct_dataset(h: int, n: int) -> Arrangement:
    from .construct import gurtas_curves
    from .surface import build_surface

    g, curves = gurtas_curves(h, n)
    return am.from_words(build_surface(g), [(k, curves[k]) for k in dataset_names(h, n)])


def dataset_names(h: int, n: int) -> list[str]:
    return (
        [f"a{k}" for k in range(1, 2 * h + 1)]
        + [f"c{i}" for i in range(1, 2 * n)]
        + [f"D{j}" for j in range(2 * h + 1)]
    )


# ---------------------------------------------------------------------------
# words


def gurtas_word(h: int, n: int, arr: Arrangement) -> TwistWord:
    """t_{c_{2n-2}} ... t_{c_1} t_{c_1} ... t_{c_{2n-2}} t_{D_0} ... t_{D_{2h}} t_{c_{2n-1}}."""
    for name in dataset_names(h, n):
        arr.word(name)
    names = [f"c{i}" for i in range(2 * n - 2, 0, -1)]
    names += [f"c{i}" for i in range(1, 2 * n - 1)]
    names += [f"D{j}" for j in range(2 * h + 1)]
    names.append(f"c{2 * n - 1}")
    return TwistWord.positive(names)


def torus_knot_monodromy(h: int, arr: Arrangement) -> TwistWord:
    """t_{a_{2h}}^{-1} ... t_{a_1}^{-1}."""
    for k in range(1, 2 * h + 1):
        arr.word(f"a{k}")
    return TwistWord(tuple((f"a{k}", -1) for k in range(2 * h, 0, -1)))


# ---------------------------------------------------------------------------
# Alexander polynomial oracle


def charpoly(M: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients (leading first) of det(tI - M), by Faddeev-LeVerrier in exact arithmetic."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk = A (M_{k-1} + c_{k-1} I)
        prev = [[Mk[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(A[i][l] * prev[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(Mk[i][i] for i in range(n)) / k)
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("non-integral characteristic polynomial")
    return [int(c) for c in coeffs]


def poly_mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def alexander_expected(h: int) -> list[int]:
    """(t^{2h+1} + 1)/(t + 1) = t^{2h} - t^{2h-1} + ... + 1."""
    return [(-1) ** k for k in range(2 * h + 1)]


def torus_block_charpoly(h: int, arr: Arrangement) -> list[int]:
    M = homology_action(arr, torus_knot_monodromy(h, arr))
    block = [row[: 2 * h] for row in M[: 2 * h]]
    # the block must be invariant: the chain lives in the first 2h coordinates
    for k in range(1, 2 * h + 1):
        v = homology_class(arr, f"a{k}").vector
        if any(v[2 * h:]):
            raise ContractViolation(f"a{k} leaves the torus-knot block")
    return charpoly(block)


def alexander_check(h: int, arr: Arrangement) -> bool:
    p = torus_block_charpoly(h, arr)
    lhs = poly_mul(p, [1, 1])
    rhs = [1] + [0] * (2 * h) + [1]
    return lhs == rhs or lhs == [-x for x in rhs]


# ---------------------------------------------------------------------------
# the dataset contract


def check_contract(h: int, n: int, arr: Arrangement, relation: bool = True) -> Verdict:
    """Items (a)-(e) plus the chain shape of the a_k.  ``relation=False`` skips (d)."""
    fails = []
    v = am.validate(arr)
    if not v.ok:
        return v
    A = [f"a{k}" for k in range(1, 2 * h + 1)]
    C = [f"c{i}" for i in range(1, 2 * n)]
    D = [f"D{j}" for j in range(2 * h + 1)]
    for x in range(len(A)):
        for y in range(x + 1, len(A)):
            want = 1 if y == x + 1 else 0
            got = geometric_intersection(arr, A[x], A[y])
            if got != want:
                fails.append(("chain", f"i({A[x]},{A[y]}) = {got}, expected {want}"))
    for a in A:
        for c in C:
            if geometric_intersection(arr, a, c):
                fails.append(("a", f"{a} meets {c}"))
    for j in range(2 * h + 1):
        for l in range(j + 2, 2 * h + 1):
            if geometric_intersection(arr, D[j], A[l - 1]):
                fails.append(("b", f"D{j} meets a{l}"))
    for j in range(2 * h):
        td = twist_curve(arr.surface, arr.word(A[j]), arr.word(D[j]), 1)
        probe = arr.with_curves({"__td__": td})
        for l in range(1, j + 1):
            if geometric_intersection(probe, "__td__", A[l - 1]):
                fails.append(("c", f"t_a{j + 1}(D{j}) meets a{l}"))
    if relation:
        W = gurtas_word(h, n, arr)
        full, battery = standard_battery(arr)
        if not acts_trivially(full, W * W, battery):
            fails.append(("d", "W^2 moves a battery curve or acts on homology"))
    if not alexander_check(h, arr):
        fails.append(("e", f"torus block charpoly {torus_block_charpoly(h, arr)}"))
    return Verdict.collect(fails)


def w_squared_boundary_power(h: int, n: int, arr: Arrangement) -> int | None:
    """W^2 as a power of the boundary twist, seen on pi_1 with a boundary basepoint."""
    W = gurtas_word(h, n, arr)
    return boundary_power(arr.surface, word_automorphism(arr, W * W))


# ---------------------------------------------------------------------------
# factorizations


@dataclass(frozen=True)
class Factorization:
    """Vanishing cycles v_1..v_m (v_1 acts first) over a disk or a sphere."""

    genus: int
    cycles: tuple[str, ...]
    base: str
    arrangement: Arrangement = field(compare=False, repr=False)

    def __post_init__(self):
        if self.base not in ("disk", "sphere"):
            raise ValueError("base must be disk or sphere")

    @property
    def m(self) -> int:
        return len(self.cycles)

    def monodromy(self) -> TwistWord:
        return TwistWord.positive(reversed(self.cycles))

    def dumps(self) -> str:
        return f"base={self.base} genus={self.genus}\n" + str(self.monodromy()) + "\n"

    @staticmethod
    def loads(text: str, arrangement: Arrangement) -> "Factorization":
        from .mcg import parse_twist_word

        head, _, body = text.strip().partition("\n")
        fields = dict(kv.split("=", 1) for kv in head.split())
        w = parse_twist_word(body)
        if any(e != 1 for _, e in w.letters):
            raise ValueError("vanishing cycles carry right-handed twists only")
        return Factorization(int(fields["genus"]), tuple(n for n, _ in reversed(w.letters)), fields["base"], arrangement)


def _essential(arr: Arrangement, name: str) -> bool:
    # separating curves (c_1 when n = 1) are certified by meeting some other curve
    if not homology_class(arr, name).is_zero():
        return True
    return any(geometric_intersection(arr, name, b) for b in arr.names if b != name)


def check_factorization(f: Factorization, closure: bool = True) -> Verdict:
    fails = []
    if f.m < 1:
        fails.append(("nonempty", "no vanishing cycles"))
    arr, battery = standard_battery(f.arrangement)
    for name in dict.fromkeys(f.cycles):
        if not _essential(arr, name):
            fails.append(("essential", name))
    if closure and f.base == "sphere" and not acts_trivially(arr, f.monodromy(), battery):
        fails.append(("closure", "total monodromy is not trivial on the battery"))
    return Verdict.collect(fails)


def phi_images(h: int, arr: Arrangement, names: Sequence[str], inverse: bool, tag: str) -> Arrangement:
    phi = torus_knot_monodromy(h, arr)
    if inverse:
        phi = phi.inverse()
    imgs = word_images(arr, phi, names)
    return arr.with_curves({f"{tag}({k})": v for k, v in imgs.items()})


def enk_factorization(h: int, n: int, arr: Arrangement, closure: bool = True) -> Factorization:
    """Cycles of (Phi_K)(W)^2 . W^2 over the sphere."""
    W = gurtas_word(h, n, arr)
    new = phi_images(h, arr, W.names(), inverse=False, tag="PhiK")
    phiW = TwistWord(tuple((f"PhiK({c})", e) for c, e in W.letters))
    word = phiW * phiW * W * W
    f = Factorization(genus_of(h, n), tuple(c for c, _ in reversed(word.letters)), "sphere", new)
    if closure:
        v = check_factorization(f)
        if not v.ok:
            raise ContractViolation(str(v.failures))
    return f


def w_prime(h: int, n: int, arr: Arrangement) -> tuple[Arrangement, TwistWord]:
    """(Phi_K^{-1})(W) written on named curves.

    Images of c_k are recognized as c_k again; Phi_K^{-1}(D_j) is stored as
    tD{j} for j < 2h and as Dp for j = 2h.
    """
    W = gurtas_word(h, n, arr)
    phi_inv = torus_knot_monodromy(h, arr).inverse()
    imgs = word_images(arr, phi_inv, W.names())
    probe = arr.with_curves({f"__img__{k}": v for k, v in imgs.items()})
    rename = {}
    new = {}
    for k in W.names():
        if k.startswith("c") and curves_equal(probe, k, f"__img__{k}"):
            rename[k] = k
        elif k.startswith("D"):
            j = int(k[1:])
            nm = f"tD{j}" if j < 2 * h else "Dp"
            rename[k] = nm
            new[nm] = imgs[k]
        else:
            rename[k] = f"PhiKinv({k})"
            new[rename[k]] = imgs[k]
    return arr.with_curves(new), TwistWord(tuple((rename[c], e) for c, e in W.letters))


def disk_piece_factorization(h: int, n: int, arr: Arrangement) -> Factorization:
    """Cycles of W . W' over the disk, W' = (Phi_K^{-1})(W)."""
    W = gurtas_word(h, n, arr)
    new, Wp = w_prime(h, n, arr)
    word = W * Wp
    return Factorization(genus_of(h, n), tuple(c for c, _ in reversed(word.letters)), "disk", new)


# ---------------------------------------------------------------------------
# Hurwitz moves


@dataclass(frozen=True)
class Rotate:
    k: int


@dataclass(frozen=True)
class Transpose:
    """Swap v_i and v_{i+1} (0-based i in cycle order)."""

    i: int


@dataclass(frozen=True)
class Conjugate:
    phi: TwistWord
    tag: str = "phi"


def hurwitz_move(f: Factorization, move) -> Factorization:
    """One isomorphism move.

    Rotate(k) moves the last k letters of the written word (the first k
    cycles) to the front; Transpose(i) replaces (v_i, v_{i+1}) by
    (t_{v_i}^{-1}(v_{i+1}), v_i); Conjugate(phi) replaces each v by phi(v).
    """
    cyc = list(f.cycles)
    arr = f.arrangement
    if isinstance(move, Rotate):
        if not cyc:
            return f
        k = move.k % len(cyc)
        return Factorization(f.genus, tuple(cyc[k:] + cyc[:k]), f.base, arr)
    if isinstance(move, Transpose):
        i = move.i
        if not 0 <= i < len(cyc) - 1:
            raise IndexError(f"transposition index {i} out of range")
        vi, vj = cyc[i], cyc[i + 1]
        img = twist_curve(arr.surface, arr.word(vi), arr.word(vj), -1)
        name = f"T-{vi}({vj})"
        arr = arr.with_curves({name: img})
        cyc[i], cyc[i + 1] = name, vi
        return Factorization(f.genus, tuple(cyc), f.base, arr)
    if isinstance(move, Conjugate):
        names = list(dict.fromkeys(cyc))
        imgs = word_images(arr, move.phi, names)
        arr = arr.with_curves({f"{move.tag}({k})": v for k, v in imgs.items()})
        return Factorization(f.genus, tuple(f"{move.tag}({c})" for c in cyc), f.base, arr)
    raise TypeError(f"unknown move {move!r}")


def hurwitz_moves(f: Factorization, moves) -> Factorization:
    if isinstance(moves, (Rotate, Transpose, Conjugate)):
        moves = [moves]
    for mv in moves:
        f = hurwitz_move(f, mv)
    return f


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class FibrationInvariants:
    chi: int
    h1: AbelianGroup
    relation_rows: tuple[tuple[int, ...], ...]


def fibration_invariants(f: Factorization) -> FibrationInvariants:
    g = f.genus
    chi = (2 if f.base == "sphere" else 1) * (2 - 2 * g) + f.m
    rows = tuple(homology_class(f.arrangement, c).vector for c in f.cycles)
    # the boundary relator prod [x_i, y_i] abelianizes to zero
    rows += ((0,) * (2 * g),)
    return FibrationInvariants(chi, abelian_group(rows, 2 * g), rows)


def total_homology(f: Factorization):
    return homology_action(f.arrangement, f.monodromy())


def move_conjugator(f: Factorization, move):
    """P with total_homology(hurwitz_move(f, move)) = P M P^{-1}, M the total before the move.

    Transpositions keep the total; a rotation conjugates it by the product of
    the cycles moved to the front, a global conjugation by the action of phi.
    """
    if isinstance(move, Transpose):
        return identity_matrix(2 * f.genus)
    if isinstance(move, Rotate):
        k = move.k % len(f.cycles) if f.cycles else 0
        return total_homology(Factorization(f.genus, f.cycles[:k], f.base, f.arrangement))
    if isinstance(move, Conjugate):
        return homology_action(f.arrangement, move.phi)
    raise TypeError(f"not a Hurwitz move: {move!r}")
