"""Arrangements: named curves on the surface model plus strand orders in the bands.

An arrangement is the single source of truth for a multicurve diagram.  Each
curve is a cyclic passage word; each band carries the order of all strands
through it, listed counterclockwise at the ``e+`` end.  Chords in the base
disk follow from that data, and a crossing is an interleaved pair of chords.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .surface import (
    Strand,
    SurfaceModel,
    chord_endpoints,
    count_interleavings,
    homology_vector,
    minimal_orders,
    pairing,
)
from .words import Word, canonical, cyclic_reduce, to_string


class UnknownCurve(KeyError):
    pass


class DatasetFormatError(ValueError):
    pass


StrandRef = tuple[str, int]


@dataclass(frozen=True)
class Arrangement:
    surface: SurfaceModel
    curves: tuple[tuple[str, Word], ...] = ()
    orders: tuple[tuple[int, tuple[StrandRef, ...]], ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {name: w for name, w in self.curves})
        if len(self._index) != len(self.curves):
            raise ValueError("duplicate curve names")

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.curves]

    def word(self, name: str) -> Word:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownCurve(name) from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def order_map(self) -> dict[int, tuple[StrandRef, ...]]:
        return dict(self.orders)

    def subset(self, names: Iterable[str]) -> "Arrangement":
        keep = list(dict.fromkeys(names))
        for name in keep:
            self.word(name)
        chosen = set(keep)
        curves = tuple((n, self._index[n]) for n in keep)
        orders = tuple((h, tuple(s for s in strands if s[0] in chosen)) for h, strands in self.orders)
        return Arrangement(self.surface, curves, orders)

    def with_curves(self, updates: Mapping[str, Word]) -> "Arrangement":
        """Replace or add curves; strand orders are recomputed by reduce()."""
        merged = dict(self.curves)
        merged.update({k: tuple(v) for k, v in updates.items()})
        return reduce(Arrangement(self.surface, tuple(merged.items())))


def from_words(surface: SurfaceModel, curves: Mapping[str, Word] | Iterable[tuple[str, Word]]) -> Arrangement:
    items = curves.items() if isinstance(curves, Mapping) else curves
    return reduce(Arrangement(surface, tuple((n, tuple(w)) for n, w in items)))


# ---------------------------------------------------------------------------
# chords


def _orders_as_strands(arr: Arrangement) -> tuple[list[Word], dict[int, list[Strand]]]:
    names = arr.names
    pos = {n: i for i, n in enumerate(names)}
    words = [arr.word(n) for n in names]
    orders = {h: [Strand(pos[n], i) for n, i in strands] for h, strands in arr.orders}
    for h in range(1, arr.surface.handle_count + 1):
        orders.setdefault(h, [])
    return words, orders


def chords(arr: Arrangement):
    """Per curve name, its chords in P as pairs of boundary coordinates, plus the circumference."""
    words, orders = _orders_as_strands(arr)
    per_curve, total = chord_endpoints(arr.surface, words, orders)
    return dict(zip(arr.names, per_curve)), total


def total_crossings(arr: Arrangement) -> int:
    ch, total = chords(arr)
    names = arr.names
    count = 0
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            count += count_interleavings(ch[a], ch[b], total)
    return count


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failures: tuple[tuple[str, str], ...] = ()

    def __bool__(self):
        return self.ok

    @staticmethod
    def collect(failures) -> "Verdict":
        failures = tuple(failures)
        return Verdict(not failures, failures)


def validate(arr: Arrangement) -> Verdict:
    """Check the arrangement invariants; the first violated one comes first in ``failures``."""
    failures = []
    nh = arr.surface.handle_count
    for name, w in arr.curves:
        if not w:
            failures.append(("nonempty", f"curve {name} has no passages"))
        for a in w:
            if not isinstance(a, int) or a == 0 or abs(a) > nh:
                failures.append(("passages", f"curve {name} uses unknown handle {a!r}"))
                break
    if failures:
        return Verdict.collect(failures)
    expected = {h: set() for h in range(1, nh + 1)}
    for name, w in arr.curves:
        for i, a in enumerate(w):
            expected[abs(a)].add((name, i))
    given = arr.order_map()
    for h in range(1, nh + 1):
        strands = given.get(h, ())
        if len(set(strands)) != len(strands) or set(strands) != expected[h]:
            missing = sorted(expected[h] - set(strands))
            extra = sorted(set(strands) - expected[h])
            failures.append(("strand-order", f"H{h}: missing {missing} extra {extra}"))
    if failures:
        return Verdict.collect(failures)
    ch, total = chords(arr)
    for name, w in arr.curves:
        k = count_interleavings(ch[name], ch[name], total, same=True)
        if k:
            failures.append(("embedded", f"curve {name} has {k} self-crossings"))
    return Verdict.collect(failures)


# ---------------------------------------------------------------------------
# reduction


def _remove_bigons(arr: Arrangement) -> Arrangement:
    """Cancel passages immediately undone through the same handle, tracking strand indices."""
    order = arr.order_map()
    new_curves = []
    renumber: dict[StrandRef, StrandRef | None] = {}
    for name, w in arr.curves:
        alive = list(range(len(w)))
        changed = True
        while changed and len(alive) > 1:
            changed = False
            m = len(alive)
            for k in range(m):
                i, j = alive[k], alive[(k + 1) % m]
                if w[j] == -w[i] and (m > 2 or k == 0):
                    for idx in sorted({k, (k + 1) % m}, reverse=True):
                        alive.pop(idx)
                    changed = True
                    break
        if len(alive) == 2 and w[alive[0]] == -w[alive[1]]:
            alive = []
        for new_i, old_i in enumerate(alive):
            renumber[(name, old_i)] = (name, new_i)
        new_curves.append((name, tuple(w[i] for i in alive)))
    new_orders = []
    for h, strands in sorted(order.items()):
        kept = tuple(renumber[s] for s in strands if renumber.get(s) is not None)
        new_orders.append((h, kept))
    return Arrangement(arr.surface, tuple(new_curves), tuple(new_orders))


def _descend(arr: Arrangement) -> Arrangement:
    """Adjacent strand swaps that strictly reduce the total crossing count, to a fixpoint."""
    current = arr
    best = total_crossings(current)
    improved = True
    while improved and best:
        improved = False
        order = current.order_map()
        for h in sorted(order):
            strands = list(order[h])
            for k in range(len(strands) - 1):
                trial = strands[:]
                trial[k], trial[k + 1] = trial[k + 1], trial[k]
                cand_orders = dict(order)
                cand_orders[h] = tuple(trial)
                cand = Arrangement(current.surface, current.curves, tuple(sorted(cand_orders.items())))
                if validate(cand).ok or not validate(current).ok:
                    t = total_crossings(cand)
                    if t < best:
                        current, best, improved = cand, t, True
                        order = current.order_map()
                        strands = list(order[h])
    return current


def corridor_orders(arr: Arrangement) -> Arrangement:
    """Strand orders from the corridor rule of :func:`lfkirby.surface.minimal_orders`."""
    names = arr.names
    words = [arr.word(n) for n in names]
    orders = minimal_orders(arr.surface, words)
    packed = tuple((h, tuple((names[s.curve], s.index) for s in strands)) for h, strands in sorted(orders.items()))
    return Arrangement(arr.surface, arr.curves, packed)


def reduce(arr: Arrangement, descend: bool = False) -> Arrangement:
    """Bigon removal on every curve, then strand orders with the least total crossing.

    Each pair of strands through a band is ordered by comparing the corridor
    they share, which decides on which side their crossing (if any) sits.
    ``descend=True`` also polishes with adjacent swaps; it never fires on the
    corridor orders in our tests but is kept as the local-move safety net.
    """
    bare = Arrangement(arr.surface, tuple((n, cyclic_reduce(w)) for n, w in arr.curves))
    out = corridor_orders(bare)
    if arr.orders and _orders_complete(arr):
        kept = _remove_bigons(arr)
        if [w for _, w in kept.curves] == [w for _, w in bare.curves] and validate(kept).ok:
            if total_crossings(kept) <= total_crossings(out):
                out = kept
    if descend:
        out = _descend(out)
    return out


def _orders_complete(arr: Arrangement) -> bool:
    seen = sum(len(s) for _, s in arr.orders)
    return seen == sum(len(w) for _, w in arr.curves)


# ---------------------------------------------------------------------------
# queries


def geometric_intersection(arr: Arrangement, c: str, d: str) -> int:
    """Interleaved chord pairs between c and d, drawn jointly in minimal position."""
    wc, wd = arr.word(c), arr.word(d)
    if c == d:
        return 0
    sub = reduce(Arrangement(arr.surface, (("c", wc), ("d", wd))))
    ch, total = chords(sub)
    return count_interleavings(ch["c"], ch["d"], total)


def self_crossings(arr: Arrangement, c: str) -> int:
    sub = reduce(Arrangement(arr.surface, (("c", arr.word(c)),)))
    ch, total = chords(sub)
    return count_interleavings(ch["c"], ch["c"], total, same=True)


@dataclass(frozen=True)
class HomologyClass:
    vector: tuple[int, ...]

    def pair(self, other: "HomologyClass") -> int:
        return pairing(self.vector, other.vector)

    def __add__(self, other):
        return HomologyClass(tuple(a + b for a, b in zip(self.vector, other.vector)))

    def __neg__(self):
        return HomologyClass(tuple(-a for a in self.vector))

    def is_zero(self) -> bool:
        return not any(self.vector)


def homology_class(arr: Arrangement, c: str) -> HomologyClass:
    return HomologyClass(homology_vector(arr.surface, arr.word(c)))


def crossing_word(arr: Arrangement, c: str) -> tuple[str, ...]:
    """Cyclically reduced word in x_i, y_i (capitals are inverses) read off the dual arcs."""
    w = cyclic_reduce(arr.word(c))
    return tuple(to_string(w).split()) if w else ()


def relator(arr: Arrangement, c: str) -> Word:
    return cyclic_reduce(arr.word(c))


def curves_equal(arr: Arrangement, c: str, d: str, battery: Iterable[str] = ()) -> bool:
    """Isotopy of unoriented curves: equal reduced cyclic words up to rotation and reversal.

    With a battery, equal curves are also checked to have the same intersection
    vector against it; a mismatch means the engine is inconsistent and raises.
    """
    same = canonical(arr.word(c)) == canonical(arr.word(d))
    if same:
        for b in battery:
            if geometric_intersection(arr, c, b) != geometric_intersection(arr, d, b):
                raise RuntimeError(f"{c} and {d} have equal words but differ against {b}")
    return same


# ---------------------------------------------------------------------------
# dataset text format

_TOKEN = re.compile(r"^H(\d+)([+-])$")
_STRAND = re.compile(r"^(\S+)\.(\d+)$")


def format_passages(w: Word) -> str:
    return " ".join(f"H{abs(a)}{'+' if a > 0 else '-'}" for a in w)


def parse_passages(text: str) -> Word:
    out = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise DatasetFormatError(f"bad passage token {tok!r}")
        h = int(m.group(1))
        out.append(h if m.group(2) == "+" else -h)
    return tuple(out)


def dumps(arr: Arrangement, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"surface genus={arr.surface.genus} boundary=1")
    for name, w in arr.curves:
        lines.append(f"curve {name}")
        lines.append(f"passages: {format_passages(w)}")
    for h, strands in arr.orders:
        if strands:
            lines.append(f"order H{h}: " + " ".join(f"{n}.{i}" for n, i in strands))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Arrangement:
    surface = None
    curves: list[tuple[str, Word]] = []
    pending: str | None = None
    orders: dict[int, tuple[StrandRef, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head.endswith(":"):
            head, rest = head[:-1], rest
        key = head.strip()
        rest = rest.strip()
        if key == "surface":
            fields = dict(kv.split("=", 1) for kv in rest.split())
            if set(fields) != {"genus", "boundary"} or fields["boundary"] != "1":
                raise DatasetFormatError(f"line {lineno}: unsupported surface header")
            surface = SurfaceModel(int(fields["genus"]))
        elif key == "curve":
            if pending is not None:
                raise DatasetFormatError(f"line {lineno}: curve {pending} has no passages")
            if not rest or len(rest.split()) != 1:
                raise DatasetFormatError(f"line {lineno}: bad curve name")
            pending = rest
        elif key == "passages":
            if pending is None:
                raise DatasetFormatError(f"line {lineno}: passages without a curve")
            curves.append((pending, parse_passages(rest)))
            pending = None
        elif key == "order":
            hname, _, strands = rest.partition(":")
            hname = hname.strip()
            if not hname.startswith("H") or not hname[1:].isdigit():
                raise DatasetFormatError(f"line {lineno}: bad handle {hname!r}")
            refs = []
            for tok in strands.split():
                m = _STRAND.match(tok)
                if not m:
                    raise DatasetFormatError(f"line {lineno}: bad strand {tok!r}")
                refs.append((m.group(1), int(m.group(2))))
            orders[int(hname[1:])] = tuple(refs)
        else:
            raise DatasetFormatError(f"line {lineno}: unknown key {key!r}")
    if surface is None:
        raise DatasetFormatError("missing surface header")
    if pending is not None:
        raise DatasetFormatError(f"curve {pending} has no passages")
    for h in range(1, surface.handle_count + 1):
        orders.setdefault(h, ())
    return Arrangement(surface, tuple(curves), tuple(sorted(orders.items())))
