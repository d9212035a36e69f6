"""Combinatorial model of Sigma_g minus a disk: a base disk P with 2g bands.

The ends of the bands sit on the boundary of P in the counterclockwise order
``e+_{2i-1}, e+_{2i}, e-_{2i-1}, e-_{2i}`` for each genus block ``i``.  Bands are
untwisted, so the strand that is k-th counterclockwise at ``e+_j`` is k-th
clockwise at ``e-_j``.  A curve is drawn by its passage sequence (a cyclic
word, see :mod:`lfkirby.words`) plus, for each band, the order of the strands
crossing it; inside P every visit is a straight chord, so crossings are
exactly interleaved chord pairs.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .words import Word, canonical, cyclic_reduce, inverse, is_primitive


class InvalidParameter(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceModel:
    genus: int
    handle_count: int = field(init=False)
    attachment_order: tuple[tuple[int, int], ...] = field(init=False)
    dual_arc_labels: dict = field(init=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 1:
            raise InvalidParameter(f"genus must be a positive integer, got {self.genus!r}")
        order = []
        for i in range(self.genus):
            a, b = 2 * i + 1, 2 * i + 2
            order += [(a, +1), (b, +1), (a, -1), (b, -1)]
        labels = {}
        for i in range(1, self.genus + 1):
            labels[2 * i - 1] = f"alpha*{i}"
            labels[2 * i] = f"beta*{i}"
        object.__setattr__(self, "handle_count", 2 * self.genus)
        object.__setattr__(self, "attachment_order", tuple(order))
        object.__setattr__(self, "dual_arc_labels", labels)

    @property
    def n_slots(self) -> int:
        return 4 * self.genus

    def slot(self, handle: int, sign: int) -> int:
        i, r = divmod(handle - 1, 2)
        return 4 * i + r + (0 if sign > 0 else 2)

    def out_slot(self, letter: int) -> int:
        return self.slot(abs(letter), +1 if letter > 0 else -1)

    def in_slot(self, letter: int) -> int:
        return self.slot(abs(letter), -1 if letter > 0 else +1)

    def euler_characteristic(self) -> int:
        return 1 - self.handle_count

    def boundary_cycles(self) -> list[list[int]]:
        """Trace the boundary of the ribbon surface; returns the slot cycles."""
        partner = {}
        for h in range(1, self.handle_count + 1):
            p, m = self.slot(h, +1), self.slot(h, -1)
            partner[p], partner[m] = m, p
        n = self.n_slots
        seen, cycles = set(), []
        for s in range(n):
            if s in seen:
                continue
            cyc, t = [], s
            while t not in seen:
                seen.add(t)
                cyc.append(t)
                t = partner[(t + 1) % n]
            cycles.append(cyc)
        return cycles

    def boundary_word(self) -> Word:
        """Passage word of the boundary-parallel curve, read along the traced boundary."""
        slot_info = {self.slot(h, s): (h, s) for h in range(1, self.handle_count + 1) for s in (1, -1)}
        (cyc,) = self.boundary_cycles()
        word = []
        n = self.n_slots
        for t in cyc:
            h, s = slot_info[(t + 1) % n]
            word.append(h * s)
        return cyclic_reduce(word)


def build_surface(g: int) -> SurfaceModel:
    return SurfaceModel(g)


# ---------------------------------------------------------------------------
# intersection numbers by linked pairs of lifts (independent of any drawing)


def _ccw_between(n: int, a: int, b: int, x: int) -> bool:
    """Is slot x strictly inside the counterclockwise arc from a to b?"""
    return 0 < (x - a) % n < (b - a) % n


def linked_pairs(surface: SurfaceModel, w: Word, v: Word, same: bool = False) -> int:
    """Count linked pairs of lifts of two reduced cyclic words.

    Each maximal common segment (possibly a single vertex) whose ends leave on
    opposite sides contributes one crossing.  For ``same=True`` the words are
    the same curve and the count is of ordered pairs, so halve it for the
    self-intersection number.
    """
    n, m = len(w), len(v)
    if n == 0 or m == 0:
        return 0
    N = surface.n_slots
    out_s, in_s = surface.out_slot, surface.in_slot
    cap = n + m
    total = 0
    for vv, forward in ((v, True), (inverse(v), False)):
        for i in range(n):
            a_w = in_s(w[i - 1])
            for j in range(m):
                a_v = in_s(vv[j - 1])
                if a_w == a_v:
                    continue
                k = 0
                while k < cap and w[(i + k) % n] == vv[(j + k) % m]:
                    k += 1
                if k >= cap:
                    continue
                if k == 0:
                    if not forward:
                        continue
                    b_w, b_v = out_s(w[i]), out_s(vv[j])
                    if len({a_w, a_v, b_w, b_v}) < 4:
                        continue
                    if _ccw_between(N, a_w, b_w, a_v) != _ccw_between(N, a_w, b_w, b_v):
                        total += 1
                    continue
                e = out_s(w[i])
                side_start = _ccw_between(N, a_w, e, a_v)
                f = in_s(w[(i + k - 1) % n])
                b_w, b_v = out_s(w[(i + k) % n]), out_s(vv[(j + k) % m])
                side_end = _ccw_between(N, f, b_w, b_v)
                if side_start != side_end:
                    total += 1
    return total


def self_intersection(surface: SurfaceModel, w: Word) -> int:
    return linked_pairs(surface, w, w) // 2


# ---------------------------------------------------------------------------
# drawings: strand orders and chords


@dataclass(frozen=True)
class Strand:
    curve: int
    index: int  # position of the passage in the curve's word


def _agree(w: Word, p: int, v: Word, q: int, step: int, cap: int) -> int:
    """How many letters w and v agree on, read cyclically from p and q in direction step."""
    n, m = len(w), len(v)
    k = 0
    while k < 8 and k < cap:
        if w[(p + step * k) % n] != v[(q + step * k) % m]:
            return k
        k += 1
    if k == cap:
        return k
    # long shared run: compare unrolled copies by slices
    if step < 0:
        w, p, v, q = w[::-1], n - 1 - p, v[::-1], m - 1 - q
    a = (w[p % n:] + w[:p % n]) * (-(-cap // n))
    b = (v[q % m:] + v[:q % m]) * (-(-cap // m))
    lo, hi = k, cap
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if a[:mid] == b[:mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _strand_compare(surface: SurfaceModel, words: list[Word], band: int):
    """Comparator putting the rightmost strand (w.r.t. the + direction of the band) first.

    Two strands through a band share a corridor; if their ends leave on the
    same side the order is forced.  If the ends are linked they must cross
    once, and the crossing is put at the middle vertex of the corridor (ties
    on even-length corridors broken by the orientation-free least reading of
    the corridor word), so every band of the corridor agrees on where it is.
    """
    N = surface.n_slots
    out_s, in_s = surface.out_slot, surface.in_slot
    inverses = [inverse(w) for w in words]

    def oriented(st: Strand):
        w = words[st.curve]
        if w[st.index] == band:
            return w, st.index
        return inverses[st.curve], len(w) - 1 - st.index

    def cmp(s: Strand, t: Strand) -> int:
        ws, ps = oriented(s)
        wt, pt = oriented(t)
        ns, nt = len(ws), len(wt)
        cap = ns + nt
        fwd = back = None
        kf = kb = 0
        k = _agree(ws, ps + 1, wt, pt + 1, 1, cap)
        if k < cap:
            a, b = ws[(ps + k + 1) % ns], wt[(pt + k + 1) % nt]
            arr = in_s(ws[(ps + k) % ns])
            fwd = -1 if (out_s(a) - arr) % N < (out_s(b) - arr) % N else 1
            kf = k
        k = _agree(ws, ps - 1, wt, pt - 1, -1, cap)
        if k < cap:
            a, b = ws[(ps - k - 1) % ns], wt[(pt - k - 1) % nt]
            dep = out_s(ws[(ps - k) % ns])
            back = -1 if (dep - in_s(a)) % N < (dep - in_s(b)) % N else 1
            kb = k
        if fwd is None and back is None:
            # parallel copies: the lower-numbered curve stays on the right of its own direction
            if s.curve != t.curve:
                first, sign = (s, -1) if s.curve < t.curve else (t, 1)
                return sign if words[first.curve][first.index] == band else -sign
            return (s.index > t.index) - (s.index < t.index)
        if fwd is None or back is None or fwd == back:
            return fwd if back is None or fwd == back else back
        length = kb + 1 + kf
        corridor = tuple(ws[(ps + k) % ns] for k in range(-kb, kf + 1))
        mid = length // 2
        if length % 2 and corridor > inverse(corridor):
            mid += 1
        return fwd if mid <= kb else back

    return cmp


def minimal_orders(surface: SurfaceModel, words: list[Word]) -> dict[int, list[Strand]]:
    """Strand order per band (listed counterclockwise at the + end) realizing minimal position."""
    orders: dict[int, list[Strand]] = {}
    for h in range(1, surface.handle_count + 1):
        strands = [Strand(c, i) for c, w in enumerate(words) for i, a in enumerate(w) if abs(a) == h]
        if len(strands) > 1:
            strands.sort(key=functools.cmp_to_key(_strand_compare(surface, words, h)))
        orders[h] = strands
    return orders


def chord_endpoints(surface: SurfaceModel, words: list[Word], orders: dict[int, list[Strand]]):
    """Per curve, the list of chords in P as (start, end) global boundary coordinates.

    Chord ``k`` of a curve runs from where passage ``k-1`` re-enters P to where
    passage ``k`` leaves it.  Coordinates are ``slot * M + position``.
    """
    M = 1 + max((len(v) for v in orders.values()), default=0)
    rank = {}
    for h, strands in orders.items():
        for r, st in enumerate(strands):
            rank[(st.curve, st.index)] = (r, len(strands))

    def leave(c, i):
        a = words[c][i]
        r, s = rank[(c, i)]
        return surface.out_slot(a) * M + (r if a > 0 else s - 1 - r)

    def enter(c, i):
        a = words[c][i]
        r, s = rank[(c, i)]
        return surface.in_slot(a) * M + (s - 1 - r if a > 0 else r)

    chords = []
    for c, w in enumerate(words):
        n = len(w)
        chords.append([(enter(c, (k - 1) % n), leave(c, k)) for k in range(n)])
    return chords, surface.n_slots * M


def _interleaved(total: int, a: int, b: int, c: int, d: int) -> bool:
    def inside(x):
        return 0 < (x - a) % total < (b - a) % total
    return inside(c) != inside(d)


def count_interleavings(chords_a, chords_b, total: int, same: bool = False) -> int:
    count = 0
    for i, (a, b) in enumerate(chords_a):
        rest = chords_b[i + 1:] if same else chords_b
        for c, d in rest:
            if _interleaved(total, a, b, c, d):
                count += 1
    return count


# ---------------------------------------------------------------------------
# homology


def homology_vector(surface: SurfaceModel, word: Word) -> tuple[int, ...]:
    """Coordinates in the basis ([alpha_1], [beta_1], ..., [alpha_g], [beta_g]).

    alpha_i is the x_i letter (passage H_{2i-1}+) and beta_i the y_i letter
    (passage H_{2i}-), matching the crossing-word alphabet.
    """
    vec = [0] * surface.handle_count
    for a in word:
        h = abs(a)
        s = 1 if a > 0 else -1
        vec[h - 1] += s if h % 2 else -s
    return tuple(vec)


def pairing(u, v) -> int:
    """Standard symplectic form with <alpha_i, beta_i> = +1."""
    total = 0
    for i in range(0, len(u), 2):
        total += u[i] * v[i + 1] - u[i + 1] * v[i]
    return total


def simple_curves(surface: SurfaceModel, max_len: int) -> list[Word]:
    """Unoriented simple closed curves with reduced words of length <= max_len, one word each."""
    g = surface.handle_count
    letters = [s * h for h in range(1, g + 1) for s in (1, -1)]
    found = set()

    def grow(w):
        if w and len(cyclic_reduce(w)) == len(w):
            c = canonical(w)
            if c not in found and is_primitive(w) and self_intersection(surface, w) == 0:
                found.add(c)
        if len(w) == max_len:
            return
        for a in letters:
            if not w or a != -w[-1]:
                grow(w + (a,))

    grow(())
    return sorted(found, key=lambda w: (len(w), w))
