"""Kirby diagrams drawn on the fiber: dotted dual arcs, leveled 2-handles, slides, cancellations.

A diagram over the disk has one 0-handle, a 1-handle for each band H_b of the
surface model (drawn as the dotted dual arc alpha*_i or beta*_i), a 2-handle
along the boundary word, and one 2-handle per vanishing cycle.  A 2-handle is
recorded by the passage word of its attaching circle projected to the fiber;
after slides the projection may cross itself, the level keeping track of
over/under data.  Passing through a removed 1-handle is no longer visible, so
after a cancellation the other words are rewritten by the Tietze substitution
the canceling handle dictates.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from .fibration import Factorization
from .smith import AbelianGroup, abelian_group
from .surface import SurfaceModel
from .words import Word, commutator_product, cyclic_reduce, inverse, to_string


class KirbyError(ValueError):
    pass


@dataclass(frozen=True)
class TwoHandle:
    label: str
    word: Word
    level: int
    curve: str | None = None  # arrangement curve, for handles not yet slid


@dataclass(frozen=True)
class KirbyShadow:
    surface: SurfaceModel
    one_handles: tuple[int, ...]
    two_handles: tuple[TwoHandle, ...]
    boundary: str | None = "h_bd"

    def __post_init__(self):
        levels = [t.level for t in self.two_handles]
        if len(set(levels)) != len(levels):
            raise KirbyError("levels must be distinct")
        labels = [t.label for t in self.two_handles]
        if len(set(labels)) != len(labels):
            raise KirbyError("labels must be distinct")
        if self.boundary is not None:
            b = self.handle(self.boundary)
            if b.level != min(levels):
                raise KirbyError("the boundary handle must sit lowest")
        active = set(self.one_handles)
        for t in self.two_handles:
            if any(abs(a) not in active for a in t.word):
                raise KirbyError(f"{t.label} runs through a removed 1-handle")

    def handle(self, label: str) -> TwoHandle:
        for t in self.two_handles:
            if t.label == label:
                return t
        raise KirbyError(f"unknown 2-handle {label}")

    def labels(self) -> list[str]:
        return [t.label for t in self.two_handles]

    @property
    def chi(self) -> int:
        return 1 - len(self.one_handles) + len(self.two_handles)

    def arc_name(self, b: int) -> str:
        return self.surface.dual_arc_labels[b]


def handle_labels(cycles: Sequence[str]) -> list[str]:
    """h_name, with #k suffixes telling parallel copies of a repeated cycle apart."""
    total = {}
    for c in cycles:
        total[c] = total.get(c, 0) + 1
    seen = {}
    out = []
    for c in cycles:
        seen[c] = seen.get(c, 0) + 1
        out.append(f"h_{c}" + (f"#{seen[c]}" if total[c] > 1 else ""))
    return out


def build_kirby(f: Factorization) -> KirbyShadow:
    if f.base != "disk":
        raise KirbyError("Kirby shadows are built for factorizations over the disk")
    arr = f.arrangement
    S = arr.surface
    handles = [TwoHandle("h_bd", commutator_product(S.genus), 0)]
    for lvl, (label, c) in enumerate(zip(handle_labels(f.cycles), f.cycles), start=1):
        handles.append(TwoHandle(label, cyclic_reduce(arr.word(c)), lvl, c))
    return KirbyShadow(S, tuple(range(1, S.handle_count + 1)), tuple(handles))


# ---------------------------------------------------------------------------
# presentation shadow


@dataclass(frozen=True)
class PresentationShadow:
    generators: tuple[int, ...]
    relators: tuple[tuple[str, Word], ...]

    def abelianization(self) -> AbelianGroup:
        col = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for _, w in self.relators:
            row = [0] * len(col)
            for a in w:
                row[col[abs(a)]] += 1 if a > 0 else -1
            rows.append(row)
        return abelian_group(rows, len(col))

    def h1(self) -> AbelianGroup:
        return self.abelianization()


def presentation(k: KirbyShadow) -> PresentationShadow:
    return PresentationShadow(k.one_handles, tuple((t.label, t.word) for t in k.two_handles))


# ---------------------------------------------------------------------------
# slides


@dataclass(frozen=True)
class Band:
    """Band from chord i of the moving curve to chord j of the other, copy taken with sign."""

    i: int
    j: int
    sign: int


def band_sum(w1: Word, w2: Word, band: Band) -> Word:
    a = w1[band.i:] + w1[:band.i]
    b = w2[band.j:] + w2[:band.j]
    return cyclic_reduce(a + (b if band.sign > 0 else inverse(b)))


def band_word(w1: Word, w2: Word, band: Band) -> Word:
    """u with band_sum conjugate to w1 . u w2^{+-1} u^{-1}."""
    return w1[:band.i] + inverse(w2[:band.j])


def search_band(w1: Word, w2: Word) -> Band:
    """The band in P whose sum is shortest after reduction; ties by (i, j, sign)."""
    if not w1 or not w2:
        raise KirbyError("cannot slide along an empty curve")
    best = None
    for i in range(len(w1)):
        for sign in (1, -1):
            for j in range(len(w2)):
                band = Band(i, j, sign)
                key = (len(band_sum(w1, w2, band)), i, j, -sign)
                if best is None or key < best[0]:
                    best = (key, band)
    return best[1]


def handle_slide(k: KirbyShadow, moving: str, over: str, band: Band | None = None,
                 new_label: str | None = None) -> tuple[KirbyShadow, Band]:
    if moving == over:
        raise KirbyError("a handle cannot slide over itself")
    m, o = k.handle(moving), k.handle(over)
    if band is None:
        band = search_band(m.word, o.word)
    if not (0 <= band.i < len(m.word) and 0 <= band.j < len(o.word) and band.sign in (1, -1)):
        raise KirbyError("band does not join the two curves")
    new = TwoHandle(new_label or moving, band_sum(m.word, o.word, band), m.level, None)
    if new.label != moving and new.label in k.labels():
        raise KirbyError(f"label {new.label} already in use")
    hs = tuple(new if t.label == moving else t for t in k.two_handles)
    return replace(k, two_handles=hs), band


# ---------------------------------------------------------------------------
# cancellation


def passes(w: Word, b: int) -> int:
    return sum(1 for a in w if abs(a) == b)


def find_canceling_pairs(k: KirbyShadow) -> list[tuple[int, str]]:
    """(1-handle, 2-handle) pairs whose reduced curve runs through the dual arc once."""
    out = []
    for t in k.two_handles:
        w = cyclic_reduce(t.word)
        for b in k.one_handles:
            if passes(w, b) == 1:
                out.append((b, t.label))
    return out


def substitute(w: Word, b: int, sub: Word) -> Word:
    out = []
    for a in w:
        if a == b:
            out.extend(sub)
        elif a == -b:
            out.extend(inverse(sub))
        else:
            out.append(a)
    return cyclic_reduce(out)


def cancel(k: KirbyShadow, one: int, two: str) -> KirbyShadow:
    t = k.handle(two)
    w = cyclic_reduce(t.word)
    if one not in k.one_handles or passes(w, one) != 1:
        raise KirbyError(f"({k.arc_name(one) if one in k.surface.dual_arc_labels else one}, {two}) is not a canceling pair")
    if two == k.boundary:
        raise KirbyError("the boundary handle is not cancelled")
    i = next(p for p, a in enumerate(w) if abs(a) == one)
    rest = w[i + 1:] + w[:i]
    sub = inverse(rest) if w[i] > 0 else rest
    hs = tuple(replace(s, word=substitute(s.word, one, sub)) for s in k.two_handles if s.label != two)
    return replace(k, one_handles=tuple(b for b in k.one_handles if b != one), two_handles=hs)


# ---------------------------------------------------------------------------
# schedules and certificates


@dataclass(frozen=True)
class Slide:
    moving: str
    over: str
    result: str
    band: Band | None = None


@dataclass(frozen=True)
class Wave:
    """Cancellation hints in order: (dual arc named by the hand-drawn schedule, 2-handle label).

    The arc name is carried into the certificate as a note; the arc actually
    cancelled is the first active one the 2-handle runs through once.
    """

    name: str
    hints: tuple[tuple[str, str], ...]


def summary(k: KirbyShadow) -> dict:
    pres = presentation(k)
    h1 = pres.h1()
    digest = hashlib.sha256(
        json.dumps(sorted((lab, list(w)) for lab, w in pres.relators)).encode()
    ).hexdigest()
    return {
        "handles": [1, len(k.one_handles), len(k.two_handles)],
        "chi": k.chi,
        "h1": {"rank": h1.rank, "torsion": list(h1.torsion)},
        "generators": [k.arc_name(b) for b in k.one_handles],
        "relator_digest": digest,
    }


@dataclass
class MoveCertificate:
    initial: dict
    moves: list = field(default_factory=list)
    final: dict | None = None
    success: bool = False
    stalled: dict | None = None

    def to_json(self) -> str:
        return json.dumps(
            {"initial": self.initial, "moves": self.moves, "final": self.final,
             "success": self.success, "stalled": self.stalled},
            sort_keys=True, indent=1,
        )

    @staticmethod
    def from_json(text: str) -> "MoveCertificate":
        d = json.loads(text)
        return MoveCertificate(d["initial"], d["moves"], d["final"], d["success"], d["stalled"])


def _step_verdict(before: KirbyShadow, after: KirbyShadow, kind: str) -> dict:
    hb, ha = presentation(before).h1(), presentation(after).h1()
    return {"chi": before.chi == after.chi, "h1": hb == ha,
            "count": (len(after.one_handles), len(after.two_handles))
            == ((len(before.one_handles), len(before.two_handles)) if kind == "slide"
                else (len(before.one_handles) - 1, len(before.two_handles) - 1))}


def _choose(k: KirbyShadow, label: str) -> int | None:
    w = cyclic_reduce(k.handle(label).word)
    return next((b for b in k.one_handles if passes(w, b) == 1), None)


def _copies(k: KirbyShadow, label: str) -> list[str]:
    return [lab for lab in k.labels() if lab == label or lab.startswith(label + "#")]


def run_schedule(k: KirbyShadow, slides: Sequence[Slide], waves: Sequence[Wave],
                 budget: int | None = None) -> tuple[MoveCertificate, KirbyShadow]:
    """Execute slides, then cancellation waves with greedy reordering inside a wave.

    A hint naming a repeated cycle (h_c1) stands for any of its parallel copies.
    When a hint is not cancelable yet, later hints of the same wave are tried
    first; the wave stalls when no remaining hint can be cancelled.
    """
    cert = MoveCertificate(summary(k))
    steps = 0

    def log(kind, data, before, after):
        nonlocal steps
        steps += 1
        verdict = _step_verdict(before, after, kind)
        cert.moves.append({"kind": kind, **data, "verdict": verdict, "post": summary(after)})
        if not all(verdict.values()):
            raise KirbyError(f"step {steps} broke an invariant: {verdict}")

    try:
        for s in slides:
            before = k
            k, band = handle_slide(k, s.moving, s.over, s.band, s.result)
            log("slide", {"moving": s.moving, "over": s.over, "result": s.result,
                          "band": [band.i, band.j, band.sign]}, before, k)
        for wave in waves:
            pending = list(wave.hints)
            while pending:
                if budget is not None and steps >= budget:
                    raise KirbyError("step budget exhausted")
                for idx, (note, label) in enumerate(pending):
                    done = False
                    for lab in _copies(k, label):
                        one = _choose(k, lab)
                        if one is not None:
                            before = k
                            k = cancel(k, one, lab)
                            log("cancel", {"wave": wave.name, "one": k.surface.dual_arc_labels[one],
                                           "one_index": one, "two": lab,
                                           "hint_arc": note, "in_order": idx == 0}, before, k)
                            done = True
                            break
                    if done:
                        pending.pop(idx)
                        break
                else:
                    cert.stalled = {"wave": wave.name, "pending": [lab for _, lab in pending],
                                    "canceling_pairs": [[k.arc_name(b), lab] for b, lab in find_canceling_pairs(k)],
                                    "state": summary(k)}
                    break
            if cert.stalled:
                break
    except KirbyError as exc:
        cert.stalled = {"error": str(exc), "state": summary(k)}
    cert.final = summary(k)
    cert.success = cert.stalled is None and not k.one_handles
    return cert, k


def replay(k: KirbyShadow, cert: MoveCertificate) -> dict:
    """Re-execute the logged moves verbatim and return the final summary."""
    if summary(k) != cert.initial:
        raise KirbyError("certificate does not start from this diagram")
    for mv in cert.moves:
        if mv["kind"] == "slide":
            k, _ = handle_slide(k, mv["moving"], mv["over"], Band(*mv["band"]), mv["result"])
        elif mv["kind"] == "cancel":
            k = cancel(k, mv["one_index"], mv["two"])
        else:
            raise KirbyError(f"unknown move {mv['kind']}")
        if summary(k) != mv["post"]:
            raise KirbyError("replay diverged")
    return summary(k)


def relator_strings(k: KirbyShadow) -> dict[str, str]:
    return {t.label: to_string(t.word) for t in k.two_handles}
