"""Explicit curve data for the involution word, by a branched double cover of a ribbon graph.

The fiber Sigma_g^1 (g = 2h+n-1) is built as the double cover of a planar
orbifold picture branched at the points where the arcs below end.  The quotient
carries a ribbon graph with two vertices u, v and arcs A, B_0..B_{2h} from u to
v, plus a path q_1 - ... - q_{2n-2} - u of arcs C_i.  Every B_j changes sheet,
A and the C_i do not.  In the lift:

* D_j is the closed loop B_j (sheet 0) followed by B_j (sheet 1) backwards,
* c_{2n-1} is A lifted to both sheets, c_i likewise from C_i,
* a_k is B_{k-1} then B_k backwards on a fixed sheet.

The lifted graph is contracted along a spanning tree to a one-vertex fat
graph.  It has four boundary cycles; one is kept as the boundary of the fiber
and the other three are capped by disks (band deletion with the Tietze
substitution the capped face dictates).  The result is carried to the standard
model of :mod:`lfkirby.surface` by extracting commutator blocks.

The output is checked elsewhere, never trusted: see the dataset contract in
:mod:`lfkirby.fibration`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import Word, canonical_oriented, commutator_product, cyclic_reduce, free_reduce, inverse


@dataclass
class FatGraph:
    """One-vertex ribbon graph; band b joins slots (plus, minus) around the vertex."""

    n_slots: int
    bands: dict

    def __post_init__(self):
        self.handle_count = len(self.bands)
        self.genus = self.handle_count // 2
        if sorted(self.bands) != list(range(1, self.handle_count + 1)):
            raise ValueError("bands must be numbered 1..k")

    def slot(self, h, s):
        return self.bands[h][0 if s > 0 else 1]

    def out_slot(self, a):
        return self.slot(abs(a), 1 if a > 0 else -1)

    def in_slot(self, a):
        return self.slot(abs(a), -1 if a > 0 else 1)

    def faces(self) -> list[tuple[list[int], Word]]:
        partner, info = {}, {}
        for h, (p, m) in self.bands.items():
            partner[p], partner[m] = m, p
            info[p], info[m] = h, -h
        n = self.n_slots
        seen, out = set(), []
        for s in range(n):
            if s in seen:
                continue
            cyc, word, t = [], [], s
            while t not in seen:
                seen.add(t)
                cyc.append(t)
                word.append(info[(t + 1) % n])
                t = partner[(t + 1) % n]
            out.append((cyc, tuple(word)))
        return out


def ribbon_lift(qverts: dict, eps: dict) -> dict:
    """Double cover of a ribbon graph; darts are ((edge, sheet), end) with end 0 = tail.

    The lifted edge (e, s) leaves sheet s and arrives on sheet s + eps[e].
    """
    verts = {}
    for v, darts in qverts.items():
        lifted = []
        for s in (0, 1):
            for e, end in darts:
                lifted.append(((e, (s + eps[e]) % 2) if end == 1 else (e, s), end))
        verts[v] = lifted
    return verts


def contract_tree(verts: dict, tree_edges) -> tuple[FatGraph, dict]:
    """Contract a spanning tree; returns the fat graph and the edge -> band number map."""
    verts = {v: list(ds) for v, ds in verts.items()}
    where = {d: v for v, ds in verts.items() for d in ds}
    tree = list(tree_edges)
    while len(verts) > 1:
        for e in tree:
            a, b = where[(e, 0)], where[(e, 1)]
            if a != b:
                break
        else:
            raise ValueError("tree is not spanning")
        tree.remove(e)
        ca, cb = verts[a], verts.pop(b)
        i, j = ca.index((e, 0)), cb.index((e, 1))
        moved = cb[j + 1:] + cb[:j]
        verts[a] = ca[:i] + moved + ca[i + 1:]
        for d in moved:
            where[d] = a
    (cyc,) = verts.values()
    names = sorted({d[0] for d in cyc}, key=str)
    band = {e: i + 1 for i, e in enumerate(names)}
    pos = {d: i for i, d in enumerate(cyc)}
    return FatGraph(len(cyc), {band[e]: (pos[(e, 0)], pos[(e, 1)]) for e in names}), band


def path_word(band: dict, path) -> Word:
    return tuple(band[e] * s for e, s in path if e in band)


def cap_face(G: FatGraph, index: int, curves: dict) -> tuple[FatGraph, dict]:
    """Glue a disk to a boundary cycle by deleting one band on it.

    The deleted band must meet the face once; the face relation expresses its
    letter through the others, and curves are rewritten accordingly.
    """
    faces = G.faces()
    word = faces[index][1]
    elsewhere = {abs(a) for k, (_, w) in enumerate(faces) if k != index for a in w}
    for i, a in enumerate(word):
        if abs(a) in elsewhere and -a not in word:
            break
    else:
        raise ValueError("no band meets this face once")
    rest = word[i + 1:] + word[:i]
    e = abs(a)
    sub = inverse(rest) if a > 0 else rest
    p, m = G.bands[e]
    keep = [s for s in range(G.n_slots) if s not in (p, m)]
    ren = {s: i for i, s in enumerate(keep)}
    relabel, bands = {}, {}
    for h, (x, y) in G.bands.items():
        if h != e:
            relabel[h] = len(relabel) + 1
            bands[relabel[h]] = (ren[x], ren[y])

    def rewrite(w):
        out = []
        for b in w:
            seg = (sub if b > 0 else inverse(sub)) if abs(b) == e else (b,)
            out.extend(relabel[abs(x)] * (1 if x > 0 else -1) for x in seg)
        return cyclic_reduce(out)

    return FatGraph(len(keep), bands), {k: rewrite(w) for k, w in curves.items()}


def normalize(G: FatGraph, curves: dict) -> tuple[int, dict]:
    """Carry a one-face fat graph to the standard model; returns (genus, rewritten curves).

    Works on the face word: pick a letter a, a letter b linked with it, and
    apply Nielsen moves until the word starts with a b A B.  The composite
    substitution is applied to every curve.
    """
    (face,) = G.faces()
    w = list(face[1])
    expr = {h: (h,) for h in range(1, G.handle_count + 1)}

    def subst(x, rep):
        def tr(word):
            out = []
            for b in word:
                if b == x:
                    out.extend(rep)
                elif b == -x:
                    out.extend(inverse(rep))
                else:
                    out.append(b)
            return free_reduce(out)

        for k in expr:
            expr[k] = tr(expr[k])
        return tr

    done, blocks = 0, []
    while done < len(w):
        X = w[done:]
        a = X[0]
        if a < 0:
            w = list(subst(-a, (a,))(w))
            X = w[done:]
            a = X[0]
        ia = X.index(-a)
        for k in range(1, ia):
            b = X[k]
            if X.index(-b) > ia:
                break
        else:
            raise ValueError("face word has an unlinked letter")
        if b < 0:
            w = list(subst(-b, (b,))(w))
            X = w[done:]
            b = -b
        ib, ia, ib2 = X.index(b), X.index(-a), X.index(-b)
        P, Q, R = tuple(X[1:ib]), tuple(X[ib + 1:ia]), tuple(X[ia + 1:ib2])
        w = list(subst(a, (a,) + inverse(P))(w))
        w = list(subst(b, (b,) + inverse(Q + P))(w))
        T = R + Q + P
        w = list(subst(b, (b,) + T)(w))
        w = list(subst(a, (a,) + T)(w))
        w = list(subst(b, inverse(T) + (b,))(w))
        if tuple(w[done:done + 4]) != (a, b, -a, -b):
            raise AssertionError("block extraction failed")
        blocks.append((a, b))
        done += 4
    g = len(blocks)
    tostd = {}
    for i, (a, b) in enumerate(blocks):
        tostd[a], tostd[b] = 2 * i + 1, -(2 * i + 2)

    def std(word):
        return tuple(tostd[abs(x)] if x > 0 else -tostd[abs(x)] for x in word)

    if std(w) != commutator_product(g):
        raise AssertionError("normalized boundary is not the standard one")
    out = {}
    for k, cw in curves.items():
        full = []
        for x in cw:
            full.extend(expr[abs(x)] if x > 0 else inverse(expr[abs(x)]))
        out[k] = cyclic_reduce(std(full))
    return g, out


def gurtas_curves(h: int, n: int, sheet: int = 1, kept_face: int = 0) -> tuple[int, dict[str, Word]]:
    """Curves a_1..a_{2h}, c_1..c_{2n-1}, D_0..D_{2h} on the standard genus 2h+n-1 model."""
    if h < 1 or n < 1:
        raise ValueError("h and n must be positive")
    B = [f"B{j}" for j in range(2 * h + 1)]
    chain = [f"C{i}" for i in range(1, 2 * n - 1)]
    u = [("A", 0)] + [(b, 0) for b in reversed(B)]
    qverts = {}
    if n >= 2:
        u.append((chain[-1], 1))
        for i in range(1, 2 * n - 1):
            darts = [(chain[i - 2], 1)] if i > 1 else []
            darts.append((chain[i - 1], 0))
            qverts[f"q{i}"] = darts
    qverts["u"] = u
    qverts["v"] = [("A", 1)] + [(b, 1) for b in reversed(B)]
    eps = {"A": 0, **{c: 0 for c in chain}, **{b: 1 for b in B}}
    verts = ribbon_lift(qverts, eps)
    G, band = contract_tree(verts, [("A", 0)] + [(c, 0) for c in chain])

    def both_sheets(e):
        return path_word(band, [((e, 0), 1), ((e, 1), -1)])

    curves = {}
    for k in range(1, 2 * h + 1):
        curves[f"a{k}"] = path_word(band, [((B[k - 1], sheet), 1), ((B[k], sheet), -1)])
    for i, c in enumerate(chain):
        curves[f"c{i + 1}"] = both_sheets(c)
    curves[f"c{2 * n - 1}"] = both_sheets("A")
    for j, b in enumerate(B):
        curves[f"D{j}"] = both_sheets(b)

    faces = G.faces()
    if len(faces) != 4:
        raise AssertionError("lifted graph should have four boundary cycles")
    marker = "__face__"
    curves[marker] = faces[kept_face][1]
    for _ in range(3):
        keep = canonical_oriented(curves[marker])
        idx = next(k for k, (_, fw) in enumerate(G.faces()) if canonical_oriented(fw) != keep)
        G, curves = cap_face(G, idx, curves)
    del curves[marker]
    return normalize(G, curves)
