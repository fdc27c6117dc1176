"""Free finitely generated graded chain complexes over F2[U].

Conventions, fixed package-wide:

* Gradings are absolute integers.  The differential lowers grading by
  exactly 1 and U has degree 0, so multiplication by any power of U
  preserves grading.
* Differential and chain-map entries are stored as ``d[(target, source)]``,
  the coefficient of ``target`` in the image of ``source``.  The text
  formats list the same data source-first (``d <source> <target> <poly>``).
* Everything is characteristic 2: no signs in duals, tensor products or
  mapping cones.

Complexes and chain maps verify their defining identities (d^2 = 0,
grading homogeneity, the chain relation) at construction time and are
treated as immutable afterwards.  Structural equality ignores names.

Derived generators are named deterministically: ``g*`` for the dual of
``g``, ``x.y`` for tensor pairs, ``g[1]`` for the shifted copy inside a
mapping cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (ComplexMismatch, DegreeMismatch, DifferentialNotSquareZero,
                     DuplicateGenerator, GradingViolation, NotAChainMap,
                     ParseError)
from .scalars import P0, P1, Poly

__all__ = [
    "GradedComplex", "ChainMap", "LaurentChain",
    "build_complex", "dual", "tensor", "cone", "direct_sum", "shift",
    "relabel", "compose", "identity_map", "zero_map", "scalar_map",
    "tensor_map", "map_add", "build_chain_map", "unit_complex",
    "parse_complex", "parse_chain_map", "complex_to_text", "map_to_text",
]

Entries = dict[tuple[str, str], Poly]


def _mat_mul(a: Mapping[tuple[str, str], Poly],
             b: Mapping[tuple[str, str], Poly]) -> Entries:
    """(a o b)[t, s] = sum_m a[t, m] * b[m, s] on sparse entry dicts."""
    by_source: dict[str, list[tuple[str, Poly]]] = {}
    for (t, m), p in a.items():
        by_source.setdefault(m, []).append((t, p))
    out: Entries = {}
    for (m, s), q in b.items():
        for t, p in by_source.get(m, ()):
            key = (t, s)
            acc = out.get(key, P0) + p * q
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return out


class LaurentChain:
    """F2-chain in C tensor F2[U, U^-1]: a finite set of (generator, exponent)
    terms.  Addition is symmetric difference."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[str, int]] = ()):
        self.terms = frozenset(terms)

    @classmethod
    def of(cls, *terms: tuple[str, int]) -> "LaurentChain":
        return cls(terms)

    @classmethod
    def zero(cls) -> "LaurentChain":
        return cls()

    def __add__(self, other: "LaurentChain") -> "LaurentChain":
        return LaurentChain(self.terms ^ other.terms)

    __sub__ = __add__

    def times_u(self, k: int) -> "LaurentChain":
        return LaurentChain((g, e + k) for g, e in self.terms)

    def negative_part(self) -> "LaurentChain":
        return LaurentChain((g, e) for g, e in self.terms if e < 0)

    def nonnegative_part(self) -> "LaurentChain":
        return LaurentChain((g, e) for g, e in self.terms if e >= 0)

    def coefficient(self, gen: str, exp: int) -> int:
        return 1 if (gen, exp) in self.terms else 0

    def min_exponent(self) -> int | None:
        return min((e for _, e in self.terms), default=None)

    def sorted_terms(self) -> list[tuple[str, int]]:
        return sorted(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentChain) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "LaurentChain()"
        body = " + ".join(f"U^{e}*{g}" if e else g for g, e in self.sorted_terms())
        return f"LaurentChain({body})"


@dataclass(frozen=True, eq=False)
class GradedComplex:
    name: str
    generators: tuple[str, ...]
    gradings: dict[str, int]
    d: Entries = field(default_factory=dict)

    # structural equality: names are labels, not data
    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GradedComplex)
                and self.generators == other.generators
                and self.gradings == other.gradings
                and self.d == other.d)

    __hash__ = None  # type: ignore[assignment]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def grading(self, gen: str) -> int:
        return self.gradings[gen]

    def index(self) -> dict[str, int]:
        return {g: i for i, g in enumerate(self.generators)}

    def entry(self, target: str, source: str) -> Poly:
        return self.d.get((target, source), P0)

    def boundary_of(self, source: str) -> dict[str, Poly]:
        return {t: p for (t, s), p in self.d.items() if s == source}

    def boundary_chain(self, chain: LaurentChain) -> LaurentChain:
        """Differential applied to a Laurent chain."""
        acc: set[tuple[str, int]] = set()
        cols: dict[str, list[tuple[str, Poly]]] = {}
        for (t, s), p in self.d.items():
            cols.setdefault(s, []).append((t, p))
        for g, e in chain.terms:
            for t, p in cols.get(g, ()):
                for k in p.exponents():
                    acc ^= {(t, e + k)}
        return LaurentChain(acc)

    def is_u_free(self) -> bool:
        return all(p.bits <= 1 for p in self.d.values())

    def __repr__(self) -> str:
        return f"GradedComplex({self.name!r}, rank={self.rank})"


def build_complex(name: str,
                  generators: Sequence[tuple[str, int]],
                  entries: Iterable[tuple[str, str, Poly | str]] = ()) -> GradedComplex:
    """Validated constructor.

    ``generators`` is an ordered list of (id, grading); ``entries`` lists
    differential coefficients as (source, target, polynomial) triples.
    """
    ids = tuple(g for g, _ in generators)
    seen = set()
    for g in ids:
        if g in seen:
            raise DuplicateGenerator(f"generator {g!r} declared twice")
        seen.add(g)
    gradings = {g: int(k) for g, k in generators}
    d: Entries = {}
    for s, t, p in entries:
        if s not in gradings:
            raise GradingViolation(f"unknown source generator {s!r}")
        if t not in gradings:
            raise GradingViolation(f"unknown target generator {t!r}")
        poly = Poly.parse(p) if isinstance(p, str) else p
        if not poly:
            continue
        key = (t, s)
        acc = d.get(key, P0) + poly
        if acc:
            d[key] = acc
        else:
            d.pop(key, None)
    cx = GradedComplex(name, ids, gradings, d)
    _validate_complex(cx)
    return cx


def _validate_complex(cx: GradedComplex) -> None:
    for (t, s), p in cx.d.items():
        if p.bits == 0:
            raise GradingViolation(f"stored zero entry d[{t},{s}]")
        if cx.gradings[t] != cx.gradings[s] - 1:
            raise GradingViolation(
                f"d[{t},{s}] nonzero but gr({t})={cx.gradings[t]} != "
                f"gr({s})-1={cx.gradings[s] - 1}")
    sq = _mat_mul(cx.d, cx.d)
    if sq:
        (t, s), p = sorted(sq.items())[0]
        raise DifferentialNotSquareZero(
            f"d^2[{t},{s}] = {p} on complex {cx.name!r}")


@dataclass(frozen=True, eq=False)
class ChainMap:
    name: str
    source: GradedComplex
    target: GradedComplex
    degree: int
    entries: Entries = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ChainMap)
                and self.source == other.source
                and self.target == other.target
                and self.degree == other.degree
                and self.entries == other.entries)

    __hash__ = None  # type: ignore[assignment]

    def entry(self, target: str, source: str) -> Poly:
        return self.entries.get((target, source), P0)

    def apply_chain(self, chain: LaurentChain) -> LaurentChain:
        acc: set[tuple[str, int]] = set()
        cols: dict[str, list[tuple[str, Poly]]] = {}
        for (t, s), p in self.entries.items():
            cols.setdefault(s, []).append((t, p))
        for g, e in chain.terms:
            for t, p in cols.get(g, ()):
                for k in p.exponents():
                    acc ^= {(t, e + k)}
        return LaurentChain(acc)

    def __repr__(self) -> str:
        return f"ChainMap({self.name!r}, degree={self.degree})"


def build_chain_map(name: str, source: GradedComplex, target: GradedComplex,
                    degree: int,
                    entries: Iterable[tuple[str, str, Poly | str]] = ()) -> ChainMap:
    """Validated constructor; entries are (source, target, polynomial)."""
    ent: Entries = {}
    for s, t, p in entries:
        if s not in source.gradings:
            raise GradingViolation(f"unknown source generator {s!r}")
        if t not in target.gradings:
            raise GradingViolation(f"unknown target generator {t!r}")
        poly = Poly.parse(p) if isinstance(p, str) else p
        if not poly:
            continue
        key = (t, s)
        acc = ent.get(key, P0) + poly
        if acc:
            ent[key] = acc
        else:
            ent.pop(key, None)
    fm = ChainMap(name, source, target, int(degree), ent)
    _validate_chain_map(fm)
    return fm


def _validate_chain_map(fm: ChainMap) -> None:
    for (t, s), p in fm.entries.items():
        if fm.target.gradings[t] != fm.source.gradings[s] + fm.degree:
            raise GradingViolation(
                f"entry f[{t},{s}] shifts grading by "
                f"{fm.target.gradings[t] - fm.source.gradings[s]}, "
                f"declared degree {fm.degree}")
    # chain relation d_target o f = f o d_source (characteristic 2: no signs
    # even in odd degree)
    left = _mat_mul(fm.target.d, fm.entries)
    right = _mat_mul(fm.entries, fm.source.d)
    if left != right:
        diff = {k: left.get(k, P0) + right.get(k, P0)
                for k in set(left) | set(right)}
        diff = {k: v for k, v in diff.items() if v}
        (t, s) = sorted(diff)[0]
        raise NotAChainMap(
            f"(d f + f d)[{t},{s}] = {diff[(t, s)]} for map {fm.name!r}")


# ---------------------------------------------------------------------------
# constructions


def dual(cx: GradedComplex) -> GradedComplex:
    """F2[U]-linear dual: generator g* in grading -gr(g), transposed d."""
    gens = [(g + "*", -cx.gradings[g]) for g in cx.generators]
    entries = [(t + "*", s + "*", p) for (t, s), p in cx.d.items()]
    return build_complex(f"dual({cx.name})", gens, entries)


def tensor(a: GradedComplex, b: GradedComplex) -> GradedComplex:
    """Tensor product over F2[U]; generator x.y in grading gr(x)+gr(y)."""
    gens = [(f"{x}.{y}", a.gradings[x] + b.gradings[y])
            for x in a.generators for y in b.generators]
    entries: list[tuple[str, str, Poly]] = []
    for x in a.generators:
        for y in b.generators:
            s = f"{x}.{y}"
            for (t, xs), p in a.d.items():
                if xs == x:
                    entries.append((s, f"{t}.{y}", p))
            for (t, ys), p in b.d.items():
                if ys == y:
                    entries.append((s, f"{x}.{t}", p))
    return build_complex(f"{a.name}(x){b.name}", gens, entries)


def tensor_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """f tensor g on the tensor complexes (characteristic 2: no Koszul signs)."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    entries = [(f"{sx}.{sy}", f"{tx}.{ty}", p * q)
               for (tx, sx), p in f.entries.items()
               for (ty, sy), q in g.entries.items()]
    return build_chain_map(f"{f.name}(x){g.name}", src, tgt,
                           f.degree + g.degree, entries)


def cone(f: ChainMap) -> GradedComplex:
    """Mapping cone: shifted source generators g[1] followed by target
    generators; differential (d_src, 0 / f, d_tgt)."""
    if f.degree != 0:
        raise DegreeMismatch(f"cone needs a degree-0 map, got {f.degree}")
    src, tgt = f.source, f.target
    gens = [(g + "[1]", src.gradings[g] + 1) for g in src.generators]
    gens += [(g, tgt.gradings[g]) for g in tgt.generators]
    entries: list[tuple[str, str, Poly]] = []
    entries += [(s + "[1]", t + "[1]", p) for (t, s), p in src.d.items()]
    entries += [(s, t, p) for (t, s), p in tgt.d.items()]
    entries += [(s + "[1]", t, p) for (t, s), p in f.entries.items()]
    return build_complex(f"cone({f.name})", gens, entries)


def direct_sum(a: GradedComplex, b: GradedComplex) -> GradedComplex:
    gens = [(g, a.gradings[g]) for g in a.generators]
    gens += [(g, b.gradings[g]) for g in b.generators]
    entries = [(s, t, p) for (t, s), p in a.d.items()]
    entries += [(s, t, p) for (t, s), p in b.d.items()]
    return build_complex(f"{a.name}(+){b.name}", gens, entries)


def shift(cx: GradedComplex, k: int) -> GradedComplex:
    return GradedComplex(f"{cx.name}[{k}]", cx.generators,
                         {g: d + k for g, d in cx.gradings.items()},
                         dict(cx.d))


def relabel(cx: GradedComplex, mapping: Mapping[str, str],
            name: str | None = None) -> GradedComplex:
    """Rename generators by a bijective mapping (ids absent from the
    mapping keep their names)."""
    ren = {g: mapping.get(g, g) for g in cx.generators}
    gens = [(ren[g], cx.gradings[g]) for g in cx.generators]
    entries = [(ren[s], ren[t], p) for (t, s), p in cx.d.items()]
    return build_complex(name or cx.name, gens, entries)


def unit_complex(name: str = "unit") -> GradedComplex:
    """One generator ``1`` in grading 0, zero differential."""
    return build_complex(name, [("1", 0)])


# ---------------------------------------------------------------------------
# chain-map algebra


def identity_map(cx: GradedComplex) -> ChainMap:
    return build_chain_map(f"id({cx.name})", cx, cx, 0,
                           [(g, g, P1) for g in cx.generators])


def zero_map(source: GradedComplex, target: GradedComplex | None = None,
             degree: int = 0) -> ChainMap:
    return build_chain_map("0", source, target or source, degree, [])


def scalar_map(cx: GradedComplex, p: Poly) -> ChainMap:
    """Multiplication by the polynomial p, as a degree-0 chain map."""
    return build_chain_map(f"({p})id", cx, cx, 0,
                           [(g, g, p) for g in cx.generators])


def compose(f: ChainMap, g: ChainMap) -> ChainMap:
    """f after g; requires structural equality g.target = f.source."""
    if g.target != f.source:
        raise ComplexMismatch(
            f"cannot compose {f.name!r} after {g.name!r}: middle complexes differ")
    entries = _mat_mul(f.entries, g.entries)
    fm = ChainMap(f"{f.name}o{g.name}", g.source, f.target,
                  f.degree + g.degree, entries)
    _validate_chain_map(fm)
    return fm


def map_add(f: ChainMap, g: ChainMap) -> ChainMap:
    if f.source != g.source or f.target != g.target:
        raise ComplexMismatch("map sum needs equal sources and targets")
    if f.degree != g.degree:
        raise DegreeMismatch(f"map sum needs equal degrees, got {f.degree} and {g.degree}")
    keys = set(f.entries) | set(g.entries)
    entries = {}
    for k in keys:
        acc = f.entries.get(k, P0) + g.entries.get(k, P0)
        if acc:
            entries[k] = acc
    fm = ChainMap(f"{f.name}+{g.name}", f.source, f.target, f.degree, entries)
    _validate_chain_map(fm)
    return fm


# ---------------------------------------------------------------------------
# text formats
#
# complex file:                      map file:
#     # comment                          map <name>
#     complex <name>                     source <complex-name>
#     gen <id> <grading>                 target <complex-name>
#     d <source> <target> <poly>         degree <int>
#                                        f <source> <target> <poly>


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def parse_complex(text: str) -> GradedComplex:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty complex file")
    ln, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "complex":
        raise ParseError("expected 'complex <name>'", line=ln, token=head)
    name = parts[1]
    gens: list[tuple[str, int]] = []
    entries: list[tuple[str, str, Poly]] = []
    for ln, line in lines[1:]:
        parts = line.split()
        if parts[0] == "gen":
            if len(parts) != 3:
                raise ParseError("expected 'gen <id> <grading>'", line=ln, token=line)
            try:
                k = int(parts[2])
            except ValueError:
                raise ParseError("grading must be an integer", line=ln,
                                 token=parts[2]) from None
            gens.append((parts[1], k))
        elif parts[0] == "d":
            if len(parts) < 4:
                raise ParseError("expected 'd <source> <target> <poly>'",
                                 line=ln, token=line)
            poly = Poly.parse(" ".join(parts[3:]).replace(" ", ""), line=ln)
            entries.append((parts[1], parts[2], poly))
        else:
            raise ParseError("unknown directive", line=ln, token=parts[0])
    return build_complex(name, gens, entries)


def parse_chain_map(text: str, source: GradedComplex,
                    target: GradedComplex) -> ChainMap:
    """Parse a map file against already-loaded source and target complexes.

    The declared source/target names must match the supplied complexes;
    binding is by argument, the names are a consistency check only.
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty map file")
    ln, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "map":
        raise ParseError("expected 'map <name>'", line=ln, token=head)
    name = parts[1]
    declared: dict[str, str] = {}
    degree: int | None = None
    entries: list[tuple[str, str, Poly]] = []
    for ln, line in lines[1:]:
        parts = line.split()
        if parts[0] in ("source", "target"):
            if len(parts) != 2:
                raise ParseError(f"expected '{parts[0]} <name>'", line=ln, token=line)
            declared[parts[0]] = parts[1]
        elif parts[0] == "degree":
            if len(parts) != 2:
                raise ParseError("expected 'degree <int>'", line=ln, token=line)
            try:
                degree = int(parts[1])
            except ValueError:
                raise ParseError("degree must be an integer", line=ln,
                                 token=parts[1]) from None
        elif parts[0] == "f":
            if len(parts) < 4:
                raise ParseError("expected 'f <source> <target> <poly>'",
                                 line=ln, token=line)
            poly = Poly.parse(" ".join(parts[3:]).replace(" ", ""), line=ln)
            entries.append((parts[1], parts[2], poly))
        else:
            raise ParseError("unknown directive", line=ln, token=parts[0])
    if degree is None:
        raise ParseError("map file missing 'degree'")
    if declared.get("source") is not None and declared["source"] != source.name:
        raise ComplexMismatch(
            f"map declares source {declared['source']!r} but was bound to "
            f"complex {source.name!r}")
    if declared.get("target") is not None and declared["target"] != target.name:
        raise ComplexMismatch(
            f"map declares target {declared['target']!r} but was bound to "
            f"complex {target.name!r}")
    return build_chain_map(name, source, target, degree, entries)


def complex_to_text(cx: GradedComplex) -> str:
    idx = cx.index()
    lines = [f"complex {cx.name}"]
    lines += [f"gen {g} {cx.gradings[g]}" for g in cx.generators]
    for (t, s), p in sorted(cx.d.items(), key=lambda kv: (idx[kv[0][1]], idx[kv[0][0]])):
        lines.append(f"d {s} {t} {p}")
    return "\n".join(lines) + "\n"


def map_to_text(fm: ChainMap) -> str:
    sidx = fm.source.index()
    tidx = fm.target.index()
    lines = [f"map {fm.name}",
             f"source {fm.source.name}",
             f"target {fm.target.name}",
             f"degree {fm.degree}"]
    for (t, s), p in sorted(fm.entries.items(), key=lambda kv: (sidx[kv[0][1]], tidx[kv[0][0]])):
        lines.append(f"f {s} {t} {p}")
    return "\n".join(lines) + "\n"
