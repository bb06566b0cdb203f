"""Loader for line-oriented problem files.

    # comment
    independent t, x
    dependent u, v
    arbitrary p
    order 1
    lagrangian NAME = <expr>
    symmetry NAME { X[t] = <expr>, Y[u] = <expr>, C[t] = <expr> }
    gauge NAME { u <- <expr in p>, v <- <expr in p> }
    normal NAME { d(u;t,t) <- <expr> }
    current NAME { B[t] = <expr>, B[x] = <expr>, hint[t] = <expr> }
    discrete NAME { width = 1, L = <stencil expr>, var = u }
    dsymmetry NAME { Q = <stencil expr> }

Block items are separated by commas or newlines.  Missing symmetry and gauge
components default to zero.  ``hint`` components give an optional
first-kind part for triviality classification.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field

from .discrete import DiscreteLagrangian, DiscreteSymmetry
from .errors import DomainError, ParseError, VarCalcError
from .expr import JET, ZERO, JetSpace, LatticeSpace, parse
from .jet import Current, SymmetryCandidate
from .noether import GaugeFamily, NormalForm
from .variational import LinearDiffOp

KEYWORDS = (
    "independent", "dependent", "arbitrary", "order",
    "lagrangian", "symmetry", "gauge", "normal", "current", "discrete", "dsymmetry",
)
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INDEXED = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]$")


@dataclass
class _Piece:
    text: str
    offset: int


@dataclass
class _Statement:
    keyword: str
    name: str | None
    head: _Piece  # text after the keyword (and name)
    body: list | None  # block items, or None for one-line statements
    offset: int


_SINGULAR = {"symmetries": "symmetry", "dsymmetries": "dsymmetry"}


@dataclass
class ProblemFile:
    space: JetSpace | None
    lattice: LatticeSpace | None
    lagrangians: dict = field(default_factory=dict)
    symmetries: dict = field(default_factory=dict)
    gauges: dict = field(default_factory=dict)
    normals: dict = field(default_factory=dict)
    currents: dict = field(default_factory=dict)  # name -> (Current, hint Current or None)
    discretes: dict = field(default_factory=dict)
    dsymmetries: dict = field(default_factory=dict)

    def get(self, table: str, name: str):
        entries = getattr(self, table)
        if name not in entries:
            kind = _SINGULAR.get(table, table[:-1])
            known = ", ".join(sorted(entries)) or "none"
            raise ParseError(f"no {kind} named {name!r} (known: {known})")
        return entries[name]


class _Source:
    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def position(self, offset: int):
        line = bisect.bisect_right(self.line_starts, offset) - 1
        return line + 1, offset - self.line_starts[line] + 1

    def error(self, message, offset):
        line, col = self.position(offset)
        return ParseError(message, line, col)


def _strip_comments(text: str) -> str:
    # keep offsets stable by blanking comment characters
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)


def _split_items(body: str, offset: int, src: _Source):
    items = []
    depth = 0
    start = 0
    for i, ch in enumerate(body + "\n"):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise src.error(f"unbalanced {ch!r}", offset + i)
        elif depth == 0 and ch in ",\n":
            chunk = body[start:i]
            if chunk.strip():
                lead = len(chunk) - len(chunk.lstrip())
                items.append(_Piece(chunk.strip(), offset + start + lead))
            start = i + 1
    return items


def _statements(src: _Source):
    text = _strip_comments(src.text)
    pos = 0
    out = []
    while pos < len(text):
        m = re.compile(r"\s*").match(text, pos)
        pos = m.end()
        if pos >= len(text):
            break
        kw = _NAME.match(text, pos)
        if kw is None:
            raise src.error("expected a keyword", pos)
        keyword = kw.group()
        if keyword not in KEYWORDS:
            raise src.error(f"unknown keyword {keyword!r}", pos)
        start = pos
        pos = kw.end()
        eol = text.find("\n", pos)
        eol = len(text) if eol < 0 else eol
        brace = text.find("{", pos, eol)
        if brace < 0:
            out.append(_Statement(keyword, None, _Piece(text[pos:eol], pos), None, start))
            pos = eol
            continue
        close = text.find("}", brace)
        if close < 0:
            raise src.error("unterminated block", brace)
        head = text[pos:brace]
        body = _split_items(text[brace + 1:close], brace + 1, src)
        out.append(_Statement(keyword, None, _Piece(head, pos), body, start))
        pos = close + 1
        rest_eol = text.find("\n", pos)
        rest = text[pos: len(text) if rest_eol < 0 else rest_eol]
        if rest.strip():
            raise src.error("unexpected text after block", pos + len(rest) - len(rest.lstrip()))
    return out


def _names(piece: _Piece, src: _Source):
    names = [s.strip() for s in piece.text.split(",")]
    for name in names:
        if not _NAME.fullmatch(name):
            raise src.error(f"bad variable name {name!r}", piece.offset)
    return names


def _entry_name(st: _Statement, src: _Source) -> tuple:
    """Split 'NAME' or 'NAME = rest' from the statement head."""
    text = st.head.text
    lead = len(text) - len(text.lstrip())
    m = _NAME.match(text, lead)
    if m is None:
        raise src.error(f"{st.keyword} needs a name", st.head.offset + lead)
    return m.group(), _Piece(text[m.end():], st.head.offset + m.end())


def _keyed(piece: _Piece, sep: str, src: _Source):
    idx = piece.text.find(sep)
    if idx < 0:
        raise src.error(f"expected '{sep}'", piece.offset)
    key = piece.text[:idx].strip()
    rhs = piece.text[idx + len(sep):]
    lead = len(rhs) - len(rhs.lstrip())
    return key, _Piece(rhs.strip(), piece.offset + idx + len(sep) + lead)


def load_problem(text: str, max_order: int | None = None) -> ProblemFile:
    src = _Source(text)
    stmts = _statements(src)

    decl = {"independent": None, "dependent": None, "arbitrary": [], "order": None}
    for st in stmts:
        if st.keyword in decl:
            if decl[st.keyword] not in (None, []):
                raise src.error(f"duplicate {st.keyword} declaration", st.offset)
            if st.keyword == "order":
                value = st.head.text.strip()
                if not value.isdigit() or int(value) < 1:
                    raise src.error("order must be a positive integer", st.head.offset)
                decl["order"] = int(value)
            else:
                decl[st.keyword] = _names(st.head, src)
    if decl["dependent"] is None:
        raise ParseError("missing 'dependent' declaration", 1, 1)
    kappa = decl["order"] or 1

    def expr_in(space, piece, limit=None):
        line, col = src.position(piece.offset)
        if not piece.text:
            raise src.error("missing expression", piece.offset)
        return parse(piece.text, space, limit, line=line, col=col)

    space = None
    if decl["independent"] is not None:
        try:
            loose = JetSpace(decl["independent"], decl["dependent"], kappa, decl["arbitrary"], kappa + 16)
        except ValueError as exc:
            raise ParseError(str(exc), 1, 1) from None
        if max_order is None:
            sigma = 0
            for st in stmts:
                if st.keyword == "gauge":
                    for item in st.body:
                        _, rhs = _keyed(item, "<-", src)
                        e = expr_in(loose, rhs)
                        sigma = max([sigma] + [s.order for s in e.symbols() if s.kind == JET])
            max_order = kappa + sigma + 2
        space = loose.with_max_order(max_order)

    widths = []
    for st in stmts:
        if st.keyword == "discrete":
            for item in st.body or []:
                key, rhs = _keyed(item, "=", src)
                if key == "width":
                    if not rhs.text.isdigit():
                        raise src.error("width must be a positive integer", rhs.offset)
                    widths.append(int(rhs.text))
    lattice = None
    if any(st.keyword in ("discrete", "dsymmetry") for st in stmts):
        try:
            lattice = LatticeSpace(decl["dependent"], "n", max([4] + [2 * w + 2 for w in widths]))
        except ValueError as exc:
            raise ParseError(str(exc), 1, 1) from None

    prob = ProblemFile(space, lattice)
    seen = set()
    for st in stmts:
        if st.keyword in decl:
            continue
        name, rest = _entry_name(st, src)
        if name in seen:
            raise src.error(f"duplicate entry name {name!r}", st.offset)
        seen.add(name)
        needs_jets = st.keyword in ("lagrangian", "symmetry", "gauge", "normal", "current")
        if needs_jets and space is None:
            raise src.error(f"{st.keyword} needs an 'independent' declaration", st.offset)
        if st.keyword != "lagrangian" and st.body is None:
            raise src.error(f"{st.keyword} {name} needs a {{ ... }} block", st.offset)
        try:
            _load_entry(prob, st, name, rest, src, expr_in)
        except ParseError:
            raise
        except VarCalcError as exc:
            raise src.error(str(exc), st.offset) from None
    return prob


def _load_entry(prob, st, name, rest, src, expr_in):
    sp = prob.space
    if st.keyword == "lagrangian":
        key, rhs = _keyed(rest, "=", src)
        if key:
            raise src.error("expected 'lagrangian NAME = <expr>'", rest.offset)
        f = expr_in(sp, rhs, sp.order)
        if any(s.kind == JET and s.slot >= len(sp.fields) for s in f.symbols()):
            raise src.error("a Lagrangian may not depend on an arbitrary function", rhs.offset)
        prob.lagrangians[name] = f

    elif st.keyword == "symmetry":
        X = [ZERO] * sp.n
        Y = [ZERO] * len(sp.fields)
        C = [ZERO] * sp.n
        for item in st.body:
            key, rhs = _keyed(item, "=", src)
            m = _INDEXED.match(key)
            if m is None or m.group(1) not in ("X", "Y", "C"):
                raise src.error(f"expected X[..], Y[..] or C[..], found {key!r}", item.offset)
            which, target = m.groups()
            value = expr_in(sp, rhs)
            if which == "Y":
                if target not in sp.fields:
                    raise src.error(f"unknown dependent variable {target!r}", item.offset)
                Y[sp.fields.index(target)] = value
            else:
                if target not in sp.independent:
                    raise src.error(f"unknown independent variable {target!r}", item.offset)
                (X if which == "X" else C)[sp.independent.index(target)] = value
        prob.symmetries[name] = SymmetryCandidate(tuple(X), tuple(Y), sp, tuple(C))

    elif st.keyword == "gauge":
        variations = {}
        for item in st.body:
            key, rhs = _keyed(item, "<-", src)
            if key not in sp.fields:
                raise src.error(f"unknown dependent variable {key!r}", item.offset)
            variations[key] = (expr_in(sp, rhs), rhs)
        params = {
            s.name for e, _ in variations.values() for s in e.symbols()
            if s.kind == JET and s.slot >= len(sp.fields)
        }
        if len(params) > 1:
            raise src.error("a gauge family may use only one arbitrary function", st.offset)
        if not params and not sp.arbitrary:
            raise src.error("gauge families need an 'arbitrary' declaration", st.offset)
        param = params.pop() if params else sp.arbitrary[0]
        ops = []
        for var in sp.fields:
            if var in variations:
                e, rhs = variations[var]
                try:
                    ops.append(LinearDiffOp.from_expr(e, param, sp))
                except DomainError as exc:
                    raise src.error(str(exc), rhs.offset) from None
            else:
                ops.append(LinearDiffOp.scalar({}, sp))
        prob.gauges[name] = GaugeFamily(param, tuple(ops), sp)

    elif st.keyword == "normal":
        rules = []
        for item in st.body:
            key, rhs = _keyed(item, "<-", src)
            lead = expr_in(sp, _Piece(key, item.offset))
            items = lead.items()
            if len(items) != 1 or items[0][1] != 1 or len(items[0][0]) != 1 or items[0][0][0][1] != 1:
                raise src.error("the left side of a normal-form rule must be one jet coordinate", item.offset)
            sym = items[0][0][0][0]
            if sym.kind != JET:
                raise src.error("the left side of a normal-form rule must be one jet coordinate", item.offset)
            rules.append((sym, expr_in(sp, rhs)))
        prob.normals[name] = NormalForm(tuple(rules), sp)

    elif st.keyword == "current":
        B = [ZERO] * sp.n
        hint = None
        for item in st.body:
            key, rhs = _keyed(item, "=", src)
            m = _INDEXED.match(key)
            if m is None or m.group(1) not in ("B", "hint") or m.group(2) not in sp.independent:
                raise src.error(f"expected B[..] or hint[..] over an independent variable, found {key!r}", item.offset)
            lam = sp.independent.index(m.group(2))
            value = expr_in(sp, rhs)
            if m.group(1) == "B":
                B[lam] = value
            else:
                hint = hint or [ZERO] * sp.n
                hint[lam] = value
        prob.currents[name] = (Current(tuple(B), sp), None if hint is None else Current(tuple(hint), sp))

    elif st.keyword == "discrete":
        lat = prob.lattice
        fields_ = {}
        for item in st.body:
            key, rhs = _keyed(item, "=", src)
            if key not in ("width", "L", "var"):
                raise src.error(f"unknown discrete key {key!r}", item.offset)
            fields_[key] = rhs
        if "width" not in fields_ or "L" not in fields_:
            raise src.error("a discrete problem needs width and L", st.offset)
        var = fields_["var"].text if "var" in fields_ else lat.dependent[0]
        if var not in lat.dependent:
            raise src.error(f"unknown dependent variable {var!r}", fields_["var"].offset)
        L = expr_in(lat, fields_["L"])
        prob.discretes[name] = DiscreteLagrangian(int(fields_["width"].text), L, lat, lat.dependent.index(var))

    elif st.keyword == "dsymmetry":
        q = None
        for item in st.body:
            key, rhs = _keyed(item, "=", src)
            if key != "Q":
                raise src.error(f"expected Q = <expr>, found {key!r}", item.offset)
            q = expr_in(prob.lattice, rhs)
        if q is None:
            raise src.error("dsymmetry needs Q", st.offset)
        prob.dsymmetries[name] = DiscreteSymmetry(q)
