"""Line-oriented text formats for languages, instances, operations,
equation systems and graphs.

Every format allows ``#`` comments and blank lines; tokens are separated
by whitespace.  Parsers report ``path:line:column`` on errors and the
``dump_*`` functions produce text the parsers read back unchanged.
"""
from __future__ import annotations

import os
import re
from pathlib import Path

from .core import DEFAULT_DOMAIN_CAP, ConstraintLanguage, Domain, Instance, Operation, Relation
from .errors import (
    DuplicateName,
    ElementOutOfDomain,
    InvalidArgument,
    ParseError,
    UnknownRelation,
    WMaxSolError,
)
from .reduce import EqnInstance, Equation, Graph

_TUPLE = re.compile(r"\(\s*([^()]*?)\s*\)")


class _Lines:
    """Non-empty lines with comments stripped, remembering positions."""

    def __init__(self, text: str, path=None):
        self.path = str(path) if path is not None else None
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0].rstrip()
            if body.strip():
                self.items.append((no, body))
        self.pos = 0

    def __iter__(self):
        return self

    def __next__(self):
        if self.pos >= len(self.items):
            raise StopIteration
        item = self.items[self.pos]
        self.pos += 1
        return item

    def error(self, cls, msg, line, body=None, token=None):
        col = None
        if body is not None:
            col = (body.find(token) + 1 if token is not None and token in body else len(body) - len(body.lstrip()) + 1)
        return cls(msg, line=line, column=col, path=self.path)


def _int(lines, tok, no, body, what="integer"):
    try:
        return int(tok)
    except ValueError:
        raise lines.error(ParseError, f"expected {what}, got {tok!r}", no, body, tok) from None


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", path=str(path)) from None


def _parse_tuple(lines, body, no, domain: Domain | None):
    m = _TUPLE.fullmatch(body.strip())
    if not m:
        raise lines.error(ParseError, f"expected a tuple like (0,1), got {body.strip()!r}", no, body)
    parts = [p.strip() for p in m.group(1).split(",")] if m.group(1).strip() else []
    vals = [_int(lines, p, no, body, "domain element") for p in parts]
    if domain is not None:
        for p, v in zip(parts, vals):
            if v not in domain:
                raise lines.error(ElementOutOfDomain, f"{v} is not in the domain {list(domain)}", no, body, p)
    return tuple(vals)


# ---------------------------------------------------------------------------
# languages
# ---------------------------------------------------------------------------
def loads_language(text: str, path=None, cap: int | None = DEFAULT_DOMAIN_CAP) -> ConstraintLanguage:
    lines = _Lines(text, path)
    domain = None
    rels: dict[str, Relation] = {}
    for no, body in lines:
        toks = body.split()
        if toks[0] == "domain":
            if domain is not None:
                raise lines.error(ParseError, "domain declared twice", no, body)
            elems = [_int(lines, t, no, body, "domain element") for t in toks[1:]]
            try:
                domain = Domain(elems, cap=cap)
            except WMaxSolError as e:
                raise lines.error(ParseError, str(e), no, body) from None
        elif toks[0] == "relation":
            if domain is None:
                raise lines.error(ParseError, "relation before the domain line", no, body)
            if len(toks) != 3:
                raise lines.error(ParseError, "expected: relation <name> <arity>", no, body)
            name, arity = toks[1], _int(lines, toks[2], no, body, "arity")
            if arity < 1:
                raise lines.error(ParseError, "arity must be positive", no, body, toks[2])
            if name in rels:
                raise lines.error(DuplicateName, f"duplicate relation name {name!r}", no, body, name)
            tuples = []
            for no2, body2 in lines:
                if body2.strip() == "end":
                    break
                t = _parse_tuple(lines, body2, no2, domain)
                if len(t) != arity:
                    raise lines.error(ParseError, f"tuple of length {len(t)} in relation {name!r} of arity {arity}", no2, body2)
                tuples.append(t)
            else:
                raise lines.error(ParseError, f"relation {name!r} is missing its 'end'", no, body)
            rels[name] = Relation(arity, tuples)
        else:
            raise lines.error(ParseError, f"unexpected {toks[0]!r}", no, body, toks[0])
    if domain is None:
        raise ParseError("missing domain line", path=lines.path)
    return ConstraintLanguage(domain, rels)


def parse_language(path, cap: int | None = DEFAULT_DOMAIN_CAP) -> ConstraintLanguage:
    return loads_language(_read(path), path, cap)


def _fmt_tuple(t) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def dump_language(lang: ConstraintLanguage) -> str:
    out = ["domain " + " ".join(str(x) for x in lang.domain)]
    for name, R in lang.relations.items():
        out.append(f"relation {name} {R.arity}")
        out += [_fmt_tuple(t) for t in R.tuples]
        out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------
def loads_instance(text: str, lang: ConstraintLanguage | None = None, path=None, cap: int | None = DEFAULT_DOMAIN_CAP) -> Instance:
    lines = _Lines(text, path)
    names, weights, cons = [], {}, []
    for no, body in lines:
        toks = body.split()
        if toks[0] == "use":
            if len(toks) != 2:
                raise lines.error(ParseError, "expected: use <language-file>", no, body)
            if lang is None:
                target = toks[1]
                if path is not None and not os.path.isabs(target):
                    target = os.path.join(os.path.dirname(str(path)), target)
                lang = parse_language(target, cap)
        elif toks[0] == "var":
            if len(toks) != 3:
                raise lines.error(ParseError, "expected: var <name> <weight>", no, body)
            name = toks[1]
            if name in weights:
                raise lines.error(DuplicateName, f"variable {name!r} declared twice", no, body, name)
            w = _int(lines, toks[2], no, body, "weight")
            if w < 0 or w > 2**64 - 1:
                raise lines.error(ParseError, f"weight {w} outside the 64-bit unsigned range", no, body, toks[2])
            names.append(name)
            weights[name] = w
        elif toks[0] == "con":
            if len(toks) < 3:
                raise lines.error(ParseError, "expected: con <relation> <var> ...", no, body)
            if lang is None:
                raise lines.error(ParseError, "constraint before the 'use' line", no, body)
            rel = toks[1]
            if rel not in lang:
                raise lines.error(UnknownRelation, f"unknown relation {rel!r}", no, body, rel)
            scope = toks[2:]
            for v in scope:
                if v not in weights:
                    raise lines.error(ParseError, f"undeclared variable {v!r}", no, body, v)
            if len(scope) != lang[rel].arity:
                raise lines.error(
                    ParseError, f"{rel!r} has arity {lang[rel].arity} but the scope has {len(scope)} variables", no, body
                )
            cons.append((tuple(scope), rel))
        else:
            raise lines.error(ParseError, f"unexpected {toks[0]!r}", no, body, toks[0])
    if lang is None:
        raise ParseError("instance has no 'use' line and no language was given", path=lines.path)
    return Instance(lang, names, weights, cons)


def parse_instance(path, lang: ConstraintLanguage | None = None, cap: int | None = DEFAULT_DOMAIN_CAP) -> Instance:
    return loads_instance(_read(path), lang, path, cap)


def dump_instance(inst: Instance, use: str | None = None) -> str:
    out = [f"use {use}"] if use else []
    out += [f"var {v} {w}" for v, w in zip(inst.variables, inst.weights)]
    for c in inst.constraints:
        out.append(f"con {c.relation} " + " ".join(inst.variables[i] for i in c.scope))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------
def loads_operations(text: str, path=None, domain: Domain | None = None, cap: int | None = DEFAULT_DOMAIN_CAP) -> list[Operation]:
    """All ``op`` blocks of a file.  Without a ``domain`` line the domain is
    the set of elements mentioned in the table."""
    lines = _Lines(text, path)
    ops = []
    for no, body in lines:
        toks = body.split()
        if toks[0] == "domain":
            elems = [_int(lines, t, no, body, "domain element") for t in toks[1:]]
            try:
                domain = Domain(elems, cap=cap)
            except WMaxSolError as e:
                raise lines.error(ParseError, str(e), no, body) from None
        elif toks[0] == "op":
            if len(toks) != 3:
                raise lines.error(ParseError, "expected: op <name> <arity>", no, body)
            name, arity = toks[1], _int(lines, toks[2], no, body, "arity")
            if arity < 1:
                raise lines.error(ParseError, "arity must be positive", no, body, toks[2])
            table = {}
            for no2, body2 in lines:
                if body2.strip() == "end":
                    break
                if "->" not in body2:
                    raise lines.error(ParseError, "expected: (<in>,...) -> <out>", no2, body2)
                lhs, rhs = body2.split("->", 1)
                args = _parse_tuple(lines, lhs, no2, domain)
                if len(args) != arity:
                    raise lines.error(ParseError, f"{len(args)} inputs for an operation of arity {arity}", no2, body2)
                out = _int(lines, rhs.strip(), no2, body2, "output element")
                if domain is not None and out not in domain:
                    raise lines.error(ElementOutOfDomain, f"{out} is not in the domain {list(domain)}", no2, body2, rhs.strip())
                if args in table:
                    raise lines.error(ParseError, f"input {args} listed twice", no2, body2)
                table[args] = out
            else:
                raise lines.error(ParseError, f"operation {name!r} is missing its 'end'", no, body)
            dom = domain
            if dom is None:
                elems = {x for a in table for x in a} | set(table.values())
                try:
                    dom = Domain(elems, cap=cap)
                except WMaxSolError as e:
                    raise lines.error(ParseError, str(e), no, body) from None
            try:
                ops.append(Operation(dom, arity, table, name=name))
            except WMaxSolError as e:
                raise lines.error(ParseError, f"operation {name!r}: {e}", no, body) from None
        else:
            raise lines.error(ParseError, f"unexpected {toks[0]!r}", no, body, toks[0])
    return ops


def parse_operations(path, domain: Domain | None = None, cap: int | None = DEFAULT_DOMAIN_CAP) -> list[Operation]:
    return loads_operations(_read(path), path, domain, cap)


def parse_operation(path, domain: Domain | None = None, cap: int | None = DEFAULT_DOMAIN_CAP) -> Operation:
    ops = parse_operations(path, domain, cap)
    if len(ops) != 1:
        raise ParseError(f"expected exactly one operation, found {len(ops)}", path=str(path))
    return ops[0]


def dump_operation(f: Operation, with_domain: bool = True) -> str:
    out = ["domain " + " ".join(str(x) for x in f.domain)] if with_domain else []
    out.append(f"op {f.name or 'f'} {f.arity}")
    out += [f"{_fmt_tuple(args)} -> {v}" for args, v in f.items()]
    out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# equation systems over Z_p
# ---------------------------------------------------------------------------
def loads_eqn(text: str, path=None) -> EqnInstance:
    """``prime p``, optional ``gmap g0 ... g(p-1)``, ``var <name> <w>``
    and ``eq <const> +x -y ...`` lines (meaning ``x - y + const = 0``)."""
    lines = _Lines(text, path)
    p, gmap, names, weights, eqs = None, None, [], [], []
    for no, body in lines:
        toks = body.split()
        if toks[0] == "prime":
            if len(toks) != 2:
                raise lines.error(ParseError, "expected: prime <p>", no, body)
            p = _int(lines, toks[1], no, body, "prime")
        elif toks[0] == "gmap":
            gmap = [_int(lines, t, no, body) for t in toks[1:]]
        elif toks[0] == "var":
            if len(toks) != 3:
                raise lines.error(ParseError, "expected: var <name> <weight>", no, body)
            if toks[1] in names:
                raise lines.error(DuplicateName, f"variable {toks[1]!r} declared twice", no, body, toks[1])
            names.append(toks[1])
            weights.append(_int(lines, toks[2], no, body, "weight"))
        elif toks[0] == "eq":
            if len(toks) < 2:
                raise lines.error(ParseError, "expected: eq <const> [+x|-x ...]", no, body)
            const = _int(lines, toks[1], no, body, "constant")
            terms = []
            for t in toks[2:]:
                if t[0] not in "+-" or len(t) < 2:
                    raise lines.error(ParseError, f"term {t!r} must be +name or -name", no, body, t)
                if t[1:] not in names:
                    raise lines.error(ParseError, f"undeclared variable {t[1:]!r}", no, body, t)
                terms.append((1 if t[0] == "+" else -1, t[1:]))
            eqs.append(Equation(tuple(terms), const))
        else:
            raise lines.error(ParseError, f"unexpected {toks[0]!r}", no, body, toks[0])
    if p is None:
        raise ParseError("missing prime line", path=lines.path)
    try:
        return EqnInstance(p, tuple(names), tuple(weights), tuple(eqs), tuple(gmap or ()))
    except InvalidArgument as e:
        raise ParseError(str(e), path=lines.path) from None


def parse_eqn(path) -> EqnInstance:
    return loads_eqn(_read(path), path)


def dump_eqn(e: EqnInstance) -> str:
    out = [f"prime {e.prime}", "gmap " + " ".join(str(x) for x in e.gmap)]
    out += [f"var {v} {w}" for v, w in zip(e.variables, e.weights)]
    for eq in e.equations:
        terms = " ".join(("+" if s > 0 else "-") + v for s, v in eq.terms)
        out.append(f"eq {eq.const} {terms}".rstrip())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------
def loads_graph(text: str, path=None) -> Graph:
    lines = _Lines(text, path)
    n, edges = None, []
    for no, body in lines:
        toks = body.split()
        if toks[0] == "graph" and len(toks) == 2:
            n = _int(lines, toks[1], no, body, "vertex count")
        elif toks[0] == "edge" and len(toks) == 3:
            if n is None:
                raise lines.error(ParseError, "edge before the graph line", no, body)
            u, v = (_int(lines, t, no, body, "vertex") for t in toks[1:])
            for t, x in zip(toks[1:], (u, v)):
                if not 0 <= x < n:
                    raise lines.error(ParseError, f"vertex {x} out of range", no, body, t)
            if u == v:
                raise lines.error(ParseError, "self-loops are not allowed", no, body)
            edges.append((u, v))
        else:
            raise lines.error(ParseError, "expected 'graph <n>' or 'edge <u> <v>'", no, body, toks[0])
    if n is None:
        raise ParseError("missing graph line", path=lines.path)
    return Graph(n, edges)


def parse_graph(path) -> Graph:
    return loads_graph(_read(path), path)


def dump_graph(g: Graph) -> str:
    return "\n".join([f"graph {g.n}"] + [f"edge {u} {v}" for u, v in g.edges]) + "\n"
