"""Data model: domains, relations, operations, languages, instances.

Every value here is immutable after construction.  Domain elements are
natural numbers and need not be contiguous; internally the numeric kernels
work on element *indices* (position in the sorted domain), which is what the
cached ``codes``/``index_matrix`` helpers expose.
"""
from __future__ import annotations

import itertools
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    DomainMismatch,
    DuplicateName,
    InvalidArgument,
    MalformedAssignment,
)

DEFAULT_DOMAIN_CAP = 6
MAX_WEIGHT = 2**64 - 1
# membership tables above this many cells fall back to sorted-code lookup
MAX_TABLE_CELLS = 1 << 22


class Domain:
    """Finite set of naturals, kept sorted."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[int], cap: int | None = DEFAULT_DOMAIN_CAP):
        elems = [int(e) for e in elements]
        if not elems:
            raise InvalidArgument("domain must be non-empty")
        if any(e < 0 for e in elems):
            raise InvalidArgument("domain elements must be natural numbers")
        if len(set(elems)) != len(elems):
            raise InvalidArgument(f"duplicate domain elements in {elems}")
        elems.sort()
        if cap is not None and len(elems) > cap:
            raise InvalidArgument(f"domain size {len(elems)} exceeds cap {cap}")
        self.elements = tuple(elems)
        self._index = {e: i for i, e in enumerate(self.elements)}

    @classmethod
    def range(cls, n: int, cap: int | None = DEFAULT_DOMAIN_CAP) -> "Domain":
        return cls(range(n), cap=cap)

    def __len__(self):
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def index(self, x: int) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise DomainMismatch(f"{x} is not in domain {self.elements}") from None

    @property
    def max(self) -> int:
        return self.elements[-1]

    @property
    def min(self) -> int:
        return self.elements[0]

    def __eq__(self, other):
        return isinstance(other, Domain) and self.elements == other.elements

    def __hash__(self):
        return hash(("Domain", self.elements))

    def __repr__(self):
        return f"Domain({list(self.elements)})"


class Relation:
    """Extensional relation: a canonical sorted set of equal-length tuples."""

    __slots__ = ("arity", "tuples", "_set", "_cache")

    def __init__(self, arity: int, tuples: Iterable[Sequence[int]]):
        if not isinstance(arity, (int, np.integer)) or arity < 1:
            raise InvalidArgument(f"arity must be a positive integer, got {arity!r}")
        arity = int(arity)
        seen = set()
        for t in tuples:
            t = tuple(int(x) for x in t)
            if len(t) != arity:
                raise ArityMismatch(f"tuple {t} does not have arity {arity}")
            seen.add(t)
        self.arity = arity
        self.tuples = tuple(sorted(seen))
        self._set = frozenset(self.tuples)
        self._cache = {}

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, t):
        return tuple(t) in self._set

    def __eq__(self, other):
        return isinstance(other, Relation) and self.arity == other.arity and self._set == other._set

    def __hash__(self):
        return hash((self.arity, self._set))

    def __repr__(self):
        return f"Relation({self.arity}, {list(self.tuples)})"

    @property
    def is_empty(self) -> bool:
        return not self.tuples

    def elements(self) -> set[int]:
        return {x for t in self.tuples for x in t}

    def check_domain(self, domain: Domain) -> None:
        bad = self.elements() - set(domain.elements)
        if bad:
            raise DomainMismatch(f"relation uses {sorted(bad)} outside {domain!r}")

    def project(self, positions: Sequence[int]) -> "Relation":
        return Relation(len(positions), (tuple(t[p] for p in positions) for t in self.tuples))

    def tmax(self) -> tuple[int, ...]:
        """Componentwise maximum over all tuples."""
        if not self.tuples:
            raise InvalidArgument("t_max of an empty relation is undefined")
        return tuple(max(col) for col in zip(*self.tuples))

    # -- kernel encodings ------------------------------------------------
    def index_matrix(self, domain: Domain) -> np.ndarray:
        key = ("idx", domain)
        if key not in self._cache:
            self.check_domain(domain)
            m = np.array([[domain.index(x) for x in t] for t in self.tuples], dtype=np.int64)
            self._cache[key] = m.reshape(len(self.tuples), self.arity)
        return self._cache[key]

    def codes(self, domain: Domain) -> np.ndarray:
        """Sorted mixed-radix codes (first coordinate most significant)."""
        key = ("codes", domain)
        if key not in self._cache:
            m = self.index_matrix(domain)
            radix = domain.size ** np.arange(self.arity - 1, -1, -1, dtype=np.int64)
            self._cache[key] = np.sort(m @ radix) if len(m) else np.zeros(0, dtype=np.int64)
        return self._cache[key]

    def membership_table(self, domain: Domain) -> np.ndarray | None:
        """Boolean table over all ``|D|**arity`` codes, or None when too large."""
        key = ("table", domain)
        if key not in self._cache:
            cells = domain.size**self.arity
            if cells > MAX_TABLE_CELLS:
                self._cache[key] = None
            else:
                table = np.zeros(cells, dtype=np.bool_)
                table[self.codes(domain)] = True
                self._cache[key] = table
        return self._cache[key]


class Operation:
    """Total operation ``D^k -> D`` stored as a row-major output table.

    The input order is lexicographic over the sorted domain, first argument
    most significant.
    """

    __slots__ = ("domain", "arity", "values", "name", "_idx", "_lookup")

    def __init__(self, domain: Domain, arity: int, table, name: str | None = None):
        if arity < 1:
            raise InvalidArgument("operation arity must be positive")
        self.domain = domain
        self.arity = int(arity)
        self.name = name
        n_cells = domain.size**self.arity
        if isinstance(table, Mapping):
            vals = []
            for args in itertools.product(domain.elements, repeat=self.arity):
                if args not in table:
                    raise InvalidArgument(f"operation table undefined on {args}")
                vals.append(int(table[args]))
            if len(table) != n_cells:
                extra = [a for a in table if len(a) != self.arity or any(x not in domain for x in a)]
                raise InvalidArgument(f"table has inputs outside {domain!r}: {extra[:3]}")
        else:
            vals = [int(v) for v in table]
            if len(vals) != n_cells:
                raise InvalidArgument(f"expected {n_cells} table entries, got {len(vals)}")
        for v in vals:
            if v not in domain:
                raise DomainMismatch(f"output {v} not in {domain!r}")
        self.values = tuple(vals)
        self._idx = np.array([domain.index(v) for v in vals], dtype=np.int64)
        self._lookup = None

    @classmethod
    def from_function(cls, domain: Domain, arity: int, fn, name: str | None = None) -> "Operation":
        vals = [fn(*args) for args in itertools.product(domain.elements, repeat=arity)]
        return cls(domain, arity, vals, name=name)

    @property
    def index_table(self) -> np.ndarray:
        """Output indices, addressed by the mixed-radix code of input indices."""
        return self._idx

    def _code(self, args) -> int:
        n = self.domain.size
        code = 0
        for a in args:
            code = code * n + self.domain.index(a)
        return code

    def __call__(self, *args):
        if len(args) != self.arity:
            raise ArityMismatch(f"{self.label} expects {self.arity} arguments, got {len(args)}")
        if self._lookup is None:
            self._lookup = dict(self.items())
        try:
            return self._lookup[args]
        except KeyError:
            raise DomainMismatch(f"{args} not in {self.domain!r}") from None

    def items(self):
        """Yield ``(inputs, output)`` pairs in table order."""
        return zip(itertools.product(self.domain.elements, repeat=self.arity), self.values)

    @property
    def label(self) -> str:
        return self.name or f"<{self.arity}-ary op>"

    def renamed(self, name: str) -> "Operation":
        return Operation(self.domain, self.arity, self.values, name=name)

    def __eq__(self, other):
        return (
            isinstance(other, Operation)
            and self.domain == other.domain
            and self.arity == other.arity
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.domain, self.arity, self.values))

    def __repr__(self):
        return f"Operation({self.label}, arity={self.arity}, domain={list(self.domain)})"


class ConstraintLanguage:
    """A domain plus named relations over it."""

    __slots__ = ("domain", "relations")

    def __init__(self, domain: Domain, relations=()):
        items = relations.items() if isinstance(relations, Mapping) else relations
        rels: dict[str, Relation] = {}
        for name, rel in items:
            if name in rels:
                raise DuplicateName(f"duplicate relation name {name!r}")
            rel.check_domain(domain)
            rels[name] = rel
        self.domain = domain
        self.relations = MappingProxyType(rels)

    def __getitem__(self, name: str) -> Relation:
        return self.relations[name]

    def __contains__(self, name):
        return name in self.relations

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations.values())

    def names(self) -> list[str]:
        return list(self.relations)

    def with_relations(self, extra) -> "ConstraintLanguage":
        items = list(self.relations.items())
        items += list(extra.items() if isinstance(extra, Mapping) else extra)
        return ConstraintLanguage(self.domain, items)

    def fresh_name(self, stem: str) -> str:
        if stem not in self.relations:
            return stem
        for i in itertools.count(1):
            name = f"{stem}{i}"
            if name not in self.relations:
                return name

    def __eq__(self, other):
        return (
            isinstance(other, ConstraintLanguage)
            and self.domain == other.domain
            and dict(self.relations) == dict(other.relations)
        )

    def __hash__(self):
        return hash((self.domain, frozenset(self.relations.items())))

    def __repr__(self):
        return f"ConstraintLanguage({self.domain!r}, {list(self.relations)})"


class Constraint(NamedTuple):
    scope: tuple[int, ...]
    relation: str


class Instance:
    """Weighted CSP instance over a constraint language."""

    __slots__ = ("language", "variables", "weights", "constraints", "_vindex")

    def __init__(self, language: ConstraintLanguage, variables: Sequence[str], weights, constraints=()):
        variables = tuple(str(v) for v in variables)
        if len(set(variables)) != len(variables):
            raise InvalidArgument("variable names must be unique")
        vindex = {v: i for i, v in enumerate(variables)}
        if isinstance(weights, Mapping):
            missing = [v for v in variables if v not in weights]
            if missing:
                raise InvalidArgument(f"no weight for {missing}")
            weights = [weights[v] for v in variables]
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(variables):
            raise InvalidArgument("one weight per variable required")
        for w in weights:
            if w < 0 or w > MAX_WEIGHT:
                raise InvalidArgument(f"weight {w} outside the 64-bit unsigned range")
        cons = []
        for scope, rel_name in constraints:
            if rel_name not in language:
                raise InvalidArgument(f"unknown relation {rel_name!r}")
            idx = []
            for v in scope:
                if isinstance(v, str):
                    if v not in vindex:
                        raise InvalidArgument(f"unknown variable {v!r}")
                    idx.append(vindex[v])
                else:
                    v = int(v)
                    if not 0 <= v < len(variables):
                        raise InvalidArgument(f"scope index {v} out of range")
                    idx.append(v)
            if len(idx) != language[rel_name].arity:
                raise ArityMismatch(
                    f"scope of length {len(idx)} for {rel_name!r} of arity {language[rel_name].arity}"
                )
            cons.append(Constraint(tuple(idx), rel_name))
        self.language = language
        self.variables = variables
        self.weights = weights
        self.constraints = tuple(cons)
        self._vindex = vindex

    @property
    def domain(self) -> Domain:
        return self.language.domain

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    def index(self, var: str) -> int:
        return self._vindex[var]

    def relation(self, c: Constraint) -> Relation:
        return self.language[c.relation]

    def used_relations(self) -> dict[str, Relation]:
        return {c.relation: self.language[c.relation] for c in self.constraints}

    def weight(self, var: str) -> int:
        return self.weights[self._vindex[var]]

    def __eq__(self, other):
        return (
            isinstance(other, Instance)
            and self.language == other.language
            and self.variables == other.variables
            and self.weights == other.weights
            and self.constraints == other.constraints
        )

    def __hash__(self):
        return hash((self.language, self.variables, self.weights, self.constraints))

    def __repr__(self):
        return f"Instance({self.n_vars} vars, {len(self.constraints)} constraints)"


Assignment = dict  # variable name -> domain element


def assignment_values(instance: Instance, a) -> tuple[int, ...]:
    """Normalise ``a`` (mapping or aligned sequence) to a tuple of values."""
    if isinstance(a, Mapping):
        missing = [v for v in instance.variables if v not in a]
        if missing:
            raise MalformedAssignment(f"assignment misses {missing}")
        vals = tuple(int(a[v]) for v in instance.variables)
    else:
        vals = tuple(int(x) for x in a)
        if len(vals) != instance.n_vars:
            raise MalformedAssignment(f"expected {instance.n_vars} values, got {len(vals)}")
    dom = instance.domain
    for v, x in zip(instance.variables, vals):
        if x not in dom:
            raise MalformedAssignment(f"value {x} for {v} is not in {dom!r}")
    return vals


def as_assignment(instance: Instance, values: Sequence[int]) -> Assignment:
    return {v: int(x) for v, x in zip(instance.variables, values)}


def measure(instance: Instance, a) -> int:
    """Exact weighted sum; feasibility is not checked."""
    vals = assignment_values(instance, a)
    return sum(w * x for w, x in zip(instance.weights, vals))


def is_feasible(instance: Instance, a) -> bool:
    vals = assignment_values(instance, a)
    for c in instance.constraints:
        if tuple(vals[i] for i in c.scope) not in instance.relation(c):
            return False
    return True


def equality_relation(domain: Domain) -> Relation:
    return Relation(2, ((x, x) for x in domain))


def full_relation(domain: Domain, arity: int) -> Relation:
    return Relation(arity, itertools.product(domain.elements, repeat=arity))
