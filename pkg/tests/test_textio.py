import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wmaxsol import ConstraintLanguage, Domain, Instance
from wmaxsol.algebra import max_op, min_op
from wmaxsol.errors import DuplicateName, ElementOutOfDomain, ParseError, UnknownRelation
from wmaxsol.sampling import (
    random_domain,
    random_eqn_instance,
    random_graph,
    random_instance,
    random_relation,
    rng_for,
)
from wmaxsol.textio import (
    dump_eqn,
    dump_graph,
    dump_instance,
    dump_language,
    dump_operation,
    loads_eqn,
    loads_graph,
    loads_instance,
    loads_language,
    loads_operations,
    parse_instance,
    parse_language,
    parse_operation,
)

LANG = """\
# a small language
domain 0 1 2
relation R 2
(0,1)
(1,2)
(2,0)   # wraps around
(1,1)
end
"""


def _random_language(rng):
    D = random_domain(rng)
    rels = {}
    for i in range(rng.randint(1, 3)):
        arity = rng.randint(1, 3)
        rels[f"R{i}"] = random_relation(rng, D, arity, rng.randint(1, len(D) ** arity))
    return ConstraintLanguage(D, rels)


def test_language_example():
    lang = loads_language(LANG)
    assert list(lang.domain) == [0, 1, 2]
    assert lang["R"].arity == 2
    assert len(lang["R"]) == 4


def test_element_out_of_domain_position():
    bad = LANG.replace("(1,2)", "(0,3)")
    with pytest.raises(ElementOutOfDomain) as ei:
        loads_language(bad, path="lang.txt")
    assert ei.value.line == 5
    assert ei.value.column == 4
    assert str(ei.value).startswith("lang.txt:5:4:")


def test_duplicate_relation_name():
    with pytest.raises(DuplicateName) as ei:
        loads_language(LANG + "relation R 1\n(0)\nend\n")
    assert ei.value.line == 9


@pytest.mark.parametrize(
    "text",
    [
        "relation R 1\n(0)\nend\n",                      # no domain yet
        "domain 0 1\nrelation R 2\n(0,1)\n",             # missing end
        "domain 0 1\nrelation R 2\n(0)\nend\n",          # wrong tuple length
        "domain 0 1\nrelation R 0\nend\n",               # zero arity
        "domain 0 1\nrelation R 1\n0 1\nend\n",          # not a tuple
        "domain 0 0\n",                                  # repeated element
        "domain 0 x\n",
        "",
    ],
)
def test_language_malformed(text):
    with pytest.raises(ParseError):
        loads_language(text)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_language_round_trip(seed):
    lang = _random_language(rng_for(seed))
    assert loads_language(dump_language(lang)) == lang


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_instance_round_trip(seed):
    rng = rng_for(seed)
    lang = _random_language(rng)
    inst = random_instance(rng, lang, rng.randint(1, 5), rng.randint(0, 5))
    back = loads_instance(dump_instance(inst), lang)
    assert back == inst


def test_instance_files(tmp_path):
    (tmp_path / "lang.txt").write_text(LANG)
    (tmp_path / "inst.txt").write_text("use lang.txt\nvar x 3\nvar y 18446744073709551615\ncon R x y\n")
    inst = parse_instance(tmp_path / "inst.txt")
    assert isinstance(inst, Instance)
    assert inst.weights == (3, 2**64 - 1)
    assert inst.language == parse_language(tmp_path / "lang.txt")


@pytest.mark.parametrize(
    "body, exc, line",
    [
        ("var x 1\nvar x 2\n", DuplicateName, 3),
        ("var x 1\ncon S x\n", UnknownRelation, 3),
        ("var x 1\ncon R x\n", ParseError, 3),            # arity mismatch
        ("var x 1\ncon R x z\n", ParseError, 3),          # undeclared variable
        ("var x -1\n", ParseError, 2),
        ("var x 18446744073709551616\n", ParseError, 2),
        ("var x\n", ParseError, 2),
        ("bogus\n", ParseError, 2),
    ],
)
def test_instance_errors(tmp_path, body, exc, line):
    (tmp_path / "lang.txt").write_text(LANG)
    (tmp_path / "inst.txt").write_text("use lang.txt\n" + body)
    with pytest.raises(exc) as ei:
        parse_instance(tmp_path / "inst.txt")
    assert ei.value.line == line


def test_instance_without_language():
    with pytest.raises(ParseError):
        loads_instance("var x 1\n")


def test_missing_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        parse_language(tmp_path / "nope.txt")


@pytest.mark.parametrize("make", [max_op, min_op])
def test_operation_round_trip(make):
    f = make(Domain([0, 2, 5]))
    (g,) = loads_operations(dump_operation(f))
    assert g == f
    (h,) = loads_operations(dump_operation(f, with_domain=False))
    assert h == f


def test_operation_domain_inferred():
    (f,) = loads_operations("op c 1\n(0) -> 0\n(1) -> 0\nend\n")
    assert list(f.domain) == [0, 1]
    assert f(1) == 0


@pytest.mark.parametrize(
    "text, exc",
    [
        ("domain 0 1\nop f 1\n(0) -> 2\n(1) -> 0\nend\n", ElementOutOfDomain),
        ("domain 0 1\nop f 1\n(0) -> 0\nend\n", ParseError),               # incomplete table
        ("domain 0 1\nop f 1\n(0) -> 0\n(0) -> 1\n(1) -> 0\nend\n", ParseError),
        ("domain 0 1\nop f 2\n(0) -> 0\nend\n", ParseError),
        ("domain 0 1\nop f 1\n(0) -> 0\n", ParseError),
        ("domain 0 1\nop f 1\n(0) 0\nend\n", ParseError),
    ],
)
def test_operation_errors(text, exc):
    with pytest.raises(exc):
        loads_operations(text)


def test_parse_operation_needs_exactly_one(tmp_path):
    p = tmp_path / "two.op"
    p.write_text(dump_operation(max_op(Domain.range(2))) + dump_operation(max_op(Domain.range(2)), with_domain=False))
    with pytest.raises(ParseError, match="exactly one"):
        parse_operation(p)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5]))
def test_eqn_round_trip(seed, p):
    rng = rng_for(seed)
    e = random_eqn_instance(rng, p, rng.randint(1, 5), rng.randint(0, 5))
    assert loads_eqn(dump_eqn(e)) == e


@pytest.mark.parametrize(
    "text",
    [
        "var x 1\n",                          # no prime
        "prime 4\n",
        "prime 3\nvar x 1\nvar x 1\n",
        "prime 3\nvar x 1\neq 0 x\n",
        "prime 3\nvar x 1\neq 0 +y\n",
    ],
)
def test_eqn_errors(text):
    with pytest.raises(ParseError):
        loads_eqn(text)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 7))
def test_graph_round_trip(seed, n):
    g = random_graph(rng_for(seed), n)
    assert loads_graph(dump_graph(g)) == g


@pytest.mark.parametrize("text", ["edge 0 1\n", "graph 2\nedge 0 2\n", "graph 2\nedge 1 1\n", "graph\n", ""])
def test_graph_errors(text):
    with pytest.raises(ParseError):
        loads_graph(text)
