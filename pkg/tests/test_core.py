import pytest

from wmaxsol import (
    ConstraintLanguage,
    Domain,
    Instance,
    Operation,
    Relation,
    equality_relation,
    full_relation,
    is_feasible,
    measure,
)
from wmaxsol.errors import ArityMismatch, DomainMismatch, DuplicateName, InvalidArgument, MalformedAssignment

IS_REL = Relation(2, [(0, 0), (1, 0), (0, 1)])


def two_var(weights=(2, 3), D=Domain.range(3)):
    return Instance(ConstraintLanguage(D), ["x", "y"], list(weights))


class TestDomain:
    def test_sorted_and_bounds(self):
        D = Domain([4, 1, 2])
        assert D.elements == (1, 2, 4)
        assert (D.min, D.max, D.size) == (1, 4, 3)
        assert D.index(4) == 2

    @pytest.mark.parametrize("elems", [[], [-1, 2], [1, 1]])
    def test_rejects_bad_elements(self, elems):
        with pytest.raises(InvalidArgument):
            Domain(elems)

    def test_cap(self):
        with pytest.raises(InvalidArgument):
            Domain.range(7)
        assert Domain.range(7, cap=None).size == 7

    def test_index_outside(self):
        with pytest.raises(DomainMismatch):
            Domain.range(2).index(5)


class TestRelation:
    def test_canonical_and_hashable(self):
        a = Relation(2, [(1, 0), (0, 0), (1, 0)])
        b = Relation(2, [(0, 0), (1, 0)])
        assert a == b and hash(a) == hash(b) and len(a) == 2

    def test_arity_checks(self):
        with pytest.raises(ArityMismatch):
            Relation(2, [(0, 1, 2)])
        with pytest.raises(InvalidArgument):
            Relation(0, [])

    def test_tmax_and_project(self):
        R = Relation(2, [(0, 0), (1, 0), (0, 2), (1, 2)])
        assert R.tmax() == (1, 2)
        assert R.project([1]) == Relation(1, [(0,), (2,)])
        with pytest.raises(InvalidArgument):
            Relation(1, []).tmax()

    def test_codes_follow_domain_order(self):
        D = Domain([2, 5, 7])
        R = Relation(2, [(5, 7), (2, 2)])
        assert list(R.codes(D)) == [0, 1 * 3 + 2]
        table = R.membership_table(D)
        assert table.sum() == 2 and table[5]

    def test_equality_and_full(self):
        D = Domain.range(3)
        assert len(equality_relation(D)) == 3
        assert len(full_relation(D, 2)) == 9


class TestOperation:
    def test_from_mapping_and_call(self):
        D = Domain.range(2)
        f = Operation(D, 2, {(a, b): max(a, b) for a in D for b in D})
        assert f(0, 1) == 1 and f.values == (0, 1, 1, 1)

    def test_incomplete_table(self):
        with pytest.raises(InvalidArgument):
            Operation(Domain.range(2), 2, {(0, 0): 0})

    def test_output_outside_domain(self):
        with pytest.raises(DomainMismatch):
            Operation(Domain.range(2), 1, [0, 2])

    def test_wrong_argument_count(self):
        f = Operation(Domain.range(2), 1, [1, 0])
        with pytest.raises(ArityMismatch):
            f(0, 1)


class TestLanguageAndInstance:
    def test_duplicate_relation(self):
        with pytest.raises(DuplicateName):
            ConstraintLanguage(Domain.range(2), [("R", IS_REL), ("R", IS_REL)])

    def test_relation_outside_domain(self):
        with pytest.raises(DomainMismatch):
            ConstraintLanguage(Domain.range(2), {"R": Relation(1, [(3,)])})

    def test_fresh_name(self):
        L = ConstraintLanguage(Domain.range(2), {"R": IS_REL, "R1": IS_REL})
        assert L.fresh_name("R") == "R2" and L.fresh_name("Q") == "Q"

    def test_unknown_relation_and_arity(self):
        L = ConstraintLanguage(Domain.range(2), {"R": IS_REL})
        with pytest.raises(InvalidArgument):
            Instance(L, ["x"], [1], [(("x",), "Q")])
        with pytest.raises(ArityMismatch):
            Instance(L, ["x"], [1], [(("x",), "R")])

    def test_negative_weight(self):
        with pytest.raises(InvalidArgument):
            Instance(ConstraintLanguage(Domain.range(2)), ["x"], [-1])

    def test_weights_by_name(self):
        inst = Instance(ConstraintLanguage(Domain.range(2)), ["x", "y"], {"y": 4, "x": 1})
        assert inst.weights == (1, 4) and inst.weight("y") == 4


class TestMeasureAndFeasibility:
    def test_measure_examples(self):
        assert measure(two_var(), {"x": 1, "y": 2}) == 8
        assert measure(two_var(), {"x": 0, "y": 0}) == 0
        single = Instance(ConstraintLanguage(Domain.range(5)), ["x"], [5])
        assert measure(single, {"x": 4}) == 20

    def test_measure_is_exact_for_huge_weights(self):
        inst = two_var(weights=(2**64 - 1, 2**64 - 1))
        assert measure(inst, (2, 2)) == 4 * (2**64 - 1)

    def test_feasibility_examples(self):
        L = ConstraintLanguage(Domain.range(2), {"R": IS_REL})
        inst = Instance(L, ["x", "y"], [1, 1], [(("x", "y"), "R")])
        assert is_feasible(inst, {"x": 1, "y": 0})
        assert not is_feasible(inst, {"x": 1, "y": 1})
        assert is_feasible(two_var(), {"x": 2, "y": 0})

    def test_malformed_assignments(self):
        with pytest.raises(MalformedAssignment):
            measure(two_var(), {"x": 1})
        with pytest.raises(MalformedAssignment):
            measure(two_var(), {"x": 1, "y": 9})
        with pytest.raises(MalformedAssignment):
            is_feasible(two_var(), (1,))
