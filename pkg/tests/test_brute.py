import pytest

from kanex.brute import Diagram, SetsUpTo, brute_colimit, enumerate_cocones, is_initial, resolve_budget
from kanex.errors import NoColimit, SearchBudgetExceeded
from kanex.fincat import FunctorRep, chain, discrete, leq_id, parallel_pair, walking_arrow
from kanex.finset import FinSetMap, fs
import corpus


class Tabulated:
    def __init__(self, obj_map, mor_map):
        self.obj_map, self.mor_map = obj_map, mor_map


def arrow_diagram(a, b, table):
    F = Tabulated({"a": fs(a), "b": fs(b)},
                  {"id_a": FinSetMap(fs(a), fs(a), range(a)), "id_b": FinSetMap(fs(b), fs(b), range(b)),
                   "u": FinSetMap(fs(a), fs(b), table)})
    return Diagram(walking_arrow(), SetsUpTo(a + b), F)


def test_colimit_of_arrow_is_codomain():
    c = brute_colimit(arrow_diagram(2, 1, [0, 0]))
    assert c.apex == fs(1)


def test_coproduct_in_sets():
    shape = discrete(["0", "1"])
    F = Tabulated({"0": fs(2), "1": fs(1)},
                  {shape.identity["0"]: FinSetMap(fs(2), fs(2), [0, 1]),
                   shape.identity["1"]: FinSetMap(fs(1), fs(1), [0])})
    c = brute_colimit(Diagram(shape, SetsUpTo(3), F))
    assert c.apex == fs(3)
    assert sorted(c.legs["0"].table + c.legs["1"].table) == [0, 1, 2]


def test_join_in_a_lattice():
    d = corpus.diamond()
    shape = discrete(["l", "r"])
    F = FunctorRep(shape, d, {"l": "a", "r": "b"}, {shape.identity["l"]: "a<=a", shape.identity["r"]: "b<=b"})
    c = brute_colimit(Diagram(shape, d, F))
    assert c.apex == "1"
    assert c.legs == {"l": "a<=1", "r": "b<=1"}
    assert is_initial(Diagram(shape, d, F), c)


def test_missing_colimit():
    # two incomparable elements of an antichain have no join
    two = discrete(["x", "y"])
    F = FunctorRep(two, two, {"x": "x", "y": "y"}, {two.identity["x"]: two.identity["x"],
                                                     two.identity["y"]: two.identity["y"]})
    with pytest.raises(NoColimit):
        brute_colimit(Diagram(two, two, F))


def test_coequalizer_in_chain():
    c = chain(3)
    shape = parallel_pair()
    F = FunctorRep(shape, c, {"0": "0", "1": "1"},
                   {"f": leq_id("0", "1"), "g": leq_id("0", "1"), shape.identity["0"]: leq_id("0", "0"),
                    shape.identity["1"]: leq_id("1", "1")})
    assert brute_colimit(Diagram(shape, c, F)).apex == "1"


def test_budget_guard(monkeypatch):
    d = arrow_diagram(3, 3, [0, 1, 2])
    with pytest.raises(SearchBudgetExceeded):
        enumerate_cocones(d, budget=10)
    monkeypatch.setenv("KANEX_BUDGET", "5")
    assert resolve_budget() == 5
    with pytest.raises(SearchBudgetExceeded):
        brute_colimit(d)
    monkeypatch.delenv("KANEX_BUDGET")
    assert resolve_budget() == 10**6
