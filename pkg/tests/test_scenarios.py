from fractions import Fraction

import pytest

from borda_dynamics.errors import ScenarioBuildError, ScenarioFormatError
from borda_dynamics.move_graph import build_cover_graph, find_cycle
from borda_dynamics.scenarios import (
    build_gadget,
    build_traveling_wave,
    load_scenario,
    parse_scenario,
    with_pins,
)
from borda_dynamics.weak_orders import antipode, parse_order

G3 = build_cover_graph(3)
CYCLE4 = find_cycle(G3, 4)


def o(text, m=3):
    return parse_order(text, m)


# --- builders -----------------------------------------------------------------

def test_wave_builder_layout():
    sc = build_traveling_wave(8, CYCLE4)
    assert sc.network.n == 8
    assert sc.persistent.pins == {}
    for i in range(8):
        assert sc.network.weights[i][(i - 1) % 8] == 1
        assert sc.initial[i] == CYCLE4[i % 4]


def test_wave_builder_rejects_mismatched_lengths():
    with pytest.raises(ScenarioBuildError):
        build_traveling_wave(6, CYCLE4)  # 4 does not divide 6
    with pytest.raises(ScenarioBuildError):
        build_traveling_wave(2, CYCLE4)


def test_wave_builder_rejects_non_cycles():
    not_adjacent = (o("x>y>z"), o("x>z>y"), o("(xyz)"), o("(xy)>z"))
    with pytest.raises(ScenarioBuildError):
        build_traveling_wave(4, not_adjacent)
    repeated = (CYCLE4[0], CYCLE4[1], CYCLE4[0], CYCLE4[1])
    with pytest.raises(ScenarioBuildError):
        build_traveling_wave(4, repeated)


def test_gadget_builder_layout():
    rho = o("x>y>z")
    sc = build_gadget(3, rho, Fraction(1, 10))
    assert sc.network.names == ("i", "j", "p", "q")
    assert sc.network.weights[0][1] == Fraction(9, 10)
    assert sc.network.weights[0][2] == Fraction(1, 10)
    assert sc.network.weights[1][0] == Fraction(9, 10)
    assert sc.network.weights[1][3] == Fraction(1, 10)
    assert sc.persistent.pins == {2: rho, 3: antipode(rho)}
    assert sc.persistent.camps.base == rho
    assert sc.initial[:2] == (rho, antipode(rho))


def test_gadget_builder_eps_bounds():
    rho = o("x>y>z")
    with pytest.raises(ScenarioBuildError):
        build_gadget(3, rho, Fraction(0))
    with pytest.raises(ScenarioBuildError):
        build_gadget(3, rho, Fraction(1))
    # eps = 1/2 builds fine; oscillation is just not promised there
    assert build_gadget(3, rho, Fraction(1, 2)).m == 3


def test_gadget_builder_rejects_tied_base_order():
    with pytest.raises(ScenarioBuildError):
        build_gadget(3, o("(xy)>z"), Fraction(1, 10))


def test_gadget_initial_override():
    rho = o("x>y>z")
    sc = build_gadget(3, rho, Fraction(1, 10), initial_free=(o("(xyz)"), o("(xyz)")))
    assert sc.initial == (o("(xyz)"), o("(xyz)"), rho, antipode(rho))


# --- scenario JSON -----------------------------------------------------------------

def test_bundled_scenarios_parse_and_run(scenario_dir):
    for path in sorted(scenario_dir.glob("*.json")):
        if path.name.startswith("suite_"):
            continue
        sc = load_scenario(path)
        assert sc.label == path.stem
        assert sum(sc.network.weights[0]) == 1
        report = sc.run()  # must finish within the default budget
        assert report.period >= 1


def test_gadget_scenario_file_matches_builder(scenario_dir):
    from_file = load_scenario(scenario_dir / "gadget.json")
    built = build_gadget(3, o("x>y>z"), Fraction(1, 10))
    assert from_file.network.weights == built.network.weights
    assert from_file.persistent.pins == built.persistent.pins
    assert from_file.initial == built.initial


def minimal_doc():
    return {
        "m": 3,
        "network": {
            "nodes": ["a", "b"],
            "edges": [
                {"from": "b", "to": "a", "weight": "1"},
                {"from": "a", "to": "b", "weight": "1"},
            ],
        },
        "initial": {"a": "x>y>z", "b": "z>y>x"},
        "variant": {"kind": "S"},
    }


def test_parse_minimal_document():
    sc = parse_scenario(minimal_doc())
    assert sc.network.weights[0][1] == 1
    assert sc.schedule.kind == "synchronous"
    assert sc.max_steps == 10_000


def field_error(doc):
    with pytest.raises(ScenarioFormatError) as err:
        parse_scenario(doc)
    return err.value.path


def test_decimal_weights_rejected_with_field_path():
    doc = minimal_doc()
    doc["network"]["edges"][0]["weight"] = "0.5"
    assert field_error(doc) == "network.edges[0].weight"


def test_float_weights_rejected():
    doc = minimal_doc()
    doc["network"]["edges"][1]["weight"] = 0.5
    assert field_error(doc) == "network.edges[1].weight"


def test_row_sum_validation_addresses_edges():
    doc = minimal_doc()
    doc["network"]["edges"][0]["weight"] = "1/2"
    assert field_error(doc) == "network.edges"


def test_duplicate_edge_rejected():
    doc = minimal_doc()
    doc["network"]["edges"].append({"from": "b", "to": "a", "weight": "0"})
    assert field_error(doc).startswith("network.edges[2]")


def test_unknown_nodes_are_addressed():
    doc = minimal_doc()
    doc["initial"]["zz"] = "x>y>z"
    assert field_error(doc) == "initial.zz"
    doc = minimal_doc()
    doc["network"]["edges"][0]["from"] = "nope"
    assert field_error(doc) == "network.edges[0].from"


def test_missing_initial_states_rejected():
    doc = minimal_doc()
    del doc["initial"]["b"]
    assert field_error(doc) == "initial"


def test_pinned_initial_must_match_pin():
    doc = minimal_doc()
    doc["persistent"] = {"pins": [{"node": "a", "order": "(xyz)"}]}
    assert field_error(doc) == "initial.a"
    doc["initial"]["a"] = "(xyz)"
    sc = parse_scenario(doc)
    assert sc.persistent.pins == {0: o("(xyz)")}


def test_pin_defaults_into_initial():
    doc = minimal_doc()
    doc["persistent"] = {"pins": [{"node": "a", "order": "(xyz)"}]}
    del doc["initial"]["a"]
    sc = parse_scenario(doc)
    assert sc.initial[0] == o("(xyz)")


def test_camps_build_pins():
    doc = minimal_doc()
    doc["network"]["nodes"] = ["a", "b", "p", "q"]
    doc["network"]["edges"] = [
        {"from": "b", "to": "a", "weight": "1/2"},
        {"from": "p", "to": "a", "weight": "1/2"},
        {"from": "a", "to": "b", "weight": "1/2"},
        {"from": "q", "to": "b", "weight": "1/2"},
        {"from": "p", "to": "p", "weight": "1"},
        {"from": "q", "to": "q", "weight": "1"},
    ]
    doc["persistent"] = {"camps": {"plus": ["p"], "minus": ["q"], "rho": "x>y>z"}}
    sc = parse_scenario(doc)
    assert sc.persistent.pins == {2: o("x>y>z"), 3: o("z>y>x")}
    assert sc.persistent.camps.plus == (2,)


def test_camp_conflicting_pin_rejected():
    doc = minimal_doc()
    doc["persistent"] = {
        "pins": [{"node": "a", "order": "x>y>z"}],
        "camps": {"plus": ["a"], "minus": ["b"], "rho": "z>y>x"},
    }
    assert field_error(doc) == "persistent.camps.plus"


def test_normalize_with_weight_rejected():
    doc = minimal_doc()
    doc["network"]["normalize"] = True
    assert field_error(doc) == "network.edges[0].weight"


def test_normalized_network():
    doc = minimal_doc()
    doc["network"]["normalize"] = True
    doc["network"]["edges"] = [{"from": "a", "to": "b"}]
    sc = parse_scenario(doc)
    assert sc.network.weights[0][1] == 1
    assert sc.network.weights[1][0] == 1


def test_variant_parsing():
    doc = minimal_doc()
    doc["variant"] = {"kind": "A", "schedule": "seq:[a,b,a]"}
    sc = parse_scenario(doc)
    assert sc.schedule.kind == "sequence"
    assert sc.schedule.nodes == (0, 1, 0)

    doc["variant"] = {"kind": "A", "schedule": "uniform:42"}
    assert parse_scenario(doc).schedule.seed == 42

    doc["variant"] = {"kind": "A", "schedule": "sometimes"}
    assert field_error(doc) == "variant.schedule"

    doc["variant"] = {"kind": "X"}
    assert field_error(doc) == "variant.kind"


def test_policy_and_max_steps():
    doc = minimal_doc()
    doc["policy"] = {"no_move_on_ambiguity": True}
    doc["max_steps"] = 50
    sc = parse_scenario(doc)
    assert sc.policy.allow_no_move_on_ambiguity
    assert sc.max_steps == 50
    doc["max_steps"] = 0
    assert field_error(doc) == "max_steps"


def test_custom_alternative_names():
    doc = minimal_doc()
    doc["alternatives"] = ["a", "b", "c"]
    doc["initial"] = {"a": "a>b>c", "b": "c>b>a"}
    sc = parse_scenario(doc)
    assert sc.initial[0] == o("x>y>z")
    assert sc.alt_names == ("a", "b", "c")


def test_invalid_json_is_reported(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ScenarioFormatError):
        load_scenario(path)


# --- re-pinning ------------------------------------------------------------------------

def test_with_pins_replaces_only_pinned_nodes():
    sc = build_gadget(3, o("x>y>z"), Fraction(1, 10))
    twin = with_pins(sc, {2: o("(xyz)")})
    assert twin.persistent.pins[2] == o("(xyz)")
    assert twin.persistent.pins[3] == sc.persistent.pins[3]
    assert twin.initial[2] == o("(xyz)")
    with pytest.raises(ScenarioBuildError):
        with_pins(sc, {0: o("(xyz)")})
