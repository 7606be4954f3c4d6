import importlib.util
import json
import logging
from pathlib import Path

import pytest

from config import settings
from exceptions import InputError, ParseError
from fixtures import (
    FIXTURES,
    fixture_bytes,
    fixture_names,
    load_declaration,
    load_fixture,
    load_parsed_fixture,
    load_script,
    load_universe,
)
from model_io import (
    canonical_document,
    document_from_complex,
    dump_canonical,
    parse_declaration,
    parse_model,
    parse_script,
    parse_universe,
    serialize_declaration,
    serialize_model,
    serialize_script,
)
from models import ModelDocument
from simplicial import validate

ROOT = Path(__file__).resolve().parent.parent


def _document(**overrides):
    document = {
        "name": "minimo",
        "universe": {"labels": ["a", "b", "c"]},
        "mode": "explicit",
        "max_dim": 2,
        "simplices": [["a"]],
    }
    document.update(overrides)
    return json.dumps(document)


class TestParseModel:
    def test_single_vertex(self):
        parsed = parse_model(_document())
        assert len(parsed.complex) == 1
        assert not parsed.auto_closed

    def test_flag_vertices_only(self):
        parsed = parse_model(_document(mode="flag", max_dim=0, simplices=None, vertices=["b"]))
        assert parsed.complex.counts_by_dim() == [1]

    def test_lotka_volterra_document(self):
        parsed = load_parsed_fixture("lotka_volterra")
        assert parsed.complex.counts_by_dim(1) == [7, 14]
        assert parsed.name == "lotka_volterra"

    def test_unknown_label_has_location(self):
        with pytest.raises(ParseError) as excinfo:
            parse_model(_document(simplices=[["a"], ["z"]]), location="m.json")
        assert excinfo.value.location == "m.json:simplices.1"

    def test_unknown_key_is_rejected(self):
        with pytest.raises(ParseError):
            parse_model(_document(colour="red"))

    def test_mode_fields(self):
        with pytest.raises(ParseError):
            parse_model(_document(mode="flag"))
        with pytest.raises(ParseError):
            parse_model(_document(mode="flag", simplices=None, edges=[["a", "b", "c"]]))

    def test_invalid_json_has_line_and_column(self):
        with pytest.raises(ParseError) as excinfo:
            parse_model('{"name": "x",\n  ', location="roto.json")
        assert excinfo.value.location.startswith("roto.json:2:")

    def test_open_list_requires_auto_close(self, caplog):
        document = _document(simplices=[["a", "b", "c"]])
        with pytest.raises(ParseError):
            parse_model(document)
        with caplog.at_level(logging.WARNING):
            parsed = parse_model(document, auto_close=True)
        assert parsed.auto_closed
        assert len(parsed.complex) == 7
        assert validate(parsed.complex).ok
        assert "caras ausentes" in caplog.text

    def test_dimension_above_max(self):
        with pytest.raises(ParseError):
            parse_model(_document(max_dim=1, simplices=[["a", "b", "c"]]))

    def test_universe_hash_is_checked(self, abc_universe):
        good = {"labels": ["a", "b", "c"], "hash": abc_universe.fingerprint}
        assert parse_model(_document(universe=good)).complex.universe == abc_universe
        with pytest.raises(ParseError):
            parse_model(_document(universe={"labels": ["a", "b", "c"], "hash": "0000"}))

    def test_duplicate_universe_label(self):
        with pytest.raises(ParseError):
            parse_model(_document(universe={"labels": ["a", "a"]}))


class TestCanonicalForm:
    def test_serialize_sorts_by_component_order(self):
        document = ModelDocument.model_validate_json(
            _document(simplices=[["c", "a"], ["c"], ["a"], ["b"]])
        )
        text = serialize_model(document).decode("utf-8")
        assert text.endswith("}\n")
        assert json.loads(text)["simplices"] == [["a"], ["b"], ["c"], ["a", "c"]]
        assert list(json.loads(text)) == sorted(json.loads(text))

    def test_empty_flag_model_is_stable(self):
        document = ModelDocument.model_validate_json(
            _document(mode="flag", simplices=None, edges=[])
        )
        assert serialize_model(document) == serialize_model(document)
        assert serialize_model(ModelDocument.model_validate(canonical_document(document))) == (
            serialize_model(document)
        )

    def test_document_from_complex(self, lotka_volterra):
        for mode in ("flag", "explicit"):
            document = document_from_complex("lv", lotka_volterra, mode)
            rebuilt = parse_model(serialize_model(document)).complex
            assert rebuilt == lotka_volterra

    def test_dump_canonical_inlines_scalar_lists(self):
        assert dump_canonical({"a": [1, 2], "b": {}}) == b'{\n  "a": [1, 2],\n  "b": {}\n}\n'


class TestFixtures:
    @pytest.mark.parametrize("name", fixture_names("model"))
    def test_model_golden_bytes(self, name):
        parsed = load_parsed_fixture(name)
        assert serialize_model(parsed.document) == fixture_bytes(name)
        assert validate(parsed.complex).ok

    @pytest.mark.parametrize("name", fixture_names("declaration"))
    def test_declaration_golden_bytes(self, name):
        assert serialize_declaration(load_declaration(name)) == fixture_bytes(name)

    @pytest.mark.parametrize("name", fixture_names("script"))
    def test_script_golden_bytes(self, name):
        assert serialize_script(load_script(name)) == fixture_bytes(name)

    @pytest.mark.parametrize("name", fixture_names("universe"))
    def test_universe_documents(self, name):
        universe = load_universe(name)
        assert universe.name == name
        assert dump_canonical({"labels": list(universe.labels), "name": name}) == fixture_bytes(name)

    def test_table_counts(self, pi4, tp1):
        assert pi4.counts_by_dim(5) == [11, 33, 43, 26, 6, 0]
        assert tp1.counts_by_dim(5) == [13, 45, 70, 55, 21, 3]

    def test_pi4_vertices(self, pi4):
        assert pi4.vertex_labels() == {
            "Morphogen 1", "Diffusion 1", "Degradation 1", "Influx 1", "Morphogen 2",
            "Diffusion 2", "Degradation 2", "Influx 2", "Annihilation between Morphogens 1 and 2",
            "Monotonic gradient", "Global scale-invariance",
        }

    def test_reconstructed_metadata(self):
        for name in ("pi4_annihilation", "tp1_activator_inhibitor"):
            assert load_parsed_fixture(name).document.metadata["provenance"] == "reconstructed"

    def test_templates_are_empty(self, caplog):
        with caplog.at_level(logging.WARNING):
            parsed = load_parsed_fixture("pi1_template")
        assert len(parsed.complex) == 0
        assert "plantilla" in caplog.text

    def test_pattern_declaration(self, pattern_concepts):
        assert set(pattern_concepts.classes) == {
            frozenset({"Influx 1", "Basal production 1", "Self-activation of Morphogen 1"}),
            frozenset({"Influx 2", "Basal production 2"}),
            frozenset({"Monotonic gradient", "Oscillatory gradient"}),
            frozenset({
                "Annihilation between Morphogens 1 and 2",
                "Activation of Morphogen 2 by Morphogen 1",
                "Inhibition of Morphogen 1 by Morphogen 2",
            }),
        }

    def test_unknown_fixture(self):
        with pytest.raises(InputError):
            load_fixture("pi6")
        with pytest.raises(InputError):
            load_script("lotka_volterra")

    def test_registry_files_exist(self):
        for kind, relative in FIXTURES.values():
            assert (settings.MODELHOM_FIXTURES_DIR / relative).is_file(), relative

    def test_reconstruction_reproduces_fixtures(self):
        path = ROOT / "scripts" / "reconstruct_fixtures.py"
        spec = importlib.util.spec_from_file_location("reconstruct_fixtures", path)
        module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(module)
        reconstructor = module.FixtureReconstructor(settings.MODELHOM_FIXTURES_DIR, check_only=True)
        assert reconstructor.run() == 0
        assert reconstructor.stats["written"] == 0


class TestOtherDocuments:
    def test_universe_from_model_document(self):
        universe = parse_universe(fixture_bytes("lotka_volterra"))
        assert universe.labels[0] == "Prey"

    def test_declaration_rejects_overlapping_classes(self):
        with pytest.raises(ParseError):
            parse_declaration(json.dumps({"classes": [["a", "b"], ["b", "c"]]}))

    def test_script_steps(self):
        steps = [
            {"op": "split", "u": "a", "targets": ["b", "c"]},
            {"op": "identify_nonadjacent", "u": "a", "v": "b", "target": "a"},
        ]
        script = parse_script(json.dumps(steps))
        assert [op.op_name for op in script] == ["split", "identify_nonadjacent"]
        assert not script[1].is_batched

    def test_script_rejects_unknown_op(self):
        with pytest.raises(ParseError):
            parse_script(json.dumps([{"op": "merge", "u": "a"}]))
        with pytest.raises(ParseError):
            parse_script(json.dumps([{"op": "split", "u": "a", "targets": ["b"]}]))
