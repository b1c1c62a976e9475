import json
from pathlib import Path

import pytest

from pndeform.errors import InvalidRepresentation, SchemaError
from pndeform.hyp import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    Scenario,
    artin_conductor_tame,
    check_c1,
    check_c2,
    check_c3,
    check_c4,
    check_theorem_b_shape,
    run_checks,
)
from pndeform.mat import Mat2
from pndeform.ring import GaloisRing
from pndeform.scenarios import (
    all_fixtures,
    build_mutations,
    build_theorem_a_p3,
    build_theorem_a_p5,
    build_theorem_b_p5,
)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"
R5 = GaloisRing(5, 2)


@pytest.fixture(scope="module")
def a5():
    return Scenario.from_dict(build_theorem_a_p5())


class TestScenarioLoading:
    def test_roundtrip(self):
        obj = build_theorem_a_p5()
        s = Scenario.from_dict(obj)
        assert s.to_dict() == obj

    def test_bundled_files_match_builders(self):
        for name, obj in all_fixtures().items():
            path = SCENARIO_DIR / f"{name}.json"
            assert path.exists(), f"missing bundled fixture {name}"
            on_disk = json.loads(path.read_text())
            assert on_disk == obj, f"fixture {name} is stale"

    def test_unknown_schema_version(self):
        obj = build_theorem_a_p5()
        obj["schema_version"] = 99
        with pytest.raises(SchemaError):
            Scenario.from_dict(obj)

    def test_missing_label(self):
        obj = build_theorem_a_p5()
        obj["global_generators"] = ["nope"]
        with pytest.raises(SchemaError):
            Scenario.from_dict(obj)

    def test_weight_must_be_at_least_two(self):
        obj = build_theorem_a_p5()
        obj["weight"] = 1
        with pytest.raises(SchemaError):
            Scenario.from_dict(obj)

    def test_non_invertible_image(self):
        obj = build_theorem_a_p5()
        obj["elements"]["g0"]["matrix"] = Mat2(R5, 5, 0, 0, 1).serialize()
        with pytest.raises(InvalidRepresentation):
            Scenario.from_dict(obj)

    def test_nonprime_place_residue(self):
        obj = build_theorem_a_p5()
        obj["places"][1]["residue"] = 15
        with pytest.raises(SchemaError):
            Scenario.from_dict(obj)

    def test_load_missing_file(self):
        with pytest.raises(SchemaError):
            Scenario.load("/does/not/exist.json")

    def test_infinite_place_accepted(self):
        obj = build_theorem_a_p5()
        obj["places"].append({"label": "infinity", "residue": "infinity",
                              "ramified": False, "frobenius": None,
                              "inertia": []})
        s = Scenario.from_dict(obj)
        assert run_checks(s).all_pass

    def test_p_equal_two_rejected(self):
        obj = build_theorem_a_p5()
        obj["ring"] = {"p": 2, "n": 2, "m": 1}
        with pytest.raises(SchemaError):
            Scenario.from_dict(obj)

    def test_missing_place_at_p_fails_c3(self):
        obj = build_theorem_a_p5()
        obj["places"] = [pl for pl in obj["places"] if pl["label"] != "p"]
        v = check_c3(Scenario.from_dict(obj))
        assert v.status == FAIL and "no place at p" in v.witness


class TestPassingTemplates:
    @pytest.mark.parametrize("builder", [build_theorem_a_p5, build_theorem_a_p3,
                                         build_theorem_b_p5])
    def test_all_checks_pass(self, builder):
        s = Scenario.from_dict(builder())
        report = run_checks(s)
        assert report.all_pass, report.serialize()

    def test_b_shape_not_applicable_for_a_claims(self, a5):
        report = run_checks(a5)
        assert report.b_shape.status == NOT_APPLICABLE

    def test_conductor_squarefree_prime_to_p(self):
        for builder, expected in ((build_theorem_a_p5, 33),
                                  (build_theorem_a_p3, 7),
                                  (build_theorem_b_p5, 11)):
            s = Scenario.from_dict(builder())
            cond = artin_conductor_tame(s)
            assert cond["value"] == expected
            assert cond["squarefree"] and cond["prime_to_p"]
            assert all(e == 1 for e in cond["exponents"].values())


class TestC1:
    def test_det_equation_witness(self, a5):
        obj = build_theorem_a_p5()
        obj["elements"]["g0"]["psi"] = R5.elem(3).serialize()
        v = check_c1(Scenario.from_dict(obj))
        assert v.status == FAIL and "g0" in v.witness

    def test_psi_ramified_at_p(self):
        obj = build_theorem_a_p5()
        obj["elements"]["i_p"]["psi"] = R5.elem(6).serialize()
        v = check_c1(Scenario.from_dict(obj))
        assert v.status == FAIL

    def test_passes_on_template(self, a5):
        assert check_c1(a5).status == PASS


class TestC2:
    def test_passes_on_template(self, a5):
        assert check_c2(a5).status == PASS

    def test_reducible_image(self):
        obj = build_theorem_a_p5()
        obj["elements"]["g1"]["matrix"] = Mat2(R5, 2, 0, 0, 13).serialize()
        v = check_c2(Scenario.from_dict(obj))
        assert v.status == FAIL

    def test_transvection_clause_at_p3(self):
        obj, flip = build_mutations()["c2_no_transvection_p3"]
        v = check_c2(Scenario.from_dict(obj))
        assert v.status == FAIL and "transvection" in v.witness

    def test_transvection_found_at_p3(self):
        s = Scenario.from_dict(build_theorem_a_p3())
        v = check_c2(s)
        assert v.status == PASS and v.details.get("transvection_found")


class TestC3:
    def test_passes_and_extracts_characters(self, a5):
        v = check_c3(a5)
        assert v.status == PASS
        assert v.details["psi1"]["frob_p"] == [2]
        assert v.details["psi2"]["frob_p"] == [1]

    def test_weight_two_with_equal_characters(self):
        obj, _ = build_mutations()["c3_violation"]
        v = check_c3(Scenario.from_dict(obj))
        assert v.status == FAIL and "chi^(k-2)" in v.witness

    def test_irreducible_at_p(self):
        obj, _ = build_mutations()["c3_not_ordinary"]
        v = check_c3(Scenario.from_dict(obj))
        assert v.status == FAIL and "ordinary" in v.witness


class TestC4:
    def test_passes_on_template(self, a5):
        v = check_c4(a5)
        assert v.status == PASS
        assert v.details["q1"]["branch"] == "p | #residual inertia"
        assert v.details["q3"]["frobenius_order_mod_p"] == 5

    def test_split_with_ramified_twist(self):
        obj, _ = build_mutations()["c4_split_ramified_twist"]
        assert check_c4(Scenario.from_dict(obj)).status == FAIL

    def test_steinberg_with_wrong_star_shape(self):
        obj, _ = build_mutations()["c4_steinberg_shape"]
        assert check_c4(Scenario.from_dict(obj)).status == FAIL

    def test_unramified_q_one_mod_p_order(self):
        obj, _ = build_mutations()["c4_frob_order"]
        v = check_c4(Scenario.from_dict(obj))
        assert v.status == FAIL and "prime to p" in v.witness


class TestTheoremBShape:
    def test_passes_on_template(self):
        s = Scenario.from_dict(build_theorem_b_p5())
        v = check_theorem_b_shape(s)
        assert v.status == PASS
        assert v.details["declared"]["chi_power_trivial_on_inertia"]
        assert v.details["k = p^n(p-1)+1"]["chi_power_trivial_on_inertia"]
        assert v.details["k = p^(n-1)(p-1)+1"]["chi_power_trivial_on_inertia"]
        assert v.details["k = p^n(p-1)+1"]["k"] == 101
        assert v.details["k = p^(n-1)(p-1)+1"]["k"] == 21

    def test_ramified_at_p_fails(self):
        obj, _ = build_mutations()["b_shape_ramified_at_p"]
        assert check_theorem_b_shape(Scenario.from_dict(obj)).status == FAIL


class TestOddnessDerivedData:
    def test_declared_conjugation_has_r2_shape(self, a5):
        report = run_checks(a5)
        assert report.oddness == {"declared": True, "label": "conj",
                                  "r2_shape_ok": True}

    def test_wrong_conjugation_shape_is_reported(self):
        obj = build_theorem_a_p5()
        obj["elements"]["conj"]["chi"] = GaloisRing(5, 2).one.serialize()
        obj["elements"]["conj"]["psi"] = GaloisRing(5, 2).elem(24).serialize()
        report = run_checks(Scenario.from_dict(obj))
        assert report.oddness["r2_shape_ok"] is False
        # derived data only: the named verdicts are untouched
        assert report.all_pass

    def test_undeclared(self):
        obj = build_theorem_a_p5()
        obj["complex_conjugation"] = None
        report = run_checks(Scenario.from_dict(obj))
        assert report.oddness == {"declared": False}


class TestMutationMatrix:
    """Each bundled mutation flips exactly its own verdict."""

    def base_statuses(self, obj):
        return {k: v.status
                for k, v in run_checks(Scenario.from_dict(obj)).verdict_map().items()}

    def test_each_mutation_flips_one_verdict(self):
        mutations = build_mutations()
        assert len(mutations) >= 8
        bases = {
            "a5": self.base_statuses(build_theorem_a_p5()),
            "a3": self.base_statuses(build_theorem_a_p3()),
            "b5": self.base_statuses(build_theorem_b_p5()),
        }
        for name, (obj, expected_flip) in mutations.items():
            if "p3" in name:
                base = bases["a3"]
            elif name.startswith("b_"):
                base = bases["b5"]
            else:
                base = bases["a5"]
            mutated = self.base_statuses(obj)
            flips = sorted(k for k in mutated if mutated[k] != base[k])
            assert flips == [expected_flip], \
                f"{name}: flipped {flips}, expected [{expected_flip}]"
            assert mutated[expected_flip] == FAIL

    def test_clause_coverage(self):
        flips = [flip for _, flip in build_mutations().values()]
        assert flips.count("C1") >= 2
        assert flips.count("C2") >= 2
        assert flips.count("C3") >= 2
        assert flips.count("C4") >= 3
        assert flips.count("B-shape") >= 1
