import json

import pytest

from app.cli import EXIT_NOT_FOUND, EXIT_OK, EXIT_USAGE, attach_negative_values, main


def run_json(capsys, *argv):
    code = main(list(argv) + ["--json"])
    return code, json.loads(capsys.readouterr().out)


class TestArgv:
    def test_negative_values_are_attached(self):
        assert attach_negative_values(["phi", "--level", "-2/1", "--weight", "-1,1/2", "--json"]) == [
            "phi", "--level=-2/1", "--weight=-1,1/2", "--json",
        ]

    def test_switches_are_left_alone(self):
        assert attach_negative_values(["x", "--json", "-1"]) == ["x", "--json", "-1"]


class TestCheckStar:
    def test_found(self, capsys):
        code, doc = run_json(capsys, "check-star", "--rs", "A1", "--level", "generic", "--from", "3/1", "--to", "-3/1")
        assert code == EXIT_OK
        assert doc["found"] is True
        assert len(doc["certificate"]["steps"]) == 1
        assert doc["certificate"]["steps"][0]["to"] == ["-3/1"]

    def test_not_found(self, capsys):
        code, doc = run_json(capsys, "check-star", "--rs", "A1", "--level", "generic", "--from", "3/1", "--to", "1/1")
        assert code == EXIT_NOT_FOUND
        assert doc["found"] is False and doc["certificate"] is None

    def test_critical_level(self, capsys):
        code = main(["check-star", "--rs", "A1", "--level", "0/1", "--from", "3/1", "--to", "-3/1"])
        assert code == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_text_output(self, capsys):
        assert main(["check-star", "--rs", "A1", "--level", "generic", "--from", "3", "--to", "-3"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("chain of length 1")


class TestUsage:
    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_missing_root_system(self, capsys):
        assert main(["phi", "--level", "-2/1", "--weight", "1"]) == EXIT_USAGE

    def test_bad_weight(self, capsys):
        assert main(["phi", "--rs", "A1", "--level", "-2/1", "--weight", "one"]) == EXIT_USAGE

    def test_rank_mismatch(self, capsys):
        assert main(["phi", "--rs", "A2", "--level", "-2/1", "--weight", "1"]) == EXIT_USAGE


class TestCharges:
    def test_phi_at_rho(self, capsys):
        code, doc = run_json(capsys, "phi", "--rs", "A1", "--level", "-2/1", "--weight", "1")
        assert code == EXIT_OK
        assert doc["value"] == "0"

    def test_phi_generic(self, capsys):
        assert main(["phi", "--rs", "A1", "--level", "generic", "--weight", "0"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "-1/(2*κ)"

    def test_affine_weight(self, capsys):
        code, doc = run_json(capsys, "affine-weight", "--rs", "A1", "--level", "1", "--weight", "1")
        assert code == EXIT_OK
        assert doc == {"finite": ["1/1"], "level": "-1", "delta": "-3/4"}

    def test_l0_with_oracle_value(self, capsys):
        code, doc = run_json(capsys, "l0", "--rs", "A1", "--level", "-2", "--weight", "2", "--depth", "3")
        assert code == EXIT_OK
        assert doc["convention"] == "aw"
        assert doc["predicted"] == "21/8"
        assert doc["oracle"] == "21/8"

    def test_l0_ph(self, capsys):
        code, doc = run_json(
            capsys, "l0", "--rs", "A1", "--level", "-2", "--weight", "2", "--depth", "3", "--l0-convention", "ph"
        )
        assert doc["predicted"] == "9/4"


class TestLinkageCommands:
    def test_blocks(self, capsys):
        code, doc = run_json(capsys, "blocks", "--rs", "A1", "--level", "-2/1", "--box", "4", "--relation", "rational")
        assert code == EXIT_OK
        assert [b["members"] for b in doc["blocks"]] == [
            [["-4/1"], ["0"], ["4/1"]],
            [["-3/1"], ["-1/1"], ["1/1"], ["3/1"]],
            [["-2/1"], ["2/1"]],
        ]

    def test_blocks_need_weights(self, capsys):
        assert main(["blocks", "--rs", "A1", "--relation", "coarse"]) == EXIT_USAGE

    def test_subquotients(self, capsys):
        code, doc = run_json(capsys, "subquotients", "--rs", "A1", "--level", "generic", "--hw", "2")
        assert code == EXIT_OK
        assert [(c["weight"], c["loop_depth"]) for c in doc["candidates"]] == [(["-4/1"], 0)]

    def test_linked_trail(self, capsys):
        code, doc = run_json(capsys, "linked", "--rs", "A1", "--level", "generic", "--from", "-3", "--to", "3")
        assert code == EXIT_OK
        assert doc["trail"][0]["kind"] == "weyl"
        assert doc["trail"][0]["weyl_index"] == 1

    def test_root_system(self, capsys):
        code, doc = run_json(capsys, "root-system", "--rs", "B2")
        assert code == EXIT_OK
        assert doc["dual_coxeter_number"] == 3

    def test_out_file(self, capsys, tmp_path):
        out = tmp_path / "phi.json"
        assert main(["phi", "--rs", "A1", "--level", "-2", "--weight", "2", "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text(encoding="utf-8"))["value"] == "-3/4"


class TestOracleCommands:
    def test_verify_kk_agreement(self, capsys):
        code, doc = run_json(
            capsys, "verify-kk", "--rs", "A1", "--level", "generic", "--hw", "2", "--depth", "0", "--height", "4"
        )
        assert code == EXIT_OK
        assert doc["agrees"] is True
        assert doc["singular"] == [{"weight": ["-4/1"], "depth": 0}]
        assert doc["horizon"] == {"depth_cap": 0, "height_cap": 4}

    def test_singular_vectors(self, capsys):
        code, doc = run_json(
            capsys, "singular-vectors", "--rs", "A1", "--level", "generic", "--hw", "1", "--depth", "0", "--height", "3"
        )
        assert code == EXIT_OK
        assert [(s["depth"], s["weight"]) for s in doc["singular"]] == [(0, ["-3/1"])]

    def test_oracle_rank_limit(self, capsys):
        assert main(["shapovalov", "--rs", "A4", "--level", "-2", "--hw", "0,0,0,0", "--depth", "0"]) == EXIT_USAGE

    @pytest.mark.slow
    def test_selftest_subset(self, capsys):
        code, doc = run_json(capsys, "selftest", "--suite", "l0_arbitration", "--suite", "invariants")
        assert code == EXIT_OK
        assert doc["passed"] is True
