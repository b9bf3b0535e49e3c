"""CLI commands, report serialization, bit dumps, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

from diqrng import cli
from diqrng.cli import main, read_bits, serialize_report, write_bits


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, argv):
    code, out = run_cli(capsys, argv)
    return code, json.loads(out)


class TestSerializeReport:
    def test_twelve_significant_digits(self):
        text = serialize_report({"a": 0.5 * (1 + 1 / math.sqrt(2))})
        assert '"a": 0.853553390593' in text

    def test_valid_json_with_numpy_scalars(self):
        doc = {
            "i": np.int64(3),
            "f": np.float64(0.25),
            "b": np.bool_(True),
            "nested": {"list": [1, 2.5, "x", None]},
        }
        parsed = json.loads(serialize_report(doc))
        assert parsed == {"i": 3, "f": 0.25, "b": True, "nested": {"list": [1, 2.5, "x", None]}}

    def test_key_order_is_insertion_order(self):
        text = serialize_report({"z": 1, "a": 2})
        assert text.index('"z"') < text.index('"a"')

    def test_empty_containers(self):
        assert json.loads(serialize_report({"d": {}, "l": []})) == {"d": {}, "l": []}


class TestBitDumps:
    def test_64_bit_lines(self, tmp_path):
        bits = np.arange(150) % 2
        path = tmp_path / "dump.bits"
        write_bits(path, bits)
        lines = path.read_text().splitlines()
        assert [len(l) for l in lines] == [64, 64, 22]
        assert np.array_equal(read_bits(path), bits)

    def test_round_trip_empty_line_handling(self, tmp_path):
        path = tmp_path / "dump.bits"
        write_bits(path, np.array([1, 0, 1], dtype=np.uint8))
        assert list(read_bits(path)) == [1, 0, 1]


class TestExitCodes:
    def test_pass_is_zero(self, capsys, tmp_path):
        code, out = run_cli(
            capsys,
            ["run-protocol", "--protocol", "P", "--rounds", "20000", "--seed", "42", "--deterministic"],
        )
        assert code == 0
        # the quantum-value target rendered at 12 significant digits
        assert '"target": 0.853553390593' in out

    def test_abort_is_two(self, capsys):
        code, report = run_json(
            capsys,
            [
                "run-protocol", "--protocol", "Q", "--device", "x1-forwarder",
                "--rounds", "10000", "--seed", "42", "--deterministic",
            ],
        )
        assert code == 2
        assert report["verdict"] == "ABORT"
        by_name = {c["name"]: c for c in report["conditions"]}
        assert by_name["odd_guess_half"]["estimate"] == 1.0

    @pytest.mark.parametrize(
        "protocol,kind",
        [
            ("P", "always-zero"),
            ("P", "x1-forwarder"),
            ("P", "input-guesser"),
            ("Q", "always-zero"),
            ("Q", "x1-forwarder"),
            ("Q", "perfect-even-a"),
            ("Q", "perfect-even-b"),
            ("Q", "input-guesser"),
        ],
    )
    def test_adversarial_aborts_exit_two(self, capsys, protocol, kind):
        code, report = run_json(
            capsys,
            ["run-protocol", "--protocol", protocol, "--device", kind,
             "--rounds", "20000", "--seed", "7", "--deterministic"],
        )
        assert code == 2
        assert report["verdict"] == "ABORT"

    def test_usage_error_is_one(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["run-protocol", "--protocol", "X"])
        assert err.value.code == 1

    def test_deterministic_without_seed_is_one(self, capsys, monkeypatch):
        monkeypatch.delenv(cli.SEED_ENV_VAR, raising=False)
        code = main(["play-game", "--game", "chsh", "--rounds", "100", "--deterministic"])
        assert code == 1

    def test_runtime_error_is_one(self, capsys):
        code = main(["analyze", "--seed", "1"])
        assert code == 1


class TestDeterminism:
    def test_identical_manifests_identical_bytes(self, tmp_path, monkeypatch):
        argv = [
            "run-protocol", "--protocol", "Q", "--rounds", "30000", "--seed", "99",
            "--deterministic", "--bits-out", "run.bits", "--out", "report.json",
        ]
        outputs = []
        for sub in ("one", "two"):
            d = tmp_path / sub
            d.mkdir()
            monkeypatch.chdir(d)
            assert main(argv) == 0
            outputs.append(((d / "report.json").read_bytes(), (d / "run.bits").read_bytes()))
        assert outputs[0] == outputs[1]

    def test_seed_changes_bits(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        main(["run-protocol", "--protocol", "P", "--rounds", "5000", "--seed", "1",
              "--deterministic", "--bits-out", "a.bits", "--out", "a.json"])
        main(["run-protocol", "--protocol", "P", "--rounds", "5000", "--seed", "2",
              "--deterministic", "--bits-out", "b.bits", "--out", "b.json"])
        assert (tmp_path / "a.bits").read_bytes() != (tmp_path / "b.bits").read_bytes()

    def test_timestamp_only_without_deterministic(self, capsys):
        _, report = run_json(capsys, ["bruteforce-classical", "--game", "chsh", "--seed", "1"])
        assert "timestamp" in report["manifest"]
        _, report = run_json(
            capsys, ["bruteforce-classical", "--game", "chsh", "--seed", "1", "--deterministic"]
        )
        assert "timestamp" not in report["manifest"]


class TestSeedResolution:
    def test_env_var_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "4242")
        _, report = run_json(capsys, ["play-game", "--game", "chsh", "--rounds", "100", "--deterministic"])
        assert report["manifest"]["seed"] == 4242

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "4242")
        _, report = run_json(
            capsys, ["play-game", "--game", "chsh", "--rounds", "100", "--seed", "7", "--deterministic"]
        )
        assert report["manifest"]["seed"] == 7

    def test_random_seed_recorded(self, capsys, monkeypatch):
        monkeypatch.delenv(cli.SEED_ENV_VAR, raising=False)
        _, report = run_json(capsys, ["play-game", "--game", "chsh", "--rounds", "100"])
        assert isinstance(report["manifest"]["seed"], int)


class TestConfigFile:
    def test_file_supplies_flags_and_cli_overrides(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"game": "tavakoli", "rounds": 500, "seed": 3}))
        _, report = run_json(
            capsys,
            ["play-game", "--config", str(cfg), "--rounds", "1000", "--deterministic"],
        )
        assert report["manifest"]["config"]["game"] == "tavakoli"
        assert report["manifest"]["config"]["rounds"] == 1000
        assert report["manifest"]["seed"] == 3


class TestCommands:
    def test_play_game_exact_matches_sampled(self, capsys):
        _, report = run_json(
            capsys, ["play-game", "--game", "chsh1", "--rounds", "50000", "--seed", "5", "--deterministic"]
        )
        exact = report["exact"]["value"]
        sampled = report["sampled"]["win_frequency"]
        assert abs(exact - 0.8535533905932737) < 1e-12
        assert abs(sampled - exact) < 4 * math.sqrt(exact * (1 - exact) / 50000)

    def test_play_game_g2_reports_three_scores(self, capsys):
        _, report = run_json(
            capsys, ["play-game", "--game", "g2", "--rounds", "20000", "--seed", "5", "--deterministic"]
        )
        assert report["exact"] == {"even_win": 1.0, "odd_guess": 0.5, "augmented": 0.75}
        assert report["sampled"]["even_win"] == 1.0

    def test_bruteforce_report(self, capsys):
        code, report = run_json(
            capsys, ["bruteforce-classical", "--game", "chsh", "--seed", "1", "--deterministic"]
        )
        assert code == 0
        assert report["max_score"] == 0.75
        assert report["strategies_enumerated"] == 16
        assert report["argmax_tables"] == [[0, 0], [0, 0]]

    def test_bruteforce_g2_frontier(self, capsys):
        _, report = run_json(
            capsys, ["bruteforce-classical", "--game", "g2", "--seed", "1", "--deterministic"]
        )
        signatures = {(f["even_win"], f["odd_guess"]) for f in report["frontier"]}
        assert (1.0, 0.5) not in signatures
        assert {(1.0, 0.0), (1.0, 1.0)} <= signatures

    def test_equivalence_check_all(self, capsys):
        code, report = run_json(capsys, ["equivalence-check", "--seed", "1", "--deterministic"])
        assert code == 0
        assert report["all_passed"] is True
        assert {e["pair"] for e in report["checks"]} == {"g-vs-tavakoli", "g-vs-chsh1", "g1-vs-g2"}

    def test_guessing_bounds(self, capsys):
        code, report = run_json(
            capsys, ["guessing-bounds", "--trials", "50000", "--seed", "6", "--deterministic"]
        )
        assert code == 0
        assert report["all_within_four_se"] is True

    def test_run_protocol_report_sections(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, report = run_json(
            capsys,
            ["run-protocol", "--protocol", "Q", "--rounds", "60000", "--seed", "42",
             "--gamma", "0.5", "--deterministic", "--bits-out", "q.bits"],
        )
        assert code == 0
        assert set(report["bins"]) == {"check", "rand"}
        assert report["output_bits_path"] == "q.bits"
        assert report["emitted_bits"] > 0
        assert report["entropy"]["shannon"] > 0.99
        assert {b["name"] for b in report["battery"]} == {"monobit", "runs", "serial"}
        by_name = {c["name"]: c for c in report["conditions"]}
        assert by_name["odd_guess_half"]["detail"]["test_portion"] == math.ceil(
            0.5 * report["bins"]["rand"]
        )
        assert report["emitted_bits"] == report["bins"]["rand"] - by_name["odd_guess_half"]["detail"]["test_portion"]

    def test_run_protocol_abort_has_no_bits_path(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, report = run_json(
            capsys,
            ["run-protocol", "--protocol", "P", "--device", "always-zero", "--rounds", "20000",
             "--seed", "1", "--deterministic", "--bits-out", "x.bits"],
        )
        assert code == 2
        assert "output_bits_path" not in report
        assert not (tmp_path / "x.bits").exists()

    def test_mixed_device_note_in_report(self, capsys):
        _, report = run_json(
            capsys,
            ["run-protocol", "--protocol", "Q", "--device", "mixed-perfect-even",
             "--rounds", "40000", "--seed", "3", "--deterministic"],
        )
        assert any("mixed_perfect_even" in note for note in report["notes"])

    def test_analyze_round_trip(self, capsys, tmp_path):
        bits = np.random.default_rng(9).integers(0, 2, 4096)
        path = tmp_path / "bits.txt"
        write_bits(path, bits)
        code, report = run_json(
            capsys, ["analyze", "--bits-in", str(path), "--seed", "1", "--deterministic"]
        )
        assert code == 0
        assert report["n_bits"] == 4096
        assert report["entropy"]["shannon"] > 0.99
        assert len(report["battery"]) == 3

    def test_generate_mode_rate_one(self, capsys):
        _, report = run_json(
            capsys,
            ["run-protocol", "--protocol", "P", "--mode", "generate", "--rounds", "4096",
             "--seed", "11", "--deterministic"],
        )
        assert report["emitted_bits"] == 4096
