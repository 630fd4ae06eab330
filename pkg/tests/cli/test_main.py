"""Pytest file for testing `src/blevy/cli/main.py`."""

from __future__ import annotations

from pathlib import Path
from types import SimpleNamespace

import pytest

from blevy.cli.config_file import dump_config, parse_config
from blevy.cli.main import EXIT_FAIL, EXIT_OK, EXIT_USAGE, SEED_ENV, main
from blevy.cli.presets import PRESETS, get_preset
from blevy.oracle import brute_force


@pytest.fixture(autouse=True)
def no_env_seed(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep a seed from the environment out of every test."""
    monkeypatch.delenv(SEED_ENV, raising=False)


def test_constants(capsys: pytest.CaptureFixture[str]) -> None:
    """Unit displacement prints r = 2, c1 = 6, c2 = 2."""
    assert main(["constants", "--preset", "generation"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert "lambda_hat = 1.0" in lines
    assert "r = 2.0" in lines
    assert "c1 = 6.0" in lines
    assert "c2 = 2.0" in lines
    assert "q_ext = 0.0" in lines


def test_constants_from_config_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """A dumped preset loads back through --config."""
    path = tmp_path / "twopoint.cfg"
    path.write_text(dump_config(get_preset("twopoint")))
    assert main(["constants", "--config", str(path)]) == EXIT_OK
    assert "kappa = " in capsys.readouterr().out


def test_malformed_config_is_usage_error(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    """A line without '=' exits 2 and names the line."""
    path = tmp_path / "bad.cfg"
    path.write_text("model.lambda 1\n")
    assert main(["constants", "--config", str(path)]) == EXIT_USAGE
    assert "line 1" in capsys.readouterr().err


def test_subcritical_config_is_usage_error(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    """A critical offspring law is rejected before anything runs."""
    path = tmp_path / "critical.cfg"
    path.write_text(
        "model.lambda = 1\n"
        "model.offspring.kind = deterministic\n"
        "model.offspring.k = 1\n"
        "model.displacement.kind = zero\n"
    )
    assert main(["verify", "--config", str(path), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "blevy: error:" in capsys.readouterr().err
    assert not (tmp_path / "summary.csv").exists()


def test_source_required() -> None:
    """Without --config or --preset the command is a usage error."""
    assert main(["constants"]) == EXIT_USAGE


def test_argparse_errors_and_help() -> None:
    """Unknown commands exit 2, --help exits 0."""
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["constants", "--preset", "null", "--variant", "both"]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK


def test_verify_writes_summary(tmp_path: Path) -> None:
    """A small run on the zero-displacement model passes and writes both files."""
    code = main(
        ["verify", "--preset", "null", "--replicates", "500", "--seed", "1", "--out", str(tmp_path)]
    )
    assert code == EXIT_OK
    assert (tmp_path / "summary.json").exists()
    lines = (tmp_path / "summary.csv").read_text().splitlines()
    assert any(",centered_sum_sq_ode," in line for line in lines)


def test_verify_invalid_replicates(tmp_path: Path) -> None:
    """Zero replicates is a usage error."""
    assert main(["verify", "--preset", "null", "--replicates", "0", "--out", str(tmp_path)]) == (
        EXIT_USAGE
    )


def test_verify_scaled_oracle_fails(tmp_path: Path) -> None:
    """Doubling every oracle value makes verify exit 1."""
    code = main(
        [
            "verify", "--preset", "null", "--replicates", "300", "--checkpoints", "1",
            "--oracle-scale", "2", "--out", str(tmp_path),
        ]
    )
    assert code == EXIT_FAIL


def test_verify_integration_failure_is_usage_error(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    """A failed moment integration exits 2 instead of raising."""
    monkeypatch.setattr(
        brute_force,
        "solve_ivp",
        lambda *args, **kwargs: SimpleNamespace(success=False, message="step size too small"),
    )
    code = main(["verify", "--preset", "null", "--replicates", "10", "--out", str(tmp_path)])
    assert code == EXIT_USAGE
    assert not (tmp_path / "summary.json").exists()


def test_verify_worker_count_does_not_change_output(tmp_path: Path) -> None:
    """summary.csv bodies are byte-identical for 1 and 2 workers."""
    bodies = []
    for workers in ("1", "2"):
        out = tmp_path / f"w{workers}"
        main(
            [
                "verify", "--preset", "twopoint", "--replicates", "200", "--seed", "17",
                "--checkpoints", "1,2", "--workers", workers, "--out", str(out),
            ]
        )
        bodies.append((out / "summary.csv").read_text().splitlines()[1:])
    assert bodies[0] == bodies[1]


def test_converge_needs_four_checkpoints(tmp_path: Path) -> None:
    """A three-point grid is rejected."""
    assert main(["converge", "--preset", "generation", "--out", str(tmp_path)]) == EXIT_USAGE


def test_converge_writes_trace(tmp_path: Path) -> None:
    """One trace row per (run, checkpoint) and one gap row per interval."""
    code = main(
        [
            "converge", "--preset", "cancer-poisson", "--replicates", "6",
            "--checkpoints", "1,2,3,4", "--out", str(tmp_path),
        ]
    )
    assert code == EXIT_OK
    assert len((tmp_path / "trace.csv").read_text().splitlines()) == 2 + 6 * 4
    assert len((tmp_path / "gaps.csv").read_text().splitlines()) == 2 + 3


def test_simulate_and_seed_precedence(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """The seed comes from --seed, then the environment, then the file."""
    args = ["simulate", "--preset", "null", "--out", str(tmp_path)]

    assert main(args) == EXIT_OK
    rows = (tmp_path / "run.csv").read_text().splitlines()
    assert len(rows) == 2 + len(PRESETS["null"].spec.checkpoints)
    assert rows[2].endswith(",0:0")

    monkeypatch.setenv(SEED_ENV, "5")
    assert main(args) == EXIT_OK
    assert (tmp_path / "run.csv").read_text().splitlines()[2].endswith(",5:0")

    assert main([*args, "--seed", "9"]) == EXIT_OK
    assert (tmp_path / "run.csv").read_text().splitlines()[2].endswith(",9:0")

    monkeypatch.setenv(SEED_ENV, "abc")
    assert main(args) == EXIT_USAGE


def test_presets_listing_and_dump(capsys: pytest.CaptureFixture[str]) -> None:
    """Listing names every preset; a dump parses back to the preset."""
    assert main(["presets"]) == EXIT_OK
    listing = capsys.readouterr().out
    for name in PRESETS:
        assert f"{name}: " in listing

    assert main(["presets", "--dump", "phylo-walk"]) == EXIT_OK
    assert parse_config(capsys.readouterr().out) == get_preset("phylo-walk")

    assert main(["presets", "--dump", "nope"]) == EXIT_USAGE
