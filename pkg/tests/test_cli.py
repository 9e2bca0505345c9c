"""Command line: replay golden file, serve exit codes, chat loop, ingest."""

from __future__ import annotations

import json
import os
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest

from examsim.cli.main import main
from examsim.cli.replay import ScenarioError, parse_scenario

GOLDEN = Path(__file__).parent / "data" / "golden_transcript.txt"
ENV = {**os.environ, "PYTHONPATH": str(Path(__file__).parent.parent / "src")}


def run_cli(args: list[str], **kwargs) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "examsim.cli.main", *args],
        capture_output=True,
        text=True,
        env=kwargs.pop("env", ENV),
        timeout=kwargs.pop("timeout", 60),
        **kwargs,
    )


class TestReplay:
    def test_bundled_scenario_matches_golden_bytes(self, tmp_path) -> None:
        out = tmp_path / "replay.txt"
        assert main(["replay", "--out", str(out)]) == 0
        assert out.read_bytes() == GOLDEN.read_bytes()

    def test_same_script_twice_identical(self, tmp_path) -> None:
        first, second = tmp_path / "a.txt", tmp_path / "b.txt"
        assert main(["replay", "--out", str(first)]) == 0
        assert main(["replay", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_empty_scenario_is_config_error(self, tmp_path) -> None:
        empty = tmp_path / "empty.scenario"
        empty.write_text("# nothing\n", encoding="utf-8")
        assert main(["replay", "--scenario", str(empty)]) == 2

    def test_scenario_without_actions_rejected(self) -> None:
        with pytest.raises(ScenarioError):
            parse_scenario("@subject OS\n@topic processes\n")

    def test_custom_scenario_runs(self, tmp_path) -> None:
        scenario = tmp_path / "short.scenario"
        scenario.write_text(
            "@subject Networks\n@topic routing\n"
            "answer: Routers forward packets toward the destination.\n"
            "answer: Distance vector exchanges tables with neighbors.\n"
            "answer: Link state floods topology information.\n"
            "grade\ncontinue: conclude\n",
            encoding="utf-8",
        )
        out = tmp_path / "out.txt"
        assert main(["replay", "--scenario", str(scenario), "--out", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        assert "grade: 1.7 (87%)" in text
        assert "concluded: answers=3 hints=0 grades=1" in text

    def test_replay_subprocess_writes_stdout(self) -> None:
        result = run_cli(["replay"])
        assert result.returncode == 0
        assert result.stdout.encode() == GOLDEN.read_bytes()


class TestServe:
    def test_missing_token_exits_2(self) -> None:
        env = {k: v for k, v in ENV.items() if k != "EXAMSIM_API_TOKEN"}
        result = run_cli(["serve"], env=env)
        assert result.returncode == 2
        assert "EXAMSIM_API_TOKEN" in result.stderr

    def test_bad_config_file_exits_2(self, tmp_path) -> None:
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"provider_kind": "carrier-pigeon"}), encoding="utf-8")
        env = {**ENV, "EXAMSIM_API_TOKEN": "t"}
        result = run_cli(["serve", "--config", str(config)], env=env)
        assert result.returncode == 2

    def test_unknown_config_key_exits_2(self, tmp_path) -> None:
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"porg": 1}), encoding="utf-8")
        env = {**ENV, "EXAMSIM_API_TOKEN": "t"}
        result = run_cli(["serve", "--config", str(config)], env=env)
        assert result.returncode == 2
        assert "porg" in result.stderr

    def test_port_in_use_exits_3(self, tmp_path) -> None:
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        try:
            env = {**ENV, "EXAMSIM_API_TOKEN": "t"}
            result = run_cli(
                ["serve", "--port", str(port), "--data-dir", str(tmp_path)], env=env
            )
            assert result.returncode == 3
            assert "cannot bind" in result.stderr
        finally:
            blocker.close()

    def test_valid_config_prints_listening_line(self, tmp_path) -> None:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
        probe.close()
        env = {**ENV, "EXAMSIM_API_TOKEN": "t"}
        process = subprocess.Popen(
            [
                sys.executable,
                "-m",
                "examsim.cli.main",
                "serve",
                "--port",
                str(port),
                "--data-dir",
                str(tmp_path),
            ],
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            text=True,
            env=env,
        )
        try:
            line = process.stdout.readline()
            assert f"listening on http://127.0.0.1:{port}" in line
            deadline = time.monotonic() + 15
            while time.monotonic() < deadline:
                try:
                    with socket.create_connection(("127.0.0.1", port), timeout=1):
                        break
                except OSError:
                    time.sleep(0.1)
            else:
                pytest.fail("server never accepted connections")
        finally:
            process.terminate()
            process.wait(timeout=10)


class TestChat:
    def test_scripted_dialogue(self, tmp_path) -> None:
        out = tmp_path / "chat transcript.txt"
        commands = "\n".join(
            [
                "A process is a program in execution.",
                "/grade",  # only 1 answer -> min-questions message
                "/hint",
                "The scheduler picks the next process.",
                "The kernel saves registers on a context switch.",
                "/grade",
                "/continue conclude",
            ]
        )
        result = run_cli(
            ["chat", "--subject", "OS", "--topic", "processes", "--out", str(out)],
            input=commands + "\n",
        )
        assert result.returncode == 0, result.stderr
        assert "at least 3 answered questions" in result.stdout
        assert "hint>" in result.stdout
        assert "grade> 1.7 (87%)" in result.stdout
        assert out.exists()
        transcript = out.read_text(encoding="utf-8")
        assert "grade: 1.7 (87%)" in transcript

    def test_hint_in_exam_mode_prints_notice(self) -> None:
        result = run_cli(
            ["chat", "--subject", "OS", "--topic", "x", "--mode", "exam"],
            input="/hint\n/quit\n",
            cwd="/tmp",
        )
        assert result.returncode == 0
        assert "hints are disabled in exam mode" in result.stdout

    def test_quit_writes_transcript(self, tmp_path) -> None:
        out = tmp_path / "t.txt"
        result = run_cli(
            ["chat", "--subject", "OS", "--topic", "x", "--out", str(out)],
            input="/quit\n",
        )
        assert result.returncode == 0
        assert out.exists()
        assert "examiner:" in out.read_text(encoding="utf-8")


class TestIngest:
    def test_ingest_creates_document(self, tmp_path) -> None:
        source = tmp_path / "notes.md"
        source.write_text("# Paging\n\nPages map to frames.", encoding="utf-8")
        result = run_cli(
            ["ingest", "--file", str(source), "--title", "Paging", "--data-dir", str(tmp_path)]
        )
        assert result.returncode == 0
        assert "ingested: " in result.stdout
        stored = list((tmp_path / "documents").glob("*.json"))
        assert len(stored) == 1

    def test_missing_file_exits_2(self, tmp_path) -> None:
        result = run_cli(["ingest", "--file", str(tmp_path / "absent.txt")])
        assert result.returncode == 2

    def test_empty_file_exits_2(self, tmp_path) -> None:
        source = tmp_path / "empty.txt"
        source.write_text("", encoding="utf-8")
        result = run_cli(["ingest", "--file", str(source), "--data-dir", str(tmp_path)])
        assert result.returncode == 2


def test_no_subcommand_exits_2() -> None:
    result = run_cli([])
    assert result.returncode == 2
