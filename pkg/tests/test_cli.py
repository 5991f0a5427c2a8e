from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from quipqasm.cli import TOOLS, main, run_tool
from quipqasm.harness import gen_qasm, gen_quip
from quipqasm.qasm import write_qasm
from quipqasm.quipper import write_quip

SCRIPT = Path(__file__).resolve().parents[1] / "scripts" / "quip_to_lsc.sh"


def cli(*args: str, stdin: str = "") -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "quipqasm", *args], input=stdin, capture_output=True, text=True,
                          timeout=120)


def test_help_lists_every_tool():
    out = cli("--help")
    assert out.returncode == 0
    for name in TOOLS:
        assert name in out.stdout


@pytest.mark.parametrize("name", sorted(TOOLS))
def test_subcommand_help(name):
    assert cli(name, "--help").returncode == 0


def test_pipe_composition_equals_in_process_composition(qpe_quip_text):
    text = cli("quip-to-qasm", stdin=qpe_quip_text).stdout
    piped = cli("qasm-to-quip", stdin=text)
    assert piped.returncode == 0
    assert piped.stdout == run_tool("qasm-to-quip", run_tool("quip-to-qasm", qpe_quip_text))


@pytest.mark.parametrize("seed", range(5))
def test_composition_on_generated_inputs(seed):
    q = write_qasm(gen_qasm(seed))
    assert cli("qasm-to-quip", stdin=q).stdout == run_tool("qasm-to-quip", q)
    c = write_quip(gen_quip(seed))
    assert cli("quip-to-qasm", stdin=c).stdout == run_tool("quip-to-qasm", c)


def test_files_in_and_out(tmp_path, qpe_quip_text):
    src, dst = tmp_path / "in.quip", tmp_path / "out.qasm"
    src.write_text(qpe_quip_text)
    assert main(["quip-to-qasm", "--in", str(src), "--out", str(dst)]) == 0
    assert dst.read_text() == run_tool("quip-to-qasm", qpe_quip_text)


@pytest.mark.parametrize(
    "args, stdin",
    [
        (("qasm-to-quip",), "OPENQASM 3;\nqubit q\n"),
        (("quip-to-qasm",), 'Inputs: 0:Qbit\nQGate["H"](1)\nOutputs: 0:Qbit\n'),
        (("to-qasm2",), 'Inputs: 0:Qbit\nOutputs: 0:Qbit\n'),
        (("elim-invs", "--in", "/nonexistent/file.qasm"), ""),
        (("qasm-to-quip", "--legacy"), 'OPENQASM 3;\n'),
        (("to-lsc", "--config", "/nonexistent/cfg.json"), 'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\n'),
        (("conformance", "--laws", "commutativity"), ""),
    ],
)
def test_input_errors_exit_one_with_a_diagnostic(args, stdin):
    out = cli(*args, stdin=stdin)
    assert out.returncode == 1 and out.stdout == ""
    assert "error" in out.stderr


def test_syntax_error_is_positioned():
    out = cli("qasm-to-quip", stdin="OPENQASM 3;\nqubit q\n")
    assert "line 3" in out.stderr or "line 2" in out.stderr


def test_legacy_output(qpe_quip_text):
    out = cli("quip-to-qasm", "--legacy", stdin=cli("elim-ctrls", stdin=qpe_quip_text).stdout)
    assert out.returncode == 0 and out.stdout.startswith("OPENQASM 2.0;")
    assert "ctrl" not in out.stdout


def test_elim_ctrls_accepts_both_languages(qpe_qasm):
    text = write_qasm(qpe_qasm)
    out = run_tool("elim-ctrls", text)
    assert out.startswith("OPENQASM 3;") and "ctrl @" not in out


def test_conformance_and_catalog_commands():
    out = cli("conformance", "--samples", "2", "--laws", "retraction,fixpoint")
    assert out.returncode == 0 and "retraction" in out.stdout and "fixpoint" in out.stdout
    out = cli("verify-catalog")
    assert out.returncode == 0 and "rules verified" in out.stdout


def test_closed_pipe_is_not_an_error(qpe_quip_text):
    proc = subprocess.run(f"{sys.executable} -m quipqasm quip-to-qasm | head -c 5", shell=True, input=qpe_quip_text,
                          capture_output=True, text=True, timeout=60)
    assert proc.stdout == "OPENQ" and "Traceback" not in proc.stderr


def test_pipeline_script(qpe_quip_text):
    env_script = ["bash", str(SCRIPT)]
    proc = subprocess.run(env_script, input=qpe_quip_text, capture_output=True, text=True, timeout=120,
                          env={"QUIPQASM": f"{sys.executable} -m quipqasm", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("OPENQASM 2.0;") and "qreg q[" in proc.stdout
