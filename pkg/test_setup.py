"""
Tests for setup.py (virtual environment bootstrap)
"""

import subprocess
import sys
from types import SimpleNamespace

import pytest

import setup


class FakePip:
    """Stand-in for subprocess.run; the selftest step exits with ``selftest_code``."""

    def __init__(self, selftest_code=0):
        self.selftest_code = selftest_code
        self.commands = []

    def __call__(self, command, check=False, **kwargs):
        self.commands.append(command)
        code = self.selftest_code if "selftest" in command else 0
        if check and code:
            raise subprocess.CalledProcessError(code, command)
        return SimpleNamespace(returncode=code)


@pytest.fixture
def fake_pip(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    fake = FakePip()
    monkeypatch.setattr(subprocess, "run", fake)
    return fake


class TestMain:
    """Test main() step order and exit status."""

    def test_fresh_environment(self, fake_pip, capsys):
        python, _ = setup.venv_paths()

        assert setup.main([]) == 0
        assert fake_pip.commands == [
            [sys.executable, "-m", "venv", setup.VENV_NAME],
            [str(python), "-m", "pip", "install", "--upgrade", "pip"],
            [str(python), "-m", "pip", "install", "--no-cache-dir", "-r", setup.REQUIREMENTS],
            [str(python), "-m", "faabe", "selftest", "--quiet"],
        ]
        assert "Creating virtual environment" in capsys.readouterr().out

    def test_existing_environment_reused(self, fake_pip, capsys):
        python, _ = setup.venv_paths()
        python.parent.mkdir(parents=True)
        python.touch()

        assert setup.main([]) == 0
        assert all(command[1:3] != ["-m", "venv"] for command in fake_pip.commands)
        assert "Reusing faabe-env" in capsys.readouterr().out

    def test_failed_selftest(self, fake_pip, capsys):
        """Test: a failing selftest exits 1 but still prints the activation hint."""
        fake_pip.selftest_code = 3

        assert setup.main([]) == 1
        out = capsys.readouterr().out
        assert "selftest exited with 3" in out
        assert "Activate with" in out

    def test_no_verify(self, fake_pip):
        fake_pip.selftest_code = 3
        assert setup.main(["--no-verify"]) == 0
        assert not any("selftest" in command for command in fake_pip.commands)

    def test_install_failure_propagates(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)

        def broken(command, check=False, **kwargs):
            raise subprocess.CalledProcessError(1, command)

        monkeypatch.setattr(subprocess, "run", broken)
        with pytest.raises(subprocess.CalledProcessError):
            setup.main([])


class TestActivationHint:
    def test_lists_package_entry_points_only(self):
        suggestions = setup.activation_hint().split("Then try:")[1].strip().splitlines()

        assert [line.strip() for line in suggestions] == setup.ENTRY_POINTS
        assert all(entry.startswith("python -m faabe ") for entry in setup.ENTRY_POINTS)
        assert "run.py" not in "\n".join(suggestions)

    def test_activation_command(self):
        assert setup.activation_hint("env").splitlines()[1].strip() == setup.venv_paths("env")[1]
