import os
import subprocess
import sys
from pathlib import Path

VENV_NAME = "faabe-env"
REQUIREMENTS = "requirements.txt"

# What the hint suggests once the environment is active
ENTRY_POINTS = [
    "python -m faabe selftest",
    "python -m faabe describe",
    "python -m faabe run --dataset kemerer",
    "python -m faabe suite --config suite.conf",
]


def venv_paths(env_name=VENV_NAME):
    """Interpreter and activation script inside ``env_name`` for this platform."""
    root = Path(env_name)
    if os.name == "nt":
        return root / "Scripts" / "python.exe", f".\\{env_name}\\Scripts\\activate"
    return root / "bin" / "python", f"source {env_name}/bin/activate"


def step(label, cmd):
    print(f"\n🔧 {label}: {' '.join(str(c) for c in cmd)}")
    subprocess.run([str(c) for c in cmd], check=True)


def ensure_virtualenv(env_name=VENV_NAME):
    python, _ = venv_paths(env_name)
    if python.exists():
        print(f"✅ Reusing {env_name}")
        return python
    print(f"📦 Creating virtual environment: {env_name}")
    step("venv", [sys.executable, "-m", "venv", env_name])
    return python


def install_requirements(python, requirements=REQUIREMENTS):
    """pip through the venv interpreter, so Windows can upgrade pip in place."""
    step("pip", [python, "-m", "pip", "install", "--upgrade", "pip"])
    step("requirements", [python, "-m", "pip", "install", "--no-cache-dir", "-r", requirements])


def verify(python):
    """Run the package selftest; False when it fails."""
    try:
        step("selftest", [python, "-m", "faabe", "selftest", "--quiet"])
    except subprocess.CalledProcessError as e:
        print(f"⚠️ selftest exited with {e.returncode}")
        return False
    return True


def activation_hint(env_name=VENV_NAME):
    _, activate = venv_paths(env_name)
    lines = [f"💡 Activate with:\n   {activate}", "", "Then try:"]
    lines += [f"   {entry}" for entry in ENTRY_POINTS]
    return "\n".join(lines)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    print("📐 Setting up the FAABE environment...")
    python = ensure_virtualenv()
    install_requirements(python)
    ok = "--no-verify" in argv or verify(python)
    print("\n" + activation_hint())
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
