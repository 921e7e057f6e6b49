import subprocess
import sys
import time
from datetime import datetime
from pathlib import Path

# -------------------------
# CONFIG: full benchmark suite
# -------------------------
# Runs every dataset listed in suite.conf through ABE and FAABE,
# writing results/<dataset>/<seed>/... and results/summary.*

SUITE_CONFIG = Path(__file__).resolve().parent / "suite.conf"
MAX_RETRIES = 3  # Number of attempts when the suite crashes
RETRY_DELAY = 5  # Seconds between attempts

# Exit codes of python -m faabe; only internal errors are worth retrying
EXIT_CONFIG = 1
EXIT_DATA = 2


def log(msg):
    ts = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    print(f"[{ts}] {msg}")


def format_elapsed(elapsed_time):
    hours = int(elapsed_time // 3600)
    minutes = int((elapsed_time % 3600) // 60)
    seconds = int(elapsed_time % 60)
    if hours > 0:
        return f"{hours}h {minutes}m {seconds}s"
    if minutes > 0:
        return f"{minutes}m {seconds}s"
    return f"{seconds}s"


def suite_command(config_path=SUITE_CONFIG, extra_args=()):
    return [sys.executable, "-m", "faabe", "suite", "--config", str(config_path), *extra_args]


def main(argv=None, sleep=time.sleep):
    extra_args = list(sys.argv[1:] if argv is None else argv)
    start_time = time.time()
    returncode = 1

    for attempt in range(1, MAX_RETRIES + 1):
        log(f"=== Starting FAABE suite (Attempt {attempt}/{MAX_RETRIES}) ===")
        try:
            returncode = subprocess.run(suite_command(extra_args=extra_args)).returncode
        except KeyboardInterrupt:
            log("⏸️ Suite interrupted by user")
            break

        if returncode == 0:
            log("✅ Suite completed successfully!")
            break
        if returncode == EXIT_CONFIG:
            log("❌ Configuration error, not retrying. Check suite.conf and the flags.")
            break
        if returncode == EXIT_DATA:
            log("⚠️ Suite finished with dataset failures; see results/summary.json")
            break
        if attempt < MAX_RETRIES:
            log(f"⚠️ Suite failed with exit code {returncode}")
            log(f"🔄 Retrying in {RETRY_DELAY} seconds... (Attempt {attempt + 1}/{MAX_RETRIES})")
            sleep(RETRY_DELAY)
        else:
            log(f"❌ Suite failed after {MAX_RETRIES} attempts. Giving up.")

    log(f"=== Suite finished === (Total time: {format_elapsed(time.time() - start_time)})")
    return returncode


if __name__ == "__main__":
    sys.exit(main())
