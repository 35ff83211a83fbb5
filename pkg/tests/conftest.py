import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if rep.when == "call" and "criterion" in props:
                lines.append((props["criterion"], outcome, props.get("detail", ""), rep.duration))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), outcome, detail, dur in sorted(lines):
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{tag}  {num:2d}. {name} ({dur:.1f} s){'  ' + detail if detail else ''}")
