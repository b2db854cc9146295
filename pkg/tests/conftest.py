import pytest

from pairsec.cost_model import GridConfig
from pairsec.families import default_registry
from pairsec.norm_mc import FAST_SAMPLES


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def fast_grid():
    return GridConfig(samples=FAST_SAMPLES, final_method="float")


# criterion number -> title and the individual checks recorded against it
_CRITERIA: dict[int, dict] = {}


class AcceptanceLog:
    def check(self, number: int, title: str, label: str, ok: bool, detail: str = "") -> bool:
        entry = _CRITERIA.setdefault(number, {"title": title, "checks": []})
        entry["checks"].append((label, bool(ok), detail))
        return bool(ok)


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        checks = entry["checks"]
        bad = [c for c in checks if not c[1]]
        verdict = "PASS" if not bad else "FAIL"
        line = f"criterion {number:2d} {verdict}  {entry['title']} ({len(checks) - len(bad)}/{len(checks)} checks)"
        if bad:
            line += "; failing: " + ", ".join(f"{c[0]} {c[2]}".strip() for c in bad)
        tr.write_line(line)
