from __future__ import annotations

import json

import pytest

from lzcli.figures import (
    ADIABATIC_WINDOWS,
    DIABATIC_WINDOWS,
    FIGURE_FILES,
    FIGURE_OMEGAS,
    build_figures,
    check_figures_byte_stable,
    write_figures,
)
from lztimes.validation import get_registry


def _meta(text: str) -> dict:
    return json.loads(text.splitlines()[0].removeprefix("# "))["meta"]


def test_windows_cover_every_coupling() -> None:
    assert tuple(DIABATIC_WINDOWS) == FIGURE_OMEGAS
    assert tuple(ADIABATIC_WINDOWS) == FIGURE_OMEGAS
    for win in (*DIABATIC_WINDOWS.values(), *ADIABATIC_WINDOWS.values()):
        assert win.start < 0.0 < win.stop
        assert win.step > 0.0


def test_byte_stability_check_is_registered_as_slow() -> None:
    entry = get_registry().get("figures_byte_stable")
    assert entry is not None
    assert entry.slow
    assert entry.threshold == 0.0


def test_write_figures_creates_the_directory(tmp_path) -> None:
    out = tmp_path / "nested" / "figures"
    written = write_figures(out, {"a.csv": "x\n", "b.csv": "y\n"})
    assert [p.name for p in written] == ["a.csv", "b.csv"]
    assert (out / "b.csv").read_text(encoding="utf-8") == "y\n"


@pytest.mark.slow
def test_bundle_files_and_markers(cfg) -> None:
    bundle = build_figures(cfg, epsilon=0.1, max_workers=4)
    assert sorted(bundle) == sorted(f"{name}.csv" for name in FIGURE_FILES)

    markers = _meta(bundle["adiabatic_detail.csv"])["markers"]
    assert markers["lower_band"] < markers["p_inf"] < markers["upper_band"]
    assert markers["jump_initial"] < 0.0 < markers["jump_final"]
    assert markers["relax"] > markers["jump_final"]

    diabatic = _meta(bundle["diabatic_traces.csv"])
    assert set(diabatic["p_inf"]) == {f"{w:g}" for w in FIGURE_OMEGAS}
    assert diabatic["figure"] == "diabatic_traces"


@pytest.mark.slow
def test_bundle_is_byte_stable(cfg) -> None:
    measurement = check_figures_byte_stable(cfg, 0.1)
    assert measurement.measured == 0.0
