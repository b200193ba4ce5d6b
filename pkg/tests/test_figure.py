import re

import numpy as np
import pytest

from thompsonmodes.model import build_matrices, model_modes
from thompsonmodes.figure import render_figure, render_svg
from thompsonmodes.pipeline import RecoveryOptions, run_recovery, simulate_measurement


@pytest.fixture
def mono_report(monomeric):
    return run_recovery(simulate_measurement(monomeric), RecoveryOptions(), monomeric)


def line_xs(svg, cls):
    return [float(x) for x in re.findall(rf'<line class="{cls}"[^>]*\bx1="([-\d.]+)"', svg)]


def test_line_counts(mono_report):
    svg = render_svg(mono_report)
    assert len(line_xs(svg, "full-line")) == 5
    subs = line_xs(svg, "sub-line")
    assert len(subs) == 20
    # deletions 1/5 and 2/4 coincide after symmetrization
    assert len(set(subs)) <= 12


def test_deletion_tags(mono_report):
    svg = render_svg(mono_report)
    tags = re.findall(r'<line class="sub-line" data-deletion="(\d+)"', svg)
    assert sorted(set(tags)) == ["1", "2", "3", "4", "5"]
    assert all(tags.count(k) == 4 for k in set(tags))


def test_bar_counts(mono_report, monomeric):
    svg = render_svg(mono_report, model_modes(build_matrices(monomeric)))
    assert svg.count('class="recovered-bar"') == 25
    assert svg.count('class="model-bar"') == 25
    assert 'class="model-bar"' not in render_svg(mono_report)


def test_deterministic(mono_report, tmp_path):
    a = render_figure(mono_report, path=tmp_path / "a.svg")
    b = render_figure(mono_report, path=tmp_path / "b.svg")
    assert a == b
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_shape_mismatch(mono_report):
    with pytest.raises(ValueError):
        render_svg(mono_report, np.eye(4))
