"""Structural checks of the SVG renderer."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET

import pytest

from conftest import DOUBLED_TRIANGLE, SQUARE, triangle_sides
from ellimatch import exact_max_sum, minimize_h, render_svg

NS = "{http://www.w3.org/2000/svg}"


def count(tree, tag):
    return len(tree.findall(f".//{NS}{tag}"))


class TestRenderSvg:
    def test_square_diagonals_structure(self, tmp_path):
        m = exact_max_sum(SQUARE)
        w = minimize_h(SQUARE, m)
        path = tmp_path / "fig.svg"
        doc = render_svg(SQUARE, m, w, path)
        tree = ET.fromstring(doc)  # well-formed XML
        assert count(tree, "circle") == 4
        assert count(tree, "line") == 2
        assert count(tree, "ellipse") == 2
        assert count(tree, "path") == 1  # witness marker
        assert path.read_text(encoding="utf-8") == doc

    def test_points_only(self):
        doc = render_svg(SQUARE)
        tree = ET.fromstring(doc)
        assert count(tree, "circle") == 4
        assert count(tree, "line") == 0
        assert count(tree, "ellipse") == 0
        assert count(tree, "path") == 0

    def test_doubled_triangle_ellipses_through_centroid(self):
        m = triangle_sides()
        w = minimize_h(DOUBLED_TRIANGLE, m)
        doc = render_svg(DOUBLED_TRIANGLE, m, w)
        tree = ET.fromstring(doc)
        assert count(tree, "ellipse") == 3
        # semi-axes follow the 2/sqrt(3) ratio: rx = lam/2, ry = 1/(2 sqrt 3)
        for el in tree.findall(f".//{NS}ellipse"):
            rx = float(el.get("rx"))
            ry = float(el.get("ry"))
            assert rx == pytest.approx(1.0 / math.sqrt(3), abs=1e-9)
            assert ry == pytest.approx(0.5 / math.sqrt(3), abs=1e-9)
            # eccentricity sqrt(1 - (ry/rx)^2) = sqrt(3)/2
            ecc = math.sqrt(1 - (ry / rx) ** 2)
            assert ecc == pytest.approx(math.sqrt(3) / 2, abs=1e-9)

    def test_viewbox_includes_margin(self):
        doc = render_svg(SQUARE)
        tree = ET.fromstring(doc)
        vx, vy, vw, vh = (float(t) for t in tree.get("viewBox").split())
        assert vx < 0 and vy < 0
        assert vx + vw > 1 and vy + vh > 1
