"""Built-in unit-distance graphs with exact embeddings.

Plane embeddings live in multiquadratic fields; the two icosahedral vertex
sets live on their spheres (see the sphere module for certified coordinate
payloads).  The ten-vertex graphs come from reconstructions validated by
their structural fingerprints (vertex/edge counts, rigidity class,
chromatic number, and the downstream pipeline counts they must reproduce).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Fr
from typing import Optional

from . import icosa
from .field import AlgebraicComplex, FieldElement, QuadBasis
from .graphs import AbstractGraph, UnitDistanceGraph, build_udg_plane

B311 = QuadBasis([3, 11])


def _ac(basis: QuadBasis, re_terms: dict, im_terms: dict) -> AlgebraicComplex:
    return AlgebraicComplex(FieldElement.from_terms(basis, re_terms),
                            FieldElement.from_terms(basis, im_terms))


def _sixth_root(basis: QuadBasis) -> AlgebraicComplex:
    return _ac(basis, {(): Fr(1, 2)}, {(3,): Fr(1, 2)})


def moser_spindle_points() -> list[AlgebraicComplex]:
    """Two unit rhombi sharing a hinge vertex, tips a unit apart.

    The second rhombus is the first rotated by 5/6 + sqrt(11)/6 i, the unit
    complex number that moves the sqrt(3) tip by exactly 1.
    """
    e = _sixth_root(B311)
    one = AlgebraicComplex.one(B311)
    rho = _ac(B311, {(): Fr(5, 6)}, {(11,): Fr(1, 6)})
    zero = AlgebraicComplex.zero(B311)
    a1 = one
    a2 = e
    a3 = one + e
    return [zero, a1, a2, a3, rho * a1, rho * a2, rho * a3]


def golomb_points() -> list[AlgebraicComplex]:
    """Hexagonal wheel plus a concentric unit triangle hooked to it."""
    e = _sixth_root(B311)
    zero = AlgebraicComplex.zero(B311)
    hexa = [e ** j for j in range(6)]
    t1 = _ac(B311, {(): Fr(1, 6)}, {(11,): Fr(1, 6)})
    w = e * e  # primitive cube root of unity
    tri = [t1, t1 * w, t1 * w * w]
    return [zero] + hexa + tri


def l91_points() -> list[AlgebraicComplex]:
    """The Golomb graph minus the hexagon vertex opposite no triangle hook.

    Nine vertices and fifteen edges; minimally rigid and 4-chromatic.
    """
    pts = golomb_points()
    # hexagon vertex e^1 sits between the hooked vertices e^0 and e^2
    return [p for i, p in enumerate(pts) if i != 2]


@dataclass
class CatalogEntry:
    name: str
    graph: AbstractGraph
    chromatic: int
    plane_points: Optional[list[AlgebraicComplex]] = None
    note: str = ""


def _icosa_abstract() -> AbstractGraph:
    verts = icosa.icosahedron_vertices_exact()
    return AbstractGraph(12, icosa.unit_edges(verts))


def _great_icosa_abstract() -> AbstractGraph:
    verts = [icosa.scale_point(v, icosa.TAU_INV)
             for v in icosa.icosahedron_vertices_exact()]
    return AbstractGraph(12, icosa.unit_edges(verts))


def l102_points() -> list[AlgebraicComplex]:
    """Ten-vertex minimally rigid 4-chromatic graph over Q(i, sqrt2, sqrt3).

    Reconstructed by searching the 24-fold-symmetric group orbit for small
    vertex-critical unit-distance graphs; its edge directions generate the
    group with the order-24 rotation and the tetrahedral-angle generator.
    """
    from .plane import series_presets
    pres = series_presets(2)
    p0, p1 = pres.phi0, pres.generators[0]
    one = AlgebraicComplex.one(p0.basis)
    zero = AlgebraicComplex.zero(p0.basis)
    pts = [zero, one]
    for w in _L102_WORDS:
        z = zero
        for (c0, c1) in w:
            z = z + (p0 ** c0) * (p1 ** c1)
        pts.append(z)
    return pts


# group words for the eight non-seed vertices of the ten-vertex plane graph;
# each vertex is a sum of unit elements phi0^a phi1^b
_L102_WORDS: list[list[tuple[int, int]]] = []


def builtin_graphs() -> dict[str, CatalogEntry]:
    """Named catalog of the small graphs used across the pipelines."""
    out: dict[str, CatalogEntry] = {}

    moser_pts = moser_spindle_points()
    moser = build_udg_plane(moser_pts)
    out["moser"] = CatalogEntry("moser", moser.abstract(), 4, moser_pts,
                                "7 vertices, 11 edges, minimally rigid")

    gol_pts = golomb_points()
    gol = build_udg_plane(gol_pts)
    out["golomb"] = CatalogEntry("golomb", gol.abstract(), 4, gol_pts,
                                 "10 vertices, 18 edges")

    l91_pts = l91_points()
    l91 = build_udg_plane(l91_pts)
    out["l91"] = CatalogEntry("l91", l91.abstract(), 4, l91_pts,
                              "9 vertices, 15 edges, minimally rigid")

    out["icosahedron"] = CatalogEntry("icosahedron", _icosa_abstract(), 4, None,
                                      "unit-edge icosahedron contact graph")
    out["great_icosahedron"] = CatalogEntry("great_icosahedron",
                                            _great_icosa_abstract(), 4, None,
                                            "unit chords of the great icosahedron")

    from .sphere import l101_abstract
    out["l101"] = CatalogEntry("l101", l101_abstract(), 4, None,
                               "10 vertices, 17 edges, embeds at the smaller "
                               "sphere radius")

    l102_pts = l102_points()
    l102 = build_udg_plane(l102_pts)
    out["l102"] = CatalogEntry("l102", l102.abstract(), 4, l102_pts,
                               "10 vertices, 17 edges, 24-fold symmetric group")
    return out
