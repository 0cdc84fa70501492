import pytest

from conftest import code_3d3f
from stablab.lattice import GeometryError, path_curve, straight_curve
from stablab.operators import (PAIRED, DirectMembrane, bare_string, boundary_string, decorated_string,
                               direct_plane, dual_plane, membrane, syndrome)


@pytest.fixture(scope="module")
def code():
    return code_3d3f(6, 6, 6)


def test_closed_decorated_loop_leaves_only_flux(code):
    cx = code.complex
    loop = path_curve(cx, [(2, 2, 2), (3, 2, 2), (3, 3, 2), (2, 3, 2), (2, 2, 2)])
    e = syndrome(code, decorated_string(code, loop, "e"))
    m = syndrome(code, decorated_string(code, loop, "m"))
    assert e.counts() == {"points": 0, "sigma_flux_faces": 0, "tau_flux_faces": 4, "flux_faces": 0, "para": 0}
    assert m.counts()["sigma_flux_faces"] == 4 and m.counts()["tau_flux_faces"] == 0


def test_decoration_is_linear_in_the_chain(code):
    cx = code.complex
    a = straight_curve(cx, [1, 2, 1], 0, 2)
    b = straight_curve(cx, [3, 2, 1], 0, 2)
    ab = straight_curve(cx, [1, 2, 1], 0, 4)
    for s in "em":
        assert decorated_string(code, a, s) * decorated_string(code, b, s) == decorated_string(code, ab, s)


def test_eps_is_product_of_e_and_m(code):
    c = straight_curve(code.complex, [1, 2, 1], 2, 3)
    assert decorated_string(code, c, "eps") == decorated_string(code, c, "e") * decorated_string(code, c, "m")


def test_boundary_string_rejects_bulk_curve(code):
    with pytest.raises(GeometryError):
        boundary_string(code, straight_curve(code.complex, [1, 1, 1], 0, 2), "e")


def test_noncontractible_boundary_strings_commute_with_code(code):
    for name in ("Z1", "X1", "Z2", "X2", "Z3", "X3", "Z4", "X4"):
        op = code.logicals[name]
        assert code.syndrome_bits(op).sum() == 0
        assert not code.in_stabilizer_group(op)


def test_left_logicals_live_near_left_boundary(code):
    Ly = code.complex.dims[1]
    for name in ("Z3", "X3", "Z4", "X4"):
        assert code.qubit_yhi[code.logicals[name].support()].min() >= Ly - 1


def test_paired_products_equal_membranes_modulo_stabilizers(code):
    L = code.logicals
    for prod, mem in PAIRED.items():
        a, b = L[prod[:2]], L[prod[2:]]
        assert code.in_stabilizer_group(a * b * L[mem])


def test_membranes_commute_and_are_independent(code):
    mems = [code.logicals[k] for k in ("R_sigma_horiz", "R_tau_horiz", "R_sigma_vert", "R_tau_vert")]
    for m in mems:
        assert code.syndrome_bits(m).sum() == 0
    assert len({code.canonical_form(m) for m in mems}) == 4


def test_dual_plane_periodic_level_wraps(code):
    cx = code.complex
    assert dual_plane(cx, 2, 0).edges == dual_plane(cx, 2, 6).edges
    sub = dual_plane(cx, 2, 0, extent={0: (0, 2)})
    assert len(sub.edges) == 2 * 7


def test_direct_membrane_rim_and_bad_type():
    from conftest import code_parabulk
    pb = code_parabulk(3, 3, 3)
    cx = pb.complex
    m = direct_plane(cx, 0, 1)
    # a plane across the slab is closed along x and z; its rim is the two boundary lines
    rim = m.rim(cx)
    assert len(rim) == 2 * 3 and all(cx.is_boundary_cell(1, e) for e in rim)
    assert pb.syndrome_bits(membrane(pb, m)).sum() == 0
    single = DirectMembrane(frozenset([next(iter(m.faces))]))
    assert len(single.rim(cx)) == 4
    assert membrane(pb, m).weight > 0
    with pytest.raises(TypeError):
        membrane(pb, "plane")


def test_report_serialises(code):
    rep = syndrome(code, bare_string(code, straight_curve(code.complex, [2, 2, 2], 0, 3), "e"))
    d = rep.to_dict()
    assert d["energy"] == len(d["violated"]) == rep.energy
    assert d["counts"]["points"] == 2
