import pytest

from conftest import code_3d3f, code_parabulk, code_toric
from stablab.codes import (InvalidCodeError, StabilizerCode, build_3d3f, build_toric, count_logical_qubits,
                           extract_logicals)
from stablab.lattice import TopologyError, build_t2xi, build_torus
from stablab.pauli import DimensionError, PauliOperator


def test_toric_generator_weights():
    c2 = code_toric(4, 4)
    assert {g.weight for g in c2.generators} == {4}
    c3 = code_toric(3, 3, 3)
    w = {t.kind: g.weight for g, t in zip(c3.generators, c3.tags)}
    assert w == {"vertex": 6, "face": 4}


def test_doubled_toric_equals_undecorated_3d3f():
    cx = build_t2xi(3, 2, 3)
    plain = build_3d3f(cx, decorate=False)
    assert plain.name == "toric3d-doubled"
    assert all(len(g.x_support()) == 0 for g, t in zip(plain.generators, plain.tags) if t.kind.startswith("face"))
    # T^2 x I retracts onto T^2, so each species carries two logical qubits
    assert count_logical_qubits(plain) == 4


def test_3d3f_face_terms_carry_three_legs_in_bulk():
    code = code_3d3f(4, 4, 4)
    cx = code.complex
    for g, t in zip(code.generators, code.tags):
        if t.kind.startswith("face") and not any(cx.y_range(2, t.cell)[i] in (0, 4) for i in (0, 1)):
            assert len(g.x_support()) == 3 and len(g.z_support()) == 4


@pytest.mark.parametrize("dims,k", [((3, 3), 2), ((3, 3, 3), 3)])
def test_extracted_logicals_form_symplectic_basis(dims, k):
    code = code_toric(*dims)
    pairs = extract_logicals(code)
    assert len(pairs) == k
    ops = [op for p in pairs for op in p]
    for op in ops:
        assert code.syndrome_bits(op).sum() == 0
        assert not code.in_stabilizer_group(op)
    for i, (a, _) in enumerate(pairs):
        for j, (_, b) in enumerate(pairs):
            assert a.commutes(b) == (i != j)


def test_stabilizer_group_membership_and_canonical_form():
    code = code_toric(3, 3)
    g = code.generators[0] * code.generators[5]
    assert code.in_stabilizer_group(g)
    assert code.canonical_form(g).is_identity()
    x = extract_logicals(code)[0][0]
    assert code.canonical_form(x * g) == code.canonical_form(x)


def test_noncommuting_code_is_rejected():
    code = code_toric(3, 3)
    bad = StabilizerCode("bad", code.complex, code.layout,
                         [PauliOperator.from_support(18, x=[0]), PauliOperator.from_support(18, z=[0])],
                         code.tags[:2])
    assert {tuple(sorted(p)) for p in bad.noncommuting_pairs().tolist()} == {(0, 1)}
    with pytest.raises(InvalidCodeError):
        count_logical_qubits(bad)


def test_translation_maps_generators_to_generators():
    code = code_3d3f(4, 3, 4)
    gens = {g for g in code.generators}
    perm = code.translation((1, 0, 3))
    assert (perm >= 0).all() and len(set(perm.tolist())) == code.n_qubits
    for g in code.generators[::7]:
        moved = PauliOperator.from_support(code.n_qubits, perm[g.x_support()], perm[g.z_support()])
        assert moved in gens
    # shifting along the open axis pushes the top layer out
    assert (code.translation((0, 1, 0)) < 0).any()


def test_fixture_hash_is_stable_and_discriminating():
    a = build_toric(2, build_torus((3, 3))).fixture_hash()
    assert a == build_toric(2, build_torus((3, 3))).fixture_hash()
    assert a != build_toric(2, build_torus((3, 4))).fixture_hash()


def test_builder_errors():
    with pytest.raises(TopologyError):
        build_toric(3, build_torus((3, 3)))
    with pytest.raises(TopologyError):
        build_3d3f(build_torus((3, 3)))
    with pytest.raises(DimensionError):
        code_toric(3, 3).syndrome_bits(PauliOperator.identity(5))


def test_parabulk_layout_and_symmetry():
    code = code_parabulk(3, 3, 3)
    kinds = {t.kind for t in code.symmetry_tags}
    assert kinds == {"sym-Av", "sym-Av'", "sym-Ac", "sym-Aq'"}
    assert len(code.symmetry_violations()) == 0
