import warnings

import numpy as np
import pytest

from flaglab.cocliques import (
    VARIANTS,
    ConstructionSpec,
    FlagFamily,
    build_example,
    classify_space_weight,
    color_map,
    count_flags_skew_to,
    greedy_closure,
    is_coclique,
    is_maximal_coclique,
    random_maximal_coclique,
    random_spec,
    red_intersection_check,
    weight_spectrum_violations,
)
from flaglab.errors import (
    NonMaximalWeightSpectrum,
    NotACoclique,
    SpaceNotInFamily,
    SpecIncidenceViolation,
    WrongDimension,
)
from flaglab.geometry import dualize_flag, get_geometry, is_opposite
from flaglab.linalg import Subspace
from flaglab.qcount import example_family_size, gauss


def coord(q, d, *v):
    return Subspace.coordinate(q, d, *v)


def a_i_22(g22):
    H = coord(2, 5, [1], [2], [3], [4])
    return build_example(g22, ConstructionSpec("a_i", H, coord(2, 5, [1])))


def pairwise_oracle(geom, members):
    """Independent coclique check: every pair through Subspace rank tests."""
    flags = [geom.flag(v) for v in members]
    return all(not is_opposite(flags[i], flags[j]) for i in range(len(flags)) for j in range(i + 1, len(flags)))


def test_spec_examples(g22, g23):
    assert len(a_i_22(g22)) == 133
    F = build_example(g23, ConstructionSpec("b_ii", coord(3, 5, [1]), coord(3, 5, [1], [2])))
    assert len(F) == 637


@pytest.mark.slow
def test_spec_example_32():
    g = get_geometry(3, 2)
    H = coord(2, 7, *[[i] for i in range(1, 7)])
    X = coord(2, 7, *[[i] for i in range(1, 6)])
    assert len(build_example(g, ConstructionSpec("a_ii", H, X))) == 11005


def test_membership_predicate_literal(g22):
    """Rebuild the a_i and b_i families flag by flag from the subspaces."""
    H, X = coord(2, 5, [1], [2], [3], [4]), coord(2, 5, [2])
    fam = build_example(g22, ConstructionSpec("a_i", H, X))
    expect = [v for v, f in enumerate(g22.flags()) if H.contains(f.B) or (f.A.contains(X) and H.contains(f.A))]
    assert fam.members.tolist() == expect
    P, Y = coord(2, 5, [5]), coord(2, 5, [2], [3], [4], [5])
    fam = build_example(g22, ConstructionSpec("b_i", P, Y))
    expect = [v for v, f in enumerate(g22.flags()) if f.A.contains(P) or (Y.contains(f.B) and f.B.contains(P))]
    assert fam.members.tolist() == expect


@pytest.mark.parametrize("variant", VARIANTS)
def test_random_examples_22(g22, variant):
    rng = np.random.default_rng(42)
    for _ in range(3):
        F = build_example(g22, random_spec(g22, variant, rng))
        assert len(F) == example_family_size(2, 2)
        assert is_coclique(F) and is_maximal_coclique(F)
    assert pairwise_oracle(g22, F.members)


def test_anchor_validation(g22):
    H = coord(2, 5, [1], [2], [3], [4])
    with pytest.raises(SpecIncidenceViolation):
        build_example(g22, ConstructionSpec("a_i", H, coord(2, 5, [5])))
    with pytest.raises(SpecIncidenceViolation):
        build_example(g22, ConstructionSpec("b_ii", coord(2, 5, [1]), coord(2, 5, [2], [3])))
    with pytest.raises(SpecIncidenceViolation):
        build_example(g22, ConstructionSpec("a_ii", H, coord(2, 5, [1])))


def test_coclique_failure_and_singleton(g22):
    v = 0
    w = int(np.flatnonzero(g22.opposite_row(v))[0])
    c = is_coclique(FlagFamily(g22, [v, w]))
    assert not c and c.witness == (v, w)
    assert is_coclique(FlagFamily(g22, [v]))


def test_maximality_failures(g22):
    F = a_i_22(g22)
    gone = int(F.members[10])
    m = is_maximal_coclique(F.with_members(np.delete(F.members, 10)))
    assert not m and m.witness is not None
    # the witness really is addable
    W = F.with_members(np.append(np.delete(F.members, 10), m.witness))
    assert is_coclique(W)
    assert gone == m.witness or m.witness not in F
    assert not is_maximal_coclique(FlagFamily(g22, []))
    with pytest.raises(NotACoclique):
        is_maximal_coclique(FlagFamily(g22, [0, int(np.flatnonzero(g22.opposite_row(0))[0])]))


def test_greedy_closure(g22):
    F = a_i_22(g22)
    assert np.array_equal(greedy_closure(F).members, F.members)
    C0 = greedy_closure(FlagFamily(g22, []))
    assert is_maximal_coclique(C0) and not weight_spectrum_violations(C0)
    assert greedy_closure(FlagFamily(g22, [])).members.tolist() == C0.members.tolist()
    S = greedy_closure(FlagFamily(g22, [500]))
    assert 500 in S and is_maximal_coclique(S)
    with pytest.raises(NotACoclique):
        greedy_closure(FlagFamily(g22, [0, int(np.flatnonzero(g22.opposite_row(0))[0])]))


def test_space_weight_examples(g22):
    F = a_i_22(g22)
    red = classify_space_weight(F, coord(2, 5, [1], [2], [3]))
    assert (red.count, red.k, red.color, red.all_meet) == (7, 3, "red", True)
    # plane outside H through a line of H that contains X = <e1>
    yellow = classify_space_weight(F, coord(2, 5, [1], [2], [5]))
    assert 1 <= yellow.count <= 3 and yellow.color == "yellow"
    assert yellow.core is not None and not yellow.all_meet
    unused = classify_space_weight(F, coord(2, 5, [2], [3], [5]))
    assert (unused.count, unused.color) == (0, "unused")
    with pytest.raises(WrongDimension):
        classify_space_weight(F, coord(2, 5, [1]))


@pytest.mark.parametrize("seed", [3, 4])
def test_space_weight_core_dimension(g22, g23, seed):
    """A yellow space's count is fixed by its core: [n+1-dim S, 1] for n-spaces, dually [dim S - n, 1]."""
    for g in (g22, g23):
        n, q = g.n, g.q
        F = random_maximal_coclique(g, seed)
        cm = color_map(F)
        for b in cm.yellow_B.tolist():
            r = classify_space_weight(F, g.B(b))
            assert r.count == gauss(n + 1 - r.core.k, 1, q) and r.core <= g.B(b)
        for a in cm.yellow_A.tolist():
            r = classify_space_weight(F, g.A(a))
            assert r.count == gauss(r.core.k - n, 1, q) and g.A(a) <= r.core


def test_color_map_examples(g22):
    H = coord(2, 5, [1], [2], [3], [4])
    cm = color_map(a_i_22(g22))
    assert sorted(cm.red_B.tolist()) == np.flatnonzero(g22.B_inside(H)).tolist()
    assert len(cm.red_B) == 15
    P = coord(2, 5, [1])
    Fb = build_example(g22, ConstructionSpec("b_i", P, coord(2, 5, [1], [2], [3], [4])))
    assert sorted(color_map(Fb).red_A.tolist()) == np.flatnonzero(g22.A_containing(P)).tolist()
    C0 = greedy_closure(FlagFamily(g22, []))
    cm0 = color_map(C0)
    assert set(cm0.count_B[cm0.count_B > 0].tolist()) <= {1, 3, 7}
    assert set(cm0.count_A[cm0.count_A > 0].tolist()) <= {1, 3, 7}


def test_color_map_names_offender(g22):
    F = a_i_22(g22)
    # drop one flag of a red plane: that plane now lies in 6 flags
    with pytest.raises(NonMaximalWeightSpectrum) as exc:
        color_map(F.with_members(F.members[1:]))
    assert exc.value.count == 6


def test_color_map_duality_exhaustive(g22):
    """Dualizing a family swaps red n-spaces with red (n-1)-spaces, exhaustively over 12 families."""
    rng = np.random.default_rng(0)
    fams = [build_example(g22, random_spec(g22, v, rng)) for v in VARIANTS] + \
           [random_maximal_coclique(g22, s) for s in range(8)]
    a_map, b_map = g22.dual_maps
    for F in fams:
        D = F.dual()
        assert is_maximal_coclique(D)
        cm, cd = color_map(F), color_map(D)
        assert sorted(b_map[cm.red_B].tolist()) == sorted(cd.red_A.tolist())
        assert sorted(a_map[cm.red_A].tolist()) == sorted(cd.red_B.tolist())
        assert sorted(b_map[cm.yellow_B].tolist()) == sorted(cd.yellow_A.tolist())
        assert sorted(a_map[cm.yellow_A].tolist()) == sorted(cd.yellow_B.tolist())
    for b in range(0, len(g22.B_arr), 17):
        assert g22.A(b_map[b]) == g22.B(b).complement()


def test_dual_family_of_example(g22):
    H = coord(2, 5, [1], [2], [3], [4])
    F = build_example(g22, ConstructionSpec("a_i", H, coord(2, 5, [1])))
    D = F.dual()
    G = build_example(g22, ConstructionSpec("b_i", H.complement(), coord(2, 5, [1]).complement()))
    assert np.array_equal(D.members, G.members)
    f = g22.flag(int(F.members[0]))
    assert g22.index_of(dualize_flag(f)) in D


def test_red_intersection(g22, g23):
    rng = np.random.default_rng(1)
    for g in (g22, g23):
        for v in VARIANTS:
            assert red_intersection_check(build_example(g, random_spec(g, v, rng)))
    with pytest.raises(NotACoclique):
        red_intersection_check(FlagFamily(g22, [0, int(np.flatnonzero(g22.opposite_row(0))[0])]))


def test_red_intersection_single_flag_vacuous(g22):
    F = FlagFamily(g22, [7])
    from flaglab.cocliques import ColorMap
    empty = np.array([], dtype=np.int64)
    cm = ColorMap(empty, empty, empty, empty, np.zeros(1), np.zeros(1))
    assert red_intersection_check(F, cm)


def test_count_flags_skew_to(g22):
    F = a_i_22(g22)
    cm = color_map(F)
    bound = gauss(2, 1, 2) * gauss(3, 1, 2)
    for b in cm.yellow_B.tolist():
        assert count_flags_skew_to(F, g22.B(b)) <= bound
    with pytest.warns(UserWarning, match="red"):
        count_flags_skew_to(F, g22.B(int(cm.red_B[0])))
    with pytest.raises(SpaceNotInFamily):
        count_flags_skew_to(F, coord(2, 5, [2], [3], [5]))
    with pytest.raises(WrongDimension):
        count_flags_skew_to(F, coord(2, 5, [1], [2]))
    v = 100
    single = FlagFamily(g22, [v])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert count_flags_skew_to(single, g22.B(int(g22.flag_b[v]))) == 0


def test_count_flags_skew_to_oracle(g22):
    F = a_i_22(g22)
    cm = color_map(F)
    b = int(cm.yellow_B[0])
    B = g22.B(b)
    flags = [g22.flag(v) for v in F.members]
    expect = len({f.B for f in flags if f.A.meet_dim(B) == 0})
    assert count_flags_skew_to(F, B) == expect


def test_family_json_roundtrip(g22, g23):
    F = a_i_22(g22)
    assert np.array_equal(FlagFamily.from_json(g22, F.to_json()).members, F.members)
    with pytest.raises(ValueError):
        FlagFamily.from_json(g23, F.to_json())


def test_family_rejects_bad_indices(g22):
    with pytest.raises(Exception):
        FlagFamily(g22, [g22.V])
    with pytest.raises(Exception):
        FlagFamily(g22, [1, 1])


def test_spec_json_roundtrip(g22):
    spec = random_spec(g22, "b_ii", np.random.default_rng(2))
    assert ConstructionSpec.from_json(spec.to_json()) == spec


def test_random_closure_deterministic(g22):
    a = random_maximal_coclique(g22, 9).members
    assert np.array_equal(a, random_maximal_coclique(g22, 9).members)
