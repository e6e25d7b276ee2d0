import numpy as np
import pytest

from halg.catalog import get_group
from halg.errors import GroupMismatch, KindMismatch, SpaceMismatch
from halg.measure_space import (
    MeasureG,
    MeasureQ,
    canonical_projection,
    convolve_G,
    counting,
    dirac_coset,
    dirac_G,
    dirac_Q,
    invariance_defect,
    is_absolutely_continuous,
    is_right_H_invariant,
    module_action,
    project,
    random_G,
    random_Q,
    section,
    tv_norm,
    uniform_on_subgroup,
)


def test_section_of_z4_example(z4_half):
    nu = MeasureQ(z4_half, [2j, 4])
    m = section(nu)
    assert np.allclose(m.weights, [1j, 2, 1j, 2])
    assert project(z4_half, m) == nu
    assert tv_norm(m) == pytest.approx(tv_norm(nu))


def test_weights_are_read_only(z4_half):
    nu = MeasureQ(z4_half, [1, 2])
    with pytest.raises(ValueError):
        nu.weights[0] = 5


def test_wrong_length(z4_half):
    with pytest.raises(KindMismatch):
        MeasureQ(z4_half, [1, 2, 3])


def test_projection_is_norm_decreasing(s3_transposition, rng):
    for _ in range(20):
        m = random_G(s3_transposition.group, rng)
        assert tv_norm(project(s3_transposition, m)) <= tv_norm(m) + 1e-12


def test_projection_of_dirac(s3, s3_transposition):
    for x in range(s3.order):
        assert project(s3_transposition, dirac_G(s3, x)) == dirac_coset(s3_transposition, x)


def test_section_min_norm_in_fibre(s3_transposition, rng):
    for _ in range(20):
        m = random_G(s3_transposition.group, rng)
        nu = project(s3_transposition, m)
        assert tv_norm(section(nu)) <= tv_norm(m) + 1e-12


def test_right_invariance(s3_transposition, rng):
    nu = random_Q(s3_transposition, rng)
    assert is_right_H_invariant(s3_transposition, section(nu))
    assert invariance_defect(s3_transposition, section(nu)) == 0.0
    # a point mass on a non-trivial coset of H is not invariant
    assert not is_right_H_invariant(s3_transposition, dirac_G(s3_transposition.group, 1))


def test_canonical_projection_is_idempotent(s3_transposition, rng):
    m = random_G(s3_transposition.group, rng)
    p = canonical_projection(s3_transposition, m)
    assert np.allclose(canonical_projection(s3_transposition, p).weights, p.weights)


def test_counting_and_uniform(s3, s3_rotations):
    assert tv_norm(counting(s3)) == 6
    u = uniform_on_subgroup(s3_rotations.subgroup)
    assert tv_norm(u) == pytest.approx(1.0)
    assert np.allclose(convolve_G(u, u).weights, u.weights)


def test_group_convolution_of_diracs(s3):
    a, b = s3.index("(0 1)"), s3.index("(1 2)")
    assert convolve_G(dirac_G(s3, a), dirac_G(s3, b)) == dirac_G(s3, s3.mul(a, b))


def test_group_convolution_is_associative(s3, rng):
    m, n, p = (random_G(s3, rng) for _ in range(3))
    lhs = convolve_G(convolve_G(m, n), p)
    rhs = convolve_G(m, convolve_G(n, p))
    assert np.allclose(lhs.weights, rhs.weights)


def test_module_action_matches_projection(s3_transposition, rng):
    space = s3_transposition
    m = random_G(space.group, rng)
    nu = random_Q(space, rng)
    lhs = module_action(space, m, nu)
    rhs = project(space, convolve_G(m, section(nu)))
    assert np.allclose(lhs.weights, rhs.weights)


def test_module_action_of_dirac_moves_cosets(s3, s3_transposition):
    x = s3.index("(0 2)")
    for c in range(s3_transposition.count):
        out = module_action(s3_transposition, dirac_G(s3, x), dirac_Q(s3_transposition, c))
        assert out == dirac_Q(s3_transposition, s3_transposition.act(x, c))


def test_mismatches(s3, s3_transposition, s3_rotations):
    z3 = get_group("Z3")
    with pytest.raises(GroupMismatch):
        convolve_G(dirac_G(s3, 0), dirac_G(z3, 0))
    with pytest.raises(SpaceMismatch):
        dirac_Q(s3_transposition, 0) + dirac_Q(s3_rotations, 0)
    with pytest.raises(KindMismatch):
        project(s3_transposition, dirac_Q(s3_transposition, 0))
    assert dirac_Q(s3_transposition, 0) != dirac_G(s3, 0)


def test_absolute_continuity(z4_half):
    m1 = MeasureQ(z4_half, [1, 0])
    m2 = MeasureQ(z4_half, [3, 0])
    assert is_absolutely_continuous(m1, m2)
    assert not is_absolutely_continuous(MeasureQ(z4_half, [0, 1]), m2)
    with pytest.raises(KindMismatch):
        is_absolutely_continuous(m1, section(m2))


def test_arithmetic(z4_half):
    a = MeasureQ(z4_half, [1, 2])
    b = MeasureQ(z4_half, [3, -1j])
    assert np.allclose((a + b).weights, [4, 2 - 1j])
    assert np.allclose((a - b).weights, [-2, 2 + 1j])
    assert np.allclose((2 * a).weights, [2, 4])
    assert np.allclose((-a).weights, [-1, -2])
    assert a.max_distance(b) == pytest.approx(abs(2 + 1j))
    assert isinstance(section(a), MeasureG)
