"""Shape grid, categorization, templates, and symmetry groups."""

import numpy as np
import numpy.testing as npt
import pytest

import sqkit as sk
from sqkit.rotations import quat_angle_between, quat_canonical, quat_mul


class TestShapeGrid:
    def test_default_grid(self):
        grid = sk.default_grid()
        assert grid.n_categories == 25
        assert grid.eps1_values == (0.0, 0.25, 0.5, 0.75, 1.0)

    def test_row_major_ids(self):
        grid = sk.default_grid()
        cat = grid.category(12)
        assert (cat.eps1, cat.eps2) == (0.5, 0.5)
        assert [c.id for c in grid.categories()] == list(range(25))

    def test_validation(self):
        with pytest.raises(ValueError):
            sk.ShapeGrid((0.0,), (0.0, 1.0))
        with pytest.raises(ValueError):
            sk.ShapeGrid((0.0, 1.5), (0.0, 1.0))
        with pytest.raises(ValueError):
            sk.ShapeGrid((0.5, 0.5), (0.0, 1.0))
        with pytest.raises(ValueError):
            sk.default_grid().category(25)


class TestCategorize:
    def test_corner_nodes(self):
        grid = sk.default_grid()
        assert sk.categorize(0.0, 0.0, grid) == 0
        assert sk.categorize(1.0, 1.0, grid) == 24

    def test_nearest_node(self):
        assert sk.categorize(0.6, 0.4, sk.default_grid()) == 12

    def test_idempotent_on_nodes(self):
        grid = sk.default_grid()
        for cat in grid.categories():
            assert sk.categorize(cat.eps1, cat.eps2, grid) == cat.id

    def test_ties_to_lower_id(self):
        # equidistant between (0, 0) and (0, 0.25)
        assert sk.categorize(0.0, 0.125, sk.default_grid()) == 0

    def test_rejects_non_canonical(self):
        with pytest.raises(ValueError):
            sk.categorize(0.5, 1.2, sk.default_grid())

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            sk.categorize(-0.1, 0.5, sk.default_grid())
        with pytest.raises(ValueError):
            sk.categorize(2.1, 0.5, sk.default_grid())


class TestTemplatePoints:
    def test_sphere_template_norms(self):
        cat = sk.ShapeCategory(0, 1.0, 1.0)
        pts = sk.template_points(cat, n=256, dense_n=2048)
        npt.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-6)

    def test_full_template_equals_dense_sample(self):
        cat = sk.ShapeCategory(0, 0.5, 0.5)
        dense = sk.template_points(cat, n=512, dense_n=512)
        assert dense.shape == (512, 3)
        assert len(np.unique(dense, axis=0)) == 512

    def test_template_is_subset_of_dense_sample(self):
        cat = sk.ShapeCategory(0, 0.25, 0.75)
        unit = sk.Superquadric(0.25, 0.75, np.ones(3))
        dense = sk.sample_surface(unit, 1024, seed=0)
        tpl = sk.template_points(cat, n=64, dense_n=1024)
        rows = {tuple(r) for r in dense}
        assert all(tuple(p) in rows for p in tpl)

    def test_exponents_floored(self):
        cat = sk.ShapeCategory(0, 0.0, 0.0)
        pts = sk.template_points(cat, n=64, dense_n=256)
        assert np.all(np.isfinite(pts))

    def test_deterministic(self):
        cat = sk.ShapeCategory(3, 0.5, 0.25)
        a = sk.template_points(cat, n=128, dense_n=512, seed=4)
        b = sk.template_points(cat, n=128, dense_n=512, seed=4)
        assert np.array_equal(a, b)

    def test_n_larger_than_dense_rejected(self):
        with pytest.raises(ValueError):
            sk.template_points(sk.ShapeCategory(0, 0.5, 0.5), n=100, dense_n=50)


def _group_quats(group):
    return [np.asarray(q) for q in group.discrete]


class TestSymmetryGroup:
    def test_generic_shape_gets_flip_group(self):
        sq = sk.Superquadric(0.3, 0.7, np.array([1.0, 2.0, 3.0]))
        group = sk.symmetry_group(sq)
        assert len(group.discrete) == 4
        assert group.continuous_axes == ()

    def test_equal_radial_scales_add_quarter_turn(self):
        sq = sk.Superquadric(0.5, 0.2, np.array([1.0, 1.0, 3.0]))
        group = sk.symmetry_group(sq)
        assert len(group.discrete) == 8
        assert group.continuous_axes == ()

    def test_circular_cross_section_gets_continuous_axis(self):
        sq = sk.Superquadric(0.5, 1.0, np.array([1.0, 1.0, 3.0]))
        group = sk.symmetry_group(sq)
        assert len(group.discrete) == 8
        assert len(group.continuous_axes) == 1
        axis, steps = group.continuous_axes[0]
        npt.assert_array_equal(axis, [0.0, 0.0, 1.0])
        assert steps == 36

    def test_identity_always_present(self):
        sq = sk.Superquadric(0.3, 0.7, np.array([1.0, 2.0, 3.0]))
        quats = _group_quats(sk.symmetry_group(sq))
        assert any(quat_angle_between(q, np.array([1.0, 0, 0, 0])) <= 1e-9 for q in quats)

    def test_closed_under_composition(self):
        for scale in ([1.0, 2.0, 3.0], [1.0, 1.0, 3.0]):
            group = sk.symmetry_group(sk.Superquadric(0.4, 0.6, np.array(scale)))
            quats = _group_quats(group)
            for a in quats:
                for b in quats:
                    c = quat_canonical(quat_mul(a, b))
                    assert min(quat_angle_between(c, q) for q in quats) <= 1e-9

    def test_no_duplicates(self):
        group = sk.symmetry_group(sk.Superquadric(0.4, 0.6, np.array([1.0, 1.0, 2.0])))
        quats = _group_quats(group)
        for i, a in enumerate(quats):
            for b in quats[i + 1:]:
                assert quat_angle_between(a, b) > 1e-9

    def test_symmetries_preserve_surface(self):
        rng = np.random.default_rng(3)
        for scale in ([0.03, 0.07, 0.11], [0.04, 0.04, 0.09]):
            e1, e2 = rng.uniform(0.1, 1.0, 2)
            sq = sk.Superquadric(e1, e2, np.array(scale))
            unit = sk.Superquadric(e1, e2, np.ones(3))
            template = sk.sample_surface(unit, 256, seed=0)
            scaled = template * sq.scale
            for S in sk.expand_symmetries(sk.symmetry_group(sq)):
                rotated = scaled @ S.T
                f = sk.inside_outside(sq, rotated)
                npt.assert_array_less(np.abs(f - 1.0), 1e-6)

    def test_rejects_non_canonical(self):
        sq = sk.Superquadric(0.5, 1.5, np.array([1.0, 1.0, 1.0]))
        with pytest.raises(ValueError):
            sk.symmetry_group(sq)


class TestExpandSymmetries:
    def test_identity_group(self):
        mats = sk.expand_symmetries(sk.identity_group())
        assert len(mats) == 1
        npt.assert_allclose(mats[0], np.eye(3))

    def test_continuous_expansion_count(self):
        sq = sk.Superquadric(0.5, 1.0, np.array([1.0, 1.0, 3.0]))
        mats = sk.expand_symmetries(sk.symmetry_group(sq))
        # 36 spins about z, each with and without an x-flip
        assert len(mats) == 72

    def test_matrices_are_rotations(self):
        sq = sk.Superquadric(0.5, 0.3, np.array([1.0, 1.0, 3.0]))
        for S in sk.expand_symmetries(sk.symmetry_group(sq)):
            npt.assert_allclose(S.T @ S, np.eye(3), atol=1e-12)
            npt.assert_allclose(np.linalg.det(S), 1.0, atol=1e-12)
