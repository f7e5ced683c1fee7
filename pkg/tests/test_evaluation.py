import numpy as np
import pytest

from dqi.evaluation import (
    Dataset,
    DatasetEntry,
    InsufficientDataError,
    Task,
    _split_indices,
    krocc,
    load_manifest,
    plcc,
    run_protocol_on_features,
    srocc,
)

from conftest import save_rgb
from reference_impls import (
    kendall_pair_enumeration,
    pearson_two_pass,
    spearman_closed_form,
)


class TestSrocc:
    def test_identical_orderings(self):
        assert srocc([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)

    def test_reversed_orderings(self):
        assert srocc([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_single_swap(self):
        assert srocc([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5, abs=1e-12)

    def test_matches_closed_form_on_tie_free_data(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(3, 12))
            a = rng.permutation(n) + rng.uniform(0.01, 0.49, n)
            b = rng.permutation(n) + rng.uniform(0.01, 0.49, n)
            assert srocc(a, b) == pytest.approx(
                spearman_closed_form(a, b), abs=1e-12
            )

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(1)
        a = rng.random(20)
        b = rng.random(20)
        assert srocc(np.exp(a * 3), b) == pytest.approx(srocc(a, b), abs=1e-12)

    def test_constant_input_is_an_error(self):
        with pytest.raises(ValueError):
            srocc([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            srocc([1, 2, 3], [1, 2])


class TestKrocc:
    def test_identical_orderings(self):
        assert krocc([1, 2, 3, 4], [2, 4, 6, 8]) == 1.0

    def test_reversed(self):
        assert krocc([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0

    def test_single_swap(self):
        assert krocc([1, 2, 3], [1, 3, 2]) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_matches_pair_enumeration(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            n = int(rng.integers(2, 12))
            a = rng.random(n)
            b = rng.random(n)
            assert krocc(a, b) == pytest.approx(
                kendall_pair_enumeration(a, b), abs=1e-12
            )

    def test_ties_count_in_neither_direction(self):
        # one tied pair in a: denominator still counts all pairs
        assert krocc([1.0, 1.0, 2.0], [1.0, 2.0, 3.0]) == pytest.approx(2.0 / 3.0)


class TestPlcc:
    def test_affine_relation(self):
        o = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        assert plcc(o, 2 * o + 1) == pytest.approx(1.0, abs=1e-12)
        assert plcc(o, 2 * o + 1, with_mapping=True) == pytest.approx(1.0, abs=1e-6)

    def test_negation(self):
        o = np.array([1.0, 2.0, 3.0])
        assert plcc(o, -o) == pytest.approx(-1.0, abs=1e-12)

    def test_matches_two_pass_arithmetic(self):
        o = [1.0, 2.0, 3.0, 4.0, 5.0]
        s = [1.0, 1.9, 3.2, 3.9, 5.1]
        assert plcc(o, s) == pytest.approx(pearson_two_pass(o, s), abs=1e-12)

    def test_simultaneous_permutation_invariance(self):
        rng = np.random.default_rng(3)
        a, b = rng.random(15), rng.random(15)
        perm = rng.permutation(15)
        assert plcc(a[perm], b[perm]) == pytest.approx(plcc(a, b), abs=1e-12)
        assert srocc(a[perm], b[perm]) == pytest.approx(srocc(a, b), abs=1e-12)
        assert krocc(a[perm], b[perm]) == pytest.approx(krocc(a, b), abs=1e-12)

    def test_constant_input_is_an_error(self):
        with pytest.raises(ValueError):
            plcc([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_mapping_needs_five_samples(self):
        with pytest.raises(ValueError):
            plcc([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], with_mapping=True)


class TestManifest:
    def _write_entry_images(self, root, name):
        rng = np.random.default_rng(abs(hash(name)) % 2**32)
        for suffix in ("l", "r"):
            save_rgb(root / f"{name}_{suffix}.png", rng.integers(0, 255, (64, 128, 3)))

    def test_load_and_resolve_paths(self, tmp_path):
        self._write_entry_images(tmp_path, "a")
        lines = [
            ",".join(
                ["id", "left", "right", "ref_left", "ref_right",
                 "content_id", "mos_depth", "mos_overall"]
            ),
            "a,a_l.png,a_r.png,,,c0,3.5,",
        ]
        (tmp_path / "manifest.csv").write_text("\n".join(lines) + "\n")
        dataset = load_manifest(tmp_path / "manifest.csv")
        assert len(dataset) == 1
        entry = dataset.entries[0]
        assert entry.mos_depth == 3.5 and entry.mos_overall is None
        assert entry.ref_left is None

    def test_bad_header_rejected(self, tmp_path):
        (tmp_path / "m.csv").write_text("id,foo\n1,2\n")
        with pytest.raises(ValueError, match="header"):
            load_manifest(tmp_path / "m.csv")

    def test_missing_file_rejected(self, tmp_path):
        header = "id,left,right,ref_left,ref_right,content_id,mos_depth,mos_overall"
        (tmp_path / "m.csv").write_text(header + "\nx,gone_l.png,gone_r.png,,,c0,1,\n")
        with pytest.raises(ValueError, match="missing file"):
            load_manifest(tmp_path / "m.csv")

    def test_duplicate_ids_rejected(self, tmp_path):
        self._write_entry_images(tmp_path, "a")
        header = "id,left,right,ref_left,ref_right,content_id,mos_depth,mos_overall"
        row = "a,a_l.png,a_r.png,,,c0,1,"
        (tmp_path / "m.csv").write_text(header + "\n" + row + "\n" + row + "\n")
        with pytest.raises(ValueError, match="unique"):
            load_manifest(tmp_path / "m.csv")

    def test_missing_label_surfaces_at_use(self, tmp_path):
        self._write_entry_images(tmp_path, "a")
        header = "id,left,right,ref_left,ref_right,content_id,mos_depth,mos_overall"
        (tmp_path / "m.csv").write_text(header + "\na,a_l.png,a_r.png,,,c0,,\n")
        dataset = load_manifest(tmp_path / "m.csv")
        with pytest.raises(ValueError, match="label"):
            dataset.labels(Task.DEPTH)


class TestProtocolOnFeatures:
    def test_perfectly_learnable_labels(self):
        rng = np.random.default_rng(5)
        features = rng.random((60, 1))
        labels = 5.0 * features[:, 0]
        sroccs, _, _ = run_protocol_on_features(features, labels, 10, seed=1)
        assert float(np.median(sroccs)) == 1.0

    def test_shuffled_labels_stay_near_zero(self):
        rng = np.random.default_rng(6)
        features = rng.random((60, 6))
        labels = rng.permutation(np.linspace(1, 5, 60))
        sroccs, _, _ = run_protocol_on_features(features, labels, 50, seed=2)
        assert abs(float(np.median(sroccs))) < 0.3

    def test_same_seed_reproduces_bitwise(self):
        rng = np.random.default_rng(7)
        features = rng.random((40, 4))
        labels = 2.0 * features[:, 0] + features[:, 1]
        a = run_protocol_on_features(features, labels, 8, seed=3)
        b = run_protocol_on_features(features, labels, 8, seed=3)
        assert a == b

    def test_thread_count_does_not_change_results(self):
        rng = np.random.default_rng(8)
        features = rng.random((40, 4))
        labels = 2.0 * features[:, 0]
        a = run_protocol_on_features(features, labels, 6, seed=4, threads=1)
        b = run_protocol_on_features(features, labels, 6, seed=4, threads=8)
        assert a == b

    def test_too_small_dataset_rejected(self):
        with pytest.raises(InsufficientDataError):
            run_protocol_on_features(np.zeros((9, 2)), np.zeros(9), 1, seed=0)

    def test_tiny_test_split_rejected(self):
        # 12 entries in 2 content groups: a by-content split leaves one
        # group (6 entries) as test, but 10 entries with default split
        # leave only 2 -> error
        rng = np.random.default_rng(9)
        features = rng.random((10, 2))
        labels = rng.random(10)
        with pytest.raises(InsufficientDataError):
            run_protocol_on_features(features, labels, 1, seed=0)


class TestSplitIndices:
    def test_random_split_sizes(self):
        rng = np.random.default_rng(0)
        train, test = _split_indices(60, rng, None, 0.8)
        assert len(train) == 48 and len(test) == 12
        assert sorted(np.concatenate([train, test]).tolist()) == list(range(60))

    def test_by_content_split_keeps_groups_intact(self):
        groups = [f"c{i % 6}" for i in range(60)]
        for it in range(20):
            rng = np.random.default_rng([11, it])
            train, test = _split_indices(60, rng, groups, 0.8)
            train_groups = {groups[i] for i in train}
            test_groups = {groups[i] for i in test}
            assert train_groups.isdisjoint(test_groups)
            assert len(train) + len(test) == 60


class TestDatasetValidation:
    def test_duplicate_ids(self):
        entry = DatasetEntry(id="x", left="l", right="r", content_id="c")
        with pytest.raises(ValueError):
            Dataset(entries=(entry, entry))
