import random

import pytest

from simplets import io
from simplets.analysis import CharacteristicProfile
from simplets.exact import CountReport, count_exact
from simplets.simpletgen import get_catalog


def write_benson(tmp_path, nverts, simplices, name="toy"):
    (tmp_path / f"{name}-nverts.txt").write_text(nverts)
    (tmp_path / f"{name}-simplices.txt").write_text(simplices)
    return tmp_path / name


class TestBenson:
    def test_containment_removed_and_remapped(self, tmp_path):
        K, desc = io.read_benson(write_benson(tmp_path, "3\n2\n", "5\n7\n9\n7\n9\n"))
        assert K.maximal_simplices == ((0, 1, 2),)
        assert desc.original_ids == (5, 7, 9)
        assert desc.dense_id == {5: 0, 7: 1, 9: 2}

    def test_duplicates_removed(self, tmp_path):
        K = io.load_benson(write_benson(tmp_path, "2\n2\n", "1\n2\n1\n2\n"))
        assert K.maximal_simplices == ((0, 1),)

    def test_times_ignored(self, tmp_path):
        prefix = write_benson(tmp_path, "2\n", "4\n8\n")
        (tmp_path / "toy-times.txt").write_text("100\n")
        assert io.load_benson(prefix).maximal_simplices == ((0, 1),)

    def test_truncated_stream(self, tmp_path):
        with pytest.raises(io.DatasetError, match=r"toy-simplices\.txt:3"):
            io.load_benson(write_benson(tmp_path, "3\n2\n", "5\n7\n9\n"))

    def test_bad_token(self, tmp_path):
        with pytest.raises(io.DatasetError, match=r"nverts\.txt:2"):
            io.load_benson(write_benson(tmp_path, "1\nx\n", "1\n"))

    def test_missing_files(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            io.load_benson(tmp_path / "nothing")


class TestPlain:
    @pytest.mark.parametrize("text, expected", [
        ("0 1 2\n2 3\n", ((0, 1, 2), (2, 3))),
        ("0 1\n0 1 2\n", ((0, 1, 2),)),
        ("# comment\n\n10 30\n30 20\n", ((0, 2), (1, 2))),
    ])
    def test_examples(self, tmp_path, text, expected):
        path = tmp_path / "k.txt"
        path.write_text(text)
        assert io.load_plain(path).maximal_simplices == expected

    def test_duplicate_node(self, tmp_path):
        path = tmp_path / "k.txt"
        path.write_text("0 0 1\n")
        with pytest.raises(io.DatasetError, match="duplicate node"):
            io.load_plain(path)

    def test_bad_token(self, tmp_path):
        path = tmp_path / "k.txt"
        path.write_text("0 1\n1 b\n")
        with pytest.raises(io.DatasetError, match=r"k\.txt:2"):
            io.load_plain(path)

    def test_order_insensitive(self, tmp_path):
        from simplets.synthetic import random_complex

        K = random_complex(25, 40, rng_seed=8, min_size=2)
        lines = [" ".join(map(str, s)) for s in K.maximal_simplices]
        random.Random(1).shuffle(lines)
        path = tmp_path / "shuffled.txt"
        path.write_text("\n".join(lines) + "\n")
        cat = get_catalog(4)
        assert count_exact(io.load_plain(path), cat).counts == count_exact(K, cat).counts

    def test_save_round_trip(self, tmp_path):
        K = io.load_plain(_write(tmp_path, "0 1 2\n2 3\n"))
        io.save_plain(K, tmp_path / "out.txt")
        assert io.load_plain(tmp_path / "out.txt") == K

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            io.load_dataset(tmp_path / "x", "csv")


def _write(tmp_path, text):
    path = tmp_path / "in.txt"
    path.write_text(text)
    return path


class TestDocuments:
    def test_report_round_trip(self, tmp_path):
        r = CountReport(4, (0.1, 2.0, 1e-17, 3.3333333333333335), ("a", "b", "c", "d"), "sc3",
                        samples=10, seed=[1, 2], elapsed=1.5)
        io.save_report(r, tmp_path / "r.json", include_timing=True)
        back = io.load_report(tmp_path / "r.json")
        assert back == r and back.elapsed == 1.5 and back.seed == [1, 2]

    def test_exact_counts_stay_integers(self):
        r = CountReport(3, (1, 2, 0), ("a", "b", "c"), "exact")
        back = io.loads_report(io.dumps_report(r))
        assert back.counts == (1, 2, 0) and all(type(c) is int for c in back.counts)

    def test_timing_excluded_by_default(self):
        r = CountReport(3, (1,), ("a",), "exact", elapsed=3.0)
        assert "elapsed" not in io.dumps_report(r)
        assert io.dumps_report(r) == io.dumps_report(CountReport(3, (1,), ("a",), "exact", elapsed=9.0))

    def test_profile_round_trip(self):
        p = CharacteristicProfile(4, (0.6, -0.8), ("a", "b"), {"dataset": "d", "seeds": {"base": 1}})
        back = io.loads_profile(io.dumps_profile(p))
        assert back == p and back.provenance == p.provenance

    def test_wrong_document(self):
        r = CountReport(3, (1,), ("a",), "exact")
        with pytest.raises(io.DatasetError):
            io.loads_profile(io.dumps_report(r))
        with pytest.raises(io.DatasetError):
            io.loads_report(io.dumps_report(r).replace('"version": 1', '"version": 7'))
