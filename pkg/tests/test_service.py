"""Service endpoints: status codes, report shapes, error mapping, tolerance
plumbing. Numerical depth lives in the library tests; here we check the wire."""

import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from framelab.frames import Frame, mean_centered_tight_frame, staircase_frame
from framelab.gabor import GaborSystem, box_window, spectral_bounds
from framelab.serialize import dumps_canonical, frame_from_json, frame_to_json
from framelab.service import app
from framelab.suite import list_names

from conftest import crandn, rng_for


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def post(client, path, payload, expect=200):
    resp = client.post(path, json=payload)
    assert resp.status_code == expect, resp.text
    return resp.json()


def frame_doc(matrix) -> dict:
    return frame_to_json(Frame(matrix))


class TestAnalyze:
    def test_tight_frame_report(self, client):
        doc = frame_to_json(mean_centered_tight_frame(2))
        out = post(client, "/analyze", {"frame": doc})
        assert out["d"] == 2 and out["n"] == 3
        assert out["diagnostics"]["is_frame"] is True
        assert out["diagnostics"]["is_normalized_tight"] is True
        assert out["duals"]["kernel_dimension"] == 1
        # canonical dual of a normalized tight frame is the frame itself
        dual = frame_from_json(out["duals"]["canonical"])
        ref = mean_centered_tight_frame(2).matrix
        assert np.allclose(dual.matrix, ref, atol=1e-12)
        assert out["naimark"]["ambient"] == 3
        assert out["naimark"]["projection_defect"] <= 1e-9
        assert out["naimark"]["trace_gap"] <= 1e-9

    def test_non_frame_skips_duals(self, client):
        doc = {"d": 1, "n": 1, "columns": [[[0.0, 0.0]]]}
        out = post(client, "/analyze", {"frame": doc})
        assert out["diagnostics"]["is_frame"] is False
        assert out["duals"] is None
        assert out["naimark"] is None

    def test_parse_error_maps_to_400(self, client):
        doc = {"d": 2, "n": 1, "columns": [[[1.0, 0.0]]]}  # column too short
        body = post(client, "/analyze", {"frame": doc}, expect=400)
        assert body["detail"]["error"] == "ParseError"
        assert body["detail"]["message"]

    def test_missing_field_is_422(self, client):
        resp = client.post("/analyze", json={"frame": {"d": 1, "n": 1}})
        assert resp.status_code == 422

    def test_tolerance_override_changes_verdict(self, client):
        doc = frame_doc(np.diag([1.0, 0.95]))
        strict = post(client, "/analyze", {"frame": doc})
        loose = post(client, "/analyze", {"frame": doc, "tol": {"rel_eq": 0.2}})
        assert strict["diagnostics"]["is_tight"] is False
        assert loose["diagnostics"]["is_tight"] is True


class TestGabor:
    def test_critical_box_report(self, client):
        out = post(client, "/gabor", {"L": 12, "a": 3, "b": 4, "window": "box"})
        assert out["is_frame"] is True
        assert out["system"]["M"] == 3 and out["system"]["N"] == 4
        assert out["system"]["is_critical"] is True
        assert out["tight"]["tight_eigen"] is True
        assert out["bounds"]["method"] == "dense"
        assert abs(out["bounds"]["A"] - 1.0) <= 1e-9
        assert out["duality"]["system_is_frame"] is True
        assert out["duality"]["adjoint_is_riesz"] is True
        assert out["wexler_raz"]["accepts_canonical_dual"] is True
        assert out["wexler_raz"]["target"] == 1.0
        assert len(out["dual_window"]) == 12
        assert len(out["zak_spectrum"]) == 12

    def test_undersampled_reports_not_frame(self, client):
        out = post(client, "/gabor", {"L": 12, "a": 6, "b": 4})
        assert out["is_frame"] is False
        assert out["wexler_raz"] is None
        assert out["dual_window"] is None
        assert out["zak_spectrum"] is None  # not critical either

    def test_oversampled_has_no_zak_spectrum(self, client):
        out = post(client, "/gabor", {"L": 12, "a": 2, "b": 3})
        assert out["is_frame"] is True
        assert out["zak_spectrum"] is None

    def test_bad_divisor_is_400(self, client):
        body = post(client, "/gabor", {"L": 12, "a": 5, "b": 4}, expect=400)
        assert body["detail"]["error"] == "BadDivisor"

    def test_inline_window_pairs(self, client):
        out = post(
            client,
            "/gabor",
            {"L": 2, "a": 1, "b": 1, "window": [[1.0, 0.0], [0.5, 0.5]]},
        )
        assert out["system"]["window"] == [[1.0, 0.0], [0.5, 0.5]]


class TestZak:
    def test_default_companion_is_critical(self, client):
        out = post(client, "/zak", {"L": 8, "a": 2, "window": "box"})
        assert out["roundtrip_dev"] <= 1e-12
        crit = out["critical"]
        assert crit is not None
        sys = GaborSystem(8, box_window(8, 2, 4), 2, 4)
        A, B = spectral_bounds(sys)
        assert abs(crit["A"] - A) <= 1e-9 * max(1.0, B)
        assert abs(crit["B"] - B) <= 1e-9 * max(1.0, B)
        assert crit["is_frame"] is (A > 1e-9 * B)

    def test_normalized_flag_reaches_document(self, client):
        out = post(client, "/zak", {"L": 8, "a": 2, "normalized": True})
        assert out["zak"]["normalized"] is True
        assert out["zak"]["a"] == 2 and out["zak"]["N"] == 4

    def test_noncritical_companion(self, client):
        out = post(client, "/zak", {"L": 8, "a": 2, "b": 2})
        assert out["critical"] is None

    def test_bad_step_is_400(self, client):
        body = post(client, "/zak", {"L": 9, "a": 2}, expect=400)
        assert body["detail"]["error"] == "BadDivisor"


class TestTranslates:
    def test_delta_orthonormal(self, client):
        out = post(client, "/translates", {"L": 8, "b": 2, "phi": "delta"})
        assert out["verdict"] == "orthonormal"
        assert out["p"] == [2.0, 2.0, 2.0, 2.0]
        assert np.allclose(out["gram_eigenvalues"], 1.0)

    def test_routes_agree_on_random_window(self, client):
        out = post(client, "/translates", {"L": 12, "b": 3, "phi": "rand:3"})
        assert out["verdict"] in {
            "orthonormal",
            "exact_frame_sequence",
            "frame_sequence",
            "not_frame_sequence",
        }
        spectral = np.sort(np.asarray(out["p"]) / 3.0)
        gram = np.asarray(out["gram_eigenvalues"])
        assert np.allclose(gram, spectral, atol=1e-9 * max(1.0, spectral[-1]))

    def test_bad_divisor_is_400(self, client):
        body = post(client, "/translates", {"L": 8, "b": 3, "phi": "delta"}, expect=400)
        assert body["detail"]["error"] == "BadDivisor"


class TestPerturb:
    def test_identical_frames(self, client):
        doc = frame_doc(np.eye(2))
        out = post(client, "/perturb", {"frame_f": doc, "frame_g": doc})
        rep = out["report"]
        assert rep["paley_wiener_lambda"] <= 1e-12
        assert rep["g_is_frame"] is True
        assert rep["equivalent"] is True

    def test_degenerate_g_serializes_infinity(self, client):
        f = frame_doc(np.eye(1))
        g = {"d": 1, "n": 1, "columns": [[[0.0, 0.0]]]}
        out = post(client, "/perturb", {"frame_f": f, "frame_g": g})
        rep = out["report"]
        assert rep["g_is_frame"] is False
        assert rep["analysis_bound"] == "inf"

    def test_shape_mismatch_is_400(self, client):
        f = frame_doc(np.eye(2))
        g = frame_doc(np.eye(3))
        body = post(client, "/perturb", {"frame_f": f, "frame_g": g}, expect=400)
        assert body["detail"]["error"] in {"ShapeMismatch", "CountMismatch"}


class TestProjMethod:
    def test_onb_prefixes(self, client):
        doc = frame_doc(np.eye(3))
        out = post(client, "/projmethod", {"frame": doc})
        tr = out["trace"]
        assert tr["dims"] == [1, 2, 3]
        assert np.allclose(tr["inv_norms"], 1.0, atol=1e-9)
        assert all(tr["cond106"].values())
        assert out["riesz"]["growth_profile"] == tr["inv_norms"]
        assert abs(out["riesz"]["sup_inv_norm"] - 1.0) <= 1e-9

    def test_explicit_probes_and_sections(self, client):
        doc = frame_to_json(staircase_frame("repeat_staircase", 3))
        probe = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
        out = post(
            client,
            "/projmethod",
            {
                "frame": doc,
                "index_sets": [[0, 1], [0, 1, 2], [0, 1, 2, 3, 4, 5]],
                "probes": [probe],
            },
        )
        tr = out["trace"]
        assert len(tr["strong_errors"]) == 3
        assert len(tr["strong_errors"][0]) == 1
        assert tr["strong_errors"][-1][0] <= 1e-9

    def test_seeded_probes_deterministic(self, client):
        doc = frame_doc(rng_for(42).standard_normal((2, 4)))
        payload = {"frame": doc, "n_probes": 2, "seed": 9}
        one = post(client, "/projmethod", payload)
        two = post(client, "/projmethod", payload)
        assert dumps_canonical(one) == dumps_canonical(two)
        other = post(client, "/projmethod", {**payload, "seed": 10})
        assert other["trace"]["strong_errors"] != one["trace"]["strong_errors"]

    def test_bad_chain_is_400(self, client):
        doc = frame_doc(np.eye(2))
        body = post(
            client,
            "/projmethod",
            {"frame": doc, "index_sets": [[1], [0]]},
            expect=400,
        )
        assert body["detail"]["error"] == "BadIndexSets"

    def test_non_frame_is_400(self, client):
        rng = rng_for(7)
        doc = frame_doc(crandn(rng, 3, 2) @ crandn(rng, 2, 5))
        body = post(client, "/projmethod", {"frame": doc}, expect=400)
        assert body["detail"]["error"] == "NotAFrame"


class TestScan:
    def test_divisor_grid(self, client):
        out = post(client, "/scan", {"L": 6, "window": "rand:0"})
        assert out["L"] == 6
        assert len(out["rows"]) == 16  # divisors {1,2,3,6} squared
        row = out["rows"][0]
        assert set(row) == {"L", "a", "b", "redundancy", "is_frame", "A", "B", "is_tight"}
        assert row["L"] == 6 and row["a"] == 1 and row["b"] == 1
        assert row["is_tight"] is True and row["redundancy"] == 6.0

    def test_lattice_bound_spec_rejected(self, client):
        body = post(client, "/scan", {"L": 6, "window": "box"}, expect=400)
        assert body["detail"]["error"] == "ValueError"
        assert "lattice" in body["detail"]["message"]


class TestBench:
    def test_rows_and_flag(self, client):
        out = post(client, "/bench", {"sizes": [8, 16], "a": 2, "b": 2, "reps": 3})
        assert out["all_ok"] is True
        assert [r["L"] for r in out["rows"]] == [8, 16]
        for row in out["rows"]:
            assert set(row) >= {
                "L",
                "a",
                "b",
                "direct_apply_ns",
                "walnut_apply_ns",
                "speedup",
                "max_rel_dev",
                "ok",
            }
            assert row["max_rel_dev"] <= 1e-9
            assert row["direct_apply_ns"] >= 0

    def test_bad_divisor_is_400(self, client):
        body = post(client, "/bench", {"sizes": [7], "a": 2, "b": 2}, expect=400)
        assert body["detail"]["error"] == "BadDivisor"


class TestSuite:
    def test_list_only(self, client):
        out = post(client, "/suite", {"list_only": True})
        assert out["names"] == list_names()
        assert out["report"] is None

    def test_subset_run(self, client):
        out = post(client, "/suite", {"names": ["zak.roundtrip"]})
        rep = out["report"]
        assert rep["counts"] == {"total": 1, "passed": 1, "failed": 0}
        assert rep["ok"] is True

    def test_unknown_name_is_400(self, client):
        body = post(client, "/suite", {"names": ["gabor.nope"]}, expect=400)
        assert body["detail"]["error"] == "ValueError"
