"""Decomposition of orthogonal networks into V2 rotations and sign flips."""

import math

import numpy as np
import pytest

from scattermet import decompose as dc
from scattermet import networks
from scattermet.errors import DomainError, NotOrthogonal


class TestElements:
    def test_v2_limits(self):
        assert np.allclose(dc.v2(1.0), np.eye(2))
        assert np.allclose(dc.v2(0.0), np.array([[0, -1], [1, 0]]))

    def test_single_full_reflectivity_rotation(self):
        M = dc.reconstruct([dc.Rotation(0, 1.0)], 2)
        assert np.abs(M - np.eye(2)).max() == 0.0

    def test_single_sign_flip(self):
        M = dc.reconstruct([dc.SignFlip(1)], 2)
        assert np.abs(M - np.diag([1.0, -1.0])).max() == 0.0

    def test_application_order(self):
        # flip first, then rotate: product is rotation @ flip
        elements = [dc.SignFlip(0), dc.Rotation(0, 0.6)]
        want = dc.v2(0.6) @ np.diag([-1.0, 1.0])
        assert np.abs(dc.reconstruct(elements, 2) - want).max() < 1e-15

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            dc.reconstruct([dc.Rotation(3, 0.5)], 4)
        with pytest.raises(DomainError):
            dc.reconstruct([dc.SignFlip(4)], 4)


class TestDecompose:
    def test_identity_is_empty(self):
        elements = dc.decompose_orthogonal(np.eye(4))
        assert elements == []

    def test_symmetriser_round_trip(self):
        T4 = networks.symmetrizer(4)
        elements = dc.decompose_orthogonal(T4)
        assert dc.reconstruction_error(elements, T4) < 1e-12
        assert dc.rotation_count(elements) <= 6

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 8, 12, 16])
    def test_random_orthogonal_round_trip(self, m):
        rng = np.random.default_rng(m)
        Q, _ = np.linalg.qr(rng.normal(size=(m, m)))
        elements = dc.decompose_orthogonal(Q)
        assert dc.reconstruction_error(elements, Q) < 1e-12
        assert dc.rotation_count(elements) <= m * (m - 1) // 2

    @pytest.mark.parametrize("m", [4, 8, 16, 32])
    def test_symmetriser_sizes(self, m):
        T = networks.symmetrizer(m)
        elements = dc.decompose_orthogonal(T)
        assert dc.reconstruction_error(elements, T) < 1e-12

    def test_negative_determinant(self):
        rng = np.random.default_rng(77)
        Q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
        Q[:, 0] *= -1.0  # force det = -1 territory
        elements = dc.decompose_orthogonal(Q)
        assert dc.reconstruction_error(elements, Q) < 1e-12
        flips = sum(isinstance(el, dc.SignFlip) for el in elements)
        assert (-1.0) ** flips == pytest.approx(np.linalg.det(Q), abs=1e-9)

    def test_permutation_matrix(self):
        P = np.eye(5)[[4, 0, 1, 2, 3]]
        elements = dc.decompose_orthogonal(P)
        assert dc.reconstruction_error(elements, P) < 1e-12

    def test_not_orthogonal_rejected(self):
        with pytest.raises(NotOrthogonal):
            dc.decompose_orthogonal(np.ones((3, 3)))

    def test_corrupted_sign_rejected(self):
        T = networks.symmetrizer(4)
        T[2, 1] *= -1.0
        with pytest.raises(NotOrthogonal):
            dc.decompose_orthogonal(T)


class TestEtaReport:
    def test_identity_report_empty(self):
        assert dc.reflectivity_report(dc.decompose_orthogonal(np.eye(4))) == []

    def test_symmetriser_report(self):
        elements = dc.decompose_orthogonal(networks.symmetrizer(4))
        report = dc.reflectivity_report(elements)
        assert len(report) >= 4
        assert all(0.0 <= eta < 1.0 for eta in report)

    def test_reference_radicals(self):
        # beam-splitter reflectivities quoted for the four-mode symmetriser
        eta1 = 1 / math.sqrt(50 + 20 * math.sqrt(6))
        eta2 = math.sqrt(2 / 5)
        eta3 = 1 / math.sqrt(251 - 100 * math.sqrt(6))
        eta4 = 1 / math.sqrt(300 + 120 * math.sqrt(6))
        assert round(eta1, 2) == 0.10
        assert round(eta2, 2) == 0.63
        assert round(eta3, 2) == 0.41
        assert round(eta4, 2) == 0.04
        assert eta4 == pytest.approx(0.041033, abs=1e-6)


class TestSerialization:
    def test_json_round_trip(self):
        elements = dc.decompose_orthogonal(networks.symmetrizer(4))
        back = dc.elements_from_json(dc.elements_to_json(elements))
        assert back == elements

    def test_wire_indices_one_based(self):
        import json

        data = json.loads(dc.elements_to_json([dc.Rotation(0, 0.5), dc.SignFlip(2)]))
        assert data[0]["modes"] == [1, 2]
        assert data[1]["mode"] == 3

    def test_listing_mentions_every_element(self):
        elements = [dc.Rotation(1, 0.3), dc.SignFlip(0)]
        listing = dc.circuit_listing(elements)
        assert "V2(eta=0.300000) on modes (2, 3)" in listing
        assert "pi flip on mode 1" in listing
