"""Unit tests for index pairings and the pairing matrix."""
import pytest

from src.errors import CertificationError, PairingMismatchError, UsageError
from src.pairing import index
from src.pairing.index import (
    THREADS_ENV, PairingEntry, closed_form_M, index_pairing, pairing_matrix, threads_from_env,
    worker_count,
)
from src.pairing.traces import CertificationSettings, CertifiedReal, projection_trace
from src.rep.operators import RepParams


@pytest.mark.unit
class TestClosedForm:

    def test_l_1(self):
        assert closed_form_M(1) == ((1, 0), (1, 1))

    def test_l_3(self):
        assert closed_form_M(3) == (
            (1, 0, 0, 0),
            (1, 1, 0, 0),
            (1, 0, 1, 0),
            (1, 0, 0, 1),
        )

    def test_invalid_l(self):
        with pytest.raises(ValueError):
            closed_form_M(0)


@pytest.mark.unit
class TestIndexPairing:

    def test_counit_row_is_exact(self):
        entry = index_pairing(2, 3, 0, 0, 0.5, 300)
        assert entry.value == 1
        assert entry.trace.bound == 0.0
        assert index_pairing(2, 3, 0, 2, 0.5, 300).value == 0

    @pytest.mark.parametrize('s,r,expected', [(1, 0, 1), (2, 2, 1), (3, 1, 0), (2, 0, 1)])
    def test_entries(self, s, r, expected):
        entry = index_pairing(2, 3, s, r, 0.5, 300)
        assert entry.value == expected
        assert entry.trace.bound < 1e-8

    def test_out_of_range(self):
        with pytest.raises(ValueError, match='Invalid pairing indices'):
            index_pairing(2, 3, 4, 0, 0.5, 300)

    def test_to_dict(self):
        entry = PairingEntry(1, 0, CertifiedReal(1.0, 1e-12), 1)
        assert entry.to_dict() == {'s': 1, 'r': 0, 'value': 1, 'bound': 1e-12}

    @pytest.mark.parametrize('s', [1, 2, 3])
    def test_projection_row_uses_assembled_projection(self, s):
        entry = index_pairing(2, 3, s, 0, 0.5, 300)
        trace = projection_trace(RepParams(k=2, l=3, s=s, q=0.5, N=300))
        assert entry.trace == trace
        assert entry.value == 1

    def test_tighter_settings_keep_the_integer(self):
        strict = CertificationSettings(rounding_threshold=0.05, max_bound=1e-8)
        for s in range(1, 4):
            for r in range(4):
                loose = index_pairing(2, 3, s, r, 0.5, 300)
                tight = index_pairing(2, 3, s, r, 0.5, 300, settings=strict)
                assert tight.value == loose.value

    def test_doubling_N_shrinks_bound(self):
        settings = CertificationSettings(max_bound=1e-3)
        coarse = index_pairing(1, 1, 1, 0, 0.9, 64, settings=settings)
        fine = index_pairing(1, 1, 1, 0, 0.9, 128, settings=settings)
        assert fine.trace.bound < coarse.trace.bound
        assert abs(fine.trace.value - coarse.trace.value) < coarse.trace.bound
        assert fine.value == coarse.value == 1


@pytest.mark.unit
class TestPairingMatrix:

    @pytest.mark.parametrize('k,l', [(1, 1), (1, 2), (2, 3)])
    def test_matches_closed_form(self, k, l):
        result = pairing_matrix(k, l, 0.5, 300, workers=2)
        assert result.M == closed_form_M(l)
        assert len(result.entries) == (l + 1) ** 2
        assert result.max_bound < 1e-8

    def test_mismatch_raises(self, mocker):
        mocker.patch.object(index, 'closed_form_M', return_value=((1, 1), (1, 1)))
        with pytest.raises(PairingMismatchError):
            pairing_matrix(1, 1, 0.5, 300, workers=1)

    def test_certification_failure_propagates(self):
        with pytest.raises(CertificationError):
            pairing_matrix(1, 1, 0.99, 32, workers=1)

    def test_to_dict(self):
        result = pairing_matrix(1, 1, 0.5, 300, workers=1)
        data = result.to_dict()
        assert data['M'] == [[1, 0], [1, 1]]
        assert set(data) == {'l', 'k', 'q', 'N', 'M', 'max_bound'}

    @pytest.mark.slow
    @pytest.mark.parametrize('q', [0.3, 0.5, 0.8])
    @pytest.mark.parametrize('k,l', [(1, 1), (1, 2), (2, 3), (3, 5)])
    def test_q_independence(self, k, l, q):
        result = pairing_matrix(k, l, q, 300)
        assert result.M == closed_form_M(l)
        assert result.max_bound < 1e-6

    @pytest.mark.parametrize('q', [0.1, 0.9])
    def test_q_range_edges(self, q):
        result = pairing_matrix(2, 3, q, 300, workers=2)
        assert result.M == closed_form_M(3)
        assert result.max_bound < 1e-6

    @pytest.mark.slow
    @pytest.mark.parametrize('k,l', [(1, 2), (2, 3)])
    def test_doubling_N_keeps_matrix(self, k, l):
        coarse = pairing_matrix(k, l, 0.5, 300, workers=2)
        fine = pairing_matrix(k, l, 0.5, 600, workers=2)
        assert fine.M == coarse.M
        for before, after in zip(coarse.entries, fine.entries):
            assert abs(after.trace.value - before.trace.value) <= before.trace.bound + after.trace.bound


@pytest.mark.unit
class TestWorkerCount:

    def test_requested_is_capped_by_jobs(self):
        assert worker_count(4, 16) == 4
        assert worker_count(4, 0) == 1

    def test_environment_cap(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, '3')
        assert worker_count(16) == 3

    def test_cpu_count_fallback(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV, raising=False)
        monkeypatch.setattr(index.os, 'cpu_count', lambda: 2)
        assert worker_count(16) == 2

    @pytest.mark.parametrize('value', ['four', '0', '-2', '1.5'])
    def test_malformed_environment_is_usage_error(self, monkeypatch, value):
        monkeypatch.setenv(THREADS_ENV, value)
        with pytest.raises(UsageError, match=THREADS_ENV):
            worker_count(16)

    def test_empty_environment_is_unset(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, ' ')
        monkeypatch.setattr(index.os, 'cpu_count', lambda: 2)
        assert threads_from_env() is None
        assert worker_count(16) == 2
