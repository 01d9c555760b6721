# tests/test_api_endpoints.py
"""
HTTP endpoint tests against the ASGI app (no server needed)
"""
import math
import sys
from pathlib import Path

import httpx
import pytest
import pytest_asyncio

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.cache import memory_cache
from app.config import reset_settings
from app.main import app

# =============================================================================
# Test Fixtures
# =============================================================================

@pytest_asyncio.fixture
async def client():
    """Async client bound to the app in-process"""
    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(transport=transport, base_url="http://test") as c:
        yield c


@pytest.fixture
def anchor_sweep():
    return {"j1": "5/2", "j2": "2", "j": "9/2", "m": "1/2", "q_min": 0.5, "q_max": 2.0, "q_step": 0.5}

# =============================================================================
# Service
# =============================================================================

@pytest.mark.asyncio
async def test_root(client):
    """Index lists the endpoints"""
    response = await client.get("/")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "ok"
    assert "/cg" in data["endpoints"]


@pytest.mark.asyncio
async def test_favicon(client):
    """No content"""
    response = await client.get("/favicon.ico")
    assert response.status_code == 204

# =============================================================================
# Coefficients
# =============================================================================

@pytest.mark.asyncio
async def test_cg(client):
    """<1/2 1/2 1/2 -1/2|1 0> = sqrt(1/2)"""
    response = await client.post("/cg", json={"j1": "1/2", "m1": "1/2", "j2": "1/2", "m2": "-1/2", "j": "1", "m": "0"})
    assert response.status_code == 200
    data = response.json()
    assert data["kind"] == "cg"
    assert data["label"] == "<1/2 1/2 1/2 -1/2|1 0>"
    assert data["radicand"] == "1/2"
    assert data["value"] == pytest.approx(math.sqrt(0.5), abs=1e-11)


@pytest.mark.asyncio
async def test_cg_parse_error_is_400(client):
    """Non half-integer input is a client error"""
    response = await client.post("/cg", json={"j1": "1/3", "m1": "1/2", "j2": "1/2", "m2": "-1/2", "j": "1", "m": "0"})
    assert response.status_code == 400
    assert "1/3" in response.json()["detail"]


@pytest.mark.asyncio
async def test_cg_missing_field_is_422(client):
    """Request body validation"""
    response = await client.post("/cg", json={"j1": "1/2"})
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_threej(client):
    """(1 1 2; 0 0 0) = sqrt(2/15)"""
    response = await client.post("/threej", json={"j1": "1", "j2": "1", "j3": "2", "m1": "0", "m2": "0", "m3": "0"})
    assert response.status_code == 200
    data = response.json()
    assert data["exact"] == "sqrt(2/15)"
    assert data["sign"] == 1


@pytest.mark.asyncio
async def test_threej_bad_pair_is_400(client):
    """|m| > j"""
    response = await client.post("/threej", json={"j1": "1", "j2": "1", "j3": "2", "m1": "2", "m2": "0", "m3": "0"})
    assert response.status_code == 400

# =============================================================================
# Matrix and reports
# =============================================================================

@pytest.mark.asyncio
async def test_table(client):
    """Exact entries as p/q strings"""
    response = await client.post("/table", json={"j1": "1/2", "j2": "1/2"})
    assert response.status_code == 200
    data = response.json()
    assert data["N"] == 4
    assert data["rows"] == ["1/2:1/2", "1/2:-1/2", "-1/2:1/2", "-1/2:-1/2"]
    assert data["entries"][0] == ["1", "0", "0", "0"]


@pytest.mark.asyncio
async def test_verify_defaults(client):
    """Default q set; the anchor column carries I = 1.176 nats"""
    response = await client.post("/verify", json={"j1": "5/2", "j2": "2"})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert data["q_grid"] == [0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 3.0]
    column = next(c for c in data["columns"] if (c["j"], c["m"]) == ("9/2", "1/2"))
    assert column["mutual_information"] == pytest.approx(1.176, abs=1e-3)


@pytest.mark.asyncio
async def test_verify_bits(client):
    """log_base 2 reports bits"""
    response = await client.post("/verify", json={"j1": "5/2", "j2": "2", "q": [2.0], "log_base": "2"})
    assert response.status_code == 200
    column = next(c for c in response.json()["columns"] if (c["j"], c["m"]) == ("9/2", "1/2"))
    assert column["mutual_information"] == pytest.approx(1.697, abs=1e-3)


@pytest.mark.asyncio
async def test_verify_bad_log_base_is_422(client):
    """Only e and 2"""
    response = await client.post("/verify", json={"j1": "1", "j2": "1", "log_base": "10"})
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_verify_bad_q_is_400(client):
    """q <= 0 is a domain error"""
    response = await client.post("/verify", json={"j1": "1", "j2": "1", "q": [0.0]})
    assert response.status_code == 400


@pytest.mark.asyncio
async def test_sweep(client, anchor_sweep):
    """Rows over the requested grid"""
    response = await client.post("/sweep/tsallis", json=anchor_sweep)
    assert response.status_code == 200
    rows = response.json()["rows"]
    assert [row["q"] for row in rows] == [0.5, 1.0, 1.5, 2.0]
    assert rows[1]["tsallis_information"] == pytest.approx(1.176, abs=1e-3)
    assert rows[3]["tsallis_information"] == pytest.approx(1 - 5626 / 15876, abs=1e-9)


@pytest.mark.asyncio
async def test_sweep_defaults(client):
    """Empty body sweeps the anchor column on the default grid"""
    response = await client.post("/sweep/tsallis", json={})
    assert response.status_code == 200
    data = response.json()
    assert (data["j1"], data["j2"], data["j"], data["m"]) == ("5/2", "2", "9/2", "1/2")
    assert len(data["rows"]) == 60


@pytest.mark.asyncio
async def test_sweep_bad_range_is_422(client, anchor_sweep):
    """q_min must be positive"""
    response = await client.post("/sweep/tsallis", json={**anchor_sweep, "q_min": 0.0})
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_hahn_check(client):
    """Exact agreement on the anchor block"""
    response = await client.post("/hahn-check", json={"j1": "5/2", "j2": "2"})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert data["skipped"] == []


@pytest.mark.asyncio
async def test_orthogonality(client):
    """Both relations hold"""
    response = await client.post("/orthogonality", json={"j1": "1/2", "j2": "1/2"})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert data["checked"] == 20

# =============================================================================
# Cache and settings
# =============================================================================

@pytest.mark.asyncio
async def test_cache_stats_and_clear(client):
    """Computations populate the cache; clear empties it"""
    await client.post("/orthogonality", json={"j1": "1", "j2": "1/2"})
    stats = (await client.get("/cache/stats")).json()
    assert stats["total_entries"] > 0
    assert "reported_at" in stats

    response = await client.post("/cache/clear")
    assert response.json() == {"message": "Cache cleared successfully"}
    assert len(memory_cache.cache) == 0
    assert (await client.get("/cache/stats")).json()["hits"] == 0


@pytest.mark.asyncio
async def test_spin_limit_is_422(client, monkeypatch):
    """Spins above CGENTROPY_MAX_TWICE_SPIN are rejected"""
    monkeypatch.setenv("CGENTROPY_MAX_TWICE_SPIN", "2")
    reset_settings()
    try:
        response = await client.post("/table", json={"j1": "3/2", "j2": "1/2"})
    finally:
        monkeypatch.delenv("CGENTROPY_MAX_TWICE_SPIN")
        reset_settings()
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_config_reload(client, monkeypatch):
    """Reload picks up the environment"""
    monkeypatch.setenv("CGENTROPY_LOG_BASE", "2")
    try:
        response = await client.post("/config/reload")
        assert response.status_code == 200
        assert response.json()["log_base"] == "2"

        monkeypatch.setenv("CGENTROPY_LOG_BASE", "10")
        response = await client.post("/config/reload")
        assert response.status_code == 422
    finally:
        monkeypatch.delenv("CGENTROPY_LOG_BASE")
        reset_settings()
