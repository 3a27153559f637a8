import pytest

from agmlift.padic import PadicField

_CACHE = {}


@pytest.fixture
def field_cache():
    """Shared PadicField instances; construction is the expensive part."""

    def get(d, N, f=None):
        key = (d, N, f)
        if key not in _CACHE:
            _CACHE[key] = PadicField(d, N, f=f)
        return _CACHE[key]

    return get
