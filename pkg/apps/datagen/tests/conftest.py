import pytest


@pytest.fixture
def write_text(tmp_path):
    def _write(content, name="matrix.txt"):
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def write_bytes(tmp_path):
    def _write(content, name="image.pgm"):
        path = tmp_path / name
        path.write_bytes(content)
        return path

    return _write
