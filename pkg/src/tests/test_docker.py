"""Tests that the container files reference each other consistently."""

import re
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]


def test_compose_builds_an_existing_dockerfile():
    compose = (ROOT / "docker-compose.yml").read_text(encoding="utf-8")
    dockerfile = re.search(r"dockerfile:\s*(\S+)", compose).group(1)
    assert (ROOT / dockerfile).is_file()
    assert "infocap-runs:" in compose


def test_dockerfile_installs_the_entrypoint():
    dockerfile = (ROOT / "docker" / "app" / "Dockerfile").read_text(encoding="utf-8")
    source = re.search(r"COPY (docker/app/entrypoint\.sh) ", dockerfile).group(1)
    entrypoint = (ROOT / source).read_text(encoding="utf-8")
    assert "uvicorn app.main:app" in entrypoint
    assert 'exec infocap "$@"' in entrypoint
