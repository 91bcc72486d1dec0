from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent

CERT_NAMES = ["t5_7", "t5_8", "t5_9", "t5_11", "t5_12"]


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def shipped_certs():
    from tourflag.certificates import builtin_cert_dir, load_certificate

    return {name: load_certificate(builtin_cert_dir() / f"{name}.json") for name in CERT_NAMES}
