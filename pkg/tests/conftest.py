import math

import numpy as np
import pytest

from mechopt import DesignParameters, DomainError, dexterity, jacobian

ACCEPTANCE_LINES = []


def random_design(rng):
    """Full 13-parameter design with small out-of-plane offsets."""
    while True:
        a = rng.uniform(-0.1, 0.1, (2, 3))
        a[:, 2] = rng.uniform(-0.02, 0.02, 2)
        b = rng.uniform(-0.06, 0.06, (2, 3))
        b[:, 2] = rng.uniform(-0.02, 0.02, 2)
        try:
            return DesignParameters(a[0], a[1], b[0], b[1], rng.uniform(0.05, 0.2))
        except DomainError:
            continue


def well_conditioned_sample(rng, max_tilt=math.pi / 4, seed_offset=math.radians(5)):
    """(design, pose, seed) with dexterity >= 0.1 at the pose and no sign
    change of det J on the segment from seed to pose (same assembly mode)."""
    while True:
        d = random_design(rng)
        q = rng.uniform(-max_tilt, max_tilt, 2)
        delta = rng.normal(size=2)
        delta *= rng.uniform(0.0, seed_offset) / np.linalg.norm(delta)
        if dexterity(d, q) < 0.1:
            continue
        dets = [np.linalg.det(jacobian(d, q + t * delta)) for t in np.linspace(0, 1, 11)]
        if min(dets) * max(dets) <= 0:
            continue
        return d, q, q + delta


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def example_design():
    # a1, b1 from the worked inverse-kinematics example, mirrored for leg 2
    return DesignParameters(
        a1=(0.06, 0.04, 0.0), a2=(0.06, -0.04, 0.0),
        b1=(0.03, 0.02, 0.0), b2=(0.03, -0.02, 0.0), h=0.10,
    )


@pytest.fixture
def acceptance_report():
    def record(name, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {name}  {detail}".rstrip())
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
