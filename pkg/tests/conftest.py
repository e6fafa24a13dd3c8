import sys
from pathlib import Path

import pytest

from tvws import (
    BandPlan,
    FrontEndConfig,
    Scene,
    SensorConfig,
    SensorServer,
    SweepConfig,
    WIDEBAND_TV,
    load_scene_file,
)

sys.path.insert(0, str(Path(__file__).parent))

REPO_ROOT = Path(__file__).resolve().parents[1]
SCENES_DIR = REPO_ROOT / "scenes"

UHF_SWEEP = SweepConfig(471_250_000, 863_250_000, 250_000, 0.001)
UHF_PLAN_ARGS = (471_250_000, 863_250_000, 8_000_000)

# channel layout baked into scenes/demo_uhf.json
DEMO_WIDEBAND_CHANNELS = [0, 2, 5, 7, 11, 14, 17, 20, 23, 28, 33, 38, 43, 48]
DEMO_NARROWBAND_CHANNELS = [3, 9, 15, 25, 35, 45]


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance criterion."""
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        verdict = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE {verdict}: {name}", flush=True)


@pytest.fixture(scope="session")
def scenes_dir() -> Path:
    return SCENES_DIR


@pytest.fixture(scope="session")
def demo_scene() -> Scene:
    return load_scene_file(SCENES_DIR / "demo_uhf.json")


@pytest.fixture(scope="session")
def noise_scene() -> Scene:
    return load_scene_file(SCENES_DIR / "noise_only.json")


@pytest.fixture(scope="session")
def wideband_only_scene(demo_scene) -> Scene:
    emitters = tuple(e for e in demo_scene.emitters if e.kind == WIDEBAND_TV)
    return Scene(demo_scene.noise_psd_db_per_hz, emitters, "wideband only")


@pytest.fixture
def uhf_sweep() -> SweepConfig:
    return UHF_SWEEP


@pytest.fixture
def uhf_plan() -> BandPlan:
    return BandPlan(*UHF_PLAN_ARGS)


def make_sensor_config(scene_path, sensor_id="test-sensor", seed=1, **frontend_kwargs):
    return SensorConfig(
        sensor_id=sensor_id,
        listen="127.0.0.1:0",
        scene_path=str(scene_path),
        frontend=FrontEndConfig(seed=seed, **frontend_kwargs),
    )


@pytest.fixture
def demo_server(scenes_dir):
    config = make_sensor_config(scenes_dir / "demo_uhf.json")
    with SensorServer(config) as server:
        yield server


@pytest.fixture
def noise_server(scenes_dir):
    config = make_sensor_config(scenes_dir / "noise_only.json", sensor_id="noise-sensor")
    with SensorServer(config) as server:
        yield server
