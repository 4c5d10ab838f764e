import pytest

from sockopt.app.settings import AgentConfig, CatalogueConfig, PolicyConfig, SimulationConfig
from sockopt.catalogue.generate import build_catalogue
from sockopt.catalogue.models import Catalogue, SockDesign


@pytest.fixture
def small_catalogue_config() -> CatalogueConfig:
    return CatalogueConfig(n_designs=24, feature_sizes=(4, 3, 2), price_min=3, price_max=6, seed=11)


@pytest.fixture
def small_catalogue(small_catalogue_config: CatalogueConfig) -> Catalogue:
    return build_catalogue(small_catalogue_config)


@pytest.fixture
def small_config(small_catalogue_config: CatalogueConfig) -> SimulationConfig:
    """A short horizon with frequent washes so every mechanism fires within a few days."""
    return SimulationConfig(
        T=40,
        kappa=4,
        theta=6,
        d=0.1,
        agent=AgentConfig(b=40.0, chi=1.25, delta=0.5, rho=0.5),
        policy=PolicyConfig(kind="greedy"),
        catalogue=small_catalogue_config,
        seed=3,
    )


@pytest.fixture
def twin_designs() -> list[SockDesign]:
    return [
        SockDesign(design_id="a", features=(0, 0, 0), price=2, eco=2.0),
        SockDesign(design_id="b", features=(0, 1, 0), price=3, eco=3.0),
        SockDesign(design_id="c", features=(1, 1, 1), price=1, eco=1.0),
    ]
