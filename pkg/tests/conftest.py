import numpy as np
import pytest

from rutnet.artifact import ModelArtifact
from rutnet.data import NormStats
from rutnet.mixture import MixtureDesign
from rutnet.nn import Network

# Production mixtures from mid-continental US pavements; gradation and
# aggregate default to dense-graded limestone where the source omits them.
PRODUCTION_MIXES = {
    "MO13_1": MixtureDesign(htpg_c=70, ltpg_c=-22, ac_pct=5.7, nmas_mm=9.5, rap_pct=17),
    "US54_1": MixtureDesign(htpg_c=58, ltpg_c=-28, ac_pct=5.2, nmas_mm=12.5, ras_pct=33),
    "1807": MixtureDesign(htpg_c=46, ltpg_c=-34, ac_pct=6.2, nmas_mm=19, rap_pct=34.4, ras_pct=14.0),
    "1818": MixtureDesign(htpg_c=64, ltpg_c=-22, ac_pct=5.7, nmas_mm=9.5, rap_pct=20.4),
    "1829": MixtureDesign(
        htpg_c=70, ltpg_c=-28, ac_pct=7.9, nmas_mm=4.75, rap_pct=17.8, ras_pct=9.3, crc_pct=10
    ),
    "1835": MixtureDesign(
        htpg_c=46, ltpg_c=-34, ac_pct=5.9, nmas_mm=12.5, rap_pct=25.0, ras_pct=16.1, crc_pct=10
    ),
}


def make_linear_artifact() -> ModelArtifact:
    """Single linear layer with identity normalization, fully hand-checkable.

    raw_mm = 0.0001 * pass + 0.02 * temp - 0.5
    """
    weights = np.zeros((1, 13))
    weights[0, 12] = 0.0001  # pass slot
    weights[0, 11] = 0.02  # temp slot
    net = Network(
        layer_dims=[13, 1],
        weights=[weights],
        biases=[np.array([-0.5])],
        activations=["linear"],
    )
    norm = NormStats(
        mean=np.zeros(13), std=np.ones(13), constant=np.zeros(13, dtype=bool)
    )
    return ModelArtifact(network=net, norm=norm, provenance={"origin": "hand-built test fixture"})


@pytest.fixture
def linear_artifact() -> ModelArtifact:
    return make_linear_artifact()


@pytest.fixture
def base_mix() -> MixtureDesign:
    return MixtureDesign()
