import pytest

from secrelay.fading import params_from_db


@pytest.fixture
def base_params():
    # threshold 3 dB, eavesdropper links 0/3 dB, legitimate links 3/10/10 dB
    return params_from_db(0.0, 3.0, 3.0, 10.0, 10.0, 3.0, 1.0)


@pytest.fixture
def wiretap_params():
    # relay never decodes; direct links have unit mean SNR and zero rate target
    return params_from_db(0.0, 3.0, 0.0, 0.0, 3.0, 0.0, 0.0).with_(gamma_th=1e9)
