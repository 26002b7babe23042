import json

import pytest

from lexlearn.data import hr1099_path
from lexlearn.elicitation import ElicitationConfig
from lexlearn.inference import build_space, posterior_batch
from lexlearn.ontology import load_ontology


@pytest.fixture(scope="session")
def hr_doc():
    return json.loads(hr1099_path().read_text(encoding="utf-8"))


@pytest.fixture()
def hr_ontology(hr_doc):
    return load_ontology(hr_doc)


@pytest.fixture()
def hr_space(hr_ontology):
    return build_space(hr_ontology, "external")


@pytest.fixture()
def hr_prior(hr_space):
    return posterior_batch(hr_space, [])


@pytest.fixture()
def cfg():
    return ElicitationConfig()
