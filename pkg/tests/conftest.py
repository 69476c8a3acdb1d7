import pytest

from formlink.corpus import GeneratorConfig, build_schemas, generate_corpus, schema_by_category
from formlink.serialize import build_vocab


@pytest.fixture(scope="session")
def gen_config():
    return GeneratorConfig(n_categories=6, docs_per_category=8, seed=13)


@pytest.fixture(scope="session")
def schemas(gen_config):
    return build_schemas(gen_config)


@pytest.fixture(scope="session")
def docs(gen_config, schemas):
    return generate_corpus(gen_config, schemas)


@pytest.fixture(scope="session")
def by_cat(schemas):
    return schema_by_category(schemas)


@pytest.fixture(scope="session")
def vocab(docs, schemas):
    return build_vocab(docs, schemas)
