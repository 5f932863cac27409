import json

import pytest

from helpers import llava_record, write_source

from corpus import parse_dataset
from pipeline import RunConfig
from translation import RetryPolicy



@pytest.fixture
def records():
    return [ llava_record(i) for i in range(10) ]


@pytest.fixture
def samples(records):
    return parse_dataset(json.dumps(records))


@pytest.fixture
def make_source(tmp_path):
    """ `make_source(n)` writes n captioned samples as data/pretrain.en.json """
    def make(n=10, records=None, name="pretrain.en.json"):
        records = records if records is not None else [ llava_record(i) for i in range(n) ]
        return write_source(tmp_path.joinpath("data", name), records)
    return make


@pytest.fixture
def make_config(tmp_path):
    def make(source, **kwargs):
        params = dict(source=str(source), runs_dir=str(tmp_path.joinpath("runs")),
                      provider={"name": "pseudo"}, filter={"name": "none"}, parallelism=4,
                      checkpoint_every=10, retry={"max_attempts": 3, "base": 0.0, "max_wait": 0.0},
                      progress=False)
        params.update(kwargs)
        return RunConfig.from_dict(params)
    return make


@pytest.fixture
def no_wait():
    """ Retry policy that never sleeps """
    return RetryPolicy(max_attempts=3, base=0.0, max_wait=0.0, sleep=lambda s: None)
