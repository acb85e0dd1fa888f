"""Config parsing: accepted format, defaults, and line-precise errors."""

import pytest

from lsc.config import parse_config
from lsc.errors import ConfigError

GOOD = """\
[field]
q = 2
m = 4
modulus = 1,1,0,0,1

[code]
layers = 3:1, 4:1

[channel]
mode = exact
rho = 0,1,2
t = 0,1

[run]
algorithm = both
trials = 50
seed = 42
max_sweeps = 3
workers = 2

[scenario]
mode = unicast
unicast_layer = 2
"""


def test_parse_good_config():
    cfg = parse_config(GOOD, "good.ini")
    assert cfg.q == 2 and cfg.m == 4
    assert cfg.modulus == (1, 1, 0, 0, 1)
    assert cfg.layers == ((3, 1), (4, 1))
    assert cfg.rho_values == (0, 1, 2)
    assert cfg.t_values == (0, 1)
    assert cfg.algorithm == "both"
    assert cfg.algorithms() == ("alg1", "alg2", "alg2-iterative")
    assert cfg.trials == 50 and cfg.seed == 42
    assert cfg.max_sweeps == 3 and cfg.workers == 2
    assert cfg.scenario_mode == "unicast" and cfg.unicast_layer == 2
    assert cfg.grid() == ((0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1))
    code = cfg.build_code()
    assert code.total_length == 7


def test_defaults_apply():
    cfg = parse_config("", "empty.ini")
    assert cfg.layers == ((3, 1), (4, 1))
    assert cfg.field_params().modulus == (1, 1, 0, 0, 1)


def test_comments_and_inline_comments():
    cfg = parse_config(
        "# heading\n[run]\ntrials = 7  # inline\nseed = 3 ; other style\n", "c.ini"
    )
    assert cfg.trials == 7 and cfg.seed == 3


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[nope]\n", "nope.ini:1: unknown section"),
        ("[run]\nbogus = 1\n", "nope.ini:2: unknown key"),
        ("trials = 1\n", "nope.ini:1: key outside"),
        ("[run]\ntrials\n", "nope.ini:2: expected 'key = value'"),
        ("[run]\ntrials = 1\ntrials = 2\n", "nope.ini:3: duplicate key"),
        ("[run]\ntrials = ten\n", "nope.ini:2: trials must be an integer"),
        ("[run]\ntrials = -1\n", "nope.ini:2: trials must be >= 0"),
        ("[code]\nlayers = 3-1\n", "nope.ini:2: layers entries use 'n:k'"),
        ("[code]\nlayers = 5:1\n", "violates 1 <= k <= n <= m"),
        ("[code]\nlayers = 3:0\n", "violates 1 <= k <= n <= m"),
        ("[channel]\nrho = 9\n", "rho = 9 outside"),
        ("[channel]\nt = 5\n", "t = 5 outside"),
        ("[channel]\nmode = matrix\n", "matrix mode requires 'collected'"),
        ("[run]\nalgorithm = alg3\n", "algorithm must be one of"),
        ("[scenario]\nmode = broadcast\n", "scenario mode must be one of"),
        ("[scenario]\nunicast_layer = 3\n", "exceeds the layer count"),
        ("[field]\nq = 4\n", "q must be prime"),
        ("[field]\nmodulus = 1,0,0,0,1\n", "reducible"),
        ("[search]\ntargets = alg9\n", "unknown search target"),
    ],
)
def test_line_precise_errors(text, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(text, "nope.ini")
    assert fragment in str(err.value)


def test_search_profiles_parse():
    text = """\
[search]
budget = 5000
targets = alg1-beyond, alg2-rescues
alg1-beyond.ds = 4
alg1-beyond.layer_ds = 2,2
alg2-rescues.retry_ds = 2
"""
    cfg = parse_config(text, "s.ini")
    assert cfg.search_budget == 5000
    assert cfg.search_targets == ("alg1-beyond", "alg2-rescues")
    assert cfg.search_profiles["alg1-beyond"].ds == 4
    assert cfg.search_profiles["alg1-beyond"].layer_ds == (2, 2)
    assert cfg.search_profiles["alg2-rescues"].retry_ds == 2


def test_verify_overrides_parse():
    cfg = parse_config("[verify]\nrandom_checks = 50\n", "v.ini")
    assert cfg.verify_counts == {"random_checks": 50}


def test_matrix_mode_config():
    text = """\
[channel]
mode = matrix
collected = 9
error_packets = 1
"""
    cfg = parse_config(text, "m.ini")
    assert cfg.channel_mode == "matrix"
    assert cfg.collected == 9 and cfg.error_packets == 1
