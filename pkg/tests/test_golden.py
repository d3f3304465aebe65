"""Byte-level regression against a frozen CLI output.

The reference file was produced by the exact command below on this
package; any change to the numerics, the schema, or the formatting shows
up as a byte difference.  Regenerate deliberately with:

    dimerspin sweep --n 8 --delta 0.2 --kbt 0.1 --b-min 0 --b-max 4 \
        --b-steps 50 --pair 1 --pair 2 --threads 1 \
        --out tests/data/golden_n8.csv
"""

import os

from dimerspin import cli

GOLDEN = os.path.join(os.path.dirname(__file__), "data", "golden_n8.csv")

ARGS = ["sweep", "--n", "8", "--delta", "0.2", "--kbt", "0.1",
        "--b-min", "0", "--b-max", "4", "--b-steps", "50",
        "--pair", "1", "--pair", "2"]


def test_cli_output_matches_golden_file(tmp_path):
    out = tmp_path / "regen.csv"
    assert cli.main(ARGS + ["--threads", "1", "--out", str(out)]) == 0
    assert out.read_bytes() == open(GOLDEN, "rb").read()


def test_golden_reproduces_across_thread_counts(tmp_path):
    golden = open(GOLDEN, "rb").read()
    for threads in ("2", "8"):
        out = tmp_path / f"regen_{threads}.csv"
        code = cli.main(ARGS + ["--threads", threads, "--out", str(out)])
        assert code == 0
        assert out.read_bytes() == golden
