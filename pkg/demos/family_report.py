"""Run the surface report on every shipped (2k,2l,2) family bundle."""

import io

from viropatch import cli
from viropatch.fixtures import FAMILY, fixture_path

for key in FAMILY:
    buf = io.StringIO()
    code = cli.main(["surface", str(fixture_path(key))], out=buf)
    print(f"== {key} (exit {code})")
    print(buf.getvalue().rstrip())
