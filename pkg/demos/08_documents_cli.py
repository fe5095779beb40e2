# Canonical documents and the command-line front end.
#
# One JSON document bundles a tower with optional topology, state and
# category payloads. Serialization is canonical: sets sorted, id-keyed maps
# as sorted pair lists, byte-identical round trips.

import subprocess
import sys
import tempfile
from pathlib import Path

from hyperstruct.document import Document, parse, serialize
from hyperstruct.installers import make_brunnian_tower
from hyperstruct.topology import maximal_topology

h = make_brunnian_tower([3, 3])
doc = Document(hyperstructure=h, topology=maximal_topology(h))
text = serialize(doc)
print("canonical document starts with:")
print("\n".join(text.splitlines()[:6]))

again = parse(text)
print("round trip byte-identical:", serialize(again) == text)
print("tower equal after round trip:", again.hyperstructure == h)

# the CLI drives the same machinery; every report is deterministic
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "tower.json"
    path.write_text(text, encoding="utf-8")
    for argv in (
        ["validate", str(path)],
        ["brunnian", str(path)],
        ["topology-check", str(path)],
    ):
        proc = subprocess.run(
            [sys.executable, "-m", "hyperstruct.cli", *argv],
            capture_output=True,
            text=True,
        )
        print(f"$ hyperstruct {' '.join(argv[:1])} ... -> exit {proc.returncode}")
        print(proc.stdout, end="")
