"""A full command-line session on a copy of the bundled project.

Run with:  python demos/03_command_line_run.py [output-directory]
Equivalent shell commands are printed as they run.
"""

# %% Copy the bundled project next to its material database and climate table.
import json
import shutil
import sys
import tempfile
from pathlib import Path

from thermorisk.cli import main
from thermorisk.fixtures import DATA

work = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="thermorisk-"))
work.mkdir(parents=True, exist_ok=True)
for name in ("office_project.toml", "materials.csv", "climate_chicago.csv"):
    shutil.copy(DATA / name, work / name)
project = work / "office_project.toml"


def sh(*args):
    print("$ thermorisk", " ".join(args))
    code = main(list(args))
    print(f"  (exit {code})\n")
    return code


# %% Check the inputs, then run the campaign and render the figures.
sh("validate", str(project))
sh("run", str(project), "--samples", "500", "--seed", "7", "--jobs", "0", "--out", str(work / "run"))

# %% A broken project is refused with exit status 1 and one line per violation.
broken = work / "broken.toml"
broken.write_text(project.read_text().replace("glazing_shgc = 0.20", "glazing_shgc = 1.3", 1))
sh("validate", str(broken))

# %% Everything a reviewer needs is on disk.
manifest = json.loads((work / "run" / "manifest.json").read_text())
print("files:", ", ".join(manifest["files"]))
print("stage seconds:", manifest["stage_seconds"])
print("open", work / "run" / "plots" / "histogram_option1.svg")
