"""Provide the RunManifest class that records how results were produced.

Every CSV file written by the command line tool starts with a comment
line carrying the run id of its manifest.  The manifest itself is
written as a YAML sidecar file next to the CSV file.
"""

import csv
from pathlib import Path
import yaml
import hetcache
from .exception import HetNetError
from .tools import Version, now_str, checksum


class RunManifest:

    Version = "1.0"

    def __init__(self, fileobj=None, command=None, config=None, seed=None,
                 method=None):
        if fileobj is not None:
            self.head = yaml.safe_load(fileobj)
            if not isinstance(self.head, dict) or "Version" not in self.head:
                raise HetNetError("invalid run manifest")
            if self.version > self.Version:
                raise HetNetError("unsupported run manifest version %s"
                                  % self.head["Version"])
        elif command is not None:
            self.head = {
                "Command": list(command),
                "ConfigHash": checksum(config.as_dict())["sha256"],
                "Date": now_str(),
                "Generator": "hetcache %s" % hetcache.__version__,
                "Method": method,
                "Outputs": [],
                "Seed": seed,
                "Version": self.Version,
            }
        else:
            raise TypeError("Either fileobj or command must be provided")

    @property
    def version(self):
        return Version(self.head["Version"])

    @property
    def command(self):
        return tuple(self.head["Command"])

    @property
    def config_hash(self):
        return self.head["ConfigHash"]

    @property
    def seed(self):
        return self.head.get("Seed")

    @property
    def method(self):
        return self.head.get("Method")

    @property
    def outputs(self):
        return tuple(self.head["Outputs"])

    @property
    def run_id(self):
        """A hash of everything that determines the results.

        The date and the generator are left out, so that repeating a
        run yields the same id.
        """
        keys = ("Command", "ConfigHash", "Method", "Seed", "Version")
        return checksum({ k: self.head[k] for k in keys })["sha256"][:16]

    def add_output(self, path):
        self.head["Outputs"].append(str(path))

    def write(self, fileobj):
        fileobj.write("%YAML 1.1\n".encode("ascii"))
        yaml.dump(self.head, stream=fileobj, encoding="ascii",
                  default_flow_style=False, explicit_start=True)


def sidecar_path(path):
    path = Path(path)
    return path.with_name(path.name + ".manifest.yaml")


def write_csv(path, header, rows, manifest):
    """Write rows to a CSV file and update the manifest sidecar.
    """
    path = Path(path)
    with path.open("wt", newline="") as f:
        f.write("# manifest: %s\n" % manifest.run_id)
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else v for v in row])
    manifest.add_output(path)
    with sidecar_path(path).open("wb") as f:
        manifest.write(f)


def read_csv(path):
    """Read a CSV file written by :func:`write_csv`.

    Returns the run id, the header and the rows as lists of strings.
    """
    with Path(path).open("rt", newline="") as f:
        first = f.readline()
        if not first.startswith("# manifest: "):
            raise HetNetError("%s: missing manifest line" % path)
        run_id = first[len("# manifest: "):].strip()
        reader = csv.reader(f)
        header = next(reader)
        return run_id, header, list(reader)
