"""Map-definition files: JSON documents describing a PM map and its gluing.

Schema (every number is a string holding an exact rational such as "3/2",
or a JSON integer)::

    {
      "name": "tent",
      "description": "optional free text",
      "intervals": [["0", "1"]],
      "critical": ["0", "1/2", "1"],
      "branches": [
        {"left": "0", "right": "1/2", "slope": "2", "intercept": "0"},
        {"left": "1/2", "right": "1", "slope": "-2", "intercept": "2"}
      ],
      "gluing": [],
      "expected": {"h_top": 0.6931, "h_hom": 0.0, "fix_neg": [1, 2, 4]}
    }

``gluing`` lists classes of boundary points identified in the graph.
``expected`` is optional and free-form; the regression tests read it.
"""
from dataclasses import dataclass, field
import json
from pathlib import Path

from .errors import (BoundaryNotCritical, InputError, OverlappingIntervals,
                     ParseError, PointOutsideOmega, SemanticError)
from .graph import Gluing, validate_induced
from .pm_domain import Branch, Omega, PMMap, rational

SCHEMA_KEYS = ("name", "description", "intervals", "critical", "branches",
               "gluing", "expected")
BRANCH_KEYS = ("left", "right", "slope", "intercept")


@dataclass(frozen=True)
class MapDefinition:
    name: str
    intervals: tuple
    critical: tuple
    branches: tuple          # (left, right, slope, intercept)
    gluing: tuple = ()
    description: str = ""
    expected: dict = field(default_factory=dict, compare=False, hash=False)

    def pm_map(self):
        return build_pm_map(self)

    def induced_map(self):
        """The induced graph map; raises the validation error unwrapped."""
        return validate_induced(self.pm_map(), Gluing(self.gluing))

    def to_json(self):
        def s(x):
            return str(x)
        doc = {
            "name": self.name,
            "intervals": [[s(a), s(b)] for a, b in self.intervals],
            "critical": [s(c) for c in self.critical],
            "branches": [{"left": s(l), "right": s(r), "slope": s(k), "intercept": s(t)}
                         for l, r, k, t in self.branches],
            "gluing": [[s(x) for x in cls] for cls in self.gluing],
        }
        if self.description:
            doc["description"] = self.description
        if self.expected:
            doc["expected"] = self.expected
        return doc


_FIELD_OF = {OverlappingIntervals: "intervals", BoundaryNotCritical: "critical",
             PointOutsideOmega: "critical"}


def build_pm_map(defn):
    try:
        branches = [Branch(l, r, k, t) for l, r, k, t in defn.branches]
        return PMMap(Omega(defn.intervals), defn.critical, branches)
    except InputError as exc:
        raise SemanticError(str(exc), field=_FIELD_OF.get(type(exc), "branches"),
                            cause=exc) from exc


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _locate(text, key, token):
    """Best-effort line/column of ``token`` after the first occurrence of ``key``."""
    if text is None:
        return None, None
    start = text.find(json.dumps(key))
    start = 0 if start < 0 else start
    at = text.find(json.dumps(token), start)
    if at < 0:
        at = start
    return _position(text, at)


class _Reader:
    def __init__(self, text, path):
        self.text = text
        self.path = path

    def fail(self, message, key, token=None):
        line, col = _locate(self.text, key, token if token is not None else key)
        raise ParseError(message, line, col, self.path)

    def rational(self, value, key):
        if isinstance(value, (str, int)) and not isinstance(value, bool):
            try:
                return rational(value)
            except (ValueError, TypeError) as exc:
                self.fail(f"{key}: {exc}" if str(exc) else f"{key}: bad rational {value!r}",
                          key, value)
        self.fail(f"{key}: expected a rational string such as \"3/2\", got {value!r}",
                  key, value)

    def list_of(self, doc, key, required=True):
        if key not in doc:
            if required:
                self.fail(f"missing field {key!r}", "{")
            return []
        value = doc[key]
        if not isinstance(value, list):
            self.fail(f"{key}: expected a list", key)
        return value


def parse_map_text(text, path=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, path) from None
    return parse_map_document(doc, path=path, text=text)


def parse_map_document(doc, path=None, text=None):
    rd = _Reader(text, path)
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object", 1, 1, path)
    unknown = sorted(set(doc) - set(SCHEMA_KEYS))
    if unknown:
        rd.fail(f"unknown field {unknown[0]!r}", unknown[0])
    name = doc.get("name", Path(path).stem if path else "unnamed")
    if not isinstance(name, str):
        rd.fail("name: expected a string", "name")
    intervals = []
    for iv in rd.list_of(doc, "intervals"):
        if not (isinstance(iv, list) and len(iv) == 2):
            rd.fail("intervals: each interval is a pair [a, b]", "intervals")
        intervals.append(tuple(rd.rational(x, "intervals") for x in iv))
    critical = tuple(rd.rational(x, "critical") for x in rd.list_of(doc, "critical"))
    branches = []
    for br in rd.list_of(doc, "branches"):
        if not isinstance(br, dict) or set(br) != set(BRANCH_KEYS):
            rd.fail("branches: each branch needs exactly left, right, slope, intercept",
                    "branches")
        branches.append(tuple(rd.rational(br[k], k) for k in BRANCH_KEYS))
    gluing = []
    for cls in rd.list_of(doc, "gluing", required=False):
        if not isinstance(cls, list):
            rd.fail("gluing: each class is a list of boundary points", "gluing")
        gluing.append(tuple(rd.rational(x, "gluing") for x in cls))
    expected = doc.get("expected", {})
    if not isinstance(expected, dict):
        rd.fail("expected: must be an object", "expected")
    defn = MapDefinition(name, tuple(intervals), critical, tuple(branches),
                         tuple(gluing), doc.get("description", ""), expected)
    build_pm_map(defn)      # semantic validation of the lift
    return defn


def parse_map_file(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path=str(path)) from None
    return parse_map_text(text, str(path))


def dump_map(defn, path=None):
    text = json.dumps(defn.to_json(), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def corpus_dir():
    return Path(__file__).parent / "corpus"


def bundled_maps():
    """Name -> MapDefinition for every bundled example, sorted by name."""
    return {p.stem: parse_map_file(p) for p in sorted(corpus_dir().glob("*.json"))}


def load_map(name_or_path):
    """A path to a map file, or the name of a bundled example."""
    p = Path(name_or_path)
    if p.suffix == ".json" or p.exists():
        return parse_map_file(p)
    bundled = corpus_dir() / f"{name_or_path}.json"
    if bundled.exists():
        return parse_map_file(bundled)
    raise ParseError(f"no map file or bundled example named {name_or_path!r}")
