"""Window and symbol generators, scenario files and named presets."""
import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Operator
from .gabor import LatticeSpec
from .quantize import localization_build


class ScenarioError(ValueError):
    """Malformed scenario, unknown generator or preset, or bad lattice."""


ANALYSES = ("spectrum", "decay", "norms", "weighted", "weyl")


# -- windows -----------------------------------------------------------------

def gaussian_window(L, s=None, center=None):
    """``exp(-pi (t - center)^2 / s^2)``; defaults ``s = sqrt(L)``, ``center = L/2``.

    At critical density (alpha beta = L) a Gaussian symmetric about an integer
    point has a Zak-transform zero and is not a frame; shift the centre by 1/2.
    """
    s = np.sqrt(L) if s is None else float(s)
    center = L / 2 if center is None else float(center)
    if s <= 0:
        raise ScenarioError("gaussian window width must be positive")
    t = np.arange(L)
    return np.exp(-np.pi * (t - center) ** 2 / s**2).astype(complex)


def hann_window(L):
    t = np.arange(L)
    return (0.5 - 0.5 * np.cos(2 * np.pi * t / L)).astype(complex)


def delta_window(L, k=0):
    g = np.zeros(L, dtype=complex)
    g[int(k) % L] = 1.0
    return g


def read_complex_lines(path, count):
    """Read ``count`` complex values, one ``re im`` pair (or bare real) per line."""
    vals = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        parts = line.split()
        try:
            if len(parts) == 1:
                vals.append(complex(parts[0].replace("i", "j")))
            elif len(parts) == 2:
                vals.append(complex(float(parts[0]), float(parts[1])))
            else:
                raise ValueError(line)
        except ValueError as exc:
            raise ScenarioError(f"{path}:{lineno}: cannot parse complex value {line!r}") from exc
    if len(vals) != count:
        raise ScenarioError(f"{path}: expected {count} values, found {len(vals)}")
    return np.array(vals, dtype=complex)


WINDOW_KINDS = ("gaussian", "hann", "delta", "file")


def make_window(kind, L, params=None, normalize=True):
    params = dict(params or {})
    try:
        if kind == "gaussian":
            g = gaussian_window(L, params.pop("s", None), params.pop("center", None))
        elif kind == "hann":
            g = hann_window(L)
        elif kind == "delta":
            g = delta_window(L, params.pop("k", 0))
        elif kind == "file":
            g = read_complex_lines(params.pop("path"), L)
        else:
            raise ScenarioError(f"unknown window generator {kind!r}; choose from {WINDOW_KINDS}")
    except KeyError as exc:
        raise ScenarioError(f"window {kind!r} is missing parameter {exc}") from exc
    except TypeError as exc:
        raise ScenarioError(f"bad parameters for window {kind!r}: {exc}") from exc
    if params and kind != "file":
        raise ScenarioError(f"unexpected parameters for window {kind!r}: {sorted(params)}")
    if not np.any(g):
        raise ScenarioError("window is identically zero")
    if normalize:
        g = g / np.linalg.norm(g)
    return g


# -- symbols -----------------------------------------------------------------

def _offsets(L, center):
    """Signed cyclic offsets of every grid point from ``center``."""
    c0, c1 = (L / 2, L / 2) if center is None else center
    k = np.arange(L)
    wrap = lambda x: (x + L / 2) % L - L / 2
    return np.meshgrid(wrap(k - float(c0)), wrap(k - float(c1)), indexing="ij")


def gaussian_symbol(L, center=None, width=None):
    """``exp(-pi |z - center|^2 / width^2)`` with cyclic distance; default centre L/2, width L/6."""
    width = L / 6 if width is None else float(width)
    if width <= 0:
        raise ScenarioError("symbol width must be positive")
    DK, DN = _offsets(L, center)
    return np.exp(-np.pi * (DK**2 + DN**2) / width**2).astype(complex)


def disk_symbol(L, center=None, radius=None):
    radius = L / 5 if radius is None else float(radius)
    DK, DN = _offsets(L, center)
    return (DK**2 + DN**2 <= radius**2).astype(complex)


def power_decay_symbol(L, rho=4.0, center=(0, 0)):
    """``|z~|^{-rho}`` in centered coordinates, capped at 1 at the origin."""
    DK, DN = _offsets(L, center)
    r2 = DK**2 + DN**2
    out = np.ones((L, L))
    nz = r2 > 0
    out[nz] = r2[nz] ** (-float(rho) / 2)
    return out.astype(complex)


def delta_symbol(L, k=0, n=0):
    a = np.zeros((L, L), dtype=complex)
    a[int(k) % L, int(n) % L] = 1.0
    return a


def constant_symbol(L, value=1.0):
    return np.full((L, L), complex(value))


def random_complex_symbol(L, seed=0, conj_symmetric=False):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L))
    if conj_symmetric:
        idx = (-np.arange(L)) % L
        a = 0.5 * (a + np.conj(a[np.ix_(idx, idx)]))
    return a


SYMBOL_KINDS = ("gaussian2d", "disk-indicator", "power-decay", "random-complex", "delta", "constant", "file")


def make_symbol(kind, L, params=None, seed=0):
    params = dict(params or {})
    try:
        if kind == "gaussian2d":
            return gaussian_symbol(L, params.get("center"), params.get("width"))
        if kind == "disk-indicator":
            return disk_symbol(L, params.get("center"), params.get("radius"))
        if kind == "power-decay":
            return power_decay_symbol(L, params.get("rho", 4.0), params.get("center", (0, 0)))
        if kind == "random-complex":
            return random_complex_symbol(L, params.get("seed", seed), params.get("conj_symmetric", False))
        if kind == "delta":
            return delta_symbol(L, params.get("k", 0), params.get("n", 0))
        if kind == "constant":
            return constant_symbol(L, params.get("value", 1.0))
        if kind == "file":
            return read_complex_lines(params["path"], L * L).reshape(L, L)
    except KeyError as exc:
        raise ScenarioError(f"symbol {kind!r} is missing parameter {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"bad parameters for symbol {kind!r}: {exc}") from exc
    raise ScenarioError(f"unknown symbol generator {kind!r}; choose from {SYMBOL_KINDS}")


# -- scenarios ---------------------------------------------------------------

@dataclass
class ScenarioSpec:
    name: str
    L: int
    symbol: dict
    windows: dict
    lattice: LatticeSpec
    analysis: list = field(default_factory=lambda: ["spectrum", "decay", "norms"])
    seed: int = 0
    floor: float = 1e-8
    top_k: int = None
    description: str = ""

    def to_dict(self):
        d = {
            "name": self.name,
            "L": self.L,
            "symbol": copy.deepcopy(self.symbol),
            "windows": copy.deepcopy(self.windows),
            "lattice": {"alpha": self.lattice.alpha, "beta": self.lattice.beta},
            "analysis": list(self.analysis),
            "seed": self.seed,
            "floor": self.floor,
        }
        if self.top_k is not None:
            d["top_k"] = self.top_k
        return d


def _require(d, key, where="scenario"):
    if key not in d:
        raise ScenarioError(f"{where} is missing required key {key!r}")
    return d[key]


def scenario_from_dict(d, seed=None):
    """Validate a scenario mapping (the JSON file schema) and build a ScenarioSpec."""
    if not isinstance(d, dict):
        raise ScenarioError("scenario must be a JSON object")
    name = str(_require(d, "name"))
    L = _require(d, "L")
    if not isinstance(L, int) or isinstance(L, bool) or L < 2:
        raise ScenarioError(f"L must be an integer >= 2, got {L!r}")
    symbol = _require(d, "symbol")
    windows = _require(d, "windows")
    lat = _require(d, "lattice")
    for obj, where in ((symbol, "symbol"), (windows, "windows"), (lat, "lattice")):
        if not isinstance(obj, dict):
            raise ScenarioError(f"{where} must be an object")
    _require(symbol, "kind", "symbol")
    _require(windows, "kind", "windows")
    if symbol["kind"] not in SYMBOL_KINDS:
        raise ScenarioError(f"unknown symbol generator {symbol['kind']!r}")
    if windows["kind"] not in WINDOW_KINDS:
        raise ScenarioError(f"unknown window generator {windows['kind']!r}")
    second = windows.get("phi2")
    if second is not None and (not isinstance(second, dict) or second.get("kind") not in WINDOW_KINDS):
        raise ScenarioError("windows.phi2 must be an object with a known 'kind'")
    try:
        alpha = int(_require(lat, "alpha", "lattice"))
        beta = int(_require(lat, "beta", "lattice"))
        lattice = LatticeSpec(alpha, beta, L)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid lattice: {exc}") from exc
    analysis = d.get("analysis", ["spectrum", "decay", "norms"])
    if not isinstance(analysis, list) or any(a not in ANALYSES for a in analysis):
        raise ScenarioError(f"analysis must be a list drawn from {ANALYSES}, got {analysis!r}")
    if "weyl" in analysis and L % 2 == 0:
        raise ScenarioError(f"Weyl-path analysis needs odd L, got L={L}")
    seed_val = d.get("seed", 0) if seed is None else seed
    if not isinstance(seed_val, int):
        raise ScenarioError("seed must be an integer")
    floor = float(d.get("floor", 1e-8))
    if not floor > 0:
        raise ScenarioError("floor must be positive")
    top_k = d.get("top_k")
    if top_k is not None and (not isinstance(top_k, int) or top_k < 1):
        raise ScenarioError("top_k must be a positive integer")
    return ScenarioSpec(
        name=name,
        L=L,
        symbol=copy.deepcopy(symbol),
        windows=copy.deepcopy(windows),
        lattice=lattice,
        analysis=list(analysis),
        seed=seed_val,
        floor=floor,
        top_k=top_k,
        description=str(d.get("description", "")),
    )


def load_scenario(ref, seed=None):
    """Load a scenario from a JSON file path or a preset name."""
    path = Path(ref)
    if path.is_file():
        try:
            d = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: invalid JSON: {exc}") from exc
        return scenario_from_dict(d, seed)
    return get_preset(str(ref), seed)


@dataclass
class BuiltScenario:
    spec: ScenarioSpec
    symbol: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    operator: Operator

    @property
    def lattice(self):
        return self.spec.lattice


def build_scenario(spec):
    """Materialize symbol, windows and localization operator for ``spec``."""
    if isinstance(spec, dict):
        spec = scenario_from_dict(spec)
    L = spec.L
    w = spec.windows
    normalize = bool(w.get("normalize", True))
    phi1 = make_window(w["kind"], L, w.get("params"), normalize)
    second = w.get("phi2")
    if second is None:
        phi2 = phi1.copy()
    else:
        phi2 = make_window(second["kind"], L, second.get("params"), second.get("normalize", normalize))
    a = make_symbol(spec.symbol["kind"], L, spec.symbol.get("params"), spec.seed)
    return BuiltScenario(spec, a, phi1, phi2, localization_build(a, phi1, phi2))


# -- presets -----------------------------------------------------------------

def _gauss_windows(L, **extra):
    return {"kind": "gaussian", "params": {"s": float(np.sqrt(L))}, "normalize": True, **extra}


_PRESETS = {
    "antiwick-gauss-63": {
        "description": "Anti-Wick operator, Gaussian symbol (width L/6) and equal Gaussian windows",
        "L": 63,
        "symbol": {"kind": "gaussian2d", "params": {"center": [0, 0], "width": 10.5}},
        "windows": _gauss_windows(63),
        "lattice": {"alpha": 3, "beta": 3},
        "analysis": ["spectrum", "decay", "norms", "weighted", "weyl"],
    },
    "antiwick-gauss-33": {
        "description": "Anti-Wick operator with Gaussian symbol at a smaller size",
        "L": 33,
        "symbol": {"kind": "gaussian2d", "params": {"center": [0, 0], "width": 5.5}},
        "windows": _gauss_windows(33),
        "lattice": {"alpha": 3, "beta": 3},
        "analysis": ["spectrum", "decay", "norms", "weighted", "weyl"],
    },
    "power-decay-63": {
        "description": "Symbol |z|^-4 in centered coordinates (weighted Lebesgue class stand-in)",
        "L": 63,
        "symbol": {"kind": "power-decay", "params": {"rho": 4.0}},
        "windows": _gauss_windows(63),
        "lattice": {"alpha": 3, "beta": 3},
        "analysis": ["spectrum", "decay", "norms", "weighted"],
    },
    "disk-33": {
        "description": "Indicator of a disk of radius L/5 (Daubechies-type localization)",
        "L": 33,
        "symbol": {"kind": "disk-indicator", "params": {"center": [0, 0], "radius": 6.6}},
        "windows": _gauss_windows(33),
        "lattice": {"alpha": 3, "beta": 3},
        "analysis": ["spectrum", "decay", "norms"],
    },
    "delta-33": {
        "description": "Point-mass symbol: rank-one localization operator",
        "L": 33,
        "symbol": {"kind": "delta", "params": {"k": 0, "n": 0}},
        "windows": _gauss_windows(33),
        "lattice": {"alpha": 3, "beta": 3},
        "analysis": ["spectrum", "decay", "norms"],
    },
    "identity-33": {
        "description": "Constant symbol 1: the operator is the identity",
        "L": 33,
        "symbol": {"kind": "constant", "params": {"value": 1.0}},
        "windows": _gauss_windows(33),
        "lattice": {"alpha": 3, "beta": 3},
        "analysis": ["spectrum", "decay"],
    },
    "complex-asym-33": {
        "description": "Random complex symbol with distinct windows (non-Hermitian path)",
        "L": 33,
        "symbol": {"kind": "random-complex", "params": {"seed": 7}},
        "windows": _gauss_windows(33, phi2={"kind": "gaussian", "params": {"s": 4.0}}),
        "lattice": {"alpha": 3, "beta": 3},
        "analysis": ["spectrum", "decay", "norms"],
    },
    "delta-window-16": {
        "description": "Gaussian symbol analysed with delta windows on the full grid",
        "L": 16,
        "symbol": {"kind": "gaussian2d", "params": {"width": 4.0}},
        "windows": {"kind": "delta", "normalize": True},
        "lattice": {"alpha": 1, "beta": 1},
        "analysis": ["spectrum"],
    },
}


def list_presets():
    """``{name: description}`` for every registered preset."""
    return {name: d["description"] for name, d in _PRESETS.items()}


def get_preset(name, seed=None):
    try:
        d = _PRESETS[name]
    except KeyError:
        raise ScenarioError(f"unknown preset or unreadable scenario file {name!r}") from None
    return scenario_from_dict({"name": name, **copy.deepcopy(d)}, seed)
