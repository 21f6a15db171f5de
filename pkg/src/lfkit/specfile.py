"""Line-oriented L-function spec files.

::

    [gamma]
    Q = 0.5641895835477563
    lambda = 0.5
    mu = 0.0 0.0
    omega = 1.0 0.0
    pole_order = 1

    [coefficients]
    generator = zeta

    [overrides]
    eps = 0.5

Bracketed sections hold ``key = value`` lines; ``#`` starts a comment.
Complex numbers are written ``re im``; lists are comma-separated.
Generators: ``zeta``, ``dirichlet`` (with ``character``), ``eigenform``,
``explicit`` (with ``path``, optional ``multiplicative`` / ``polynomial``
flags); any of them may carry ``lift = k``, in which case ``[gamma]``
describes the lifted function.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from lfkit.coefficients import (
    BUILTIN_CHARACTERS,
    CoefficientSource,
    DirichletL,
    Eigenform,
    Lift,
    Zeta,
    builtin_data,
    load_explicit,
)
from lfkit.fe_core import GammaFactorData, lift_data

SECTIONS = ("gamma", "coefficients", "overrides")
GAMMA_KEYS = ("Q", "lambda", "mu", "omega", "pole_order", "pole_moved")
GENERATORS = ("zeta", "dirichlet", "eigenform", "explicit")


class SpecError(ValueError):
    """Malformed spec file; the message names the line and field."""


def _complex(text: str, where: str) -> complex:
    parts = text.split()
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise SpecError(f"{where}: expected a complex number 're im', got {text!r}")


def _float(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SpecError(f"{where}: expected a real number, got {text!r}") from None


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r} {z.imag!r}"


@dataclass(frozen=True)
class SpecFile:
    gamma: GammaFactorData
    coefficients: dict = field(default_factory=dict)
    overrides: dict = field(default_factory=dict)
    origin: str = field(default="", compare=False)

    # --- coefficient side -------------------------------------------------
    @property
    def generator(self) -> str:
        return self.coefficients.get("generator", "")

    @property
    def lift(self) -> int:
        return int(self.coefficients.get("lift", "1"))

    @property
    def builtin_name(self) -> str | None:
        g = self.generator
        if g in ("zeta", "eigenform"):
            return g
        if g == "dirichlet":
            return self.coefficients["character"]
        return None

    def source(self) -> CoefficientSource:
        g = self.generator
        if g == "zeta":
            base: CoefficientSource = Zeta()
        elif g == "eigenform":
            base = Eigenform()
        elif g == "dirichlet":
            base = DirichletL(BUILTIN_CHARACTERS[self.coefficients["character"]])
        else:
            path = self.coefficients["path"]
            if self.origin and not os.path.isabs(path):
                path = os.path.join(os.path.dirname(self.origin), path)
            flag = lambda key: self.coefficients.get(key, "false").lower() == "true"
            base = load_explicit(path, multiplicative=flag("multiplicative"), polynomial=flag("polynomial"))
        return base if self.lift == 1 else Lift(base, self.lift)

    def function(self, t_max: float | None = None):
        """The analytic evaluator; only built-in generators have one."""
        from lfkit.analytic.lfunctions import T_MAX, builtin_function

        name = self.builtin_name
        if name is None:
            raise SpecError(f"generator {self.generator!r} has no analytic continuation")
        return builtin_function(name, self.lift, T_MAX if t_max is None else t_max)

    def override(self, key: str, default: float) -> float:
        v = self.overrides.get(key)
        return default if v is None else float(v)

    def lifted(self, k: int) -> "SpecFile":
        coeffs = dict(self.coefficients)
        coeffs["lift"] = str(self.lift * int(k))
        return SpecFile(lift_data(self.gamma, k), coeffs, dict(self.overrides), self.origin)


def _check_coefficients(coeffs: dict, lines: dict) -> None:
    g = coeffs.get("generator")
    where = f"{lines.get('generator', '?')}, field 'generator'"
    if g is None:
        raise SpecError("[coefficients] section needs a 'generator' field")
    if g not in GENERATORS:
        raise SpecError(f"{where}: unknown generator {g!r}; expected one of {GENERATORS}")
    if g == "dirichlet":
        ch = coeffs.get("character")
        if ch not in BUILTIN_CHARACTERS:
            raise SpecError(
                f"{lines.get('character', lines['generator'])}, field 'character': "
                f"expected one of {sorted(BUILTIN_CHARACTERS)}, got {ch!r}"
            )
    if g == "explicit" and "path" not in coeffs:
        raise SpecError(f"{where}: generator 'explicit' needs a 'path' field")
    if "lift" in coeffs:
        try:
            k = int(coeffs["lift"])
        except ValueError:
            k = 0
        if k < 1:
            raise SpecError(f"{lines['lift']}, field 'lift': expected a positive integer, got {coeffs['lift']!r}")


def parse_spec(text: str, origin: str = "<string>") -> SpecFile:
    section = None
    data: dict[str, dict[str, str]] = {s: {} for s in SECTIONS}
    where_line: dict[str, dict[str, int]] = {s: {} for s in SECTIONS}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SpecError(f"{origin}:{lineno}: unterminated section header {raw.strip()!r}")
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise SpecError(f"{origin}:{lineno}: unknown section [{section}]")
            continue
        if section is None:
            raise SpecError(f"{origin}:{lineno}: 'key = value' outside any section")
        if "=" not in line:
            raise SpecError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (x.strip() for x in line.split("=", 1))
        if not key:
            raise SpecError(f"{origin}:{lineno}: empty field name")
        if key in data[section]:
            raise SpecError(f"{origin}:{lineno}, field {key!r}: duplicate in [{section}]")
        if section == "gamma" and key not in GAMMA_KEYS:
            raise SpecError(f"{origin}:{lineno}, field {key!r}: unknown [gamma] field; expected {GAMMA_KEYS}")
        data[section][key] = value
        where_line[section][key] = lineno

    g, gl = data["gamma"], where_line["gamma"]

    def at(key: str) -> str:
        return f"{origin}:{gl.get(key, '?')}, field {key!r}"

    for key in ("Q", "lambda", "mu"):
        if key not in g:
            raise SpecError(f"{origin}: [gamma] is missing field {key!r}")
    Q = _float(g["Q"], at("Q"))
    lam = tuple(_float(x.strip(), at("lambda")) for x in g["lambda"].split(","))
    mu = tuple(_complex(x.strip(), at("mu")) for x in g["mu"].split(","))
    omega = _complex(g.get("omega", "1 0"), at("omega"))
    try:
        pole_order = int(g.get("pole_order", "0"))
    except ValueError:
        raise SpecError(f"{at('pole_order')}: expected an integer, got {g['pole_order']!r}") from None
    moved_text = g.get("pole_moved", "false").lower()
    if moved_text not in ("true", "false"):
        raise SpecError(f"{at('pole_moved')}: expected true or false, got {g['pole_moved']!r}")
    try:
        gamma = GammaFactorData(Q, lam, mu, omega, pole_order, moved_text == "true")
    except ValueError as exc:
        raise SpecError(f"{origin}: [gamma]: {exc}") from None

    _check_coefficients(data["coefficients"], {k: f"{origin}:{v}" for k, v in where_line["coefficients"].items()})
    for key, value in data["overrides"].items():
        _float(value, f"{origin}:{where_line['overrides'][key]}, field {key!r}")
    return SpecFile(gamma, data["coefficients"], data["overrides"], origin)


def load_spec(path) -> SpecFile:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), str(path))


def serialize_spec(spec: SpecFile) -> str:
    g = spec.gamma
    out = ["[gamma]", f"Q = {g.Q!r}"]
    out.append("lambda = " + ", ".join(repr(x) for x in g.lam))
    out.append("mu = " + ", ".join(_fmt_complex(m) for m in g.mu))
    out.append(f"omega = {_fmt_complex(g.omega)}")
    out.append(f"pole_order = {g.pole_order}")
    if g.pole_moved:
        out.append("pole_moved = true")
    out += ["", "[coefficients]"]
    out += [f"{k} = {v}" for k, v in spec.coefficients.items()]
    if spec.overrides:
        out += ["", "[overrides]"]
        out += [f"{k} = {v}" for k, v in spec.overrides.items()]
    return "\n".join(out) + "\n"


def write_spec(path, spec: SpecFile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_spec(spec))


def builtin_spec(name: str) -> SpecFile:
    """Spec of a built-in: ``zeta``, ``eigenform`` or a character name such as ``chi4``."""
    if name in ("zeta", "eigenform"):
        coeffs = {"generator": name}
    elif name in BUILTIN_CHARACTERS:
        coeffs = {"generator": "dirichlet", "character": name}
    else:
        raise KeyError(f"unknown built-in {name!r}")
    return SpecFile(builtin_data(name), coeffs, {})


__all__ = [
    "SpecError",
    "SpecFile",
    "builtin_spec",
    "load_spec",
    "parse_spec",
    "serialize_spec",
    "write_spec",
]
