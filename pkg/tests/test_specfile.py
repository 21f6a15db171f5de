import pytest
from hypothesis import given
from hypothesis import strategies as st

from lfkit.coefficients import BUILTIN_CHARACTERS, DirichletL, Eigenform, Explicit, Lift, Zeta
from lfkit.fe_core import GammaFactorData, invariants
from lfkit.specfile import SpecError, SpecFile, builtin_spec, load_spec, parse_spec, serialize_spec, write_spec

BUILTINS = ["zeta", "eigenform", *sorted(BUILTIN_CHARACTERS)]

ZETA_TEXT = """\
# the Riemann zeta function
[gamma]
Q = 0.5641895835477563
lambda = 0.5
mu = 0.0 0.0
omega = 1.0 0.0
pole_order = 1

[coefficients]
generator = zeta
"""


def test_parse_zeta():
    spec = parse_spec(ZETA_TEXT)
    assert spec.gamma.lam == (0.5,) and spec.gamma.pole_order == 1
    assert isinstance(spec.source(), Zeta)
    assert invariants(spec.gamma).b_invariant == 1


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_roundtrip(name, tmp_path):
    spec = builtin_spec(name)
    text = serialize_spec(spec)
    again = parse_spec(text)
    assert again == spec
    assert serialize_spec(again) == text
    path = tmp_path / f"{name}.spec"
    write_spec(path, spec)
    assert load_spec(path) == spec


@pytest.mark.parametrize("name", ["zeta", "chi4", "chi3", "chi5_odd", "eigenform"])
def test_shipped_specs_match_builtins(name, spec_dir):
    assert load_spec(spec_dir / f"{name}.spec") == builtin_spec(name)


@given(
    st.floats(0.01, 100),
    st.lists(
        st.tuples(st.floats(0.01, 5), st.floats(-10, 10), st.floats(-10, 10)),
        min_size=1,
        max_size=4,
    ),
    st.floats(-3.2, 3.2),
    st.integers(0, 3),
)
def test_roundtrip_random_data(Q, factors, arg, m):
    import cmath

    g = GammaFactorData(Q, [f[0] for f in factors], [complex(f[1], f[2]) for f in factors], cmath.exp(1j * arg), m)
    spec = SpecFile(g, {"generator": "zeta"}, {"eps": "0.25"})
    text = serialize_spec(spec)
    assert parse_spec(text) == spec
    assert serialize_spec(parse_spec(text)) == text


def test_sources():
    assert isinstance(builtin_spec("eigenform").source(), Eigenform)
    src = builtin_spec("chi4").lifted(2).source()
    assert isinstance(src, Lift) and src.k == 2 and isinstance(src.base, DirichletL)


def test_lifted_spec_data_and_function():
    spec = builtin_spec("chi4").lifted(3)
    assert invariants(spec.gamma).degree == 3
    assert invariants(spec.gamma).conductor == pytest.approx(1728)
    assert spec.gamma.sharp_admissible
    assert spec.coefficients["lift"] == "3"
    f = spec.function()
    assert f.k == 3


def test_explicit_generator_relative_path(tmp_path):
    (tmp_path / "c.txt").write_text("1\n0.5\n")
    text = ZETA_TEXT.replace("generator = zeta", "generator = explicit\npath = c.txt\npolynomial = true")
    path = tmp_path / "e.spec"
    path.write_text(text)
    spec = load_spec(path)
    src = spec.source()
    assert isinstance(src, Explicit) and src.coeff(5) == 0
    with pytest.raises(SpecError):
        spec.function()


def test_overrides():
    spec = parse_spec(ZETA_TEXT + "\n[overrides]\neps = 0.3\ncutoff = 100\n")
    assert spec.override("eps", 0.5) == 0.3
    assert spec.override("c0", 3.0) == 3.0


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("Q = 1\n", ":1: 'key = value' outside any section"),
        ("[gamma\n", ":1: unterminated"),
        ("[bogus]\n", ":1: unknown section"),
        ("[gamma]\nQ 1\n", ":2: expected 'key = value'"),
        ("[gamma]\nQ = x\nlambda = 0.5\nmu = 0 0\n", ":2, field 'Q'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0 0\n", ":4, field 'mu'"),
        ("[gamma]\nQ = 1\nQ = 2\n", ":3, field 'Q': duplicate"),
        ("[gamma]\nQ = 1\nlambda = 0.5\n", "missing field 'mu'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\nfoo = 1\n", ":5, field 'foo'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\npole_order = one\n", ":5, field 'pole_order'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\nomega = 2 0\n", "|omega|"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\n[coefficients]\ngenerator = foo\n", ":6, field 'generator'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\n[coefficients]\ngenerator = dirichlet\ncharacter = chi9\n", ":7, field 'character'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\n[coefficients]\ngenerator = zeta\nlift = 0\n", ":7, field 'lift'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\n[coefficients]\ngenerator = explicit\n", "needs a 'path'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\n[coefficients]\ngenerator = zeta\n[overrides]\neps = big\n", ":8, field 'eps'"),
        ("[gamma]\nQ = 1\nlambda = 0.5\nmu = 0 0\n", "needs a 'generator'"),
    ],
)
def test_errors_name_line_and_field(text, fragment):
    with pytest.raises(SpecError) as exc:
        parse_spec(text, "x.spec")
    assert fragment in str(exc.value)
