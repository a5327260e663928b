from fractions import Fraction
from pathlib import Path

from cotangent_kit.ci_analysis import Analysis
from cotangent_kit.ideal_file import parse_ideal_file

CORPUS = Path(__file__).resolve().parents[1] / "corpus"
SMALL = ["x", "ci22", "m2", "aci"]

# minors23 lives in six variables; its S -> K resolvent is run at a lower degree bound.
MINORS23_BOUNDS = dict(d=5, D=7, betti_k_bound=4)

_cache = {}


def corpus_file(name):
    return parse_ideal_file(CORPUS / f"{name}.ideal")


def analysis(name, **kw):
    """Shared, cached Analysis for a corpus ideal."""
    if name == "minors23" and not kw:
        kw = MINORS23_BOUNDS
    key = (name, tuple(sorted(kw.items())))
    if key not in _cache:
        f = corpus_file(name)
        _cache[key] = Analysis(f.ideal, flags=f.flags, **kw)
    return _cache[key]


def random_element(A, i, t, rng, density=0.5, height=5):
    """Random element of bidegree (i, t) in the DG-algebra A with small integer coefficients."""
    basis = A.basis(i, t)
    vec = {}
    for k in range(len(basis)):
        if rng.random() < density:
            c = rng.randint(-height, height)
            if c:
                vec[k] = Fraction(c)
    return A.vector_to_element(vec, i, t)


def random_bidegree(A, rng, i_max=3, t_max=6):
    """Random (i, t) with i <= i_max, t <= t_max and a nonzero basis."""
    for _ in range(200):
        i, t = rng.randint(0, i_max), rng.randint(0, t_max)
        if A.basis(i, t):
            return i, t
    return 0, 0


def check_dg_laws(X, rng, count=200):
    """d^2 = 0 and d(ab) = d(a) b + (-1)^|a| a d(b) on ``count`` random low-bidegree elements of X."""
    for _ in range(count):
        i, t = random_bidegree(X, rng)
        a = random_element(X, i, t, rng)
        j, s = random_bidegree(X, rng, i_max=2, t_max=4)
        b = random_element(X, j, s, rng)
        assert a.differential().differential().is_zero(), f"d^2 != 0 at ({i}, {t})"
        lhs = (a * b).differential()
        rhs = a.differential() * b + (a * b.differential()).scale((-1) ** a.hom_degree)
        assert lhs == rhs, f"Leibniz fails for bidegrees ({i}, {t}) x ({j}, {s})"



ACCEPTANCE = {}


def record(criterion, ok, detail):
    """Log one acceptance line; printed together at the end of the session."""
    ACCEPTANCE[criterion] = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE[criterion])
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
