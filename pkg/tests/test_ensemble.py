import pytest

from nbldpc.ensemble import (
    ConfigError,
    EnsembleSpec,
    design_rate,
    edge_perspective,
    format_polynomial,
    lambda_prime_zero,
    node_perspective,
    parse_config,
    parse_labels,
    parse_polynomial,
    rho_prime_one,
)


def test_parse_polynomial_forms():
    assert parse_polynomial("y") == {2: 1.0}
    assert parse_polynomial("y^2") == {3: 1.0}
    assert parse_polynomial("0.5y + 0.5y^4") == {2: 0.5, 5: 0.5}
    assert parse_polynomial("0.5 * y^1 + 0.5 y ^ 4") == {2: 0.5, 5: 0.5}


def test_decimal_coefficients_sum_exactly():
    # 0.1 + 0.2 + 0.7 is not 1 in binary floating point, but is in decimal
    assert parse_polynomial("0.1 y + 0.2 y^2 + 0.7 y^3") == {2: 0.1, 3: 0.2, 4: 0.7}


@pytest.mark.parametrize("bad", ["", "y^", "0.5 y + 0.4 y^2", "y + z", "1 + y", "abc", "-0.5y + 1.5y^2"])
def test_parse_polynomial_rejects(bad):
    with pytest.raises(ConfigError):
        parse_polynomial(bad)


def test_format_round_trip():
    p = {2: 0.5, 5: 0.5}
    assert parse_polynomial(format_polynomial(p)) == p


def test_design_rates():
    assert design_rate(EnsembleSpec({2: 1}, {3: 1}, 1)) == pytest.approx(1 / 3)
    assert design_rate(EnsembleSpec({3: 1}, {4: 1}, 1)) == pytest.approx(1 / 4)
    e = EnsembleSpec({2: 0.5, 5: 0.5}, {6: 1}, 1)
    # Shannon limit 1 - r of this pair is 0.4762 to four places
    assert 1 - design_rate(e) == pytest.approx(0.47619, abs=1e-5)


def test_derivatives():
    e = EnsembleSpec({2: 0.5, 5: 0.5}, {6: 1}, 2)
    assert lambda_prime_zero(e) == 0.5
    assert rho_prime_one(e) == 5
    assert lambda_prime_zero(EnsembleSpec({3: 1}, {4: 1}, 2)) == 0


def test_perspective_round_trip():
    lam = {2: 0.3, 3: 0.2, 7: 0.5}
    node = node_perspective(lam)
    assert sum(node.values()) == pytest.approx(1)
    back = edge_perspective(node)
    assert all(back[d] == pytest.approx(w) for d, w in lam.items())
    # regular ensembles look the same from both sides
    assert node_perspective({3: 1.0}) == {3: 1.0}


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lam={1: 1.0}, rho={3: 1.0}, m=2),
        dict(lam={2: 0.6}, rho={3: 1.0}, m=2),
        dict(lam={2: 1.0}, rho={3: 1.0}, m=0),
        dict(lam={2: 1.0}, rho={3: 1.0}, m=2, labels=0x5),
        dict(lam={2: 1.0}, rho={3: 1.0}, m=3, labels=0x7),
        dict(lam={2: 1.2, 3: -0.2}, rho={3: 1.0}, m=2),
    ],
)
def test_invalid_ensembles(kwargs):
    with pytest.raises(ConfigError):
        EnsembleSpec(**kwargs)


def test_spec_is_hashable_and_comparable():
    a = EnsembleSpec({2: 1.0}, {3: 1.0}, 2)
    b = EnsembleSpec({2: 1}, {3: 1}, 2)
    assert a == b and hash(a) == hash(b)
    assert a.with_m(3).m == 3
    assert a.with_m(2, labels=0x7).is_field


def test_labels():
    assert parse_labels("GL") == "GL"
    assert parse_labels("GF:0x7") == 7
    assert parse_labels("gf:11") == 11
    for bad in ("GF:", "GF:zz", "field"):
        with pytest.raises(ConfigError):
            parse_labels(bad)


def test_config_file():
    e = parse_config(
        """
        # regular (2,3)
        lambda = y
        rho = y^2   # check side
        m = 2
        labels = GF:0x7
        """
    )
    assert e == EnsembleSpec({2: 1.0}, {3: 1.0}, 2, 7)


@pytest.mark.parametrize(
    "text, where",
    [
        ("lambda = y\nrho = y^2\nm = 2\ncolour = red", "line 4"),
        ("lambda = y\nrho = y^^2\nm = 2", "line 2"),
        ("lambda = y\nrho = y^2\nm = two", "line 3"),
        ("lambda = y\nrho y^2\nm = 2", "line 2"),
        ("lambda = y\nm = 2", "rho"),
    ],
)
def test_config_diagnostics(text, where):
    with pytest.raises(ConfigError, match=where):
        parse_config(text)
