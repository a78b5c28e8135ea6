import random

import pytest

from advisory_miner.data_model import AttributeSpec, Dataset

WEATHER_ROWS = [
    ("sunny", 85, 85, "false", "no"),
    ("sunny", 80, 90, "true", "no"),
    ("overcast", 83, 86, "false", "yes"),
    ("rainy", 70, 96, "false", "yes"),
    ("rainy", 68, 80, "false", "yes"),
    ("rainy", 65, 70, "true", "no"),
    ("overcast", 64, 65, "true", "yes"),
    ("sunny", 72, 95, "false", "no"),
    ("sunny", 69, 70, "false", "yes"),
    ("rainy", 75, 80, "false", "yes"),
    ("sunny", 75, 70, "true", "yes"),
    ("overcast", 72, 90, "true", "yes"),
    ("overcast", 81, 75, "false", "yes"),
    ("rainy", 71, 91, "true", "no"),
]

WEATHER_SCHEMA = (
    AttributeSpec("outlook", "nominal", ("sunny", "overcast", "rainy")),
    AttributeSpec("temperature", "numeric"),
    AttributeSpec("humidity", "numeric"),
    AttributeSpec("windy", "nominal", ("true", "false")),
    AttributeSpec("play", "nominal", ("yes", "no"), role="class"),
)


@pytest.fixture
def weather():
    return Dataset(WEATHER_SCHEMA, WEATHER_ROWS, 4)


def random_dataset(rng: random.Random, n=None, n_num=None, n_nom=None, n_classes=None,
                   consistent=False) -> Dataset:
    """Small random mixed-type dataset. With ``consistent`` the label is a
    function of the feature vector (no contradictions)."""
    n = n or rng.randint(2, 40)
    n_num = rng.randint(0, 3) if n_num is None else n_num
    n_nom = rng.randint(0 if n_num else 1, 3) if n_nom is None else n_nom
    n_classes = n_classes or rng.randint(2, 4)
    schema = [AttributeSpec(f"x{j}", "numeric") for j in range(n_num)]
    nom_values = [tuple(f"v{v}" for v in range(rng.randint(2, 4))) for _ in range(n_nom)]
    schema += [AttributeSpec(f"c{j}", "nominal", vals) for j, vals in enumerate(nom_values)]
    classes = tuple(f"k{c}" for c in range(n_classes))
    schema.append(AttributeSpec("cls", "nominal", classes, role="class"))
    rows, seen = [], {}
    for _ in range(n):
        feats = tuple([rng.choice([0.0, 0.5, 1.0, 2.0, 3.5, -1.0, rng.uniform(-5, 5)]) for _ in range(n_num)]
                      + [rng.choice(v) for v in nom_values])
        label = seen.setdefault(feats, rng.choice(classes)) if consistent else rng.choice(classes)
        rows.append(feats + (label,))
    return Dataset(schema, rows, len(schema) - 1)


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _ACCEPTANCE.append((props["criterion"], report.outcome))


_ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_ACCEPTANCE, key=lambda t: int(t[0].split(".")[0])):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
