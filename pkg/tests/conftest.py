import json
import pathlib

import pytest

from ptltl.parser import parse_history, parse_policy

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = pathlib.Path(__file__).resolve().parent / "golden"


def load_policy(name):
    return parse_policy((CORPUS / name).read_text())


def load_history(name, policy=None, ground=False):
    sig = policy.predicates if policy is not None else None
    return parse_history((CORPUS / name).read_text(), sig, ground)


def manifest():
    return json.loads((CORPUS / "manifest.json").read_text())


@pytest.fixture
def corpus_dir():
    return CORPUS


@pytest.fixture
def win_pay():
    """The two-session bidding history with one unknown amount, and both policies."""
    psi = load_policy("win_pay.ptltl")
    phi = load_policy("win_pay_positive.ptltl")
    h = load_history("win_pay_partial.hist", psi)
    return h, psi.formula, phi.formula
