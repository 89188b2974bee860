import json

import pytest

from src.output import RecordsHandler, TextHandler, get_handler

REPORT = {
    'command': "verify-waldhausen",
    'status': "fail",
    'exit_code': 1,
    'summary': {'structure': "broken-c1", 'exhaustive': True, 'budget': None},
    'tables': {
        'axioms': [
            {'axiom': "C1", 'status': "fail", 'witness': {'morphism': 1}},
            {'axiom': "W1", 'status': "pass", 'witness': None},
        ],
        'empty': [],
    },
    'records': [
        {'axiom': "C1", 'pairs': {(0, 1): frozenset({2, 1})}},
    ],
}


def test_get_handler():
    assert isinstance(get_handler("text"), TextHandler)
    assert isinstance(get_handler("records"), RecordsHandler)
    with pytest.raises(ValueError, match="Unknown output format"):
        get_handler("xlsx")


def test_text_report():
    text = TextHandler().to_string(REPORT)
    lines = text.splitlines()
    assert lines[:3] == ["command: verify-waldhausen", "status: fail ❌", "exit_code: 1"]
    assert "exhaustive: yes" in lines
    assert "budget: -" in lines
    assert "== axioms ==" in lines
    assert "(empty)" in lines
    assert '{"morphism": 1}' in text


def test_text_single_result():
    assert TextHandler().format_single_result({'a': False, 'b': [1, 2]}) == "a=no b=[1, 2]"


def test_records_report():
    lines = RecordsHandler().to_string(REPORT).splitlines()
    head = json.loads(lines[0])
    assert head == {'command': "verify-waldhausen", 'status': "fail", 'exit_code': 1,
                    'structure': "broken-c1", 'exhaustive': True, 'budget': None}
    assert json.loads(lines[1]) == {'axiom': "C1", 'pairs': {"(0, 1)": [1, 2]}}
    assert len(lines) == 2


def test_save_creates_directories(tmp_path):
    target = tmp_path / "nested" / "report.jsonl"
    assert RecordsHandler().save(REPORT, str(target)) == str(target)
    assert target.read_text(encoding="utf-8") == RecordsHandler().to_string(REPORT)
