from fractions import Fraction
import json

from toolforge.cli.config import RunConfig
from toolforge.cli.report import RunWriter, file_digest, format_rate, format_table, rate_record


def test_format_table_aligns_columns():
    assert format_table(['name', 'n'], [['a', 1], ['bbb', 10]]) == 'name   n\n----  --\na      1\nbbb   10'


def test_rates():
    assert format_rate(Fraction(5, 8)) == '0.625'
    assert rate_record(Fraction(5, 8)) == {'value': 0.625, 'exact': '5/8'}
    assert rate_record(Fraction(2, 4))['exact'] == '1/2'


def test_manifest_records_outputs(tmp_path):
    writer = RunWriter(tmp_path / 'out')
    records = writer.jsonl('records.jsonl', [{'a': 1}, {'a': 2}])
    document = writer.json('nested/doc.json', {'k': 'v'})

    manifest = json.loads(writer.manifest('gen', RunConfig(), extras={'n': 2}).read_text(encoding='utf-8'))
    assert manifest['command'] == 'gen'
    assert manifest['outputs'] == {'nested/doc.json': file_digest(document), 'records.jsonl': file_digest(records)}
    assert manifest['extras'] == {'n': 2}
    assert manifest['seeds'] == RunConfig().seeds
    assert 'credential' not in manifest['config']
