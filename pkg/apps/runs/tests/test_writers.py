import json
import math
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from apps.common.exceptions import OutputError
from apps.simulation.functionals import RECORD_FIELDS, FunctionalRecord
from apps.runs.writers import (
    RunManifest, dumps, read_timeseries, timeseries_columns, write_json, write_manifest, write_timeseries,
)

HEADER = ','.join(RECORD_FIELDS)


def make_record(t, residuals=None):
    return FunctionalRecord(
        t=t, l2=1.0 / 3.0, weighted=math.sqrt(2.0) / 3.0, hminus1=math.pi / 10.0, h1=2.5,
        j_l2=0.1, j_weighted=0.2, phi=1e-300, jj=0.0, lyap=123456.78901234567,
        batchelor=0.942477796076938, balance_residuals=residuals or {},
    )


class WriterTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.root = Path(self.tmp.name)


class TimeseriesTests(WriterTestCase):

    def test_empty_trajectory_writes_header_only(self):
        path = write_timeseries([], self.root / 'empty.csv')
        self.assertEqual(path.read_bytes(), (HEADER + '\n').encode())

    def test_single_record_round_trip(self):
        rec = make_record(0.0)
        path = write_timeseries([rec], self.root / 'one.csv')
        columns = read_timeseries(path)
        self.assertEqual(list(columns), list(RECORD_FIELDS))
        for name in RECORD_FIELDS:
            self.assertEqual(columns[name][0], getattr(rec, name), name)

    def test_format_and_line_endings(self):
        path = write_timeseries([make_record(0.0), make_record(0.5)], self.root / 'two.csv')
        raw = path.read_bytes()
        self.assertNotIn(b'\r', raw)
        lines = raw.decode().splitlines()
        self.assertEqual(lines[0], HEADER)
        self.assertEqual(len(lines), 3)
        self.assertIn('0.33333333333333331', lines[1].split(','))

    def test_residual_columns_follow_the_schema(self):
        records = [make_record(0.0, {'gamma': 1e-9, 'energy': -2e-9})]
        self.assertEqual(timeseries_columns(records), list(RECORD_FIELDS) + ['energy', 'gamma'])
        columns = read_timeseries(write_timeseries(records, self.root / 'res.csv'))
        self.assertEqual(columns['energy'][0], -2e-9)
        self.assertEqual(columns['gamma'][0], 1e-9)

    def test_rewrite_is_byte_identical(self):
        records = [make_record(0.1 * n) for n in range(5)]
        first = write_timeseries(records, self.root / 'a.csv').read_bytes()
        second = write_timeseries(records, self.root / 'b.csv').read_bytes()
        self.assertEqual(first, second)

    def test_unordered_records_rejected(self):
        with self.assertRaises(OutputError):
            write_timeseries([make_record(1.0), make_record(0.5)], self.root / 'bad.csv')
        self.assertFalse((self.root / 'bad.csv').exists())

    def test_unwritable_target(self):
        blocker = self.root / 'file'
        blocker.write_text('x')
        with self.assertLogs('apps.runs.writers', level='ERROR'):
            with self.assertRaises(OutputError):
                write_timeseries([make_record(0.0)], blocker / 'out.csv')


class JsonTests(WriterTestCase):

    def test_dumps_is_sorted_with_trailing_newline(self):
        text = dumps({'b': 1, 'a': [1.5, None]})
        self.assertTrue(text.endswith('}\n'))
        self.assertLess(text.index('"a"'), text.index('"b"'))

    def test_write_json_leaves_no_temporary(self):
        path = write_json({'pass': True}, self.root / 'sub' / 'report.json')
        self.assertEqual(json.loads(path.read_text()), {'pass': True})
        self.assertEqual(sorted(p.name for p in path.parent.iterdir()), ['report.json'])

    def test_manifest(self):
        manifest = RunManifest(command='simulate', config={'k': 1}, tool_version='0.1.0', started_at='start')
        manifest.outputs.append('timeseries.csv')
        manifest.exit_status = 0
        data = json.loads(write_manifest(manifest, self.root / 'manifest.json').read_text())
        self.assertEqual(data['outputs'], ['timeseries.csv'])
        self.assertEqual(data['exit_status'], 0)
        self.assertIsNone(data['ledger'])
