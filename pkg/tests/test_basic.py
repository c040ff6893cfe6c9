"""
Basic tests for the quandle workbench configuration
"""

import json
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest import mock

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.utils.config import Config


class TestConfig(unittest.TestCase):
    """Test configuration module"""

    def setUp(self):
        self.config = Config()

    def test_config_initialization(self):
        """Test that config initializes properly"""
        self.assertIsNotNone(self.config)
        self.assertTrue(os.path.exists(self.config.reports_dir))

    def test_app_settings(self):
        settings = self.config.get_app_settings()
        self.assertIn('name', settings)
        self.assertEqual(settings['name'], 'Quandle Workbench')

    def test_default_caps(self):
        self.assertEqual(self.config.quandle_row_cap, 100_000)
        self.assertEqual(self.config.get_enumeration_settings()['group_coset_cap'], 1_000_000)
        self.assertGreaterEqual(self.config.jobs, 1)
        self.assertEqual(self.config.get_limits()['max_group_size'], 1_000_000)

    def test_environment_override(self):
        with mock.patch.dict(os.environ, {'QUANDLE_ROW_CAP': '123', 'LOG_LEVEL': 'debug'}):
            config = Config()
        self.assertEqual(config.quandle_row_cap, 123)
        self.assertEqual(config.log_level, 'DEBUG')

    def test_config_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'config.json'
            path.write_text(json.dumps({'search': {'lattice_budget': 7}}))
            config = Config(path)
        self.assertEqual(config.lattice_budget, 7)
        self.assertEqual(config.seed, 0)

    def test_override(self):
        self.config.override(seed=42, jobs=None)
        self.assertEqual(self.config.seed, 42)
        self.assertEqual(self.config.jobs, self.config.get_search_settings()['jobs'])
        with self.assertRaises(KeyError):
            self.config.override(no_such_key=1)


if __name__ == '__main__':
    unittest.main()
