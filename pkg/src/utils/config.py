"""
Configuration module for the quandle workbench
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

# Environment variable -> (config.json section, key)
ENV_OVERRIDES = {
    'QUANDLE_MAX_SIZE': ('limits', 'max_quandle_size'),
    'QUANDLE_MAX_GROUP': ('limits', 'max_group_size'),
    'QUANDLE_ROW_CAP': ('enumeration', 'quandle_row_cap'),
    'QUANDLE_COSET_CAP': ('enumeration', 'group_coset_cap'),
    'QUANDLE_PROGRESS': ('enumeration', 'progress_interval'),
    'QUANDLE_LATTICE_BUDGET': ('search', 'lattice_budget'),
    'QUANDLE_SEED': ('search', 'seed'),
    'QUANDLE_JOBS': ('search', 'jobs'),
}

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'app': {'name': 'Quandle Workbench', 'version': '1.0.0'},
    'limits': {'max_quandle_size': 100_000, 'max_group_size': 1_000_000},
    'enumeration': {
        'quandle_row_cap': 100_000,
        'group_coset_cap': 1_000_000,
        'progress_interval': 10_000,
    },
    'search': {'lattice_budget': 100_000, 'seed': 0, 'jobs': 1},
    'logging': {'level': 'WARNING'},
}


class Config:
    """Application configuration management"""

    def __init__(self, config_path: Optional[Path] = None):
        self.app_dir = Path(__file__).parent.parent.parent
        self.data_dir = self.app_dir / 'data'
        self.config_path = Path(config_path) if config_path else self.app_dir / 'config.json'

        load_dotenv()
        self._settings = self._load()

    def _load(self) -> Dict[str, Dict[str, Any]]:
        settings = {section: dict(values) for section, values in DEFAULTS.items()}
        if self.config_path.exists():
            with open(self.config_path, 'r') as f:
                stored = json.load(f)
            for section, values in stored.items():
                if section in settings and isinstance(values, dict):
                    settings[section].update(values)

        for env_name, (section, key) in ENV_OVERRIDES.items():
            raw = os.getenv(env_name)
            if raw:
                settings[section][key] = int(raw)

        level = os.getenv('LOG_LEVEL')
        if level:
            settings['logging']['level'] = level.upper()
        return settings

    @property
    def max_quandle_size(self) -> int:
        return self._settings['limits']['max_quandle_size']

    @property
    def max_group_size(self) -> int:
        return self._settings['limits']['max_group_size']

    @property
    def quandle_row_cap(self) -> int:
        return self._settings['enumeration']['quandle_row_cap']

    @property
    def group_coset_cap(self) -> int:
        return self._settings['enumeration']['group_coset_cap']

    @property
    def progress_interval(self) -> int:
        return self._settings['enumeration']['progress_interval']

    @property
    def lattice_budget(self) -> int:
        return self._settings['search']['lattice_budget']

    @property
    def seed(self) -> int:
        return self._settings['search']['seed']

    @property
    def jobs(self) -> int:
        return max(1, self._settings['search']['jobs'])

    @property
    def log_level(self) -> str:
        return self._settings['logging']['level']

    @property
    def reports_dir(self) -> str:
        """Get reports directory path"""
        reports_path = self.data_dir / 'reports'
        reports_path.mkdir(parents=True, exist_ok=True)
        return str(reports_path)

    def get_app_settings(self) -> Dict[str, Any]:
        """Get application settings"""
        return dict(self._settings['app'])

    def get_limits(self) -> Dict[str, Any]:
        """Get size limits for constructions"""
        return dict(self._settings['limits'])

    def get_enumeration_settings(self) -> Dict[str, Any]:
        """Get coset enumeration caps"""
        return dict(self._settings['enumeration'])

    def get_search_settings(self) -> Dict[str, Any]:
        """Get congruence / isomorphism search settings"""
        return dict(self._settings['search'])

    def override(self, **values: Any):
        """Replace individual keys for this run; None values are ignored"""
        for key, value in values.items():
            if value is None:
                continue
            if key == 'log_level':
                self._settings['logging']['level'] = str(value).upper()
                continue
            for section in self._settings.values():
                if key in section:
                    section[key] = value
                    break
            else:
                raise KeyError(f"unknown setting '{key}'")
