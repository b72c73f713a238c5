import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from rich.console import Console
from rich.table import Table

from padic_ducci.dynamics.orbit import OrbitLimits

logger = logging.getLogger(__name__)

CONFIG_ENV = "PADIC_DUCCI_CONFIG"

# environment variable -> dotted key
ENV_OVERRIDES = {
    "PADIC_DUCCI_MAX_STEPS": "orbit.max_steps",
    "PADIC_DUCCI_MAX_STORED_STATES": "orbit.max_stored_states",
    "PADIC_DUCCI_DIVERGENCE_EXPONENT": "orbit.divergence_exponent",
    "PADIC_DUCCI_CONVERGENCE_EXPONENT": "orbit.convergence_exponent",
    "PADIC_DUCCI_MAX_ORDER": "spectral.max_order",
    "PADIC_DUCCI_WORKERS": "sweep.workers",
    "PADIC_DUCCI_TRACE_CAP": "output.trace_cap",
}


class ConfigManager:
    """Layered settings: defaults < settings.json < environment"""

    def __init__(self, config_file: Optional[Path] = None, use_env: bool = True):
        if config_file is None:
            load_dotenv()
            env_path = os.environ.get(CONFIG_ENV)
            config_file = Path(env_path) if env_path else Path.home() / ".padic_ducci" / "settings.json"
        self.config_file = Path(config_file)
        self.config_dir = self.config_file.parent
        self.use_env = use_env
        self._config: Dict[str, Any] = {}
        self.load_config()

    def ensure_config_dir(self):
        self.config_dir.mkdir(parents=True, exist_ok=True)

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from file, then apply environment overrides"""
        self._config = self.get_default_config()
        try:
            if self.config_file.exists():
                with open(self.config_file, "r", encoding="utf-8") as f:
                    _merge(self._config, json.load(f))
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("ignoring unreadable config %s: %s", self.config_file, e)

        if self.use_env:
            for var, key in ENV_OVERRIDES.items():
                raw = os.environ.get(var)
                if raw is None:
                    continue
                try:
                    self._set(key, int(raw))
                except ValueError:
                    logger.warning("ignoring %s=%r: not an integer", var, raw)
        return self._config

    def save_config(self) -> bool:
        try:
            self.ensure_config_dir()
            with open(self.config_file, "w", encoding="utf-8") as f:
                json.dump(self._config, f, indent=2)
            return True
        except OSError as e:
            logger.error("could not save config %s: %s", self.config_file, e)
            return False

    @staticmethod
    def get_default_config() -> Dict[str, Any]:
        return {
            "orbit": {
                "max_steps": OrbitLimits.max_steps,
                "max_stored_states": OrbitLimits.max_stored_states,
                "divergence_exponent": OrbitLimits.divergence_exponent,
                "convergence_exponent": OrbitLimits.convergence_exponent,
            },
            "spectral": {"max_order": 64},
            "sweep": {"workers": 1},
            "output": {"trace_cap": 1000},
            "version": "1.0.0",
        }

    def get(self, key: str, default: Any = None) -> Any:
        value = self._config
        try:
            for k in key.split("."):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def _set(self, key: str, value: Any):
        keys = key.split(".")
        config = self._config
        for k in keys[:-1]:
            config = config.setdefault(k, {})
        config[keys[-1]] = value

    def set(self, key: str, value: Any) -> bool:
        """Set a value and persist it"""
        self._set(key, value)
        return self.save_config()

    def orbit_limits(self, **overrides) -> OrbitLimits:
        """OrbitLimits from settings; explicit non-None overrides win"""
        values = {
            "max_steps": self.get("orbit.max_steps"),
            "max_stored_states": self.get("orbit.max_stored_states"),
            "divergence_exponent": self.get("orbit.divergence_exponent"),
            "convergence_exponent": self.get("orbit.convergence_exponent"),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return OrbitLimits(**values)

    def show_current_config(self, console: Console):
        table = Table(title="Current Configuration")
        table.add_column("Setting", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("Config file", str(self.config_file))
        for section in ("orbit", "spectral", "sweep", "output"):
            for name, value in self.get(section, {}).items():
                table.add_row(f"{section}.{name}", str(value))
        console.print(table)


def _merge(base: Dict[str, Any], extra: Dict[str, Any]):
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = copy.deepcopy(value)
