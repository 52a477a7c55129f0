"""
Scenario Loading
================

Resolves a --config argument to a ScenarioConfig. A path to an existing
file is read as JSON; otherwise the argument names a packaged scenario
under wavepath/scenarios.

Author: wavepath Team
Version: 1.0.0
"""

import json
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import pydantic

from shared.contracts.scenario import ScenarioConfig
from wavepath.errors import ConfigError, ParseError, ValidationError
from wavepath.logging import get_logger

logger = get_logger(__name__)

SCENARIO_PACKAGE = "wavepath.scenarios"


def packaged_scenarios() -> List[str]:
    """Names of the scenarios shipped with the package."""
    root = resources.files(SCENARIO_PACKAGE)
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _read_source(source: Union[str, Path]) -> Tuple[str, str]:
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8"), str(path)
    name = str(source)
    if name in packaged_scenarios():
        text = (resources.files(SCENARIO_PACKAGE) / f"{name}.json").read_text(encoding="utf-8")
        return text, f"{SCENARIO_PACKAGE}:{name}"
    raise ConfigError(
        f"config not found: {source}",
        {"source": str(source), "packaged": packaged_scenarios()},
    )


def _violations(exc: pydantic.ValidationError) -> List[Dict[str, Any]]:
    return [
        {"loc": ".".join(str(part) for part in err["loc"]) or "<root>",
         "msg": err["msg"],
         "type": err["type"]}
        for err in exc.errors()
    ]


def parse_config(data: Any, origin: str = "<memory>") -> ScenarioConfig:
    """
    Validate an already parsed mapping.

    Raises:
        ValidationError: with every schema violation listed
    """
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object",
                         {"source": origin, "key": "<root>", "found": type(data).__name__})
    try:
        return ScenarioConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        violations = _violations(exc)
        raise ValidationError(
            f"{len(violations)} validation error(s) in {origin}",
            {"source": origin, "violations": violations},
        ) from exc


def load_config(source: Union[str, Path]) -> ScenarioConfig:
    """
    Load and fully resolve a scenario.

    Args:
        source: Path to a JSON file or a packaged scenario name

    Raises:
        ConfigError: source not found
        ParseError: invalid JSON, with line and column
        ValidationError: schema violations
    """
    text, origin = _read_source(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON in {origin}: {exc.msg}",
            {"source": origin, "line": exc.lineno, "column": exc.colno},
        ) from exc
    config = parse_config(data, origin)
    logger.debug("config_loaded", source=origin, name=config.name, n_branches=len(config.branches))
    return config


def apply_overrides(config: ScenarioConfig, seed: Union[int, None] = None,
                    tolerance_scale: float = 1.0) -> ScenarioConfig:
    """Copy of config with the command-line seed and tolerance scale applied."""
    if not tolerance_scale > 0:
        raise ValidationError(
            "tolerance scale must be > 0",
            {"violations": [{"loc": "--tolerance-scale", "msg": "must be > 0",
                             "type": "greater_than"}]},
        )
    update: Dict[str, Any] = {"tolerances": config.tolerances.scaled(tolerance_scale)}
    if seed is not None:
        if not 0 <= seed < 2 ** 64:
            raise ValidationError(
                "seed must be an unsigned 64-bit integer",
                {"violations": [{"loc": "--seed", "msg": "out of range", "type": "range"}]},
            )
        update["seed"] = seed
    return config.model_copy(update=update)
