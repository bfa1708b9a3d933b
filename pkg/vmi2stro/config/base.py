# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Configuration files of "key = value" lines.

   Blank lines and lines starting with '#' are ignored. Values may reference
   ${env:NAME} and ${config_dir}. A parsed Config overrides fields of parameter
   dataclasses by name; a key may carry a section prefix ("sampling.kappa") when
   the same field name exists in more than one target.
"""

from typing import Optional, Dict, Any, TypeVar, Union, Tuple, List, overload

import dataclasses
import logging

from ..exceptions import ConfigError
from ..internal_types import ConfigValue
from ..util import full_type
from .context import ConfigContext

logger = logging.getLogger(__name__)

_T = TypeVar('_T')

_TRUE_LITERALS = ('true', 't', 'yes', 'y', '1', 'on')
_FALSE_LITERALS = ('false', 'f', 'no', 'n', '0', 'off')

class Config:
  _template_data: Dict[str, str]
  _data: Dict[str, str]
  _lines: Dict[str, int]
  _context: Optional[ConfigContext] = None

  def __init__(self):
    self._template_data = {}
    self._data = {}
    self._lines = {}

  def get_context(self) -> ConfigContext:
    result = self._context
    assert not result is None
    return result

  @property
  def config_file(self) -> Optional[str]:
    """The fully qualified pathname of the configuration file from which this Config
       originated, or None if not from a file"""
    if self._context is None:
      return None
    return self._context.config_file

  def keys(self) -> List[str]:
    return list(self._data.keys())

  def __contains__(self, key: object) -> bool:
    return key in self._data

  def __len__(self) -> int:
    return len(self._data)

  def render(self):
    ctx = self.get_context()
    self._data = { k: ctx.render_template_str(v) for k, v in self._template_data.items() }

  def loads(self, config_text: str, ctx: Optional[ConfigContext]=None) -> 'Config':
    if ctx is None:
      ctx = ConfigContext()
    template_data: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for lineno, raw_line in enumerate(config_text.splitlines(), start=1):
      line = raw_line.strip()
      if line == '' or line.startswith('#'):
        continue
      if not '=' in line:
        raise ConfigError(f"Config: line {lineno}: expected 'key = value', got '{line}'")
      key, value = line.split('=', 1)
      key = key.strip()
      value = value.strip()
      if key == '':
        raise ConfigError(f"Config: line {lineno}: empty key")
      if key in template_data:
        raise ConfigError(f"Config: line {lineno}: duplicate key '{key}' (first set on line {lines[key]})")
      template_data[key] = value
      lines[key] = lineno
    self._template_data = template_data
    self._lines = lines
    self._context = ctx.clone()
    self.render()
    return self

  def load_file(self, config_file: str, ctx: Optional[ConfigContext]=None) -> 'Config':
    if ctx is None:
      ctx = ConfigContext()
    ctx = ctx.push_config_file(config_file)
    try:
      with open(config_file, encoding='utf-8') as f:
        text = f.read()
    except OSError as ex:
      raise ConfigError(f"Config: cannot read '{config_file}': {ex}") from ex
    return self.loads(text, ctx)

  @classmethod
  def from_dict(cls, data: Dict[str, ConfigValue]) -> 'Config':
    text = "\n".join(f"{k} = {v}" for k, v in data.items())
    return cls().loads(text)

  _no_default = object()

  @overload
  def get_cfg_property(self, key: str, default: _T) -> Union[str, _T]: pass

  @overload
  def get_cfg_property(self, key: str) -> str: pass

  def get_cfg_property(self, key: str, default: Any=_no_default):
    result = self._data.get(key, default)
    if result is self._no_default:
      raise ConfigError(f"Config: Property {key} does not exist and has no default")
    return result

  def get_cfg_property_str(self, key: str, default: Any=_no_default) -> str:
    result = self.get_cfg_property(key, default)
    if not isinstance(result, str):
      raise ConfigError(f"Config: Expected property {key} to be str, got {full_type(result)}")
    return result

  def get_cfg_property_int(self, key: str, default: Any=_no_default) -> int:
    result = self.get_cfg_property(key, default)
    if isinstance(result, str):
      try:
        result = int(result)
      except ValueError:
        try:
          f = float(result)
        except ValueError:
          f = float('nan')
        if f.is_integer():
          result = int(f)
    if not isinstance(result, int) or isinstance(result, bool):
      raise ConfigError(f"Config: Expected property {key} to be int, got '{result}'")
    return result

  def get_cfg_property_float(self, key: str, default: Any=_no_default) -> float:
    result = self.get_cfg_property(key, default)
    if isinstance(result, str):
      try:
        result = float(result)
      except ValueError:
        pass
    if not isinstance(result, (int, float)) or isinstance(result, bool):
      raise ConfigError(f"Config: Expected property {key} to be float, got '{result}'")
    return float(result)

  def get_cfg_property_bool(self, key: str, default: Any=_no_default) -> bool:
    result = self.get_cfg_property(key, default)
    if isinstance(result, str):
      lowered = result.lower()
      if lowered in _TRUE_LITERALS:
        result = True
      elif lowered in _FALSE_LITERALS:
        result = False
    if not isinstance(result, bool):
      raise ConfigError(f"Config: Expected property {key} to be bool, got '{result}'")
    return result

  def get_cfg_property_floats(self, key: str, default: Any=_no_default) -> Tuple[float, ...]:
    """A comma-separated list of reals, e.g. "x0 = -5, -5" """
    result = self.get_cfg_property(key, default)
    if isinstance(result, str):
      try:
        return tuple(float(v) for v in result.split(',') if v.strip() != '')
      except ValueError as ex:
        raise ConfigError(f"Config: Expected property {key} to be a list of reals, got '{result}'") from ex
    return tuple(result)

  def _coerce(self, key: str, current: Any) -> Any:
    if isinstance(current, bool):
      return self.get_cfg_property_bool(key)
    if isinstance(current, int) and not isinstance(current, bool):
      return self.get_cfg_property_int(key)
    if isinstance(current, float):
      return self.get_cfg_property_float(key)
    if hasattr(current, 'parse') and callable(getattr(current, 'parse')):
      return type(current).parse(self.get_cfg_property_str(key))
    if current is None or isinstance(current, str):
      return self.get_cfg_property_str(key)
    raise ConfigError(f"Config: property {key} cannot be set from a config file")

  def apply_to(self, targets: Dict[str, Any], extra_keys: Tuple[str, ...]=()) -> Dict[str, Any]:
    """Overrides fields of the dataclass instances in targets.

    Args:
        targets: section name -> dataclass instance, e.g. {"solver": cfg, "sampling": cfg.sampling}
        extra_keys: keys that are valid but are not dataclass fields (returned to the caller)

    Raises:
        ConfigError: on an unknown key, an ambiguous unprefixed key, or a bad value

    Returns:
        Dict[str, Any]: targets with overridden copies, plus {"extra": {key: raw str}}
    """
    updated: Dict[str, Any] = dict(targets)
    changes: Dict[str, Dict[str, Any]] = { name: {} for name in targets }
    extra: Dict[str, str] = {}
    for key in self._data:
      if key in extra_keys:
        extra[key] = self._data[key]
        continue
      if '.' in key:
        section, field_name = key.split('.', 1)
        owners = [section] if section in targets and _has_field(targets[section], field_name) else []
      else:
        field_name = key
        owners = [name for name, target in targets.items() if _has_field(target, field_name)]
      if len(owners) == 0:
        raise ConfigError(f"Config: unknown key '{key}'" + _where(self._lines.get(key)))
      if len(owners) > 1:
        raise ConfigError(f"Config: key '{key}' is ambiguous; use one of " + ", ".join(f"'{o}.{field_name}'" for o in owners))
      owner = owners[0]
      changes[owner][field_name] = self._coerce(key, getattr(targets[owner], field_name))
    for name, fields in changes.items():
      if len(fields) > 0:
        logger.debug("Config: overriding %s fields %s", name, sorted(fields))
        updated[name] = dataclasses.replace(targets[name], **fields)
    updated["extra"] = extra
    return updated

def _has_field(target: Any, name: str) -> bool:
  return dataclasses.is_dataclass(target) and any(
      f.name == name and not dataclasses.is_dataclass(getattr(target, f.name)) for f in dataclasses.fields(target))

def _where(lineno: Optional[int]) -> str:
  return "" if lineno is None else f" on line {lineno}"
