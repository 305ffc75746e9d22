import yaml
import logging
import os
from typing import Dict, Any, List, Optional

from cells.errors import ConfigError

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class ConfigManager:
    def __init__(self, workbench):
        self.workbench = workbench
        self.data = {}
        self.options: List[Dict[str, Any]] = []

        # 获取当前文件所在目录（cells/config.py）
        self.current_dir = os.path.dirname(os.path.abspath(__file__))
        self.manifest_path = os.path.join(self.current_dir, "..", "manifest.yaml")
        self.config_path = os.path.join(self.current_dir, "..", "config", "workbench.yaml")
        logger.debug(f"当前文件目录: {self.current_dir}")

    async def load_config(self, config_path: Optional[str] = None,
                          overrides: Optional[Dict[str, Any]] = None, completion: bool = True):
        """
        加载配置：manifest 默认值 < 配置文件 < 命令行参数
        :param config_path: 配置文件路径，缺省时使用 config/workbench.yaml
        :param overrides: 命令行覆盖项，值为 None 的项忽略
        :param completion: 是否补全默认值
        """
        try:
            self.options = self._load_manifest_options()
            defaults = {option["name"]: option.get("default") for option in self.options}

            # 显式指定的配置文件必须存在，默认配置文件可以缺省
            path = config_path or self.config_path
            user_data = self._load_local_config_file(path, required=config_path is not None)
            known = set(defaults)
            for key in user_data:
                if key not in known:
                    logger.warning(f"未知配置项 {key}，已忽略")
            user_data = {k: v for k, v in user_data.items() if k in known}

            cli_data = {k: v for k, v in (overrides or {}).items() if v is not None}
            self.data = {**defaults, **user_data, **cli_data}

            if completion:
                await self._complete_config()
            self._validate()

            logger.info(f"配置加载完成: keys={list(self.data.keys())}")
            return self.data

        except ConfigError:
            raise
        except Exception as e:
            logger.error(f"加载配置失败: {e}", exc_info=True)
            raise ConfigError(f"cannot load configuration: {e}") from e

    def _load_manifest_options(self) -> List[Dict[str, Any]]:
        manifest = self._load_local_config_file(self.manifest_path, required=True)
        options = manifest.get("spec", {}).get("config", [])
        for option in options:
            if option.get("type") not in ("integer", "string", "select"):
                raise ConfigError(f"option {option.get('name')} has unknown type {option.get('type')!r}")
        return options

    def _load_local_config_file(self, file_path: str, required: bool = True) -> Dict[str, Any]:
        """
        加载本地 YAML 文件
        :param file_path: 文件路径
        :param required: 文件不存在时是否报错
        :return: 配置数据
        """
        if not os.path.exists(file_path):
            if not required:
                logger.debug(f"配置文件不存在，使用默认值: {file_path}")
                return {}
            logger.error(f"文件不存在: {file_path}")
            raise ConfigError(f"configuration file not found: {file_path}")

        try:
            with open(file_path, "r", encoding="utf-8") as f:
                config_data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            logger.error(f"配置文件解析失败 {file_path}: {e}")
            raise ConfigError(f"cannot parse {file_path}: {e}") from e
        if config_data is None:
            config_data = {}
        if not isinstance(config_data, dict):
            raise ConfigError(f"{file_path} must contain a mapping")
        logger.debug(f"本地配置文件 {file_path} 加载成功")
        return config_data

    async def _complete_config(self):
        """
        完成配置，处理默认值
        """
        defaults = {
            "budget": 10 ** 8,
            "max_size": 1_000_000,
            "jobs": 1,
            "format": "text",
            "n_max": 3,
            "chunk_size": 1 << 20,
            "rho_reading": "prose",
            "property_cases": 10000,
            "seed": 20240101,
            "word_length": 5,
            "log_level": "WARNING",
        }

        for key, value in defaults.items():
            if self.data.get(key) is None:
                self.data[key] = value

    def _validate(self):
        for option in self.options:
            name = option["name"]
            value = self.data.get(name)
            kind = option["type"]
            if kind == "integer":
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(f"{name} must be an integer, got {value!r}")
                if value < option.get("minimum", 1):
                    raise ConfigError(f"{name} must be at least {option.get('minimum', 1)}, got {value}")
            elif kind == "select":
                choices = [choice["name"] for choice in option.get("options", [])]
                if value not in choices:
                    raise ConfigError(f"{name} must be one of {', '.join(choices)}, got {value!r}")
            elif not isinstance(value, str):
                raise ConfigError(f"{name} must be a string, got {value!r}")

    def get_config(self) -> Dict[str, Any]:
        """
        获取配置内容
        """
        return self.data

    def update_config(self, key: str, value: Any):
        """
        更新配置内容
        """
        self.data[key] = value
        logger.info(f"配置已更新: {key} = {value}")

    def get(self, key: str, default: Any = None) -> Any:
        """
        获取配置项，支持默认值
        """
        return self.data.get(key, default)
