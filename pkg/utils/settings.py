"""
Настройки проверки: точность, лимиты, специализация, формат отчёта.

Файл JSON накладывается на DEFAULT_SETTINGS по секциям. Значение из
файла, тип которого не совпадает с типом значения по умолчанию,
отбрасывается с предупреждением.
"""
import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS: Dict[str, Any] = {
    "numeric": {
        "precision": 50,  # десятичные знаки
        "tolerance_exp": 30,  # допуск 1e-30
        "epsilon": "1e-3"
    },
    "check": {
        "max_terms": 10_000_000,
        "sketch_threshold": 200_000,
        "sketch_dimension": 6,
        "workers": 1
    },
    "specialize": {
        "trials": 3,
        "retries": 20,
        "height": 50
    },
    "report": {
        "format": "json"  # "json", "text", "markdown", "html"
    },
    "corpus": {
        "data_dir": None
    }
}


def _compatible(default: Any, value: Any) -> bool:
    if default is None or value is None:
        return True
    if isinstance(default, bool) or isinstance(value, bool):
        return isinstance(default, bool) and isinstance(value, bool)
    if isinstance(default, (int, float)):
        return isinstance(value, (int, float))
    return isinstance(value, type(default))


def merge_settings(target: Dict[str, Any], loaded: Dict[str, Any], prefix: str = "") -> None:
    """
    Рекурсивно накладывает loaded на target.

    Ключи, которых нет в target, добавляются как есть.
    """
    for key, value in loaded.items():
        name = f"{prefix}{key}"
        current = target.get(key)
        if isinstance(current, dict) and isinstance(value, dict):
            merge_settings(current, value, name + ".")
        elif key in target and not _compatible(current, value):
            logger.warning(f"Настройка {name}: ожидался {type(current).__name__}, "
                           f"получено {value!r}; оставлено {current!r}")
        else:
            target[key] = value


class Settings:
    """Настройки проверки с точечными ключами вида "numeric.precision"."""

    def __init__(self, config_file: str = "mpl_settings.json"):
        """
        Args:
            config_file: Путь к файлу настроек; отсутствующий файл не ошибка
        """
        self.config_file = config_file
        self.settings: Dict[str, Any] = copy.deepcopy(DEFAULT_SETTINGS)
        self.load()

    def load(self) -> None:
        path = Path(self.config_file)
        if not path.exists():
            logger.debug(f"Файл настроек {path} не найден, используются значения по умолчанию")
            return
        try:
            loaded = json.loads(path.read_text(encoding='utf-8'))
        except (OSError, ValueError) as e:
            logger.error(f"Ошибка при загрузке настроек {path}: {e}")
            return
        if not isinstance(loaded, dict):
            logger.error(f"Файл настроек {path} должен содержать объект JSON")
            return
        merge_settings(self.settings, loaded)
        logger.info(f"Настройки загружены из {path}")

    def get(self, key: str, default: Any = None) -> Any:
        """
        Значение по точечному ключу или default, если ключа нет.
        """
        value: Any = self.settings
        for part in key.split('.'):
            if not isinstance(value, dict) or part not in value:
                return default
            value = value[part]
        return value

    def section(self, name: str) -> Dict[str, Any]:
        """Копия секции настроек; пустой словарь для неизвестной секции."""
        value = self.settings.get(name)
        return dict(value) if isinstance(value, dict) else {}

