import json
import logging
from pathlib import Path
from typing import Any, Dict, List

logger = logging.getLogger(__name__)

FALLBACK_LOCALE = "en-US"


class I18nManager:
    """Translations for CLI diagnostics."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(I18nManager, cls).__new__(cls)
            cls._instance._init()
        return cls._instance

    def _init(self) -> None:
        self.locale = FALLBACK_LOCALE
        self.locales_dir = Path(__file__).parent.parent / "locales"
        self.strings: Dict[str, Dict[str, str]] = {}
        self._load_all()

    def _load_all(self) -> None:
        if not self.locales_dir.exists():
            logger.warning("locale directory %s is missing", self.locales_dir)
            return
        for file in sorted(self.locales_dir.glob("*.json")):
            try:
                self.strings[file.stem] = json.loads(file.read_text(encoding="utf-8"))
            except (OSError, ValueError) as e:
                logger.warning("failed to load locale %s: %s", file, e)

    def set_locale(self, locale: str) -> None:
        if locale not in self.strings:
            logger.info("unknown locale %r, falling back to %s", locale, FALLBACK_LOCALE)
        self.locale = locale

    def get_available_locales(self) -> List[str]:
        return sorted(self.strings.keys())

    def t(self, key: str, **kwargs: Any) -> str:
        """Translate key to current locale, fallback to en-US, then to the key itself."""
        if self.locale in self.strings and key in self.strings[self.locale]:
            text = self.strings[self.locale][key]
        elif FALLBACK_LOCALE in self.strings and key in self.strings[FALLBACK_LOCALE]:
            text = self.strings[FALLBACK_LOCALE][key]
        else:
            return key
        return text.format(**kwargs) if kwargs else text


i18n = I18nManager()
