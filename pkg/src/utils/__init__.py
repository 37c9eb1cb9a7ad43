# Utils package
from .config import Config
from .timezone import TimezoneHandler

__all__ = ['Config', 'TimezoneHandler']
