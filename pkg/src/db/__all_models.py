from .models.runs import Run
from .models.level_results import LevelResult
