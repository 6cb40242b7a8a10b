# commands.py
# Registry of experiment commands exposed on the command line

from typing import Any, Callable, Dict

from . import experiments
from .errors import ValidationError


def get_commands():
    """The experiment commands, keyed by CLI name."""
    return {
        'shadows-vs-count': {
            'name': 'Shadows vs count',
            'description': 'Estimation error against shadow count for each thermal state source',
            'type': 'shadows',
            'func': experiments.shadows_vs_count,
        },
        'error-vs-size': {
            'name': 'Error vs size',
            'description': 'Worst observable error at the sampled budget across system sizes',
            'type': 'shadows',
            'func': experiments.error_vs_size,
        },
        'budget-sweep': {
            'name': 'Budget sweep',
            'description': 'Shadow budgets of the original and tight bounds across system sizes',
            'type': 'budget',
            'func': experiments.budget_sweep,
        },
        'polyfit-sweep': {
            'name': 'Polynomial degree sweep',
            'description': 'Smallest minimax degree meeting the error threshold for each beta',
            'type': 'polynomial',
            'func': experiments.polyfit_sweep,
        },
        'polyfit-grid': {
            'name': 'Polynomial error grid',
            'description': 'Minimax error for every beta and degree pair',
            'type': 'polynomial',
            'func': experiments.polyfit_grid,
        },
        'resources-sweep': {
            'name': 'Resource sweep',
            'description': 'Gate counts and depth of the QSP circuit per tag and target',
            'type': 'resources',
            'func': experiments.resources_sweep,
        },
        'ru-stats': {
            'name': 'Random unitary depth',
            'description': 'Depth histogram of lowered random Clifford circuits',
            'type': 'resources',
            'func': experiments.ru_stats,
        },
    }


class CommandRegistry:
    def __init__(self, commands: Dict[str, Dict[str, Any]]):
        self.commands = commands or {}

    def get(self, name) -> Callable:
        command = self.commands.get(name)
        if command is None:
            raise ValidationError(f"Command '{name}' not found.")
        return command['func']

    def invoke(self, name, config):
        return self.get(name)(config)

    def list_commands(self):
        return [{
            'name': name,
            'title': command['name'],
            'description': command['description'],
            'type': command['type'],
        } for name, command in self.commands.items()]


def get_command_registry():
    return CommandRegistry(get_commands())
