"""Subcomandos de la línea de comandos; cada módulo expone add_parser y run"""

from commands import ablation, estimate, evaluate, gate, motivate, sample, split, tune

COMMANDS = {
    "sample": sample,
    "estimate": estimate,
    "gate": gate,
    "evaluate": evaluate,
    "tune": tune,
    "ablation": ablation,
    "motivate": motivate,
    "split": split,
}
