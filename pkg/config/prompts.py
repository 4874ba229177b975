"""Plantillas de prompts zero-shot.

Cambiar un texto exige subir PROMPT_VERSION.
"""

PROMPT_VERSION = "zero-shot-v1"

LANGUAGE_NAMES = {
    "python": "Python",
    "java": "Java",
}

CODE_GENERATION_PROMPT = (
    "Write a {language_name} program that satisfies the following requirement.\n"
    "Reply with a single fenced code block (```{language}) and no explanation.\n\n"
    "Requirement:\n{requirement}\n"
)

SELF_ASK_CODE_PROMPT = (
    "Requirement:\n{requirement}\n\n"
    "Candidate {language_name} code:\n```{language}\n{code}\n```\n\n"
    "Is this code functionally correct for the requirement? Answer Yes or No.\nAnswer:"
)

SELF_ASK_REQUIREMENT_PROMPT = (
    "Requirement:\n{requirement}\n\n"
    "Can you write {language_name} code that correctly solves this requirement? Answer Yes or No.\nAnswer:"
)


def render(template: str, language: str, **values) -> str:
    return template.format(language=language, language_name=LANGUAGE_NAMES.get(language, language), **values)
