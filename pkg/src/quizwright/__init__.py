"""quizwright: an adversarial trivia-authoring workbench.

A human drafts a pyramidal tossup while an IR-based machine player guesses,
buzzes, and annotates the draft in real time, so the author can rewrite
clues until the question defeats the machine.
"""

__version__ = "0.1.0"
