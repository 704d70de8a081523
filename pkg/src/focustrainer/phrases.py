"""Default utterance inventories.

These are data, not behavior: sessions may override any inventory through
the session configuration document. ``<NAME>`` is substituted with the
child's name at selection time.
"""

from __future__ import annotations

DEFAULT_PHRASES: dict[str, list[str]] = {
    "praise_immediate_start": [
        "Great, you started right away! A point for you.",
        "Nice quick start, <NAME>! Here is a point.",
    ],
    "praise": [
        "You're doing great. Another point for you.",
        "Well done, you are working with focus. One more point.",
        "You are staying on task, <NAME>. Another point!",
    ],
    "short_praise": [
        "Keep it up, <NAME>!",
        "Great focus, <NAME>!",
        "Nice work, <NAME>!",
    ],
    "praise_after_reattention": [
        "It's great that you're concentrating again!",
        "Good, you are back on task. A point for you!",
    ],
    "criticize": [
        "You are inattentive, try to concentrate on the tasks again!",
        "Please look back at your tasks, <NAME>. That costs a point.",
    ],
    "criticize_again": [
        "Unfortunately, you're still distracted.",
        "You are still not on task, <NAME>. Another point is gone.",
    ],
    "distraction": [
        "oh, look behind you",
        "hey, what was that noise?",
        "look, a bird outside!",
    ],
    "intro": [
        "Hi <NAME>! I am your training buddy.",
        "You will see math tasks on the left. Solve them and stay focused.",
        "You earn a point for working with concentration, and lose one when you are distracted. Let's start!",
    ],
    "break": [
        "Time for a short break, <NAME>. Relax for a moment.",
    ],
    "goodbye": [
        "That's it for today. You did well, <NAME>. Goodbye!",
    ],
}
