"""The canonical evaluation questions asked after a navigation run.

UQ4 and UQ5 carry an ``ID X`` placeholder; which waypoint IDs get substituted
depends on the run profile (where obstacles and replanning actually happen).
"""

from __future__ import annotations

USER_QUESTIONS = (
    "How many waypoints were received during the navigation task?",
    "Which were the IDs of the waypoints received during the navigation task?",
    "Were all the waypoints received successfully reached?",
    "What happened during navigation to waypoint with ID X?",
    "Why was the route replanned during navigation to waypoint with ID X?",
    "Have any relevant events occurred during navigation?",
    "What is the task that the robot had to perform?",
    "Did the robot avoid any obstacles during the navigation?",
)

# Waypoint IDs substituted for "ID X", per run. R1-R4 probe both of the
# canonical IDs; R5 aborts at waypoint 9, so only that one is meaningful.
RUN_QUESTION_IDS = {
    "R1": (6, 9),
    "R2": (6, 9),
    "R3": (6, 9),
    "R4": (6, 9),
    "R5": (9,),
}


def instantiate_questions(run: str, questions: tuple[str, ...] = USER_QUESTIONS) -> list[str]:
    """Expand the question set for a run, one entry per ID variant."""
    ids = RUN_QUESTION_IDS.get(run, (9,))
    out: list[str] = []
    for q in questions:
        if "ID X" in q:
            out.extend(q.replace("ID X", f"ID {i}") for i in ids)
        else:
            out.append(q)
    return out
