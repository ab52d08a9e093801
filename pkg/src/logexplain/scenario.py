"""Deterministic generator of desk-scale navigation log traces.

Five run profiles reproduce the shapes a waypoint-navigation stack emits:

* R1 - clean navigation, no obstacles
* R2 - small obstacles (centimeter-scale distance increases)
* R3 - large obstacles (meter-scale distance increases)
* R4 - a blocked route that forces replanning on one waypoint
* R5 - a blocked route where replanning fails; navigation aborts

Every message matches one of the templates in MESSAGE_PATTERNS, timestamps
increase strictly with seeded jitter, and the same (run, seed, options)
always yields a byte-identical corpus. High-rate planner chatter is modeled
as contiguous bursts of an identical controller message, which is exactly
what the ingest dedup filter exists to absorb.
"""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass, field

from .records import Level, LogCorpus, LogRecord

RUNS = ("R1", "R2", "R3", "R4", "R5")

MSG_LIST_RECEIVED = "A list of waypoints has been received"
MSG_WAITING = "Waiting for a new waypoint..."
MSG_COMPLETED = "All the waypoints received have been reached. Navigation task completed."
MSG_NOISE_PATH = "Passing new path to controller."
MSG_NOISE_GOAL = "Received a goal, begin computing control effort."
MSG_NOISE_GOAL_CHECKER = (
    "No goal checker was specified in parameter 'current_goal_checker'. "
    "Server will use only plugin loaded general_goal_checker. "
    "This warning will appear once."
)
MSG_PLAN_FAILED = "GridBased planning failed"
MSG_INVALID_PATH = "Invalid path, Path is empty"


def msg_waypoints_are(ids: list[int]) -> str:
    return "The waypoints received are: " + " ".join(str(i) for i in ids)


def msg_wp_received(w: int) -> str:
    return f"Waypoint with ID: {w} has been received"


def msg_navigating(w: int) -> str:
    return f"Navigating to the waypoint with ID:{w}"


def msg_in_progress(w: int) -> str:
    return f"Navigation to the waypoint with ID: {w} is in progress."


def msg_succeeded(w: int) -> str:
    return f"Navigation to the waypoint with ID: {w} has succeeded."


def msg_aborted(w: int) -> str:
    return f"Navigation to the waypoint with ID: {w} has aborted"


def msg_obstacle(w: int, a: float, b: float) -> str:
    return (
        f"Obstacle detected during navigation to waypoint with ID:{w} - "
        f"Distance to the point increased from: {a:.2f} meters to {b:.2f} meters"
    )


def msg_begin_nav(x1: float, y1: float, x2: float, y2: float) -> str:
    return (
        f"Begin navigating from current location ({x1:.2f}, {y1:.2f}) "
        f"to ({x2:.2f}, {y2:.2f})"
    )


MESSAGE_PATTERNS = [
    re.compile(p)
    for p in (
        r"^A list of waypoints has been received$",
        r"^The waypoints received are:( \d+)+$",
        r"^Waypoint with ID: \d+ has been received$",
        r"^Navigating to the waypoint with ID:\d+$",
        r"^Navigation to the waypoint with ID: \d+ is in progress\.$",
        r"^Navigation to the waypoint with ID: \d+ has succeeded\.$",
        r"^Navigation to the waypoint with ID: \d+ has aborted$",
        r"^Waiting for a new waypoint\.\.\.$",
        r"^All the waypoints received have been reached\. Navigation task completed\.$",
        r"^Obstacle detected during navigation to waypoint with ID:\d+ - "
        r"Distance to the point increased from: \d+\.\d{2} meters to \d+\.\d{2} meters$",
        r"^Passing new path to controller\.$",
        r"^Received a goal, begin computing control effort\.$",
        r"^No goal checker was specified in parameter 'current_goal_checker'\. "
        r"Server will use only plugin loaded general_goal_checker\. "
        r"This warning will appear once\.$",
        r"^Begin navigating from current location \(-?\d+\.\d{2}, -?\d+\.\d{2}\) "
        r"to \(-?\d+\.\d{2}, -?\d+\.\d{2}\)$",
        r"^GridBased planning failed$",
        r"^Invalid path, Path is empty$",
    )
]


def message_conforms(message: str) -> bool:
    return any(p.fullmatch(message) for p in MESSAGE_PATTERNS)


@dataclass(frozen=True)
class ScenarioSpec:
    run: str = "R1"
    waypoints: tuple[int, ...] = (9, 6, 7)
    seed: int = 0
    noise_repeat: int = 20
    base_timestamp: int = 1_700_000_000_000_000_000  # ns

    def __post_init__(self):
        if self.run not in RUNS:
            raise ValueError(f"run must be one of {RUNS}, got {self.run!r}")
        if not self.waypoints:
            raise ValueError("waypoints must be non-empty")
        if self.noise_repeat < 0:
            raise ValueError("noise_repeat must be >= 0")


class _Emitter:
    """Accumulates records with strictly increasing jittered timestamps."""

    def __init__(self, rng: random.Random, base_ts: int):
        self.rng = rng
        self.ts = base_ts
        self.records: list[LogRecord] = []

    def emit(self, message: str, source: str, level: Level = Level.INFO) -> None:
        self.records.append(
            LogRecord(
                timestamp=self.ts,
                message=message,
                source=source,
                level=level,
                seq=len(self.records) + 1,
            )
        )
        # 50-500 ms between records
        self.ts += int(self.rng.uniform(0.05, 0.5) * 1_000_000_000)


def generate(spec: ScenarioSpec) -> LogCorpus:
    """Produce the full log trace for one run."""
    rng = random.Random(f"{spec.run}:{spec.seed}")
    em = _Emitter(rng, spec.base_timestamp)
    wps = list(spec.waypoints)

    small: set[int] = set()  # waypoints with centimeter-scale obstacles
    large: set[int] = set()  # waypoints with meter-scale obstacles
    if spec.run == "R2":
        small.add(wps[-1])
    elif spec.run == "R3":
        large.update((wps[0], wps[-1]))
    elif spec.run == "R4":
        large.add(wps[len(wps) // 2])
    blocked = wps[len(wps) // 2] if spec.run == "R4" else None
    aborts_at = wps[0] if spec.run == "R5" else None

    def noise_burst():
        for _ in range(spec.noise_repeat):
            em.emit(MSG_NOISE_PATH, "planner_server")

    def begin_nav():
        coords = [rng.uniform(-35.0, 20.0) for _ in range(4)]
        em.emit(msg_begin_nav(*coords), "bt_navigator")

    def obstacle(w: int, meters: bool):
        a = rng.uniform(0.5, 3.0) if meters else rng.uniform(0.05, 0.5)
        b = a + (rng.uniform(1.0, 15.0) if meters else rng.uniform(0.05, 0.20))
        em.emit(msg_obstacle(w, a, b), "waypoint_navigation", Level.WARN)

    em.emit(MSG_NOISE_GOAL_CHECKER, "controller_server", Level.WARN)
    em.emit(MSG_LIST_RECEIVED, "waypoint_navigation")
    em.emit(msg_waypoints_are(wps), "waypoint_navigation")

    for w in wps:
        em.emit(msg_wp_received(w), "waypoint_navigation")
        em.emit(msg_navigating(w), "waypoint_navigation")
        begin_nav()
        noise_burst()
        em.emit(MSG_NOISE_GOAL, "controller_server")
        em.emit(msg_in_progress(w), "waypoint_navigation")

        if w == aborts_at:
            # replanning is not an option: the planner loops and gives up
            for _ in range(3):
                em.emit(MSG_PLAN_FAILED, "planner_server", Level.ERROR)
                em.emit(MSG_INVALID_PATH, "bt_navigator", Level.ERROR)
            em.emit(msg_aborted(w), "waypoint_navigation", Level.ERROR)
            em.emit(MSG_WAITING, "waypoint_navigation")
            return LogCorpus(
                records=em.records, session_id=f"{spec.run}-seed{spec.seed}"
            )

        if w in small:
            obstacle(w, meters=False)
        if w in large:
            obstacle(w, meters=True)
        if w == blocked:
            # route blockage: the first path dies, a replan succeeds
            em.emit(MSG_INVALID_PATH, "bt_navigator", Level.ERROR)
            em.emit(MSG_PLAN_FAILED, "planner_server", Level.ERROR)
            begin_nav()
            noise_burst()
            em.emit(MSG_NOISE_GOAL, "controller_server")
            obstacle(w, meters=True)

        em.emit(msg_succeeded(w), "waypoint_navigation")
        em.emit(MSG_WAITING, "waypoint_navigation")

    em.emit(MSG_COMPLETED, "waypoint_navigation")
    return LogCorpus(records=em.records, session_id=f"{spec.run}-seed{spec.seed}")


def replay(corpus: LogCorpus, engine, rate: float | str = "max") -> float:
    """Feed a corpus to an engine at the given rate; returns elapsed seconds.

    rate is records/second, or "max" for no pacing. Records are submitted in
    corpus order; draining is the engine's business.
    """
    if rate != "max" and (not isinstance(rate, (int, float)) or rate <= 0):
        raise ValueError(f"rate must be positive or 'max', got {rate!r}")
    start = time.perf_counter()
    for record in corpus:
        engine.ingest_record(record)
        if rate != "max":
            time.sleep(1.0 / float(rate))
    return time.perf_counter() - start
