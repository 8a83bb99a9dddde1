"""Dose timetables derived from medicine directives.

A directive "every I hours for D hours" expands to ceil(D / I) doses, the
first one at the start time, so all due times fall in [start, start + D).
Plans are values: acknowledging returns an updated plan. Delivery is pull
based; callers poll ``due_reminders``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from typing import Iterable

from .model import MedicineDirective


class UnknownDose(Exception):
    def __init__(self, medicine: str, sequence: int):
        self.medicine = medicine
        self.sequence = sequence
        super().__init__(f"no dose ({medicine!r}, {sequence}) in plan")


@dataclass(frozen=True)
class DoseEvent:
    medicine: str
    due: datetime
    sequence: int  # 1-based, contiguous per medicine
    acknowledged: bool = False


@dataclass(frozen=True)
class ReminderPlan:
    session_id: str
    doses: tuple[DoseEvent, ...]  # ascending by (due, medicine)


def build_plan(
    medicines: Iterable[MedicineDirective], start: datetime, session_id: str
) -> ReminderPlan:
    """Expand directives into a merged timetable sorted by (due, medicine name)."""
    doses: list[DoseEvent] = []
    for med in medicines:
        count = math.ceil(med.duration_hours / med.interval_hours)
        for k in range(count):
            doses.append(
                DoseEvent(
                    medicine=med.name,
                    due=start + timedelta(hours=k * med.interval_hours),
                    sequence=k + 1,
                )
            )
    doses.sort(key=lambda d: (d.due, d.medicine))
    return ReminderPlan(session_id=session_id, doses=tuple(doses))


def due_reminders(plan: ReminderPlan, now: datetime) -> list[DoseEvent]:
    """Unacknowledged doses that are due at *now*, in plan order. Pure query."""
    return [d for d in plan.doses if not d.acknowledged and d.due <= now]


def acknowledge(plan: ReminderPlan, medicine: str, sequence: int) -> ReminderPlan:
    """Mark one dose as taken; idempotent. Raises ``UnknownDose`` if absent."""
    for i, dose in enumerate(plan.doses):
        if dose.medicine == medicine and dose.sequence == sequence:
            if dose.acknowledged:
                return plan
            doses = plan.doses[:i] + (replace(dose, acknowledged=True),) + plan.doses[i + 1 :]
            return ReminderPlan(session_id=plan.session_id, doses=doses)
    raise UnknownDose(medicine, sequence)
