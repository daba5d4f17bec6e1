"""
Verification Progress Tracking

Records stage updates of long verification passes (axiom scans, sphericity
evidence, coatom ordering checks) and renders them as status lines on the
package logger.
"""

import logging
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict

logger = logging.getLogger(__name__)


class ProgressStatus(str, Enum):
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"
    SKIPPED = "skipped"


@dataclass
class ProgressUpdate:
    """Progress update from one verification stage"""
    component_id: str
    component_type: str  # "axiom", "check", "construction"
    status: ProgressStatus
    progress_percentage: float
    message: str
    timestamp: datetime
    metadata: Dict[str, Any] = field(default_factory=dict)


class ProgressTracker:
    """Tracks and displays verification progress; keeps the latest update per stage"""

    def __init__(self):
        self.component_status: Dict[str, ProgressUpdate] = {}
        self._lock = threading.Lock()

    def update(
        self,
        component_id: str,
        component_type: str,
        status: ProgressStatus,
        progress: float,
        message: str,
        metadata: Dict[str, Any] = None
    ) -> ProgressUpdate:
        """Record a progress update"""
        update = ProgressUpdate(
            component_id=component_id,
            component_type=component_type,
            status=status,
            progress_percentage=progress,
            message=message,
            timestamp=datetime.now(timezone.utc),
            metadata=metadata or {}
        )

        with self._lock:
            self.component_status[component_id] = update

        self._display_update(update)
        return update

    def _display_update(self, update: ProgressUpdate):
        emoji_map = {
            ProgressStatus.PENDING: "⏳",
            ProgressStatus.IN_PROGRESS: "🔄",
            ProgressStatus.COMPLETED: "✅",
            ProgressStatus.FAILED: "❌",
            ProgressStatus.SKIPPED: "⏭️"
        }

        emoji = emoji_map.get(update.status, "📊")

        bar_length = 20
        filled = int(bar_length * update.progress_percentage / 100)
        bar = "█" * filled + "░" * (bar_length - filled)

        line = f"{emoji} [{bar}] {update.progress_percentage:5.1f}% | {update.component_type.upper()}: {update.message}"
        if update.status == ProgressStatus.FAILED:
            logger.warning(line)
        else:
            logger.info(line)

    def get_overall_progress(self) -> float:
        """Average progress across all components"""
        with self._lock:
            latest = list(self.component_status.values())
        if not latest:
            return 0.0
        return sum(update.progress_percentage for update in latest) / len(latest)

    def get_status_summary(self) -> Dict[str, Any]:
        with self._lock:
            latest = dict(self.component_status)
        status_counts = {}
        for update in latest.values():
            status_counts[update.status.value] = status_counts.get(update.status.value, 0) + 1

        return {
            "overall_progress": sum(u.progress_percentage for u in latest.values()) / len(latest) if latest else 0.0,
            "total_components": len(latest),
            "status_breakdown": status_counts,
            "failed_components": [
                {
                    "id": comp_id,
                    "type": update.component_type,
                    "message": update.message
                }
                for comp_id, update in latest.items()
                if update.status == ProgressStatus.FAILED
            ]
        }

    def reset(self):
        with self._lock:
            self.component_status.clear()


# Global progress tracker instance
progress_tracker = ProgressTracker()
