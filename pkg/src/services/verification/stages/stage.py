import logging
import time
from abc import ABC, abstractmethod
from typing import Any


class Stage(ABC):
    """
    Abstract base class for verification stages.

    This class defines the interface for all stages of a verification run:
    - Maintains a reference to the context (the VerificationRun)
    - Runs its checks only when the run asked for them
    - Hands over to the next stage, or finishes the run after the last one

    Each concrete stage covers one CLI subcommand.
    """

    name: str = ""

    def __init__(self):
        super().__init__()
        self._logger = logging.getLogger(__name__)

    @property
    def context(self) -> Any:
        """
        Gets the context object that this stage operates on.
        """
        return self._context

    @context.setter
    def context(self, context: Any) -> None:
        self._context = context

    def process(self) -> None:
        if self.name in self.context.commands:
            started = time.perf_counter()
            self.execute()
            self.context.record_timing(self.name, time.perf_counter() - started)

        following = self.next_stage()
        if following is None:
            self.context.finish()
        else:
            self.context.transition_to(following, True)

    @abstractmethod
    def execute(self) -> None:
        """
        Runs the stage's checks and writes them into the context's report.
        """
        pass

    @abstractmethod
    def next_stage(self) -> "Stage | None":
        pass
