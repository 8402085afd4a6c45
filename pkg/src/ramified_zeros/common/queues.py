"""
Implementations of the queues used by the searches.
"""

import heapq
import itertools
from typing import Any, Optional


class AbstractQueue:
    """
    An abstract queue class that defines the interface for all queue implementations
    """

    def __init__(self, starting_items: Optional[list] = None):
        self.queue = []

        if starting_items is not None:
            for item in starting_items:
                self.push(item)

    def push(self, item):
        """
        Adds an item to the queue
        """
        raise NotImplementedError

    def pop(self):
        """Removes and returns the first item in the queue"""
        raise NotImplementedError

    def peek(self):
        """Returns the first item in the queue without removing it"""
        raise NotImplementedError

    def is_empty(self):
        """Returns True if the queue is empty"""
        return len(self.queue) == 0

    def __len__(self):
        return len(self.queue)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({len(self.queue)} items)"

    def __str__(self) -> str:
        return self.__repr__()


class PriorityWrapper:
    """
    Stores an item with its priority. The higher the priority, the earlier
    the item is popped; equal priorities pop in insertion order.
    """

    def __init__(self, item: Any, priority: Any, order: int = 0):
        self.item = item
        self.priority = priority
        self.order = order

    def __lt__(self, other: "PriorityWrapper"):
        # heapq is a min-heap, so "less" means "pops first"
        if self.priority != other.priority:
            return self.priority > other.priority
        return self.order < other.order

    def __eq__(self, other):
        return self.priority == other.priority and self.order == other.order

    def __repr__(self) -> str:
        return f"PriorityWrapper({self.item!r}, {self.priority!r})"


class PriorityQueue(AbstractQueue):
    """
    A heap backed priority queue, highest priority first.
    """

    def __init__(self, starting_items: Optional[list] = None):
        self._counter = itertools.count()
        super().__init__(starting_items)

    def push(self, item: Any):
        """
        Args:
            item: A PriorityWrapper, an (item, priority) tuple, or a bare item
                with priority 0.
        """
        if isinstance(item, PriorityWrapper):
            payload, priority = item.item, item.priority
        elif isinstance(item, tuple):
            payload, priority = item[0], item[1]
        else:
            payload, priority = item, 0

        heapq.heappush(
            self.queue, PriorityWrapper(payload, priority, next(self._counter))
        )

    def pop(self):
        return heapq.heappop(self.queue).item

    def peek(self):
        return self.queue[0].item
