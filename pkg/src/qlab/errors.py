class QlabError(Exception):
    pass


class ParameterError(QlabError, ValueError):
    """Invalid parameter combination (CLI exit code 3)."""


class BudgetExceeded(QlabError):
    """A size ceiling was hit; ``counts`` records how far the computation got."""

    def __init__(self, message, **counts):
        self.counts = counts
        detail = ", ".join("%s=%s" % kv for kv in counts.items())
        super().__init__("budget exceeded: %s%s" % (message, " (%s)" % detail if detail else ""))
