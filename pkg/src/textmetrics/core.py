class MetricError(Exception):
    pass

class InvalidOrder(MetricError, ValueError):
    pass

class NoReferences(MetricError, ValueError):
    pass

class EmptyText(MetricError, ValueError):
    pass
