class BoundsError(ValueError):
    """Raised when an a priori constant cannot be formed for the given inputs."""

    pass
