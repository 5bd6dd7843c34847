"""Hidden tick-tack-toe world behind a five-lamp panel, and the agent
that learns to play it from nothing but its own step trace."""

__version__ = "0.1.0"
