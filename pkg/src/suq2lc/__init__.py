"""Exact symbolic engine for the 4D bicovariant calculi on SUq(2):
braiding, symmetrizer, torsionless connection, and the machine-checked
certificate of the unique-Levi-Civita-connection theorem."""

__version__ = "0.1.0"
