"""Information-thermodynamics toolkit: no-cloning and discrimination checks,
a Maxwell-demon simulator with memory accounting, compression-based
algorithmic-information estimates, and the magic-membrane engine ledger."""

__version__ = "0.1.0"
